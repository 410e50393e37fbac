"""Shadow diagrams as oriented 4-valent maps on the sphere.

A diagram is stored as its traversal code: the cyclic sequence of crossing
visits met while walking once around the curve, each visit tagged with a
marker saying how the other strand passes through that crossing.

``"R"``
    the other strand crosses from right to left, so its outgoing dart is the
    counterclockwise neighbour of our outgoing dart;
``"L"``
    the other strand crosses from left to right.

Everything else (darts, rotations, faces) is derived from the code.  With
``n = len(code)`` visits, edge ``i`` runs from visit ``i`` to visit
``(i + 1) % n``; dart ``2*i`` is its tail half-edge (leaving the crossing at
visit ``i``) and dart ``2*i + 1`` its head half-edge.  Faces are traced with
the face on the *left* of each dart, so the two faces bordering edge ``i`` are
the face of dart ``2*i`` (left side of the curve) and of dart ``2*i + 1``
(right side).

The crossingless diagram has an empty code.  For addressing purposes it still
owns one edge (the embedded circle) with darts ``0`` and ``1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    MarkerInconsistent,
    MovieSyntaxError,
    NonRealizable,
    NotDoubleOccurrence,
    NotSpherical,
    UnknownCrossing,
)

L, R = "L", "R"
MARKERS = (L, R)

Visit = tuple[int, str]
TraversalCode = tuple[Visit, ...]

CROSSINGLESS_FORM = "O"


def flip(marker: str) -> str:
    return R if marker == L else L


def _normalize_code(code: Iterable) -> TraversalCode:
    out = []
    for item in code:
        try:
            cid, marker = item
        except (TypeError, ValueError):
            raise NotDoubleOccurrence(f"malformed visit {item!r}") from None
        if marker not in MARKERS:
            raise MarkerInconsistent(f"unknown marker {marker!r}")
        out.append((int(cid), marker))
    return tuple(out)


@dataclass(frozen=True)
class ShadowDiagram:
    """An immutable shadow diagram.

    ``next_id`` is the identifier allocator carried along a movie; it never
    takes part in equality.
    """

    code: TraversalCode = ()
    next_id: int = field(default=0, compare=False)

    # -- basic counts -------------------------------------------------

    @property
    def is_crossingless(self) -> bool:
        return not self.code

    @property
    def n_visits(self) -> int:
        return len(self.code)

    @property
    def n_crossings(self) -> int:
        return len(self.code) // 2

    @property
    def n_edges(self) -> int:
        return len(self.code)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.n_crossings - self.n_edges + self.n_faces

    @cached_property
    def crossings(self) -> tuple[int, ...]:
        return tuple(sorted(self.positions))

    @cached_property
    def positions(self) -> dict[int, tuple[int, int]]:
        """Crossing id -> its two visit positions, in code order."""
        seen: dict[int, list[int]] = {}
        for pos, (cid, _) in enumerate(self.code):
            seen.setdefault(cid, []).append(pos)
        return {cid: (p[0], p[1]) for cid, p in seen.items()}

    # -- darts --------------------------------------------------------

    @property
    def n_darts(self) -> int:
        return 2 if self.is_crossingless else 2 * len(self.code)

    def out_dart(self, pos: int) -> int:
        return 2 * pos

    def in_dart(self, pos: int) -> int:
        return 2 * ((pos - 1) % len(self.code)) + 1

    def visit_of(self, dart: int) -> int:
        """Visit position at which ``dart`` is attached."""
        edge, head = divmod(dart, 2)
        return (edge + head) % len(self.code)

    def vertex_of(self, dart: int) -> int:
        return self.code[self.visit_of(dart)][0]

    def other_visit(self, pos: int) -> int:
        p, q = self.positions[self.code[pos][0]]
        return q if pos == p else p

    def rotation(self, cid: int) -> tuple[int, int, int, int]:
        """The four darts at ``cid`` in counterclockwise order.

        Starts at the outgoing dart of the first visit; positions 0/2 and 1/3
        are the two strand-passages.
        """
        try:
            p, q = self.positions[cid]
        except KeyError:
            raise UnknownCrossing(cid) from None
        op, ip = self.out_dart(p), self.in_dart(p)
        oq, iq = self.out_dart(q), self.in_dart(q)
        if self.code[p][1] == R:
            return (op, oq, ip, iq)
        return (op, iq, ip, oq)

    @cached_property
    def _sigma(self) -> tuple[list[int], list[int]]:
        n = self.n_darts
        succ = [0] * n
        pred = [0] * n
        if self.is_crossingless:
            return [0, 1], [0, 1]
        for cid in self.positions:
            rot = self.rotation(cid)
            for k in range(4):
                a, b = rot[k], rot[(k + 1) % 4]
                succ[a] = b
                pred[b] = a
        return succ, pred

    def ccw_next(self, dart: int) -> int:
        return self._sigma[0][dart]

    def face_step(self, dart: int) -> int:
        """Next dart along the boundary of the face on the left of ``dart``."""
        if self.is_crossingless:
            return dart
        return self._sigma[1][dart ^ 1]

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Face boundaries as dart cycles, each starting at its minimum dart."""
        seen = [False] * self.n_darts
        faces = []
        for start in range(self.n_darts):
            if seen[start]:
                continue
            cycle = []
            d = start
            while not seen[d]:
                seen[d] = True
                cycle.append(d)
                d = self.face_step(d)
            faces.append(tuple(cycle))
        return tuple(faces)

    @cached_property
    def face_index(self) -> list[int]:
        index = [0] * self.n_darts
        for k, face in enumerate(self.faces):
            for d in face:
                index[d] = k
        return index

    def face_of(self, dart: int) -> tuple[int, ...]:
        return self.faces[self.face_index[dart]]

    def face_corners(self, face: Sequence[int]) -> tuple[int, ...]:
        """Crossing at the end of each boundary edge of ``face``."""
        return tuple(self.vertex_of(d ^ 1) for d in face)

    # -- conversions --------------------------------------------------

    def with_code(self, code: Iterable[Visit], next_id: int | None = None) -> "ShadowDiagram":
        return ShadowDiagram(tuple(code), self.next_id if next_id is None else next_id)

    def __str__(self) -> str:
        return format_code(self.code)


# -- edge/side addressing ---------------------------------------------------

def dart_side(dart: int) -> tuple[int, str]:
    """(edge, side) of the curve whose face is on the left of ``dart``."""
    return dart // 2, (L if dart % 2 == 0 else R)


def side_dart(edge: int, side: str) -> int:
    return 2 * edge + (0 if side == L else 1)


# -- construction -----------------------------------------------------------

def _check_structure(code: TraversalCode) -> None:
    counts: dict[int, list[str]] = {}
    for cid, marker in code:
        counts.setdefault(cid, []).append(marker)
    for cid, markers in counts.items():
        if len(markers) != 2:
            raise NotDoubleOccurrence(f"crossing {cid} occurs {len(markers)} times")
        if markers[0] == markers[1]:
            raise MarkerInconsistent(f"crossing {cid} has markers {markers[0]}/{markers[1]}")


def from_traversal_code(code: Iterable, next_id: int | None = None) -> ShadowDiagram:
    """Build a diagram from its traversal code, checking it lies on the sphere."""
    code = _normalize_code(code)
    _check_structure(code)
    if next_id is None:
        next_id = max((c for c, _ in code), default=-1) + 1
    d = ShadowDiagram(code, next_id)
    if d.euler_characteristic != 2:
        raise NotSpherical(
            f"V={d.n_crossings} E={d.n_edges} F={d.n_faces} gives chi={d.euler_characteristic}"
        )
    return d


def crossingless(next_id: int = 0) -> ShadowDiagram:
    return ShadowDiagram((), next_id)


def _interlacement_parity_ok(word: Sequence[int]) -> bool:
    """Gauss's necessary condition: every chord meets an even number of others."""
    pos: dict[int, list[int]] = {}
    for i, c in enumerate(word):
        pos.setdefault(c, []).append(i)
    for c, (a, b) in pos.items():
        inside = word[a + 1:b]
        odd = {x for x in inside if inside.count(x) == 1}
        if len(odd) % 2:
            return False
    return True


def from_gauss_word(word: Iterable[int] | str) -> ShadowDiagram:
    """Lexicographically first spherical realization of a Gauss word.

    Markers are chosen per crossing in order of first appearance, ``L`` before
    ``R``; the first visit gets the chosen marker and the second its opposite.
    """
    if isinstance(word, str):
        word = word.split()
    word = [int(w) for w in word]
    counts: dict[int, int] = {}
    for c in word:
        counts[c] = counts.get(c, 0) + 1
    bad = [c for c, k in counts.items() if k != 2]
    if bad:
        raise NotDoubleOccurrence(f"crossings {bad} do not occur exactly twice")
    if not word:
        return crossingless()
    if not _interlacement_parity_ok(word):
        raise NonRealizable("some chord interlaces an odd number of chords")
    order = list(dict.fromkeys(word))
    for choice in itertools.product(MARKERS, repeat=len(order)):
        first = dict(zip(order, choice))
        seen: set[int] = set()
        code = []
        for c in word:
            code.append((c, first[c] if c not in seen else flip(first[c])))
            seen.add(c)
        d = ShadowDiagram(tuple(code), max(order) + 1)
        if d.euler_characteristic == 2:
            return d
    raise NonRealizable("no marker assignment embeds the word in the sphere")


# -- queries ----------------------------------------------------------------

def trace_faces(d: ShadowDiagram) -> list[tuple[int, ...]]:
    return list(d.faces)


def local_frame_sign(d: ShadowDiagram, c: int, over: int) -> int:
    """Sign of crossing ``c`` when the passage through visit ``over`` is on top.

    +1 iff the outgoing under-dart immediately follows the outgoing over-dart
    counterclockwise.
    """
    if c not in d.positions:
        raise UnknownCrossing(c)
    p, q = d.positions[c]
    if over not in (p, q):
        raise ValueError(f"visit {over} is not a passage of crossing {c}")
    under = q if over == p else p
    return 1 if d.ccw_next(d.out_dart(over)) == d.out_dart(under) else -1


def over_visit(d: ShadowDiagram, c: int, sign: int) -> int:
    """Visit position that is the over-passage of ``c`` under the given sign."""
    p, q = d.positions[c]
    return p if local_frame_sign(d, c, p) == sign else q


def reverse_orientation(d: ShadowDiagram) -> ShadowDiagram:
    """Same curve traversed backwards; markers keep their visits."""
    return ShadowDiagram(tuple(reversed(d.code)), d.next_id)


def reverse_dart(d: ShadowDiagram, dart: int) -> int:
    """Image of ``dart`` (same half-edge) in ``reverse_orientation(d)``."""
    if d.is_crossingless:
        return dart ^ 1
    n = len(d.code)
    edge, head = divmod(dart, 2)
    return 2 * ((n - 2 - edge) % n) + (1 - head)


def reverse_visit(d: ShadowDiagram, pos: int) -> int:
    return len(d.code) - 1 - pos


def relabel(d: ShadowDiagram, mapping: dict[int, int]) -> ShadowDiagram:
    code = tuple((mapping.get(c, c), m) for c, m in d.code)
    return ShadowDiagram(code, max(d.next_id, max((c for c, _ in code), default=-1) + 1))


def rotate(d: ShadowDiagram, shift: int) -> ShadowDiagram:
    """Same diagram with the traversal started ``shift`` visits later."""
    if d.is_crossingless:
        return d
    shift %= len(d.code)
    return ShadowDiagram(d.code[shift:] + d.code[:shift], d.next_id)


def _relabeled_tokens(code: TraversalCode, shift: int) -> list[str]:
    n = len(code)
    names: dict[int, int] = {}
    out = []
    for k in range(n):
        c, m = code[(shift + k) % n]
        if c not in names:
            names[c] = len(names)
        out.append(f"{names[c]}{m}")
    return out


def canonical_form(d: ShadowDiagram) -> str:
    """Label equal for exactly the diagrams isomorphic as oriented maps with oriented curve."""
    if d.is_crossingless:
        return CROSSINGLESS_FORM
    best = min(_relabeled_tokens(d.code, s) for s in range(len(d.code)))
    return " ".join(best)


def isomorphisms(a: ShadowDiagram, b: ShadowDiagram, fixed: dict[int, int] | None = None):
    """Yield crossing bijections carrying ``a`` onto ``b`` (up to start point)."""
    if len(a.code) != len(b.code):
        return
    if a.is_crossingless:
        yield {}
        return
    n = len(a.code)
    for shift in range(n):
        mapping = dict(fixed or {})
        ok = True
        for k in range(n):
            ca, ma = a.code[k]
            cb, mb = b.code[(shift + k) % n]
            if ma != mb or mapping.setdefault(ca, cb) != cb:
                ok = False
                break
        if ok and len(set(mapping.values())) == len(mapping):
            yield mapping


def find_shift(a: ShadowDiagram, b: ShadowDiagram, ids: dict | None = None) -> int | None:
    """Shift ``s`` with ``b.code[k + s]`` equal to ``a.code[k]`` renamed by ``ids``."""
    if len(a.code) != len(b.code):
        return None
    if a.is_crossingless:
        return 0
    ids = ids or {}
    want = [(ids.get(c, c), m) for c, m in a.code]
    n = len(want)
    for s in range(n):
        if all(b.code[(k + s) % n] == want[k] for k in range(n)):
            return s
    return None


# -- text format ------------------------------------------------------------

def format_code(code: Iterable[Visit]) -> str:
    return " ".join(f"{c}{m}" for c, m in code)


def parse_code(text: str, line: int | None = None) -> TraversalCode:
    out = []
    for tok in text.split():
        if len(tok) < 2 or tok[-1] not in MARKERS or not tok[:-1].isdigit():
            raise MovieSyntaxError(f"bad visit token {tok!r}", line)
        out.append((int(tok[:-1]), tok[-1]))
    return tuple(out)


DIAGRAM_HEADER = "SHADOW v1"


def format_diagram(d: ShadowDiagram) -> str:
    body = format_code(d.code)
    return f"{DIAGRAM_HEADER}\ncode:{' ' + body if body else ''}\n"


def parse_diagram_lines(lines: Sequence[str], first_line: int = 1) -> ShadowDiagram:
    if len(lines) < 2 or lines[0].strip() != DIAGRAM_HEADER:
        raise MovieSyntaxError(f"expected {DIAGRAM_HEADER!r} header", first_line)
    tag, _, rest = lines[1].strip().partition(":")
    if tag != "code":
        raise MovieSyntaxError("expected 'code:' record", first_line + 1)
    code = parse_code(rest, first_line + 1)
    try:
        return from_traversal_code(code)
    except MovieSyntaxError:
        raise
    except (NotDoubleOccurrence, MarkerInconsistent, NotSpherical) as exc:
        raise MovieSyntaxError(f"{type(exc).__name__}: {exc}", first_line + 1) from exc


def parse_diagram(text: str) -> ShadowDiagram:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 2:
        raise MovieSyntaxError(f"diagram text needs exactly 2 records, got {len(lines)}")
    return parse_diagram_lines(lines)
