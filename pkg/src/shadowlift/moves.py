"""Shadow Reidemeister moves as local rewrites of the traversal code.

Sites address the diagram *before* the move:

===========  ===========================================================
R1+          ``(dart, side)``: forward dart ``2*e`` of edge ``e``; the kink
             protrudes into the face on ``side`` of the edge.
R1-          ``(ear,)``: crossing id of a monogon.
R2+          ``(a, side_a, b, side_b)``: forward darts of two edges whose
             ``side_a`` / ``side_b`` faces coincide; ``(a, side_a) <= (b, side_b)``.
R2-          ``(bigon,)``: canonical (minimum) dart of a bigon face.
R3           ``(tri,)``: canonical dart of a triangular face.
EARROLL      ``(ear, direction)`` with direction ``fwd`` or ``bwd``.
0S2          ``()``; the identity on the sphere.
===========  ===========================================================
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .diagram import (
    L,
    R,
    ShadowDiagram,
    canonical_form,
    dart_side,
    flip,
    reverse_dart,
    reverse_orientation,
    side_dart,
)
from .errors import DegenerateTriangle, InvalidSite, NotABigon, NotAnEar, NotATriangle

FWD, BWD = "fwd", "bwd"


class MoveKind(str, Enum):
    R1_CREATE = "R1+"
    R1_REMOVE = "R1-"
    R2_CREATE = "R2+"
    R2_REMOVE = "R2-"
    R3 = "R3"
    EAR_ROLL = "EARROLL"
    DETOUR_0S2 = "0S2"

    def __str__(self) -> str:
        return self.value


_KIND_ORDER = {k: i for i, k in enumerate(MoveKind)}


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    site: tuple = ()

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.site)

    def __str__(self) -> str:
        return format_move(self)


@dataclass(frozen=True)
class MoveTrace:
    """Identifier bookkeeping for one applied move.

    ``corners``/``strands`` describe the triangle of an R3 (corner crossings
    in face order and the edge of the pre-move diagram each strand runs
    along) or the bigon of an R2.
    """

    kind: MoveKind
    born: tuple[int, ...] = ()
    died: tuple[int, ...] = ()
    corners: tuple[int, ...] = ()
    strands: tuple[int, ...] = ()
    alive_before: frozenset[int] = field(default_factory=frozenset)

    @property
    def survived(self) -> dict[int, int]:
        return {c: c for c in sorted(self.alive_before) if c not in self.died}


# -- site helpers ---------------------------------------------------------

def ears(d: ShadowDiagram) -> dict[int, int]:
    """Ear crossing -> position of its first visit (the two visits are adjacent)."""
    n = len(d.code)
    out = {}
    for cid, (p, q) in d.positions.items():
        if q == p + 1:
            out[cid] = p
        elif p == 0 and q == n - 1:
            out[cid] = q
    return out


def _distinct_corner_face(d: ShadowDiagram, dart: int, size: int):
    if not 0 <= dart < d.n_darts or d.is_crossingless:
        return None
    face = d.face_of(dart)
    if len(face) != size:
        return None
    corners = d.face_corners(face)
    if len(set(corners)) != size:
        return None
    return face, corners


def _roll_neighbour(d: ShadowDiagram, ear: int, direction: str):
    """Position of the visit the ear rolls past, or None."""
    first = ears(d).get(ear)
    if first is None or len(d.code) < 4:
        return None
    n = len(d.code)
    pos = (first + 2) % n if direction == FWD else (first - 1) % n
    if d.code[pos][0] == ear:
        return None
    return pos


def enumerate_moves(d: ShadowDiagram, kinds=None) -> list[Move]:
    """Every applicable site, sorted by kind then site.

    ``kinds`` restricts the result to the given move kinds.
    """
    want = set(MoveKind) if kinds is None else {MoveKind(k) for k in kinds}
    moves: list[Move] = []
    if MoveKind.R1_CREATE in want:
        for e in range(max(1, len(d.code))):
            for side in (L, R):
                moves.append(Move(MoveKind.R1_CREATE, (2 * e, side)))
    if MoveKind.R1_REMOVE in want:
        for cid in sorted(ears(d)):
            moves.append(Move(MoveKind.R1_REMOVE, (cid,)))
    if MoveKind.R2_CREATE in want:
        for face in d.faces:
            items = sorted(dart_side(x) for x in face)
            for (ea, sa), (eb, sb) in itertools.combinations_with_replacement(items, 2):
                if ea == eb and sa != sb:
                    continue
                moves.append(Move(MoveKind.R2_CREATE, (2 * ea, sa, 2 * eb, sb)))
    if want & {MoveKind.R2_REMOVE, MoveKind.R3}:
        for face in d.faces:
            if MoveKind.R2_REMOVE in want and _distinct_corner_face(d, face[0], 2):
                moves.append(Move(MoveKind.R2_REMOVE, (face[0],)))
            elif MoveKind.R3 in want and _distinct_corner_face(d, face[0], 3):
                moves.append(Move(MoveKind.R3, (face[0],)))
    if MoveKind.EAR_ROLL in want:
        for cid in sorted(ears(d)):
            for direction in (FWD, BWD):
                if _roll_neighbour(d, cid, direction) is not None:
                    moves.append(Move(MoveKind.EAR_ROLL, (cid, direction)))
    moves.sort(key=Move.sort_key)
    return moves


# -- rewriting ------------------------------------------------------------

def _edge_count(d: ShadowDiagram) -> int:
    return max(1, len(d.code))


def _check_forward_dart(d: ShadowDiagram, dart, side) -> int:
    if not isinstance(dart, int) or dart % 2 or not 0 <= dart // 2 < _edge_count(d):
        raise InvalidSite(f"{dart!r} is not a forward dart")
    if side not in (L, R):
        raise InvalidSite(f"bad side {side!r}")
    return dart // 2


def _insert(code, inserts: dict[int, list]) -> tuple:
    """Insert visit lists after the given positions (edges)."""
    if not code:
        return tuple(inserts.get(0, []))
    out = []
    for pos, visit in enumerate(code):
        out.append(visit)
        out.extend(inserts.get(pos, []))
    return tuple(out)


def _r1_create(d, site):
    dart, side = site
    e = _check_forward_dart(d, dart, side)
    x = d.next_id
    code = _insert(d.code, {e: [(x, side), (x, flip(side))]})
    return d.with_code(code, x + 1), MoveTrace(MoveKind.R1_CREATE, born=(x,))


def _r1_remove(d, site):
    (ear,) = site
    if ear not in ears(d):
        raise NotAnEar(f"crossing {ear!r} is not an ear")
    code = tuple(v for v in d.code if v[0] != ear)
    return d.with_code(code), MoveTrace(MoveKind.R1_REMOVE, died=(ear,))


def r2_create_code(code, ea, sa, eb, sb, p, q):
    """Code after pushing edge ``ea`` across edge ``eb`` through their shared face.

    The finger from ``ea`` crosses ``eb`` first at ``p`` then at ``q``.  Along
    ``eb`` the order is kept when the two edges see the face on different
    sides and reversed otherwise.
    """
    mp = R if sb == L else L
    finger = [(p, mp), (q, flip(mp))]
    target = [(p, flip(mp)), (q, mp)]
    if sa == sb:
        target.reverse()
    if ea == eb:
        return _insert(code, {ea: finger + target})
    return _insert(code, {ea: finger, eb: target})


def _r2_create(d, site):
    try:
        a, sa, b, sb = site
    except (TypeError, ValueError):
        raise InvalidSite(f"bad R2+ site {site!r}") from None
    ea = _check_forward_dart(d, a, sa)
    eb = _check_forward_dart(d, b, sb)
    if (ea, sa) > (eb, sb):
        raise InvalidSite("R2+ site must list the smaller edge first")
    if ea == eb and sa != sb:
        raise InvalidSite("an edge cannot be pushed across its own other side")
    if d.face_index[side_dart(ea, sa)] != d.face_index[side_dart(eb, sb)]:
        raise InvalidSite("the two edge sides do not share a face")
    p, q = d.next_id, d.next_id + 1
    code = r2_create_code(d.code, ea, sa, eb, sb, p, q)
    trace = MoveTrace(MoveKind.R2_CREATE, born=(p, q), corners=(p, q), strands=(ea, eb))
    return d.with_code(code, q + 1), trace


def _face_edges_visits(d, face):
    n = len(d.code)
    edges = tuple(x // 2 for x in face)
    visits = [v for e in edges for v in (e, (e + 1) % n)]
    return edges, visits


def _r2_remove(d, site):
    (dart,) = site
    found = _distinct_corner_face(d, dart, 2)
    if not found:
        raise NotABigon(f"dart {dart!r} does not bound a bigon with distinct corners")
    face, corners = found
    edges, visits = _face_edges_visits(d, face)
    if len(set(visits)) != 4:
        raise NotABigon("bigon edges share a visit")
    drop = set(visits)
    code = tuple(v for i, v in enumerate(d.code) if i not in drop)
    return d.with_code(code), MoveTrace(
        MoveKind.R2_REMOVE, died=tuple(sorted(corners)), corners=corners, strands=edges
    )


def _r3(d, site):
    (dart,) = site
    if d.is_crossingless or not 0 <= dart < d.n_darts or len(d.face_of(dart)) != 3:
        raise NotATriangle(f"dart {dart!r} does not bound a triangle")
    found = _distinct_corner_face(d, dart, 3)
    if not found:
        raise DegenerateTriangle("triangle corners are not three distinct crossings")
    face, corners = found
    edges, visits = _face_edges_visits(d, face)
    if len(set(visits)) != 6:
        raise DegenerateTriangle("triangle strands are not distinct passages")
    code = list(d.code)
    for e in edges:
        i, j = e, (e + 1) % len(code)
        code[i], code[j] = code[j], code[i]
    return d.with_code(code), MoveTrace(MoveKind.R3, corners=corners, strands=edges)


def _ear_roll(d, site):
    try:
        ear, direction = site
    except (TypeError, ValueError):
        raise InvalidSite(f"bad EARROLL site {site!r}") from None
    if direction not in (FWD, BWD):
        raise InvalidSite(f"bad direction {direction!r}")
    if ear not in ears(d):
        raise NotAnEar(f"crossing {ear!r} is not an ear")
    pos = _roll_neighbour(d, ear, direction)
    if pos is None:
        raise InvalidSite(f"ear {ear} has no crossing to roll past")
    n = len(d.code)
    first = ears(d)[ear]
    x1, x2, y = d.code[first], d.code[(first + 1) % n], d.code[pos]
    code = list(d.code)
    if direction == FWD:
        slots, values = (first, first + 1, first + 2), (y, x1, x2)
    else:
        slots, values = (first - 1, first, first + 1), (x1, x2, y)
    for s, v in zip(slots, values):
        code[s % n] = v
    return d.with_code(code), MoveTrace(MoveKind.EAR_ROLL)


_APPLY = {
    MoveKind.R1_CREATE: _r1_create,
    MoveKind.R1_REMOVE: _r1_remove,
    MoveKind.R2_CREATE: _r2_create,
    MoveKind.R2_REMOVE: _r2_remove,
    MoveKind.R3: _r3,
    MoveKind.EAR_ROLL: _ear_roll,
    MoveKind.DETOUR_0S2: lambda d, site: (d, MoveTrace(MoveKind.DETOUR_0S2)),
}


def apply_move(d: ShadowDiagram, m: Move) -> tuple[ShadowDiagram, MoveTrace]:
    """Apply ``m`` to ``d``; raises an :class:`InvalidSite` subclass on bad sites."""
    kind = MoveKind(m.kind)
    try:
        new, trace = _APPLY[kind](d, tuple(m.site))
    except (TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, InvalidSite):
            raise
        raise InvalidSite(f"{kind.value} site {m.site!r}: {exc}") from exc
    return new, MoveTrace(
        trace.kind, trace.born, trace.died, trace.corners, trace.strands, frozenset(d.positions)
    )


# -- inverses and macro expansion -----------------------------------------

def inverse_move(d: ShadowDiagram, m: Move) -> Move:
    """A move on ``apply_move(d, m)[0]`` that restores ``canonical_form(d)``."""
    after, trace = apply_move(d, m)
    kind = m.kind
    if kind == MoveKind.R1_CREATE:
        return Move(MoveKind.R1_REMOVE, trace.born)
    if kind == MoveKind.R2_CREATE:
        for face in after.faces:
            if len(face) == 2 and set(after.face_corners(face)) == set(trace.born):
                return Move(MoveKind.R2_REMOVE, (face[0],))
    if kind == MoveKind.R3:
        edges = set(trace.strands)
        for face in after.faces:
            if len(face) == 3 and {x // 2 for x in face} == edges:
                return Move(MoveKind.R3, (face[0],))
    if kind == MoveKind.EAR_ROLL:
        ear, direction = m.site
        return Move(MoveKind.EAR_ROLL, (ear, BWD if direction == FWD else FWD))
    if kind == MoveKind.DETOUR_0S2:
        return m
    if kind in (MoveKind.R1_REMOVE, MoveKind.R2_REMOVE):
        target = canonical_form(d)
        want = MoveKind.R1_CREATE if kind == MoveKind.R1_REMOVE else MoveKind.R2_CREATE
        for cand in enumerate_moves(after):
            if cand.kind == want and canonical_form(apply_move(after, cand)[0]) == target:
                return cand
    raise InvalidSite(f"no inverse found for {m}")


def expand_ear_roll(d: ShadowDiagram, m: Move) -> list[Move]:
    """Primitive ``[R2+, R3, R2-]`` sequence realising an ear-roll.

    The ear's strand neighbour is pushed through the ear loop, slid across the
    ear crossing, and the resulting bigon with the old crossing is removed.
    The crossing rolled past is replaced by one of the R2+ crossings; the ear
    keeps its id.
    """
    if m.kind != MoveKind.EAR_ROLL:
        raise InvalidSite("not an EARROLL move")
    target_diagram, _ = apply_move(d, m)
    target = canonical_form(target_diagram)
    ear, direction = m.site
    n = len(d.code)
    first = ears(d)[ear]
    loop_edge = first
    pos = _roll_neighbour(d, ear, direction)
    rolled = d.code[pos][0]
    other = d.other_visit(pos)
    t_edges = {(other - 1) % n, other}
    for cand in enumerate_moves(d):
        if cand.kind != MoveKind.R2_CREATE:
            continue
        a, _, b, _ = cand.site
        if {a // 2, b // 2} not in ({loop_edge, t} for t in t_edges):
            continue
        d1, tr1 = apply_move(d, cand)
        for tri in enumerate_moves(d1):
            if tri.kind != MoveKind.R3:
                continue
            corners = set(d1.face_corners(d1.face_of(tri.site[0])))
            if not ({ear, rolled} <= corners and corners & set(tr1.born)):
                continue
            d2, _ = apply_move(d1, tri)
            for rem in enumerate_moves(d2):
                if rem.kind != MoveKind.R2_REMOVE:
                    continue
                d3, tr3 = apply_move(d2, rem)
                if ear in d3.positions and canonical_form(d3) == target:
                    return [cand, tri, rem]
    raise InvalidSite(f"cannot expand {m}")


# -- orientation reversal of sites -----------------------------------------

def reverse_move(d: ShadowDiagram, m: Move) -> Move:
    """The same geometric move expressed on ``reverse_orientation(d)``."""
    kind = m.kind
    rd = reverse_orientation(d)
    if kind == MoveKind.R1_CREATE:
        dart, side = m.site
        return Move(kind, _rev_side(reverse_dart(d, dart), side))
    if kind == MoveKind.R2_CREATE:
        a, sa, b, sb = m.site
        (ea, xa), (eb, xb) = sorted([_rev_side(reverse_dart(d, a), sa),
                                     _rev_side(reverse_dart(d, b), sb)])
        return Move(kind, (ea, xa, eb, xb))
    if kind in (MoveKind.R2_REMOVE, MoveKind.R3):
        face = rd.face_of(reverse_dart(d, m.site[0]))
        return Move(kind, (face[0],))
    if kind == MoveKind.EAR_ROLL:
        ear, direction = m.site
        return Move(kind, (ear, BWD if direction == FWD else FWD))
    return m


def shift_move(target: ShadowDiagram, m: Move, shift: int, ids: dict | None = None) -> Move:
    """Re-address ``m`` for ``target``, whose visit ``k + shift`` is our visit ``k``.

    ``ids`` renames crossing ids in id-addressed sites.
    """
    n = max(1, len(target.code))
    kind, site = m.kind, m.site

    def move_dart(x: int) -> int:
        return 2 * ((x // 2 + shift) % n) + x % 2

    if kind == MoveKind.R1_CREATE:
        return Move(kind, (move_dart(site[0]), site[1]))
    if kind == MoveKind.R2_CREATE:
        (a, sa), (b, sb) = sorted([(move_dart(site[0]), site[1]), (move_dart(site[2]), site[3])])
        return Move(kind, (a, sa, b, sb))
    if kind in (MoveKind.R2_REMOVE, MoveKind.R3):
        return Move(kind, (target.face_of(move_dart(site[0]))[0],))
    if kind in (MoveKind.R1_REMOVE, MoveKind.EAR_ROLL) and ids:
        return Move(kind, (ids.get(site[0], site[0]),) + tuple(site[1:]))
    return m


def _rev_side(new_dart: int, side: str) -> tuple[int, str]:
    """Forward dart and side in the reversed diagram for a reversed forward dart."""
    # new_dart is the backward dart of its edge, so sides swap
    return 2 * (new_dart // 2), flip(side)


# -- text format ----------------------------------------------------------

def format_move(m: Move) -> str:
    k, s = m.kind, m.site
    if k == MoveKind.R1_CREATE:
        return f"move R1+ dart={s[0]} side={s[1]}"
    if k == MoveKind.R1_REMOVE:
        return f"move R1- ear={s[0]}"
    if k == MoveKind.R2_CREATE:
        return f"move R2+ a={s[0]} b={s[2]} sideA={s[1]} sideB={s[3]}"
    if k == MoveKind.R2_REMOVE:
        return f"move R2- bigon={s[0]}"
    if k == MoveKind.R3:
        return f"move R3 tri={s[0]}"
    if k == MoveKind.EAR_ROLL:
        return f"move EARROLL ear={s[0]} dir={s[1]}"
    return "move 0S2"


_FIELDS = {
    MoveKind.R1_CREATE: (("dart", int), ("side", str)),
    MoveKind.R1_REMOVE: (("ear", int),),
    MoveKind.R2_CREATE: (("a", int), ("sideA", str), ("b", int), ("sideB", str)),
    MoveKind.R2_REMOVE: (("bigon", int),),
    MoveKind.R3: (("tri", int),),
    MoveKind.EAR_ROLL: (("ear", int), ("dir", str)),
    MoveKind.DETOUR_0S2: (),
}


def parse_move(line: str) -> Move:
    """Parse one ``move ...`` record; raises ValueError with a reason."""
    tokens = line.split()
    if len(tokens) < 2 or tokens[0] != "move":
        raise ValueError("expected 'move <kind> ...'")
    try:
        kind = MoveKind(tokens[1])
    except ValueError:
        raise ValueError(f"unknown move kind {tokens[1]!r}") from None
    args = {}
    for tok in tokens[2:]:
        key, eq, val = tok.partition("=")
        if not eq or key in args:
            raise ValueError(f"bad argument {tok!r}")
        args[key] = val
    spec = _FIELDS[kind]
    if set(args) != {name for name, _ in spec}:
        raise ValueError(f"{kind.value} needs fields {[n for n, _ in spec]}")
    site = []
    for name, typ in spec:
        val = args[name]
        if typ is int:
            if not val.isdigit():
                raise ValueError(f"{name} must be a non-negative integer")
            site.append(int(val))
        else:
            allowed = (FWD, BWD) if name == "dir" else (L, R)
            if val not in allowed:
                raise ValueError(f"{name} must be one of {allowed}")
            site.append(val)
    return Move(kind, tuple(site))
