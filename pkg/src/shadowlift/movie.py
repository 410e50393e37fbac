"""Shadow movies: replay, liftability, classical lifts and the text format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .constraints import (
    Constraint,
    SignConstraintSystem,
    constraint_to_json,
    derive_move_constraints,
    render_constraint,
)
from .diagram import (
    ShadowDiagram,
    crossingless,
    format_code,
    find_shift,
    format_diagram,
    isomorphisms,
    local_frame_sign,
    over_visit,
    parse_diagram_lines,
    relabel,
    reverse_orientation,
)
from .errors import AssignmentInvalid, InvalidSite, MovieSyntaxError, ReplayError
from .moves import (
    Move,
    MoveKind,
    MoveTrace,
    apply_move,
    expand_ear_roll,
    format_move,
    parse_move,
    reverse_move,
    shift_move,
)
from .solver import lex_min_solution, solve

MOVIE_HEADER = "SHADOWMOVIE v1"
LIFTABLE, UNLIFTABLE = "LIFTABLE", "UNLIFTABLE"


@dataclass(frozen=True)
class Movie:
    initial: ShadowDiagram = field(default_factory=crossingless)
    steps: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def prefix(self, k: int) -> "Movie":
        return Movie(self.initial, self.steps[:k])

    def extend(self, *moves: Move) -> "Movie":
        return Movie(self.initial, self.steps + tuple(moves))

    @cached_property
    def _replayed(self):
        frames = [self.initial]
        traces: list[MoveTrace] = []
        constraints: list[list[Constraint]] = []
        d = self.initial
        for k, m in enumerate(self.steps):
            try:
                after, trace = apply_move(d, m)
                derived = derive_move_constraints(d, m, trace)
            except InvalidSite as exc:
                raise ReplayError(f"{format_move(m)}: {type(exc).__name__}: {exc}", k) from exc
            frames.append(after)
            traces.append(trace)
            constraints.append(derived)
            d = after
        return tuple(frames), tuple(traces), tuple(constraints)

    @property
    def frames(self) -> tuple[ShadowDiagram, ...]:
        """Diagram before step 0, after step 0, ... after the last step."""
        return self._replayed[0]

    @property
    def traces(self) -> tuple[MoveTrace, ...]:
        return self._replayed[1]

    @property
    def step_constraints(self) -> tuple[list[Constraint], ...]:
        return self._replayed[2]

    @property
    def final(self) -> ShadowDiagram:
        return self.frames[-1]

    def variables(self) -> tuple[int, ...]:
        ids = set(self.initial.positions)
        for t in self.traces:
            ids.update(t.born)
        return tuple(sorted(ids))


def replay(m: Movie) -> SignConstraintSystem:
    """Constraint system of the whole movie, each constraint tagged with its step."""
    system = SignConstraintSystem(m.variables())
    for k, cons in enumerate(m.step_constraints):
        for c in cons:
            system.add(k, c)
    return system


# -- classical lifts ------------------------------------------------------

@dataclass(frozen=True)
class ClassicalFrame:
    diagram: ShadowDiagram
    signs: dict

    def over_passages(self) -> dict:
        """Crossing id -> the visit token ``(id, marker)`` passing on top."""
        return {c: self.diagram.code[over_visit(self.diagram, c, s)]
                for c, s in self.signs.items()}


@dataclass(frozen=True)
class ClassicalMovie:
    frames: tuple[ClassicalFrame, ...]
    labels: tuple[str, ...]

    def to_json(self) -> list[dict]:
        out = []
        for k, f in enumerate(self.frames):
            rec = {"frame": k, "code": format_code(f.diagram.code),
                   "signs": {str(c): s for c, s in sorted(f.signs.items())}}
            if k:
                rec["move"] = self.labels[k - 1]
            out.append(rec)
        return out


def _over_edge(d: ShadowDiagram, c: int, sign: int, edges: Sequence[int]) -> int:
    """Which of ``edges`` carries the over-passage of ``c``."""
    v = over_visit(d, c, sign)
    n = len(d.code)
    hits = [k for k, e in enumerate(edges) if v in (e, (e + 1) % n)]
    if len(hits) != 1:
        raise AssignmentInvalid(f"crossing {c} is not a corner of the given face")
    return hits[0]


def _check_bigon(d: ShadowDiagram, face, signs: Mapping[int, int], label: str) -> None:
    edges = [x // 2 for x in face]
    corners = d.face_corners(face)
    tops = {_over_edge(d, c, signs[c], edges) for c in corners}
    if len(tops) != 1:
        raise AssignmentInvalid(f"{label}: bigon strands swap heights between its corners")


def _check_triangle(d: ShadowDiagram, face, signs: Mapping[int, int], label: str) -> None:
    edges = [x // 2 for x in face]
    wins = [0, 0, 0]
    for c in d.face_corners(face):
        wins[_over_edge(d, c, signs[c], edges)] += 1
    if sorted(wins) != [0, 1, 2]:
        raise AssignmentInvalid(f"{label}: triangle strands have no consistent height order")


def validate_transition(before: ClassicalFrame, after: ClassicalFrame, m: Move,
                        trace: MoveTrace) -> None:
    """Check one step is a legal classical Reidemeister move."""
    label = format_move(m)
    if set(before.signs) != set(before.diagram.positions) or \
            set(after.signs) != set(after.diagram.positions):
        raise AssignmentInvalid(f"{label}: signs do not cover the live crossings")
    top_before, top_after = before.over_passages(), after.over_passages()
    for c in set(top_before) & set(top_after):
        if top_before[c] != top_after[c]:
            raise AssignmentInvalid(f"{label}: crossing {c} changes its over-strand")
    if m.kind == MoveKind.R2_CREATE:
        d = after.diagram
        face = next((f for f in d.faces
                     if len(f) == 2 and set(d.face_corners(f)) == set(trace.born)), None)
        if face is None:
            raise AssignmentInvalid(f"{label}: created crossings do not bound a bigon")
        _check_bigon(d, face, after.signs, label)
    elif m.kind == MoveKind.R2_REMOVE:
        _check_bigon(before.diagram, before.diagram.face_of(m.site[0]), before.signs, label)
    elif m.kind == MoveKind.R3:
        _check_triangle(before.diagram, before.diagram.face_of(m.site[0]), before.signs, label)
        after_face = next(f for f in after.diagram.faces if len(f) == 3 and
                          {x // 2 for x in f} == set(trace.strands))
        _check_triangle(after.diagram, after_face, after.signs, label)


def extract_lift(m: Movie, assignment: Mapping[int, int]) -> ClassicalMovie:
    """Signed frames for ``assignment``, each transition validated independently."""
    frames = []
    for d in m.frames:
        try:
            frames.append(ClassicalFrame(d, {c: int(assignment[c]) for c in d.positions}))
        except KeyError as exc:
            raise AssignmentInvalid(f"no sign for crossing {exc.args[0]}") from None
    for k, (step, trace) in enumerate(zip(m.steps, m.traces)):
        validate_transition(frames[k], frames[k + 1], step, trace)
    return ClassicalMovie(tuple(frames), tuple(format_move(s) for s in m.steps))


@dataclass(frozen=True)
class LiftReport:
    verdict: str
    system: SignConstraintSystem
    witness: ClassicalMovie | None = None
    witness_signs: dict | None = None
    conflict_step: int | None = None
    conflict_index: int | None = None

    @property
    def liftable(self) -> bool:
        return self.verdict == LIFTABLE

    def ledger(self, names: Mapping[int, str] | None = None) -> list[str]:
        lines = []
        for k, (step, c) in enumerate(self.system.constraints):
            mark = "  <- conflict" if k == self.conflict_index else ""
            lines.append(f"step {step}: {render_constraint(c, names)}{mark}")
        return lines

    def to_json(self, names: Mapping[int, str] | None = None) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.conflict_step is not None:
            out["conflict_step"] = self.conflict_step
        out["constraints"] = [constraint_to_json(c, step, names)
                              for step, c in self.system.constraints]
        if self.witness is not None:
            out["witness_signs"] = {str(c): s for c, s in sorted(self.witness_signs.items())}
            out["frames"] = self.witness.to_json()
        return out

    def dumps(self, names=None) -> str:
        return json.dumps(self.to_json(names), indent=2)


def check_liftability(m: Movie) -> LiftReport:
    system = replay(m)
    result = solve(system)
    if not result.satisfiable:
        return LiftReport(UNLIFTABLE, system, conflict_step=result.conflict_step,
                          conflict_index=result.conflict_index)
    signs = lex_min_solution(system)
    return LiftReport(LIFTABLE, system, extract_lift(m, signs), signs)


def descending_resolution(d: ShadowDiagram, basepoint: int = 0) -> dict[int, int]:
    """Signs making every first visit after ``basepoint`` the over-passage."""
    if d.is_crossingless:
        return {}
    if not 0 <= basepoint < d.n_darts:
        raise InvalidSite(f"basepoint dart {basepoint} out of range")
    n = len(d.code)
    start = (basepoint // 2 + 1) % n
    signs: dict[int, int] = {}
    for k in range(n):
        pos = (start + k) % n
        c = d.code[pos][0]
        if c not in signs:
            signs[c] = local_frame_sign(d, c, pos)
    return signs


# -- orientation reversal -------------------------------------------------

def reverse_movie(m: Movie) -> tuple[Movie, dict[int, int]]:
    """Movie of the reversed curve, plus original id -> reversed-movie id."""
    mapping = {c: c for c in m.initial.positions}
    rd = reverse_orientation(m.initial)
    steps = []
    for d, step, trace, d_after in zip(m.frames, m.steps, m.traces, m.frames[1:]):
        shift = find_shift(reverse_orientation(d), rd, mapping)
        rstep = shift_move(rd, reverse_move(d, step), shift, mapping)
        rd_after, _ = apply_move(rd, rstep)
        if trace.born:
            # both replays allocate the same ids; only their order can differ
            survivors = {c: mapping[c] for c in d_after.positions if c not in trace.born}
            target = relabel(reverse_orientation(d_after), survivors)
            fixed = {c: c for c in survivors.values()}
            iso = next(isomorphisms(target, rd_after, fixed))
            for c in trace.born:
                mapping[c] = iso[c]
        steps.append(rstep)
        rd = rd_after
    return Movie(reverse_orientation(m.initial), tuple(steps)), mapping


def expand_ear_rolls(m: Movie) -> tuple[Movie, dict[int, int]]:
    """Equivalent movie with every ear-roll replaced by its (R2+, R3, R2-) expansion.

    Later sites are translated onto the expanded frames.  Returns the movie
    and the id map from the original final frame to the expanded one.
    """
    mapping = {c: c for c in m.initial.positions}
    x = m.initial
    steps: list[Move] = []
    for d, step, d_after in zip(m.frames, m.steps, m.frames[1:]):
        s = shift_move(x, step, find_shift(d, x, mapping), mapping)
        for t in expand_ear_roll(x, s) if s.kind == MoveKind.EAR_ROLL else [s]:
            x, _ = apply_move(x, t)
            steps.append(t)
        known = {c: mapping[c] for c in d_after.positions
                 if c in mapping and mapping[c] in x.positions}
        mapping = next(isomorphisms(d_after, x, known))
    return Movie(m.initial, tuple(steps)), mapping


# -- text format ----------------------------------------------------------

def serialize_movie(m: Movie) -> str:
    lines = [MOVIE_HEADER, format_diagram(m.initial).rstrip("\n")]
    lines.extend(format_move(s) for s in m.steps)
    return "\n".join(lines) + "\n"


def parse_movie(text: str, validate: bool = True) -> Movie:
    """Parse movie text; with ``validate`` also replay it (errors name the step)."""
    records = [(k + 1, ln.strip()) for k, ln in enumerate(text.splitlines())
               if ln.strip() and not ln.lstrip().startswith("#")]
    if not records or records[0][1] != MOVIE_HEADER:
        raise MovieSyntaxError(f"expected {MOVIE_HEADER!r} header", records[0][0] if records else 1)
    if len(records) < 3:
        raise MovieSyntaxError("missing initial diagram", records[-1][0])
    initial = parse_diagram_lines([records[1][1], records[2][1]], records[1][0])
    steps = []
    for lineno, line in records[3:]:
        try:
            steps.append(parse_move(line))
        except ValueError as exc:
            raise MovieSyntaxError(str(exc), lineno) from None
    movie = Movie(initial, tuple(steps))
    if validate:
        movie.frames
    return movie


def is_movie_text(text: str) -> bool:
    for ln in text.splitlines():
        if ln.strip() and not ln.lstrip().startswith("#"):
            return ln.strip() == MOVIE_HEADER
    return False
