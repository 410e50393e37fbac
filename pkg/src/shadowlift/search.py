"""Random-walk search for unliftable shadow movies, and movie shrinking.

The walker starts from the crossingless diagram and applies weighted random
moves, pushing each move's constraints into an incremental solver session.
When a move makes the constraints unsatisfiable, the movie up to and
including that move is recorded, the move is undone, and the walk goes on.
Every ``episode_length`` steps the walk restarts from the crossingless
diagram so that finds stay short.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .constraints import derive_move_constraints
from .diagram import ShadowDiagram, crossingless
from .errors import InvalidSite, NotUnliftable
from .movie import Movie, check_liftability, serialize_movie
from .moves import Move, MoveKind, apply_move, enumerate_moves
from .solver import Session

DEFAULT_WEIGHTS: Mapping[str, float] = {
    "R1+": 1.0,
    "R1-": 1.0,
    "R2+": 3.0,
    "R2-": 2.0,
    "R3": 4.0,
    "EARROLL": 1.0,
    "0S2": 0.0,
}

_GROWTH = {MoveKind.R1_CREATE: 1, MoveKind.R2_CREATE: 2}


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_steps: int = 100_000
    max_crossings: int = 8
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    stop_at_first: bool = False
    episode_length: int = 60

    def __post_init__(self):
        if self.max_crossings < 3:
            raise ValueError("max_crossings must be at least 3 for R3 moves to occur")
        unknown = set(self.weights) - {k.value for k in MoveKind}
        if unknown:
            raise ValueError(f"unknown move kinds in weights: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")
        if not any(w > 0 for w in self.weights.values()):
            raise ValueError("at least one weight must be positive")
        if self.episode_length < 1:
            raise ValueError("episode_length must be positive")


@dataclass
class SearchResult:
    config: SearchConfig
    finds: list[Movie]
    find_steps: list[int]
    steps_explored: int
    wall_time: float

    def summary(self) -> dict:
        return {
            "seed": self.config.seed,
            "steps_explored": self.steps_explored,
            "finds": len(self.finds),
            "find_steps": self.find_steps,
            "find_lengths": [len(m) for m in self.finds],
            "wall_time": round(self.wall_time, 3),
        }


def _sample_move(rng: random.Random, d: ShadowDiagram, cfg: SearchConfig) -> Move | None:
    kinds = []
    for kind in MoveKind:
        w = cfg.weights.get(kind.value, 0.0)
        if w <= 0 or d.n_crossings + _GROWTH.get(kind, 0) > cfg.max_crossings:
            continue
        kinds.append((kind, w))
    while kinds:
        kind = rng.choices([k for k, _ in kinds], [w for _, w in kinds])[0]
        if kind == MoveKind.DETOUR_0S2:
            return Move(kind)
        sites = enumerate_moves(d, (kind,))
        if sites:
            return rng.choice(sites)
        kinds = [(k, w) for k, w in kinds if k != kind]
    return None


def search(cfg: SearchConfig) -> SearchResult:
    """Run one walker; deterministic for a given config."""
    rng = random.Random(cfg.seed)
    start = time.perf_counter()
    finds: list[Movie] = []
    find_steps: list[int] = []
    seen: set = set()
    d = crossingless()
    steps: list[Move] = []
    session = Session()
    step = 0
    while step < cfg.max_steps:
        if len(steps) >= cfg.episode_length:
            d, steps, session = crossingless(), [], Session()
        m = _sample_move(rng, d, cfg)
        step += 1
        if m is None:
            d, steps, session = crossingless(), [], Session()
            continue
        after, trace = apply_move(d, m)
        cons = derive_move_constraints(d, m, trace)
        for c in cons:
            session.push(c)
        if cons and not session.check():
            movie = Movie(crossingless(), tuple(steps) + (m,))
            if movie.steps not in seen:
                seen.add(movie.steps)
                finds.append(movie)
                find_steps.append(step)
                if cfg.stop_at_first:
                    break
            for _ in cons:
                session.pop()
            continue
        d = after
        steps.append(m)
    return SearchResult(cfg, finds, find_steps, step, time.perf_counter() - start)


def random_walk(cfg: SearchConfig) -> list[Movie]:
    """Unliftable movies found by one walker, in discovery order."""
    return search(cfg).finds


def write_results(result: SearchResult, out_dir: str | Path) -> list[Path]:
    """Write finds as ``unliftable-<seed>-<step>.smv`` plus a JSON summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for movie, step in zip(result.finds, result.find_steps):
        path = out / f"unliftable-{result.config.seed}-{step}.smv"
        path.write_text(serialize_movie(movie))
        paths.append(path)
    summary = out / f"summary-{result.config.seed}.json"
    summary.write_text(json.dumps(result.summary(), indent=2) + "\n")
    return paths + [summary]


# -- shrinking ------------------------------------------------------------
#
# Deleting a step shifts every later dart address, so sites are first
# rewritten in terms of things that survive the deletion: an edge is named by
# the visit tokens ``(crossing, marker)`` at its two ends, which are unique in
# a diagram, and crossings by id.  Re-resolving the anchors on the edited
# movie gives the new sites, or fails when the edge no longer exists.

_CIRCLE = ("circle",)


def _edge_anchor(d: ShadowDiagram, edge: int):
    if d.is_crossingless:
        return _CIRCLE
    n = len(d.code)
    return (d.code[edge], d.code[(edge + 1) % n])


def _anchor(d: ShadowDiagram, m: Move):
    kind, site = m.kind, m.site
    if kind == MoveKind.R1_CREATE:
        return (_edge_anchor(d, site[0] // 2), site[1])
    if kind == MoveKind.R2_CREATE:
        return (_edge_anchor(d, site[0] // 2), site[1], _edge_anchor(d, site[2] // 2), site[3])
    if kind in (MoveKind.R2_REMOVE, MoveKind.R3):
        return (_edge_anchor(d, site[0] // 2), site[0] % 2)
    return site


def _anchor_ids(anchor) -> set[int]:
    ids = set()
    stack = [anchor]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            if len(x) == 2 and isinstance(x[0], int) and x[1] in ("L", "R"):
                ids.add(x[0])
            else:
                stack.extend(x)
    return ids


def _rename(anchor, ids: Mapping[int, int]):
    if isinstance(anchor, tuple):
        if len(anchor) == 2 and isinstance(anchor[0], int) and anchor[1] in ("L", "R"):
            return (ids[anchor[0]], anchor[1])
        return tuple(_rename(x, ids) for x in anchor)
    return anchor


def _resolve_edge(d: ShadowDiagram, anchor) -> int:
    if anchor == _CIRCLE:
        if not d.is_crossingless:
            raise InvalidSite("edge no longer exists")
        return 0
    n = len(d.code)
    tail, head = anchor
    for e in range(n):
        if d.code[e] == tail and d.code[(e + 1) % n] == head:
            return e
    raise InvalidSite("edge no longer exists")


def _resolve(d: ShadowDiagram, kind: MoveKind, anchor) -> Move:
    if kind == MoveKind.R1_CREATE:
        return Move(kind, (2 * _resolve_edge(d, anchor[0]), anchor[1]))
    if kind == MoveKind.R2_CREATE:
        a = (2 * _resolve_edge(d, anchor[0]), anchor[1])
        b = (2 * _resolve_edge(d, anchor[2]), anchor[3])
        a, b = sorted([a, b])
        return Move(kind, a + b)
    if kind in (MoveKind.R2_REMOVE, MoveKind.R3):
        dart = 2 * _resolve_edge(d, anchor[0]) + anchor[1]
        return Move(kind, (d.face_of(dart)[0],))
    if kind in (MoveKind.R1_REMOVE, MoveKind.EAR_ROLL):
        return Move(kind, (anchor[0],) + tuple(anchor[1:]))
    return Move(kind, tuple(anchor))


def _anchored(m: Movie):
    """Per step: (kind, anchor in original ids, ids born, ids the anchor needs)."""
    out = []
    for d, step, trace in zip(m.frames, m.steps, m.traces):
        anchor = _anchor(d, step)
        if step.kind in (MoveKind.R1_REMOVE, MoveKind.EAR_ROLL):
            needs = {step.site[0]}
        else:
            needs = _anchor_ids(anchor)
        out.append((step.kind, anchor, trace.born, needs))
    return out


def _rebuild(initial: ShadowDiagram, anchored, keep: list[int]) -> Movie | None:
    """Replay the kept steps with re-resolved sites, or None if one fails."""
    ids = {c: c for c in initial.positions}
    d = initial
    steps = []
    for k in keep:
        kind, anchor, born, _ = anchored[k]
        try:
            if kind in (MoveKind.R1_REMOVE, MoveKind.EAR_ROLL):
                anchor = (ids[anchor[0]],) + tuple(anchor[1:])
            else:
                anchor = _rename(anchor, ids)
            m = _resolve(d, kind, anchor)
            d, trace = apply_move(d, m)
        except (KeyError, InvalidSite):
            return None
        for old, new in zip(born, trace.born):
            ids[old] = new
        steps.append(m)
    return Movie(initial, tuple(steps))


def _closure(anchored, drop: set[int]) -> set[int]:
    """``drop`` plus every later step that needs an id born in a dropped step."""
    dead: set[int] = set()
    out = set()
    for k, (_, _, born, needs) in enumerate(anchored):
        if k in drop or needs & dead:
            out.add(k)
            dead.update(born)
    return out


def _truncate(m: Movie) -> Movie:
    report = check_liftability(m)
    if report.liftable:
        raise NotUnliftable("movie is liftable")
    return m.prefix(report.conflict_step + 1)


def _deletion_pass(current: Movie, chunk: int) -> tuple[Movie, bool]:
    """Try deleting each block of ``chunk`` steps, last block first."""
    changed = False
    anchored = _anchored(current)
    k = len(current) - 1
    while k >= 0:
        drop = _closure(anchored, set(range(max(0, k - chunk + 1), k + 1)))
        keep = [i for i in range(len(current)) if i not in drop]
        candidate = _rebuild(current.initial, anchored, keep)
        if candidate is not None and not check_liftability(candidate).liftable:
            current = _truncate(candidate)
            anchored = _anchored(current)
            changed = True
        k = min(k - chunk, len(current) - 1)
    return current, changed


def shrink(m: Movie) -> Movie:
    """Smaller unliftable movie: truncate at the conflict, then delete steps greedily.

    Blocks of steps are deleted together with the later steps that refer to
    crossings they created; block size halves down to single steps, and the
    single-step pass repeats until nothing more can go.
    """
    current = _truncate(m)
    chunk = max(1, len(current) // 2)
    while True:
        current, changed = _deletion_pass(current, chunk)
        if changed:
            continue
        if chunk == 1:
            return current
        chunk //= 2


def is_minimal_counterexample(m: Movie) -> bool:
    """UNLIFTABLE, with every proper prefix LIFTABLE."""
    report = check_liftability(m)
    return not report.liftable and report.conflict_step == len(m) - 1
