"""Random diagrams and movies for property tests, reproducible from a seed."""

from __future__ import annotations

import itertools
import random

from shadowlift.constraints import (
    ALL_TRIPLES,
    OppositePair,
    SignConstraintSystem,
    TripleDisjunction,
    derive_move_constraints,
)
from shadowlift.diagram import ShadowDiagram, crossingless, over_visit
from shadowlift.movie import Movie
from shadowlift.moves import Move, MoveKind, apply_move, enumerate_moves, expand_ear_roll
from shadowlift.solver import all_solutions

GROWING = (MoveKind.R1_CREATE, MoveKind.R2_CREATE)


def random_movie(seed: int, steps: int = 25, cap: int = 10, r3_bias: float = 0.4) -> Movie:
    """Random walk from the unknot; R3 sites are favoured so triangles get exercised."""
    rng = random.Random(seed)
    d = crossingless()
    moves: list[Move] = []
    for _ in range(steps):
        sites = enumerate_moves(d)
        if d.n_crossings + 2 > cap:
            sites = [m for m in sites if m.kind not in GROWING]
        r3 = [m for m in sites if m.kind == MoveKind.R3]
        m = rng.choice(r3) if r3 and rng.random() < r3_bias else rng.choice(sites)
        moves.append(m)
        d, _ = apply_move(d, m)
    return Movie(crossingless(), tuple(moves))


def random_diagram(seed: int, cap: int = 10) -> ShadowDiagram:
    """Random diagram whose size varies with the seed."""
    return random_movie(seed, steps=seed % 30, cap=cap).final


def diagrams_with(kind: MoveKind, count: int, seed: int = 0, cap: int = 10):
    """Yield (diagram, move) pairs until ``count`` sites of ``kind`` are seen."""
    seen = 0
    s = seed
    while seen < count:
        d = random_diagram(s, cap=cap)
        s += 1
        for m in enumerate_moves(d, (kind,)):
            yield d, m
            seen += 1
            if seen >= count:
                return


def ear_roll_projection(d: ShadowDiagram, m: Move):
    """Solutions of the expanded ear-roll, projected to (ear, rolled-past, replacement).

    Returns the projected set and the three ids.
    """
    seq = expand_ear_roll(d, m)
    system = SignConstraintSystem()
    x = d
    born, died = set(), set()
    for k, step in enumerate(seq):
        after, trace = apply_move(x, step)
        for c in derive_move_constraints(x, step, trace):
            system.add(k, c)
        born.update(trace.born)
        died.update(trace.died)
        x = after
    ear = m.site[0]
    (rolled,) = died - born
    (replacement,) = born - died
    system.variables = tuple(sorted({ear, rolled} | born))
    projected = {(s[ear], s[rolled], s[replacement]) for s in all_solutions(system)}
    return projected, (ear, rolled, replacement)


def random_system(rng: random.Random, max_vars: int = 12):
    """Random pair/triple system; triples are R3-shaped or arbitrary pattern sets."""
    n = rng.randint(2, max_vars)
    system = SignConstraintSystem(tuple(range(n)))
    triples = list(itertools.product((1, -1), repeat=3))
    for step in range(rng.randint(0, 2 * n)):
        if n >= 3 and rng.random() < 0.5:
            vs = rng.sample(range(n), 3)
            if rng.random() < 0.7:
                bad = rng.choice(triples)
                pats = {t for t in triples if t not in (bad, tuple(-s for s in bad))}
            else:
                pats = {t for t in triples if rng.random() < 0.4} or {rng.choice(triples)}
            system.add(step, TripleDisjunction.make(vs, pats))
        else:
            system.add(step, OppositePair(*rng.sample(range(n), 2)))
    return system


def cyclic_patterns(d, face):
    """Sign triples whose over/under choices admit no height order of the strands.

    Decodes each corner's over-passage directly from the rotation system.
    """
    n = len(d.code)
    edges = [x // 2 for x in face]
    corners = d.face_corners(face)
    out = set()
    for signs in ALL_TRIPLES:
        beats = set()
        for c, s in zip(corners, signs):
            v = over_visit(d, c, s)
            on = [k for k, e in enumerate(edges) if v in (e, (e + 1) % n)]
            off = [k for k, e in enumerate(edges)
                   if k not in on and c in (d.code[e][0], d.code[(e + 1) % n][0])]
            beats.add((on[0], off[0]))
        if not any(all((order.index(a) < order.index(b)) for a, b in beats)
                   for order in itertools.permutations(range(3))):
            out.add(signs)
    return out, corners
