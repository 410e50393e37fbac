"""Acceptance criteria, one check each.

Every check returns ``(ok, detail)``; the pytest wrappers print a single
``criterion N: PASS|FAIL detail`` line and then assert.  Running this file
directly prints the same lines without pytest.
"""

import random
import statistics
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    cyclic_patterns,
    diagrams_with,
    ear_roll_projection,
    random_diagram,
    random_movie,
    random_system,
)
from shadowlift.builtin import (  # noqa: E402
    PAPER_EXAMPLE_NAMES,
    PAPER_EXAMPLE_R3_ORDERS,
    fig1_system,
    paper_example,
)
from shadowlift.constraints import (  # noqa: E402
    ALL_TRIPLES,
    OppositePair,
    SignConstraintSystem,
    TripleDisjunction,
    derive_move_constraints,
    is_self_contradicting,
    relation_readings,
    render_relation,
)
from shadowlift.diagram import canonical_form  # noqa: E402
from shadowlift.movie import (  # noqa: E402
    UNLIFTABLE,
    Movie,
    check_liftability,
    replay,
    reverse_movie,
)
from shadowlift.moves import (  # noqa: E402
    MoveKind,
    apply_move,
    enumerate_moves,
    expand_ear_roll,
    inverse_move,
)
from shadowlift.search import SearchConfig, search, shrink  # noqa: E402
from shadowlift.solver import all_solutions, solve  # noqa: E402

DELTAS = {
    MoveKind.R1_CREATE: (1, 2, 1),
    MoveKind.R1_REMOVE: (-1, -2, -1),
    MoveKind.R2_CREATE: (2, 4, 2),
    MoveKind.R2_REMOVE: (-2, -4, -2),
    MoveKind.R3: (0, 0, 0),
    MoveKind.EAR_ROLL: (0, 0, 0),
}

SWEEP_SEEDS = 100
SWEEP_STEPS = 100_000


def _sat(variables, constraints):
    return bool(all_solutions(SignConstraintSystem(variables, [(0, c) for c in constraints])))


def _project(system, variables):
    return {tuple(s[v] for v in variables) for s in all_solutions(system)}


def _canon(system, mapping=None):
    mapping = mapping or {}
    out = []
    for step, c in system.constraints:
        if isinstance(c, OppositePair):
            out.append((step, frozenset(mapping.get(v, v) for v in (c.x, c.y))))
        else:
            vs = [mapping.get(v, v) for v in c.vars]
            out.append((step, frozenset(frozenset(zip(vs, t)) for t in c.patterns)))
    return out


# -- the checks -----------------------------------------------------------

def check_1():
    start = time.perf_counter()
    names = PAPER_EXAMPLE_NAMES
    base = {v: n.lstrip("-") for v, n in names.items()}
    m = paper_example()
    report = check_liftability(m)
    system = report.system
    cons = [c for _, c in system.constraints]
    pairs = [c for c in cons if isinstance(c, OppositePair)]
    triples = [c for c in cons if isinstance(c, TripleDisjunction)]
    problems = []
    if len(system.variables) != 6:
        problems.append(f"{len(system.variables)} variables")
    if len(pairs) != 4 or len(triples) != 3:
        problems.append(f"{len(pairs)} pairs / {len(triples)} triples")
    else:
        shown = [render_relation(p.x, p.y, -1, names) for p in pairs]
        if shown != ["a and -a", "b and -b", "c and -c", "b = -c"]:
            problems.append(f"pairs read {shown}")
        pair_ctx = pairs[:3]
        first = relation_readings(triples[0], PAPER_EXAMPLE_R3_ORDERS[0], names)
        if first != ["-a=b=-c", "-a=b=c", "-a=-b=-c"]:
            problems.append(f"first triple reads {first}")
        # a triple "simplifies to x=y" when, given the three birth pairs, it
        # forces exactly that one relation among the named signs
        for k, (x, y) in ((1, ("a", "c")), (2, ("a", "b"))):
            ctx = SignConstraintSystem(system.variables, [(0, c) for c in pair_ctx + [triples[k]]])
            named = {base[v]: v for v in system.variables if not names[v].startswith("-")}
            proj = _project(ctx, [named["a"], named["b"], named["c"]])
            idx = {"a": 0, "b": 1, "c": 2}
            forced = all(t[idx[x]] == t[idx[y]] for t in proj)
            other = next(z for z in "abc" if z not in (x, y))
            free = {(t[idx[x]], t[idx[other]]) for t in proj} == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
            readings = relation_readings(triples[k], PAPER_EXAMPLE_R3_ORDERS[k], names)
            live = [r for r in readings if not is_self_contradicting(r)]
            if not (forced and free and len(live) == 1):
                problems.append(f"triple {k + 1} does not reduce to {x}={y}")
    if report.verdict != UNLIFTABLE or report.conflict_step != len(m) - 1:
        problems.append(f"verdict {report.verdict} at {report.conflict_step}")
    bad_prefixes = [k for k in range(len(m)) if not check_liftability(m.prefix(k)).liftable]
    if bad_prefixes:
        problems.append(f"unliftable prefixes {bad_prefixes}")
    third_r3 = max(i for i, s in enumerate(m.steps) if s.kind == MoveKind.R3)
    sols = all_solutions(replay(m.prefix(third_r3 + 1)))
    inv = {n: v for v, n in names.items()}
    if len(sols) != 2 or not all(s[inv["a"]] == s[inv["b"]] == s[inv["c"]] for s in sols):
        problems.append(f"{len(sols)} solutions through the third R3")
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.2f}s")
    detail = f"13-step ledger reproduced, conflict at step {report.conflict_step}, {elapsed * 1000:.0f} ms"
    return not problems, "; ".join(problems) or detail


def check_2():
    system = fig1_system()
    times = []
    for _ in range(20):
        t0 = time.perf_counter()
        result = solve(system)
        times.append(time.perf_counter() - t0)
    fast = statistics.median(times)
    ok = (len(system.variables) == 3 and len(system.constraints) == 3
          and not result.satisfiable and not all_solutions(system) and fast < 1e-3)
    return ok, f"UNSAT={not result.satisfiable}, median solve {fast * 1e6:.0f} us"


def check_3():
    sizes = {}
    for seed in range(150):
        d = random_diagram(seed, cap=10)
        n = d.n_crossings
        sols = all_solutions(replay(Movie(d)))
        distinct = {tuple(sorted(s.items())) for s in sols}
        if len(sols) != 2 ** n or len(distinct) != 2 ** n:
            return False, f"seed {seed}: {len(sols)} lifts for n={n}"
        sizes[n] = sizes.get(n, 0) + 1
    return True, f"150 diagrams, crossing counts {sorted(sizes)}"


def check_4():
    rng = random.Random(2024)
    unsat = 0
    for trial in range(1200):
        s = random_system(rng, max_vars=12)
        r = solve(s)
        cons = [c for _, c in s.constraints]
        if r.satisfiable != _sat(s.variables, cons):
            return False, f"system {trial}: satisfiability disagrees"
        if r.satisfiable:
            if not s.holds(r.assignment):
                return False, f"system {trial}: witness violates a constraint"
            continue
        unsat += 1
        k = r.conflict_index
        if _sat(s.variables, cons[:k + 1]) or not _sat(s.variables, cons[:k]):
            return False, f"system {trial}: conflict prefix {k} not minimal"
    return True, f"1200 systems ({unsat} UNSAT) agree with enumeration"


def check_5():
    moves = 0
    roundtrips = {k: 0 for k in DELTAS}
    for seed in range(120):
        d = random_diagram(seed, cap=10)
        before = (d.n_crossings, d.n_edges, d.n_faces)
        target = canonical_form(d)
        for m in enumerate_moves(d):
            after, _ = apply_move(d, m)
            delta = tuple(a - b for a, b in zip((after.n_crossings, after.n_edges, after.n_faces), before))
            if after.euler_characteristic != 2 or delta != DELTAS[m.kind]:
                return False, f"seed {seed}: {m} gives delta {delta}"
            back, _ = apply_move(after, inverse_move(d, m))
            if canonical_form(back) != target:
                return False, f"seed {seed}: {m} does not roundtrip"
            moves += 1
            roundtrips[m.kind] += 1
    missing = [k.value for k, n in roundtrips.items() if not n]
    if missing:
        return False, f"no sites of kind {missing}"
    return True, f"{moves} moves on 120 diagrams, every kind roundtripped"


def check_6():
    sites = 0
    expected = {(x, y, y) for x in (1, -1) for y in (1, -1)}
    for d, m in diagrams_with(MoveKind.EAR_ROLL, 120, seed=500):
        x = d
        for step in expand_ear_roll(d, m):
            x, _ = apply_move(x, step)
        if canonical_form(x) != canonical_form(apply_move(d, m)[0]):
            return False, f"{m}: expansion lands on a different diagram"
        projected, _ = ear_roll_projection(d, m)
        if projected != expected:
            return False, f"{m}: projection {sorted(projected)}"
        sites += 1
    return True, f"{sites} ear-roll sites, no relation among surviving signs"


def check_7():
    sites = 0
    for d, m in diagrams_with(MoveKind.R3, 150, seed=900):
        _, trace = apply_move(d, m)
        (c,) = derive_move_constraints(d, m, trace)
        cyclic, corners = cyclic_patterns(d, d.face_of(m.site[0]))
        allowed = set(c.in_order(corners))
        closed = all(tuple(-s for s in t) in c.patterns for t in c.patterns)
        if len(c.patterns) != 6 or not closed or len(cyclic) != 2 or allowed != set(ALL_TRIPLES) - cyclic:
            return False, f"{m} on {d.code}"
        sites += 1
    return True, f"{sites} R3 sites"


def check_8():
    start = time.perf_counter()
    finds = shrunk_total = 0
    lengths = []
    for seed in range(SWEEP_SEEDS):
        # a walker stops at its first find; every find is shrunk and checked
        result = search(SearchConfig(seed=seed, max_steps=SWEEP_STEPS, stop_at_first=True))
        for m in result.finds:
            finds += 1
            small = shrink(m)
            report = check_liftability(small)
            # constraints only accumulate, so one liftable longest proper
            # prefix makes every proper prefix liftable
            if report.liftable or report.conflict_step != len(small) - 1 \
                    or not check_liftability(small.prefix(len(small) - 1)).liftable:
                return False, f"seed {seed}: shrunk find is not a minimal counterexample"
            shrunk_total += 1
            lengths.append(len(small))
    elapsed = time.perf_counter() - start
    ok = finds >= 1 and elapsed < 600
    return ok, (f"{finds} finds over {SWEEP_SEEDS} seeds, shrunk lengths "
                f"{min(lengths, default=0)}..{max(lengths, default=0)}, {elapsed:.0f}s")


def check_9():
    movies = [paper_example()]
    movies += [random_movie(seed, steps=25) for seed in range(80)]
    movies += [Movie(random_diagram(seed)) for seed in range(20)]
    # unliftable movies from the walker, each already cut at its conflict
    seed = 0
    found = 0
    while found < 15:
        finds = search(SearchConfig(seed=1000 + seed, max_steps=5000)).finds
        seed += 1
        movies.extend(finds)
        found += len(finds)
    unliftable = 0
    for k, m in enumerate(movies):
        rm, mapping = reverse_movie(m)
        a, b = check_liftability(m), check_liftability(rm)
        if a.verdict != b.verdict or a.conflict_step != b.conflict_step:
            return False, f"movie {k}: verdict changes under reversal"
        if _canon(a.system, mapping) != _canon(b.system):
            return False, f"movie {k}: constraints change under reversal"
        unliftable += not a.liftable
    return True, f"{len(movies)} movies ({unliftable} unliftable) invariant"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


def _line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, detail = CHECKS[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, check in enumerate(CHECKS, 1):
        ok, detail = check()
        failed += not ok
        print(_line(n, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
