import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cyclic_patterns, diagrams_with, random_diagram
from shadowlift.constraints import (
    ALL_TRIPLES,
    UNSATISFIABLE,
    OppositePair,
    SignConstraintSystem,
    TripleDisjunction,
    constraint_to_json,
    derive_move_constraints,
    derive_r3_constraint,
    implied_parities,
    is_self_contradicting,
    relation_readings,
    render_constraint,
    render_relation,
    simplify,
)
from shadowlift.diagram import over_visit, reverse_orientation
from shadowlift.errors import DegenerateTriangle, TraceMismatch
from shadowlift.moves import Move, MoveKind, MoveTrace, apply_move, enumerate_moves, reverse_move


class TestDerivation:
    def test_r1_is_free(self):
        for kind in (MoveKind.R1_CREATE, MoveKind.EAR_ROLL, MoveKind.DETOUR_0S2):
            for d, m in diagrams_with(kind, 3) if kind != MoveKind.DETOUR_0S2 else [(random_diagram(2), Move(kind))]:
                after, trace = apply_move(d, m)
                assert derive_move_constraints(d, m, trace) == []

    def test_r2_create_pairs_born(self):
        d, m = next(diagrams_with(MoveKind.R2_CREATE, 1))
        _, trace = apply_move(d, m)
        assert derive_move_constraints(d, m, trace) == [OppositePair(*trace.born)]

    def test_r2_remove_pairs_died(self):
        d, m = next(diagrams_with(MoveKind.R2_REMOVE, 1))
        _, trace = apply_move(d, m)
        assert derive_move_constraints(d, m, trace) == [OppositePair(*trace.died)]

    def test_trace_mismatch(self):
        d, m = next(diagrams_with(MoveKind.R2_CREATE, 1))
        with pytest.raises(TraceMismatch):
            derive_move_constraints(d, m, MoveTrace(MoveKind.R3))

    def test_r1_without_birth_is_mismatch(self):
        d, m = next(diagrams_with(MoveKind.R1_CREATE, 1))
        with pytest.raises(TraceMismatch):
            derive_move_constraints(d, m, MoveTrace(MoveKind.R1_CREATE))

    def test_degenerate_triangle(self):
        d, m = next(diagrams_with(MoveKind.R3, 1))
        face = d.face_of(m.site[0])
        corners = d.face_corners(face)
        with pytest.raises(DegenerateTriangle):
            derive_r3_constraint(d, (corners[0], corners[0], corners[1]), [x // 2 for x in face])

    def test_r3_law(self):
        for d, m in diagrams_with(MoveKind.R3, 60):
            _, trace = apply_move(d, m)
            (c,) = derive_move_constraints(d, m, trace)
            assert len(c.patterns) == 6
            assert all(tuple(-s for s in t) in c.patterns for t in c.patterns)
            cyclic, corners = cyclic_patterns(d, d.face_of(m.site[0]))
            assert len(cyclic) == 2
            assert set(c.in_order(corners)) == set(ALL_TRIPLES) - cyclic

    def test_r2_opposite_means_common_over_strand(self):
        for d, m in diagrams_with(MoveKind.R2_REMOVE, 40):
            face = d.face_of(m.site[0])
            n = len(d.code)
            edges = [x // 2 for x in face]
            x, y = d.face_corners(face)
            for sx, sy in itertools.product((1, -1), repeat=2):
                tops = set()
                for c, s in ((x, sx), (y, sy)):
                    v = over_visit(d, c, s)
                    tops.add(next(k for k, e in enumerate(edges) if v in (e, (e + 1) % n)))
                assert OppositePair(x, y).holds({x: sx, y: sy}) == (len(tops) == 1)

    @given(st.integers(0, 5000))
    @settings(max_examples=30, deadline=None)
    def test_reversal_invariance(self, seed):
        d = random_diagram(seed)
        rd = reverse_orientation(d)
        for m in enumerate_moves(d, (MoveKind.R2_CREATE, MoveKind.R2_REMOVE, MoveKind.R3)):
            _, trace = apply_move(d, m)
            rm = reverse_move(d, m)
            _, rtrace = apply_move(rd, rm)
            assert derive_move_constraints(d, m, trace) == derive_move_constraints(rd, rm, rtrace)


class TestTypes:
    def test_pair_normalizes(self):
        assert OppositePair(5, 2) == OppositePair(2, 5)
        with pytest.raises(ValueError):
            OppositePair(1, 1)

    def test_triple_make_sorts(self):
        c = TripleDisjunction.make((7, 2, 4), {(1, -1, 1)})
        assert c.vars == (2, 4, 7)
        assert c.patterns == {(-1, 1, 1)}
        assert c.in_order((7, 2, 4)) == [(1, -1, 1)]

    def test_triple_needs_distinct(self):
        with pytest.raises(ValueError):
            TripleDisjunction.make((1, 1, 2), {(1, 1, 1)})

    def test_system_prefix(self):
        s = SignConstraintSystem((0, 1, 2))
        s.add(0, OppositePair(0, 1))
        s.add(3, OppositePair(1, 2))
        assert s.prefix(1).constraints == [(0, OppositePair(0, 1))]
        assert s.holds({0: 1, 1: -1, 2: 1})


class TestSimplify:
    def test_unrelated_context_unchanged(self):
        c = TripleDisjunction.make((0, 1, 2), {(1, 1, 1), (-1, -1, -1)})
        assert simplify(c, [OppositePair(5, 6)]) == c

    def test_contradiction(self):
        c = TripleDisjunction.make((0, 1, 2), {(1, 1, 1), (-1, -1, -1)})
        assert simplify(c, [OppositePair(0, 1)]) is UNSATISFIABLE
        assert simplify(OppositePair(0, 1), [OppositePair(0, 2), OppositePair(1, 2)]) is UNSATISFIABLE

    def test_matches_brute_force(self):
        rng = random.Random(3)
        for _ in range(300):
            vs = rng.sample(range(6), 3)
            pats = {t for t in ALL_TRIPLES if rng.random() < 0.5} or {ALL_TRIPLES[0]}
            c = TripleDisjunction.make(vs, pats)
            context = [OppositePair(*rng.sample(range(6), 2)) for _ in range(rng.randint(0, 3))]
            allowed = set()
            for signs in itertools.product((1, -1), repeat=6):
                env = dict(enumerate(signs))
                if all(p.holds(env) for p in context):
                    allowed.add(tuple(env[v] for v in c.vars))
            if not allowed:
                continue  # contradictory context
            kept = c.patterns & allowed
            got = simplify(c, context)
            if kept:
                assert got.patterns == kept
            else:
                assert got is UNSATISFIABLE

    def test_implied_parities(self):
        c = TripleDisjunction.make((0, 1, 2), {(1, -1, 1), (-1, 1, -1)})
        assert implied_parities(c) == {(0, 1): -1, (0, 2): 1, (1, 2): -1}


class TestRendering:
    names = {0: "-a", 1: "a", 2: "b", 3: "-b", 4: "c", 5: "-c"}

    def test_first_triangle_readings(self):
        # allowed classes of (-a, b, -c): all but (+,-,-)
        c = TripleDisjunction.make((0, 2, 5), {t for t in ALL_TRIPLES
                                              if t not in ((1, -1, -1), (-1, 1, 1))})
        assert relation_readings(c, (0, 2, 5), self.names) == ["-a=b=-c", "-a=b=c", "-a=-b=-c"]

    def test_self_contradiction(self):
        assert is_self_contradicting("-c=c=-a")
        assert is_self_contradicting("a=-a=b")
        assert not is_self_contradicting("-c=-c=-a")

    def test_pairs(self):
        assert render_relation(0, 1, -1, self.names) == "a and -a"
        assert render_relation(3, 5, -1, self.names) == "b = -c"
        assert render_relation(5, 0, 1, self.names) == "a = c"
        assert render_constraint(OppositePair(3, 5)) == "x3 = -x5"

    def test_triple_text(self):
        c = TripleDisjunction.make((1, 2, 4), {(1, 1, 1), (-1, -1, -1)})
        assert render_constraint(c) == "(x1,x2,x4) in { x1=x2=x4 }"
        assert render_constraint(UNSATISFIABLE) == "UNSATISFIABLE"

    def test_json(self):
        c = TripleDisjunction.make((1, 2, 4), {(1, 1, 1), (-1, -1, -1)})
        out = constraint_to_json(c, step=7)
        assert out["step"] == 7 and out["kind"] == "triple"
        assert out["patterns"] == [[1, 1, 1], [-1, -1, -1]]
        assert constraint_to_json(OppositePair(1, 2))["kind"] == "opposite"
