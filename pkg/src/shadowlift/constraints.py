"""Sign constraints that a classical lift of a shadow movie must satisfy.

Each crossing id names one sign variable in ``{+1, -1}``.  An R2 move relates
its two crossings by an :class:`OppositePair`; an R3 move restricts its three
corners to the sign triples coming from some height order of the three
strands (a :class:`TripleDisjunction`).  All other moves are free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .diagram import ShadowDiagram, local_frame_sign
from .errors import DegenerateTriangle, TraceMismatch
from .moves import Move, MoveKind, MoveTrace
from .unionfind import ParityUnionFind

SignTriple = tuple[int, int, int]
ALL_TRIPLES: tuple[SignTriple, ...] = tuple(itertools.product((1, -1), repeat=3))


@dataclass(frozen=True)
class OppositePair:
    x: int
    y: int

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("an opposite pair needs two distinct variables")
        if self.x > self.y:
            x, y = self.y, self.x
            object.__setattr__(self, "x", x)
            object.__setattr__(self, "y", y)

    @property
    def variables(self) -> tuple[int, ...]:
        return (self.x, self.y)

    def holds(self, signs: Mapping[int, int]) -> bool:
        return signs[self.x] == -signs[self.y]


@dataclass(frozen=True)
class TripleDisjunction:
    """``(sign(v0), sign(v1), sign(v2))`` must be one of ``patterns``.

    Stored with variables sorted ascending; use :meth:`make` to build from an
    arbitrary variable order.
    """

    vars: tuple[int, int, int]
    patterns: frozenset

    @classmethod
    def make(cls, variables: Sequence[int], patterns) -> "TripleDisjunction":
        if len(set(variables)) != 3:
            raise ValueError("a triple disjunction needs three distinct variables")
        order = sorted(range(3), key=lambda k: variables[k])
        vs = tuple(variables[k] for k in order)
        pats = frozenset(tuple(t[k] for k in order) for t in patterns)
        return cls(vs, pats)

    @property
    def variables(self) -> tuple[int, ...]:
        return self.vars

    def holds(self, signs: Mapping[int, int]) -> bool:
        return tuple(signs[v] for v in self.vars) in self.patterns

    def in_order(self, variables: Sequence[int]) -> list[SignTriple]:
        """Patterns re-expressed in the given variable order."""
        idx = [self.vars.index(v) for v in variables]
        return [tuple(t[k] for k in idx) for t in self.patterns]


Constraint = Union[OppositePair, TripleDisjunction]


class _Unsatisfiable:
    def __repr__(self):
        return "UNSATISFIABLE"


UNSATISFIABLE = _Unsatisfiable()


@dataclass
class SignConstraintSystem:
    variables: tuple[int, ...] = ()
    constraints: list = field(default_factory=list)  # (step, Constraint)

    def add(self, step: int, constraint: Constraint) -> None:
        self.constraints.append((step, constraint))

    def prefix(self, k: int) -> "SignConstraintSystem":
        """System made of the first ``k`` constraints."""
        return SignConstraintSystem(self.variables, list(self.constraints[:k]))

    def holds(self, signs: Mapping[int, int]) -> bool:
        return all(c.holds(signs) for _, c in self.constraints)


# -- derivation -----------------------------------------------------------

def triangle_passages(d: ShadowDiagram, corners, strands) -> dict[int, dict[int, int]]:
    """For each corner crossing: strand index -> visit position on that strand."""
    n = len(d.code)
    out: dict[int, dict[int, int]] = {c: {} for c in corners}
    for k, e in enumerate(strands):
        for v in (e, (e + 1) % n):
            c = d.code[v][0]
            if c not in out or k in out[c]:
                raise DegenerateTriangle("strand does not run between two distinct corners")
            out[c][k] = v
    if any(len(p) != 2 for p in out.values()):
        raise DegenerateTriangle("each corner must join exactly two strands")
    return out


def derive_r3_constraint(d: ShadowDiagram, corners, strands) -> TripleDisjunction:
    """Sign triples allowed by the six height orders of the triangle strands."""
    if len(set(corners)) != 3 or len(set(strands)) != 3:
        raise DegenerateTriangle("R3 needs three distinct corners and strands")
    passages = triangle_passages(d, corners, strands)
    allowed = set()
    for height in itertools.permutations(range(3)):
        triple = []
        for c in corners:
            (i, vi), (j, vj) = sorted(passages[c].items())
            over = vi if height[i] > height[j] else vj
            triple.append(local_frame_sign(d, c, over))
        allowed.add(tuple(triple))
    return TripleDisjunction.make(corners, allowed)


def _r3_roles(d: ShadowDiagram, m: Move):
    face = d.face_of(m.site[0])
    return d.face_corners(face), tuple(x // 2 for x in face)


def derive_move_constraints(d_before: ShadowDiagram, m: Move, trace: MoveTrace) -> list[Constraint]:
    kind = MoveKind(m.kind)
    if trace.kind != kind:
        raise TraceMismatch(f"trace of {trace.kind} given for move {kind}")
    if kind == MoveKind.R2_CREATE:
        if len(trace.born) != 2:
            raise TraceMismatch("R2+ must birth two crossings")
        return [OppositePair(*trace.born)]
    if kind == MoveKind.R2_REMOVE:
        if len(trace.died) != 2:
            raise TraceMismatch("R2- must remove two crossings")
        return [OppositePair(*trace.died)]
    if kind == MoveKind.R3:
        corners, strands = _r3_roles(d_before, m)
        if set(corners) != set(trace.corners):
            raise TraceMismatch("R3 trace corners differ from the site")
        return [derive_r3_constraint(d_before, corners, strands)]
    if kind in (MoveKind.R1_CREATE, MoveKind.R1_REMOVE) and trace.born + trace.died == ():
        raise TraceMismatch("R1 must birth or remove one crossing")
    return []


# -- simplification -------------------------------------------------------

def _parity_context(context: SignConstraintSystem | Sequence) -> ParityUnionFind:
    items = context.constraints if isinstance(context, SignConstraintSystem) else context
    uf = ParityUnionFind()
    for item in items:
        c = item[1] if isinstance(item, tuple) else item
        if isinstance(c, OppositePair):
            uf.union(c.x, c.y, 1)
    return uf


def _consistent(uf: ParityUnionFind, variables, pattern) -> bool:
    for (u, su), (v, sv) in itertools.combinations(zip(variables, pattern), 2):
        rel = uf.relation(u, v)
        if rel is not None and rel != (su != sv):
            return False
    return True


def simplify(c: Constraint, context):
    """Drop alternatives contradicting the opposite pairs in ``context``.

    Returns the reduced constraint, or :data:`UNSATISFIABLE` when nothing
    survives.
    """
    uf = _parity_context(context)
    if isinstance(c, OppositePair):
        return c if _consistent(uf, c.variables, (1, -1)) else UNSATISFIABLE
    kept = frozenset(t for t in c.patterns if _consistent(uf, c.vars, t))
    if not kept:
        return UNSATISFIABLE
    return TripleDisjunction(c.vars, kept)


def implied_parities(c: TripleDisjunction) -> dict[tuple[int, int], int]:
    """Pairs whose sign product is the same in every allowed pattern."""
    out = {}
    for i, j in itertools.combinations(range(3), 2):
        prods = {t[i] * t[j] for t in c.patterns}
        if len(prods) == 1:
            out[(c.vars[i], c.vars[j])] = prods.pop()
    return out


# -- rendering ------------------------------------------------------------

def _name(v: int, names: Mapping[int, str] | None) -> str:
    if names and v in names:
        return names[v]
    return f"x{v}"


def negate(expr: str) -> str:
    return expr[1:] if expr.startswith("-") else f"-{expr}"


def relation_readings(c: TripleDisjunction, order: Sequence[int] | None = None,
                      names: Mapping[int, str] | None = None) -> list[str]:
    """Allowed patterns as ``E1=E2=E3`` relations, one per antipodal pair."""
    order = list(order or c.vars)
    exprs = [_name(v, names) for v in order]
    reps = sorted({t if t[0] == 1 else tuple(-s for s in t) for t in c.in_order(order)},
                  reverse=True)
    out = []
    for t in reps:
        terms = [e if s == 1 else negate(e) for e, s in zip(exprs, t)]
        out.append("=".join(terms))
    return out


def is_self_contradicting(reading: str) -> bool:
    terms = reading.split("=")
    bases = {}
    for t in terms:
        base, neg = (t[1:], True) if t.startswith("-") else (t, False)
        if bases.setdefault(base, neg) != neg:
            return True
    return False


def render_relation(u: int, v: int, product: int,
                    names: Mapping[int, str] | None = None) -> str:
    """``sign(u) * sign(v) == product`` as a normalized equation.

    Terms are ordered by name and written with a positive left side; a
    relation that holds by the naming alone reads ``a and -a``.
    """
    lhs = _name(u, names)
    rhs = _name(v, names) if product == 1 else negate(_name(v, names))
    if lhs.lstrip("-") > rhs.lstrip("-"):
        lhs, rhs = rhs, lhs
    if lhs.startswith("-"):
        lhs, rhs = negate(lhs), negate(rhs)
    if lhs == rhs:
        return f"{lhs} and {negate(lhs)}"
    return f"{lhs} = {rhs}"


def render_constraint(c, names: Mapping[int, str] | None = None,
                      order: Sequence[int] | None = None) -> str:
    if c is UNSATISFIABLE:
        return "UNSATISFIABLE"
    if isinstance(c, OppositePair):
        return render_relation(c.x, c.y, -1, names)
    order = list(order or c.vars)
    head = "(" + ",".join(f"x{v}" for v in order) + ")"
    return f"{head} in {{ " + " | ".join(relation_readings(c, order, names)) + " }"


def constraint_to_json(c: Constraint, step: int | None = None,
                       names: Mapping[int, str] | None = None) -> dict:
    out: dict = {}
    if step is not None:
        out["step"] = step
    if isinstance(c, OppositePair):
        out.update(kind="opposite", vars=[c.x, c.y])
    else:
        out.update(kind="triple", vars=list(c.vars),
                   patterns=sorted([list(t) for t in c.patterns], reverse=True))
    out["text"] = render_constraint(c, names)
    return out
