"""Satisfiability of sign constraint systems.

Opposite pairs go into a parity union-find; each triple disjunction becomes a
choice among its antipodal pattern classes, each of which is a pair of parity
relations.  A pattern whose negation is not allowed pins all three signs.  Backtracking picks the most constrained triple first.
:func:`all_solutions` is the brute-force enumerator used as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constraints import Constraint, OppositePair, SignConstraintSystem, TripleDisjunction
from .errors import PopOnEmpty, TooManyVariables
from .unionfind import ParityUnionFind

MAX_ENUMERATION_VARIABLES = 24

# pseudo-variable fixed at sign +1, used to pin individual signs
_PLUS = ("+",)


@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    assignment: dict | None = None
    conflict_index: int | None = None  # smallest k with constraints[0..k] UNSAT
    conflict_step: int | None = None

    def __bool__(self) -> bool:
        return self.satisfiable


def _alternatives(c: TripleDisjunction) -> list[tuple[tuple, ...]]:
    """Each alternative is a tuple of (u, v, parity) unions."""
    a, b, z = c.vars
    out = set()
    for t in c.patterns:
        if tuple(-s for s in t) in c.patterns:
            out.add(((a, b, int(t[0] != t[1])), (a, z, int(t[0] != t[2]))))
        else:
            out.add(tuple((v, _PLUS, int(s == -1)) for v, s in zip(c.vars, t)))
    return sorted(out, key=repr)


def _try(uf: ParityUnionFind, alt) -> bool:
    return all(uf.union(u, v, p) for u, v, p in alt)


def _backtrack(uf: ParityUnionFind, triples: list[TripleDisjunction]) -> bool:
    """Extend ``uf`` so every triple holds; on success unions stay applied."""
    if not triples:
        return True
    best = None
    for idx, c in enumerate(triples):
        ok = []
        for alt in _alternatives(c):
            mark = uf.mark()
            if _try(uf, alt):
                ok.append(alt)
            uf.rollback(mark)
        if not ok:
            return False
        if best is None or len(ok) < len(best[1]):
            best = (idx, ok)
            if len(ok) == 1:
                break
    idx, ok = best
    rest = triples[:idx] + triples[idx + 1:]
    for alt in ok:
        mark = uf.mark()
        _try(uf, alt)
        if _backtrack(uf, rest):
            return True
        uf.rollback(mark)
    return False


def _assignment(uf: ParityUnionFind, variables: Iterable) -> dict:
    out = {}
    for v in variables:
        rel = uf.relation(v, _PLUS)
        if rel is None:
            rel = uf.find(v)[1]
        out[v] = 1 if rel == 0 else -1
    return out


def _feasible(constraints: Sequence[Constraint], pins: dict | None = None):
    """Return a satisfied ParityUnionFind or None."""
    uf = ParityUnionFind()
    uf.add(_PLUS)
    triples = []
    for c in constraints:
        if isinstance(c, OppositePair):
            if not uf.union(c.x, c.y, 1):
                return None
        else:
            triples.append(c)
    for v, s in (pins or {}).items():
        if not uf.union(v, _PLUS, 0 if s == 1 else 1):
            return None
    return uf if _backtrack(uf, triples) else None


def _constraints(s) -> list[Constraint]:
    return [c for _, c in s.constraints] if isinstance(s, SignConstraintSystem) else list(s)


def _variables(s: SignConstraintSystem) -> list[int]:
    vs = set(s.variables)
    for _, c in s.constraints:
        vs.update(c.variables)
    return sorted(vs)


def is_satisfiable(constraints: Sequence[Constraint]) -> bool:
    return _feasible(constraints) is not None


def solve(s: SignConstraintSystem) -> SolveResult:
    """SAT with a full witness, or UNSAT with the shortest failing prefix."""
    cons = _constraints(s)
    uf = _feasible(cons)
    if uf is not None:
        return SolveResult(True, _assignment(uf, _variables(s)))
    lo, hi = 0, len(cons) - 1  # prefix through hi is UNSAT
    while lo < hi:
        mid = (lo + hi) // 2
        if is_satisfiable(cons[:mid + 1]):
            lo = mid + 1
        else:
            hi = mid
    return SolveResult(False, conflict_index=hi, conflict_step=s.constraints[hi][0])


def lex_min_solution(s: SignConstraintSystem) -> dict | None:
    """Lexicographically smallest witness by variable id, with -1 < +1."""
    cons = _constraints(s)
    if _feasible(cons) is None:
        return None
    pins: dict = {}
    for v in _variables(s):
        pins[v] = -1
        if _feasible(cons, pins) is None:
            pins[v] = 1
    return pins


def all_solutions(s: SignConstraintSystem) -> list[dict]:
    """Exact solution set by exhaustive enumeration."""
    variables = _variables(s)
    n = len(variables)
    if n > MAX_ENUMERATION_VARIABLES:
        raise TooManyVariables(f"{n} variables exceed the enumeration limit")
    index = {v: k for k, v in enumerate(variables)}
    codes = np.arange(1 << n, dtype=np.int64)
    # bit k set <=> variable k has sign -1
    signs = [1 - 2 * ((codes >> k) & 1) for k in range(n)]
    ok = np.ones(1 << n, dtype=bool)
    for c in _constraints(s):
        if isinstance(c, OppositePair):
            ok &= signs[index[c.x]] != signs[index[c.y]]
        else:
            a, b, z = (signs[index[v]] for v in c.vars)
            hit = np.zeros(1 << n, dtype=bool)
            for t in c.patterns:
                hit |= (a == t[0]) & (b == t[1]) & (z == t[2])
            ok &= hit
    return [
        {v: int(signs[k][i]) for v, k in index.items()}
        for i in np.flatnonzero(ok)
    ]


def count_solutions(s: SignConstraintSystem) -> int:
    return len(all_solutions(s))


class Session:
    """Incremental push/pop satisfiability checks over a constraint stack.

    Opposite pairs are merged into a persistent union-find as they are
    pushed.  A satisfying witness is carried forward; a pushed triple only
    triggers a search when the witness violates it.  Once some prefix is
    UNSAT every deeper state is UNSAT without further work.
    """

    def __init__(self):
        self._uf = ParityUnionFind()
        self._uf.add(_PLUS)
        # (constraint, uf mark, prior witness, prior status, pushed as triple)
        self._stack: list[tuple] = []
        self._triples: list[TripleDisjunction] = []
        self._conflict_depth: int | None = None
        self._witness: dict | None = {}
        self._status: bool | None = True

    def __len__(self) -> int:
        return len(self._stack)

    @property
    def constraints(self) -> list[Constraint]:
        return [entry[0] for entry in self._stack]

    def push(self, c: Constraint) -> None:
        mark = self._uf.mark()
        is_triple = self._conflict_depth is None and isinstance(c, TripleDisjunction)
        self._stack.append((c, mark, self._witness, self._status, is_triple))
        if self._conflict_depth is not None:
            return
        if isinstance(c, OppositePair):
            if not self._uf.union(c.x, c.y, 1):
                self._conflict_depth = len(self._stack)
                self._status, self._witness = False, None
                return
        else:
            self._triples.append(c)
        if self._status and self._witness is not None:
            extended = self._extend(self._witness, c)
            if extended is not None:
                self._witness = extended
                return
        self._status, self._witness = None, None

    @staticmethod
    def _extend(witness: dict, c: Constraint):
        vs = c.variables
        free = [v for v in vs if v not in witness]
        if isinstance(c, OppositePair):
            x, y = vs
            if not free:
                return witness if witness[x] == -witness[y] else None
            new = dict(witness)
            if len(free) == 2:
                new[x], new[y] = 1, -1
            else:
                known = y if x in free else x
                new[free[0]] = -witness[known]
            return new
        for t in sorted(c.patterns, reverse=True):
            if all(witness.get(v, s) == s for v, s in zip(vs, t)):
                new = dict(witness)
                new.update(zip(vs, t))
                return new
        return None

    def pop(self) -> Constraint:
        if not self._stack:
            raise PopOnEmpty("pop on an empty session")
        c, mark, witness, status, is_triple = self._stack.pop()
        self._uf.rollback(mark)
        if is_triple:
            self._triples.pop()
        if self._conflict_depth is not None and len(self._stack) < self._conflict_depth:
            self._conflict_depth = None
        self._witness, self._status = witness, status
        return c

    def check(self) -> bool:
        if self._conflict_depth is not None:
            return False
        if self._status is None:
            mark = self._uf.mark()
            ok = _backtrack(self._uf, list(self._triples))
            if ok:
                variables = {v for c in self.constraints for v in c.variables}
                self._witness = _assignment(self._uf, sorted(variables))
            self._uf.rollback(mark)
            self._status = ok
            if not ok:
                self._conflict_depth = len(self._stack)
        return bool(self._status)

    @property
    def witness(self) -> dict | None:
        return dict(self._witness) if self.check() and self._witness is not None else None
