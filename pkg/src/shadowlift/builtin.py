"""Built-in instances: the unliftable example movie and the three-pair family."""

from __future__ import annotations

from importlib import resources

from .constraints import (
    OppositePair,
    SignConstraintSystem,
    UNSATISFIABLE,
    implied_parities,
    is_self_contradicting,
    relation_readings,
    render_relation,
    simplify,
)
from .movie import Movie, check_liftability, parse_movie

# crossing id -> the sign expression it carries in the narrative
PAPER_EXAMPLE_NAMES = {0: "-a", 1: "a", 2: "b", 3: "-b", 4: "c", 5: "-c"}

# corner order in which each triangle's relations are read
PAPER_EXAMPLE_R3_ORDERS = ((0, 2, 5), (5, 4, 0), (1, 0, 2))


def paper_example_text() -> str:
    return resources.files("shadowlift.data").joinpath("paper_example.smv").read_text()


def paper_example() -> Movie:
    """Unknot, three R2 births with ear rolls between, three R3s, one R2 removal."""
    return parse_movie(paper_example_text())


def paper_example_ledger() -> list[str]:
    """The running constraint ledger in sign notation, ending with the contradiction."""
    names = PAPER_EXAMPLE_NAMES
    movie = paper_example()
    report = check_liftability(movie)
    system = report.system
    orders = iter(PAPER_EXAMPLE_R3_ORDERS)
    lines = []
    for k, (step, c) in enumerate(system.constraints):
        label = movie.steps[step].kind.value
        if isinstance(c, OppositePair):
            lines.append(f"step {step} {label}: {render_relation(c.x, c.y, -1, names)}")
            continue
        order = next(orders)
        readings = relation_readings(c, order, names)
        shown = [f"~{r}~" if is_self_contradicting(r) else r for r in readings]
        lines.append(f"step {step} {label}: " + " or ".join(shown))
        reduced = simplify(c, system.prefix(k))
        if reduced is not UNSATISFIABLE and len(reduced.patterns) == 2:
            implied = [render_relation(u, v, p, names)
                       for (u, v), p in implied_parities(reduced).items()
                       if not {u, v} <= _pair_of(u, system.prefix(k))]
            if implied:
                lines.append("    => " + ", ".join(sorted(set(implied))))
    if not report.liftable:
        lines.append(f"step {report.conflict_step}: contradiction, no sign assignment lifts the movie")
    return lines


def _pair_of(u: int, context: SignConstraintSystem) -> set[int]:
    for _, c in context.constraints:
        if isinstance(c, OppositePair) and u in c.variables:
            return set(c.variables)
    return {u}


def fig1_system() -> SignConstraintSystem:
    """Three crossings, each pair of which some move requires to have opposite signs."""
    system = SignConstraintSystem((0, 1, 2))
    for k, (x, y) in enumerate(((0, 1), (1, 2), (0, 2))):
        system.add(k, OppositePair(x, y))
    return system


__all__ = [
    "PAPER_EXAMPLE_NAMES",
    "PAPER_EXAMPLE_R3_ORDERS",
    "fig1_system",
    "paper_example",
    "paper_example_ledger",
    "paper_example_text",
]
