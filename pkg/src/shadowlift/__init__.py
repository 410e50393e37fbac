"""Shadow knot diagrams, shadow Reidemeister movies, and their classical lifts."""

from .builtin import fig1_system, paper_example, paper_example_ledger
from .constraints import (
    OppositePair,
    SignConstraintSystem,
    TripleDisjunction,
    derive_move_constraints,
    derive_r3_constraint,
    render_constraint,
    simplify,
)
from .diagram import (
    ShadowDiagram,
    canonical_form,
    crossingless,
    format_diagram,
    from_gauss_word,
    from_traversal_code,
    local_frame_sign,
    parse_diagram,
    reverse_orientation,
    trace_faces,
)
from .errors import ShadowError
from .movie import (
    ClassicalMovie,
    LiftReport,
    Movie,
    check_liftability,
    descending_resolution,
    expand_ear_rolls,
    extract_lift,
    parse_movie,
    replay,
    reverse_movie,
    serialize_movie,
)
from .moves import Move, MoveKind, MoveTrace, apply_move, enumerate_moves, expand_ear_roll
from .search import SearchConfig, random_walk, search, shrink
from .solver import Session, all_solutions, lex_min_solution, solve

__version__ = "0.1.0"

__all__ = [
    "ClassicalMovie",
    "LiftReport",
    "Move",
    "MoveKind",
    "MoveTrace",
    "Movie",
    "OppositePair",
    "SearchConfig",
    "Session",
    "ShadowDiagram",
    "ShadowError",
    "SignConstraintSystem",
    "TripleDisjunction",
    "all_solutions",
    "apply_move",
    "canonical_form",
    "check_liftability",
    "crossingless",
    "derive_move_constraints",
    "derive_r3_constraint",
    "descending_resolution",
    "expand_ear_rolls",
    "enumerate_moves",
    "expand_ear_roll",
    "extract_lift",
    "fig1_system",
    "format_diagram",
    "from_gauss_word",
    "from_traversal_code",
    "lex_min_solution",
    "local_frame_sign",
    "paper_example",
    "paper_example_ledger",
    "parse_diagram",
    "parse_movie",
    "random_walk",
    "render_constraint",
    "replay",
    "reverse_movie",
    "reverse_orientation",
    "search",
    "serialize_movie",
    "shrink",
    "simplify",
    "solve",
    "trace_faces",
]
