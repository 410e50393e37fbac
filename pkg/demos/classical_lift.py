"""Lift a short shadow movie to a classical one and inspect the signs.

Kinks and bigons are added at random until a triangle appears, and the
triangle move is applied.  The solver picks the lexicographically smallest
sign assignment; we print it frame by frame next to the number of lifts
found by brute force.  The last line resolves the final frame descending
from dart 0.
"""

import random

from shadowlift import Movie, check_liftability, crossingless, descending_resolution
from shadowlift.movie import replay
from shadowlift.moves import MoveKind, apply_move, enumerate_moves
from shadowlift.solver import count_solutions

rng = random.Random(1)
d = crossingless()
steps = []
while True:
    triangles = enumerate_moves(d, (MoveKind.R3,))
    move = triangles[0] if triangles else rng.choice(
        enumerate_moves(d, (MoveKind.R1_CREATE, MoveKind.R2_CREATE)))
    steps.append(move)
    d, _ = apply_move(d, move)
    if move.kind == MoveKind.R3:
        break
movie = Movie(crossingless(), tuple(steps))

report = check_liftability(movie)
print(report.verdict, "with", count_solutions(replay(movie)), "lifts in total")
for frame, label in zip(report.witness.frames, ("start",) + report.witness.labels):
    signs = " ".join(f"{c}{'+' if s > 0 else '-'}" for c, s in sorted(frame.signs.items()))
    print(f"  {label:40s} {signs or '(no crossings)'}")

print("descending resolution of the last frame:", descending_resolution(movie.final))
