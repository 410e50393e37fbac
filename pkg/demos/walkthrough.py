"""Replay the built-in unliftable movie and watch its lift space shrink.

After each step we print the move, the constraints it adds, and how many
sign assignments still lift the movie so far.  The count drops to zero at
the last step.

    python demos/walkthrough.py
"""

from shadowlift.builtin import PAPER_EXAMPLE_NAMES, paper_example
from shadowlift.constraints import render_constraint
from shadowlift.movie import replay
from shadowlift.moves import format_move
from shadowlift.solver import count_solutions

movie = paper_example()
names = PAPER_EXAMPLE_NAMES

print(f"{len(movie)} steps, crossings named {names}\n")
for k, step in enumerate(movie.steps):
    lifts = count_solutions(replay(movie.prefix(k + 1)))
    print(f"{k:2d}  {format_move(step):40s} lifts: {lifts}")
    for c in movie.step_constraints[k]:
        print(f"      {render_constraint(c, names)}")
