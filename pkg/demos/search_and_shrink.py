"""Find an unliftable movie by random walk, shrink it, and draw the conflict.

    python demos/search_and_shrink.py [seed]

Writes the shrunk movie and an SVG of the frame before the fatal move into
the current directory.
"""

import sys
from pathlib import Path

from shadowlift import SearchConfig, check_liftability, search, serialize_movie, shrink
from shadowlift.export import to_svg

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 12
result = search(SearchConfig(seed=seed, stop_at_first=True))
if not result.finds:
    sys.exit(f"seed {seed}: nothing found in {result.steps_explored} steps")

found = result.finds[0]
small = shrink(found)
report = check_liftability(small)
print(f"seed {seed}: found after {result.find_steps[0]} steps, "
      f"{len(found)} moves, shrunk to {len(small)}")
for line in report.ledger():
    print("  " + line)

Path(f"shrunk-{seed}.smv").write_text(serialize_movie(small))
Path(f"conflict-{seed}.svg").write_text(to_svg(small.frames[-2]))
print(f"wrote shrunk-{seed}.smv and conflict-{seed}.svg")
