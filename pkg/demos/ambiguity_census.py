#!/usr/bin/env python3
"""How ambiguous is direct manipulation over the bundled corpus?

For every bundled program this counts the draggable zones, how many have
exactly one candidate rewrite versus several, the mean number of
candidates per ambiguous zone, and how many drag equations the solver
can actually discharge.

Run:  python3 demos/ambiguity_census.py [--timings]
"""

import sys

from littlesync import program_names, program_source
from littlesync.census import census, format_table


def main() -> None:
    rows = [census(program_source(name), name=name) for name in program_names()]
    print(format_table(rows, timings="--timings" in sys.argv[1:]))
    total_zones = sum(r.zones for r in rows)
    total_ambiguous = sum(r.ambiguous for r in rows)
    print(
        f"\n{total_ambiguous} of {total_zones} zones across the corpus admit more"
        " than one rewrite — ambiguity is the norm, which is why zone"
        " assignment and the candidate picker exist."
    )


if __name__ == "__main__":
    main()
