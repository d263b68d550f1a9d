#!/usr/bin/env python3
"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py            # all ten
    python3 scripts/run_acceptance.py 3 7       # a subset
    python3 scripts/run_acceptance.py --json out.json
"""

import argparse
import json
import sys

from padicfact.acceptance import RUNNERS, run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("numbers", type=int, nargs="*", help="criteria to run (default: all)")
    ap.add_argument("--json", help="write the full reports here")
    a = ap.parse_args()
    bad = [n for n in a.numbers if n not in RUNNERS]
    if bad:
        ap.error(f"unknown criteria {bad}")
    results = run_all(a.numbers or None, echo=True)
    npass = sum(r.passed for r in results)
    print(f"{npass}/{len(results)} criteria passed")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2, sort_keys=True, default=str)
    return 0 if npass == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
