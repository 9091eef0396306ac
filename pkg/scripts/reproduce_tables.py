#!/usr/bin/env python3
"""Recompute all seven reference tables and write CSV + comparison JSON.

Usage: python scripts/reproduce_tables.py [--out results] [--lfa-only]

The measured-rate columns (tables 3-5) take a few minutes; --lfa-only
skips them.
"""

import argparse
import json
import pathlib
import time

from polymg.tables import reproduce_table


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--lfa-only", action="store_true")
    ap.add_argument("--tables", type=int, nargs="*", default=list(range(1, 8)))
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for index in args.tables:
        t0 = time.time()
        result = reproduce_table(index, experiments=not args.lfa_only)
        (out / f"table{index}.csv").write_text(result.csv())
        with open(out / f"table{index}.compare.json", "w") as f:
            json.dump(result.comparison(), f, indent=2)
        bad = [c for c in result.comparison()["cells"]
               if not c["within_tolerance"]
               and "documented_discrepancy" not in c]
        status = "ok" if not bad else f"{len(bad)} cells out of tolerance"
        print(f"table {index}: {status} ({time.time() - t0:.1f}s)")
        for note in result.notes:
            print(f"  note: {note}")


if __name__ == "__main__":
    main()
