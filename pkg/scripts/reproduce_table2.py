"""Compare every voting tree against the closed-form table and write a report.

Usage: python3 scripts/reproduce_table2.py [--out table2_report.txt] [--narrow]

The report lists one line per compared value and ends with per-cell
mismatch counts. ``--narrow`` only skips outcomes actually decided by a
tie lottery instead of every tie-reachable ballot sequence.
"""

import argparse
import time
from collections import Counter

from respcalc.scenarios import verify_table2


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="table2_report.txt")
    ap.add_argument("--narrow", action="store_true")
    args = ap.parse_args()
    start = time.perf_counter()
    reports = [verify_table2(n_values=(3, 5), tie_reachable=not args.narrow),
               verify_table2(["two-option-majority", "random-dictator"], n_values=(7,),
                             tie_reachable=not args.narrow)]
    secs = time.perf_counter() - start
    rows = [r for rep in reports for r in rep.rows]
    bad = Counter(f"{r.method.value} v{r.variant.value} {r.direction}" for r in rows if not r.match)
    with open(args.out, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(("ok   " if r.match else "DIFF ") + r.describe() + "\n")
        fh.write(f"\n{len(rows)} rows, {sum(bad.values())} mismatches, {secs:.1f}s\n")
        fh.write("skipped: knife-edge {}, tie {}, no closed form {}\n".format(
            sum(x.skipped_knife_edge for x in reports), sum(x.skipped_tie for x in reports),
            sum(x.skipped_unparameterized for x in reports)))
        for cell, n in sorted(bad.items()):
            fh.write(f"  {cell}: {n}\n")
    print(f"{len(rows)} rows, {sum(bad.values())} mismatches; report in {args.out}")


if __name__ == "__main__":
    main()
