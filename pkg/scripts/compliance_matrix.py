"""Build the variant-by-axiom compliance matrix and compare it with the expected table.

Usage: python3 scripts/compliance_matrix.py [--budget 1000] [--seed 0] [--out matrix.txt]

Each differing cell is printed with its witness, so every disagreement can
be replayed with ``respcalc check``.
"""

import argparse
import time

from respcalc.axioms import TABLE1_EXPECTED, GeneratorConfig, compliance_matrix
from respcalc.tree_io import serialize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="matrix.txt")
    args = ap.parse_args()
    start = time.perf_counter()
    m = compliance_matrix(config=GeneratorConfig(seed=args.seed), budget=args.budget)
    secs = time.perf_counter() - start
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(m.to_text())
        fh.write(f"{secs:.0f}s\n\n")
        for (v, a), cell in m.cells.items():
            expected = TABLE1_EXPECTED[v][a]
            if cell.status.value == expected:
                continue
            fh.write(f"{a.value} variant {v.value}: {cell.status.value}, expected {expected}\n")
            fh.write(f"  {cell.summary()}\n")
            if cell.witness is not None:
                fh.write(serialize(cell.witness.instance.doc) + "\n")
    print(m.to_text(), end="")
    print(f"details in {args.out}")


if __name__ == "__main__":
    main()
