#!/usr/bin/env python3
"""Build every family member in range, run the criterion and print a summary.

    python scripts/reproduce_families.py            # default p ranges
    python scripts/reproduce_families.py --max-p 5  # push |I| = 3 families further
"""
import argparse
import time

from gwpdesign.constructions import P_CAP, FamilySpec, verify_family


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-p", type=int, default=4, help="largest p for chgrid, v, vinv")
    ap.add_argument("--max-p-n", type=int, default=3, help="largest p for the N-poset family")
    ap.add_argument("--pair-budget", type=int, default=None)
    args = ap.parse_args()

    print(f"{'family':>7} {'p':>2} {'v':>12} {'k':>6} {'verdicts':>8} {'mu':>5} {'orbit':>5} {'pairs':>7} {'time':>7}")
    for family in ("chgrid", "v", "vinv", "n"):
        top = args.max_p_n if family == "n" else args.max_p
        for p in range(2, top + 1):
            t0 = time.perf_counter()
            r = verify_family(FamilySpec(family, p), pair_budget=args.pair_budget, p_cap=max(top, P_CAP[family]))
            dt = time.perf_counter() - t0
            held = sum(v.holds for v in r.criterion.verdicts)
            pairs = "skip" if r.pair_oracle_skipped else ("ok" if r.pairs_match else "BAD")
            print(
                f"{family:>7} {p:>2} {r.structure.v:>12} {r.block.k:>6} "
                f"{held:>3}/{len(r.criterion.verdicts):<4} {'ok' if r.mu_match else 'BAD':>5} "
                f"{'ok' if r.orbit_match else 'BAD':>5} {pairs:>7} {dt:>6.2f}s"
            )


if __name__ == "__main__":
    main()
