#!/usr/bin/env python3
"""Compare the criterion with brute-force enumeration of B^F on tiny structures.

Prints, per structure, how many random blocks were tried, how many turned out
to be 2-designs, and how many verdicts disagreed (expected: none).  Block
sizes are drawn uniformly from 1..v so that positive cases actually occur.
"""
import argparse
import random
import time

from gwpdesign import BlockStructure, Poset
from gwpdesign.design import enumerate_design, random_block
from gwpdesign.gwp import enumerate_group, induced_permutations

STRUCTURES = {
    "chain(2,2)": (Poset.chain(2), (2, 2)),
    "chain(2,3)": (Poset.chain(2), (2, 3)),
    "chain(3,2)": (Poset.chain(2), (3, 2)),
    "antichain(2,2)": (Poset.antichain(2), (2, 2)),
    "antichain(2,3)": (Poset.antichain(2), (2, 3)),
    "chain(2,2,2)": (Poset.chain(3), (2, 2, 2)),
    "grid 1<3, 2": (Poset.from_relations([1, 2, 3], [(1, 3)]), (2, 2, 2)),
    "V 1<2, 1<3": (Poset.from_relations([1, 2, 3], [(1, 2), (1, 3)]), (2, 2, 2)),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--blocks", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    for name, (poset, sizes) in STRUCTURES.items():
        s = BlockStructure(poset, sizes)
        t0 = time.perf_counter()
        perms = induced_permutations(enumerate_group(s))
        designs = disagree = 0
        for _ in range(args.blocks):
            b = random_block(s, rng, k=rng.randint(1, s.v))
            d = enumerate_design(b, elements=perms)
            designs += d.is_2_design
            disagree += not d.agrees
        dt = time.perf_counter() - t0
        print(f"{name:>15}  v={s.v:<3} |F|={len(perms):<5} designs={designs:<5} disagreements={disagree}  {dt:.2f}s")


if __name__ == "__main__":
    main()
