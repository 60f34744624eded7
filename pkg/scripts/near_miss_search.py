#!/usr/bin/env python3
"""Random search for blocks that nearly satisfy the criterion.

Ranks candidates by the total cross-multiplied gap over all ancestral sets;
gap 0 means a block-transitive 2-design.  Useful for poking at structures
too large to enumerate.
"""
import argparse
import random

from gwpdesign import BlockStructure, check_criterion
from gwpdesign.blockstructure import parse_structure_text
from gwpdesign.design import random_block


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("structure", help="structure file (elements/rel/sizes lines)")
    ap.add_argument("-k", type=int, required=True, help="block size")
    ap.add_argument("--tries", type=int, default=20000)
    ap.add_argument("--top", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    with open(args.structure) as fh:
        s: BlockStructure = parse_structure_text(fh.read())
    rng = random.Random(args.seed)
    scored = {}
    for _ in range(args.tries):
        b = random_block(s, rng, k=args.k)
        if b.points not in scored:
            scored[b.points] = sum(v.gap for v in check_criterion(b).verdicts)
    best = sorted((gap, pts) for pts, gap in scored.items())[: args.top]
    for gap, pts in best:
        print(gap, " ".join(",".join(map(str, p)) for p in pts))


if __name__ == "__main__":
    main()
