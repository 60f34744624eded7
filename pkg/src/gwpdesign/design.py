"""The 2-design criterion for B^F, its pair-count oracle, and brute force.

All comparisons are cross-multiplied integer equalities; nothing here uses
rationals or floats.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Hashable, Iterable

import numpy as np

from .blockstructure import Block, BlockStructure, StructureError
from .gwp import (
    DEFAULT_GROUP_CAP,
    DEFAULT_V_CAP,
    ComponentGroups,
    enumerate_group,
    orbit_of_block,
    orbital_mask,
)
from .poset import Poset, PosetError, format_set


@dataclass(frozen=True)
class CriterionVerdict:
    J: frozenset
    border: frozenset
    lhs: int
    rhs_numerator: int
    rhs_denominator: int

    @property
    def holds(self) -> bool:
        return self.lhs * self.rhs_denominator == self.rhs_numerator

    @property
    def gap(self) -> int:
        """|lhs*(v-1) - rhs_numerator|; a ranking aid for near misses, 0 iff holds."""
        return abs(self.lhs * self.rhs_denominator - self.rhs_numerator)


@dataclass
class DesignReport:
    v: int
    k: int
    verdicts: list[CriterionVerdict]
    hypothesis_met: bool = True
    empty_verdict: CriterionVerdict | None = None
    # filled in only by brute-force enumeration
    b: int | None = None
    r: int | None = None
    lam: int | None = None

    @property
    def is_2_design(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def lambda_note(self) -> str:
        if self.lam is not None:
            return str(self.lam)
        if not self.is_2_design:
            return "n/a"
        return "r(k-1)/(v-1) with b unknown"


# -- alternating sums ----------------------------------------------------------


def _subsets(indices: tuple[int, ...]):
    for bits in range(1 << len(indices)):
        S = 0
        for t, n in enumerate(indices):
            if bits >> t & 1:
                S |= 1 << n
        yield S, bin(bits).count("1")


def alternating_mu_sum_mask(block: Block, mask: int) -> int:
    poset = block.structure.poset
    bd = poset.indices(poset.border_mask(mask))
    return sum((-1) ** size * block.mu_mask(mask | S) for S, size in _subsets(bd))


def alternating_mu_sum(block: Block, J: Iterable[Hashable]) -> int:
    """sum over S subset of border(J) of (-1)^|S| mu_B(J u S)."""
    return alternating_mu_sum_mask(block, block.structure._ancestral_mask(J))


def _verdict(block: Block, mask: int) -> CriterionVerdict:
    s = block.structure
    poset = s.poset
    k, v = block.k, s.v
    bd = poset.border_mask(mask)
    rest = poset.full_mask & ~(mask | bd)
    rhs = k * (k - 1) * prod(s.sizes[n] - 1 for n in poset.indices(bd)) * s.prod_sizes(rest)
    return CriterionVerdict(
        J=poset.subset(mask),
        border=poset.subset(bd),
        lhs=alternating_mu_sum_mask(block, mask),
        rhs_numerator=rhs,
        rhs_denominator=v - 1,
    )


def _check_groups(block: Block, groups: ComponentGroups | None) -> bool:
    if groups is None:
        return True
    if groups.structure != block.structure:
        raise StructureError("component groups belong to a different structure")
    return groups.all_two_transitive()


def check_criterion(
    block: Block, groups: ComponentGroups | None = None, with_empty: bool = False
) -> DesignReport:
    """Evaluate the criterion for every proper nonempty ancestral J.

    ``hypothesis_met`` is False when a supplied component group is not
    2-transitive; the verdicts are then not a characterization of B^F.
    """
    s = block.structure
    poset = s.poset
    masks = [m for m in poset.ancestral_masks() if m not in (0, poset.full_mask)]
    report = DesignReport(
        v=s.v,
        k=block.k,
        verdicts=[_verdict(block, m) for m in masks],
        hypothesis_met=_check_groups(block, groups),
    )
    if with_empty:
        report.empty_verdict = _verdict(block, 0)
        if report.is_2_design and not report.empty_verdict.holds:
            raise AssertionError("nonempty verdicts hold but the J=empty verdict fails")
    return report


def check_criterion_with_empty(block: Block, groups: ComponentGroups | None = None) -> DesignReport:
    return check_criterion(block, groups, with_empty=True)


# -- pair-count oracle -----------------------------------------------------------


def pair_counts(block: Block, chunk: int = 256) -> Counter:
    """Ordered pairs of distinct block points, counted per orbital O_J.

    Uses the coordinate-agreement classification of pairs directly (k^2
    comparisons, vectorized); it never looks at mu_B.
    """
    s = block.structure
    poset = s.poset
    coords = np.asarray(block.points, dtype=np.int64)
    k, dim = coords.shape
    totals = np.zeros(1 << dim, dtype=np.int64) if dim <= 16 else None
    sparse: Counter = Counter()
    for start in range(0, k, chunk):
        rows = coords[start : start + chunk]
        masks = np.zeros((len(rows), k), dtype=np.int64)
        for d in range(dim):
            masks |= (rows[:, d, None] == coords[None, :, d]).astype(np.int64) << d
        if totals is not None:
            totals += np.bincount(masks.ravel(), minlength=1 << dim)
        else:
            vals, cnts = np.unique(masks, return_counts=True)
            sparse.update(dict(zip(vals.tolist(), cnts.tolist())))
    if totals is not None:
        nz = np.nonzero(totals)[0]
        sparse = Counter(dict(zip(nz.tolist(), totals[nz].tolist())))
    out: Counter = Counter()
    full = poset.full_mask
    for eq_mask, cnt in sparse.items():
        if eq_mask == full:
            continue  # the diagonal pairs (delta, delta)
        out[poset.subset(orbital_mask(poset, eq_mask))] += cnt
    return out


def pair_count_oracle(block: Block, J: Iterable[Hashable]) -> int:
    """|(B x B) n O_J| for a proper ancestral J, by direct pair classification."""
    s = block.structure
    mask = s._ancestral_mask(J)
    if mask == s.poset.full_mask:
        raise PosetError("J must be a proper ancestral subset")
    return pair_counts(block)[s.poset.subset(mask)]


# -- brute-force enumeration -----------------------------------------------------


@dataclass
class EnumeratedDesign:
    group_order: int
    blocks: set
    b: int
    r: int
    lam: int | None  # None when pair coverage is not constant
    coverage: Counter = field(repr=False)
    criterion: DesignReport = field(repr=False)

    @property
    def is_2_design(self) -> bool:
        return self.lam is not None

    @property
    def agrees(self) -> bool:
        return self.is_2_design == self.criterion.is_2_design


def enumerate_design(
    block: Block,
    groups: ComponentGroups | None = None,
    group_cap: int = DEFAULT_GROUP_CAP,
    v_cap: int = DEFAULT_V_CAP,
    elements: list | None = None,
) -> EnumeratedDesign:
    """Materialize B^F and count pair coverage directly."""
    s = block.structure
    if elements is None:
        elements = enumerate_group(s, groups, group_cap)
    blocks = orbit_of_block(block, elements, v_cap)
    coverage: Counter = Counter()
    points_on: Counter = Counter()
    for blk in blocks:
        pts = sorted(blk)
        points_on.update(pts)
        coverage.update(combinations(pts, 2))
    v = s.v
    reps = set(points_on.values())
    if len(points_on) != v or len(reps) != 1:
        raise AssertionError("B^F is not a 1-design; the group is not point-transitive")
    r = reps.pop()
    # uncovered pairs count as 0, so k = 1 gives the trivial lambda = 0
    n_pairs = v * (v - 1) // 2
    if n_pairs == 0:
        lam = None
    elif not coverage:
        lam = 0
    elif len(coverage) == n_pairs and len(set(coverage.values())) == 1:
        lam = next(iter(coverage.values()))
    else:
        lam = None
    report = check_criterion(block, groups)
    report.b, report.r, report.lam = len(blocks), r, lam
    return EnumeratedDesign(
        group_order=len(elements),
        blocks=blocks,
        b=len(blocks),
        r=r,
        lam=lam,
        coverage=coverage,
        criterion=report,
    )


# -- chain and antichain specializations -----------------------------------------


def check_antichain_specialized(block: Block) -> DesignReport:
    """mu_B(J) = k + k(k-1)/(v-1) * (prod_{i not in J} e_i - 1) for proper nonempty J."""
    s = block.structure
    poset = s.poset
    if not poset.is_antichain():
        raise PosetError("poset is not an antichain")
    k, v = block.k, s.v
    verdicts = []
    for mask in poset.ancestral_masks():
        if mask in (0, poset.full_mask):
            continue
        comp = poset.full_mask & ~mask
        verdicts.append(
            CriterionVerdict(
                J=poset.subset(mask),
                border=poset.subset(comp),
                lhs=block.mu_mask(mask) - k,
                rhs_numerator=k * (k - 1) * (s.prod_sizes(comp) - 1),
                rhs_denominator=v - 1,
            )
        )
    return DesignReport(v=v, k=k, verdicts=verdicts)


def check_chain_specialized(block: Block) -> DesignReport:
    """The chain conditions, one per element i = 1..s of 1 < 2 < ... < s.

    i = 1:  sum over Delta_A[2] of chi (chi - 1) = k(k-1)/(v-1) (e_1 - 1)
    i >= 2: sum over nu in Delta_A[i] of chi(nu) (chi(nu|A[i+1]) - chi(nu))
            = k(k-1)/(v-1) (e_i - 1) prod_{j < i} e_j,   with A[s+1] empty.
    Each verdict is labeled by the ancestral set A[i+1] it corresponds to.
    """
    s = block.structure
    poset = s.poset
    if not poset.is_chain():
        raise PosetError("poset is not a chain")
    k, v = block.k, s.v
    order = [poset.index(e) for e in poset.chain_order()]
    length = len(order)
    # closed[i] = bitmask of A[order[i]]; closed[length] = empty set
    closed = [sum(1 << order[j] for j in range(i, length)) for i in range(length)] + [0]
    verdicts = []
    for i in range(length):
        if i == 0:
            if length < 2:
                break
            counts = block.counts_mask(closed[1])
            lhs = sum(c * (c - 1) for c in counts.values())
            rhs = k * (k - 1) * (s.sizes[order[0]] - 1)
            label = closed[1]
        else:
            fine = block.counts_mask(closed[i])
            coarse_mask = closed[i + 1]
            coarse = block.counts_mask(coarse_mask)
            pos = [n for n in poset.indices(closed[i])]
            keep = [pos.index(n) for n in poset.indices(coarse_mask)]
            lhs = 0
            for nu, c in fine.items():
                lhs += c * (coarse[tuple(nu[t] for t in keep)] - c)
            rhs = k * (k - 1) * (s.sizes[order[i]] - 1) * prod(s.sizes[order[j]] for j in range(i))
            label = coarse_mask
        verdicts.append(
            CriterionVerdict(
                J=poset.subset(label),
                border=poset.subset(poset.border_mask(label)),
                lhs=lhs,
                rhs_numerator=rhs,
                rhs_denominator=v - 1,
            )
        )
    return DesignReport(v=v, k=k, verdicts=verdicts)


# -- helpers ---------------------------------------------------------------------


def random_block(structure: BlockStructure, rng: random.Random, k: int | None = None) -> Block:
    """k uniform in [2, v//2] (clamped to v), points drawn without replacement."""
    v = structure.v
    if k is None:
        hi = max(2, v // 2)
        k = rng.randint(min(2, v), min(hi, v))
    pts = list(structure.points()) if v <= 10**5 else None
    if pts is not None:
        return Block(structure, rng.sample(pts, k))
    chosen: set = set()
    while len(chosen) < k:
        chosen.add(tuple(rng.randrange(e) for e in structure.sizes))
    return Block(structure, chosen)


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> Poset:
    """Random poset on 1..n: relations a < b only for a < b numerically, then closed."""
    rels = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < density]
    elements = list(range(1, n + 1))
    rng.shuffle(elements)
    return Poset.from_relations(elements, rels)


def format_verdict_row(poset: Poset, v: CriterionVerdict) -> tuple[str, ...]:
    return (
        format_set(poset, v.J),
        format_set(poset, v.border),
        str(v.lhs),
        f"{v.rhs_numerator}/{v.rhs_denominator}",
        "yes" if v.holds else "no",
    )
