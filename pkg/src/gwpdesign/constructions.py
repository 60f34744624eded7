"""Explicit infinite families of block-transitive 2-designs.

Four families, each parametrized by an integer p >= 2:

* ``chgrid``: 1 < 3 with 2 isolated, group (G1 wr G3) x G2
* ``v``:      1 < 2 and 1 < 3, group G1 wr (G2 x G3)
* ``vinv``:   1 < 3 and 2 < 3, group (G1 x G2) wr G3
* ``n``:      the N-poset 1 < 3, 2 < 3, 2 < 4

with e1 = p^2+p+1, e2 = p^2-p+1, e3 = p^4-p^2+1 (and e4 = p^8-p^4+1 for n),
so v = q^2+q+1 for q = p^4 (p^8 for n) and every base block has k = q+1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .blockstructure import Block, BlockStructure, CapExceeded
from .design import DesignReport, check_criterion, pair_counts, alternating_mu_sum
from .gwp import orbital_size
from .poset import Poset

ALIASES = {
    "chgrid": "chgrid",
    "v": "v",
    "v_poset": "v",
    "vinv": "vinv",
    "v_inverted": "vinv",
    "n": "n",
    "n_poset": "n",
}

RELATIONS = {
    "chgrid": [(1, 3)],
    "v": [(1, 2), (1, 3)],
    "vinv": [(1, 3), (2, 3)],
    "n": [(1, 3), (2, 3), (2, 4)],
}

# largest p verified by default
P_CAP = {"chgrid": 5, "v": 5, "vinv": 5, "n": 3}


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    p: int

    def __post_init__(self) -> None:
        name = ALIASES.get(self.family)
        if name is None:
            raise FamilyError(f"unknown family {self.family!r}; expected one of chgrid, v, vinv, n")
        object.__setattr__(self, "family", name)
        if not isinstance(self.p, int) or self.p < 2:
            raise FamilyError(f"p must be an integer >= 2, got {self.p!r}")

    @property
    def q(self) -> int:
        return self.p**8 if self.family == "n" else self.p**4

    @property
    def sizes(self) -> tuple[int, ...]:
        p = self.p
        e = (p * p + p + 1, p * p - p + 1, p**4 - p * p + 1)
        if self.family == "n":
            e += (p**8 - p**4 + 1,)
        return e


def build_structure(spec: FamilySpec) -> BlockStructure:
    n = 4 if spec.family == "n" else 3
    poset = Poset.from_relations(range(1, n + 1), RELATIONS[spec.family])
    return BlockStructure(poset, spec.sizes)


def _common_parts(p: int, e2: int) -> dict[str, list[tuple[int, int]]]:
    """(x, y) pairs of the pieces shared by chgrid, vinv and the top row of n."""
    return {
        "B1": [(x, 0) for x in range(0, p + 1)],
        "B2,1": [(p + 1, y) for y in range(1, p + 1)],
        "B2,2": [(x, x - 1) for x in range(p + 2, e2 + 1)],
    }


def block_parts(spec: FamilySpec) -> dict[str, list[tuple[int, ...]]]:
    """The named disjoint pieces of the base block."""
    p = spec.p
    e1, e2, e3 = spec.sizes[:3]
    step = p * p + p
    b3_wide = [
        (0, y, z) for y in range(1, e2) for z in range((y - 1) * step + 1, y * step + 1)
    ]
    if spec.family in ("chgrid", "vinv"):
        parts = {name: [(x, y, 0) for x, y in pts] for name, pts in _common_parts(p, e2).items()}
        if spec.family == "chgrid":
            parts["B3"] = b3_wide
        else:
            parts["B3"] = [(0, 0, z) for z in range(1, e3)]
        return parts
    if spec.family == "v":
        return {
            "B1": [(x, 0, 0) for x in range(0, p + 1)],
            "B2": [(0, y, 0) for y in range(1, e2)],
            "B3": b3_wide,
        }
    # n-poset
    parts = {name: [(x, y, 0, 0) for x, y in pts] for name, pts in _common_parts(p, e2).items()}
    parts["B3"] = [(0, 0, z, 0) for z in range(1, e3)]
    wide = p**4 + p * p
    b41, b42 = [], []
    for z in range(1, e3):
        base = (z - 1) * wide
        for x in range(0, 2 * p):
            for t in range(x * p * p + 1, (x + 1) * p * p + 1):
                b41.append((x, 0, z, base + t))
        for x in range(2 * p, p * p + p):
            lo = 2 * p**3 + (x - 2 * p) * (p * p - p) + 1
            hi = 2 * p**3 + (x - 2 * p + 1) * (p * p - p)
            for t in range(lo, hi + 1):
                b42.append((x, 0, z, base + t))
    parts["B4,1"] = b41
    parts["B4,2"] = b42
    return parts


def build_block(spec: FamilySpec) -> Block:
    structure = build_structure(spec)
    points = [pt for pts in block_parts(spec).values() for pt in pts]
    block = Block(structure, points)
    if block.k != spec.q + 1 or len(points) != block.k:
        raise AssertionError(f"base block has {block.k} points ({len(points)} listed), expected {spec.q + 1}")
    return block


def reference_mu_table(spec: FamilySpec) -> dict[frozenset, int]:
    """Tabulated values of mu_B(J) for the family's base block."""
    p = spec.p
    if spec.family == "chgrid":
        return {
            frozenset({2}): p**6 + p**5 + p**4 - p**3 + p + 1,
            frozenset({3}): 2 * p**4 + p**2 + 1,
            frozenset({2, 3}): p**4 + p**2 + p + 1,
            frozenset({1, 3}): p**4 + p**2 - p + 1,
        }
    if spec.family == "v":
        return {
            frozenset({2, 3}): p**4 + p**2 + p + 1,
            frozenset({2}): p + (p**4 - p + 1) * (p**2 + p + 1),
            frozenset({3}): 2 * p**4 + p**2 + 1,
        }
    if spec.family == "vinv":
        return {
            frozenset({1, 3}): p**4 + p**2 - p + 1,
            frozenset({2, 3}): p**4 + p**2 + p + 1,
            frozenset({3}): 2 * p**4 + p**2 + 1,
        }
    e1, e2, e3, e4 = spec.sizes
    return {
        frozenset({1, 3, 4}): p**8 + p**2 - p + 1,
        frozenset({2, 3, 4}): p**8 + p**2 + p + 1,
        frozenset({1, 3}): e4 * (e2 + 1) + p**4 - 1,
        frozenset({3, 4}): p**8 + p**4 + p**2 + 1,
        frozenset({3}): e1 * e2 * (e4 - 1) + p**8 + p**4 + p**2 + 1,
        frozenset({4}): 2 * p**8 + p**4 + 1,
    }


def reference_orbit_table(spec: FamilySpec) -> dict[frozenset, int]:
    """Tabulated |O_J|/v for every proper nonempty ancestral J."""
    p = spec.p
    if spec.family == "chgrid":
        return {
            frozenset({2}): (p**4 - p**2) * (p**2 + p + 1),
            frozenset({3}): p**4 - p**2,
            frozenset({2, 3}): p**2 + p,
            frozenset({1, 3}): p**2 - p,
        }
    if spec.family == "v":
        return {
            frozenset({2, 3}): p**2 + p,
            frozenset({2}): (p**4 - p**2) * (p**2 + p + 1),
            frozenset({3}): (p**2 - p) * (p**2 + p + 1),
        }
    if spec.family == "vinv":
        return {
            frozenset({1, 3}): p**2 - p,
            frozenset({2, 3}): p**2 + p,
            frozenset({3}): p**4 - p**2,
        }
    return {
        frozenset({1, 3, 4}): p**2 - p,
        frozenset({2, 3, 4}): p**2 + p,
        frozenset({1, 3}): (p**8 - p**4) * (p**2 - p + 1),
        frozenset({3, 4}): p**4 - p**2,
        frozenset({3}): (p**2 + p) * (p**8 - p**4) * (p**2 - p + 1),
        frozenset({4}): p**8 - p**2,
    }


@dataclass
class FamilyReport:
    spec: FamilySpec
    structure: BlockStructure
    block: Block
    criterion: DesignReport
    # J -> (computed, reference)
    mu_rows: dict = field(default_factory=dict)
    orbit_rows: dict = field(default_factory=dict)
    # J -> (pair count, alternating sum); empty when the oracle was skipped
    pair_rows: dict = field(default_factory=dict)
    pair_oracle_skipped: bool = False

    @property
    def mu_match(self) -> bool:
        return all(a == b for a, b in self.mu_rows.values())

    @property
    def orbit_match(self) -> bool:
        return all(a == b for a, b in self.orbit_rows.values())

    @property
    def pairs_match(self) -> bool:
        return all(a == b for a, b in self.pair_rows.values())

    @property
    def ok(self) -> bool:
        return self.criterion.is_2_design and self.mu_match and self.orbit_match and self.pairs_match


def verify_family(
    spec: FamilySpec, pair_budget: int | None = None, p_cap: int | None = None
) -> FamilyReport:
    """Build the family member, run the criterion, and compare with the tables.

    The k^2 pair oracle is skipped only when ``pair_budget`` is given and
    k^2 exceeds it.
    """
    cap = P_CAP[spec.family] if p_cap is None else p_cap
    if spec.p > cap:
        raise CapExceeded(f"p = {spec.p} exceeds the {spec.family} verification cap {cap}")
    block = build_block(spec)
    structure = block.structure
    report = FamilyReport(spec, structure, block, check_criterion(block, with_empty=True))
    for J, ref in reference_mu_table(spec).items():
        report.mu_rows[J] = (block.mu(J), ref)
    v = structure.v
    for J, ref in reference_orbit_table(spec).items():
        report.orbit_rows[J] = (orbital_size(structure, J) // v, ref)
    if pair_budget is not None and block.k**2 > pair_budget:
        report.pair_oracle_skipped = True
    else:
        counts = pair_counts(block)
        for verdict in report.criterion.verdicts + [report.criterion.empty_verdict]:
            report.pair_rows[verdict.J] = (counts[verdict.J], alternating_mu_sum(block, verdict.J))
    return report
