"""Block-transitive 2-designs preserving a poset of point partitions."""
from .blockstructure import Block, BlockStructure, CapExceeded, StructureError
from .design import (
    CriterionVerdict,
    DesignReport,
    alternating_mu_sum,
    check_antichain_specialized,
    check_chain_specialized,
    check_criterion,
    check_criterion_with_empty,
    enumerate_design,
    pair_count_oracle,
    pair_counts,
)
from .gwp import ComponentGroups, GwpElement, enumerate_group, orbital_of_pair, orbital_size
from .poset import Poset, PosetError, Shape

__all__ = [
    "Block",
    "BlockStructure",
    "CapExceeded",
    "ComponentGroups",
    "CriterionVerdict",
    "DesignReport",
    "GwpElement",
    "Poset",
    "PosetError",
    "Shape",
    "StructureError",
    "alternating_mu_sum",
    "check_antichain_specialized",
    "check_chain_specialized",
    "check_criterion",
    "check_criterion_with_empty",
    "enumerate_design",
    "enumerate_group",
    "orbital_of_pair",
    "orbital_size",
    "pair_count_oracle",
    "pair_counts",
]
