"""Deterministic simulator and analysis toolkit for bilateral link-formation
games on heterogeneous multi-radio networks."""

from .cost import CostBreakdown, bandwidth_ratio, bridging_coefficient, hop_distances, link_cost_sum, total_cost
from .criteria import (
    CriteriaReport,
    StructureReport,
    check_structure,
    clique_criterion,
    criteria_report,
    single_ic_link_criterion,
    star_criterion,
)
from .game import (
    Add,
    DynamicsTrace,
    Move,
    Rejection,
    Remove,
    StabilityReport,
    best_response_dynamics,
    brute_force_stable_set,
    delta_cost_add,
    delta_cost_remove,
    is_pairwise_stable,
    propose_add,
    replay_trace,
)
from .model import (
    COST_INF,
    Cost,
    GameConfig,
    IncomparableCostError,
    InterfaceSpec,
    Link,
    Node,
    Scenario,
    Topology,
    ValidationIssue,
    distance_between,
    validate_scenario,
    validate_topology,
)
from .propagation import LinkBudget, link_budget, link_feasible, neighborhood, required_tx_power

__version__ = "0.1.0"

__all__ = [
    "Add",
    "COST_INF",
    "Cost",
    "CostBreakdown",
    "CriteriaReport",
    "DynamicsTrace",
    "GameConfig",
    "IncomparableCostError",
    "InterfaceSpec",
    "Link",
    "LinkBudget",
    "Move",
    "Node",
    "Rejection",
    "Remove",
    "Scenario",
    "StabilityReport",
    "StructureReport",
    "Topology",
    "ValidationIssue",
    "bandwidth_ratio",
    "best_response_dynamics",
    "bridging_coefficient",
    "brute_force_stable_set",
    "check_structure",
    "clique_criterion",
    "criteria_report",
    "delta_cost_add",
    "delta_cost_remove",
    "distance_between",
    "hop_distances",
    "is_pairwise_stable",
    "link_budget",
    "link_cost_sum",
    "link_feasible",
    "neighborhood",
    "propose_add",
    "replay_trace",
    "required_tx_power",
    "single_ic_link_criterion",
    "star_criterion",
    "total_cost",
    "validate_scenario",
    "validate_topology",
]
