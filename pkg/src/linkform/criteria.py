"""Cost-threshold criteria that predict stable-topology shape, plus shape checks.

Three nested criteria are evaluated against a scenario:

* clique criterion: every internet-connected (IC) pair can link and even its
  worst-case interface pairing costs less than gamma - 1, so the IC tier
  interlinks completely.
* single-uplink criterion: additionally, every IC node's cheapest pairing cost
  toward any non-IC node exceeds gamma - 1, making second uplinks unprofitable
  so each non-IC node keeps at most one IC link.
* star criterion: additionally, every non-IC node's cheapest pairing cost
  toward any other non-IC node exceeds 1/2, leaving the non-IC tier edgeless.

All threshold comparisons are strict. ``check_structure`` reports whether a
concrete topology actually has these shapes, and identifies relay nodes
(non-IC nodes carrying both an uplink and non-IC links) along with hierarchy
depth.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

from .cost import bandwidth_ratio, minimum_link_power
from .model import Node, Scenario, Topology


@dataclass(frozen=True)
class Witness:
    """One node pair violating (or failing) a criterion, with the offending cost."""

    nodes: tuple[int, int]
    cost: float
    threshold: float
    note: str


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    witnesses: tuple[Witness, ...]


@dataclass(frozen=True)
class CriteriaReport:
    clique: CriterionResult
    single_ic_link: CriterionResult
    star: CriterionResult
    notes: tuple[str, ...]


@dataclass(frozen=True)
class StructureReport:
    """Shape facts about one topology."""

    ic_clique: bool
    missing_ic_pairs: tuple[tuple[int, int], ...]
    max_ic_links_per_non_ic: int
    max_non_ic_degree: int
    relays: tuple[int, ...]
    hierarchy_tiers: int | None
    unattached_non_ic: tuple[int, ...]


def _pairing_costs(
    owner: Node, peer: Node, scenario: Scenario, congestion: int
) -> list[tuple[float, int, int]]:
    """(owner-side cost, r_owner, r_peer) for every feasible interface pairing."""
    cfg = scenario.config
    costs: list[tuple[float, int, int]] = []
    for r_own, r_peer in itertools.product(range(len(owner.interfaces)), range(len(peer.interfaces))):
        own_iface = owner.interfaces[r_own]
        peer_iface = peer.interfaces[r_peer]
        if own_iface.kind != peer_iface.kind or own_iface.frequency_hz != peer_iface.frequency_hz:
            continue
        sigma_own = minimum_link_power(owner, r_own, peer, r_peer, cfg)
        sigma_peer = minimum_link_power(peer, r_peer, owner, r_own, cfg)
        if sigma_own > own_iface.max_tx_power_w or sigma_peer > peer_iface.max_tx_power_w:
            continue
        unit = (
            cfg.alpha
            * congestion
            * owner.energy_weight
            * sigma_own
            / bandwidth_ratio(own_iface, owner)
        )
        costs.append((unit, r_own, r_peer))
    return costs


def clique_criterion(scenario: Scenario) -> CriterionResult:
    """Every IC pair feasible with worst-case pairing cost strictly below gamma - 1.

    The congestion factor is taken at its full-clique value (IC count minus
    one). Witnesses carry both the worst and the best pairing so boundary
    scenarios are diagnosable.
    """
    threshold = scenario.config.gamma - 1.0
    ic_nodes = [scenario.node(i) for i in scenario.ic_ids]
    congestion = max(1, len(ic_nodes) - 1)
    witnesses: list[Witness] = []
    for a, b in itertools.combinations(ic_nodes, 2):
        worst = -math.inf
        best = math.inf
        detail = ""
        feasible = False
        for owner, peer in ((a, b), (b, a)):
            for unit, r_own, r_peer in _pairing_costs(owner, peer, scenario, congestion):
                feasible = True
                best = min(best, unit)
                if unit > worst:
                    worst = unit
                    detail = f"worst pairing ({r_own}, {r_peer}) on node {owner.id}'s side"
        if not feasible:
            witnesses.append(
                Witness(
                    nodes=(a.id, b.id),
                    cost=math.inf,
                    threshold=threshold,
                    note="no feasible interface pairing",
                )
            )
        elif not worst < threshold:
            witnesses.append(
                Witness(
                    nodes=(a.id, b.id),
                    cost=worst,
                    threshold=threshold,
                    note=f"{detail}; best pairing cost {best:.6g}",
                )
            )
    return CriterionResult(holds=not witnesses, witnesses=tuple(witnesses))


def single_ic_link_criterion(scenario: Scenario) -> CriterionResult:
    """Clique criterion plus: IC-side minimum cost to every non-IC node above gamma - 1.

    Pairs with no feasible pairing can never link, so they satisfy the
    condition vacuously.
    """
    threshold = scenario.config.gamma - 1.0
    base = clique_criterion(scenario)
    witnesses = list(base.witnesses)
    for ic_id in scenario.ic_ids:
        ic_node = scenario.node(ic_id)
        for non_id in scenario.non_ic_ids:
            costs = _pairing_costs(ic_node, scenario.node(non_id), scenario, congestion=1)
            if not costs:
                continue
            cheapest, r_own, r_peer = min(costs)
            if not cheapest > threshold:
                witnesses.append(
                    Witness(
                        nodes=(ic_id, non_id),
                        cost=cheapest,
                        threshold=threshold,
                        note=f"cheapest pairing ({r_own}, {r_peer}) does not exceed gamma - 1",
                    )
                )
    return CriterionResult(holds=not witnesses, witnesses=tuple(witnesses))


def star_criterion(scenario: Scenario) -> CriterionResult:
    """Single-uplink criterion plus: non-IC pairwise minimum costs above 1/2."""
    threshold = 0.5
    base = single_ic_link_criterion(scenario)
    witnesses = list(base.witnesses)
    for a_id, b_id in itertools.permutations(scenario.non_ic_ids, 2):
        costs = _pairing_costs(scenario.node(a_id), scenario.node(b_id), scenario, congestion=1)
        if not costs:
            continue
        cheapest, r_own, r_peer = min(costs)
        if not cheapest > threshold:
            witnesses.append(
                Witness(
                    nodes=(a_id, b_id),
                    cost=cheapest,
                    threshold=threshold,
                    note=f"cheapest pairing ({r_own}, {r_peer}) does not exceed 1/2",
                )
            )
    return CriterionResult(holds=not witnesses, witnesses=tuple(witnesses))


CRITERIA_NOTES = (
    "clique: every internet-connected pair must be linkable and its worst-case "
    "pairing cost (congestion at the full-clique value) must fall strictly below gamma - 1.",
    "single_ic_link: additionally, every IC node's cheapest pairing cost toward each "
    "non-IC node must strictly exceed gamma - 1, the condition under which extra uplinks "
    "are unprofitable for the IC side.",
    "star: additionally, every non-IC node's cheapest pairing cost toward each other "
    "non-IC node must strictly exceed 1/2.",
)


def criteria_report(scenario: Scenario) -> CriteriaReport:
    return CriteriaReport(
        clique=clique_criterion(scenario),
        single_ic_link=single_ic_link_criterion(scenario),
        star=star_criterion(scenario),
        notes=CRITERIA_NOTES,
    )


def check_structure(topology: Topology) -> StructureReport:
    """Shape facts: IC completeness, uplink counts, relay nodes, hierarchy depth."""
    ic_ids = [node.id for node in topology.nodes if node.internet_connected]
    non_ic_ids = [node.id for node in topology.nodes if not node.internet_connected]
    ic_set = set(ic_ids)

    missing = [
        (a, b) for a, b in itertools.combinations(sorted(ic_ids), 2) if not topology.has_pair(a, b)
    ]

    max_uplinks = 0
    max_degree = 0
    relays = []
    for non_id in non_ic_ids:
        peers = topology.neighbors(non_id)
        uplinks = sum(1 for peer in peers if peer in ic_set)
        lateral = len(peers) - uplinks
        max_uplinks = max(max_uplinks, uplinks)
        max_degree = max(max_degree, len(peers))
        if uplinks == 1 and lateral >= 1:
            relays.append(non_id)

    # multi-source BFS from the IC tier
    hops: dict[int, int] = {ic_id: 0 for ic_id in ic_ids}
    frontier: deque[int] = deque(ic_ids)
    while frontier:
        current = frontier.popleft()
        for peer in topology.neighbors(current):
            if peer not in hops:
                hops[peer] = hops[current] + 1
                frontier.append(peer)
    unattached = tuple(sorted(nid for nid in non_ic_ids if nid not in hops))
    if unattached:
        tiers: int | None = None
    elif non_ic_ids:
        tiers = 1 + max(hops[nid] for nid in non_ic_ids)
    else:
        tiers = 1 if ic_ids else None

    return StructureReport(
        ic_clique=not missing,
        missing_ic_pairs=tuple(missing),
        max_ic_links_per_non_ic=max_uplinks,
        max_non_ic_degree=max_degree,
        relays=tuple(sorted(relays)),
        hierarchy_tiers=tiers,
        unattached_non_ic=unattached,
    )
