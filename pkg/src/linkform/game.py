"""Strategy rules: deviation deltas, mutual-consent proposals, pairwise stability,
best-response dynamics, and a brute-force enumeration of stable topologies.

Improvement is always strict (ties never move). Deltas between two states that
are both infinite carry no sign under extended-cost subtraction; the engine and
the stability predicate resolve them by comparing how many peers remain
unreachable within the hop cap: a move is an improvement only if it strictly
lowers that count. This lets an empty network bootstrap itself (the first links
reduce unreachability even though both states are infinite) while staying
conservative between equally-disconnected states.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .model import (
    GameConfig,
    IncomparableCostError,
    Link,
    Node,
    Scenario,
    Topology,
    distance_between,
    links_digest,
    validate_scenario,
)
from .propagation import link_feasible, required_tx_power

DEFAULT_MAX_MOVES = 10_000


@dataclass(frozen=True)
class Add:
    """A consented link addition; both deltas are strictly negative."""

    link: Link
    delta_a: float
    delta_b: float


@dataclass(frozen=True)
class Remove:
    """A unilateral link severance; the initiator's delta is strictly negative."""

    link: Link
    initiator: int
    delta: float


Move = Add | Remove


@dataclass(frozen=True)
class Rejection:
    """Why a proposed link was not formed."""

    kind: str  # "infeasible" or "declined"
    declined_by: tuple[int, ...] = ()


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the pairwise-stability check.

    ``severance_violations`` lists (node id, link) incidences where unilateral
    removal strictly improves the node; ``addition_violations`` lists absent
    links whose addition strictly improves both endpoints.
    """

    stable: bool
    severance_violations: tuple[tuple[int, Link], ...]
    addition_violations: tuple[Link, ...]


@dataclass(frozen=True)
class TraceStep:
    move: Move
    topology_hash: str
    costs: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class DynamicsTrace:
    """Replayable record of one dynamics run."""

    seed: int
    steps: tuple[TraceStep, ...]
    converged: bool


class PairingOption(NamedTuple):
    r_a: int
    r_b: int
    unit_a: float  # rho * sigma / beta for the lower-id endpoint
    unit_b: float


class _LinkRecord(NamedTuple):
    pair: tuple[int, int]
    ifaces: tuple[int, int]
    units: tuple[float, float]


class _Evaluator:
    """Incremental cost evaluation for one scenario across candidate link sets.

    Precomputes per-pair feasible interface pairings and their unit costs,
    then answers state queries as (total cost, peers unreachable within the
    hop cap) against a small mutable link set.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.cfg = scenario.config
        self.ids: tuple[int, ...] = scenario.ids
        self.n = len(self.ids)
        self.by_id = scenario.node_map
        self.is_ic = {node.id: node.internet_connected for node in scenario.nodes}
        self.pairings: dict[tuple[int, int], tuple[PairingOption, ...]] = {}
        for a, b in itertools.combinations(self.ids, 2):
            options = self._feasible_options(self.by_id[a], self.by_id[b])
            if options:
                self.pairings[(a, b)] = options
        self.adj: dict[int, set[int]] = {i: set() for i in self.ids}
        self.iface_of: dict[tuple[int, int], tuple[int, int]] = {}
        self.units: dict[tuple[int, int], tuple[float, float]] = {}

    # -- construction helpers -------------------------------------------------

    def _unit(self, owner: Node, r_own: int, peer: Node, r_peer: int) -> float:
        """rho * sigma / beta for one endpoint; inf for unusable assignments."""
        iface = owner.interfaces[r_own]
        other = peer.interfaces[r_peer]
        if iface.kind != other.kind or iface.frequency_hz != other.frequency_hz:
            return math.inf
        distance = distance_between(owner, peer)
        sigma = 0.0 if distance == 0.0 else required_tx_power(iface, other, distance, self.cfg)
        if sigma > iface.max_tx_power_w:
            return math.inf
        beta = iface.max_bitrate_bps / owner.min_required_bitrate_bps
        return owner.energy_weight * sigma / beta

    def _feasible_options(self, a: Node, b: Node) -> tuple[PairingOption, ...]:
        options = []
        for r_a in range(len(a.interfaces)):
            for r_b in range(len(b.interfaces)):
                unit_a = self._unit(a, r_a, b, r_b)
                unit_b = self._unit(b, r_b, a, r_a)
                if math.isfinite(unit_a) and math.isfinite(unit_b):
                    options.append(PairingOption(r_a, r_b, unit_a, unit_b))
        return tuple(options)

    # -- mutable link set -----------------------------------------------------

    def reset(self) -> None:
        for members in self.adj.values():
            members.clear()
        self.iface_of.clear()
        self.units.clear()

    def load(self, links: Iterable[Link]) -> None:
        """Install an arbitrary link set, pricing infeasible links as infinite."""
        self.reset()
        for link in links:
            a, b = link.node_a, link.node_b
            unit_a = self._unit(self.by_id[a], link.iface_a, self.by_id[b], link.iface_b)
            unit_b = self._unit(self.by_id[b], link.iface_b, self.by_id[a], link.iface_a)
            self._place((a, b), (link.iface_a, link.iface_b), (unit_a, unit_b))

    def _place(self, pair: tuple[int, int], ifaces: tuple[int, int], units: tuple[float, float]) -> None:
        a, b = pair
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.iface_of[pair] = ifaces
        self.units[pair] = units

    def place_option(self, pair: tuple[int, int], option: PairingOption) -> None:
        self._place(pair, (option.r_a, option.r_b), (option.unit_a, option.unit_b))

    def remove_pair(self, a: int, b: int) -> _LinkRecord:
        pair = (a, b) if a < b else (b, a)
        record = _LinkRecord(pair, self.iface_of.pop(pair), self.units.pop(pair))
        self.adj[pair[0]].discard(pair[1])
        self.adj[pair[1]].discard(pair[0])
        return record

    def restore(self, record: _LinkRecord) -> None:
        self._place(record.pair, record.ifaces, record.units)

    def links_snapshot(self) -> frozenset[Link]:
        return frozenset(
            Link(pair[0], ifaces[0], pair[1], ifaces[1]) for pair, ifaces in self.iface_of.items()
        )

    # -- evaluation -----------------------------------------------------------

    def state(self, i: int) -> tuple[float, int]:
        """(total cost, number of peers unreachable within h_max) for node ``i``."""
        cfg = self.cfg
        adj_i = self.adj[i]
        link_cost = 0.0
        bridging = 0.0
        if adj_i:
            per_r_sum: dict[int, float] = {}
            per_r_cnt: dict[int, int] = {}
            inverse_degrees = 0.0
            for peer in adj_i:
                pair = (i, peer) if i < peer else (peer, i)
                low_side = i == pair[0]
                r_own = self.iface_of[pair][0 if low_side else 1]
                unit = self.units[pair][0 if low_side else 1]
                per_r_sum[r_own] = per_r_sum.get(r_own, 0.0) + unit
                per_r_cnt[r_own] = per_r_cnt.get(r_own, 0) + 1
                inverse_degrees += 1.0 / len(self.adj[peer])
            for r_own, unit_sum in per_r_sum.items():
                link_cost += cfg.alpha * per_r_cnt[r_own] * unit_sum
            bridging = (1.0 / len(adj_i)) / inverse_degrees

        seen = {i}
        frontier = [i]
        depth = 0
        ic_sum = 0.0
        non_ic_sum = 0.0
        while frontier and depth < cfg.h_max:
            depth += 1
            next_frontier = []
            for current in frontier:
                for peer in self.adj[current]:
                    if peer not in seen:
                        seen.add(peer)
                        next_frontier.append(peer)
                        if self.is_ic[peer]:
                            ic_sum += depth
                        else:
                            non_ic_sum += depth
            frontier = next_frontier
        unreachable = self.n - len(seen)
        if unreachable or math.isinf(link_cost):
            return (math.inf, unreachable)
        return (link_cost + cfg.gamma * ic_sum + non_ic_sum + bridging, 0)


def _improves(before: tuple[float, int], after: tuple[float, int]) -> bool:
    """Strict improvement under the documented unreachability-count rule."""
    if math.isinf(before[0]) and math.isinf(after[0]):
        return after[1] < before[1]
    return after[0] < before[0]


def _resolved_delta(before: tuple[float, int], after: tuple[float, int]) -> float:
    """Signed delta for records; count-based improvements resolve to -inf."""
    if math.isinf(before[0]) and math.isinf(after[0]):
        if after[1] < before[1]:
            return -math.inf
        if after[1] > before[1]:
            return math.inf
        return 0.0
    return after[0] - before[0]


def _evaluator_for(topology: Topology, config: GameConfig) -> _Evaluator:
    evaluator = _Evaluator(Scenario(topology.nodes, config))
    evaluator.load(topology.links)
    return evaluator


def delta_cost_add(node: Node, topology: Topology, link: Link, config: GameConfig) -> float:
    """Cost change for ``node`` if ``link`` were added; raises when undefined.

    Raises IncomparableCostError when both states are infinite, and ValueError
    when the link is already present or physically infeasible.
    """
    if link in topology.links or topology.has_pair(link.node_a, link.node_b):
        raise ValueError(f"{link} already present")
    if not link_feasible(
        topology.node(link.node_a), link.iface_a, topology.node(link.node_b), link.iface_b, config
    ):
        raise ValueError(f"{link} is not physically feasible")
    evaluator = _evaluator_for(topology, config)
    before = evaluator.state(node.id)
    unit_a = evaluator._unit(
        topology.node(link.node_a), link.iface_a, topology.node(link.node_b), link.iface_b
    )
    unit_b = evaluator._unit(
        topology.node(link.node_b), link.iface_b, topology.node(link.node_a), link.iface_a
    )
    evaluator._place(link.pair, (link.iface_a, link.iface_b), (unit_a, unit_b))
    after = evaluator.state(node.id)
    if math.isinf(before[0]) and math.isinf(after[0]):
        raise IncomparableCostError("both states are disconnected; no defined sign")
    return after[0] - before[0]


def delta_cost_remove(node: Node, topology: Topology, link: Link, config: GameConfig) -> float:
    """Cost change for ``node`` if it severed ``link``; raises when undefined."""
    if link not in topology.links:
        raise ValueError(f"{link} not present")
    if not link.touches(node.id):
        raise ValueError(f"node {node.id} is not an endpoint of {link}")
    evaluator = _evaluator_for(topology, config)
    before = evaluator.state(node.id)
    evaluator.remove_pair(link.node_a, link.node_b)
    after = evaluator.state(node.id)
    if math.isinf(before[0]) and math.isinf(after[0]):
        raise IncomparableCostError("both states are disconnected; no defined sign")
    return after[0] - before[0]


def propose_add(
    topology: Topology, i: int, r_i: int, j: int, r_j: int, config: GameConfig
) -> Add | Rejection:
    """Mutual-consent evaluation of one candidate link.

    Returns an Add move iff the pairing is feasible and both endpoints strictly
    improve; otherwise a Rejection naming who withheld consent. Symmetric in
    (i, j).
    """
    node_i = topology.node(i)
    node_j = topology.node(j)
    if i == j or topology.has_pair(i, j):
        return Rejection(kind="infeasible")
    if not link_feasible(node_i, r_i, node_j, r_j, config):
        return Rejection(kind="infeasible")
    link = Link(i, r_i, j, r_j)
    evaluator = _evaluator_for(topology, config)
    before = {i: evaluator.state(i), j: evaluator.state(j)}
    unit_a = evaluator._unit(
        topology.node(link.node_a), link.iface_a, topology.node(link.node_b), link.iface_b
    )
    unit_b = evaluator._unit(
        topology.node(link.node_b), link.iface_b, topology.node(link.node_a), link.iface_a
    )
    evaluator._place(link.pair, (link.iface_a, link.iface_b), (unit_a, unit_b))
    after = {i: evaluator.state(i), j: evaluator.state(j)}
    decliners = tuple(
        sorted(node_id for node_id in (i, j) if not _improves(before[node_id], after[node_id]))
    )
    if decliners:
        return Rejection(kind="declined", declined_by=decliners)
    return Add(
        link=link,
        delta_a=_resolved_delta(before[link.node_a], after[link.node_a]),
        delta_b=_resolved_delta(before[link.node_b], after[link.node_b]),
    )


def _addition_violation(
    evaluator: _Evaluator,
    base: dict[int, tuple[float, int]],
    pair: tuple[int, int],
    options: tuple[PairingOption, ...],
) -> Link | None:
    """Best mutually-improving pairing for an absent pair, or None.

    Among violating pairings the one minimizing the lower-id endpoint's delta
    is reported, ties broken by lowest interface indices.
    """
    a, b = pair
    best: tuple[tuple[float, int, int], PairingOption] | None = None
    for option in options:
        evaluator.place_option(pair, option)
        after_a = evaluator.state(a)
        after_b = evaluator.state(b)
        evaluator.remove_pair(a, b)
        if _improves(base[a], after_a) and _improves(base[b], after_b):
            key = (_resolved_delta(base[a], after_a), option.r_a, option.r_b)
            if best is None or key < best[0]:
                best = (key, option)
    if best is None:
        return None
    option = best[1]
    return Link(a, option.r_a, b, option.r_b)


def is_pairwise_stable(topology: Topology, config: GameConfig) -> StabilityReport:
    """Full deviation scan: every severance incidence, every absent feasible pairing."""
    evaluator = _evaluator_for(topology, config)
    base = {i: evaluator.state(i) for i in evaluator.ids}

    severance: list[tuple[int, Link]] = []
    for link in sorted(topology.links):
        record = evaluator.remove_pair(link.node_a, link.node_b)
        after = {
            link.node_a: evaluator.state(link.node_a),
            link.node_b: evaluator.state(link.node_b),
        }
        evaluator.restore(record)
        for endpoint in (link.node_a, link.node_b):
            if _improves(base[endpoint], after[endpoint]):
                severance.append((endpoint, link))

    additions: list[Link] = []
    for pair, options in evaluator.pairings.items():
        if pair[1] in evaluator.adj[pair[0]]:
            continue
        violation = _addition_violation(evaluator, base, pair, options)
        if violation is not None:
            additions.append(violation)

    return StabilityReport(
        stable=not severance and not additions,
        severance_violations=tuple(severance),
        addition_violations=tuple(additions),
    )


def _is_stable_fast(evaluator: _Evaluator) -> bool:
    """Short-circuiting stability check against the evaluator's current links."""
    base: dict[int, tuple[float, int]] = {}

    def state_of(i: int) -> tuple[float, int]:
        cached = base.get(i)
        if cached is None:
            cached = base[i] = evaluator.state(i)
        return cached

    for pair, options in evaluator.pairings.items():
        a, b = pair
        if b in evaluator.adj[a]:
            continue
        before_a = state_of(a)
        before_b = state_of(b)
        for option in options:
            evaluator.place_option(pair, option)
            after_a = evaluator.state(a)
            if _improves(before_a, after_a) and _improves(before_b, evaluator.state(b)):
                evaluator.remove_pair(a, b)
                return False
            evaluator.remove_pair(a, b)
    for i in evaluator.ids:
        for peer in sorted(evaluator.adj[i]):
            record = evaluator.remove_pair(i, peer)
            after = evaluator.state(i)
            evaluator.restore(record)
            if _improves(state_of(i), after):
                return False
    return True


def _find_move(
    evaluator: _Evaluator,
    node_order: list[int],
    pair_order: list[tuple[int, int]],
) -> Move | None:
    """First admissible move: all severances scanned before all additions."""
    base: dict[int, tuple[float, int]] = {}

    def state_of(i: int) -> tuple[float, int]:
        cached = base.get(i)
        if cached is None:
            cached = base[i] = evaluator.state(i)
        return cached

    for i in node_order:
        for peer in sorted(evaluator.adj[i]):
            record = evaluator.remove_pair(i, peer)
            after = evaluator.state(i)
            evaluator.restore(record)
            if _improves(state_of(i), after):
                ifaces = record.ifaces
                link = Link(record.pair[0], ifaces[0], record.pair[1], ifaces[1])
                return Remove(link=link, initiator=i, delta=_resolved_delta(state_of(i), after))

    for pair in pair_order:
        a, b = pair
        if b in evaluator.adj[a]:
            continue
        options = evaluator.pairings.get(pair)
        if not options:
            continue
        before_a = state_of(a)
        before_b = state_of(b)
        best: tuple[tuple[float, int, int], PairingOption, float, float] | None = None
        for option in options:
            evaluator.place_option(pair, option)
            after_a = evaluator.state(a)
            after_b = evaluator.state(b)
            evaluator.remove_pair(a, b)
            if _improves(before_a, after_a) and _improves(before_b, after_b):
                delta_a = _resolved_delta(before_a, after_a)
                key = (delta_a, option.r_a, option.r_b)
                if best is None or key < best[0]:
                    best = (key, option, delta_a, _resolved_delta(before_b, after_b))
        if best is not None:
            _, option, delta_a, delta_b = best
            link = Link(a, option.r_a, b, option.r_b)
            return Add(link=link, delta_a=delta_a, delta_b=delta_b)
    return None


def _apply(evaluator: _Evaluator, move: Move) -> None:
    if isinstance(move, Add):
        link = move.link
        pair = link.pair
        for option in evaluator.pairings[pair]:
            if option.r_a == link.iface_a and option.r_b == link.iface_b:
                evaluator.place_option(pair, option)
                return
        raise ValueError(f"no feasible pairing backs {link}")
    evaluator.remove_pair(move.link.node_a, move.link.node_b)


def best_response_dynamics(
    scenario: Scenario, seed: int = 0, max_moves: int = DEFAULT_MAX_MOVES
) -> tuple[Topology, DynamicsTrace]:
    """Run seeded best-response dynamics from the empty topology.

    Seed 0 scans node pairs in ascending id order; any other seed applies a
    fixed pseudo-random permutation to the scan order, making order sensitivity
    measurable. Identical scenario and seed reproduce the identical trace. A
    run that stops at ``max_moves`` is reported as non-converged, never raised.
    """
    issues = validate_scenario(scenario.nodes, scenario.config)
    if issues:
        raise ValueError("; ".join(str(issue) for issue in issues))
    evaluator = _Evaluator(scenario)
    evaluator.reset()
    node_order = list(evaluator.ids)
    pair_order = sorted(evaluator.pairings)
    if seed != 0:
        rng = random.Random(seed)
        rng.shuffle(node_order)
        rng.shuffle(pair_order)

    steps: list[TraceStep] = []
    converged = False
    while len(steps) < max_moves:
        move = _find_move(evaluator, node_order, pair_order)
        if move is None:
            converged = True
            break
        _apply(evaluator, move)
        steps.append(
            TraceStep(
                move=move,
                topology_hash=links_digest(evaluator.links_snapshot()),
                costs=tuple((i, evaluator.state(i)[0]) for i in evaluator.ids),
            )
        )
    topology = Topology(scenario.nodes, evaluator.links_snapshot())
    return topology, DynamicsTrace(seed=seed, steps=tuple(steps), converged=converged)


def replay_trace(scenario: Scenario, trace: DynamicsTrace) -> Topology:
    """Re-apply a trace's moves from the empty topology."""
    topology = Topology.empty(scenario.nodes)
    for step in trace.steps:
        if isinstance(step.move, Add):
            topology = topology.with_link(step.move.link)
        else:
            topology = topology.without_link(step.move.link)
    return topology


def brute_force_stable_set(scenario: Scenario, max_nodes: int = 6) -> set[Topology]:
    """Enumerate every feasible topology and keep the pairwise-stable ones.

    Every subset of feasible pairs is enumerated, crossed with every feasible
    interface pairing for each included pair. Refuses scenarios larger than
    ``max_nodes`` (the enumeration is exponential).
    """
    if len(scenario.nodes) > max_nodes:
        raise ValueError(f"scenario has {len(scenario.nodes)} nodes, cap is {max_nodes}")
    evaluator = _Evaluator(scenario)
    pair_keys = sorted(evaluator.pairings)
    option_lists: list[tuple[PairingOption | None, ...]] = [
        (None, *evaluator.pairings[key]) for key in pair_keys
    ]
    stable: set[Topology] = set()
    for combo in itertools.product(*option_lists):
        evaluator.reset()
        for key, option in zip(pair_keys, combo):
            if option is not None:
                evaluator.place_option(key, option)
        if _is_stable_fast(evaluator):
            stable.add(Topology(scenario.nodes, evaluator.links_snapshot()))
    return stable
