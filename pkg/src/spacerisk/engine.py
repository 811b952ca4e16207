"""Compromise-likelihood engine: direct, joint, and cascading effects.

The analysis pipeline: per-technique direct likelihoods, joint likelihoods
per module and per arc, optional pruning of unattackable elements (case 1),
then a fixed-point cascade that propagates compromise along arcs:

* a compromised source module or a compromised in-arc can compromise the
  target module (types 1 and 2), and
* a compromised module can compromise its outgoing arcs (type 3).

Under the default aggregators every update is monotone non-decreasing and
bounded by 1, so the iteration always converges; the loop stops when no
element moves by more than ``epsilon``. Mission disruption is the max over
the mission's flows, each flow scored by the max over its member modules
and arcs (weakest-link reading).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .infra import ArcRef, InfrastructureGraph, Mission, MissionFlow
from .threat import CapabilitySet, SusceptibilityMap
from .errors import ValidationError


def joint_node_likelihood(contributions) -> float:
    """Joint direct compromise likelihood of one module.

    Treats the per-technique direct likelihoods as independent success
    probabilities: 1 minus the probability that every attempt fails.
    Empty input yields 0.
    """
    return 1.0 - math.prod(1.0 - c for c in contributions)


def joint_arc_likelihood(contributions) -> float:
    """Joint direct compromise likelihood of one arc (same independence fold)."""
    return 1.0 - math.prod(1.0 - c for c in contributions)


def _default_joint_arc(source_likelihood: float, contributions) -> float:
    # The source module's likelihood is available to custom strategies, but
    # the default routes node-to-arc influence through the cascade only,
    # which avoids double counting.
    return joint_arc_likelihood(contributions)


def _default_cascade_node(own: float, inputs) -> float:
    # inputs: (source likelihood, arc likelihood) per in-arc. The additive
    # form leaves a node bitwise unchanged when nothing compromises its
    # in-arcs, so in-degree-0 nodes keep exactly their direct likelihood.
    hazard_free = 1.0
    for l_source, l_arc in inputs:
        hazard_free *= (1.0 - l_source) * (1.0 - l_arc)
    return own + (1.0 - own) * (1.0 - hazard_free)


def _default_cascade_arc(own: float, source_likelihood: float) -> float:
    return own + (1.0 - own) * source_likelihood


@dataclass(frozen=True)
class Aggregators:
    """Pluggable combination strategies for the four update rules."""

    joint_node: object = joint_node_likelihood
    joint_arc: object = _default_joint_arc
    cascade_node: object = _default_cascade_node
    cascade_arc: object = _default_cascade_arc


DEFAULT_AGGREGATORS = Aggregators()

SCHEDULES = ("synchronous", "in-place")


@dataclass(frozen=True)
class CascadeConfig:
    """Engine knobs.

    ``case`` 0 keeps unattackable modules as cascade targets; case 1 deletes
    them (and their adjacent arcs) before cascading. The default schedule is
    synchronous: one iteration computes every update from the previous
    iteration's values, so results do not depend on element ordering.
    """

    case: int = 0
    epsilon: float = 1e-10
    max_iterations: int = 1_000_000
    update_schedule: str = "synchronous"
    aggregators: Aggregators = DEFAULT_AGGREGATORS

    def __post_init__(self):
        if self.case not in (0, 1):
            raise ValidationError(f"case must be 0 or 1, got {self.case}")
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")
        if self.update_schedule not in SCHEDULES:
            raise ValidationError(f"update_schedule must be one of {SCHEDULES}")


@dataclass(frozen=True)
class RiskState:
    """Per-entity compromise/disruption likelihoods plus loop diagnostics."""

    node_l: dict = field(default_factory=dict)     # node id -> [0, 1]
    arc_l: dict = field(default_factory=dict)      # ArcRef -> [0, 1]
    flow_l: dict = field(default_factory=dict)     # (mission, kind, index) -> [0, 1]
    mission_l: dict = field(default_factory=dict)  # mission id -> [0, 1]
    iterations: int = 0
    converged: bool = True
    pruned_nodes: tuple = ()
    pruned_arcs: tuple = ()


def direct_joint_likelihoods(
    graph: InfrastructureGraph,
    caps: CapabilitySet,
    sus: SusceptibilityMap,
    aggregators: Aggregators = DEFAULT_AGGREGATORS,
) -> tuple[dict, dict]:
    """Joint direct likelihoods per module and per arc (no cascading)."""
    tech_ids = caps.ids()
    node_l: dict[str, float] = {}
    for node_id in graph.node_ids():
        contributions = [
            sus.of_node(node_id, t) * caps.possession_of(t)
            for t in tech_ids
            if sus.of_node(node_id, t) > 0.0
        ]
        node_l[node_id] = aggregators.joint_node(contributions)
    arc_l: dict[ArcRef, float] = {}
    for arc in graph.arcs:
        contributions = [
            sus.of_arc(arc.ref, t) * caps.possession_of(t)
            for t in tech_ids
            if sus.of_arc(arc.ref, t) > 0.0
        ]
        arc_l[arc.ref] = aggregators.joint_arc(node_l[arc.source], contributions)
    return node_l, arc_l


def prune_unattackable(
    graph: InfrastructureGraph,
    caps: CapabilitySet,
    sus: SusceptibilityMap,
) -> InfrastructureGraph:
    """Case-1 reduction: drop every element the techniques cannot touch.

    A module is kept iff it is directly attackable or one of its in-arcs is;
    everything else, with its adjacent arcs, needs no further consideration.
    Deletion is applied repeatedly until stable (one pass suffices because
    keeping a module depends only on its own direct attack surface).
    """
    node_l, arc_l = direct_joint_likelihoods(graph, caps, sus)
    return _prune_with_joints(graph, node_l, arc_l)


def _prune_with_joints(graph, node_l, arc_l) -> InfrastructureGraph:
    while True:
        doomed = {
            node_id
            for node_id in graph.node_ids()
            if node_l.get(node_id, 0.0) == 0.0
            and all(arc_l.get(a.ref, 0.0) == 0.0 for a in graph.in_arcs(node_id))
        }
        if not doomed:
            return graph
        graph = graph.remove(nodes=doomed)


def cascade_fixed_point(
    state: RiskState,
    graph: InfrastructureGraph,
    config: CascadeConfig = CascadeConfig(),
    on_iteration=None,
) -> RiskState:
    """Iterate the cascade updates until no element moves more than epsilon.

    ``state`` holds the post-joint direct likelihoods. If the iteration cap
    is hit first, the state is still returned with ``converged=False``.
    ``on_iteration(i, node_l, arc_l)`` is invoked with snapshots after every
    sweep, which property tests use to check monotonicity.
    """
    node_l = dict(state.node_l)
    arc_l = dict(state.arc_l)
    node_order = graph.node_ids()
    arc_order = tuple(sorted(a.ref for a in graph.arcs))
    in_arcs = {n: tuple(sorted(graph.in_arcs(n), key=lambda a: a.ref)) for n in node_order}
    agg = config.aggregators
    synchronous = config.update_schedule == "synchronous"

    iterations = 0
    converged = False
    while iterations < config.max_iterations:
        iterations += 1
        delta = 0.0
        source_node = dict(node_l) if synchronous else node_l
        source_arc = dict(arc_l) if synchronous else arc_l
        for node_id in node_order:
            inputs = [
                (source_node[a.source], source_arc[a.ref]) for a in in_arcs[node_id]
            ]
            updated = agg.cascade_node(source_node[node_id], inputs)
            delta = max(delta, abs(updated - node_l[node_id]))
            node_l[node_id] = updated
        for ref in arc_order:
            updated = agg.cascade_arc(source_arc[ref], source_node[ref[0]])
            delta = max(delta, abs(updated - arc_l[ref]))
            arc_l[ref] = updated
        if on_iteration is not None:
            on_iteration(iterations, dict(node_l), dict(arc_l))
        if delta <= config.epsilon:
            converged = True
            break

    return RiskState(
        node_l=node_l,
        arc_l=arc_l,
        flow_l=dict(state.flow_l),
        mission_l=dict(state.mission_l),
        iterations=iterations,
        converged=converged,
        pruned_nodes=state.pruned_nodes,
        pruned_arcs=state.pruned_arcs,
    )


def flow_disruption(flow: MissionFlow, state: RiskState) -> float:
    """Max compromise likelihood over the flow's member modules and arcs.

    Members absent from the state (pruned or hardened away) cannot be
    compromised and read as 0.
    """
    best = 0.0
    for node_id in flow.nodes:
        best = max(best, state.node_l.get(node_id, 0.0))
    for ref in flow.arcs:
        best = max(best, state.arc_l.get(ref, 0.0))
    return best


def mission_disruption(mission: Mission, state: RiskState, aggregate=None) -> float:
    """Disruption likelihood of a mission: max over its flows by default."""
    values = [flow_disruption(f, state) for f in mission.flows()]
    if not values:
        return 0.0
    if aggregate is None:
        return max(values)
    return aggregate(values)


def analyze(
    graph: InfrastructureGraph,
    missions: list[Mission] | tuple[Mission, ...],
    caps: CapabilitySet,
    sus: SusceptibilityMap,
    config: CascadeConfig = CascadeConfig(),
) -> RiskState:
    """Full pipeline: direct -> joint -> optional prune -> cascade -> missions."""
    node_l, arc_l = direct_joint_likelihoods(graph, caps, sus, config.aggregators)

    pruned_nodes: tuple = ()
    pruned_arcs: tuple = ()
    work = graph
    if config.case == 1:
        work = _prune_with_joints(graph, node_l, arc_l)
        kept_arcs = set(r for r in (a.ref for a in work.arcs))
        pruned_nodes = tuple(sorted(set(graph.node_ids()) - set(work.node_ids())))
        pruned_arcs = tuple(sorted(set(a.ref for a in graph.arcs) - kept_arcs))
        node_l = {n: node_l[n] for n in work.node_ids()}
        arc_l = {a.ref: arc_l[a.ref] for a in work.arcs}

    state = RiskState(
        node_l=node_l, arc_l=arc_l, pruned_nodes=pruned_nodes, pruned_arcs=pruned_arcs
    )
    state = cascade_fixed_point(state, work, config)

    flow_l = {}
    mission_l = {}
    for mission in missions:
        for flow in mission.flows():
            flow_l[(mission.id, flow.kind, flow.flow_index)] = flow_disruption(flow, state)
        mission_l[mission.id] = mission_disruption(mission, state)
    return RiskState(
        node_l=state.node_l,
        arc_l=state.arc_l,
        flow_l=flow_l,
        mission_l=mission_l,
        iterations=state.iterations,
        converged=state.converged,
        pruned_nodes=pruned_nodes,
        pruned_arcs=pruned_arcs,
    )
