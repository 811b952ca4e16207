"""Mission hardening: iterative technique mitigation and control selection.

A hardening run decides which attack techniques must be mitigated so that
every mission's disruption likelihood drops to the tolerance ``tau``, then
maps each mitigated technique to a security control by catalog lookup.

Mitigating a technique removes it from the working capability set; the
module or arc whose exposure triggered the mitigation is deleted from the
working graph, modeling the deployed control closing that surface. Two
rules drive the loop:

* immediate wave: any module or arc whose joint direct likelihood already
  exceeds ``tau`` has all its directly-applicable techniques mitigated and
  is deleted;
* cascade waves: after re-analysis (cascading effects on, no pruning), any
  arc whose likelihood still exceeds ``tau`` has the techniques applicable
  to its source module and to the arc itself mitigated, and the source
  module is deleted; repeated until every mission is within tolerance or a
  wave can make no progress (reported as unmitigable, never raised).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .engine import (
    CascadeConfig,
    analyze,
    direct_joint_likelihoods,
    prune_unattackable,
)
from .errors import MissingControl, ValidationError
from .infra import InfrastructureGraph, Mission
from .threat import CapabilitySet, SusceptibilityMap


@dataclass(frozen=True)
class SecurityControl:
    id: str
    name: str
    techniques: tuple[str, ...]


@dataclass(frozen=True)
class ControlCatalog:
    """Security controls and the techniques each one mitigates."""

    controls: tuple[SecurityControl, ...]

    def controls_for(self, tech_id: str) -> tuple[str, ...]:
        """Candidate control ids for a technique, in catalog order."""
        return tuple(c.id for c in self.controls if tech_id in c.techniques)


@dataclass(frozen=True)
class HardeningPlan:
    tau: float
    case: int
    necessary: bool
    mitigated: tuple[str, ...]
    deleted_nodes: tuple[str, ...]
    deleted_arcs: tuple = ()
    selected_controls: dict = field(default_factory=dict)   # technique -> control id
    control_candidates: dict = field(default_factory=dict)  # technique -> all candidates
    residual: dict = field(default_factory=dict)            # mission id -> likelihood
    unmitigable: bool = False

    def unmitigated(self, caps: CapabilitySet) -> tuple[str, ...]:
        return tuple(t for t in caps.ids() if t not in self.mitigated)


def select_controls(mitigated, catalog: ControlCatalog) -> dict:
    """First-listed control per mitigated technique.

    Raises MissingControl naming the first technique the catalog cannot
    mitigate. Full candidate lists are kept on the plan for reporting.
    """
    selected: dict[str, str] = {}
    for tech_id in mitigated:
        candidates = catalog.controls_for(tech_id)
        if not candidates:
            raise MissingControl(f"no catalog control mitigates technique {tech_id!r}")
        selected[tech_id] = candidates[0]
    return selected


def harden(
    graph: InfrastructureGraph,
    missions,
    caps: CapabilitySet,
    sus: SusceptibilityMap,
    tau: float,
    catalog: ControlCatalog,
    config: CascadeConfig = CascadeConfig(),
) -> HardeningPlan:
    """Run the mitigation loop until every mission is within tolerance.

    ``config.case`` fixes the analysis semantics: case 1 works on the pruned
    graph. Re-analyses between waves always run with cascading effects on
    and no further pruning.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"tau must be in [0, 1], got {tau}")

    initial = analyze(graph, missions, caps, sus, config)
    if all(l <= tau for l in initial.mission_l.values()):
        return HardeningPlan(
            tau=tau,
            case=config.case,
            necessary=False,
            mitigated=(),
            deleted_nodes=(),
            deleted_arcs=(),
            selected_controls={},
            control_candidates={},
            residual=dict(initial.mission_l),
        )

    flag0 = replace(config, case=0)
    work_graph = prune_unattackable(graph, caps, sus) if config.case == 1 else graph
    work_caps = caps
    mitigated: list[str] = []
    deleted_nodes: set[str] = set()
    deleted_arcs: set = set()

    def delete(nodes: set, arcs: set):
        nonlocal work_graph
        before = set(a.ref for a in work_graph.arcs)
        work_graph = work_graph.remove(nodes=nodes, arcs=arcs)
        deleted_nodes.update(nodes)
        deleted_arcs.update(before - set(a.ref for a in work_graph.arcs))

    def mitigate(techs: set):
        nonlocal work_caps
        mitigated.extend(sorted(techs))
        work_caps = work_caps.without(techs)

    # Immediate wave: direct joint exposure above tau, judged on the
    # wave-start state so the outcome is order-independent.
    node_l, arc_l = direct_joint_likelihoods(work_graph, work_caps, sus)
    over_nodes = {v for v, l in node_l.items() if l > tau}
    over_arcs = {ref for ref, l in arc_l.items() if l > tau}
    techs: set[str] = set()
    for v in sorted(over_nodes):
        techs.update(t for t in sus.node_techniques(v) if t in work_caps)
    for ref in sorted(over_arcs):
        techs.update(t for t in sus.arc_techniques(ref) if t in work_caps)
    if techs or over_nodes or over_arcs:
        mitigate(techs)
        delete(over_nodes, over_arcs)

    state = analyze(work_graph, missions, work_caps, sus, flag0)

    unmitigable = False
    while any(l > tau for l in state.mission_l.values()):
        over = sorted(ref for ref, l in state.arc_l.items() if l > tau)
        if not over:
            unmitigable = True
            break
        techs = set()
        sources = set()
        for ref in over:
            sources.add(ref[0])
            techs.update(t for t in sus.node_techniques(ref[0]) if t in work_caps)
            techs.update(t for t in sus.arc_techniques(ref) if t in work_caps)
        mitigate(techs)
        delete(sources, set())
        state = analyze(work_graph, missions, work_caps, sus, flag0)

    selected = select_controls(mitigated, catalog)
    candidates = {t: catalog.controls_for(t) for t in mitigated}
    return HardeningPlan(
        tau=tau,
        case=config.case,
        necessary=True,
        mitigated=tuple(mitigated),
        deleted_nodes=tuple(sorted(deleted_nodes)),
        deleted_arcs=tuple(sorted(deleted_arcs)),
        selected_controls=selected,
        control_candidates=candidates,
        residual=dict(state.mission_l),
        unmitigable=unmitigable,
    )


def residual_risk(
    plan: HardeningPlan,
    graph: InfrastructureGraph,
    missions,
    caps: CapabilitySet,
    sus: SusceptibilityMap,
    config: CascadeConfig = CascadeConfig(),
) -> dict:
    """Re-analyze with the plan applied; returns per-mission residuals."""
    work = prune_unattackable(graph, caps, sus) if plan.case == 1 else graph
    work = work.remove(nodes=set(plan.deleted_nodes), arcs=set(plan.deleted_arcs))
    reduced = caps.without(set(plan.mitigated))
    state = analyze(work, missions, reduced, sus, replace(config, case=0))
    return dict(state.mission_l)
