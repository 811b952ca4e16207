"""Deterministic report rendering.

Identical inputs and configuration must produce byte-identical output:
every table is ordered by ascending ids, and floats are rendered with
repr (full precision) next to a 2-decimal summary column. The CSV column
layout is documented in docs/report_schema.md.
"""

from __future__ import annotations

from .engine import CascadeConfig, RiskState
from .errors import ValidationError
from .hardening import HardeningPlan
from .nrs import AssessmentResult


def _likelihood(value: float) -> str:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"likelihood {value} outside [0, 1]")
    return repr(value)


def _row(value: float) -> str:
    return f"{_likelihood(value)} ({value:.2f})"


def _arc_label(ref) -> str:
    source, target, key = ref
    label = f"{source}->{target}"
    return label if key == 0 else f"{label}#{key}"


def config_echo(config: CascadeConfig) -> list[str]:
    return [
        f"case: {config.case}",
        f"epsilon: {config.epsilon!r}",
        f"max_iterations: {config.max_iterations}",
        f"update_schedule: {config.update_schedule}",
    ]


def analysis_text(state: RiskState, config: CascadeConfig) -> str:
    lines = ["# risk analysis", ""]
    lines += config_echo(config)
    lines += [
        f"iterations: {state.iterations}",
        f"converged: {state.converged}",
        f"nodes: {len(state.node_l)}  arcs: {len(state.arc_l)}",
    ]
    if state.pruned_nodes or state.pruned_arcs:
        lines.append(
            f"pruned: {len(state.pruned_nodes)} nodes, {len(state.pruned_arcs)} arcs"
        )
        lines.append("pruned nodes: " + ", ".join(state.pruned_nodes))
    lines.append("")
    lines.append("## modules")
    for node_id in sorted(state.node_l):
        lines.append(f"{node_id}: {_row(state.node_l[node_id])}")
    lines.append("")
    lines.append("## arcs")
    for ref in sorted(state.arc_l):
        lines.append(f"{_arc_label(ref)}: {_row(state.arc_l[ref])}")
    lines.append("")
    lines.append("## flows")
    for key in sorted(state.flow_l):
        mission_id, kind, index = key
        lines.append(f"mission {mission_id} {kind}[{index}]: {_row(state.flow_l[key])}")
    lines.append("")
    lines.append("## missions")
    for mission_id in sorted(state.mission_l):
        lines.append(f"L({mission_id}): {_row(state.mission_l[mission_id])}")
    return "\n".join(lines) + "\n"


def analysis_csv(state: RiskState) -> str:
    lines = ["kind,id,likelihood,summary"]
    for node_id in sorted(state.node_l):
        value = state.node_l[node_id]
        lines.append(f"node,{node_id},{_likelihood(value)},{value:.2f}")
    for ref in sorted(state.arc_l):
        value = state.arc_l[ref]
        lines.append(f"arc,{_arc_label(ref)},{_likelihood(value)},{value:.2f}")
    for key in sorted(state.flow_l):
        mission_id, kind, index = key
        value = state.flow_l[key]
        lines.append(f"flow,{mission_id}:{kind}[{index}],{_likelihood(value)},{value:.2f}")
    for mission_id in sorted(state.mission_l):
        value = state.mission_l[mission_id]
        lines.append(f"mission,{mission_id},{_likelihood(value)},{value:.2f}")
    return "\n".join(lines) + "\n"


def plan_text(plan: HardeningPlan, config: CascadeConfig) -> str:
    lines = ["# hardening plan", ""]
    lines += config_echo(config)
    lines += [
        f"tau: {plan.tau!r}",
        f"necessary: {plan.necessary}",
        f"unmitigable: {plan.unmitigable}",
        "",
        "## mitigated techniques (in mitigation order)",
    ]
    lines += [f"- {t}" for t in plan.mitigated] or ["- none"]
    lines.append("")
    lines.append("## selected controls")
    for tech_id in sorted(plan.selected_controls):
        candidates = ", ".join(plan.control_candidates.get(tech_id, ()))
        lines.append(f"{tech_id}: {plan.selected_controls[tech_id]} (candidates: {candidates})")
    lines.append("")
    lines.append("## deleted")
    lines.append("nodes: " + (", ".join(plan.deleted_nodes) or "none"))
    lines.append("arcs: " + (", ".join(_arc_label(r) for r in plan.deleted_arcs) or "none"))
    lines.append("")
    lines.append("## residual mission disruption")
    for mission_id in sorted(plan.residual):
        lines.append(f"L({mission_id}): {_row(plan.residual[mission_id])}")
    return "\n".join(lines) + "\n"


def plan_csv(plan: HardeningPlan) -> str:
    lines = ["kind,id,value,summary"]
    for tech_id in plan.mitigated:
        control = plan.selected_controls.get(tech_id, "")
        lines.append(f"mitigated,{tech_id},{control},")
    for mission_id in sorted(plan.residual):
        value = plan.residual[mission_id]
        lines.append(f"residual,{mission_id},{_likelihood(value)},{value:.2f}")
    return "\n".join(lines) + "\n"


def nrs_text(result: AssessmentResult, tau: str) -> str:
    lines = ["# notional risk assessment", "", f"tau: {tau}", ""]
    lines.append("## techniques")
    for a in result.assessments:
        base = "-" if a.base is None else f"({a.base[0]},{a.base[1]})"
        verdict = "tolerable" if a.tolerable else "mitigate"
        lines.append(
            f"{a.technique}: criticality={a.criticality} base={base} "
            f"tailored=({a.tailored[0]},{a.tailored[1]}) score={a.score} "
            f"band={a.band} -> {verdict}"
        )
        if not a.tolerable:
            lines.append(
                f"  countermeasure: {a.selected_countermeasures[0]} "
                f"(candidates: {', '.join(a.countermeasure_candidates)}) "
                f"control: {a.selected_controls[0]}"
            )
    lines.append("")
    lines.append("## selected security controls")
    lines.append(", ".join(result.controls) or "none")
    return "\n".join(lines) + "\n"


def nrs_csv(result: AssessmentResult) -> str:
    lines = ["technique,criticality,impact,likelihood,score,band,tolerable,controls"]
    for a in result.assessments:
        controls = ";".join(a.selected_controls)
        lines.append(
            f"{a.technique},{a.criticality},{a.tailored[0]},{a.tailored[1]},"
            f"{a.score},{a.band},{a.tolerable},{controls}"
        )
    return "\n".join(lines) + "\n"
