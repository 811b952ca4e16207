"""Scenario and catalog file loading, validation, and canonical saving.

One structured-text format (JSON) for every file, so expert-supplied
numbers stay auditable. Loading cross-validates every reference: arc
endpoints, flow membership, susceptibility targets, and technique ids.
Saving emits a canonical ordering (ids ascending), so load - save - load
is a fixed point.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import CrossRefError, ParseError
from .hardening import ControlCatalog, SecurityControl
from .infra import (
    Arc,
    InfrastructureGraph,
    Mission,
    MissionFlow,
    ModuleNode,
    bind_flow,
    build_infrastructure,
)
from .killchain import AttackStepAnnotation, CandidateStep, PrerequisiteRule, USCKC
from .metrics import ScoreTable
from .nrs import ApplicableTechnique, RiskMatrix
from .threat import AttackTechnique, CapabilitySet, SusceptibilityMap

SCENARIO_DIR_ENV = "SPACERISK_SCENARIO_DIR"


@dataclass(frozen=True)
class Scenario:
    """A fully cross-validated analysis input bundle."""

    graph: InfrastructureGraph
    missions: tuple[Mission, ...]
    caps: CapabilitySet
    sus: SusceptibilityMap
    metadata: dict = field(default_factory=dict)


def _read_json(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path}: empty file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ParseError(f"{where}: missing key {key!r}")
    return data[key]


def resolve_input(name: str) -> Path:
    """Resolve a CLI file argument: literal path, scenario dir, bundled data."""
    path = Path(name)
    if path.exists():
        return path
    env_dir = os.environ.get(SCENARIO_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / name
        if candidate.exists():
            return candidate
    bundled = resources.files("spacerisk").joinpath("data", name)
    if bundled.is_file():
        return Path(str(bundled))
    raise ParseError(f"cannot find input file {name!r}")


def bundled_data_path(name: str) -> Path:
    return Path(str(resources.files("spacerisk").joinpath("data", name)))


def _arc_ref(entry: dict, where: str) -> tuple:
    return (
        _require(entry, "source", where),
        _require(entry, "target", where),
        int(entry.get("arc_key", 0)),
    )


def scenario_from_dict(data: dict, where: str = "scenario") -> Scenario:
    infra = _require(data, "infrastructure", where)
    nodes = [
        ModuleNode(
            id=_require(n, "id", f"{where}.nodes"),
            name=n.get("name", ""),
            segment=_require(n, "segment", f"{where}.nodes"),
            component=_require(n, "component", f"{where}.nodes"),
            emulated=bool(n.get("emulated", False)),
        )
        for n in _require(infra, "nodes", where)
    ]
    arcs = [
        Arc(
            source=_require(a, "source", f"{where}.arcs"),
            target=_require(a, "target", f"{where}.arcs"),
            arc_key=int(a.get("arc_key", 0)),
            channel=a.get("channel", ""),
            provenance=a.get("provenance", ""),
        )
        for a in _require(infra, "arcs", where)
    ]
    graph = build_infrastructure(nodes, arcs)

    missions = []
    for m in data.get("missions", []):
        mission_id = int(_require(m, "id", f"{where}.missions"))

        def flows_of(kind: str, entries) -> tuple:
            flows = []
            for f in entries:
                flow = MissionFlow(
                    mission_id=mission_id,
                    flow_index=int(_require(f, "flow_index", f"{where}.missions.flows")),
                    kind=kind,
                    nodes=tuple(_require(f, "nodes", f"{where}.missions.flows")),
                    arcs=tuple(
                        _arc_ref(a, f"{where}.missions.flows.arcs")
                        for a in f.get("arcs", [])
                    ),
                    name=f.get("name", ""),
                )
                flows.append(bind_flow(flow, graph))
            return tuple(flows)

        missions.append(
            Mission(
                id=mission_id,
                control_flows=flows_of("control", m.get("control_flows", [])),
                data_flows=flows_of("data", m.get("data_flows", [])),
            )
        )

    attacker = data.get("attacker", {})
    techniques = [
        (
            AttackTechnique(
                id=_require(t, "id", f"{where}.attacker.techniques"),
                name=t.get("name", ""),
                tactic=t.get("tactic", ""),
                catalog=t.get("catalog", "ATTACK"),
            ),
            float(_require(t, "possession", f"{where}.attacker.techniques")),
        )
        for t in attacker.get("techniques", [])
    ]
    caps = CapabilitySet(
        tuple(t for t, _ in techniques), {t.id: p for t, p in techniques}
    )

    node_beta = {}
    for entry in attacker.get("node_beta", []):
        node_id = _require(entry, "node", f"{where}.attacker.node_beta")
        tech_id = _require(entry, "technique", f"{where}.attacker.node_beta")
        if node_id not in graph:
            raise CrossRefError(f"node_beta references unknown module {node_id!r}")
        if tech_id not in caps:
            raise CrossRefError(f"node_beta references unknown technique {tech_id!r}")
        node_beta[(node_id, tech_id)] = float(_require(entry, "beta", "node_beta"))

    arc_refs = {a.ref for a in graph.arcs}
    arc_beta = {}
    for entry in attacker.get("arc_beta", []):
        ref = _arc_ref(entry, f"{where}.attacker.arc_beta")
        tech_id = _require(entry, "technique", f"{where}.attacker.arc_beta")
        if ref not in arc_refs:
            raise CrossRefError(f"arc_beta references unknown arc {ref}")
        if tech_id not in caps:
            raise CrossRefError(f"arc_beta references unknown technique {tech_id!r}")
        arc_beta[(ref[0], ref[1], ref[2], tech_id)] = float(_require(entry, "beta", "arc_beta"))

    return Scenario(
        graph=graph,
        missions=tuple(missions),
        caps=caps,
        sus=SusceptibilityMap(node_beta=node_beta, arc_beta=arc_beta),
        metadata=data.get("metadata", {}),
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return scenario_from_dict(_read_json(path), where=str(path))


def scenario_to_dict(scenario: Scenario) -> dict:
    """Canonical dict form: every list ordered by id/ref."""
    graph = scenario.graph
    nodes = [
        {
            "id": n.id,
            "name": n.name,
            "segment": n.segment,
            "component": n.component,
            "emulated": n.emulated,
        }
        for n in sorted(graph.nodes, key=lambda n: n.id)
    ]
    arcs = [
        {
            "source": a.source,
            "target": a.target,
            "arc_key": a.arc_key,
            "channel": a.channel,
            "provenance": a.provenance,
        }
        for a in sorted(graph.arcs, key=lambda a: a.ref)
    ]
    missions = []
    for mission in sorted(scenario.missions, key=lambda m: m.id):
        def flow_dicts(flows):
            return [
                {
                    "flow_index": f.flow_index,
                    "name": f.name,
                    "nodes": sorted(f.nodes),
                    "arcs": [
                        {"source": s, "target": t, "arc_key": k}
                        for s, t, k in sorted(f.arcs)
                    ],
                }
                for f in sorted(flows, key=lambda f: f.flow_index)
            ]

        missions.append(
            {
                "id": mission.id,
                "control_flows": flow_dicts(mission.control_flows),
                "data_flows": flow_dicts(mission.data_flows),
            }
        )
    caps = scenario.caps
    techniques = [
        {
            "id": t.id,
            "name": t.name,
            "tactic": t.tactic,
            "catalog": t.catalog,
            "possession": caps.possession[t.id],
        }
        for t in sorted(caps.techniques, key=lambda t: t.id)
    ]
    node_beta = [
        {"node": node, "technique": tech, "beta": beta}
        for (node, tech), beta in sorted(scenario.sus.node_beta.items())
    ]
    arc_beta = [
        {"source": s, "target": t, "arc_key": k, "technique": tech, "beta": beta}
        for (s, t, k, tech), beta in sorted(scenario.sus.arc_beta.items())
    ]
    return {
        "metadata": scenario.metadata,
        "infrastructure": {"nodes": nodes, "arcs": arcs},
        "missions": missions,
        "attacker": {
            "techniques": techniques,
            "node_beta": node_beta,
            "arc_beta": arc_beta,
        },
    }


def save_scenario(scenario: Scenario, path: str | Path):
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


def load_control_catalog(path: str | Path) -> ControlCatalog:
    data = _read_json(Path(path))
    controls = [
        SecurityControl(
            id=_require(c, "control_id", "control catalog"),
            name=c.get("name", ""),
            techniques=tuple(_require(c, "techniques", "control catalog")),
        )
        for c in _require(data, "controls", str(path))
    ]
    return ControlCatalog(tuple(controls))


def load_score_table(path: str | Path) -> ScoreTable:
    data = _read_json(Path(path))
    tactics = {t["id"]: float(t["score"]) for t in data.get("tactics", [])}
    technique_scores = {}
    technique_likelihoods = {}
    for t in data.get("techniques", []):
        if "score" in t:
            technique_scores[t["id"]] = float(t["score"])
        if "likelihood" in t:
            technique_likelihoods[t["id"]] = float(t["likelihood"])
    return ScoreTable(
        tactic_scores=tactics,
        technique_scores=technique_scores,
        technique_likelihoods=technique_likelihoods,
    )


def load_annotation(path: str | Path) -> tuple[str, tuple[AttackStepAnnotation, ...]]:
    """Incident annotation: observed steps with extrapolated candidate sets."""
    data = _read_json(Path(path))
    incident_id = _require(data, "incident_id", str(path))
    steps = []
    for s in _require(data, "steps", str(path)):
        extrapolated = tuple(
            CandidateStep(
                phase=_require(e, "phase", "extrapolated step"),
                activity=_require(e, "activity", "extrapolated step"),
                tactic=_require(e, "tactic", "extrapolated step"),
                candidates=tuple(_require(e, "candidates", "extrapolated step")),
            )
            for e in s.get("extrapolated", [])
        )
        steps.append(
            AttackStepAnnotation(
                step_index=int(_require(s, "step_index", "step")),
                phase=_require(s, "phase", "step"),
                activity=_require(s, "activity", "step"),
                tactic=_require(s, "tactic", "step"),
                observed_technique=_require(s, "observed_technique", "step"),
                extrapolated=extrapolated,
            )
        )
    return incident_id, tuple(steps)


def load_rules(path: str | Path) -> tuple[PrerequisiteRule, ...]:
    data = _read_json(Path(path))
    return tuple(
        PrerequisiteRule(
            technique=_require(r, "technique", "rule"),
            prior_techniques=tuple(r.get("prior_techniques", [])),
            prior_tactics=tuple(r.get("prior_tactics", [])),
        )
        for r in data.get("rules", [])
    )


def load_chain_sets(path: str | Path) -> list[tuple[str, tuple[USCKC, ...]]]:
    """Chains file for the metrics command: per-incident chain sets."""
    data = _read_json(Path(path))
    result = []
    for entry in _require(data, "incidents", str(path)):
        chains = tuple(
            USCKC(
                phases=tuple(c["phases"]),
                activities=tuple(c["activities"]),
                tactics=tuple(c["tactics"]),
                techniques=tuple(c["techniques"]),
            )
            for c in _require(entry, "chains", "incident")
        )
        result.append((_require(entry, "incident_id", "incident"), chains))
    return result


def load_nrs_inputs(path: str | Path) -> tuple[tuple[ApplicableTechnique, ...], dict, str]:
    """NRS assessment input: applicable techniques, base scores, default tau."""
    data = _read_json(Path(path))
    applicable = []
    base_scores = {}
    for t in _require(data, "techniques", str(path)):
        technique = _require(t, "technique", "nrs technique")
        criticality = _require(t, "criticality", "nrs technique")
        base = t.get("base")
        if base is not None:
            base_scores[(technique, criticality)] = (
                int(base["impact"]),
                int(base["likelihood"]),
            )
        tailored = t.get("tailored")
        applicable.append(
            ApplicableTechnique(
                technique=technique,
                criticality=criticality,
                tailored=(
                    (int(tailored["impact"]), int(tailored["likelihood"]))
                    if tailored is not None
                    else None
                ),
            )
        )
    return tuple(applicable), base_scores, data.get("tau", "medium")


def load_nrs_catalog(path: str | Path) -> dict:
    data = _read_json(Path(path))
    catalog = {}
    for tech_id, entries in _require(data, "techniques", str(path)).items():
        catalog[tech_id] = [
            {
                "countermeasure": _require(e, "countermeasure", tech_id),
                "controls": list(_require(e, "controls", tech_id)),
            }
            for e in entries
        ]
    return catalog


def load_matrix(path: str | Path) -> RiskMatrix:
    data = _read_json(Path(path))
    cells = tuple(tuple(int(v) for v in row) for row in _require(data, "cells", str(path)))
    bands = {
        band: (int(lo), int(hi))
        for band, (lo, hi) in _require(data, "bands", str(path)).items()
    }
    return RiskMatrix(cells=cells, bands=bands)
