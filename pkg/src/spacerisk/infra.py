"""Infrastructure multigraph, mission flows, and missions.

A space infrastructure is a directed multigraph of modules (nodes) and
communication relationships (arcs). Parallel arcs between the same pair of
modules are distinguished by a small integer ``arc_key``. Missions are built
from control flows and data flows, each a subgraph of the infrastructure.

Graphs and flows are immutable after validation; every "mutation" (pruning,
hardening) constructs a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import DanglingArc, DuplicateNodeId, FlowNotSubgraph, ValidationError

SEGMENTS = ("space", "ground", "user", "link-endpoint-owner")

# (source, target, arc_key)
ArcRef = tuple[str, str, int]


@dataclass(frozen=True)
class ModuleNode:
    """One module of the infrastructure, the finest modeled unit."""

    id: str
    name: str
    segment: str
    component: str
    emulated: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValidationError("module id must be non-empty")
        if self.segment not in SEGMENTS:
            raise ValidationError(
                f"module {self.id!r}: segment {self.segment!r} not in {SEGMENTS}"
            )
        if not self.component:
            raise ValidationError(f"module {self.id!r}: component must be non-empty")


@dataclass(frozen=True)
class Arc:
    """Directed communication relationship from ``source`` to ``target``.

    ``provenance`` records where the relationship is documented in the
    scenario's infrastructure description, or marks the arc as inferred.
    """

    source: str
    target: str
    arc_key: int = 0
    channel: str = ""
    provenance: str = ""

    @property
    def ref(self) -> ArcRef:
        return (self.source, self.target, self.arc_key)


@dataclass(frozen=True)
class InfrastructureGraph:
    nodes: tuple[ModuleNode, ...]
    arcs: tuple[Arc, ...]
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)
    _in: dict = field(default_factory=dict, repr=False, compare=False)
    _out: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        by_id: dict[str, ModuleNode] = {}
        for node in self.nodes:
            if node.id in by_id:
                raise DuplicateNodeId(f"duplicate module id {node.id!r}")
            by_id[node.id] = node
        in_arcs: dict[str, list[Arc]] = {n.id: [] for n in self.nodes}
        out_arcs: dict[str, list[Arc]] = {n.id: [] for n in self.nodes}
        seen: set[ArcRef] = set()
        for arc in self.arcs:
            for endpoint in (arc.source, arc.target):
                if endpoint not in by_id:
                    raise DanglingArc(
                        f"arc {arc.source}->{arc.target} references unknown module "
                        f"{endpoint!r}"
                    )
            if arc.ref in seen:
                raise ValidationError(f"duplicate arc {arc.ref}")
            seen.add(arc.ref)
            in_arcs[arc.target].append(arc)
            out_arcs[arc.source].append(arc)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_in", in_arcs)
        object.__setattr__(self, "_out", out_arcs)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> ModuleNode:
        return self._by_id[node_id]

    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_id))

    def arc_refs(self) -> tuple[ArcRef, ...]:
        return tuple(sorted(a.ref for a in self.arcs))

    def in_arcs(self, node_id: str) -> tuple[Arc, ...]:
        return tuple(self._in[node_id])

    def out_arcs(self, node_id: str) -> tuple[Arc, ...]:
        return tuple(self._out[node_id])

    def remove(self, nodes: set[str] = frozenset(), arcs: set[ArcRef] = frozenset()) -> "InfrastructureGraph":
        """New graph without the given nodes (and their adjacent arcs) and arcs."""
        kept_nodes = tuple(n for n in self.nodes if n.id not in nodes)
        kept_arcs = tuple(
            a for a in self.arcs
            if a.ref not in arcs and a.source not in nodes and a.target not in nodes
        )
        return InfrastructureGraph(kept_nodes, kept_arcs)


def build_infrastructure(nodes: list[ModuleNode], arcs: list[Arc]) -> InfrastructureGraph:
    """Validate and assemble the infrastructure multigraph.

    Raises DuplicateNodeId or DanglingArc on the first offending element.
    """
    return InfrastructureGraph(tuple(nodes), tuple(arcs))


@dataclass(frozen=True)
class MissionFlow:
    """A control or data flow: a subgraph of the bound infrastructure.

    Flows are not necessarily line graphs, and need not even be connected;
    ``nodes`` and ``arcs`` are simply the member sets.
    """

    mission_id: int
    flow_index: int
    kind: str  # "control" | "data"
    nodes: tuple[str, ...]
    arcs: tuple[ArcRef, ...]
    name: str = ""
    graph: InfrastructureGraph | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("control", "data"):
            raise ValidationError(f"flow kind must be 'control' or 'data', got {self.kind!r}")

    @property
    def bound(self) -> bool:
        return self.graph is not None

    def label(self) -> str:
        return self.name or f"{self.kind}[{self.flow_index}]"


def bind_flow(flow: MissionFlow, graph: InfrastructureGraph) -> MissionFlow:
    """Check the subset constraints and return the flow bound to ``graph``.

    Accepted iff flow.nodes is a subset of the graph's nodes, flow.arcs a
    subset of its arcs, and every arc's endpoints are inside the flow's own
    node set. FlowNotSubgraph names the first offending element.
    """
    arc_refs = set(a.ref for a in graph.arcs)
    node_set = set(flow.nodes)
    for node_id in flow.nodes:
        if node_id not in graph:
            raise FlowNotSubgraph(
                f"flow {flow.label()}: node {node_id!r} is not in the infrastructure"
            )
    for ref in flow.arcs:
        if ref not in arc_refs:
            raise FlowNotSubgraph(
                f"flow {flow.label()}: arc {ref} is not in the infrastructure"
            )
        if ref[0] not in node_set or ref[1] not in node_set:
            raise FlowNotSubgraph(
                f"flow {flow.label()}: arc {ref} has an endpoint outside the flow's nodes"
            )
    return replace(flow, graph=graph)


@dataclass(frozen=True)
class Mission:
    id: int
    control_flows: tuple[MissionFlow, ...]
    data_flows: tuple[MissionFlow, ...]

    def __post_init__(self):
        if not self.control_flows and not self.data_flows:
            raise ValidationError(f"mission {self.id}: needs at least one flow")
        for flow in self.flows():
            if flow.mission_id != self.id:
                raise ValidationError(
                    f"mission {self.id}: flow {flow.label()} carries mission_id "
                    f"{flow.mission_id}"
                )

    def flows(self) -> tuple[MissionFlow, ...]:
        return self.control_flows + self.data_flows


def mission_union(mission: Mission) -> InfrastructureGraph:
    """Node/arc union of all the mission's flows, as a standalone graph.

    All flows must already be bound to the same infrastructure graph.
    """
    graphs = {id(f.graph) for f in mission.flows()}
    if None in {f.graph for f in mission.flows()} or len(graphs) != 1:
        raise ValidationError(f"mission {mission.id}: all flows must be bound to one graph")
    graph = mission.flows()[0].graph
    assert graph is not None
    node_ids = sorted({n for f in mission.flows() for n in f.nodes})
    arc_refs = {r for f in mission.flows() for r in f.arcs}
    nodes = tuple(graph.node(n) for n in node_ids)
    arcs = tuple(a for a in graph.arcs if a.ref in arc_refs)
    return InfrastructureGraph(nodes, arcs)
