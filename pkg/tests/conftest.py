"""Shared fixtures and randomized-model generators."""

import random

import pytest

from spacerisk.engine import direct_joint_likelihoods
from spacerisk.infra import Arc, InfrastructureGraph, Mission, MissionFlow, ModuleNode, bind_flow
from spacerisk.scenario import bundled_data_path, load_control_catalog, load_scenario
from spacerisk.threat import AttackTechnique, CapabilitySet, SusceptibilityMap


@pytest.fixture(scope="session")
def satcom():
    return load_scenario(bundled_data_path("satcom_case_study.json"))


@pytest.fixture(scope="session")
def control_catalog():
    return load_control_catalog(bundled_data_path("control_catalog.json"))


def make_graph(n_nodes, arc_pairs):
    nodes = [
        ModuleNode(id=f"N{i}", name=f"node {i}", segment="ground", component="test")
        for i in range(n_nodes)
    ]
    arcs = [Arc(source=f"N{i}", target=f"N{j}", arc_key=k) for i, j, k in arc_pairs]
    return InfrastructureGraph(tuple(nodes), tuple(arcs))


def random_model(rng: random.Random, max_nodes=50, cyclic=True, min_beta=0.05):
    """Random infrastructure + capability set + susceptibility map.

    Likelihood values are kept away from 0 so that fixed points reached at
    the default tolerance are within 1e-6 of their limits.
    """
    n = rng.randint(2, max_nodes)
    pairs = set()
    for _ in range(rng.randint(1, 3 * n)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        if not cyclic and i > j:
            i, j = j, i
        pairs.add((i, j, 0))
    graph = make_graph(n, sorted(pairs))

    n_tech = rng.randint(1, 4)
    techniques = tuple(
        AttackTechnique(id=f"AT{i}", name=f"technique {i}") for i in range(n_tech)
    )
    caps = CapabilitySet(
        techniques, {t.id: rng.uniform(min_beta, 1.0) for t in techniques}
    )

    node_beta = {}
    for node in graph.nodes:
        for tech in techniques:
            if rng.random() < 0.3:
                node_beta[(node.id, tech.id)] = rng.uniform(min_beta, 0.95)
    arc_beta = {}
    for arc in graph.arcs:
        for tech in techniques:
            if rng.random() < 0.2:
                arc_beta[(arc.source, arc.target, arc.arc_key, tech.id)] = rng.uniform(
                    min_beta, 0.95
                )
    sus = SusceptibilityMap(node_beta=node_beta, arc_beta=arc_beta)
    return graph, caps, sus


def random_mission(rng: random.Random, graph, mission_id=1):
    """One mission with 1-3 flows over random member subsets."""
    node_ids = list(graph.node_ids())
    arcs = list(graph.arcs)

    def random_flow(index, kind):
        members = rng.sample(node_ids, rng.randint(1, len(node_ids)))
        member_set = set(members)
        flow_arcs = tuple(
            a.ref for a in arcs
            if a.source in member_set and a.target in member_set and rng.random() < 0.5
        )
        flow = MissionFlow(
            mission_id=mission_id, flow_index=index, kind=kind,
            nodes=tuple(sorted(member_set)), arcs=flow_arcs,
        )
        return bind_flow(flow, graph)

    control = tuple(random_flow(i + 1, "control") for i in range(rng.randint(1, 2)))
    data = tuple(random_flow(i + 1, "data") for i in range(rng.randint(0, 1)))
    return Mission(id=mission_id, control_flows=control, data_flows=data)


def enumeration_joint(contributions):
    """Exhaustive oracle for the joint likelihood of independent attempts.

    Sums the probability of every success/failure outcome over the 2^n
    outcome space in which at least one attempt succeeds.
    """
    n = len(contributions)
    total = 0.0
    for mask in range(1, 2 ** n):
        p = 1.0
        for i, c in enumerate(contributions):
            p *= c if (mask >> i) & 1 else 1.0 - c
        total += p
    return total


def positive_sources(graph, caps, sus):
    """Nodes with positive joint direct likelihood (reachability seeds)."""
    node_l, _ = direct_joint_likelihoods(graph, caps, sus)
    return {n for n, l in node_l.items() if l > 0.0}


def reachable_from(graph, seeds):
    """Nodes reachable from the seeds via at least one arc.

    Seeds themselves are included only when some arc leads back to them;
    an unreferenced seed keeps its direct likelihood rather than
    saturating.
    """
    seen = set()
    frontier = list(seeds)
    while frontier:
        node = frontier.pop()
        for arc in graph.out_arcs(node):
            if arc.target not in seen:
                seen.add(arc.target)
                frontier.append(arc.target)
    return seen
