"""Acceptance gate: one test and one printed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Tolerances are pinned here; nothing is deferred to later calibration.
Iteration counts are deliberately not asserted (schedule-dependent).
"""

import random
import time

from spacerisk.engine import (
    CascadeConfig,
    RiskState,
    analyze,
    cascade_fixed_point,
    direct_joint_likelihoods,
    joint_arc_likelihood,
    joint_node_likelihood,
)
from spacerisk.hardening import harden, residual_risk
from spacerisk.killchain import USCKC, candidate_counts, extrapolate
from spacerisk.metrics import ScoreTable, set_likelihood, usckc_likelihood
from spacerisk.nrs import assess, categorize, matrix_lookup
from spacerisk.scenario import (
    bundled_data_path,
    load_annotation,
    load_nrs_catalog,
    load_nrs_inputs,
)

from conftest import (
    enumeration_joint,
    positive_sources,
    random_mission,
    random_model,
    reachable_from,
)
from test_hardening import CASE0_MITIGATED, CASE1_MITIGATED


def _report(criterion, ok, detail=""):
    print(f"\n[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def test_criterion_1_case_study_analysis(satcom):
    start = time.perf_counter()
    state0 = analyze(satcom.graph, satcom.missions, satcom.caps, satcom.sus,
                     CascadeConfig(case=0, epsilon=1e-10))
    time0 = time.perf_counter() - start
    start = time.perf_counter()
    state1 = analyze(satcom.graph, satcom.missions, satcom.caps, satcom.sus,
                     CascadeConfig(case=1, epsilon=1e-10))
    time1 = time.perf_counter() - start

    ok = (
        state0.converged
        and all(l > 0.1 for l in state0.node_l.values())
        and all(l >= 1 - 1e-6 for l in state0.arc_l.values())
        and state1.converged
        and len(state1.node_l) == 10
        and len(state1.arc_l) == 14
        and all(l > 0.1 for l in state1.node_l.values())
        and all(l >= 1 - 1e-6 for l in state1.arc_l.values())
        and time0 < 1.0
        and time1 < 1.0
    )
    _report(
        1, ok,
        f"case0 {time0 * 1e3:.0f} ms, case1 {time1 * 1e3:.0f} ms, "
        f"pruned to {len(state1.node_l)} nodes / {len(state1.arc_l)} arcs",
    )


def test_criterion_2_hardening_sets_and_residuals(satcom, control_catalog):
    plan0 = harden(satcom.graph, satcom.missions, satcom.caps, satcom.sus,
                   0.1, control_catalog, CascadeConfig(case=0))
    plan1 = harden(satcom.graph, satcom.missions, satcom.caps, satcom.sus,
                   0.1, control_catalog, CascadeConfig(case=1))
    ok = (
        set(plan0.mitigated) == CASE0_MITIGATED
        and plan0.unmitigated(satcom.caps) == ("T1566.001", "T1592")
        and abs(plan0.residual[1] - 0.04) <= 0.03
        and set(plan1.mitigated) == CASE1_MITIGATED
        and len(plan1.unmitigated(satcom.caps)) == 5
        and abs(plan1.residual[1] - 0.08) <= 0.03
        and set(plan1.mitigated) < set(plan0.mitigated)
    )
    _report(
        2, ok,
        f"case0: {len(plan0.mitigated)} mitigated, residual {plan0.residual[1]:.4f}; "
        f"case1: {len(plan1.mitigated)} mitigated, residual {plan1.residual[1]:.4f}",
    )


def test_criterion_3_control_selection(satcom, control_catalog):
    plan = harden(satcom.graph, satcom.missions, satcom.caps, satcom.sus,
                  0.1, control_catalog, CascadeConfig(case=0))
    selected = set(plan.selected_controls.values())
    ok = selected == {"SC-13", "SI-16", "CM-7(2)", "AC-6(10)"}
    _report(3, ok, f"selected: {sorted(selected)}")


def test_criterion_4_nrs_matrix_and_fixtures():
    rows = {
        5: (7, 16, 20, 23, 25),
        4: (6, 13, 18, 22, 24),
        3: (4, 10, 15, 19, 21),
        2: (2, 8, 11, 14, 17),
        1: (1, 3, 5, 9, 12),
    }
    grid_ok = all(
        matrix_lookup(impact, likelihood) == rows[likelihood][impact - 1]
        for likelihood in rows
        for impact in range(1, 6)
    )

    catalog = load_nrs_catalog(bundled_data_path("nrs_countermeasures.json"))
    terra_applicable, terra_base, _ = load_nrs_inputs(bundled_data_path("nrs_terra.json"))
    terra = assess(terra_applicable, terra_base, "medium", catalog)
    terra_scores = {a.technique: a.score for a in terra.assessments}
    terra_ok = (
        set(terra.intolerable()) == {"EX-0013", "IA-0007", "EX-0012.10", "T1133"}
        and terra_scores["T1586"] == 15
        and next(a for a in terra.assessments if a.technique == "T1586").tolerable
    )

    turla_applicable, turla_base, _ = load_nrs_inputs(bundled_data_path("nrs_turla.json"))
    turla = assess(turla_applicable, turla_base, "medium", catalog)
    turla_scores = {a.technique: a.score for a in turla.assessments}
    turla_ok = (
        turla_scores == {"REC-0005.02": 22, "EXF-0010": 24, "T1590.005": 6}
        and set(turla.intolerable()) == {"REC-0005.02", "EXF-0010"}
    )

    ok = grid_ok and terra_ok and turla_ok
    _report(4, ok, f"terra scores {sorted(terra_scores.values())}, "
                   f"turla scores {sorted(turla_scores.values())}")


def test_criterion_5_rosat_extrapolation():
    _, annotated = load_annotation(bundled_data_path("rosat_annotation.json"))
    chains = list(extrapolate(annotated))
    observed = len(annotated)
    counts = candidate_counts(annotated)
    ok = (
        observed == 9
        and counts == (2, 3, 4, 6, 3)
        and len(chains) == 432
        and all(len(c) == 14 for c in chains)
    )
    _report(5, ok, f"{len(chains)} chains of lengths {sorted({len(c) for c in chains})} "
                   f"from counts {counts}")


def test_criterion_6_chain_likelihood():
    techniques = ("T1078", "T1210", "T1070", "T1496")
    table = ScoreTable(
        technique_likelihoods=dict(zip(techniques, (0.22, 0.09, 0.05, 0.25)))
    )
    chain = USCKC(
        phases=("in", "through", "through", "out"),
        activities=("milestone", "milestone", "enabling", "objective"),
        tactics=("Initial Access", "Lateral Movement", "Defense Evasion", "Impact"),
        techniques=techniques,
    )
    ok = usckc_likelihood(chain, table) == 0.05 and set_likelihood([chain], table) == 0.05
    _report(6, ok, f"L(chain) = {usckc_likelihood(chain, table)}")


def test_criterion_7a_oracle_equivalence():
    rng = random.Random(777)
    worst = 0.0
    for _ in range(1000):
        contributions = [rng.random() for _ in range(rng.randint(0, 12))]
        expected = enumeration_joint(contributions)
        worst = max(
            worst,
            abs(joint_node_likelihood(contributions) - expected),
            abs(joint_arc_likelihood(contributions) - expected),
        )
    _report("7a", worst <= 1e-12, f"worst deviation {worst:.2e} over 1000 instances")


def test_criterion_7b_monotone_cascade():
    rng = random.Random(778)
    ok = True
    for trial in range(30):
        graph, caps, sus = random_model(rng, max_nodes=50, cyclic=trial % 2 == 0)
        node_l, arc_l = direct_joint_likelihoods(graph, caps, sus)
        previous = {"nodes": dict(node_l), "arcs": dict(arc_l)}

        def check(iteration, nodes, arcs):
            nonlocal ok
            for key, value in nodes.items():
                ok = ok and 0.0 <= value <= 1.0 and value >= previous["nodes"][key] - 1e-15
            for key, value in arcs.items():
                ok = ok and 0.0 <= value <= 1.0 and value >= previous["arcs"][key] - 1e-15
            previous["nodes"] = nodes
            previous["arcs"] = arcs

        result = cascade_fixed_point(
            RiskState(node_l=node_l, arc_l=arc_l), graph, CascadeConfig(), on_iteration=check
        )
        ok = ok and result.converged
    _report("7b", ok, "elementwise non-decreasing, bounded, convergent on 30 graphs")


def test_criterion_7c_reachability():
    rng = random.Random(779)
    ok = True
    for _ in range(20):
        graph, caps, sus = random_model(rng, max_nodes=25)
        node_l, _ = direct_joint_likelihoods(graph, caps, sus)
        state = analyze(graph, [], caps, sus, CascadeConfig(case=0))
        saturated = reachable_from(graph, positive_sources(graph, caps, sus))
        for node_id in graph.node_ids():
            if node_id in saturated:
                ok = ok and state.node_l[node_id] >= 1 - 1e-6
            if not graph.in_arcs(node_id):
                ok = ok and state.node_l[node_id] == node_l[node_id]
    _report("7c", ok, "reachable nodes saturate; in-degree-0 nodes keep direct values")


def test_criterion_7d_hardening_anti_monotonicity(satcom, control_catalog):
    config = CascadeConfig(case=0)
    full = analyze(satcom.graph, satcom.missions, satcom.caps, satcom.sus, config)
    ok = True
    for tech_id in satcom.caps.ids():
        reduced = analyze(satcom.graph, satcom.missions,
                          satcom.caps.without({tech_id}), satcom.sus, config)
        for node_id, value in reduced.node_l.items():
            ok = ok and value <= full.node_l[node_id] + 1e-6
        for mission_id, value in reduced.mission_l.items():
            ok = ok and value <= full.mission_l[mission_id] + 1e-6

    rng = random.Random(780)
    from spacerisk.hardening import ControlCatalog, SecurityControl

    for _ in range(10):
        graph, caps, sus = random_model(rng, max_nodes=10)
        mission = random_mission(rng, graph)
        catalog = ControlCatalog(
            (SecurityControl(id="C0", name="catch-all", techniques=caps.ids()),)
        )
        plan = harden(graph, [mission], caps, sus, 0.2, catalog, CascadeConfig(case=0))
        if plan.necessary and not plan.unmitigable:
            residual = residual_risk(plan, graph, [mission], caps, sus)
            ok = ok and all(l <= 0.2 + 1e-9 for l in residual.values())
    _report("7d", ok, "technique removal never raises L; successful plans re-verify")


def test_criterion_7e_matrix_properties():
    monotone = all(
        matrix_lookup(i, l) <= matrix_lookup(i + 1, l)
        for l in range(1, 6) for i in range(1, 5)
    ) and all(
        matrix_lookup(i, l) <= matrix_lookup(i, l + 1)
        for i in range(1, 6) for l in range(1, 5)
    )
    bands = [categorize(matrix_lookup(i, l)) for i in range(1, 6) for l in range(1, 6)]
    partition = len(bands) == 25 and set(bands) == {"low", "medium", "high"}
    _report("7e", monotone and partition, "matrix monotone; bands partition all 25 cells")
