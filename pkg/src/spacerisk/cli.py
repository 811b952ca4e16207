"""Unified command-line surface.

Subcommands: analyze, harden, nrs assess, killchain extrapolate, metrics.
Exit codes: 0 success, 1 validation error, 2 non-convergence, 3 unmitigable
hardening. Input files are resolved against the literal path, then
$SPACERISK_SCENARIO_DIR, then the bundled data directory. --seed is
accepted for interface stability but unused: the engine is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .engine import CascadeConfig, analyze
from .errors import ValidationError
from .hardening import harden
from .killchain import count_chains, extrapolate, register_sense_rules
from .metrics import set_likelihood, sophistication
from .nrs import DEFAULT_MATRIX, assess
from .scenario import (
    load_annotation,
    load_chain_sets,
    load_control_catalog,
    load_matrix,
    load_nrs_catalog,
    load_nrs_inputs,
    load_rules,
    load_scenario,
    load_score_table,
    resolve_input,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NOT_CONVERGED = 2
EXIT_UNMITIGABLE = 3


def _common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="reserved; unused")
    parser.add_argument("--epsilon", type=float, default=1e-10,
                        help="convergence tolerance (default 1e-10)")
    parser.add_argument("--max-iters", type=int, default=1_000_000,
                        help="cascade iteration cap")
    parser.add_argument("--out", type=Path, default=None,
                        help="write the report here instead of stdout")


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _config(args, case: int) -> CascadeConfig:
    return CascadeConfig(case=case, epsilon=args.epsilon, max_iterations=args.max_iters)


def _cmd_analyze(args) -> int:
    scenario = load_scenario(resolve_input(args.scenario))
    config = _config(args, args.case)
    state = analyze(scenario.graph, scenario.missions, scenario.caps, scenario.sus, config)
    text = report.analysis_csv(state) if args.format == "csv" else report.analysis_text(state, config)
    _emit(text, args.out)
    return EXIT_OK if state.converged else EXIT_NOT_CONVERGED


def _cmd_harden(args) -> int:
    scenario = load_scenario(resolve_input(args.scenario))
    catalog = load_control_catalog(resolve_input(args.controls))
    config = _config(args, args.case)
    plan = harden(
        scenario.graph, scenario.missions, scenario.caps, scenario.sus,
        args.tau, catalog, config,
    )
    text = report.plan_csv(plan) if args.format == "csv" else report.plan_text(plan, config)
    _emit(text, args.out)
    return EXIT_UNMITIGABLE if plan.unmitigable else EXIT_OK


def _cmd_nrs_assess(args) -> int:
    applicable, base_scores, default_tau = load_nrs_inputs(resolve_input(args.scenario))
    catalog = load_nrs_catalog(resolve_input(args.catalog))
    matrix = load_matrix(resolve_input(args.matrix)) if args.matrix else DEFAULT_MATRIX
    tau = args.tau or default_tau
    result = assess(applicable, base_scores, tau, catalog, matrix)
    text = report.nrs_csv(result) if args.format == "csv" else report.nrs_text(result, tau)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_killchain_extrapolate(args) -> int:
    incident_id, annotated = load_annotation(resolve_input(args.incident))
    sense_filter = None
    if args.rules:
        sense_filter = register_sense_rules(load_rules(resolve_input(args.rules)))
    if args.count_only:
        _emit(f"{count_chains(annotated, sense_filter)}\n", args.out)
        return EXIT_OK
    lines = []
    for chain in extrapolate(annotated, sense_filter, cap=args.cap):
        lines.append(json.dumps({
            "incident_id": incident_id,
            "phases": list(chain.phases),
            "activities": list(chain.activities),
            "tactics": list(chain.tactics),
            "techniques": list(chain.techniques),
        }))
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    table = load_score_table(resolve_input(args.scores))
    chain_sets = load_chain_sets(resolve_input(args.chains))
    lines = [
        "incident_id,chains,set_likelihood,"
        "tactic_high,technique_high,tactic_low,technique_low"
    ]
    for incident_id, chains in chain_sets:
        soph = sophistication(chains, table)
        likelihood = set_likelihood(chains, table)
        lines.append(
            f"{incident_id},{len(chains)},{likelihood!r},"
            f"{soph.tactic_high!r},{soph.technique_high!r},"
            f"{soph.tactic_low!r},{soph.technique_low!r}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spacerisk",
        description="Mission-centric cyber risk analysis for space infrastructures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute compromise and disruption likelihoods")
    p.add_argument("--scenario", required=True)
    p.add_argument("--case", type=int, choices=(0, 1), default=0)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    _common_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("harden", help="select techniques to mitigate and controls")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--case", type=int, choices=(0, 1), default=0)
    p.add_argument("--controls", default="control_catalog.json")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    _common_flags(p)
    p.set_defaults(func=_cmd_harden)

    nrs = sub.add_parser("nrs", help="notional risk score workflow")
    nrs_sub = nrs.add_subparsers(dest="nrs_command", required=True)
    p = nrs_sub.add_parser("assess", help="matrix scoring and control selection")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tau", choices=("low", "medium", "high"), default=None)
    p.add_argument("--catalog", default="nrs_countermeasures.json")
    p.add_argument("--matrix", default=None, help="optional 5x5 matrix override file")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    _common_flags(p)
    p.set_defaults(func=_cmd_nrs_assess)

    kc = sub.add_parser("killchain", help="kill-chain extrapolation")
    kc_sub = kc.add_subparsers(dest="killchain_command", required=True)
    p = kc_sub.add_parser("extrapolate", help="enumerate candidate chains")
    p.add_argument("--incident", required=True)
    p.add_argument("--rules", default=None)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cap", type=int, default=1_000_000)
    _common_flags(p)
    p.set_defaults(func=_cmd_killchain_extrapolate)

    p = sub.add_parser("metrics", help="chain sophistication and likelihood table")
    p.add_argument("--chains", required=True)
    p.add_argument("--scores", required=True)
    _common_flags(p)
    p.set_defaults(func=_cmd_metrics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
