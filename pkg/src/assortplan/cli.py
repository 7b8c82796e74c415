"""Command line interface.

Results go to stdout as JSON, logs to stderr.  Exit codes: 0 success,
1 infeasible instance or failed feasibility check, 2 unparsable input
or configuration, 3 oracle budget or convergence failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .bench import run_bench
from .constrained import solve_constrained
from .errors import (
    AssortPlanError,
    BudgetExceeded,
    ConfigError,
    ConvergenceFailure,
    GroundSetTooLarge,
    InfeasibleSponsoredAssignment,
    InvalidPlacement,
    NoPerfectMatching,
    ParseError,
    ValidationError,
)
from .exact import DEFAULT_TOLERANCE, solve_exact
from .figures import write_report_files
from .generate import load_config
from .model import Placement, check_feasible
from .oracle import OracleBudget, oracle_p0, oracle_p2
from .serialize import parse_instance, parse_placement, placement_to_dict

log = logging.getLogger("assortplan")

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_BAD_INPUT = 2
EXIT_EXHAUSTED = 3

_ERROR_CODES = [
    ((InfeasibleSponsoredAssignment, NoPerfectMatching, InvalidPlacement),
     EXIT_INFEASIBLE),
    ((ParseError, ValidationError, ConfigError), EXIT_BAD_INPUT),
    ((BudgetExceeded, ConvergenceFailure, GroundSetTooLarge), EXIT_EXHAUSTED),
]


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _error_exit(exc: AssortPlanError) -> int:
    for types, code in _ERROR_CODES:
        if isinstance(exc, types):
            break
    else:
        code = EXIT_EXHAUSTED
    log.error("%s: %s", type(exc).__name__, exc)
    _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
    return code


def _cmd_solve(args) -> int:
    inst = parse_instance(args.instance)
    if args.exact:
        placement, revenue, trace = solve_exact(inst, args.tolerance)
        log.info("exact solve converged in %d iterations", len(trace.iterations))
        _emit({
            "mode": "exact",
            "revenue": revenue,
            "placement": placement_to_dict(placement),
            "iterations": len(trace.iterations),
            "converged": trace.converged,
        })
    else:
        report = solve_constrained(inst, args.tolerance,
                                   use_local_search=args.local_search)
        log.info("constrained solve: best candidate %s", report.best.role)
        _emit({
            "mode": "constrained",
            "revenue": report.best.revenue,
            "placement": placement_to_dict(report.best.placement),
            "best_role": report.best.role,
            "beta_structural": report.beta_structural,
            "bound_factor": report.bound_factor,
            "candidates": [
                {"role": c.role, "revenue": c.revenue,
                 "placement": placement_to_dict(c.placement)}
                for c in report.candidates],
        })
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = parse_instance(args.instance)
    budget = OracleBudget(max_products=args.max_products,
                          max_positions=args.max_positions)
    if args.problem == "p0":
        placement, revenue = oracle_p0(inst, budget)
        payload = {"mode": "oracle", "problem": "p0", "revenue": revenue,
                   "placement": placement_to_dict(placement)}
    else:
        placement, revenue, part_s, part_o = oracle_p2(inst, budget)
        payload = {"mode": "oracle", "problem": "p2", "revenue": revenue,
                   "placement": placement_to_dict(placement),
                   "part_sponsored": part_s, "part_organic": part_o}
    _emit(payload)
    return EXIT_OK


def _cmd_check(args) -> int:
    inst = parse_instance(args.instance)
    pairs = parse_placement(args.placement)
    try:
        placement = Placement.from_pairs(pairs)
    except InvalidPlacement as exc:
        _emit({"mode": "check", "feasible": False, "violations": [str(exc)]})
        return EXIT_INFEASIBLE
    verdict = check_feasible(inst, placement)
    _emit({"mode": "check", "feasible": verdict.ok,
           "violations": list(verdict.violations)})
    return EXIT_OK if verdict.ok else EXIT_INFEASIBLE


def _cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    report = run_bench(cfg, args.trials, args.tolerance)
    _emit(report)
    if args.out_dir:
        paths = write_report_files(report, args.out_dir)
        with open(f"{args.out_dir}/report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        for p in paths:
            log.info("wrote %s", p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assortplan",
        description="Assortment planning with sponsored slots under "
                    "position-dependent MNL choice")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    mode = p_solve.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true",
                      help="exact solve, ignoring the organic constraint")
    mode.add_argument("--constrained", action="store_true",
                      help="two-candidate approximation honoring the constraint")
    p_solve.add_argument("instance", help="instance JSON file")
    p_solve.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_solve.add_argument("--local-search", action="store_true",
                         help="refine the surrogate solution by swap search")

    p_oracle = sub.add_parser("oracle", help="exhaustive reference solve")
    p_oracle.add_argument("instance", help="instance JSON file")
    p_oracle.add_argument("--problem", choices=["p0", "p2"], default="p0")
    p_oracle.add_argument("--max-products", type=int, default=7)
    p_oracle.add_argument("--max-positions", type=int, default=6)

    p_check = sub.add_parser("check", help="verify a placement file")
    p_check.add_argument("instance", help="instance JSON file")
    p_check.add_argument("placement", help="placement JSON file")

    p_bench = sub.add_parser("bench", help="randomized benchmark")
    p_bench.add_argument("--config", required=True, help="generator config JSON file")
    p_bench.add_argument("--trials", type=int, required=True)
    p_bench.add_argument("--seed", type=int, default=None,
                         help="override the config seed")
    p_bench.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_bench.add_argument("--out-dir", default=None,
                         help="also write the report, a CSV trial table and "
                              "figures into this directory")
    return parser


_HANDLERS = {
    "solve": _cmd_solve,
    "oracle": _cmd_oracle,
    "check": _cmd_check,
    "bench": _cmd_bench,
}


def run_cli(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except AssortPlanError as exc:
        return _error_exit(exc)


def main() -> None:
    sys.exit(run_cli())
