"""Command-line entry point: ``pof <command> ...``.

Exit codes: 0 success, 1 tightness verification failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import allocation, bounds, experiments, oracle, worstcase
from .domain import BudgetUtilitySet, Criterion, UtilityLimits, instance_from_dict, limits_from_dict


class UsageError(Exception):
    pass


def _round(obj: Any) -> Any:
    """Round floats to 12 significant digits for display."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path} must contain a JSON object")
    return data


def _limits(args: argparse.Namespace) -> UtilityLimits:
    if args.equal_n is not None:
        return UtilityLimits.equal(args.equal_n)
    return limits_from_dict(_read_json(args.limits))


def _instance(path: str) -> BudgetUtilitySet:
    return instance_from_dict(_read_json(path))


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POF_SEED")
    if env is None:
        raise UsageError("a seed is required: pass --seed or set POF_SEED")
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"POF_SEED must be an integer, got {env!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj: Any, out: str | None, rounded: bool = True) -> None:
    _emit(json.dumps(_round(obj) if rounded else obj, indent=2) + "\n", out)


def _emit_rows(rows, args: argparse.Namespace) -> None:
    _emit(experiments.to_csv(rows), args.out)
    if getattr(args, "svg", None):
        x, y = args.svg_columns
        Path(args.svg).write_text(experiments.to_svg(rows, x, y), encoding="utf-8")


def cmd_bound(args: argparse.Namespace) -> int:
    limits = _limits(args)
    if args.equal_n is not None and Criterion.parse(args.criterion) is Criterion.PF:
        report = bounds.pf_bound_equal(args.equal_n)
    else:
        report = bounds.bound_for(limits, args.criterion)
    _emit_json(report.to_dict(), args.out)
    return 0


def cmd_allocate(args: argparse.Namespace) -> int:
    inst = _instance(args.instance)
    if args.method == "utilitarian":
        alloc, _ = allocation.solve_utilitarian(inst)
    elif args.method == "pf":
        alloc = allocation.solve_pf(inst, args.tol)
    else:
        alloc = allocation.solve_mmf(inst)
    _emit_json(alloc.to_dict(), args.out)
    return 0


def cmd_pof(args: argparse.Namespace) -> int:
    result = allocation.compute_pof(_instance(args.instance), args.criterion, args.tol)
    _emit_json(result.to_dict(), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = worstcase.verify_tightness(_limits(args), args.criterion, args.tol)
    _emit_json(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_worstcase(args: argparse.Namespace) -> int:
    if args.equal_n is not None and Criterion.parse(args.criterion) is Criterion.PF:
        inst = worstcase.construct_pf_worstcase_equal(args.equal_n)
    else:
        inst = worstcase.construct_worstcase(_limits(args), args.criterion)
    # instances keep full precision so the output reloads to the same set
    _emit_json(inst.to_dict(), args.out, rounded=False)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    _emit_rows(experiments.sweep_bounds_vs_n(args.criterion, args.n_min, args.n_max), args)
    return 0


def cmd_delta(args: argparse.Namespace) -> int:
    _emit_rows(experiments.sweep_delta(args.n_min, args.n_max), args)
    return 0


def cmd_variance(args: argparse.Namespace) -> int:
    rows = experiments.variance_sensitivity(
        args.criterion, args.n, args.sigma_step, args.steps, args.draws, _seed(args)
    )
    _emit_rows(rows, args)
    return 0


def cmd_n2sweep(args: argparse.Namespace) -> int:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    l2 = np.linspace(1.0, args.l2_min, args.points)
    _emit_rows(experiments.n2_limit_sweep(l2), args)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    limits = _limits(args)
    criterion = Criterion.parse(args.criterion)
    if criterion is Criterion.PF:
        est = oracle.grid_min_pf_bound(limits, args.coarse_steps, args.refine_rounds)
    else:
        est = oracle.grid_min_mmf_bound(limits, args.coarse_steps, args.refine_rounds)
    formula = bounds.bound_for(limits, criterion).bound
    _emit_json({"criterion": criterion.value, "oracle_bound": est, "formula_bound": formula,
                "difference": formula - est}, args.out)
    return 0


def _add_limits_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--limits", help='JSON file {"L": [...]} (an instance file also works)')
    src.add_argument("--equal-n", type=int, help="use L = (1, ..., 1) with N players")


def _add_criterion(p: argparse.ArgumentParser) -> None:
    p.add_argument("--criterion", required=True, type=str.lower, choices=["pf", "mmf"])


def _add_out(p: argparse.ArgumentParser, csv: bool = False) -> None:
    p.add_argument("--out", help="write to this file instead of stdout")
    if csv:
        p.add_argument("--svg", help="also write an SVG line chart to this file")
        p.add_argument("--svg-columns", nargs=2, metavar=("X", "Y"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pof", description="Price-of-fairness bounds and tight instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="tight POF upper bound for given limits")
    _add_criterion(p)
    _add_limits_source(p)
    _add_out(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("allocate", help="solve one allocation problem on an instance")
    p.add_argument("--method", required=True, choices=["utilitarian", "pf", "mmf"])
    p.add_argument("instance", help='JSON file {"L": [...], "c": [...]}')
    p.add_argument("--tol", type=float, default=allocation.DEFAULT_TOL)
    _add_out(p)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("pof", help="price of fairness of an instance")
    _add_criterion(p)
    p.add_argument("instance")
    p.add_argument("--tol", type=float, default=allocation.DEFAULT_TOL)
    _add_out(p)
    p.set_defaults(func=cmd_pof)

    p = sub.add_parser("verify", help="check that the worst-case instance attains the bound")
    _add_criterion(p)
    _add_limits_source(p)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("worstcase", help="emit the worst-case instance as JSON")
    _add_criterion(p)
    _add_limits_source(p)
    _add_out(p)
    p.set_defaults(func=cmd_worstcase)

    p = sub.add_parser("sweep", help="equal-utilities bounds as a function of n (CSV)")
    _add_criterion(p)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, required=True)
    _add_out(p, csv=True)
    p.set_defaults(func=cmd_sweep, svg_default=("n", "our_bound"))

    p = sub.add_parser("delta", help="relative improvement over the earlier PF bound (CSV)")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, required=True)
    _add_out(p, csv=True)
    p.set_defaults(func=cmd_delta, svg_default=("n", "delta"))

    p = sub.add_parser("variance", help="bound vs sample variance of random limits (CSV)")
    _add_criterion(p)
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--sigma-step", type=float, default=0.01)
    p.add_argument("--draws", type=int, default=1, help="limit vectors per sigma")
    p.add_argument("--seed", type=int, default=None, help="falls back to $POF_SEED")
    _add_out(p, csv=True)
    p.set_defaults(func=cmd_variance, svg_default=("sample_variance", "our_bound"))

    p = sub.add_parser("n2sweep", help="two players, L = (1, L2) with L2 from 1 down to --l2-min (CSV)")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--l2-min", type=float, default=1e-6)
    _add_out(p, csv=True)
    p.set_defaults(func=cmd_n2sweep, svg_default=("sample_variance", "our_bound"))

    p = sub.add_parser("oracle", help="grid-search estimate of the bound (n <= 3)")
    _add_criterion(p)
    _add_limits_source(p)
    p.add_argument("--coarse-steps", type=int, default=50)
    p.add_argument("--refine-rounds", type=int, default=3)
    _add_out(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "svg", None) and not args.svg_columns:
        args.svg_columns = args.svg_default
    try:
        return args.func(args)
    # every validation error in the package derives from ValueError
    except (UsageError, ValueError) as exc:
        print(f"pof {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
