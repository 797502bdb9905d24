"""Command-line interface.

Every command prints a JSON envelope (``--format json``, the default) or
CSV (``--format csv``). Output is plain text with no colour, LF line
endings, ``.`` decimal separators, and no thousands separators, and with
a fixed ``--seed`` it is byte-identical across runs (except the
wall-clock figures of ``validate --timing``). Rates and lifts are given
as decimals, not percentages: ``--lift 0.05`` means 5%.
"""

import argparse
import json
import math
import sys

from .design import (
    critical_value,
    min_sample_size_multi,
    min_sample_size_single,
    power_curve,
    power_multi_cell,
    power_single_cell,
)
from .errors import LiftDesignError
from .model import MIN_CONTROL_CONVERSIONS, MultiCellDesign, SplitSpec, StudyDesign, audience_size, params_for_lift
from .simulate import SimulationConfig, empirical_quantile, simulate_diff, simulate_lift, write_samples_csv
from .validate import run_campaign, timing_comparison

SCHEMA_VERSION = "1"
TABLE_EFFECTS = (0.10, 0.05, 0.02, 0.01)
DEFAULT_CURVE_LIFTS = (0.01, 0.02, 0.05, 0.10)
DEFAULT_GRIDS = {
    "conversions": (500.0, 1000.0, 2000.0, 5000.0, 10000.0, 20000.0, 50000.0),
    "reach": tuple(round(0.1 * i, 1) for i in range(1, 11)),
    "split": tuple(round(0.1 * i, 1) for i in range(1, 10)),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liftdesign",
        description="Design single- and multi-cell ad lift studies: power, sample size, "
        "critical values, simulation, and derived-vs-simulated validation.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit, default 0)")
    common.add_argument("--samples", type=int, default=1_000_000,
                        help="Monte Carlo samples per simulation (default 1,000,000)")
    common.add_argument("--method", choices=["derived", "simulated"], default=None,
                        help="back end; default depends on the command")
    common.add_argument("--format", choices=["json", "csv"], default="json", dest="fmt",
                        help="output format (default json)")
    common.add_argument("--alpha", type=float, default=0.05,
                        help="one-tailed significance level (default 0.05)")
    common.add_argument("--reach", type=float, default=1.0,
                        help="fraction of the test group shown an advert (default 1.0)")
    common.add_argument("--split", type=float, default=1.0,
                        help="test/control group size ratio (default 1.0)")
    common.add_argument("--control-conversions", type=float, default=None,
                        help="expected conversions in the control group")
    common.add_argument("--lift", type=float, default=None,
                        help="expected (minimum detectable) lift as a decimal, e.g. 0.05")
    common.add_argument("--multi-cell", action="store_true",
                        help="two-cell difference-in-lift mode")
    common.add_argument("--lift-a", type=float, default=None,
                        help="baseline lift in cell A (multi-cell mode)")
    common.add_argument("--diff", type=float, default=None,
                        help="minimum detectable difference in lift between cells")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("power", parents=[common], help="test power of a design")
    p.set_defaults(handler=_cmd_power)

    p = sub.add_parser("critical-value", parents=[common],
                       help="null critical value of the test statistic")
    p.set_defaults(handler=_cmd_critical_value)

    p = sub.add_parser("sample-size", parents=[common],
                       help="minimum control conversions for a target power")
    p.add_argument("--power", type=float, default=0.8, dest="target_power",
                   help="target power (default 0.8)")
    p.add_argument("--conversion-rate", type=float, default=None,
                   help="conversions per audience member; adds audience size to the output")
    p.add_argument("--groups", type=int, default=None,
                   help="group count for the audience size (default 2 single, 4 multi)")
    p.set_defaults(handler=_cmd_sample_size)

    p = sub.add_parser("simulate", parents=[common],
                       help="draw lift (or difference) samples")
    p.add_argument("--out", default=None, help="write samples as CSV to this path")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("table", parents=[common],
                       help="minimum sample sizes for 1/2/5/10%% effects, single and multi cell")
    p.add_argument("--conversion-rate", type=float, default=0.05,
                   help="conversion rate for the audience columns (default 0.05)")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("curves", parents=[common], help="power curves along a sweep")
    p.add_argument("--sweep", choices=["conversions", "reach", "split"], required=True)
    p.add_argument("--lifts", default=None,
                   help="comma-separated effect sizes (lifts, or differences with --multi-cell)")
    p.add_argument("--grid", default=None, help="comma-separated sweep values")
    p.set_defaults(handler=_cmd_curves)

    p = sub.add_parser("validate", parents=[common],
                       help="K-S campaign comparing the derived and simulated distributions")
    p.add_argument("--runs", type=int, default=500, help="campaign runs (default 500)")
    p.add_argument("--run-samples", type=int, default=1_000,
                   help="simulated samples per campaign run (default 1,000)")
    p.add_argument("--timing", action="store_true",
                   help="also time the derived vs simulated quantile routes")
    p.set_defaults(handler=_cmd_validate)

    return parser


def _check_common(parser, args):
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.samples < 1_000:
        parser.error("--samples must be at least 1000")
    if not 0 < args.alpha < 0.5:
        parser.error("--alpha must be in (0, 0.5)")
    if not 0 < args.reach <= 1:
        parser.error("--reach must be in (0, 1]")
    if not args.split > 0:
        parser.error("--split must be positive")


def _require_conversions(parser, args) -> float:
    if args.control_conversions is None:
        parser.error("--control-conversions is required")
    if args.control_conversions < MIN_CONTROL_CONVERSIONS:
        parser.error(
            f"--control-conversions must be at least {MIN_CONTROL_CONVERSIONS:.0f} "
            "(below that, zero-denominator lift mass is not negligible)"
        )
    return args.control_conversions


def _check_fraction(parser, flag: str, value, required: bool, minimum_exclusive=False) -> float:
    if value is None:
        if required:
            parser.error(f"{flag} is required")
        return None
    if value < 0 or (minimum_exclusive and value == 0):
        parser.error(f"{flag} must be {'positive' if minimum_exclusive else 'non-negative'}")
    if value > 1:
        parser.error(
            f"{flag} is a decimal fraction: use 0.05 for 5%, got {value}"
        )
    return value


def _split(args) -> SplitSpec:
    return SplitSpec(scale=args.split, reach=args.reach)


def _config(args, samples=None) -> SimulationConfig:
    return SimulationConfig(num_samples=samples or args.samples, seed=args.seed)


def _envelope(args, command: str, inputs: dict, result, warnings=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "seed": args.seed,
        "warnings": list(warnings or []),
    }


def _print_json(envelope: dict):
    # allow_nan=False enforces the everything-finite contract
    print(json.dumps(envelope, indent=2, allow_nan=False))


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _print_csv(header, rows):
    out = [",".join(header)]
    out.extend(",".join(_csv_cell(v) for v in row) for row in rows)
    sys.stdout.write("\n".join(out) + "\n")


def _emit(args, envelope: dict, header, rows):
    if args.fmt == "json":
        _print_json(envelope)
    else:
        _print_csv(header, rows)


def _cmd_power(parser, args):
    if args.multi_cell:
        if args.method == "derived":
            parser.error("--method derived is not available with --multi-cell")
        cc = _require_conversions(parser, args)
        lift_a = _check_fraction(parser, "--lift-a", args.lift_a, required=True)
        diff = _check_fraction(parser, "--diff", args.diff, required=True, minimum_exclusive=True)
        design = MultiCellDesign(cc, lift_a, diff, split=_split(args), alpha=args.alpha)
        report = power_multi_cell(design, _config(args))
        method = "simulated"
        inputs = {
            "control_conversions": cc, "lift_a": lift_a, "diff": diff,
            "reach": args.reach, "split": args.split, "alpha": args.alpha,
            "method": method, "samples": args.samples, "multi_cell": True,
        }
    else:
        cc = _require_conversions(parser, args)
        lift = _check_fraction(parser, "--lift", args.lift, required=True, minimum_exclusive=True)
        method = args.method or "derived"
        design = StudyDesign(cc, lift, _split(args), args.alpha)
        report = power_single_cell(design, method, _config(args))
        inputs = {
            "control_conversions": cc, "lift": lift,
            "reach": args.reach, "split": args.split, "alpha": args.alpha,
            "method": method, "samples": args.samples, "multi_cell": False,
        }
    result = {"power": report.power, "critical_value": report.critical_value, "method": method}
    _emit(args, _envelope(args, "power", inputs, result),
          ["power", "critical_value", "method"],
          [[report.power, report.critical_value, method]])


def _cmd_critical_value(parser, args):
    cc = _require_conversions(parser, args)
    method = args.method or "derived"
    design = StudyDesign(cc, 0.0, _split(args), args.alpha)
    c = critical_value(design, method, _config(args))
    inputs = {
        "control_conversions": cc, "reach": args.reach, "split": args.split,
        "alpha": args.alpha, "method": method, "samples": args.samples,
    }
    result = {"critical_value": c, "method": method}
    _emit(args, _envelope(args, "critical-value", inputs, result),
          ["critical_value", "method"], [[c, method]])


def _sample_size_result(report, method: str) -> dict:
    return {
        "min_control_conversions": math.ceil(report.min_control_conversions),
        "achieved_power": report.achieved_power,
        "target_power": report.target_power,
        "iterations": report.iterations,
        "bracket_low": report.bracket[0],
        "bracket_high": report.bracket[1],
        "audience": None if report.audience is None else round(report.audience),
        "method": method,
    }


def _cmd_sample_size(parser, args):
    if not 0 < args.target_power < 1:
        parser.error("--power must be in (0, 1)")
    rate = args.conversion_rate
    if rate is not None and not 0 < rate < 1:
        parser.error("--conversion-rate must be in (0, 1)")
    if args.groups is not None and args.groups < 1:
        parser.error("--groups must be at least 1")
    if args.multi_cell:
        if args.method == "derived":
            parser.error("--method derived is not available with --multi-cell")
        lift_a = _check_fraction(parser, "--lift-a", args.lift_a, required=True)
        diff = _check_fraction(parser, "--diff", args.diff, required=True, minimum_exclusive=True)
        method = "simulated"
        report = min_sample_size_multi(
            lift_a, diff, args.target_power, _split(args), args.alpha,
            config=_config(args), conversion_rate=rate, num_groups=args.groups or 4,
        )
        inputs = {
            "lift_a": lift_a, "diff": diff, "target_power": args.target_power,
            "reach": args.reach, "split": args.split, "alpha": args.alpha,
            "method": method, "samples": args.samples, "multi_cell": True,
            "conversion_rate": rate, "groups": args.groups or 4,
        }
    else:
        lift = _check_fraction(parser, "--lift", args.lift, required=True, minimum_exclusive=True)
        method = args.method or "simulated"
        report = min_sample_size_single(
            lift, args.target_power, _split(args), args.alpha, method,
            config=_config(args), conversion_rate=rate, num_groups=args.groups or 2,
        )
        inputs = {
            "lift": lift, "target_power": args.target_power,
            "reach": args.reach, "split": args.split, "alpha": args.alpha,
            "method": method, "samples": args.samples, "multi_cell": False,
            "conversion_rate": rate, "groups": args.groups or 2,
        }
    result = _sample_size_result(report, method)
    _emit(args, _envelope(args, "sample-size", inputs, result),
          list(result.keys()), [list(result.values())])


def _cmd_simulate(parser, args):
    cc = _require_conversions(parser, args)
    if args.multi_cell:
        lift_a = _check_fraction(parser, "--lift-a", args.lift_a, required=True)
        diff = _check_fraction(parser, "--diff", args.diff, required=True, minimum_exclusive=True)
        cell_a = params_for_lift(cc, _split(args), lift_a)
        cell_b = params_for_lift(cc, _split(args), lift_a + diff)
        samples = simulate_diff(cell_a, cell_b, _config(args))
        inputs = {
            "control_conversions": cc, "lift_a": lift_a, "diff": diff,
            "reach": args.reach, "split": args.split, "samples": args.samples,
            "multi_cell": True,
        }
    else:
        lift = _check_fraction(parser, "--lift", args.lift if args.lift is not None else 0.0, required=False)
        params = params_for_lift(cc, _split(args), lift)
        samples = simulate_lift(params, _config(args))
        inputs = {
            "control_conversions": cc, "lift": lift,
            "reach": args.reach, "split": args.split, "samples": args.samples,
            "multi_cell": False,
        }
    if args.out:
        write_samples_csv(samples, args.out)
    if args.fmt == "csv" and not args.out:
        write_samples_csv(samples, sys.stdout)
        return
    values = samples.values
    result = {
        "statistic": samples.statistic,
        "n": int(values.size),
        "mean": float(values.mean()),
        "std": float(values.std()),
        "p05": empirical_quantile(samples, 0.05),
        "p50": empirical_quantile(samples, 0.50),
        "p95": empirical_quantile(samples, 0.95),
        "num_discarded": samples.num_discarded,
        "out": args.out,
    }
    _emit(args, _envelope(args, "simulate", inputs, result, samples.warnings()),
          list(result.keys()), [list(result.values())])


def _cmd_table(parser, args):
    rate = args.conversion_rate
    if not 0 < rate < 1:
        parser.error("--conversion-rate must be in (0, 1)")
    single_method = args.method or "simulated"
    split = _split(args)
    cfg = _config(args)
    rows = []
    for effect in TABLE_EFFECTS:
        single = min_sample_size_single(effect, 0.8, split, args.alpha, single_method, config=cfg)
        multi = min_sample_size_multi(0.05, effect, 0.8, split, args.alpha, config=cfg)
        single_cc = math.ceil(single.min_control_conversions)
        multi_cca = math.ceil(multi.min_control_conversions)
        rows.append({
            "effect": effect,
            "single_cc": single_cc,
            "single_n": round(audience_size(single_cc, rate, 2)),
            "multi_cca": multi_cca,
            "multi_n": round(audience_size(multi_cca, rate, 4)),
        })
    inputs = {
        "conversion_rate": rate, "reach": args.reach, "split": args.split,
        "alpha": args.alpha, "method": single_method, "samples": args.samples,
        "target_power": 0.8, "lift_a": 0.05,
    }
    _emit(args, _envelope(args, "table", inputs, rows),
          ["effect", "single_cc", "single_n", "multi_cca", "multi_n"],
          [[r["effect"], r["single_cc"], r["single_n"], r["multi_cca"], r["multi_n"]] for r in rows])


def _parse_float_list(parser, flag: str, text: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        parser.error(f"{flag} must be a comma-separated list of numbers")
    if not values:
        parser.error(f"{flag} must be non-empty")
    return values


def _cmd_curves(parser, args):
    if args.multi_cell and args.sweep != "conversions":
        parser.error(f"--sweep {args.sweep} is single-cell only; --multi-cell supports conversions")
    effects = list(DEFAULT_CURVE_LIFTS) if args.lifts is None \
        else _parse_float_list(parser, "--lifts", args.lifts)
    for e in effects:
        _check_fraction(parser, "--lifts", e, required=True, minimum_exclusive=True)
    grid = list(DEFAULT_GRIDS[args.sweep]) if args.grid is None \
        else _parse_float_list(parser, "--grid", args.grid)
    base_cc = args.control_conversions if args.control_conversions is not None else 20_000.0
    if base_cc < MIN_CONTROL_CONVERSIONS:
        parser.error(f"--control-conversions must be at least {MIN_CONTROL_CONVERSIONS:.0f}")
    sweep_name = {"conversions": "control_conversions", "reach": "reach", "split": "control_fraction"}[args.sweep]
    split = _split(args)
    cfg = _config(args)
    lift_a = _check_fraction(parser, "--lift-a", args.lift_a if args.lift_a is not None else 0.05, required=True)
    method = "simulated" if args.multi_cell else (args.method or "derived")

    rows = []
    for effect in effects:
        if args.multi_cell:
            design = MultiCellDesign(base_cc, lift_a, effect, split=split, alpha=args.alpha)
        else:
            design = StudyDesign(base_cc, effect, split, args.alpha)
        for x, power in power_curve(sweep_name, design, grid, method, cfg):
            rows.append({"effect": effect, "x": x, "power": power})
    inputs = {
        "sweep": args.sweep, "effects": effects, "grid": grid,
        "control_conversions": base_cc, "reach": args.reach, "split": args.split,
        "alpha": args.alpha, "method": method, "samples": args.samples,
        "multi_cell": args.multi_cell,
    }
    _emit(args, _envelope(args, "curves", inputs, rows),
          ["effect", "x", "power"],
          [[r["effect"], r["x"], r["power"]] for r in rows])


def _cmd_validate(parser, args):
    if args.runs < 20:
        parser.error("--runs must be at least 20")
    if args.run_samples < 1_000:
        parser.error("--run-samples must be at least 1000")
    report = run_campaign(args.runs, args.run_samples, seed=args.seed)
    timing = None
    if args.timing:
        cc = args.control_conversions if args.control_conversions is not None else 1_000.0
        params = params_for_lift(cc, _split(args), 0.0)
        timing = timing_comparison(params, args.samples, 1.0 - args.alpha, seed=args.seed)
    run_rows = [
        {
            "run": i,
            "test_rate": r.params.test_rate,
            "control_rate": r.params.control_rate,
            "reach": r.params.reach,
            "scale": r.params.scale,
            "ks_statistic": r.ks_statistic,
            "p_value": r.p_value,
            "rejected": r.rejected,
        }
        for i, r in enumerate(report.runs)
    ]
    result = {
        "num_runs": args.runs,
        "samples_per_run": args.run_samples,
        "num_rejections": report.num_rejections,
        "expected_rejections": report.expected_rejections,
        "rejection_rate": report.num_rejections / args.runs,
        "timing": None if timing is None else {
            "derived_seconds": timing.derived_seconds,
            "simulated_seconds": timing.simulated_seconds,
            "speedup": timing.speedup,
            "derived_quantile": timing.derived_quantile,
            "simulated_quantile": timing.simulated_quantile,
            "samples": args.samples,
        },
        "runs": run_rows,
    }
    inputs = {"runs": args.runs, "run_samples": args.run_samples, "timing": args.timing}
    summary = (
        f"{report.num_rejections} of {args.runs} runs rejected at 5% "
        f"(expected about {report.expected_rejections:.1f})"
    )
    print(summary, file=sys.stderr)
    _emit(args, _envelope(args, "validate", inputs, result),
          ["run", "test_rate", "control_rate", "reach", "scale", "ks_statistic", "p_value", "rejected"],
          [[r["run"], r["test_rate"], r["control_rate"], r["reach"], r["scale"],
            r["ks_statistic"], r["p_value"], r["rejected"]] for r in run_rows])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_common(parser, args)
    try:
        args.handler(parser, args)
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; not an error
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except LiftDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
