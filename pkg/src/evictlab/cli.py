"""Command-line entry point: scenario runs, ablation sweeps, trace utilities.

Usage sketch:
    bench run --scenario low-scan --policies eeva-greedy,lru --out results/
    bench ablation --p-scan-values 0,0.0006,0.0018 --desk-scale --out results/
    bench trace gen workload.trace --desk-scale --seed 7
    bench trace validate workload.trace
A ``--config`` file holds ``key=value`` lines (keys are the long flag names);
flags given on the command line override it.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .bench import (
    DESK_SCALE,
    SCENARIO_P_SCAN,
    SCENARIOS,
    BenchConfig,
    ablation_sweep,
    run_benchmark,
)
from .core import ContractViolation
from .rewards import CostModel
from .workload import (
    TraceFormatError,
    WorkloadConfig,
    generate_trace,
    read_trace,
    write_trace,
)


def _add_workload_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--desk-scale", action="store_true",
                        help="small preset: 50k queries, 10 tables, 100 pages max")
    parser.add_argument("--n", type=int, default=None, help="number of queries")
    parser.add_argument("--tables", type=int, default=None, help="number of tables")
    parser.add_argument("--p-max", type=int, default=None, help="max pages per table")
    parser.add_argument("--p-scan", type=float, default=None,
                        help="scan probability (overrides the scenario preset)")
    parser.add_argument("--zipf-q", type=float, default=0.1,
                        help="Zipf exponent for page picks within a table")
    parser.add_argument("--boost", type=float, default=10.0,
                        help="probability boost of scan-heavy tables")
    parser.add_argument("--seed", type=int, default=0, help="base seed")


def _add_cost_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c-idx", type=float, default=10.0)
    parser.add_argument("--c-load", type=float, default=1.0)
    parser.add_argument("--gamma", type=float, default=0.1, help="scan false-hit rate")
    parser.add_argument("--c-get", type=float, default=1.0)
    parser.add_argument("--c-scan", type=float, default=0.8)
    parser.add_argument("--table-update", choices=("table-size", "resident"),
                        default="table-size",
                        help="normalizer of the get-branch table reward update")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", choices=SCENARIOS, default="get-only")
    parser.add_argument("--policies", default="eeva-greedy,eeva-t,lru,lfu",
                        help="comma-separated policy names")
    parser.add_argument("--buffer-fraction", type=float, default=0.1,
                        help="buffer size as a fraction of total pages")
    parser.add_argument("--buffer-pages", type=int, default=None,
                        help="absolute buffer size (overrides the fraction)")
    parser.add_argument("--reps", type=int, default=5, help="seeds per scenario")
    parser.add_argument("--out", default=None, help="directory for CSV artifacts")
    parser.add_argument("--mu", type=float, default=None,
                        help="learning rate (default: sqrt((8/T) log T))")
    parser.add_argument("--seq-cost", type=float, default=None,
                        help="sweep policy-cost allowance (default 0.01*c_get)")
    parser.add_argument("--sample-every", type=int, default=1000,
                        help="curve sampling interval in page accesses")
    parser.add_argument("--trace", default=None, help="replay this trace file instead")
    parser.add_argument("--universe", type=int, default=None,
                        help="worst-case page universe (default 2x buffer)")
    parser.add_argument("--cycle-repeats", type=int, default=10,
                        help="worst-case cycle repetitions")
    _add_workload_flags(parser)
    _add_cost_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench", description="Buffer eviction benchmark harness"
    )
    parser.add_argument("--config", default=None,
                        help="key=value file with defaults for the current command")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario across policies and seeds")
    _add_run_flags(run)

    ablation = sub.add_parser("ablation", help="sweep p_scan values")
    ablation.add_argument("--p-scan-values", required=True,
                          help="comma-separated scan probabilities")
    _add_run_flags(ablation)

    trace = sub.add_parser("trace", help="trace file utilities")
    trace_sub = trace.add_subparsers(dest="trace_command", required=True)
    gen = trace_sub.add_parser("gen", help="generate a synthetic trace file")
    gen.add_argument("file", help="output path")
    gen.add_argument("--scenario", choices=SCENARIOS, default="custom")
    _add_workload_flags(gen)
    validate = trace_sub.add_parser("validate", help="parse and validate a trace file")
    validate.add_argument("file", help="trace path")
    return parser


def _config_overrides(path: str, given_argv: list[str]) -> list[str]:
    """Turn key=value lines into flags, skipping keys already given explicitly
    (command-line flags win over the config file)."""
    explicit = {arg.split("=", 1)[0] for arg in given_argv if arg.startswith("--")}
    injected: list[str] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if flag in explicit:
            continue
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                injected.append(flag)
        else:
            injected.extend([flag, value])
    return injected


def _workload_from_args(args: argparse.Namespace, seed: int) -> WorkloadConfig:
    desk = getattr(args, "desk_scale", False)
    return WorkloadConfig(
        num_tables=args.tables if args.tables is not None
        else (DESK_SCALE["num_tables"] if desk else 50),
        p_max=args.p_max if args.p_max is not None
        else (DESK_SCALE["p_max"] if desk else 1000),
        p_scan=args.p_scan if args.p_scan is not None else 2e-3,
        zipf_q=args.zipf_q,
        num_queries=args.n if args.n is not None
        else (DESK_SCALE["num_queries"] if desk else 1_000_000),
        scan_table_boost=args.boost,
        seed=seed,
    )


def _cost_from_args(args: argparse.Namespace) -> CostModel:
    return CostModel(
        c_idx=args.c_idx,
        c_load=args.c_load,
        gamma=args.gamma,
        c_get=args.c_get,
        c_scan=args.c_scan,
    )


def _bench_config(args: argparse.Namespace) -> BenchConfig:
    scenario = args.scenario
    if args.p_scan is not None and scenario in ("get-only", "low-scan", "medium-scan", "high-scan"):
        scenario = "custom"
    universe = args.universe
    if scenario == "worst-case" and universe is None and args.buffer_pages is not None:
        universe = 2 * args.buffer_pages
    return BenchConfig(
        scenario=scenario,
        policies=tuple(p.strip() for p in args.policies.split(",") if p.strip()),
        buffer_fraction=args.buffer_fraction,
        repetitions=args.reps,
        base_seed=args.seed,
        workload=_workload_from_args(args, args.seed),
        cost=_cost_from_args(args),
        mu=args.mu,
        seq_cost=args.seq_cost,
        sample_every=args.sample_every,
        table_update_divisor=args.table_update.replace("-", "_"),
        trace_path=args.trace,
        buffer_pages=args.buffer_pages,
        worst_universe=universe,
        worst_repeats=args.cycle_repeats,
        output_dir=args.out,
    )


def _print_report_summary(report) -> None:
    print(f"{'policy':<12} {'miss_rate':>10} {'avg_cost':>10} {'(means over seeds)'}")
    for policy, agg in report.aggregates().items():
        print(
            f"{policy:<12} {agg['miss_rate_mean']:>10.4f} "
            f"{agg['avg_time_cost_mean']:>10.4f}"
        )


def _cmd_run(args: argparse.Namespace) -> int:
    report = run_benchmark(_bench_config(args))
    _print_report_summary(report)
    if args.out:
        print(f"wrote summary.csv, curves.csv, timings.csv to {args.out}")
    return 0


def _cmd_ablation(args: argparse.Namespace) -> int:
    values = [float(v) for v in args.p_scan_values.split(",") if v.strip()]
    reports = ablation_sweep(_bench_config(args), values)
    for value, report in reports:
        print(f"p_scan={value:g}")
        _print_report_summary(report)
    if args.out:
        print(f"wrote ablation.csv to {args.out}")
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    if args.trace_command == "gen":
        workload = _workload_from_args(args, args.seed)
        if args.p_scan is None and args.scenario in SCENARIO_P_SCAN:
            workload = dataclasses.replace(workload, p_scan=SCENARIO_P_SCAN[args.scenario])
        trace = generate_trace(workload)
        write_trace(trace, args.file)
        print(
            f"wrote {len(trace.requests)} requests over "
            f"{trace.catalog.num_tables} tables to {args.file}"
        )
        return 0
    trace = read_trace(args.file)
    trace.validate()
    print(
        f"{args.file}: ok ({len(trace.requests)} requests, "
        f"{trace.catalog.num_tables} tables, {trace.catalog.total_pages} pages)"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if "--config" in argv:
            at = argv.index("--config")
            if at + 1 >= len(argv):
                raise ValueError("--config requires a file path")
            config_path = argv[at + 1]
            rest = argv[:at] + argv[at + 2 :]
            if not rest:
                raise ValueError("--config requires a command")
            argv = rest + _config_overrides(config_path, rest)
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "ablation":
            return _cmd_ablation(args)
        return _cmd_trace(args)
    except (ValueError, TraceFormatError, ContractViolation, OSError, RuntimeError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
