"""Scenario orchestration: multi-seed policy comparisons and CSV emission.

A benchmark run generates one trace per seed, replays it once per policy with
fresh per-policy state, and collects miss rates, averaged time costs, and
cumulative curves. Every run cross-checks the live averaged time cost against
an independent second pass over the outcome log.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .buffer import BufferState, process_request
from .core import TableCatalog
from .metrics import RunMetrics, encode_outcome, recompute_time_cost
from .policies import (
    POLICY_NAMES,
    EevaConfig,
    EevaSeq,
    EvictionPolicy,
    make_policy,
    policy_rng_seed,
)
from .rewards import CostModel, RewardLedger
from .workload import Trace, WorkloadConfig, generate_trace, read_trace, worst_case_trace

# Scenario presets: probability that a query is a full-table scan.
SCENARIO_P_SCAN = {
    "get-only": 0.0,
    "low-scan": 0.6e-3,
    "medium-scan": 1.3e-3,
    "high-scan": 1.8e-3,
}
SCENARIOS = (*SCENARIO_P_SCAN, "worst-case", "custom")

# CI-friendly workload sizes; the full-scale defaults live in WorkloadConfig.
DESK_SCALE = {"num_queries": 50_000, "num_tables": 10, "p_max": 100}


@dataclass(frozen=True)
class BenchConfig:
    scenario: str = "get-only"
    policies: tuple[str, ...] = ("eeva-greedy", "eeva-t", "lru", "lfu")
    buffer_fraction: float = 0.1
    repetitions: int = 5
    base_seed: int = 0
    seeds: tuple[int, ...] | None = None
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    cost: CostModel = field(default_factory=CostModel)
    mu: float | None = None
    seq_cost: float | None = None
    sample_every: int = 1000
    table_update_divisor: str = "table_size"
    trace_path: str | None = None
    buffer_pages: int | None = None
    worst_universe: int | None = None
    worst_repeats: int = 10
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; known: {', '.join(SCENARIOS)}"
            )
        for name in self.policies:
            if name not in POLICY_NAMES:
                raise ValueError(
                    f"unknown policy {name!r}; known: {', '.join(POLICY_NAMES)}"
                )
        if not 0.0 < self.buffer_fraction <= 1.0:
            raise ValueError("buffer_fraction must lie in (0, 1]")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if self.table_update_divisor not in ("table_size", "resident"):
            raise ValueError("table_update_divisor must be 'table_size' or 'resident'")

    def resolved_seeds(self) -> tuple[int, ...]:
        if self.seeds is not None:
            return self.seeds
        return tuple(self.base_seed + i for i in range(self.repetitions))

    def resolved_p_scan(self) -> float:
        if self.scenario in SCENARIO_P_SCAN:
            return SCENARIO_P_SCAN[self.scenario]
        return self.workload.p_scan


@dataclass
class RunRow:
    policy: str
    seed: int
    miss_rate: float
    avg_time_cost: float
    hits: int
    misses: int
    evictions: int
    mean_decision_ns: float
    curve: list[tuple[int, float]]
    cost_check_passed: bool
    capacity: int = 0
    max_seq_sweep: int | None = None


@dataclass
class RunReport:
    rows: list[RunRow]
    config: BenchConfig

    def rows_for(self, policy: str) -> list[RunRow]:
        return [r for r in self.rows if r.policy == policy]

    def aggregates(self) -> dict[str, dict[str, float]]:
        """Per-policy mean and variance of the two quality metrics over seeds."""
        out: dict[str, dict[str, float]] = {}
        for policy in dict.fromkeys(r.policy for r in self.rows):
            rows = self.rows_for(policy)
            miss = np.array([r.miss_rate for r in rows])
            cost = np.array([r.avg_time_cost for r in rows])
            out[policy] = {
                "miss_rate_mean": float(miss.mean()),
                "miss_rate_var": float(miss.var()),
                "avg_time_cost_mean": float(cost.mean()),
                "avg_time_cost_var": float(cost.var()),
            }
        return out


def build_trace(cfg: BenchConfig, seed: int) -> Trace:
    """One trace for one repetition, shared by every policy of that repetition."""
    if cfg.trace_path is not None:
        trace = read_trace(cfg.trace_path)
        trace.validate()
        return trace
    if cfg.scenario == "worst-case":
        universe = cfg.worst_universe
        if universe is None:
            universe = 2 * cfg.buffer_pages if cfg.buffer_pages else 10
        return worst_case_trace(universe, cfg.worst_repeats)
    workload = dataclasses.replace(
        cfg.workload, p_scan=cfg.resolved_p_scan(), seed=seed
    )
    return generate_trace(workload)


def buffer_capacity(cfg: BenchConfig, catalog: TableCatalog) -> int:
    if cfg.buffer_pages is not None:
        return cfg.buffer_pages
    return max(1, int(cfg.buffer_fraction * catalog.total_pages))


def replay(
    trace: Trace,
    policy: EvictionPolicy,
    capacity: int,
    cost: CostModel,
    sample_every: int = 1000,
    table_update_divisor: str = "table_size",
) -> tuple[RunMetrics, bytearray]:
    """Replay a whole trace under one policy; returns metrics plus the outcome log."""
    buffer = BufferState(trace.catalog, capacity)
    ledger = RewardLedger(trace.catalog, table_update_divisor)
    metrics = RunMetrics(sample_every)
    log = bytearray()
    for request in trace.requests:
        for outcome in process_request(buffer, request, policy, ledger, cost):
            metrics.record(outcome)
            log.append(encode_outcome(outcome))
    return metrics, log


def _make_policy_for_run(cfg: BenchConfig, name: str, seed: int, trace: Trace) -> EvictionPolicy:
    eeva = EevaConfig(
        mu=cfg.mu,
        horizon=max(2, len(trace.requests)),
        rng_seed=policy_rng_seed(seed, name),
    )
    return make_policy(
        name, eeva=eeva, cost=cfg.cost, seq_cost=cfg.seq_cost, trace=trace
    )


def run_benchmark(cfg: BenchConfig) -> RunReport:
    """Full scenario run: seeds x policies, with the per-run cost cross-check."""
    rows: list[RunRow] = []
    for seed in cfg.resolved_seeds():
        trace = build_trace(cfg, seed)
        capacity = buffer_capacity(cfg, trace.catalog)
        total_pages = trace.total_page_accesses()
        for name in cfg.policies:
            policy = _make_policy_for_run(cfg, name, seed, trace)
            metrics, log = replay(
                trace, policy, capacity, cfg.cost, cfg.sample_every,
                cfg.table_update_divisor,
            )
            live_cost = metrics.averaged_time_cost(cfg.cost, total_pages)
            second_pass = recompute_time_cost(log, cfg.cost)
            if live_cost != second_pass:
                raise RuntimeError(
                    f"time-cost cross-check failed for {name} seed {seed}: "
                    f"{live_cost!r} != {second_pass!r}"
                )
            rows.append(
                RunRow(
                    policy=name,
                    seed=seed,
                    miss_rate=metrics.miss_rate(),
                    avg_time_cost=live_cost,
                    hits=metrics.hits,
                    misses=metrics.misses,
                    evictions=metrics.evictions,
                    mean_decision_ns=metrics.mean_decision_ns(),
                    curve=list(metrics.curve),
                    cost_check_passed=True,
                    capacity=capacity,
                    max_seq_sweep=policy.max_sweep if isinstance(policy, EevaSeq) else None,
                )
            )
    report = RunReport(rows, cfg)
    if cfg.output_dir is not None:
        emit_csv(report, cfg.output_dir)
    return report


def ablation_sweep(cfg: BenchConfig, p_scan_values: Iterable[float]) -> list[tuple[float, RunReport]]:
    """One benchmark per p_scan value with shared seeds; emits a long-format CSV."""
    values = list(p_scan_values)
    if not values:
        raise ValueError("ablation needs at least one p_scan value")
    reports: list[tuple[float, RunReport]] = []
    for value in values:
        sub = dataclasses.replace(
            cfg,
            scenario="custom",
            workload=dataclasses.replace(cfg.workload, p_scan=value),
            output_dir=None,
        )
        reports.append((value, run_benchmark(sub)))
    if cfg.output_dir is not None:
        emit_ablation_csv(reports, Path(cfg.output_dir) / "ablation.csv")
    return reports


def emit_csv(report: RunReport, out_dir: str | Path) -> None:
    """summary.csv and curves.csv with fixed column order and formatting, plus
    timings.csv for the wall-clock decision overhead (which is inherently not
    reproducible and therefore kept out of the deterministic files)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "summary.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,seed,miss_rate,avg_time_cost\n")
        for r in report.rows:
            fh.write(f"{r.policy},{r.seed},{r.miss_rate:.6f},{r.avg_time_cost:.6f}\n")
    with (out / "curves.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,seed,accesses,cum_miss_rate\n")
        for r in report.rows:
            for n, rate in r.curve:
                fh.write(f"{r.policy},{r.seed},{n},{rate:.6f}\n")
    with (out / "timings.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,seed,evictions,mean_decision_ns\n")
        for r in report.rows:
            fh.write(f"{r.policy},{r.seed},{r.evictions},{r.mean_decision_ns:.1f}\n")


def emit_ablation_csv(reports: list[tuple[float, RunReport]], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("p_scan,policy,seed,miss_rate,avg_time_cost\n")
        for value, report in reports:
            for r in report.rows:
                fh.write(
                    f"{value:.6g},{r.policy},{r.seed},{r.miss_rate:.6f},{r.avg_time_cost:.6f}\n"
                )
