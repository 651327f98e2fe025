"""Miss accounting, the cost-weighted miss metric, and cumulative miss-rate curves."""

from __future__ import annotations

import math
from typing import Sequence

from .buffer import AccessOutcome
from .core import ContractViolation, QueryType
from .rewards import CostModel


class RunMetrics:
    """Live counters for one policy replay.

    The cumulative miss-rate curve is sampled every ``sample_every`` page
    accesses; decision time accumulates only the nanoseconds spent inside
    select_victim, so it isolates eviction overhead.
    """

    def __init__(self, sample_every: int = 1000) -> None:
        if sample_every < 1:
            raise ValueError("sample_every must be positive")
        self.sample_every = sample_every
        self.hits = 0
        self.misses = 0
        self.missed_get_pages = 0
        self.missed_scan_pages = 0
        self.evictions = 0
        self.decision_time_ns = 0
        self.curve: list[tuple[int, float]] = []

    @property
    def accesses(self) -> int:
        return self.hits + self.misses

    def record(self, outcome: AccessOutcome) -> None:
        if outcome.hit:
            self.hits += 1
        else:
            self.misses += 1
            if outcome.query_type is QueryType.GET:
                self.missed_get_pages += 1
            else:
                self.missed_scan_pages += 1
        if outcome.victim is not None:
            self.evictions += 1
            self.decision_time_ns += outcome.decision_ns
        n = self.hits + self.misses
        if n % self.sample_every == 0:
            self.curve.append((n, self.misses / n))

    def miss_rate(self) -> float:
        if self.accesses == 0:
            raise ContractViolation("miss rate is undefined before any access")
        return self.misses / self.accesses

    def hit_rate(self) -> float:
        return 1.0 - self.miss_rate()

    def averaged_time_cost(self, cost: CostModel, total_pages_requested: int) -> float:
        """(c_scan * missed scan pages + c_get * missed get pages) / total pages."""
        if total_pages_requested <= 0:
            raise ContractViolation("averaged time cost needs a positive page total")
        return (
            cost.c_scan * self.missed_scan_pages + cost.c_get * self.missed_get_pages
        ) / total_pages_requested

    def mean_decision_ns(self) -> float:
        return self.decision_time_ns / self.evictions if self.evictions else 0.0


def relative_cumulative_curve(
    metrics: RunMetrics, baseline: RunMetrics
) -> list[tuple[int, float]]:
    """Pointwise percent by which the policy's cumulative miss rate exceeds the
    baseline's; points where the baseline is 0 come out as NaN markers."""
    if [n for n, _ in metrics.curve] != [n for n, _ in baseline.curve]:
        raise ValueError("curves were sampled on different access grids")
    out: list[tuple[int, float]] = []
    for (n, m), (_, b) in zip(metrics.curve, baseline.curve):
        out.append((n, 100.0 * (m - b) / b if b != 0.0 else math.nan))
    return out


# Compact per-access log used for the independent second-pass recomputation of
# the averaged time cost: one byte per access, (is_scan << 1) | hit.


def encode_outcome(outcome: AccessOutcome) -> int:
    return ((outcome.query_type is QueryType.SCAN) << 1) | outcome.hit


def recompute_time_cost(log: Sequence[int], cost: CostModel) -> float:
    """Second pass over an encoded outcome log; must match the live counters exactly."""
    if len(log) == 0:
        raise ContractViolation("averaged time cost needs a positive page total")
    missed_get = 0
    missed_scan = 0
    for code in log:
        if code & 1:
            continue
        if code & 2:
            missed_scan += 1
        else:
            missed_get += 1
    return (cost.c_scan * missed_scan + cost.c_get * missed_get) / len(log)
