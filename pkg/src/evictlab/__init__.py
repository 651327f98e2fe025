"""evictlab: a buffer-pool eviction laboratory.

Expert-based page replacement strategies (exponential-weight sampling,
greedy, table-level, and a bounded sequential sweep), classical baselines
(LRU, LFU, FIFO) and the offline-optimal oracle, a synthetic workload
generator, miss/cost metrics, and a benchmark harness.
"""

from .bench import (
    BenchConfig,
    RunReport,
    RunRow,
    ablation_sweep,
    emit_csv,
    replay,
    run_benchmark,
)
from .buffer import AccessOutcome, BufferState, process_page, process_request
from .core import (
    ContractViolation,
    PageId,
    QueryType,
    Request,
    TableCatalog,
    TableId,
    table_of,
)
from .metrics import RunMetrics, relative_cumulative_curve
from .policies import (
    POLICY_NAMES,
    BeladyPolicy,
    EevaConfig,
    EevaGreedy,
    EevaSampling,
    EevaSeq,
    EevaTable,
    EvictionPolicy,
    FifoPolicy,
    LfuPolicy,
    LruPolicy,
    default_learning_rate,
    eviction_probabilities,
    make_policy,
)
from .rewards import CostModel, RewardLedger, alpha_for, beta_for
from .workload import (
    Trace,
    TraceFormatError,
    WorkloadConfig,
    generate_trace,
    read_trace,
    table_distributions,
    worst_case_trace,
    write_trace,
    zipf_sample,
)

__version__ = "0.1.0"

__all__ = [
    "AccessOutcome",
    "BeladyPolicy",
    "BenchConfig",
    "BufferState",
    "ContractViolation",
    "CostModel",
    "EevaConfig",
    "EevaGreedy",
    "EevaSampling",
    "EevaSeq",
    "EevaTable",
    "EvictionPolicy",
    "FifoPolicy",
    "LfuPolicy",
    "LruPolicy",
    "PageId",
    "POLICY_NAMES",
    "QueryType",
    "Request",
    "RewardLedger",
    "RunMetrics",
    "RunReport",
    "RunRow",
    "TableCatalog",
    "TableId",
    "Trace",
    "TraceFormatError",
    "WorkloadConfig",
    "ablation_sweep",
    "alpha_for",
    "beta_for",
    "default_learning_rate",
    "emit_csv",
    "eviction_probabilities",
    "generate_trace",
    "make_policy",
    "process_page",
    "process_request",
    "read_trace",
    "relative_cumulative_curve",
    "replay",
    "run_benchmark",
    "table_distributions",
    "table_of",
    "worst_case_trace",
    "write_trace",
    "zipf_sample",
]
