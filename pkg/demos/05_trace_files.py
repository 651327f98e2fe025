"""Trace files: generate, save, reload, and replay the same workload twice.

The on-disk format is plain text: a `#catalog` header with per-table page
counts, then one `G <table> <page>` or `S <table> <first> <count>` line per
request. Diff-friendly and easy to produce from any other tool.
"""

from pathlib import Path

from evictlab import (
    CostModel,
    WorkloadConfig,
    generate_trace,
    make_policy,
    read_trace,
    replay,
    write_trace,
)

out = Path("out")
out.mkdir(exist_ok=True)
path = out / "demo.trace"

trace = generate_trace(
    WorkloadConfig(num_tables=4, p_max=20, p_scan=0.01, num_queries=2_000, seed=12)
)
write_trace(trace, path)
print(f"wrote {len(trace.requests)} requests to {path}")
print("first lines of the file:")
for line in path.read_text().splitlines()[:5]:
    print("   ", line)

reloaded = read_trace(path)
assert reloaded.requests == trace.requests
assert reloaded.catalog == trace.catalog
print("\nround-trip is lossless")

cost = CostModel()
for source, label in ((trace, "generated"), (reloaded, "reloaded")):
    metrics, _ = replay(source, make_policy("lru"), capacity=8, cost=cost)
    print(f"lru on the {label} trace: miss rate {metrics.miss_rate():.4f}")
