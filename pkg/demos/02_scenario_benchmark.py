"""Desk-scale scenario comparison across all eight policies.

Runs the low-scan scenario (50k queries, 10 tables, buffer = 10% of the
database) for three seeds and prints mean miss rate and averaged time cost
per policy. Equivalent CLI:

    bench run --scenario low-scan --desk-scale --reps 3 \
        --policies eeva,eeva-greedy,eeva-t,eeva-seq,lru,lfu,fifo,belady --out out/
"""

from evictlab import BenchConfig, WorkloadConfig, run_benchmark

cfg = BenchConfig(
    scenario="low-scan",
    policies=("eeva", "eeva-greedy", "eeva-t", "eeva-seq", "lru", "lfu", "fifo", "belady"),
    repetitions=3,
    workload=WorkloadConfig(num_tables=10, p_max=100, num_queries=50_000),
    output_dir="out/low-scan-demo",
)

print("replaying the low-scan scenario under every policy, 3 seeds each...")
report = run_benchmark(cfg)

print(f"\n{'policy':<12} {'miss rate':>10} {'time cost':>10} {'evict ns':>10}")
for policy, agg in report.aggregates().items():
    rows = report.rows_for(policy)
    mean_ns = sum(r.mean_decision_ns for r in rows) / len(rows)
    print(
        f"{policy:<12} {agg['miss_rate_mean']:>10.4f} "
        f"{agg['avg_time_cost_mean']:>10.4f} {mean_ns:>10.0f}"
    )

print("\nCSV artifacts in out/low-scan-demo/ (summary.csv, curves.csv, timings.csv)")
