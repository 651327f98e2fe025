"""Cumulative miss-rate dynamics, relative to the table-expert strategy.

Replays one medium-scan trace under four policies, then prints (and plots,
if matplotlib is importable) how much worse each policy's cumulative miss
rate is than eeva-t as the trace progresses.
"""

from evictlab import (
    CostModel,
    EevaConfig,
    WorkloadConfig,
    generate_trace,
    make_policy,
    relative_cumulative_curve,
    replay,
)
from evictlab.policies import policy_rng_seed

workload = WorkloadConfig(
    num_tables=10, p_max=100, num_queries=50_000, p_scan=1.3e-3, seed=4
)
trace = generate_trace(workload)
capacity = trace.catalog.total_pages // 10
cost = CostModel()

runs = {}
for name in ("eeva-t", "eeva-greedy", "lru", "lfu"):
    policy = make_policy(
        name,
        eeva=EevaConfig(horizon=len(trace.requests), rng_seed=policy_rng_seed(4, name)),
        cost=cost,
    )
    runs[name], _ = replay(trace, policy, capacity, cost, sample_every=2000)
    print(f"{name:<12} final miss rate {runs[name].miss_rate():.4f}")

baseline = runs["eeva-t"]
relative = {
    name: relative_cumulative_curve(metrics, baseline)
    for name, metrics in runs.items()
    if name != "eeva-t"
}

print("\npercent worse than eeva-t (cumulative miss rate)")
print(f"{'accesses':>10}" + "".join(f"{name:>14}" for name in relative))
for i in range(0, len(baseline.curve), 5):
    accesses = baseline.curve[i][0]
    row = [f"{accesses:>10}"]
    for name in relative:
        row.append(f"{relative[name][i][1]:>14.1f}")
    print("".join(row))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, curve in relative.items():
        ax.plot([n for n, _ in curve], [v for _, v in curve], label=name)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("page accesses")
    ax.set_ylabel("% worse than eeva-t")
    ax.legend()
    fig.tight_layout()
    fig.savefig("out/miss_rate_dynamics.png", dpi=120)
    print("\nsaved plot to out/miss_rate_dynamics.png")
except ImportError:
    print("\nmatplotlib not available; skipped the plot")
