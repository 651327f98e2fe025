"""The cyclic stress pattern that defeats recency-based eviction.

A fixed sequence of single-page gets repeats ten times. Any buffer smaller
than the cycle makes LRU (and friends) miss forever, the offline oracle
caps out at (k-1)/n per cycle, and randomized exponential-weight sampling
lands in between. Sweeps a few buffer sizes to show the shape.
"""

from evictlab import CostModel, EevaConfig, make_policy, replay, worst_case_trace
from evictlab.policies import policy_rng_seed

UNIVERSE = 10
trace = worst_case_trace(UNIVERSE, repeats=10)
cost = CostModel()

print(f"cycle of {UNIVERSE} pages repeated 10 times; hit rates by buffer size\n")
header = f"{'k':>3}  " + "".join(f"{name:>12}" for name in ("lru", "fifo", "eeva", "belady"))
print(header)

for capacity in (2, 4, 6, 8):
    cells = [f"{capacity:>3}  "]
    for name in ("lru", "fifo", "eeva", "belady"):
        if name == "eeva":
            # average the sampling strategy over ten seeds
            rates = []
            for seed in range(10):
                policy = make_policy(
                    name,
                    eeva=EevaConfig(
                        horizon=len(trace.requests),
                        rng_seed=policy_rng_seed(seed, name),
                    ),
                )
                metrics, _ = replay(trace, policy, capacity, cost)
                rates.append(metrics.hit_rate())
            rate = sum(rates) / len(rates)
        else:
            policy = make_policy(name, trace=trace)
            metrics, _ = replay(trace, policy, capacity, cost)
            rate = metrics.hit_rate()
        cells.append(f"{rate:>12.3f}")
    print("".join(cells))

print("\nlru/fifo stay at zero until the whole cycle fits; belady tracks (k-1)/n")
