"""Victim-selection strategies behind one interface.

Four expert-based strategies (exponential-weight sampling, greedy argmin,
table-level, and a bounded clock-style sweep) plus the classical LRU, LFU,
and FIFO baselines and the offline-optimal farthest-next-use oracle.
"""

from __future__ import annotations

import math
import zlib
from collections import OrderedDict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .core import ContractViolation, PageId
from .rewards import CostModel, RewardLedger

if TYPE_CHECKING:
    from .buffer import BufferState
    from .workload import Trace

POLICY_NAMES = (
    "eeva",
    "eeva-greedy",
    "eeva-t",
    "eeva-seq",
    "lru",
    "lfu",
    "fifo",
    "belady",
)


class EvictionPolicy:
    """Behavioral contract shared by all strategies.

    The buffer pipeline calls ``on_hit``/``on_admit`` exactly once per page
    access, ``select_victim`` only when the buffer is full, ``on_evict`` for
    the page that ``select_victim`` returned, and ``on_replace`` after the
    admitted page's reward has been updated (only when an eviction happened).
    """

    name = "base"

    def on_hit(self, page: PageId) -> None:
        pass

    def on_admit(self, page: PageId) -> None:
        pass

    def on_evict(self, page: PageId) -> None:
        pass

    def on_replace(self, page: PageId, buffer: "BufferState", ledger: RewardLedger) -> None:
        pass

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        raise NotImplementedError


def default_learning_rate(horizon: int) -> float:
    """sqrt((8/T) * log T) for a run of T requests."""
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    return math.sqrt(8.0 * math.log(horizon) / horizon)


@dataclass(frozen=True)
class EevaConfig:
    """Learning rate for the sampling strategy; mu defaults from the horizon."""

    mu: float | None = None
    horizon: int | None = None
    rng_seed: int | np.random.SeedSequence = 0

    def resolved_mu(self) -> float:
        if self.mu is not None:
            if self.mu <= 0:
                raise ValueError("mu must be positive")
            return self.mu
        if self.horizon is None:
            raise ValueError("either mu or horizon must be given")
        return default_learning_rate(self.horizon)


def eviction_probabilities(rewards: np.ndarray, mu: float) -> np.ndarray:
    """exp(-mu*r_i) / sum_j exp(-mu*r_j), computed with a shift so the largest
    exponent is 0 (identical values, no under/overflow)."""
    shifted = np.exp(-mu * (rewards - rewards.min()))
    return shifted / shifted.sum()


def _require_occupied(buffer: "BufferState") -> None:
    if buffer.occupied == 0:
        raise ContractViolation("cannot select a victim from an empty buffer")


class EevaSampling(EvictionPolicy):
    """Samples the victim with probability proportional to exp(-mu * reward)."""

    name = "eeva"

    def __init__(self, config: EevaConfig) -> None:
        self.mu = config.resolved_mu()
        self.rng = np.random.default_rng(config.rng_seed)

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        slots, rewards = buffer.resident_reward_view(ledger)
        probs = eviction_probabilities(rewards, self.mu)
        choice = int(self.rng.choice(len(probs), p=probs))
        return buffer.slots[int(slots[choice])]


class EevaGreedy(EvictionPolicy):
    """Evicts the resident page with the smallest reward; lowest slot wins ties."""

    name = "eeva-greedy"

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        slots, rewards = buffer.resident_reward_view(ledger)
        return buffer.slots[int(slots[int(np.argmin(rewards))])]


class EevaTable(EvictionPolicy):
    """Evicts the first resident page whose table has the smallest table reward.

    Only table rewards are consulted, so per-page tracking can be skipped
    entirely; useful when the buffer is too large to score every page.
    """

    name = "eeva-t"

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        slots, tables = buffer.resident_table_view()
        values = ledger.table_rewards[tables]
        return buffer.slots[int(slots[int(np.argmin(values))])]


class EevaSeq(EvictionPolicy):
    """Bounded clock-style sweep over buffer slots.

    The cursor skips a slot while the page's per-access reward exceeds the
    running buffer average plus a fixed policy-cost allowance, i.e. while
    (1/t)*r > (1/t)*w_hat + c. A sweep is capped at one full revolution; if
    nothing qualifies the page at the starting cursor is evicted. After each
    replacement w_hat absorbs (r_new - r_victim)/k and the cursor moves one
    past the replaced slot. The incremental w_hat drifts (hit-path reward
    updates bypass it), so it is recomputed exactly every ``recompute_every``
    evictions.
    """

    name = "eeva-seq"

    def __init__(self, policy_cost: float = 0.01, recompute_every: int = 4096) -> None:
        if policy_cost < 0:
            raise ValueError("policy_cost must be non-negative")
        self.policy_cost = float(policy_cost)
        self.recompute_every = int(recompute_every)
        self.cursor = 0
        self.avg_weight: float | None = None
        self.evictions = 0
        self.max_sweep = 0
        self._pending_slot: int | None = None
        self._pending_reward = 0.0

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        if not buffer.is_full:
            raise ContractViolation("sweep selection requires a full buffer")
        t = ledger.access_count
        if t < 1:
            raise ContractViolation("sweep selection requires at least one processed access")
        k = buffer.capacity
        flats = buffer.flat_slots
        rewards = ledger.page_rewards
        if self.avg_weight is None:
            self.avg_weight = float(rewards[flats].mean())
        threshold = self.avg_weight + t * self.policy_cost
        pos = self.cursor
        steps = 0
        while steps < k and rewards[flats[pos]] > threshold:
            pos = (pos + 1) % k
            steps += 1
        if steps == k:
            pos = self.cursor
        if steps > self.max_sweep:
            self.max_sweep = steps
        self._pending_slot = pos
        self._pending_reward = float(rewards[flats[pos]])
        return buffer.slots[pos]

    def on_replace(self, page: PageId, buffer: "BufferState", ledger: RewardLedger) -> None:
        if self._pending_slot is None or self.avg_weight is None:
            return
        k = buffer.capacity
        self.avg_weight += (ledger.reward_of(page) - self._pending_reward) / k
        self.cursor = (self._pending_slot + 1) % k
        self._pending_slot = None
        self.evictions += 1
        if self.evictions % self.recompute_every == 0:
            self.avg_weight = float(ledger.page_rewards[buffer.flat_slots].mean())


class LruPolicy(EvictionPolicy):
    """Evicts the least recently touched resident page."""

    name = "lru"

    def __init__(self) -> None:
        self._order: OrderedDict[PageId, None] = OrderedDict()

    def on_hit(self, page: PageId) -> None:
        self._order.move_to_end(page)

    def on_admit(self, page: PageId) -> None:
        self._order[page] = None

    def on_evict(self, page: PageId) -> None:
        self._order.pop(page, None)

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        return next(iter(self._order))


class FifoPolicy(EvictionPolicy):
    """Evicts the resident page admitted first; re-accesses change nothing."""

    name = "fifo"

    def __init__(self) -> None:
        self._order: OrderedDict[PageId, None] = OrderedDict()

    def on_admit(self, page: PageId) -> None:
        self._order[page] = None

    def on_evict(self, page: PageId) -> None:
        self._order.pop(page, None)

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        return next(iter(self._order))


class LfuPolicy(EvictionPolicy):
    """Evicts the resident page with the fewest accesses since admission.

    Counts reset when a page leaves the buffer; ties fall back to the least
    recently touched page.
    """

    name = "lfu"

    def __init__(self) -> None:
        self._count: dict[PageId, int] = {}
        self._stamp: dict[PageId, int] = {}
        self._clock = 0

    def _touch(self, page: PageId) -> None:
        self._clock += 1
        self._stamp[page] = self._clock

    def on_admit(self, page: PageId) -> None:
        self._count[page] = 1
        self._touch(page)

    def on_hit(self, page: PageId) -> None:
        self._count[page] += 1
        self._touch(page)

    def on_evict(self, page: PageId) -> None:
        self._count.pop(page, None)
        self._stamp.pop(page, None)

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        return min(self._count, key=lambda p: (self._count[p], self._stamp[p]))


def next_use_positions(accesses: Sequence[PageId]) -> list[float]:
    """For each position, the index of the next access to the same page (inf if none)."""
    positions: list[float] = [math.inf] * len(accesses)
    last_seen: dict[PageId, int] = {}
    for i in range(len(accesses) - 1, -1, -1):
        positions[i] = last_seen.get(accesses[i], math.inf)
        last_seen[accesses[i]] = i
    return positions


class BeladyPolicy(EvictionPolicy):
    """Offline oracle: evicts the resident page whose next use lies farthest ahead.

    Needs the full page-access sequence up front; pages never used again rank
    as infinitely far (ties broken by lowest slot). Every on_hit/on_admit
    consumes one position of the precomputed sequence, so the policy must see
    exactly the trace it was built from, in order.
    """

    name = "belady"

    def __init__(self, next_positions: Sequence[float]) -> None:
        self._next = next_positions
        self._clock = 0
        self._next_use: dict[PageId, float] = {}

    @classmethod
    def from_trace(cls, trace: "Trace") -> "BeladyPolicy":
        order = [page for request in trace.requests for page in request.page_ids()]
        return cls(next_use_positions(order))

    def _observe(self, page: PageId) -> None:
        self._next_use[page] = self._next[self._clock]
        self._clock += 1

    def on_hit(self, page: PageId) -> None:
        self._observe(page)

    def on_admit(self, page: PageId) -> None:
        self._observe(page)

    def on_evict(self, page: PageId) -> None:
        self._next_use.pop(page, None)

    def select_victim(self, buffer: "BufferState", ledger: RewardLedger) -> PageId:
        _require_occupied(buffer)
        best_page: PageId | None = None
        best_next = -1.0
        for _, page in buffer.occupied_items():
            nxt = self._next_use[page]
            if nxt > best_next:
                best_next = nxt
                best_page = page
        assert best_page is not None
        return best_page


def policy_rng_seed(run_seed: int, name: str) -> np.random.SeedSequence:
    """Stable per-(run, policy) seed derivation; crc32 keeps it machine-independent."""
    return np.random.SeedSequence((run_seed, zlib.crc32(name.encode("ascii"))))


def make_policy(
    name: str,
    *,
    eeva: EevaConfig | None = None,
    cost: CostModel | None = None,
    seq_cost: float | None = None,
    trace: "Trace | None" = None,
) -> EvictionPolicy:
    """Instantiate a policy by its public name.

    ``eeva`` is required for the sampling strategy, ``trace`` for belady;
    the sweep's policy cost defaults to 0.01 * c_get when not given.
    """
    if name == "eeva":
        if eeva is None:
            raise ValueError("the sampling strategy needs an EevaConfig")
        return EevaSampling(eeva)
    if name == "eeva-greedy":
        return EevaGreedy()
    if name == "eeva-t":
        return EevaTable()
    if name == "eeva-seq":
        if seq_cost is None:
            seq_cost = 0.01 * (cost.c_get if cost is not None else CostModel().c_get)
        return EevaSeq(policy_cost=seq_cost)
    if name == "lru":
        return LruPolicy()
    if name == "lfu":
        return LfuPolicy()
    if name == "fifo":
        return FifoPolicy()
    if name == "belady":
        if trace is None:
            raise ValueError("belady needs the full trace up front")
        return BeladyPolicy.from_trace(trace)
    raise ValueError(f"unknown policy {name!r}; known: {', '.join(POLICY_NAMES)}")
