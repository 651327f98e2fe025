import math
from collections import defaultdict

from evictlab.buffer import BufferState
from evictlab.core import PageId, TableCatalog
from evictlab.rewards import RewardLedger


def build_full_buffer(rewards, tables=None, table_update_divisor="table_size"):
    """Buffer of len(rewards) slots filled in order, with the given per-slot
    page rewards and (optionally) per-slot owning tables."""
    n = len(rewards)
    if tables is None:
        tables = [0] * n
    counts = [max(1, tables.count(t)) for t in range(max(tables) + 1)]
    catalog = TableCatalog(tuple(counts))
    buffer = BufferState(catalog, n)
    ledger = RewardLedger(catalog, table_update_divisor)
    next_index = defaultdict(int)
    pages = []
    for t, r in zip(tables, rewards):
        page = PageId(t, next_index[t])
        next_index[t] += 1
        buffer.admit(page)
        ledger.page_rewards[catalog.flatten(page)] = r
        pages.append(page)
    return buffer, ledger, pages


def brute_force_belady(accesses, capacity):
    """Independent farthest-next-use oracle with forced admission.

    Quadratic scan for next uses; fine for the small traces used in tests.
    """
    cache = set()
    hits = 0
    misses = 0
    for i, page in enumerate(accesses):
        if page in cache:
            hits += 1
            continue
        misses += 1
        if len(cache) < capacity:
            cache.add(page)
            continue

        def next_use(p):
            for j in range(i + 1, len(accesses)):
                if accesses[j] == p:
                    return j
            return math.inf

        victim = max(cache, key=next_use)
        cache.discard(victim)
        cache.add(page)
    return hits, misses
