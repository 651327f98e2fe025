"""The buffer manager pipeline: hit/miss resolution, eviction, reward updates.

Warm-up fills free slots in order; once the buffer is full every miss evicts
exactly one victim chosen by the policy, and the victim's slot is reused for
the incoming page (slot positions stay stable for resident pages).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ContractViolation, PageId, QueryType, Request, TableCatalog, TableId
from .policies import EvictionPolicy
from .rewards import CostModel, RewardLedger, alpha_for, beta_for


class BufferState:
    """Fixed-capacity set of resident pages with stable slot positions."""

    def __init__(self, catalog: TableCatalog, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("buffer capacity must be positive")
        self.catalog = catalog
        self.capacity = capacity
        self.slots: list[PageId | None] = [None] * capacity
        self.flat_slots = np.full(capacity, -1, dtype=np.int64)
        self.table_slots = np.full(capacity, -1, dtype=np.int64)
        self._slot_of: dict[int, int] = {}
        self._table_counts = np.zeros(catalog.num_tables, dtype=np.int64)
        self._fill = 0

    @property
    def occupied(self) -> int:
        return len(self._slot_of)

    @property
    def is_full(self) -> bool:
        return len(self._slot_of) == self.capacity

    def __contains__(self, page: PageId) -> bool:
        return self.catalog.flatten(page) in self._slot_of

    def slot_of(self, page: PageId) -> int:
        return self._slot_of[self.catalog.flatten(page)]

    def resident_count(self, table: TableId) -> int:
        return int(self._table_counts[table])

    def resident_pages(self) -> Iterator[PageId]:
        for page in self.slots:
            if page is not None:
                yield page

    def occupied_items(self) -> Iterator[tuple[int, PageId]]:
        """(slot, page) pairs in ascending slot order."""
        for slot, page in enumerate(self.slots):
            if page is not None:
                yield slot, page

    def admit(self, page: PageId) -> int:
        """Place a page into the lowest free slot (warm-up path only)."""
        if self.is_full:
            raise ContractViolation("admit called on a full buffer")
        flat = self.catalog.flatten(page)
        if flat in self._slot_of:
            raise ContractViolation(f"page {page!r} is already resident")
        slot = self._fill
        self._fill += 1
        self._place(slot, page, flat)
        return slot

    def replace(self, victim: PageId, page: PageId) -> int:
        """Swap the victim out and put the new page into the victim's slot."""
        victim_flat = self.catalog.flatten(victim)
        slot = self._slot_of.pop(victim_flat)
        self._table_counts[victim.table] -= 1
        flat = self.catalog.flatten(page)
        if flat in self._slot_of:
            raise ContractViolation(f"page {page!r} is already resident")
        self._place(slot, page, flat)
        return slot

    def _place(self, slot: int, page: PageId, flat: int) -> None:
        self.slots[slot] = page
        self.flat_slots[slot] = flat
        self.table_slots[slot] = page.table
        self._slot_of[flat] = slot
        self._table_counts[page.table] += 1

    def resident_reward_view(self, ledger: RewardLedger) -> tuple[np.ndarray, np.ndarray]:
        """(slot indices, rewards) for occupied slots, ascending slot order."""
        if self.is_full:
            flats = self.flat_slots
            slots = np.arange(self.capacity)
        else:
            slots = np.nonzero(self.flat_slots >= 0)[0]
            flats = self.flat_slots[slots]
        return slots, ledger.page_rewards[flats]

    def resident_table_view(self) -> tuple[np.ndarray, np.ndarray]:
        """(slot indices, table ids) for occupied slots, ascending slot order."""
        if self.is_full:
            return np.arange(self.capacity), self.table_slots
        slots = np.nonzero(self.table_slots >= 0)[0]
        return slots, self.table_slots[slots]


@dataclass(frozen=True, slots=True)
class AccessOutcome:
    """Result of processing one page access; victim is set only on a full-buffer miss."""

    page: PageId
    query_type: QueryType
    hit: bool
    victim: PageId | None = None
    decision_ns: int = 0


def process_page(
    buffer: BufferState,
    page: PageId,
    query_type: QueryType,
    scan_len: int,
    policy: EvictionPolicy,
    ledger: RewardLedger,
    cost: CostModel,
) -> AccessOutcome:
    """One access through the pipeline: resolve residency, evict if needed,
    then apply the reward update. ``scan_len`` is the page count of the
    enclosing request (1 for gets)."""
    hit = page in buffer
    victim: PageId | None = None
    decision_ns = 0
    if hit:
        policy.on_hit(page)
    else:
        if buffer.is_full:
            started = time.perf_counter_ns()
            victim = policy.select_victim(buffer, ledger)
            decision_ns = time.perf_counter_ns() - started
            if victim not in buffer:
                raise ContractViolation(
                    f"policy {policy.name!r} chose non-resident victim {victim!r}"
                )
            ledger.reset_on_eviction(victim)
            policy.on_evict(victim)
            buffer.replace(victim, page)
        else:
            buffer.admit(page)
        policy.on_admit(page)
    if query_type is QueryType.GET:
        delta = alpha_for(page.table, buffer.catalog, cost)
    else:
        delta = beta_for(page.table, scan_len, buffer.catalog, cost)
    ledger.update_on_access(
        page,
        query_type,
        was_resident=hit,
        resident_count_of_table=buffer.resident_count(page.table),
        delta=delta,
    )
    if victim is not None:
        policy.on_replace(page, buffer, ledger)
    return AccessOutcome(page, query_type, hit, victim, decision_ns)


def process_request(
    buffer: BufferState,
    request: Request,
    policy: EvictionPolicy,
    ledger: RewardLedger,
    cost: CostModel,
) -> list[AccessOutcome]:
    """Process a request's pages in order; scans share one request-level size."""
    scan_len = len(request) if request.query_type is QueryType.SCAN else 1
    return [
        process_page(buffer, page, request.query_type, scan_len, policy, ledger, cost)
        for page in request.page_ids()
    ]
