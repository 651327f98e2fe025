"""Page, table, and request primitives shared by every other module."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import accumulate
from typing import Iterator, NamedTuple, Sequence

TableId = int


class ContractViolation(RuntimeError):
    """A pipeline contract was broken (e.g. eviction requested on an empty buffer)."""


class PageId(NamedTuple):
    """Position of a page: owning table plus 0-based index inside that table."""

    table: TableId
    index: int


def table_of(page: PageId) -> TableId:
    """Table that contains the page."""
    return page.table


class QueryType(Enum):
    GET = "get"
    SCAN = "scan"


@dataclass(frozen=True)
class TableCatalog:
    """Immutable universe of tables and their page counts.

    Pages of table i occupy the contiguous global index block
    [offset_i, offset_i + page_counts[i]), with tables laid out in order.
    """

    page_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.page_counts)
        if not counts:
            raise ValueError("catalog needs at least one table")
        if any(c <= 0 for c in counts):
            raise ValueError("page counts must be positive")
        object.__setattr__(self, "page_counts", counts)
        object.__setattr__(self, "_offsets", tuple(accumulate((0,) + counts[:-1])))

    @property
    def num_tables(self) -> int:
        return len(self.page_counts)

    @property
    def total_pages(self) -> int:
        return self._offsets[-1] + self.page_counts[-1]

    def page_count(self, table: TableId) -> int:
        return self.page_counts[table]

    def contains(self, page: PageId) -> bool:
        return (
            0 <= page.table < self.num_tables
            and 0 <= page.index < self.page_counts[page.table]
        )

    def validate_page(self, page: PageId) -> None:
        if not self.contains(page):
            raise ValueError(f"page {page!r} is not in the catalog")

    def flatten(self, page: PageId) -> int:
        """Dense global index in 0..total_pages-1; assumes a valid page."""
        return self._offsets[page.table] + page.index

    def all_pages(self) -> Iterator[PageId]:
        for table, count in enumerate(self.page_counts):
            for index in range(count):
                yield PageId(table, index)


@dataclass(frozen=True, slots=True)
class Request:
    """One query's page set: a single-page get or a contiguous ascending scan."""

    query_type: QueryType
    table: TableId
    start: int
    length: int

    def __post_init__(self) -> None:
        if self.table < 0 or self.start < 0:
            raise ValueError("table and start must be non-negative")
        if self.length < 1:
            raise ValueError("a request touches at least one page")
        if self.query_type is QueryType.GET and self.length != 1:
            raise ValueError("get requests contain exactly one page")

    @classmethod
    def get(cls, page: PageId) -> "Request":
        return cls(QueryType.GET, page.table, page.index, 1)

    @classmethod
    def scan(cls, table: TableId, start: int, length: int) -> "Request":
        return cls(QueryType.SCAN, table, start, length)

    @classmethod
    def from_pages(cls, query_type: QueryType, pages: Sequence[PageId]) -> "Request":
        """Build a request from explicit pages, rejecting gaps and mixed tables."""
        if not pages:
            raise ValueError("a request touches at least one page")
        table = pages[0].table
        start = pages[0].index
        for k, page in enumerate(pages):
            if page.table != table:
                raise ValueError("scan pages must come from a single table")
            if page.index != start + k:
                raise ValueError("scan pages must be contiguous and ascending")
        return cls(query_type, table, start, len(pages))

    def __len__(self) -> int:
        return self.length

    def page_ids(self) -> Iterator[PageId]:
        table = self.table
        for index in range(self.start, self.start + self.length):
            yield PageId(table, index)

    def last_index(self) -> int:
        return self.start + self.length - 1
