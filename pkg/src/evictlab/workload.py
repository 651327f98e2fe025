"""Synthetic workload generation and trace file round-trip.

A trace is a sequence of requests over a randomly sized table catalog: each
query is a full-table scan with probability p_scan, otherwise a single-page
get. Scan-heavy tables and get-heavy tables are disjoint thirds (the first
third of tables is boosted for scans and suppressed for gets), and the page
of a get is drawn from a Zipf law over the table's page indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .core import PageId, QueryType, Request, TableCatalog


class TraceFormatError(ValueError):
    """A trace file failed to parse or validate; message carries the line number."""


@dataclass(frozen=True)
class WorkloadConfig:
    num_tables: int = 50
    p_max: int = 1000
    p_scan: float = 2e-3
    zipf_q: float = 0.1
    num_queries: int = 1_000_000
    scan_table_boost: float = 10.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_tables < 1:
            raise ValueError("num_tables must be positive")
        if self.p_max < 1:
            raise ValueError("p_max must be positive")
        if not 0.0 <= self.p_scan <= 1.0:
            raise ValueError("p_scan must lie in [0, 1]")
        if self.zipf_q < 0:
            raise ValueError("zipf_q must be non-negative")
        if self.num_queries < 1:
            raise ValueError("num_queries must be positive")
        if self.scan_table_boost <= 0:
            raise ValueError("scan_table_boost must be positive")


@dataclass
class Trace:
    """Requests plus the catalog they are valid against."""

    requests: list[Request]
    catalog: TableCatalog
    provenance: WorkloadConfig | str | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.requests)

    def total_page_accesses(self) -> int:
        return sum(len(r) for r in self.requests)

    def validate(self) -> None:
        for pos, request in enumerate(self.requests):
            if not 0 <= request.table < self.catalog.num_tables:
                raise ValueError(f"request {pos}: table {request.table} not in catalog")
            if request.last_index() >= self.catalog.page_count(request.table):
                raise ValueError(
                    f"request {pos}: page range ends at {request.last_index()}, "
                    f"table {request.table} has {self.catalog.page_count(request.table)} pages"
                )


def table_distributions(cfg: WorkloadConfig) -> tuple[np.ndarray, np.ndarray]:
    """(scan_probs, get_probs) over tables.

    The first floor(|T|/3) tables are ``scan_table_boost`` times likelier to
    be scanned and the same factor less likely to be hit by gets; both vectors
    are renormalized to sum to exactly 1 with the ratio preserved.
    """
    if cfg.num_tables < 3:
        raise ValueError("table distributions need at least 3 tables")
    boosted = cfg.num_tables // 3
    scan = np.ones(cfg.num_tables, dtype=np.float64)
    scan[:boosted] = cfg.scan_table_boost
    get = np.ones(cfg.num_tables, dtype=np.float64)
    get[boosted:] = cfg.scan_table_boost
    return scan / scan.sum(), get / get.sum()


def draw_catalog(cfg: WorkloadConfig, rng: np.random.Generator) -> TableCatalog:
    """Table sizes are uniform integers in [p_max/2, p_max]."""
    low = max(1, cfg.p_max // 2)
    counts = rng.integers(low, cfg.p_max + 1, size=cfg.num_tables)
    return TableCatalog(tuple(int(c) for c in counts))


@lru_cache(maxsize=256)
def _zipf_cdf(num_pages: int, q: float) -> np.ndarray:
    weights = 1.0 / np.power(np.arange(1, num_pages + 1, dtype=np.float64), q)
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    return cdf


def zipf_probabilities(num_pages: int, q: float) -> np.ndarray:
    """P(index = j) proportional to 1/(j+1)^q; index 0 is the most popular."""
    weights = 1.0 / np.power(np.arange(1, num_pages + 1, dtype=np.float64), q)
    return weights / weights.sum()


def zipf_sample(num_pages: int, q: float, rng: np.random.Generator) -> int:
    """One page index drawn from the Zipf law over 0..num_pages-1."""
    if num_pages < 1:
        raise ValueError("num_pages must be positive")
    if q < 0:
        raise ValueError("q must be non-negative")
    cdf = _zipf_cdf(num_pages, q)
    return int(np.searchsorted(cdf, rng.random(), side="right"))


def generate_trace(cfg: WorkloadConfig) -> Trace:
    """Draw a full trace; equal configs (including seed) produce identical traces."""
    rng = np.random.default_rng(cfg.seed)
    catalog = draw_catalog(cfg, rng)
    scan_probs, get_probs = table_distributions(cfg)
    n = cfg.num_queries

    is_scan = rng.random(n) < cfg.p_scan
    n_scan = int(is_scan.sum())
    tables = np.empty(n, dtype=np.int64)
    if n_scan:
        tables[is_scan] = rng.choice(cfg.num_tables, size=n_scan, p=scan_probs)
    if n - n_scan:
        tables[~is_scan] = rng.choice(cfg.num_tables, size=n - n_scan, p=get_probs)

    # Get pages via inverse-CDF sampling, grouped by table so each group is vectorized.
    page_idx = np.zeros(n, dtype=np.int64)
    get_positions = np.nonzero(~is_scan)[0]
    if get_positions.size:
        uniforms = rng.random(get_positions.size)
        get_tables = tables[get_positions]
        for t in range(cfg.num_tables):
            mask = get_tables == t
            if mask.any():
                cdf = _zipf_cdf(catalog.page_count(t), cfg.zipf_q)
                page_idx[get_positions[mask]] = np.searchsorted(
                    cdf, uniforms[mask], side="right"
                )

    requests: list[Request] = []
    for i in range(n):
        t = int(tables[i])
        if is_scan[i]:
            requests.append(Request.scan(t, 0, catalog.page_count(t)))
        else:
            requests.append(Request.get(PageId(t, int(page_idx[i]))))
    return Trace(requests, catalog, provenance=cfg)


def worst_case_trace(universe_pages: int, repeats: int = 10) -> Trace:
    """Cyclic get-only stress pattern: every page is its own one-page table and
    the fixed page order repeats ``repeats`` times."""
    if universe_pages < 2:
        raise ValueError("the cyclic pattern needs at least 2 pages")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    catalog = TableCatalog((1,) * universe_pages)
    cycle = [Request.get(PageId(t, 0)) for t in range(universe_pages)]
    return Trace(
        cycle * repeats,
        catalog,
        provenance=f"worst-case(universe={universe_pages}, repeats={repeats})",
    )


def write_trace(trace: Trace, path: str | Path) -> None:
    """Line-oriented text format; see read_trace for the grammar."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("#catalog " + " ".join(str(c) for c in trace.catalog.page_counts) + "\n")
        for request in trace.requests:
            if request.query_type is QueryType.GET:
                fh.write(f"G {request.table} {request.start}\n")
            else:
                fh.write(f"S {request.table} {request.start} {request.length}\n")


def read_trace(path: str | Path) -> Trace:
    """Parse a trace file.

    Grammar, one record per line: a ``#catalog P_0 P_1 ...`` header, then
    ``G <table> <page_index>`` or ``S <table> <first_index> <count>`` records.
    Other ``#`` lines are comments. Any malformed or out-of-range record
    raises TraceFormatError with its line number.
    """
    path = Path(path)
    catalog: TableCatalog | None = None
    requests: list[Request] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("#catalog"):
                    if catalog is not None:
                        raise TraceFormatError(f"line {lineno}: duplicate catalog header")
                    fields = line.split()[1:]
                    if not fields:
                        raise TraceFormatError(f"line {lineno}: empty catalog header")
                    try:
                        counts = tuple(int(f) for f in fields)
                        catalog = TableCatalog(counts)
                    except ValueError as exc:
                        raise TraceFormatError(f"line {lineno}: bad catalog: {exc}") from exc
                continue
            if catalog is None:
                raise TraceFormatError(
                    f"line {lineno}: request before the #catalog header"
                )
            fields = line.split()
            tag = fields[0]
            try:
                if tag == "G" and len(fields) == 3:
                    table, index = int(fields[1]), int(fields[2])
                    request = Request.get(PageId(table, index))
                elif tag == "S" and len(fields) == 4:
                    table, start, count = int(fields[1]), int(fields[2]), int(fields[3])
                    request = Request.scan(table, start, count)
                else:
                    raise TraceFormatError(
                        f"line {lineno}: expected 'G <table> <page>' or "
                        f"'S <table> <first> <count>', got {line!r}"
                    )
            except TraceFormatError:
                raise
            except ValueError as exc:
                raise TraceFormatError(f"line {lineno}: {exc}") from exc
            if not 0 <= request.table < catalog.num_tables:
                raise TraceFormatError(
                    f"line {lineno}: table {request.table} not in catalog "
                    f"(0..{catalog.num_tables - 1})"
                )
            if request.last_index() >= catalog.page_count(request.table):
                raise TraceFormatError(
                    f"line {lineno}: page range ends at {request.last_index()}, table "
                    f"{request.table} has {catalog.page_count(request.table)} pages"
                )
            requests.append(request)
    if catalog is None:
        raise TraceFormatError("missing #catalog header")
    return Trace(requests, catalog, provenance=f"file:{path}")
