"""Walk a handful of requests through the buffer pipeline by hand.

Two tables, a four-slot buffer, and a request mix small enough to follow
every hit, miss, and eviction. Shows how page rewards warm-start from the
table rewards and reset to zero when a page is thrown out.
"""

from evictlab import (
    BufferState,
    CostModel,
    LruPolicy,
    PageId,
    Request,
    RewardLedger,
    TableCatalog,
    process_request,
)

catalog = TableCatalog((4, 3))  # table 0 has 4 pages, table 1 has 3
cost = CostModel()
buffer = BufferState(catalog, capacity=4)
ledger = RewardLedger(catalog)
policy = LruPolicy()

workload = [
    Request.get(PageId(0, 0)),
    Request.get(PageId(0, 1)),
    Request.scan(1, 0, 3),      # full scan of table 1
    Request.get(PageId(0, 0)),  # still resident -> hit
    Request.get(PageId(0, 2)),  # buffer is full now -> eviction
    Request.get(PageId(0, 3)),
]

print(f"{'request':<14} {'page':<8} {'hit':<5} victim")
for request in workload:
    label = f"{request.query_type.value}({request.table})"
    for outcome in process_request(buffer, request, policy, ledger, cost):
        victim = f"{outcome.victim.table}/{outcome.victim.index}" if outcome.victim else "-"
        page = f"{outcome.page.table}/{outcome.page.index}"
        print(f"{label:<14} {page:<8} {str(outcome.hit):<5} {victim}")
        label = ""

print("\nresident pages and their rewards:")
for slot, page in buffer.occupied_items():
    print(f"  slot {slot}: page {page.table}/{page.index}  reward={ledger.reward_of(page):.2f}")

print("\ntable rewards:", [round(float(v), 3) for v in ledger.table_rewards])
