import numpy as np
import pytest

from evictlab.core import ContractViolation, PageId, QueryType, TableCatalog
from evictlab.rewards import CostModel, RewardLedger, alpha_for, beta_for


def cost(**kw):
    defaults = dict(c_idx=1.0, c_load=1.0, gamma=0.0, c_get=1.0, c_scan=0.8)
    defaults.update(kw)
    return CostModel(**defaults)


class TestCostModel:
    def test_rejects_gamma_outside_unit_interval(self):
        with pytest.raises(ValueError):
            cost(gamma=1.5)

    def test_rejects_nonpositive_costs(self):
        with pytest.raises(ValueError):
            cost(c_idx=0.0)


class TestAlpha:
    def test_log2_of_power_of_two(self):
        catalog = TableCatalog((1024,))
        assert alpha_for(0, catalog, cost(c_idx=1.0)) == 10.0

    def test_two_page_table(self):
        catalog = TableCatalog((2,))
        assert alpha_for(0, catalog, cost(c_idx=2.0)) == 2.0

    def test_single_page_table_clamps_log_to_one(self):
        catalog = TableCatalog((1,))
        assert alpha_for(0, catalog, cost(c_idx=1.0)) == 1.0


class TestBeta:
    def test_amortized_index_cost(self):
        catalog = TableCatalog((1024,))
        assert beta_for(0, 10, catalog, cost(c_idx=1.0, c_load=1.0, gamma=0.0)) == 2.0

    def test_unit_scan(self):
        catalog = TableCatalog((2,))
        assert beta_for(0, 1, catalog, cost(c_idx=1.0, c_load=1.0, gamma=1.0)) == 3.0

    def test_long_scan_with_false_hits(self):
        catalog = TableCatalog((1024,))
        got = beta_for(0, 1000, catalog, cost(c_idx=1.0, c_load=0.5, gamma=0.5))
        assert got == pytest.approx(1.26)

    def test_rejects_zero_length(self):
        catalog = TableCatalog((4,))
        with pytest.raises(ValueError):
            beta_for(0, 0, catalog, cost())


class TestUpdateOnAccess:
    def test_resident_get_updates_page_and_table(self):
        # Hit path: r += delta; table += delta / residents (resident mode).
        catalog = TableCatalog((8,))
        ledger = RewardLedger(catalog, table_update_divisor="resident")
        page = PageId(0, 3)
        ledger.page_rewards[catalog.flatten(page)] = 2.0
        ledger.table_rewards[0] = 0.5
        ledger.update_on_access(page, QueryType.GET, True, 4, delta=1.0)
        assert ledger.reward_of(page) == 3.0
        assert ledger.table_reward_of(0) == 0.75

    def test_table_size_divisor_uses_total_page_count(self):
        catalog = TableCatalog((8,))
        ledger = RewardLedger(catalog, table_update_divisor="table_size")
        page = PageId(0, 3)
        ledger.update_on_access(page, QueryType.GET, True, 4, delta=1.0)
        assert ledger.table_reward_of(0) == 1.0 / 8

    def test_nonresident_scan_warm_starts_from_table(self):
        catalog = TableCatalog((8,))
        ledger = RewardLedger(catalog)
        page = PageId(0, 0)
        ledger.table_rewards[0] = 5.0
        ledger.update_on_access(page, QueryType.SCAN, False, 1, delta=2.0)
        assert ledger.reward_of(page) == 7.0
        assert ledger.table_reward_of(0) == 7.0

    def test_zero_resident_count_is_clamped(self):
        catalog = TableCatalog((8,))
        ledger = RewardLedger(catalog, table_update_divisor="resident")
        page = PageId(0, 1)
        ledger.update_on_access(page, QueryType.GET, True, 0, delta=1.0)
        assert ledger.table_reward_of(0) == 1.0

    def test_rejects_nonpositive_delta(self):
        ledger = RewardLedger(TableCatalog((4,)))
        with pytest.raises(ContractViolation):
            ledger.update_on_access(PageId(0, 0), QueryType.GET, True, 1, delta=0.0)

    def test_access_count_increments(self):
        ledger = RewardLedger(TableCatalog((4,)))
        for k in range(3):
            ledger.update_on_access(PageId(0, 0), QueryType.GET, k > 0, 1, delta=1.0)
        assert ledger.access_count == 3

    def test_warm_start_equals_table_reward_exactly(self):
        # A fresh admission's reward minus its own delta is the table reward.
        catalog = TableCatalog((16,))
        ledger = RewardLedger(catalog)
        ledger.table_rewards[0] = 0.1 + 0.2  # deliberately non-representable sum
        before = ledger.table_reward_of(0)
        ledger.update_on_access(PageId(0, 5), QueryType.GET, False, 1, delta=1.5)
        assert ledger.reward_of(PageId(0, 5)) - 1.5 == before

    def test_get_linearity(self):
        catalog = TableCatalog((4,))
        ledger = RewardLedger(catalog)
        page = PageId(0, 2)
        alpha = alpha_for(0, catalog, cost(c_idx=1.0))
        ledger.update_on_access(page, QueryType.GET, False, 1, delta=alpha)
        start = ledger.reward_of(page)
        for _ in range(7):
            ledger.update_on_access(page, QueryType.GET, True, 1, delta=alpha)
        assert ledger.reward_of(page) == start + 7 * alpha

    def test_monotone_between_resets(self):
        rng = np.random.default_rng(7)
        catalog = TableCatalog((3, 3))
        ledger = RewardLedger(catalog)
        seen = set()
        last = {}
        for _ in range(500):
            page = PageId(int(rng.integers(2)), int(rng.integers(3)))
            qt = QueryType.GET if rng.random() < 0.7 else QueryType.SCAN
            ledger.update_on_access(page, qt, page in seen, 1, delta=float(rng.uniform(0.1, 3.0)))
            seen.add(page)
            assert ledger.reward_of(page) >= last.get(page, 0.0)
            last[page] = ledger.reward_of(page)
            assert all(r >= 0 for r in ledger.page_rewards)


class TestResetOnEviction:
    def test_resets_page_only(self):
        catalog = TableCatalog((4,))
        ledger = RewardLedger(catalog)
        page = PageId(0, 1)
        ledger.page_rewards[catalog.flatten(page)] = 7.3
        ledger.table_rewards[0] = 2.0
        ledger.reset_on_eviction(page)
        assert ledger.reward_of(page) == 0.0
        assert ledger.table_reward_of(0) == 2.0

    def test_idempotent(self):
        ledger = RewardLedger(TableCatalog((4,)))
        ledger.reset_on_eviction(PageId(0, 0))
        ledger.reset_on_eviction(PageId(0, 0))
        assert ledger.reward_of(PageId(0, 0)) == 0.0

    def test_readmission_warm_starts_from_current_table_reward(self):
        catalog = TableCatalog((4,))
        ledger = RewardLedger(catalog)
        page = PageId(0, 1)
        ledger.page_rewards[catalog.flatten(page)] = 9.0
        ledger.reset_on_eviction(page)
        ledger.table_rewards[0] = 2.0
        ledger.update_on_access(page, QueryType.GET, False, 1, delta=0.5)
        assert ledger.reward_of(page) == 2.5


class TestAverageReward:
    def test_plain_division(self):
        catalog = TableCatalog((4,))
        ledger = RewardLedger(catalog)
        ledger.page_rewards[0] = 10.0
        ledger.access_count = 100
        assert ledger.average_reward(PageId(0, 0)) == 0.1

    def test_zero_reward(self):
        ledger = RewardLedger(TableCatalog((4,)))
        ledger.access_count = 5
        assert ledger.average_reward(PageId(0, 0)) == 0.0

    def test_zero_accesses_returns_zero(self):
        ledger = RewardLedger(TableCatalog((4,)))
        assert ledger.average_reward(PageId(0, 0)) == 0.0

    def test_iid_get_frequency_limit(self):
        # No evictions: r_i/t converges to alpha_i * p_i (within 10% at t=1e5).
        rng = np.random.default_rng(42)
        catalog = TableCatalog((2, 4))
        model = cost(c_idx=1.0)
        ledger = RewardLedger(catalog)
        pages = list(catalog.all_pages())
        probs = np.array([3, 3, 1, 1, 1, 1], dtype=float)
        probs /= probs.sum()
        resident = set()
        t = 100_000
        draws = rng.choice(len(pages), size=t, p=probs)
        for k in draws:
            page = pages[k]
            ledger.update_on_access(
                page,
                QueryType.GET,
                page in resident,
                resident_count_of_table=1,
                delta=alpha_for(page.table, catalog, model),
            )
            resident.add(page)
        for page, p in zip(pages, probs):
            expected = alpha_for(page.table, catalog, model) * p
            assert ledger.average_reward(page) == pytest.approx(expected, rel=0.10)
