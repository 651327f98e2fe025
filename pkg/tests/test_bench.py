import dataclasses

import pytest

from evictlab.bench import (
    SCENARIO_P_SCAN,
    BenchConfig,
    ablation_sweep,
    emit_csv,
    run_benchmark,
)
from evictlab.rewards import CostModel
from evictlab.workload import WorkloadConfig, generate_trace, write_trace

TINY = WorkloadConfig(num_tables=4, p_max=12, num_queries=400)


def tiny_config(**kw):
    defaults = dict(
        scenario="get-only",
        policies=("lru",),
        repetitions=1,
        workload=TINY,
        sample_every=50,
    )
    defaults.update(kw)
    return BenchConfig(**defaults)


class TestBenchConfig:
    def test_rejects_unknown_policy(self):
        with pytest.raises(ValueError, match="unknown policy"):
            tiny_config(policies=("lru", "clock"))

    def test_rejects_unknown_scenario(self):
        with pytest.raises(ValueError, match="unknown scenario"):
            tiny_config(scenario="chaos")

    def test_seed_derivation_is_a_counter(self):
        cfg = tiny_config(repetitions=3, base_seed=40)
        assert cfg.resolved_seeds() == (40, 41, 42)

    def test_explicit_seed_list_wins(self):
        cfg = tiny_config(seeds=(9, 7))
        assert cfg.resolved_seeds() == (9, 7)

    def test_scenario_presets_bind_p_scan(self):
        assert SCENARIO_P_SCAN == {
            "get-only": 0.0,
            "low-scan": 0.6e-3,
            "medium-scan": 1.3e-3,
            "high-scan": 1.8e-3,
        }


class TestRunBenchmark:
    def test_smoke_single_row(self):
        report = run_benchmark(tiny_config())
        assert len(report.rows) == 1
        row = report.rows[0]
        assert row.policy == "lru"
        assert 0.0 <= row.miss_rate <= 1.0
        assert row.cost_check_passed

    def test_worst_case_lru_misses_everything_and_belady_wins(self):
        cfg = tiny_config(
            scenario="worst-case",
            policies=("lru", "belady"),
            buffer_pages=4,
            worst_universe=10,
        )
        report = run_benchmark(cfg)
        lru = report.rows_for("lru")[0]
        belady = report.rows_for("belady")[0]
        assert lru.miss_rate == 1.0
        assert belady.miss_rate < lru.miss_rate

    def test_rows_are_policies_times_seeds(self):
        report = run_benchmark(tiny_config(policies=("lru", "fifo"), repetitions=3))
        assert len(report.rows) == 6

    def test_belady_is_minimum_for_each_seed(self):
        cfg = tiny_config(
            scenario="custom",
            workload=dataclasses.replace(TINY, p_scan=0.05),
            policies=("belady", "lru", "lfu", "fifo", "eeva-greedy"),
            repetitions=2,
            buffer_pages=5,
        )
        report = run_benchmark(cfg)
        for seed in cfg.resolved_seeds():
            rows = {r.policy: r for r in report.rows if r.seed == seed}
            assert rows["belady"].miss_rate == min(r.miss_rate for r in rows.values())

    def test_within_seed_trace_is_shared(self):
        report = run_benchmark(tiny_config(policies=("lru", "fifo"), repetitions=1))
        lru, fifo = report.rows
        assert lru.hits + lru.misses == fifo.hits + fifo.misses

    def test_replays_external_trace(self, tmp_path):
        trace = generate_trace(dataclasses.replace(TINY, p_scan=0.02, seed=5))
        path = tmp_path / "w.trace"
        write_trace(trace, path)
        cfg = tiny_config(trace_path=str(path), policies=("lru",))
        report = run_benchmark(cfg)
        assert report.rows[0].hits + report.rows[0].misses == trace.total_page_accesses()

    def test_aggregates_recomputable_from_rows(self):
        report = run_benchmark(tiny_config(policies=("lru", "fifo"), repetitions=3))
        agg = report.aggregates()
        rows = report.rows_for("lru")
        mean = sum(r.miss_rate for r in rows) / len(rows)
        assert agg["lru"]["miss_rate_mean"] == pytest.approx(mean)


class TestCsvEmission:
    def test_summary_and_curves_written(self, tmp_path):
        cfg = tiny_config(output_dir=str(tmp_path))
        run_benchmark(cfg)
        summary = (tmp_path / "summary.csv").read_text()
        assert summary.splitlines()[0] == "policy,seed,miss_rate,avg_time_cost"
        assert len(summary.splitlines()) == 2
        assert (tmp_path / "curves.csv").exists()
        assert (tmp_path / "timings.csv").exists()

    def test_empty_policy_list_gives_header_only(self, tmp_path):
        cfg = tiny_config(policies=())
        report = run_benchmark(cfg)
        emit_csv(report, tmp_path)
        assert (tmp_path / "summary.csv").read_text() == "policy,seed,miss_rate,avg_time_cost\n"
        assert (tmp_path / "curves.csv").read_text() == "policy,seed,accesses,cum_miss_rate\n"

    def test_reemit_is_byte_identical(self, tmp_path):
        report = run_benchmark(tiny_config(policies=("lru", "eeva-greedy")))
        emit_csv(report, tmp_path / "a")
        emit_csv(report, tmp_path / "b")
        for name in ("summary.csv", "curves.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_identical_configs_give_identical_csvs(self, tmp_path):
        cfg_a = tiny_config(policies=("eeva", "lru"), output_dir=str(tmp_path / "a"))
        cfg_b = dataclasses.replace(cfg_a, output_dir=str(tmp_path / "b"))
        run_benchmark(cfg_a)
        run_benchmark(cfg_b)
        for name in ("summary.csv", "curves.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestAblation:
    def test_zero_value_reproduces_get_only(self):
        base = tiny_config(policies=("lru", "lfu"), repetitions=2)
        sweep = ablation_sweep(base, [0.0])
        direct = run_benchmark(tiny_config(policies=("lru", "lfu"), repetitions=2))
        assert [r.miss_rate for r in sweep[0][1].rows] == [
            r.miss_rate for r in direct.rows
        ]

    def test_duplicate_values_deterministic(self):
        base = tiny_config(policies=("lru",))
        sweep = ablation_sweep(base, [0.01, 0.01])
        assert sweep[0][1].rows[0].miss_rate == sweep[1][1].rows[0].miss_rate

    def test_ablation_style_constants_run(self):
        # Sweep with c_scan=0.9, c_get=1 stays finite and well-formed.
        base = tiny_config(
            policies=("eeva-greedy", "lru"),
            cost=CostModel(c_scan=0.9, c_get=1.0),
        )
        for _, report in ablation_sweep(base, [0.9e-3]):
            for row in report.rows:
                assert 0.0 <= row.miss_rate <= 1.0
                assert row.avg_time_cost >= 0.0

    def test_empty_values_rejected(self):
        with pytest.raises(ValueError):
            ablation_sweep(tiny_config(), [])

    def test_long_format_csv(self, tmp_path):
        base = tiny_config(policies=("lru",), output_dir=str(tmp_path))
        ablation_sweep(base, [0.0, 0.01])
        lines = (tmp_path / "ablation.csv").read_text().splitlines()
        assert lines[0] == "p_scan,policy,seed,miss_rate,avg_time_cost"
        assert len(lines) == 3
