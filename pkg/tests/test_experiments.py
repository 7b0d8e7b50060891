import numpy as np
import pytest

from irsbeam import (
    Method,
    SystemParams,
    format_csv,
    monte_carlo_rate,
    monte_carlo_rates,
    parse_config,
    run_convergence,
    run_oracle_check,
    run_rate_vs_n,
    run_single,
    run_srr_sweep,
)
from irsbeam.experiments import (
    CONVERGENCE_HEADER,
    ORACLE_CHECK_HEADER,
    RATE_VS_N_HEADER,
    SRR_SWEEP_HEADER,
)


def small_config(scenario, **extra):
    import json
    doc = {"trials": 8, "master_seed": 321}
    doc.update(extra)
    return parse_config(json.dumps(doc), scenario=scenario)


class TestMonteCarlo:
    def test_single_trial_mean_is_the_trial_rate(self):
        params = SystemParams.default(8)
        summary = monte_carlo_rate(Method.MRR, params, trials=1, master_seed=5)
        rates = monte_carlo_rates(Method.MRR, params, trials=1, master_seed=5)
        assert summary.mean_rate_bits == rates[0]
        assert summary.std_rate_bits == 0.0
        assert summary.trials == 1

    def test_parallel_equals_serial(self):
        params = SystemParams.default(16)
        serial = monte_carlo_rates(Method.MAX_ASNR, params, 24, 9, jobs=1)
        parallel = monte_carlo_rates(Method.MAX_ASNR, params, 24, 9, jobs=8)
        np.testing.assert_array_equal(serial, parallel)

    def test_trial_failure_carries_index(self):
        params = SystemParams.default(4)
        with pytest.raises(RuntimeError, match="trial 0"):
            monte_carlo_rates(Method.SRR, params, 2, 9, k=99)

    def test_summary_fields(self):
        params = SystemParams.default(8)
        summary = monte_carlo_rate(Method.SRR, params, 16, 7, k=4, p_s_dbm=15.0)
        assert summary.method == "srr"
        assert summary.n == 8 and summary.k == 4
        assert summary.std_rate_bits >= 0.0


class TestConvergenceRun:
    def test_schema_and_trace_lengths(self):
        cfg = small_config("convergence", n_values=[8])
        result = run_convergence(cfg)
        assert result.header == CONVERGENCE_HEADER
        seeds = {row[0] for row in result.rows}
        assert len(seeds) == cfg.trials
        for seed in seeds:
            iters = [row[1] for row in result.rows if row[0] == seed]
            assert iters == list(range(len(iters)))
            assert len(iters) <= cfg.solver.max_iterations + 1

    def test_final_rate_usually_improves_on_initialization(self):
        import json
        cfg = parse_config(json.dumps({"trials": 200, "master_seed": 12345}),
                           scenario="convergence")
        result = run_convergence(cfg)
        by_seed = {}
        for seed, it, lam, rate_bits in result.rows:
            by_seed.setdefault(seed, []).append((it, rate_bits))
        improved = sum(
            1 for recs in by_seed.values()
            if sorted(recs)[-1][1] >= sorted(recs)[0][1]
        )
        assert improved / len(by_seed) >= 0.95


class TestSrrSweepRun:
    def test_schema_and_reference_rows(self):
        cfg = small_config("srr-sweep", n_values=[8], k_values=[2, 8],
                           p_s_dbm_values=[15.0])
        result = run_srr_sweep(cfg, verbose_trials=True)
        assert result.header == SRR_SWEEP_HEADER
        methods = [(row[0], row[2]) for row in result.rows]
        assert methods == [(2, "srr"), (8, "srr"), (8, "mrr")]

    def test_full_selection_row_equals_mrr_per_trial(self):
        cfg = small_config("srr-sweep", n_values=[8], k_values=[8],
                           p_s_dbm_values=[15.0])
        result = run_srr_sweep(cfg, verbose_trials=True)
        srr_rates = {r[3]: r[5] for r in result.trial_rows if r[2] == "srr"}
        mrr_rates = {r[3]: r[5] for r in result.trial_rows if r[2] == "mrr"}
        for trial, rate_bits in srr_rates.items():
            assert rate_bits == pytest.approx(mrr_rates[trial], rel=1e-12)

    def test_trial_log_reproduces_summary(self):
        cfg = small_config("srr-sweep", n_values=[8], k_values=[4],
                           p_s_dbm_values=[10.0, 15.0])
        result = run_srr_sweep(cfg, verbose_trials=True)
        for k, p_s_dbm, method, mean, std, count in result.rows:
            rates = np.array([
                r[5] for r in result.trial_rows
                if (r[0], r[1], r[2]) == (k, p_s_dbm, method)
            ])
            assert rates.size == count
            assert np.mean(rates) == pytest.approx(mean, rel=1e-12)
            assert np.std(rates, ddof=1) == pytest.approx(std, rel=1e-12)


class TestRateVsNRun:
    def test_schema_and_method_order(self):
        cfg = small_config("rate-vs-n", n_values=[4, 8])
        result = run_rate_vs_n(cfg)
        assert result.header == RATE_VS_N_HEADER
        assert [row[0] for row in result.rows] == [4] * 6 + [8] * 6
        assert [row[1] for row in result.rows][:6] == [
            "max-asnr", "mrr", "srr", "egr", "random-phase", "passive-aligned"
        ]

    def test_budget_methods_gain_with_more_elements(self):
        import json
        cfg = parse_config(json.dumps({"trials": 300, "master_seed": 12345,
                                       "n_values": [16, 64]}), scenario="rate-vs-n")
        result = run_rate_vs_n(cfg)
        means = {(row[0], row[1]): row[2] for row in result.rows}
        # array gain: the four budget-constrained designs improve with N
        # (incoherent random phases saturate, so they are not checked)
        for method in ("max-asnr", "mrr", "srr", "egr"):
            assert means[(64, method)] >= means[(16, method)], method

    def test_egr_beats_random_phase(self):
        import json
        cfg = parse_config(json.dumps({"trials": 300, "master_seed": 12345,
                                       "n_values": [16]}), scenario="rate-vs-n")
        result = run_rate_vs_n(cfg)
        means = {row[1]: row[2] for row in result.rows}
        assert means["egr"] >= means["random-phase"]


class TestSingleAndOracleRuns:
    def test_single_schema(self):
        cfg = small_config("single", n_values=[8], k_values=[3])
        result = run_single(cfg, verbose_trials=True)
        assert result.header == RATE_VS_N_HEADER
        srr_row = [r for r in result.rows if r[1] == "srr"][0]
        assert srr_row[0] == 8
        assert len(result.trial_rows) == 6 * cfg.trials

    def test_oracle_check_schema_and_notes(self):
        cfg = small_config("oracle-check", n_values=[1, 2], trials=3)
        result = run_oracle_check(cfg)
        assert result.header == ORACLE_CHECK_HEADER
        assert len(result.rows) == 2 * 3 * 6
        assert any("sign adjudication" in note for note in result.notes)
        for row in result.rows:
            assert row[5] == pytest.approx(row[4] - row[3], abs=1e-12)


class TestCsvFormatting:
    def test_twelve_significant_digits(self):
        text = format_csv(("a", "b"), [(1, 0.12345678901234567), (2, 3.0)])
        assert text == "a,b\n1,0.123456789012\n2,3\n"

    def test_rerun_bytes_identical(self):
        cfg = small_config("rate-vs-n", n_values=[4])
        a = format_csv(RATE_VS_N_HEADER, run_rate_vs_n(cfg).rows)
        b = format_csv(RATE_VS_N_HEADER, run_rate_vs_n(cfg).rows)
        assert a == b

    def test_parallel_bytes_identical(self):
        cfg = small_config("srr-sweep", n_values=[8], k_values=[2],
                           p_s_dbm_values=[15.0])
        a = format_csv(SRR_SWEEP_HEADER, run_srr_sweep(cfg, jobs=1).rows)
        b = format_csv(SRR_SWEEP_HEADER, run_srr_sweep(cfg, jobs=8).rows)
        assert a == b
