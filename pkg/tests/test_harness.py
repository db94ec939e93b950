import json

import numpy as np
import pytest

from cpboot import harness
from cpboot.harness import (
    HISTOGRAM_TAGS,
    CoverageReport,
    ExperimentConfig,
    HistogramData,
    coverage_experiment,
    figure1_bundle,
    sampling_distribution,
    variance_table_csv,
)
from cpboot.limitlaw import limit_spec_from_model, sample_limit
from cpboot.randdist import StreamKey
from cpboot.resampling import ECDF, RESIDUAL, SMOOTHED, m_out_of_n


@pytest.fixture(scope="module")
def small_cfg(models):
    return ExperimentConfig(models["beta_uniform"], (40, 60), (ECDF, SMOOTHED, m_out_of_n(0.8)),
                            reps=6, boot_B=50, master_seed=3)


class TestConfig:
    def test_round_trip(self, small_cfg):
        text = json.dumps(small_cfg.to_dict())
        assert ExperimentConfig.from_json(text) == small_cfg

    def test_defaults(self, models):
        cfg = ExperimentConfig.from_dict({"model": models["normal_normal"].to_dict(), "n_values": [200]})
        assert cfg.reps == 500 and cfg.B_for(200) == 800 and cfg.level == 0.95
        assert [s.name for s in cfg.schemes] == ["ecdf", "smoothed", "residual", "moon:4/5", "moon:9/10", "moon:14/15"]

    @pytest.mark.parametrize("kw", [dict(reps=0), dict(level=1.0), dict(boot_B=0), dict(boot_B="3n")])
    def test_invalid(self, models, kw):
        with pytest.raises(ValueError):
            ExperimentConfig(models["normal_normal"], (50,), **kw)


class TestCoverage:
    def test_report_shape(self, small_cfg):
        report = coverage_experiment(small_cfg)
        assert len(report.rows) == 6
        row = report.row("moon:4/5", 60)
        assert row.reps == 6 and row.boot_B == 50 and row.failed == 0
        assert 0.0 <= row.coverage <= 1.0 and row.avg_length > 0
        lines = report.to_csv().splitlines()
        assert lines[0] == "scheme,n,coverage,avg_length,mc_se,reps,boot_B"
        assert len(lines) == 7

    def test_single_rep(self, models):
        cfg = ExperimentConfig(models["normal_normal"], (50,), (SMOOTHED,), reps=1, boot_B=40)
        row = coverage_experiment(cfg).rows[0]
        assert row.coverage in (0.0, 1.0) and row.mc_se == 0.0

    def test_worker_count_irrelevant(self, small_cfg):
        assert coverage_experiment(small_cfg, 1).to_csv() == coverage_experiment(small_cfg, 2).to_csv()

    def test_failures_are_counted(self, small_cfg, monkeypatch):
        real = harness.bootstrap_roots

        def flaky(data, fitted, scheme, *args):
            if scheme == ECDF:
                raise ValueError("synthetic failure")
            return real(data, fitted, scheme, *args)

        monkeypatch.setattr(harness, "bootstrap_roots", flaky)
        report = coverage_experiment(small_cfg)
        bad = report.row("ecdf", 40)
        assert bad.failed == 6 and bad.reps == 0 and np.isnan(bad.coverage)
        assert report.row("smoothed", 40).failed == 0

    def test_missing_row(self):
        with pytest.raises(KeyError):
            CoverageReport().row("ecdf", 1)


class TestHistograms:
    def test_bundle_tags(self, models):
        bundle = figure1_bundle(models["beta_gamma"], 60, 30, 40, StreamKey(1))
        assert tuple(h.tag for h in bundle) == HISTOGRAM_TAGS
        sizes = {h.tag: h.samples.size for h in bundle}
        assert sizes == {"asymptotic": 30, "actual": 30, "smoothed": 40, "ecdf": 40, "fdr": 40, "m_out_of_n": 40}

    def test_histogram_csv(self):
        text = HistogramData("ecdf", [1.5, -2.0]).to_csv()
        assert text == "tag,value\necdf,1.5\necdf,-2.0\n"
        with pytest.raises(ValueError):
            HistogramData("bogus", [1.0])

    def test_sampling_distribution_deterministic(self, table_model):
        a = sampling_distribution(table_model, 80, 150, StreamKey(4))
        b = sampling_distribution(table_model, 80, 150, StreamKey(4), workers=2)
        assert np.array_equal(a.samples, b.samples) and a.samples.size == 150

    @pytest.mark.slow
    def test_sampling_distribution_matches_limit(self, table_model):
        actual = sampling_distribution(table_model, 500, 1000, StreamKey(5)).samples
        limit = sample_limit(limit_spec_from_model(table_model), 5000, StreamKey(5))[:, 2]
        assert abs(actual.var(ddof=1) / limit.var(ddof=1) - 1) < 0.4
        assert np.isfinite(np.median(actual)) and abs(np.median(actual)) < 20


def test_variance_table_csv():
    assert variance_table_csv(7.5, 60.25).splitlines() == [
        "random_variable,asymptotic_variance",
        "n(zeta_hat-zeta0),7.5",
        "n(zeta_star-zeta0),60.25",
    ]


def test_residual_scheme_runs_in_experiment(models):
    cfg = ExperimentConfig(models["beta_gamma"], (50,), (RESIDUAL,), reps=3, boot_B=30)
    assert coverage_experiment(cfg).rows[0].reps == 3
