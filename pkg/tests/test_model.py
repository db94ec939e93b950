import numpy as np
import pytest

from cpboot.model import DataSet, ModelConfig, generate, regression_mean
from cpboot.randdist import Normal, ScaledBeta, ShiftedGamma, StreamKey, Uniform, derive_stream


def stream(*path):
    key = StreamKey(31)
    for label, idx in path:
        key = key.child(label, idx)
    return derive_stream(key)


class TestConfig:
    def test_default_interval_normal(self):
        cfg = ModelConfig.with_default_interval(Normal(0.0, 2.0), Normal())
        assert cfg.a == pytest.approx(-3.919928, abs=1e-6)
        assert cfg.b == pytest.approx(3.919928, abs=1e-6)

    def test_four_models(self, models):
        assert set(models) == {"normal_normal", "beta_normal", "beta_uniform", "beta_gamma"}
        for cfg in models.values():
            assert (cfg.alpha0, cfg.beta0, cfg.zeta0) == (-1.0, 1.0, 0.0)
            assert cfg.a < 0 < cfg.b

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(alpha0=1.0, beta0=1.0),
            dict(zeta0=5.0),
            dict(error=Uniform(0.0, 1.0)),
            dict(a=-10.0),  # no covariate mass below a
        ],
    )
    def test_invalid(self, kwargs):
        base = dict(alpha0=-1.0, beta0=1.0, zeta0=0.0, a=-1.0, b=1.0,
                    covariate=ScaledBeta(4.0, 6.0, 4.0, -2.0), error=Normal())
        base.update(kwargs)
        with pytest.raises(ValueError):
            ModelConfig(**base)

    def test_dict_round_trip(self, models):
        for cfg in models.values():
            assert ModelConfig.from_dict(cfg.to_dict()) == cfg

    def test_from_dict_defaults(self):
        cfg = ModelConfig.from_dict({"covariate": {"type": "uniform", "lo": -1, "hi": 1},
                                     "error": {"type": "normal", "mu": 0, "sigma": 1}})
        assert cfg.a == pytest.approx(-0.95) and cfg.b == pytest.approx(0.95)
        assert (cfg.alpha0, cfg.beta0, cfg.zeta0) == (-1.0, 1.0, 0.0)


class TestRegressionMean:
    @pytest.mark.parametrize("z, expected", [(0.0, -1.0), (-0.5, -1.0), (0.5, 1.0)])
    def test_examples(self, models, z, expected):
        assert regression_mean(models["normal_normal"], z) == expected

    def test_vector(self, models):
        out = regression_mean(models["normal_normal"], np.array([-1.0, 0.0, 1e-300]))
        assert out.tolist() == [-1.0, -1.0, 1.0]


class TestGenerate:
    def test_deterministic(self, models):
        a = generate(models["beta_gamma"], 50, stream(("g", 0)))
        b = generate(models["beta_gamma"], 50, stream(("g", 0)))
        assert np.array_equal(a.z, b.z) and np.array_equal(a.y, b.y)

    def test_small_n_rejected(self, models):
        with pytest.raises(ValueError):
            generate(models["normal_normal"], 1, stream())

    @pytest.mark.parametrize("name", ["normal_normal", "beta_uniform", "beta_gamma"])
    def test_error_law(self, models, name):
        cfg = models[name]
        data = generate(cfg, 100_000, stream(("err", 1)))
        eps = data.y - regression_mean(cfg, data.z)
        var = cfg.error.moments()[1]
        assert abs(eps.var() / var - 1) < 0.03
        assert abs(np.corrcoef(data.z, eps)[0, 1]) < 0.02


class TestDataSet:
    def test_csv_round_trip_exact(self, models):
        data = generate(models["beta_normal"], 40, stream(("csv", 0)))
        text = data.to_csv()
        assert text.startswith("z,y\n")
        back = DataSet.from_csv(text)
        assert np.array_equal(back.z, data.z) and np.array_equal(back.y, data.y)

    def test_bad_header(self):
        with pytest.raises(ValueError):
            DataSet.from_csv("x,y\n1,2\n")

    @pytest.mark.parametrize(
        "z, y", [([1.0, 2.0], [1.0]), ([1.0, np.nan], [0.0, 0.0]), ([[1.0]], [[1.0]])]
    )
    def test_invalid(self, z, y):
        with pytest.raises(ValueError):
            DataSet(np.array(z), np.array(y))


def test_gamma_error_is_skewed():
    x = ShiftedGamma(4.0, 2.0, -2.0).sample(stream(("skew", 0)), 50_000)
    assert np.mean(x**3) > 0.5  # third moment 2/sqrt(4) = 1
