"""The one-jump stump regression model and data generation.

``Y = alpha0 * 1{Z <= zeta0} + beta0 * 1{Z > zeta0} + eps`` with ``eps``
independent of ``Z``, zero mean and positive finite variance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import randdist
from .randdist import DistributionSpec, RandomStream


@dataclass(frozen=True)
class ModelConfig:
    alpha0: float
    beta0: float
    zeta0: float
    a: float
    b: float
    covariate: DistributionSpec
    error: DistributionSpec

    def __post_init__(self):
        if self.alpha0 == self.beta0:
            raise ValueError("alpha0 and beta0 must differ (no jump otherwise)")
        if not self.a < self.zeta0 < self.b:
            raise ValueError(f"need a < zeta0 < b, got a={self.a}, zeta0={self.zeta0}, b={self.b}")
        mean, var = randdist.moments(self.error)
        if abs(mean) > 1e-12:
            raise ValueError(f"error law must have zero mean, got {mean}")
        if not var > 0:
            raise ValueError("error law must have positive variance")
        if not (randdist.cdf(self.covariate, self.a) > 0 and 1 - randdist.cdf(self.covariate, self.b) > 0):
            raise ValueError("need P(Z < a) > 0 and P(Z > b) > 0")

    @classmethod
    def with_default_interval(cls, covariate, error, alpha0=-1.0, beta0=1.0, zeta0=0.0,
                              a=None, b=None, coverage=0.95) -> ModelConfig:
        """Fill missing ``a``/``b`` with central ``coverage`` quantiles of the covariate law."""
        tail = 0.5 * (1.0 - coverage)
        if a is None:
            a = randdist.quantile_by_bisection(covariate, tail)
        if b is None:
            b = randdist.quantile_by_bisection(covariate, 1.0 - tail)
        return cls(alpha0, beta0, zeta0, a, b, covariate, error)

    def to_dict(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "beta0": self.beta0,
            "zeta0": self.zeta0,
            "a": self.a,
            "b": self.b,
            "covariate": self.covariate.to_dict(),
            "error": self.error.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> ModelConfig:
        """Parse a config object; ``a``/``b``/``alpha0``/``beta0``/``zeta0`` are optional."""
        return cls.with_default_interval(
            covariate=randdist.dist_from_dict(obj["covariate"]),
            error=randdist.dist_from_dict(obj["error"]),
            alpha0=float(obj.get("alpha0", -1.0)),
            beta0=float(obj.get("beta0", 1.0)),
            zeta0=float(obj.get("zeta0", 0.0)),
            a=None if obj.get("a") is None else float(obj["a"]),
            b=None if obj.get("b") is None else float(obj["b"]),
        )


@dataclass(frozen=True, eq=False)
class DataSet:
    z: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)

    def __post_init__(self):
        z = np.ascontiguousarray(self.z, dtype=float)
        y = np.ascontiguousarray(self.y, dtype=float)
        if z.ndim != 1 or y.ndim != 1 or z.shape != y.shape:
            raise ValueError("z and y must be 1-d vectors of equal length")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(y))):
            raise ValueError("data contain non-finite entries")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.z.shape[0]

    def __repr__(self):
        return f"DataSet(n={len(self)})"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("z,y\n")
        for zi, yi in zip(self.z.tolist(), self.y.tolist()):
            buf.write(f"{zi!r},{yi!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> DataSet:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["z", "y"]:
            raise ValueError("DataSet CSV must have header 'z,y'")
        z, y = [], []
        for row in reader:
            z.append(float(row["z"]))
            y.append(float(row["y"]))
        return cls(np.array(z), np.array(y))


def regression_mean(config: ModelConfig, z):
    """``alpha0`` on ``z <= zeta0``, ``beta0`` beyond; works on scalars and arrays."""
    out = np.where(np.asarray(z) <= config.zeta0, config.alpha0, config.beta0)
    return float(out) if out.ndim == 0 else out


def generate(config: ModelConfig, n: int, stream: RandomStream) -> DataSet:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    z = randdist.sample(config.covariate, stream, n)
    eps = randdist.sample(config.error, stream, n)
    return DataSet(z, regression_mean(config, z) + eps)


def study_models(alpha0=-1.0, beta0=1.0, zeta0=0.0) -> dict[str, ModelConfig]:
    """The four (covariate, error) pairs of the simulation study, keyed by short name."""
    scaled_beta = randdist.ScaledBeta(4.0, 6.0, 4.0, -2.0)
    pairs = {
        "normal_normal": (randdist.Normal(0.0, 2.0), randdist.Normal(0.0, 1.0)),
        "beta_normal": (scaled_beta, randdist.Normal(0.0, 1.0)),
        "beta_uniform": (scaled_beta, randdist.Uniform(-1.0, 1.0)),
        "beta_gamma": (scaled_beta, randdist.ShiftedGamma(4.0, 2.0, -2.0)),
    }
    return {
        name: ModelConfig.with_default_interval(cov, err, alpha0, beta0, zeta0)
        for name, (cov, err) in pairs.items()
    }


def variance_table_model() -> ModelConfig:
    """Standard normal covariate and error with jump -1 -> 1 at 0."""
    return ModelConfig.with_default_interval(randdist.Normal(0.0, 1.0), randdist.Normal(0.0, 1.0))
