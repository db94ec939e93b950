"""Bootstrap schemes for the change-point root and their root samples.

Four ways of generating a bootstrap sample from the data and its fit:

* ``ecdf``: n pairs drawn with replacement;
* ``residual`` (fixed-design, "FDR"): covariates kept, centered residuals
  resampled onto the fitted stump;
* ``smoothed``: covariates drawn from a Gaussian kernel density estimate,
  centered residuals drawn independently;
* ``moon``: m = ceil(n**gamma) pairs drawn with replacement.

Replicate ``k`` of :func:`bootstrap_roots` draws from the stream at
``key.child("boot", k)``, so results do not depend on evaluation order.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from .estimator import FitResult, fit_batch
from .model import DataSet
from .randdist import RandomStream, StreamKey, derive_stream

KINDS = ("ecdf", "residual", "smoothed", "moon")
DEFAULT_MOON_EXPONENTS = (4 / 5, 9 / 10, 14 / 15)


class ZeroSpread(ValueError):
    pass


def _ceil(x: float) -> int:
    # absorb binary representation error, e.g. 32**0.8 == 16.000000000000004
    return math.ceil(round(x, 9))


@dataclass(frozen=True)
class BootstrapScheme:
    kind: str
    exponent: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme {self.kind!r}; expected one of {KINDS}")
        if self.kind == "moon":
            if self.exponent is None or not 0.0 < self.exponent < 1.0:
                raise ValueError(f"m-out-of-n exponent must lie in (0, 1), got {self.exponent}")
        elif self.exponent is not None:
            raise ValueError(f"scheme {self.kind!r} takes no exponent")

    @property
    def name(self) -> str:
        if self.kind == "moon":
            return f"moon:{Fraction(self.exponent).limit_denominator(1000)}"
        return self.kind

    def resample_size(self, n: int) -> int:
        if self.kind == "moon":
            return _ceil(n**self.exponent)
        return n

    @classmethod
    def parse(cls, text: str) -> BootstrapScheme:
        """Parse ``ecdf``, ``residual`` (alias ``fdr``), ``smoothed`` or ``moon:<gamma>``.

        ``gamma`` may be a decimal or a fraction, e.g. ``moon:0.8`` or ``moon:14/15``.
        """
        text = text.strip().lower()
        if text == "fdr":
            return cls("residual")
        if text.startswith("moon:"):
            return cls("moon", float(Fraction(text[5:])))
        return cls(text)


ECDF = BootstrapScheme("ecdf")
RESIDUAL = BootstrapScheme("residual")
SMOOTHED = BootstrapScheme("smoothed")


def m_out_of_n(exponent: float) -> BootstrapScheme:
    return BootstrapScheme("moon", exponent)


# ---------------------------------------------------------------------------
# kernel density estimate
# ---------------------------------------------------------------------------


def bandwidth_normal_reference(z) -> float:
    """Normal reference bandwidth ``1.06 * sd(z) * n**(-1/5)`` for a Gaussian kernel."""
    z = np.asarray(z, dtype=float)
    if z.size < 2:
        raise ZeroSpread(f"need at least two points for a bandwidth, got {z.size}")
    sd = float(np.std(z, ddof=1))
    if not sd > 0:
        raise ZeroSpread("covariate sample has zero spread")
    return 1.06 * sd * z.size ** (-0.2)


@dataclass(frozen=True, eq=False)
class KdeModel:
    centers: np.ndarray = field(repr=False)
    bandwidth: float

    def __post_init__(self):
        object.__setattr__(self, "centers", np.asarray(self.centers, dtype=float))
        if self.centers.size == 0:
            raise ValueError("KDE needs at least one center")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")

    @classmethod
    def from_data(cls, z) -> KdeModel:
        return cls(np.asarray(z, dtype=float), bandwidth_normal_reference(z))

    def _mix(self, x, kernel):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        out = np.empty(flat.size)
        step = max(1, (1 << 20) // self.centers.size)
        for s in range(0, flat.size, step):
            u = (flat[s : s + step, None] - self.centers[None, :]) / self.bandwidth
            out[s : s + step] = kernel(u).mean(axis=1)
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    def pdf(self, x):
        return self._mix(x, lambda u: np.exp(-0.5 * u * u) / math.sqrt(2 * math.pi)) / self.bandwidth

    def cdf(self, x):
        return self._mix(x, special.ndtr)

    def sample(self, stream: RandomStream, size=None):
        """A uniformly chosen center plus ``bandwidth`` times a standard normal draw."""
        idx = stream.integers(0, self.centers.size, size)
        return self.centers[idx] + self.bandwidth * stream.standard_normal(size)


def kde_pdf(kde: KdeModel, x):
    return kde.pdf(x)


def kde_cdf(kde: KdeModel, x):
    return kde.cdf(x)


def kde_sample(kde: KdeModel, stream: RandomStream, size=None):
    return kde.sample(stream, size)


# ---------------------------------------------------------------------------
# resampling
# ---------------------------------------------------------------------------


def _stump(theta, z):
    return np.where(z <= theta.zeta, theta.alpha, theta.beta)


def _draw(data: DataSet, fit: FitResult, scheme: BootstrapScheme, stream, kde):
    n = len(data)
    if scheme.kind in ("ecdf", "moon"):
        idx = stream.integers(0, n, scheme.resample_size(n))
        return data.z[idx], data.y[idx]
    eps = fit.centered_residuals
    if scheme.kind == "residual":
        z = data.z
    else:
        z = kde.sample(stream, n)
    e = eps[stream.integers(0, n, n)]
    return z, _stump(fit.theta_hat, z) + e


def resample(data: DataSet, fit: FitResult, scheme: BootstrapScheme, stream: RandomStream) -> DataSet:
    kde = KdeModel.from_data(data.z) if scheme.kind == "smoothed" else None
    z, y = _draw(data, fit, scheme, stream, kde)
    return DataSet(np.array(z), y)


@dataclass(frozen=True, eq=False)
class RootSamples:
    """Bootstrap roots ``m (zeta* - zeta_hat)``, ``sqrt(m) (alpha* - alpha_hat)``, ``sqrt(m) (beta* - beta_hat)``."""

    scheme: BootstrapScheme
    m: int
    zeta_roots: np.ndarray = field(repr=False)
    alpha_roots: np.ndarray = field(repr=False)
    beta_roots: np.ndarray = field(repr=False)

    @property
    def B(self) -> int:
        return int(self.zeta_roots.size)

    def for_target(self, target: str) -> np.ndarray:
        return {"zeta": self.zeta_roots, "alpha": self.alpha_roots, "beta": self.beta_roots}[target]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("rep,zeta_root,alpha_root,beta_root\n")
        cols = zip(self.zeta_roots.tolist(), self.alpha_roots.tolist(), self.beta_roots.tolist())
        for k, (zr, ar, br) in enumerate(cols):
            buf.write(f"{k},{zr!r},{ar!r},{br!r}\n")
        return buf.getvalue()


def bootstrap_roots(data: DataSet, fit: FitResult, scheme: BootstrapScheme, B: int | None,
                    a: float, b: float, key: StreamKey) -> RootSamples:
    """Draw ``B`` bootstrap samples (default ``4n``), refit each on ``[a, b]`` and return the roots."""
    n = len(data)
    if B is None:
        B = 4 * n
    if B < 1:
        raise ValueError(f"need B >= 1, got {B}")
    m = scheme.resample_size(n)
    kde = KdeModel.from_data(data.z) if scheme.kind == "smoothed" else None
    zs = np.empty((B, m))
    ys = np.empty((B, m))
    for k in range(B):
        zs[k], ys[k] = _draw(data, fit, scheme, derive_stream(key.child("boot", k)), kde)
    zeta, alpha, beta = fit_batch(zs, ys, a, b)
    t = fit.theta_hat
    root_m = math.sqrt(m)
    return RootSamples(
        scheme=scheme,
        m=m,
        zeta_roots=m * (zeta - t.zeta),
        alpha_roots=root_m * (alpha - t.alpha),
        beta_roots=root_m * (beta - t.beta),
    )
