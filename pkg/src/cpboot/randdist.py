"""Deterministic random streams and the four distribution families.

Streams are keyed by a master seed plus a path of ``(label, index)`` pairs,
so every logical task (replication, bootstrap draw, purpose) owns an
independent generator regardless of execution order::

    key = StreamKey(2024).child("rep", 17).child("boot", 3)
    rng = derive_stream(key)

Keys map onto :class:`numpy.random.SeedSequence` spawn keys and drive a
counter-based :class:`numpy.random.Philox` bit generator.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

RandomStream = np.random.Generator

_MASK64 = (1 << 64) - 1


def _label_word(label: str) -> int:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class StreamKey:
    """Address of a random stream: master seed plus a labelled path."""

    master_seed: int
    path: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for label, index in self.path:
            if index < 0:
                raise ValueError(f"path index must be non-negative, got {index} for {label!r}")

    def child(self, label: str, index: int = 0) -> StreamKey:
        return StreamKey(self.master_seed, self.path + ((label, int(index)),))

    def spawn_key(self) -> tuple[int, ...]:
        words: list[int] = []
        for label, index in self.path:
            words.append(_label_word(label))
            # indices may exceed 32 bits; split so SeedSequence sees plain words
            words.append(index & 0xFFFFFFFF)
            words.append(index >> 32)
        return tuple(words)


def derive_stream(key: StreamKey) -> RandomStream:
    """Return a fresh generator for ``key``; identical keys give identical draws."""
    seq = np.random.SeedSequence(entropy=key.master_seed & _MASK64, spawn_key=key.spawn_key())
    return np.random.Generator(np.random.Philox(seq))


# ---------------------------------------------------------------------------
# distribution families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Normal:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"Normal sigma must be positive and finite, got {self.sigma}")

    def moments(self):
        return self.mu, self.sigma**2

    def support(self):
        return -math.inf, math.inf

    def pdf(self, x):
        u = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * u * u) / (self.sigma * math.sqrt(2 * math.pi))

    def cdf(self, x):
        return special.ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def sample(self, stream, size=None):
        return self.mu + self.sigma * stream.standard_normal(size)

    def to_dict(self):
        return {"type": "normal", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class Uniform:
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"Uniform needs lo < hi, got ({self.lo}, {self.hi})")

    def moments(self):
        return 0.5 * (self.lo + self.hi), (self.hi - self.lo) ** 2 / 12.0

    def support(self):
        return self.lo, self.hi

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def sample(self, stream, size=None):
        return self.lo + (self.hi - self.lo) * stream.random(size)

    def to_dict(self):
        return {"type": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ScaledBeta:
    """``scale * Beta(a, b) + shift``; the experiments use ``4 B(4, 6) - 2``."""

    a: float
    b: float
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"Beta shape parameters must be positive, got ({self.a}, {self.b})")
        if self.scale == 0:
            raise ValueError("ScaledBeta scale must be nonzero")

    def moments(self):
        s = self.a + self.b
        mean = self.a / s
        var = self.a * self.b / (s * s * (s + 1.0))
        return self.scale * mean + self.shift, self.scale**2 * var

    def support(self):
        ends = sorted((self.shift, self.shift + self.scale))
        return ends[0], ends[1]

    def _unit(self, x):
        return (np.asarray(x, dtype=float) - self.shift) / self.scale

    def pdf(self, x):
        t = self._unit(x)
        inside = (t > 0) & (t < 1)
        tc = np.where(inside, t, 0.5)
        logd = (
            (self.a - 1) * np.log(tc)
            + (self.b - 1) * np.log1p(-tc)
            - special.betaln(self.a, self.b)
        )
        return np.where(inside, np.exp(logd) / abs(self.scale), 0.0)

    def cdf(self, x):
        t = np.clip(self._unit(x), 0.0, 1.0)
        c = special.betainc(self.a, self.b, t)
        return c if self.scale > 0 else 1.0 - c

    def sample(self, stream, size=None):
        return self.shift + self.scale * stream.beta(self.a, self.b, size)

    def to_dict(self):
        return {"type": "scaled_beta", "a": self.a, "b": self.b, "scale": self.scale, "shift": self.shift}


@dataclass(frozen=True)
class ShiftedGamma:
    """``Gamma(shape, rate) + shift``; rate parametrisation, so ``Gamma(4, 2)`` has mean 2."""

    shape: float
    rate: float
    shift: float = 0.0

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise ValueError(f"Gamma shape and rate must be positive, got ({self.shape}, {self.rate})")

    def moments(self):
        return self.shape / self.rate + self.shift, self.shape / self.rate**2

    def support(self):
        return self.shift, math.inf

    def pdf(self, x):
        t = np.asarray(x, dtype=float) - self.shift
        inside = t > 0
        tc = np.where(inside, t, 1.0)
        logd = (
            self.shape * math.log(self.rate)
            + (self.shape - 1) * np.log(tc)
            - self.rate * tc
            - special.gammaln(self.shape)
        )
        return np.where(inside, np.exp(logd), 0.0)

    def cdf(self, x):
        t = np.maximum(np.asarray(x, dtype=float) - self.shift, 0.0)
        return special.gammainc(self.shape, self.rate * t)

    def sample(self, stream, size=None):
        return self.shift + stream.gamma(self.shape, 1.0 / self.rate, size)

    def to_dict(self):
        return {"type": "shifted_gamma", "shape": self.shape, "rate": self.rate, "shift": self.shift}


DistributionSpec = Union[Normal, Uniform, ScaledBeta, ShiftedGamma]

_FAMILIES = {
    "normal": Normal,
    "uniform": Uniform,
    "scaled_beta": ScaledBeta,
    "shifted_gamma": ShiftedGamma,
}


def dist_from_dict(obj: dict) -> DistributionSpec:
    """Build a distribution from its tagged-object form, e.g. ``{"type": "normal", "mu": 0, "sigma": 2}``."""
    obj = dict(obj)
    try:
        family = _FAMILIES[obj.pop("type")]
    except KeyError as exc:
        raise ValueError(f"unknown or missing distribution type in {obj!r}") from exc
    return family(**{k: float(v) for k, v in obj.items()})


def sample(dist: DistributionSpec, stream: RandomStream, size=None):
    return dist.sample(stream, size)


def moments(dist: DistributionSpec) -> tuple[float, float]:
    mean, var = dist.moments()
    return float(mean), float(var)


def pdf(dist: DistributionSpec, x):
    out = dist.pdf(x)
    return float(out) if np.ndim(out) == 0 else out


def cdf(dist: DistributionSpec, x):
    out = dist.cdf(x)
    return float(out) if np.ndim(out) == 0 else out


def quantile_by_bisection(dist: DistributionSpec, p: float, tol: float = 1e-12) -> float:
    """Invert ``cdf`` numerically; used only to place default search intervals."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    lo, hi = dist.support()
    mean, var = moments(dist)
    spread = 10.0 * math.sqrt(var) + 1.0
    lo = mean - spread if math.isinf(lo) else lo
    hi = mean + spread if math.isinf(hi) else hi
    while cdf(dist, lo) > p:
        lo -= spread
    while cdf(dist, hi) < p:
        hi += spread
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if cdf(dist, mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
