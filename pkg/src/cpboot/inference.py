"""Confidence intervals by inverting bootstrap roots."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .estimator import FitResult
from .resampling import RootSamples

TARGETS = ("zeta", "alpha", "beta")


class EmptySamples(ValueError):
    pass


class InvalidLevel(ValueError):
    pass


@dataclass(frozen=True)
class ConfidenceInterval:
    lo: float
    hi: float
    level: float
    target: str = "zeta"

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    def to_dict(self) -> dict:
        return {"target": self.target, "lo": self.lo, "hi": self.hi, "level": self.level}


def empirical_quantile(samples, p: float) -> float:
    """Order-statistic quantile ``x_(ceil(p B))``, with ``x_(1)`` at ``p = 0``.

    ``p * B`` is rounded to 9 decimals before the ceiling so that, e.g.,
    ``0.025 * 800`` selects the 20th order statistic rather than the 21st.
    """
    x = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    if x.size == 0:
        raise EmptySamples("quantile of an empty sample")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    k = max(1, math.ceil(round(p * x.size, 9)))
    return float(x[k - 1])


def interval_from_roots(estimate: float, roots, scale: float, level: float, target: str = "zeta") -> ConfidenceInterval:
    """``[est - q_{1-g/2} / scale, est - q_{g/2} / scale]`` with ``g = 1 - level``."""
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f"level must lie in (0, 1), got {level}")
    gamma = 1.0 - level
    q_hi = empirical_quantile(roots, 1.0 - gamma / 2)
    q_lo = empirical_quantile(roots, gamma / 2)
    return ConfidenceInterval(estimate - q_hi / scale, estimate - q_lo / scale, level, target)


def root_ci(fit: FitResult, roots: RootSamples, n: int, level: float = 0.95, target: str = "zeta") -> ConfidenceInterval:
    """Invert the bootstrap root distribution into an interval for ``target``.

    Roots are on the resample scale ``m`` but the interval is always formed on
    the data scale: ``n`` for ``zeta`` and ``sqrt(n)`` for ``alpha``/``beta``.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    if roots.B == 0:
        raise EmptySamples("no bootstrap roots")
    if roots.B < 20:
        warnings.warn(f"only {roots.B} bootstrap roots; interval endpoints are extreme order statistics",
                      stacklevel=2)
    scale = float(n) if target == "zeta" else math.sqrt(n)
    estimate = getattr(fit.theta_hat, target)
    return interval_from_roots(estimate, roots.for_target(target), scale, level, target)


def covers(ci: ConfidenceInterval, truth: float) -> bool:
    return ci.lo <= truth <= ci.hi


def length(ci: ConfidenceInterval) -> float:
    return ci.hi - ci.lo


def clip(ci: ConfidenceInterval, a: float, b: float) -> ConfidenceInterval:
    """Clip a ``zeta`` interval to the search range ``[a, b]`` (presentation only)."""
    lo = min(max(ci.lo, a), b)
    hi = max(min(ci.hi, b), a)
    return ConfidenceInterval(lo, hi, ci.level, ci.target)
