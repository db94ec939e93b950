"""Direct simulation of the limiting argmax laws.

The limit of ``(sqrt(n)(alpha_hat - alpha0), sqrt(n)(beta_hat - beta0), n(zeta_hat - zeta0))``
is the smallest argmax of

    E*(h) = 2 h1 Z1 - h1^2 p + 2 h2 Z2 - h2^2 (1 - p) + C(h3)

where ``p = P(Z <= zeta0)``, ``Z1 ~ N(0, sigma2 p)``, ``Z2 ~ N(0, sigma2 (1 - p))``
and ``C`` is a two-sided compound Poisson process.  With ``d = alpha0 - beta0``
and Poisson processes of rate ``f(zeta0)`` on each side,

* right of 0, the k-th jump adds ``2 d u_k - d^2``;
* left of 0, the k-th jump adds ``-2 d v_k - d^2``,

``u_k, v_k`` i.i.d. copies of the error.  The left process is left-continuous,
so the stretch holding the left partial sum ``V_k`` is ``[-t_{k+1}, -t_k)``.
The first two coordinates maximise in closed form (``Z1 / p`` and
``Z2 / (1 - p)``); only the third needs simulation.

The ECDF-bootstrap limit ``E~*`` multiplies every jump (both its mark and its
drift term) by an independent Poisson(1) count.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import partial
from typing import NamedTuple

import numpy as np

from . import randdist
from .model import ModelConfig
from .parallel import map_indexed
from .randdist import DistributionSpec, RandomStream, StreamKey, derive_stream

MAX_JUMPS = 100_000
TILDE_DEPTH_FACTOR = 3.0


class TruncationOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class LimitSpec:
    f_zeta0: float
    sigma2: float
    p_left: float
    alpha0: float
    beta0: float
    error: DistributionSpec

    def __post_init__(self):
        if not self.f_zeta0 > 0:
            raise ValueError(f"density at the change point must be positive, got {self.f_zeta0}")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if not 0.0 < self.p_left < 1.0:
            raise ValueError(f"p_left must lie in (0, 1), got {self.p_left}")
        if self.alpha0 == self.beta0:
            raise ValueError("alpha0 and beta0 must differ")
        mean, var = randdist.moments(self.error)
        if abs(mean) > 1e-9 or abs(var - self.sigma2) > 1e-9:
            raise ValueError(f"error law moments ({mean}, {var}) do not match (0, sigma2={self.sigma2})")

    @property
    def gap(self) -> float:
        return self.alpha0 - self.beta0

    def to_dict(self) -> dict:
        return {
            "f_zeta0": self.f_zeta0,
            "sigma2": self.sigma2,
            "p_left": self.p_left,
            "alpha0": self.alpha0,
            "beta0": self.beta0,
            "error": self.error.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> LimitSpec:
        """Accept either explicit nuisance parameters or a model config (``covariate`` key)."""
        if "covariate" in obj:
            return limit_spec_from_model(ModelConfig.from_dict(obj))
        return cls(
            f_zeta0=float(obj["f_zeta0"]),
            sigma2=float(obj["sigma2"]),
            p_left=float(obj["p_left"]),
            alpha0=float(obj["alpha0"]),
            beta0=float(obj["beta0"]),
            error=randdist.dist_from_dict(obj["error"]),
        )


class LimitDraw(NamedTuple):
    phi1: float
    phi2: float
    phi3: float


def limit_spec_from_model(config: ModelConfig) -> LimitSpec:
    return LimitSpec(
        f_zeta0=randdist.pdf(config.covariate, config.zeta0),
        sigma2=randdist.moments(config.error)[1],
        p_left=randdist.cdf(config.covariate, config.zeta0),
        alpha0=config.alpha0,
        beta0=config.beta0,
        error=config.error,
    )


def stop_depth(spec: LimitSpec, tilde: bool = False) -> float:
    """Deficit below the running maximum after which a side walk is abandoned."""
    g = abs(spec.gap)
    depth = 30.0 * (g * g + 4.0 * math.sqrt(spec.sigma2) * g)
    return depth * TILDE_DEPTH_FACTOR if tilde else depth


def _walk(spec: LimitSpec, rng: RandomStream, mark_coef: float, tilde: bool, depth: float):
    """Jump times and partial sums of one side, stopped once ``value <= running max - depth``.

    Draw order (gaps, marks, multipliers per chunk, chunk sizes 64, 128, ...)
    does not depend on ``depth``, so deeper truncation only appends jumps.
    """
    drift = spec.gap * spec.gap
    scale = 1.0 / spec.f_zeta0
    times, values = [], []
    t0 = v0 = peak = 0.0
    used = 0
    chunk = 64
    while True:
        gaps = rng.exponential(scale, chunk)
        marks = spec.error.sample(rng, chunk)
        if tilde:
            mult = rng.poisson(1.0, chunk).astype(float)
            inc = mark_coef * marks * mult - drift * mult
        else:
            inc = mark_coef * marks - drift
        t = np.cumsum(np.concatenate(([t0], gaps)))[1:]
        v = np.cumsum(np.concatenate(([v0], inc)))[1:]
        peaks = np.maximum.accumulate(np.concatenate(([peak], v)))[1:]
        stop = np.flatnonzero(v <= peaks - depth)
        if stop.size:
            k = stop[0] + 1
            times.append(t[:k])
            values.append(v[:k])
            used += k
            break
        times.append(t)
        values.append(v)
        used += chunk
        if used >= MAX_JUMPS:
            raise TruncationOverflow(f"side walk exceeded {MAX_JUMPS} jumps without settling")
        t0, v0, peak = t[-1], v[-1], peaks[-1]
        chunk = min(2 * chunk, 4096)
    return np.concatenate(times), np.concatenate(values)


def two_sided_sargmax(left_times, left_values, right_times, right_values):
    """Smallest maximiser of the piecewise-constant two-sided process.

    ``left_values[k-1]`` is the partial sum after ``k`` left jumps and holds on
    ``[-left_times[k], -left_times[k-1])``; the level-0 stretch is
    ``[-left_times[0], right_times[0])``.  ``right_values[k-1]`` holds on
    ``[right_times[k-1], right_times[k])``.  Returns ``(argmax, max_value)``;
    ties resolve to the leftmost stretch.
    """
    left_levels = np.concatenate(([0.0], np.asarray(left_values, dtype=float)[:-1]))
    right_values = np.asarray(right_values, dtype=float)
    best = left_levels.max()
    if right_values.size:
        best = max(best, right_values.max())
    hits = np.flatnonzero(left_levels == best)
    if hits.size:
        return -float(left_times[hits[-1]]), float(best)
    k = np.flatnonzero(right_values == best)[0]
    return float(right_times[k]), float(best)


class LimitPaths(NamedTuple):
    draw: LimitDraw
    max_value: float
    left_times: np.ndarray
    left_values: np.ndarray
    right_times: np.ndarray
    right_values: np.ndarray


def simulate_paths(spec: LimitSpec, stream: RandomStream, tilde: bool = False,
                   depth_scale: float = 1.0, swap_mark_signs: bool = False) -> LimitPaths:
    """One draw together with the simulated side walks (for diagnostics).

    ``swap_mark_signs`` exchanges the mark coefficients of the two sides; the
    two conventions agree whenever the error law is symmetric.
    """
    p = spec.p_left
    g1 = stream.normal(0.0, math.sqrt(spec.sigma2 * p))
    g2 = stream.normal(0.0, math.sqrt(spec.sigma2 * (1.0 - p)))
    left_rng, right_rng = stream.spawn(2)
    depth = stop_depth(spec, tilde) * depth_scale
    right_coef = 2.0 * spec.gap
    left_coef = -right_coef
    if swap_mark_signs:
        left_coef, right_coef = right_coef, left_coef
    lt, lv = _walk(spec, left_rng, left_coef, tilde, depth)
    rt, rv = _walk(spec, right_rng, right_coef, tilde, depth)
    phi3, top = two_sided_sargmax(lt, lv, rt, rv)
    return LimitPaths(LimitDraw(g1 / p, g2 / (1.0 - p), phi3), top, lt, lv, rt, rv)


def sample_E_star(spec: LimitSpec, stream: RandomStream, **kwargs) -> LimitDraw:
    """Smallest argmax of ``E*``: a draw from the limit law of the least squares estimator."""
    return simulate_paths(spec, stream, tilde=False, **kwargs).draw


def sample_E_tilde_star(spec: LimitSpec, stream: RandomStream, **kwargs) -> LimitDraw:
    """Smallest argmax of ``E~*``: the unconditional limit of the ECDF-bootstrap root."""
    return simulate_paths(spec, stream, tilde=True, **kwargs).draw


WHICH = ("estar", "etilde")


def _one(spec, key, which, depth_scale, swap_mark_signs, i):
    stream = derive_stream(key.child(which, i))
    paths = simulate_paths(spec, stream, tilde=(which == "etilde"), depth_scale=depth_scale,
                           swap_mark_signs=swap_mark_signs)
    return paths.draw


def sample_limit(spec: LimitSpec, count: int, key: StreamKey, which: str = "estar",
                 workers: int | None = 1, depth_scale: float = 1.0,
                 swap_mark_signs: bool = False) -> np.ndarray:
    """``count`` draws as an array of shape (count, 3); draw ``i`` uses ``key.child(which, i)``."""
    if which not in WHICH:
        raise ValueError(f"which must be 'estar' or 'etilde', got {which!r}")
    task = partial(_one, spec, key, which, depth_scale, swap_mark_signs)
    draws = map_indexed(task, count, workers)
    return np.array(draws, dtype=float).reshape(count, 3)


def variance_report(spec: LimitSpec, count: int, key: StreamKey, workers: int | None = 1):
    """Sample variances of ``phi3`` under ``E*`` and ``E~*`` from ``count`` draws each."""
    if count < 1000:
        raise ValueError(f"variance_report needs count >= 1000, got {count}")
    var_e = float(np.var(sample_limit(spec, count, key, "estar", workers)[:, 2], ddof=1))
    var_t = float(np.var(sample_limit(spec, count, key, "etilde", workers)[:, 2], ddof=1))
    return var_e, var_t


def draws_to_csv(draws: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("phi1,phi2,phi3\n")
    for p1, p2, p3 in draws.tolist():
        buf.write(f"{p1!r},{p2!r},{p3!r}\n")
    return buf.getvalue()
