"""Least squares fitting of the stump model with the smallest-argmax rule.

The criterion ``M_n(alpha, beta, zeta) = -mean((y - stump(z))**2)`` is
piecewise constant and right-continuous in ``zeta`` with jumps at the
observed ``z``, so it suffices to search the finite candidate set
``{a} U {z_i : a < z_i <= b}``.  For each candidate the inner maximisation
over ``(alpha, beta)`` is solved by the side means.

:func:`fit` screens all candidates at once with prefix sums and then
re-evaluates every candidate within rounding distance of the best one with
the same exact routine that :func:`fit_bruteforce` uses on *all*
candidates.  Both therefore return bit-identical results.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import DataSet

_EPS = np.finfo(float).eps


class EmptyData(ValueError):
    pass


class DegenerateInterval(ValueError):
    pass


@dataclass(frozen=True)
class Theta:
    alpha: float
    beta: float
    zeta: float

    def as_tuple(self):
        return self.alpha, self.beta, self.zeta


@dataclass(frozen=True, eq=False)
class FitResult:
    theta_hat: Theta
    objective: float
    residuals: np.ndarray = field(repr=False)
    centered_residuals: np.ndarray = field(repr=False)
    candidate_count: int

    def to_dict(self) -> dict:
        t = self.theta_hat
        return {"alpha": t.alpha, "beta": t.beta, "zeta": t.zeta, "objective": self.objective}


# ---------------------------------------------------------------------------
# exact evaluation (shared by the fast path and the oracle)
# ---------------------------------------------------------------------------


def _side_mean(values: np.ndarray) -> float:
    # empty side: coefficient is arbitrary, use 0 for determinism
    if values.size == 0:
        return 0.0
    return math.fsum(values.tolist()) / values.size


def _criterion(z, y, alpha, beta, zeta) -> float:
    r = y - np.where(z <= zeta, alpha, beta)
    sse = math.fsum((r * r).tolist())
    return -(sse / y.size) if sse else 0.0


def _stump_at(z, y, zeta):
    left = z <= zeta
    alpha = _side_mean(y[left])
    beta = _side_mean(y[~left])
    return alpha, beta, _criterion(z, y, alpha, beta, zeta)


def _pick_smallest_argmax(z, y, zetas):
    """Scan ``zetas`` in increasing order; strict improvement keeps the first maximiser."""
    best = None
    for zeta in zetas:
        alpha, beta, value = _stump_at(z, y, zeta)
        if best is None or value > best[2]:
            best = (alpha, beta, value, zeta)
    return best


def _check(data: DataSet, a: float, b: float):
    if len(data) == 0:
        raise EmptyData("cannot fit an empty data set")
    if not a < b:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    if not (np.any(data.z < a) and np.any(data.z > b)):
        warnings.warn("search interval does not leave observations on both sides", stacklevel=3)


def candidates(z: np.ndarray, a: float, b: float) -> np.ndarray:
    """Sorted candidate change points ``{a} U {distinct z_i in (a, b]}``."""
    inner = np.unique(z[(z > a) & (z <= b)])
    return np.concatenate(([float(a)], inner))


def objective(data: DataSet, theta: Theta) -> float:
    """``-(1/n) * sum (y_i - alpha 1{z_i <= zeta} - beta 1{z_i > zeta})**2``."""
    if len(data) == 0:
        raise EmptyData("objective of an empty data set")
    return _criterion(data.z, data.y, theta.alpha, theta.beta, theta.zeta)


def residuals(data: DataSet, theta: Theta):
    """Raw residuals from the stump ``theta`` and their mean-centered version."""
    raw = data.y - np.where(data.z <= theta.zeta, theta.alpha, theta.beta)
    centered = raw - math.fsum(raw.tolist()) / raw.size
    return raw, centered


def _result(data, alpha, beta, value, zeta, count) -> FitResult:
    theta = Theta(float(alpha), float(beta), float(zeta))
    raw, centered = residuals(data, theta)
    return FitResult(theta, value, raw, centered, int(count))


def fit_bruteforce(data: DataSet, a: float, b: float) -> FitResult:
    """Reference implementation: one fresh O(n) pass per candidate."""
    _check(data, a, b)
    cands = candidates(data.z, a, b)
    alpha, beta, value, zeta = _pick_smallest_argmax(data.z, data.y, cands.tolist())
    return _result(data, alpha, beta, value, zeta, cands.size)


# ---------------------------------------------------------------------------
# vectorised profile
# ---------------------------------------------------------------------------


def _profile(zs, ys, a, b):
    """Between-group gain for every candidate of every row.

    ``zs``/``ys`` are row-sorted by ``z`` with shape (rows, m).  Column 0 is the
    candidate ``a``; column ``i + 1`` splits after sorted position ``i``.
    Maximising the gain is equivalent to maximising ``M_n``.
    """
    rows, m = zs.shape
    mean = ys.mean(axis=1, keepdims=True)
    yc = ys - mean
    cs = np.cumsum(yc, axis=1)
    total = cs[:, -1:]
    nl = np.arange(1, m + 1, dtype=float)
    nr = m - nl
    right = np.zeros_like(cs)
    right[:, :-1] = (total - cs[:, :-1]) ** 2 / nr[:-1]
    gain = cs * cs / nl + right

    last_of_run = np.ones(zs.shape, dtype=bool)
    last_of_run[:, :-1] = zs[:, 1:] != zs[:, :-1]
    valid = (zs > a) & (zs <= b) & last_of_run

    n_left_a = np.count_nonzero(zs <= a, axis=1)
    idx = np.arange(rows)
    s_left_a = np.where(n_left_a > 0, cs[idx, np.maximum(n_left_a - 1, 0)], 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        gain_a = np.where(n_left_a > 0, s_left_a**2 / n_left_a, 0.0) + np.where(
            n_left_a < m, (total[:, 0] - s_left_a) ** 2 / (m - n_left_a), 0.0
        )

    g = np.empty((rows, m + 1))
    g[:, 0] = gain_a
    g[:, 1:] = np.where(valid, gain, -np.inf)
    # bound on rounding in both the prefix-sum gain and the exact criterion
    tol = 16.0 * _EPS * m * (math.sqrt(m) * (yc * yc).sum(axis=1) + (ys * ys).sum(axis=1))
    return g, tol, n_left_a


def _candidate_value(zs_row, col, a):
    return float(a) if col == 0 else float(zs_row[col - 1])


def fit(data: DataSet, a: float, b: float) -> FitResult:
    """Smallest-argmax least squares fit over ``R^2 x [a, b]`` in O(n log n)."""
    _check(data, a, b)
    order = np.argsort(data.z, kind="stable")
    zs = data.z[order][None, :]
    ys = data.y[order][None, :]
    g, tol, _ = _profile(zs, ys, a, b)
    g = g[0]
    near = np.flatnonzero(g >= g.max() - tol[0])
    zetas = [_candidate_value(zs[0], c, a) for c in near]
    alpha, beta, value, zeta = _pick_smallest_argmax(zs[0], ys[0], zetas)
    count = int(np.count_nonzero(np.isfinite(g)))
    return _result(data, alpha, beta, value, zeta, count)


def fit_batch(z: np.ndarray, y: np.ndarray, a: float, b: float, chunk_cells: int = 1 << 18):
    """Fit many data sets of equal size at once.

    ``z`` and ``y`` have shape (rows, m).  Returns arrays ``(zeta, alpha, beta)``.
    Each row agrees exactly with :func:`fit` on the same data.
    """
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    if z.ndim != 2 or z.shape != y.shape:
        raise ValueError("fit_batch expects two 2-d arrays of equal shape")
    rows, m = z.shape
    if m == 0:
        raise EmptyData("cannot fit empty rows")
    if not a < b:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    zeta = np.empty(rows)
    alpha = np.empty(rows)
    beta = np.empty(rows)
    step = max(1, chunk_cells // m)
    for start in range(0, rows, step):
        sl = slice(start, min(rows, start + step))
        zeta[sl], alpha[sl], beta[sl] = _fit_rows(z[sl], y[sl], a, b)
    return zeta, alpha, beta


def _fit_rows(z, y, a, b):
    rows, m = z.shape
    order = np.argsort(z, axis=1, kind="stable")
    zs = np.take_along_axis(z, order, axis=1)
    ys = np.take_along_axis(y, order, axis=1)
    g, tol, n_left_a = _profile(zs, ys, a, b)
    best = g.max(axis=1)
    col = np.argmax(g, axis=1)
    idx = np.arange(rows)

    n_left = np.where(col == 0, n_left_a, col)
    zeta = np.where(col == 0, a, zs[idx, np.maximum(col - 1, 0)])
    alpha = np.empty(rows)
    beta = np.empty(rows)
    for r in range(rows):
        k = int(n_left[r])
        alpha[r] = _side_mean(ys[r, :k])
        beta[r] = _side_mean(ys[r, k:])

    ambiguous = np.count_nonzero(g >= (best - tol)[:, None], axis=1) > 1
    for r in np.flatnonzero(ambiguous):
        near = np.flatnonzero(g[r] >= best[r] - tol[r])
        zetas = [_candidate_value(zs[r], c, a) for c in near]
        alpha[r], beta[r], _, zeta[r] = _pick_smallest_argmax(zs[r], ys[r], zetas)
    return zeta, alpha, beta
