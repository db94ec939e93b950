"""Simulation experiments: coverage tables, sampling distributions and histogram bundles.

Every replication derives its streams from ``(master_seed, n, rep)``; within
a replication all schemes see the same data set (a paired design) and each
scheme bootstraps from its own sub-stream.  Results are aggregated by index,
so reports are identical for any worker count.
"""

from __future__ import annotations

import io
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .estimator import fit, fit_batch
from .inference import covers, length, root_ci
from .limitlaw import limit_spec_from_model, sample_limit
from .model import ModelConfig, generate
from .parallel import map_indexed
from .randdist import StreamKey, derive_stream
from .resampling import (
    DEFAULT_MOON_EXPONENTS,
    ECDF,
    RESIDUAL,
    SMOOTHED,
    BootstrapScheme,
    bootstrap_roots,
    m_out_of_n,
)

log = logging.getLogger(__name__)

DEFAULT_SCHEMES = (ECDF, SMOOTHED, RESIDUAL) + tuple(m_out_of_n(g) for g in DEFAULT_MOON_EXPONENTS)
HISTOGRAM_TAGS = ("asymptotic", "actual", "smoothed", "ecdf", "fdr", "m_out_of_n")


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig
    n_values: tuple[int, ...]
    schemes: tuple[BootstrapScheme, ...] = DEFAULT_SCHEMES
    reps: int = 500
    boot_B: int | str = "4n"
    level: float = 0.95
    master_seed: int = 0

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if not (self.boot_B == "4n" or (isinstance(self.boot_B, int) and self.boot_B >= 1)):
            raise ValueError(f"boot_B must be a positive integer or '4n', got {self.boot_B!r}")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "schemes", tuple(self.schemes))

    def B_for(self, n: int) -> int:
        return 4 * n if self.boot_B == "4n" else int(self.boot_B)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "n_values": list(self.n_values),
            "schemes": [s.name for s in self.schemes],
            "reps": self.reps,
            "boot_B": self.boot_B,
            "level": self.level,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> ExperimentConfig:
        schemes = obj.get("schemes")
        return cls(
            model=ModelConfig.from_dict(obj["model"]),
            n_values=tuple(obj["n_values"]),
            schemes=DEFAULT_SCHEMES if schemes is None else tuple(BootstrapScheme.parse(s) for s in schemes),
            reps=int(obj.get("reps", 500)),
            boot_B=obj.get("boot_B", "4n"),
            level=float(obj.get("level", 0.95)),
            master_seed=int(obj.get("master_seed", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CoverageRow:
    scheme: str
    n: int
    coverage: float
    avg_length: float
    mc_se: float
    reps: int
    boot_B: int
    failed: int = 0


@dataclass
class CoverageReport:
    rows: list[CoverageRow] = field(default_factory=list)

    def row(self, scheme: str, n: int) -> CoverageRow:
        for r in self.rows:
            if r.scheme == scheme and r.n == n:
                return r
        raise KeyError((scheme, n))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("scheme,n,coverage,avg_length,mc_se,reps,boot_B\n")
        for r in self.rows:
            buf.write(f"{r.scheme},{r.n},{r.coverage!r},{r.avg_length!r},{r.mc_se!r},{r.reps},{r.boot_B}\n")
        return buf.getvalue()


def _replicate(cfg: ExperimentConfig, task):
    n, rep = task
    key = StreamKey(cfg.master_seed).child("n", n).child("rep", rep)
    model = cfg.model
    data = generate(model, n, derive_stream(key.child("data")))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fitted = fit(data, model.a, model.b)
    out = []
    for scheme in cfg.schemes:
        try:
            roots = bootstrap_roots(data, fitted, scheme, cfg.B_for(n), model.a, model.b,
                                    key.child(f"scheme:{scheme.name}"))
            ci = root_ci(fitted, roots, n, cfg.level)
        except (ValueError, RuntimeError) as exc:
            log.warning("replication n=%d rep=%d scheme=%s failed: %s", n, rep, scheme.name, exc)
            out.append(None)
            continue
        out.append((covers(ci, model.zeta0), length(ci)))
    return out


def coverage_experiment(cfg: ExperimentConfig, workers: int | None = 1) -> CoverageReport:
    """Coverage proportion and mean length of root intervals for ``zeta0``."""
    tasks = [(n, rep) for n in cfg.n_values for rep in range(cfg.reps)]
    results = map_indexed(partial(_indexed, cfg, tasks), len(tasks), workers)
    report = CoverageReport()
    for n in cfg.n_values:
        per_n = [res for (tn, _), res in zip(tasks, results) if tn == n]
        for j, scheme in enumerate(cfg.schemes):
            ok = [r[j] for r in per_n if r[j] is not None]
            failed = len(per_n) - len(ok)
            if not ok:
                report.rows.append(CoverageRow(scheme.name, n, math.nan, math.nan, math.nan, 0, cfg.B_for(n), failed))
                continue
            cov = sum(c for c, _ in ok) / len(ok)
            avg = math.fsum(w for _, w in ok) / len(ok)
            se = math.sqrt(cov * (1.0 - cov) / len(ok))
            report.rows.append(CoverageRow(scheme.name, n, cov, avg, se, len(ok), cfg.B_for(n), failed))
    return report


def _indexed(cfg, tasks, i):
    return _replicate(cfg, tasks[i])


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HistogramData:
    tag: str
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.tag not in HISTOGRAM_TAGS:
            raise ValueError(f"unknown histogram tag {self.tag!r}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.size == 0:
            raise ValueError("histogram data must be nonempty")
        object.__setattr__(self, "samples", samples)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("tag,value\n")
        for v in self.samples.tolist():
            buf.write(f"{self.tag},{v!r}\n")
        return buf.getvalue()


def _actual_block(model, n, key, block, start):
    rows = range(start, start + block)
    z = np.empty((len(rows), n))
    y = np.empty((len(rows), n))
    for i, r in enumerate(rows):
        d = generate(model, n, derive_stream(key.child("actual", r)))
        z[i], y[i] = d.z, d.y
    zeta, _, _ = fit_batch(z, y, model.a, model.b)
    return n * (zeta - model.zeta0)


def sampling_distribution(model: ModelConfig, n: int, reps: int, key: StreamKey,
                          workers: int | None = 1) -> HistogramData:
    """``reps`` draws of ``n (zeta_hat - zeta0)``, each from a fresh data set."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    block = 100
    starts = list(range(0, reps, block))
    parts = map_indexed(
        partial(_actual_at, model, n, key, block, starts, reps), len(starts), workers, block=1
    )
    return HistogramData("actual", np.concatenate(parts))


def _actual_at(model, n, key, block, starts, reps, i):
    start = starts[i]
    return _actual_block(model, n, key, min(block, reps - start), start)


def figure1_bundle(model: ModelConfig, n: int, reps: int, B: int, key: StreamKey,
                   workers: int | None = 1) -> list[HistogramData]:
    """Samples behind the six histogram panels.

    ``asymptotic`` draws come from the limit law and ``actual`` from ``reps``
    fresh data sets.  The four bootstrap panels all resample one data set of
    size ``n``; the m-out-of-n panel uses ``m = ceil(n**(4/5))``.
    """
    asymptotic = sample_limit(limit_spec_from_model(model), reps, key.child("asymptotic"), "estar", workers)[:, 2]
    out = [HistogramData("asymptotic", asymptotic), sampling_distribution(model, n, reps, key, workers)]
    data = generate(model, n, derive_stream(key.child("figure_data")))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fitted = fit(data, model.a, model.b)
    panels = (("smoothed", SMOOTHED), ("ecdf", ECDF), ("fdr", RESIDUAL), ("m_out_of_n", m_out_of_n(4 / 5)))
    for tag, scheme in panels:
        roots = bootstrap_roots(data, fitted, scheme, B, model.a, model.b, key.child(f"figure:{tag}"))
        out.append(HistogramData(tag, roots.zeta_roots))
    return out


def variance_table_csv(var_e: float, var_tilde: float) -> str:
    """Two-row table of limiting variances for the estimator and the ECDF-bootstrap root."""
    return (
        "random_variable,asymptotic_variance\n"
        f"n(zeta_hat-zeta0),{var_e!r}\n"
        f"n(zeta_star-zeta0),{var_tilde!r}\n"
    )
