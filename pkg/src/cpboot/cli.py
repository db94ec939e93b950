"""Command-line front end: ``cpboot <subcommand> [flags]``.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors
(with a one-line diagnostic on stderr).  Output files are written to a
temporary sibling and renamed into place, so a failed run never leaves a
partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from pathlib import Path

from . import __version__
from .estimator import fit
from .harness import ExperimentConfig, coverage_experiment, figure1_bundle, variance_table_csv
from .inference import TARGETS, clip, root_ci
from .limitlaw import LimitSpec, draws_to_csv, sample_limit, variance_report
from .model import DataSet, ModelConfig, generate
from .parallel import resolve_workers
from .randdist import StreamKey, derive_stream
from .resampling import BootstrapScheme, bootstrap_roots


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _read_json(path):
    return json.loads(Path(path).read_text())


def _read_data(path) -> DataSet:
    return DataSet.from_csv(Path(path).read_text())


def _scheme(text: str) -> BootstrapScheme:
    try:
        return BootstrapScheme.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> None:
    config = ModelConfig.from_dict(_read_json(args.config))
    data = generate(config, args.n, derive_stream(StreamKey(args.seed).child("simulate")))
    write_atomic(args.out, data.to_csv())


def cmd_fit(args) -> None:
    result = fit(_read_data(args.data), args.a, args.b)
    sys.stdout.write(json.dumps(result.to_dict()) + "\n")


def cmd_ci(args) -> None:
    data = _read_data(args.data)
    fitted = fit(data, args.a, args.b)
    B = args.B if args.B is not None else 4 * len(data)
    roots = bootstrap_roots(data, fitted, args.scheme, B, args.a, args.b, StreamKey(args.seed).child("ci"))
    ci = root_ci(fitted, roots, len(data), args.level, args.target)
    if args.clip and args.target == "zeta":
        ci = clip(ci, args.a, args.b)
    payload = ci.to_dict()
    payload.update(scheme=args.scheme.name, m=roots.m, B=roots.B, estimate=getattr(fitted.theta_hat, args.target))
    sys.stdout.write(json.dumps(payload) + "\n")


def cmd_limit_sample(args) -> None:
    spec = LimitSpec.from_dict(_read_json(args.spec))
    draws = sample_limit(spec, args.count, StreamKey(args.seed), args.which, args.threads)
    write_atomic(args.out, draws_to_csv(draws))


def cmd_variance_table(args) -> None:
    spec = LimitSpec.from_dict(_read_json(args.spec))
    var_e, var_t = variance_report(spec, args.count, StreamKey(args.seed), args.threads)
    _emit(variance_table_csv(var_e, var_t), args.out)


def cmd_coverage(args) -> None:
    cfg = ExperimentConfig.from_dict(_read_json(args.config))
    write_atomic(args.out, coverage_experiment(cfg, args.threads).to_csv())


def cmd_figure1(args) -> None:
    obj = _read_json(args.config)
    model = ModelConfig.from_dict(obj["model"])
    key = StreamKey(int(obj.get("master_seed", args.seed)))
    bundle = figure1_bundle(model, int(obj.get("n", 500)), int(obj.get("reps", 1000)),
                            int(obj.get("B", 2000)), key, args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for hist in bundle:
        write_atomic(out / f"{hist.tag}.csv", hist.to_csv())


def _threads(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("--threads must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpboot", description="Bootstrap inference for a regression change point.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    fmt = argparse.ArgumentDefaultsHelpFormatter

    def threads(p):
        p.add_argument("--threads", type=_threads, default=None,
                       help="worker processes (default: $CPBOOT_THREADS or 1); output does not depend on it")

    p = sub.add_parser("simulate", help="generate a data set from a model config", formatter_class=fmt)
    p.add_argument("--config", required=True, help="model config JSON")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True, help="output CSV (z,y)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="least squares fit of a data CSV", formatter_class=fmt)
    p.add_argument("--data", required=True, help="data CSV with header z,y")
    p.add_argument("--a", type=float, required=True, help="left end of the search interval")
    p.add_argument("--b", type=float, required=True, help="right end of the search interval")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ci", help="bootstrap confidence interval", formatter_class=fmt)
    p.add_argument("--data", required=True, help="data CSV with header z,y")
    p.add_argument("--a", type=float, required=True, help="left end of the search interval")
    p.add_argument("--b", type=float, required=True, help="right end of the search interval")
    p.add_argument("--scheme", type=_scheme, default=BootstrapScheme("smoothed"),
                   help="ecdf | residual | smoothed | moon:<gamma>")
    p.add_argument("--B", type=int, default=None, help="bootstrap replicates (default 4n)")
    p.add_argument("--level", type=float, default=0.95, help="confidence level")
    p.add_argument("--target", choices=TARGETS, default="zeta", help="parameter to cover")
    p.add_argument("--clip", action="store_true", help="clip a zeta interval to [a, b]")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("limit-sample", help="draws from the limiting argmax laws", formatter_class=fmt)
    p.add_argument("--spec", required=True, help="limit spec JSON (nuisance parameters or a model config)")
    p.add_argument("--count", type=int, required=True, help="number of draws")
    p.add_argument("--which", choices=("estar", "etilde"), default="estar", help="limit process")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True, help="output CSV (phi1,phi2,phi3)")
    threads(p)
    p.set_defaults(func=cmd_limit_sample)

    p = sub.add_parser("variance-table", help="limiting variances of the estimator and ECDF-bootstrap roots",
                       formatter_class=fmt)
    p.add_argument("--spec", required=True, help="limit spec JSON")
    p.add_argument("--count", type=int, default=20000, help="draws per process")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    threads(p)
    p.set_defaults(func=cmd_variance_table)

    p = sub.add_parser("coverage", help="coverage/length table from an experiment config", formatter_class=fmt)
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output CSV")
    threads(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("figure1", help="histogram samples, one CSV per panel", formatter_class=fmt)
    p.add_argument("--config", required=True, help="JSON with model, n, reps, B, master_seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="master seed when the config has none")
    threads(p)
    p.set_defaults(func=cmd_figure1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "threads"):
            args.threads = resolve_workers(args.threads)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            args.func(args)
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"cpboot {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
