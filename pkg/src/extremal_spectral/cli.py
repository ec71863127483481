"""Command-line entry point: simulate, cluster, screeplot and benchmark.

Settings come from built-in defaults, then an optional ``key=value`` config
file, then command-line flags (flags win).
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import io
from .benchmark import DEFAULT_LADDER, METHODS, ModelSetup, ladder_cells, run_benchmark
from .cluster import EIGENSOLVERS, choose_k_n, screeplot, spectral_cluster
from .errors import InvalidParameterError, NumericalFailure
from .extremal import marginal_rank_transform, select_extremes
from .variates import EXAMPLE_LOADINGS, MA3_COEFFS, FactorModelSpec, RandomStream, simulate_lfm, simulate_ma_embedding

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

DEFAULTS = {
    "seed": 0, "model": "lfm", "input": None, "alpha": 1.0, "sigma": 0.0, "A": None, "coeffs": None,
    "embed_dim": 2, "n": 25000, "beta": None, "nn": None, "tau": 5.0, "s": 1.0, "m": 2,
    "mode": "symmetric", "rank_transform": False, "reps": 10, "out": ".", "eigensolver": "lapack",
    "workers": 1,
}
MODELS = ("lfm", "lfm-noisy", "ma", "csv")
_INT = {"seed", "embed_dim", "n", "nn", "m", "reps", "workers"}
_FLOAT = {"alpha", "sigma", "beta", "tau", "s"}
_BOOL = {"rank_transform"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class ConfigError(Exception):
    pass


def _coerce(key, raw):
    if raw is None or key not in DEFAULTS:
        if key not in DEFAULTS:
            raise ConfigError(f"unknown setting {key!r}")
        return raw
    try:
        if key in _INT:
            value = int(raw)
            if value < 0:
                raise ValueError("must be nonnegative")
            return value
        if key in _FLOAT:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    if key in _BOOL:
        if isinstance(raw, bool):
            return raw
        if str(raw).lower() in _TRUE:
            return True
        if str(raw).lower() in _FALSE:
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    return raw


def read_config_file(path) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = _coerce(key, value)
    return out


def parse_matrix(text):
    """Rows separated by ';', entries by ','."""
    try:
        rows = [[float(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
        return np.array(rows, dtype=float)
    except ValueError as exc:
        raise ConfigError(f"bad matrix {text!r}: {exc}") from None


def parse_vector(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad vector {text!r}: {exc}") from None


def build_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = value
    if cfg["beta"] is not None and cfg["nn"] is not None:
        # a flag for one selection rule overrides a config-file value for the other
        if args.beta is not None:
            cfg["nn"] = None
        elif args.nn is not None:
            cfg["beta"] = None
        else:
            raise ConfigError("give only one of beta or nn")
    if cfg["beta"] is None and cfg["nn"] is None:
        cfg["nn"] = 400
    cfg["command"] = args.command
    validate_config(cfg)
    return cfg


def expected_extremes(cfg, n):
    if cfg["nn"] is not None:
        return int(cfg["nn"])
    return n - math.ceil(cfg["beta"] * n - 1e-9)


def validate_config(cfg):
    """Reject inconsistent settings before any computation."""
    if cfg["model"] not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}")
    if cfg["mode"] not in ("symmetric", "mutual"):
        raise ConfigError("mode must be symmetric or mutual")
    if cfg["eigensolver"] not in EIGENSOLVERS:
        raise ConfigError(f"eigensolver must be one of {EIGENSOLVERS}")
    if not cfg["tau"] > 1:
        raise ConfigError(f"tau must exceed 1, got {cfg['tau']}")
    if not cfg["s"] > 0:
        raise ConfigError("s must be positive")
    if not cfg["alpha"] > 0:
        raise ConfigError("alpha must be positive")
    if not cfg["sigma"] >= 0:
        raise ConfigError("sigma must be nonnegative")
    if cfg["m"] < 1:
        raise ConfigError("m must be positive")
    if cfg["reps"] < 1:
        raise ConfigError("reps must be positive")
    if cfg["beta"] is not None and not 0 <= cfg["beta"] < 1:
        raise ConfigError("beta must lie in [0, 1)")
    if cfg["model"] == "csv" and not cfg["input"]:
        raise ConfigError("model csv needs --input")
    if cfg["model"] == "lfm-noisy" and cfg["alpha"] != 1:
        raise ConfigError("the noisy model is defined for alpha = 1")
    if cfg["model"] != "csv" and cfg["command"] != "benchmark":
        N = expected_extremes(cfg, cfg["n"])
        if not 2 <= N < cfg["n"]:
            raise ConfigError(f"selection keeps {N} of {cfg['n']} rows")
        _check_graph_sizes(cfg, N)


def _check_graph_sizes(cfg, N):
    if N < 2:
        raise ConfigError(f"need at least 2 extremes, got {N}")
    k = choose_k_n(N, cfg["tau"])
    if k >= N:
        raise ConfigError(f"k_n={k} must be smaller than N_n={N}")
    if cfg["m"] > N:
        raise ConfigError(f"m={cfg['m']} exceeds N_n={N}")


def _loadings(cfg):
    return EXAMPLE_LOADINGS if cfg["A"] is None else parse_matrix(cfg["A"])


def _coeffs(cfg):
    return MA3_COEFFS if cfg["coeffs"] is None else parse_vector(cfg["coeffs"])


def _public(cfg):
    # the output location is not part of the experiment, so reruns elsewhere hash the same
    return {k: v for k, v in sorted(cfg.items()) if k != "out"}


def simulate_from_config(cfg, stream):
    if cfg["model"] == "ma":
        return simulate_ma_embedding(_coeffs(cfg), cfg["alpha"], cfg["n"], cfg["embed_dim"], stream)
    sigma = cfg["sigma"] if cfg["model"] == "lfm-noisy" else 0.0
    return simulate_lfm(FactorModelSpec(_loadings(cfg), cfg["alpha"], sigma), cfg["n"], stream)


def _select(cfg, data):
    if cfg["nn"] is not None:
        return select_extremes(data, top=cfg["nn"])
    return select_extremes(data, beta=cfg["beta"])


def _ensure_out(cfg):
    try:
        os.makedirs(cfg["out"], exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {cfg['out']}: {exc}") from None
    return cfg["out"]


def _emit(path, cfg, writer, *args):
    try:
        writer(path, *args)
        io.write_meta(path, _public(cfg), cfg["seed"])
    except OSError as exc:
        raise OSError(f"{path}: {exc}") from None
    return path


def cmd_simulate(cfg):
    if cfg["model"] == "csv":
        raise ConfigError("simulate needs a generative model, not csv")
    out = _ensure_out(cfg)
    sample = simulate_from_config(cfg, RandomStream(cfg["seed"], ("simulate",)))
    _emit(os.path.join(out, "sample.csv"), cfg, io.write_sample, sample)
    extremes = _select(cfg, sample)
    _emit(os.path.join(out, "extremes.csv"), cfg, io.write_extremes, extremes)
    print(f"simulated n={sample.n} d={sample.d}; N_n={extremes.N_n} extremes above u_n={extremes.u_n:.6g}")
    return sample, extremes


def load_data(cfg):
    if cfg["model"] == "csv":
        try:
            data = io.read_sample(cfg["input"])
        except OSError as exc:
            raise OSError(f"{cfg['input']}: {exc}") from None
        if cfg["rank_transform"]:
            data = marginal_rank_transform(data)
        return data
    return simulate_from_config(cfg, RandomStream(cfg["seed"], ("simulate",)))


def cmd_cluster(cfg):
    data = load_data(cfg)
    extremes = _select(cfg, data)
    _check_graph_sizes(cfg, extremes.N_n)
    k_n = choose_k_n(extremes.N_n, cfg["tau"])
    res = spectral_cluster(extremes, cfg["m"], k_n, s=cfg["s"], mode=cfg["mode"],
                           stream=RandomStream(cfg["seed"], ("cluster",)), eigensolver=cfg["eigensolver"])
    scree = screeplot(extremes, cfg["s"], cfg["eigensolver"])
    out = _ensure_out(cfg)
    _emit(os.path.join(out, "labels.csv"), cfg, io.write_labels, res.labels)
    _emit(os.path.join(out, "atoms.csv"), cfg, io.write_atoms, res.atoms_hat, res.masses_hat)
    _emit(os.path.join(out, "scree.csv"), cfg, io.write_scree, scree)
    print(f"N_n={extremes.N_n} k_n={k_n} m={cfg['m']} singletons={res.singletons.size}")
    for j, (a, p) in enumerate(zip(res.atoms_hat, res.masses_hat)):
        print(f"  cluster {j}: mass {p:.4f} atom " + " ".join(f"{v:.4f}" for v in a))
    return res


def cmd_screeplot(cfg):
    extremes = _select(cfg, load_data(cfg))
    values = screeplot(extremes, cfg["s"], cfg["eigensolver"])
    out = _ensure_out(cfg)
    _emit(os.path.join(out, "scree.csv"), cfg, io.write_scree, values)
    print("leading eigenvalues: " + " ".join(f"{v:.4f}" for v in values[:10]))
    return values


BENCH_FIELDS = ("model", "sigma", "n", "N_n", "tau", "k_n", "rep", "method", "center_error", "mass_error")


def _write_bench(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_FIELDS)
        for r in rows:
            w.writerow([io._fmt(r[k]) if isinstance(r[k], float) else r[k] for k in BENCH_FIELDS])


def cmd_benchmark(cfg):
    if cfg["model"] == "csv":
        raise ConfigError("benchmark needs a generative model, not csv")
    model = "ma" if cfg["model"] == "ma" else "lfm"
    setup = ModelSetup(model=model, A=None if cfg["A"] is None else _loadings(cfg), alpha=cfg["alpha"],
                       coeffs=_coeffs(cfg), embed_dim=cfg["embed_dim"], m=cfg["m"], s=cfg["s"],
                       mode=cfg["mode"], eigensolver=cfg["eigensolver"])
    sigma = cfg["sigma"] if cfg["model"] == "lfm-noisy" else 0.0
    for _, N, tau in DEFAULT_LADDER:
        _check_graph_sizes({**cfg, "tau": tau}, N)
    rows = run_benchmark(setup, ladder_cells(model, sigma), cfg["reps"], cfg["seed"], cfg["workers"])
    out = _ensure_out(cfg)
    _emit(os.path.join(out, "benchmark.csv"), cfg, _write_bench, rows)
    for n, N, tau in DEFAULT_LADDER:
        meds = []
        for method in METHODS:
            errs = [r["center_error"] for r in rows if r["n"] == n and r["method"] == method]
            meds.append(f"{method} {np.nanmedian(errs):.4f}")
        print(f"n={n} N_n={N} tau={tau:g}: median center error " + ", ".join(meds))
    return rows


COMMANDS = {"simulate": cmd_simulate, "cluster": cmd_cluster, "screeplot": cmd_screeplot, "benchmark": cmd_benchmark}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--input", help="data CSV for --model csv")
    common.add_argument("--alpha", type=float)
    common.add_argument("--sigma", type=float)
    common.add_argument("--A", dest="A", help="loading matrix, rows split by ';' and entries by ','")
    common.add_argument("--coeffs", help="MA coefficients, comma separated")
    common.add_argument("--embed-dim", dest="embed_dim", type=int)
    common.add_argument("--n", type=int)
    sel = common.add_mutually_exclusive_group()
    sel.add_argument("--beta", type=float, help="quantile level of the radial threshold")
    sel.add_argument("--nn", type=int, help="number of extremes to keep")
    common.add_argument("--tau", type=float)
    common.add_argument("--s", type=float, help="kernel scale")
    common.add_argument("--m", type=int, help="number of clusters")
    common.add_argument("--mode", choices=("symmetric", "mutual"))
    common.add_argument("--rank-transform", dest="rank_transform", action="store_true")
    common.add_argument("--reps", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--eigensolver", choices=EIGENSOLVERS)
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="extremal-spectral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        COMMANDS[args.command](cfg)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, io.CSVParseError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
