"""CSV import/export for samples, extremes, graphs, clustering results and
angular measures, plus the ``.meta`` sidecar files written next to them."""
from __future__ import annotations

import csv
import hashlib
import json
import os
import platform

import numpy as np

from .variates import SampleMatrix


class CSVParseError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_sample(path, sample: SampleMatrix, latents=True):
    X = np.asarray(sample.X)
    header = [f"x{c + 1}" for c in range(X.shape[1])]
    data = X
    if latents and sample.Z is not None:
        header += [f"z{c + 1}" for c in range(sample.Z.shape[1])]
        data = np.hstack([X, sample.Z])
    _write_rows(path, header, ([_fmt(v) for v in row] for row in data))


def read_sample(path) -> SampleMatrix:
    """Read ``x1..xd[,z1..zp]``; any other column layout is a parse error."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CSVParseError(path, 1, "empty file")
    header = [h.strip() for h in rows[0]]
    xs = [h for h in header if h.startswith("x")]
    zs = [h for h in header if h.startswith("z")]
    expected = [f"x{c + 1}" for c in range(len(xs))] + [f"z{c + 1}" for c in range(len(zs))]
    if not xs or header != expected:
        raise CSVParseError(path, 1, f"header must be x1..xd[,z1..zp], got {','.join(header)}")
    values = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != len(header):
            raise CSVParseError(path, line, f"expected {len(header)} fields, got {len(row)}")
        try:
            values[i] = [float(v) for v in row]
        except ValueError as exc:
            raise CSVParseError(path, line, str(exc)) from None
        if not np.all(np.isfinite(values[i])):
            raise CSVParseError(path, line, "non-finite value")
    d = len(xs)
    Z = values[:, d:] if zs else None
    return SampleMatrix(X=values[:, :d], Z=Z, meta={"source": str(path)})


def write_extremes(path, extremes):
    header = ["index", "radius"] + [f"a{c + 1}" for c in range(extremes.d)]
    rows = ([int(i), _fmt(r)] + [_fmt(v) for v in a]
            for i, r, a in zip(extremes.indices, extremes.radii, extremes.angles))
    _write_rows(path, header, rows)


def write_edges(path, graph):
    W = graph.weights
    _write_rows(path, ["i", "j", "weight"], ([int(i), int(j), _fmt(W[i, j])] for i, j in graph.edges()))


def write_dense(path, M, prefix="c"):
    M = np.asarray(M)
    _write_rows(path, [f"{prefix}{c + 1}" for c in range(M.shape[1])], ([_fmt(v) for v in row] for row in M))


def write_labels(path, labels):
    _write_rows(path, ["index", "label"], ([i, int(lab)] for i, lab in enumerate(labels)))


def write_atoms(path, atoms, masses):
    atoms = np.atleast_2d(atoms)
    header = ["label"] + [f"c{c + 1}" for c in range(atoms.shape[1])] + ["mass"]
    _write_rows(path, header, ([j] + [_fmt(v) for v in a] + [_fmt(m)] for j, (a, m) in enumerate(zip(atoms, masses))))


def write_scree(path, eigenvalues):
    _write_rows(path, ["rank", "eigenvalue"], ([r + 1, _fmt(v)] for r, v in enumerate(eigenvalues)))


def write_measure(path, measure):
    d = measure.atoms.shape[1]
    header = ["atom_index"] + [f"c{c + 1}" for c in range(d)] + ["mass"]
    rows = [[j] + [_fmt(v) for v in a] + [_fmt(m)] for j, (a, m) in enumerate(zip(measure.atoms, measure.masses))]
    rows.append(["continuous"] + [""] * d + [_fmt(measure.continuous_mass)])
    _write_rows(path, header, rows)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def write_meta(csv_path, config: dict, seed):
    """Sidecar with config hash, seed and package versions; no timestamps so reruns are byte-identical."""
    import scipy

    from . import __version__

    root, _ = os.path.splitext(csv_path)
    lines = {
        "config_hash": config_hash(config),
        "seed": seed,
        "extremal_spectral": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
        "config": json.dumps(config, sort_keys=True, default=str),
    }
    with open(root + ".meta", "w") as fh:
        for k, v in lines.items():
            fh.write(f"{k}={v}\n")
    return root + ".meta"
