"""Dataset loading, the l1 weight rule and the Tikhonov augmentation."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .exceptions import ConfigurationError, InvalidInputError, LibsvmParseError
from .problem import as_design_matrix


@dataclass(frozen=True)
class Dataset:
    A: object
    b: np.ndarray
    name: str = ""
    source_format: str = "libsvm"

    @property
    def shape(self):
        return self.A.shape


@dataclass(frozen=True)
class AugmentedProblem:
    A_tilde: object
    b_tilde: np.ndarray


def _parse_float(tok, lineno):
    try:
        v = float(tok)
    except ValueError:
        raise LibsvmParseError(f"cannot parse number {tok!r}", lineno) from None
    if not np.isfinite(v):
        raise LibsvmParseError(f"non-finite value {tok!r}", lineno)
    return v


def parse_libsvm(lines, n_features=None, name=""):
    """Parse LIBSVM text lines into a :class:`Dataset`.

    Each non-blank line is ``label idx:val idx:val ...`` with 1-based,
    strictly ascending indices. Anything after ``#`` is ignored. The column
    count is the largest index seen unless ``n_features`` is given.
    """
    labels = []
    rows, cols, vals = [], [], []
    max_idx = 0
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        labels.append(_parse_float(toks[0], lineno))
        row = len(labels) - 1
        prev = 0
        for tok in toks[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise LibsvmParseError(f"expected idx:val, got {tok!r}", lineno)
            try:
                idx = int(idx_s)
            except ValueError:
                raise LibsvmParseError(f"bad feature index {idx_s!r}", lineno) from None
            if idx < 1:
                raise LibsvmParseError(f"feature index {idx} is not 1-based", lineno)
            if idx <= prev:
                raise LibsvmParseError(
                    f"feature indices must be strictly ascending ({idx} after {prev})",
                    lineno)
            prev = idx
            rows.append(row)
            cols.append(idx - 1)
            vals.append(_parse_float(val_s, lineno))
        max_idx = max(max_idx, prev)
    if not labels:
        raise LibsvmParseError("no samples found")
    n = max_idx if n_features is None else int(n_features)
    if n < max_idx:
        raise ConfigurationError(f"n_features={n} is smaller than the largest index {max_idx}")
    if n < 1:
        raise LibsvmParseError("no features found")
    A = sp.csc_matrix((vals, (rows, cols)), shape=(len(labels), n), dtype=float)
    return Dataset(A, np.array(labels), name, "libsvm")


def load_libsvm(path, n_features=None):
    path = Path(path)
    with open(path) as fh:
        return parse_libsvm(fh, n_features=n_features, name=path.stem)


def dump_libsvm(dataset, path):
    """Write ``dataset`` in LIBSVM format with round-trip exact floats."""
    A = sp.csr_matrix(dataset.A)
    A.sort_indices()
    with open(path, "w") as fh:
        for i in range(A.shape[0]):
            lo, hi = A.indptr[i], A.indptr[i + 1]
            feats = " ".join(f"{j + 1}:{float(v)!r}" for j, v in zip(A.indices[lo:hi], A.data[lo:hi]))
            fh.write(f"{float(dataset.b[i])!r} {feats}".rstrip() + "\n")


def load_csv(path):
    """Header-free comma-separated file; the last column is the target."""
    path = Path(path)
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise InvalidInputError(f"{path}: empty file")
    if data.shape[1] < 2:
        raise InvalidInputError(f"{path}: need at least one feature column and a target")
    if not np.all(np.isfinite(data)):
        raise InvalidInputError(f"{path}: non-finite entries")
    return Dataset(data[:, :-1].copy(), data[:, -1].copy(), path.stem, "dense-csv")


def load_dataset(path, fmt="libsvm"):
    if fmt == "libsvm":
        return load_libsvm(path)
    if fmt == "csv":
        return load_csv(path)
    raise ConfigurationError(f"unknown data format {fmt!r}")


def compute_mu(mu_c, A, b):
    """l1 weight ``mu_c * ||A^T b||_inf``."""
    if not mu_c > 0:
        raise ConfigurationError(f"mu_c must be positive, got {mu_c!r}")
    scale = float(np.max(np.abs(A.T @ np.asarray(b, dtype=float))))
    if scale == 0.0:
        raise ConfigurationError("A^T b vanishes, so mu would be zero")
    return mu_c * scale


def augment(A, b, lam):
    """Stack ``sqrt(lam) I`` under ``A`` and zeros under ``b``.

    ``0.5*||A_t x - b_t||^2`` then equals ``0.5*||Ax - b||^2 + 0.5*lam*||x||^2``.
    Sparse input stays sparse.
    """
    if not lam > 0:
        raise ConfigurationError(f"lam must be positive, got {lam!r}")
    A = as_design_matrix(A)
    b = np.asarray(b, dtype=float).ravel()
    n = A.shape[1]
    if sp.issparse(A):
        A_t = sp.vstack([A, np.sqrt(lam) * sp.identity(n, format="csc")], format="csc")
    else:
        A_t = np.vstack([A, np.sqrt(lam) * np.eye(n)])
    return AugmentedProblem(A_t, np.concatenate([b, np.zeros(n)]))
