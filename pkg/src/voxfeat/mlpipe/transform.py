"""Filters and linear transformations: variance/correlation filters, PCA,
FastICA-style ICA, and iterated principal-axis factor analysis.

Every routine works on an imputed+standardized copy of the table (variance
filtering uses raw variances, which standardizing would erase) and reports
original column names.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceFailure, InvalidK, TooFewColumns
from .table import FeatureTable, impute_and_standardize, impute_only


@dataclass(frozen=True)
class SelectionResult:
    """kept_columns in kept order; ranking 1 = best over all ranked names."""

    kept_columns: tuple[str, ...]
    ranking: dict[str, int]
    scores: dict[str, float]

    def __post_init__(self) -> None:
        ranks = list(self.ranking.values())
        if len(set(ranks)) != len(ranks):
            raise ValueError("ranks must be unique")
        if not set(self.kept_columns) <= set(self.ranking):
            raise ValueError("kept columns must be ranked")


def _result_from_partition(
    kept: list[str], dropped: list[str], scores: dict[str, float]
) -> SelectionResult:
    ranking = {name: i + 1 for i, name in enumerate(kept + dropped)}
    return SelectionResult(tuple(kept), ranking, scores)


def low_variance_filter(tbl: FeatureTable, threshold: float = 0.0) -> SelectionResult:
    """Drop columns whose raw population variance is <= threshold.

    Variance is measured after imputation but before any scaling; an
    all-NaN column has variance 0 and is always dropped.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    filled = impute_only(tbl)
    variances = filled.rows.var(axis=0) if tbl.n_rows else np.zeros(tbl.n_cols)
    scores = {name: float(variances[j]) for j, name in enumerate(tbl.column_names)}
    kept = [n for j, n in enumerate(tbl.column_names) if variances[j] > threshold]
    dropped = [n for j, n in enumerate(tbl.column_names) if variances[j] <= threshold]
    order = sorted(
        tbl.column_names, key=lambda n: (-scores[n], tbl.column_names.index(n))
    )
    ranking = {name: i + 1 for i, name in enumerate(order)}
    return SelectionResult(tuple(kept), ranking, scores)


def correlation_matrix(tbl: FeatureTable) -> np.ndarray:
    """Pearson matrix with exact unit diagonal; constant columns correlate 0."""
    z, params = impute_and_standardize(tbl)
    n = max(tbl.n_rows, 1)
    corr = (z.rows.T @ z.rows) / n
    corr = np.clip(corr, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    constant = params.stds == 0
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    np.fill_diagonal(corr, 1.0)
    return corr


def high_correlation_filter(tbl: FeatureTable, threshold: float = 0.95) -> SelectionResult:
    """Greedy column-order scan: drop a column when it correlates above the
    threshold (absolute pearson) with any column already retained, so the
    earliest member of each correlated group survives."""
    if tbl.n_cols < 2:
        raise TooFewColumns(f"correlation filter needs >= 2 columns, got {tbl.n_cols}")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    corr = np.abs(correlation_matrix(tbl))
    kept_idx: list[int] = []
    kept: list[str] = []
    dropped: list[str] = []
    scores: dict[str, float] = {}
    for j, name in enumerate(tbl.column_names):
        against = corr[j, kept_idx] if kept_idx else np.zeros(0)
        worst = float(against.max()) if against.size else 0.0
        scores[name] = worst
        if worst > threshold:
            dropped.append(name)
        else:
            kept_idx.append(j)
            kept.append(name)
    return _result_from_partition(kept, dropped, scores)


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PcaResult:
    transformed: FeatureTable
    components: np.ndarray  # (k, n_cols) rows are orthonormal
    explained_variance_ratio: np.ndarray
    component_variances: np.ndarray  # population variance of each score column


def _orient_rows(components: np.ndarray) -> np.ndarray:
    """Sign convention: the largest-magnitude loading of each row is positive."""
    out = components.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def pca(tbl: FeatureTable, k: int) -> PcaResult:
    """Top-k principal components of the standardized table."""
    if not 1 <= k <= min(tbl.n_rows, tbl.n_cols):
        raise InvalidK(f"k must be in [1, {min(tbl.n_rows, tbl.n_cols)}], got {k}")
    z, _ = impute_and_standardize(tbl)
    u, s, vt = np.linalg.svd(z.rows, full_matrices=False)
    total = float((s ** 2).sum())
    components = vt[:k]
    # align score signs with the oriented components
    signs = np.ones(k)
    for i in range(k):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            signs[i] = -1.0
    components = components * signs[:, None]
    scores = z.rows @ components.T
    ratio = (s[:k] ** 2) / total if total > 0 else np.zeros(k)
    variances = (s[:k] ** 2) / max(tbl.n_rows, 1)
    names = tuple(f"pc{i + 1}" for i in range(k))
    transformed = FeatureTable(names, scores, tbl.row_ids, tbl.target)
    return PcaResult(transformed, components, ratio, variances)


# ---------------------------------------------------------------------------
# ICA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IcaResult:
    transformed: FeatureTable
    unmixing: np.ndarray  # (k, k) applied to the whitened data
    converged: bool
    n_iter: int


def _sym_decorrelate(w: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(w @ w.T)
    vals = np.maximum(vals, 1e-12)
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.T @ w


def ica(
    tbl: FeatureTable,
    k: int,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> IcaResult:
    """FastICA with log-cosh contrast and symmetric decorrelation.

    Data is whitened through PCA first; the unmixing matrix starts from the
    identity, so runs are reproducible without randomness. Non-convergence
    within max_iter is reported via the flag; a numerically exploding
    iteration raises ConvergenceFailure.
    """
    if not 1 <= k <= min(tbl.n_rows, tbl.n_cols):
        raise InvalidK(f"k must be in [1, {min(tbl.n_rows, tbl.n_cols)}], got {k}")
    z, _ = impute_and_standardize(tbl)
    u, s, vt = np.linalg.svd(z.rows, full_matrices=False)
    n = tbl.n_rows
    # whitened components, unit population variance, shape (k, n)
    scale = np.where(s[:k] > 0, s[:k], 1.0)
    white = (z.rows @ vt[:k].T / scale[None, :] * np.sqrt(n)).T

    w = np.eye(k)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y = w @ white
        g = np.tanh(y)
        g_prime = 1.0 - g ** 2
        w_new = (g @ white.T) / n - np.diag(g_prime.mean(axis=1)) @ w
        w_new = _sym_decorrelate(w_new)
        if not np.all(np.isfinite(w_new)):
            raise ConvergenceFailure(f"ICA diverged at iteration {iterations}")
        # rows may flip sign between iterations; align before measuring change
        signs = np.sign(np.sum(w_new * w, axis=1))
        signs[signs == 0] = 1.0
        change = float(np.max(np.abs(w_new - signs[:, None] * w)))
        w = w_new
        if change < tol:
            converged = True
            break
    sources = (w @ white).T
    names = tuple(f"ic{i + 1}" for i in range(k))
    transformed = FeatureTable(names, sources, tbl.row_ids, tbl.target)
    return IcaResult(transformed, w, converged, iterations)


# ---------------------------------------------------------------------------
# factor analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorResult:
    loadings: np.ndarray  # (n_cols, k)
    uniquenesses: np.ndarray  # (n_cols,), clamped to [0.005, 1]
    converged: bool
    n_iter: int


def factor_analysis(
    tbl: FeatureTable,
    k: int,
    max_iter: int = 200,
    tol: float = 1e-5,
) -> FactorResult:
    """Iterated principal-axis factoring of the correlation matrix.

    Models corr ~ L L^T + diag(psi). Uniquenesses start from 1 minus the
    largest absolute row correlation and are refined until the update falls
    below tol. psi stays clamped inside [0.005, 1].
    """
    if not 1 <= k < tbl.n_cols:
        raise InvalidK(f"k must be in [1, {tbl.n_cols - 1}], got {k}")
    corr = correlation_matrix(tbl)
    off = np.abs(corr - np.eye(tbl.n_cols))
    psi = np.clip(1.0 - off.max(axis=1), 0.005, 1.0)
    loadings = np.zeros((tbl.n_cols, k))
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        reduced = corr.copy()
        np.fill_diagonal(reduced, 1.0 - psi)
        vals, vecs = np.linalg.eigh(reduced)
        top_vals = np.maximum(vals[::-1][:k], 0.0)
        top_vecs = vecs[:, ::-1][:, :k]
        loadings = top_vecs * np.sqrt(top_vals)[None, :]
        if not np.all(np.isfinite(loadings)):
            raise ConvergenceFailure(f"factor analysis diverged at iteration {iterations}")
        psi_new = np.clip(1.0 - (loadings ** 2).sum(axis=1), 0.005, 1.0)
        change = float(np.max(np.abs(psi_new - psi)))
        psi = psi_new
        if change < tol:
            converged = True
            break
    loadings = _orient_rows(loadings.T).T
    return FactorResult(loadings, psi, converged, iterations)
