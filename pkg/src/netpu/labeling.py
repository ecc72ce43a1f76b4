"""Multi-class relabeling of unlabeled nodes over a feature-similarity graph.

Pipeline: squared-distance similarities are thresholded at a configurable
quantile (the dense n x n similarity matrix is never materialized; the
quantile on similarities is recast as a cutoff on squared distances and rows
stream through in blocks), row-normalized into a transition matrix, then a
restart-damped Markov process spreads +1 mass from positive nodes and
balancing negative mass from the reliable negatives. The stationary vector
ranks the undetermined nodes, and quantile splits carve the ranking into
likely-positive / weakly-negative / likely-negative classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from netpu.seeds import SeedSet

LABEL_NAMES = ("P", "LP", "WN", "LN", "RN")
P, LP, WN, LN, RN = range(5)

_BLOCK_ROWS = 256


class PropagationError(RuntimeError):
    """Markov propagation failed to converge within the iteration budget."""

    def __init__(self, iterations: int, residual: float, tol: float):
        super().__init__(
            f"no convergence after {iterations} iterations: "
            f"residual {residual:.3e} > tol {tol:.3e}"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class SimilarityThreshold:
    """Squared-distance cutoff realizing a similarity quantile.

    A pair is retained iff its squared feature distance is strictly below
    ``e_cutoff``; ``w_cutoff`` is the same cutoff mapped to the similarity
    scale via the exact pair-distance extremes ``e_min``/``e_max``.
    """

    e_cutoff: float
    e_min: float
    e_max: float
    quantile_level: float
    exact: bool
    n_pairs: int

    @property
    def w_cutoff(self) -> float:
        return 1.0 - (self.e_cutoff - self.e_min) / (self.e_max - self.e_min)


@dataclass(frozen=True)
class SparseSimilarity:
    """Row-normalized retained similarities (transition matrix)."""

    matrix: sp.csr_matrix  # W_n = D^{-1} W_r
    row_sums: np.ndarray  # D diagonal before normalization
    threshold: SimilarityThreshold


def _block_sq_dists(x: np.ndarray, lo: int, hi: int) -> np.ndarray:
    return ((x[lo:hi, None, :] - x[None, :, :]) ** 2).sum(axis=-1)


def pairwise_similarity_threshold(values: np.ndarray, quantile_level: float,
                                  exact_limit: int = 5000,
                                  n_samples: int = 10_000_000,
                                  rng_seed: int = 0) -> SimilarityThreshold:
    """Map a similarity quantile to a squared-distance cutoff.

    Similarities are an affine decreasing map of squared distances, so the
    quantile_level quantile on similarities is the (1 - quantile_level)
    quantile on distances. Up to ``exact_limit`` points the quantile is exact
    over all off-diagonal pairs; beyond that it is estimated from a seeded
    uniform sample of pairs while the distance extremes stay exact.
    """
    if not (0 < quantile_level < 1):
        raise ValueError(f"quantile_level must be in (0, 1), got {quantile_level}")
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least two points")

    e_min = np.inf
    e_max = -np.inf
    exact = n <= exact_limit
    tri: list[np.ndarray] = []
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        e = _block_sq_dists(x, lo, hi)
        mask = np.ones_like(e, dtype=bool)
        mask[np.arange(hi - lo), np.arange(lo, hi)] = False
        off = e[mask]
        e_min = min(e_min, float(off.min()))
        e_max = max(e_max, float(off.max()))
        if exact:
            # keep each pair once: columns strictly right of the global row
            upper = np.arange(n)[None, :] > np.arange(lo, hi)[:, None]
            tri.append(e[upper])
    if e_max <= e_min:
        raise ValueError("degenerate similarity: all feature vectors identical")

    if exact:
        pool = np.concatenate(tri)
        n_pairs = len(pool)
    else:
        rng = np.random.default_rng(rng_seed)
        i = rng.integers(0, n, size=n_samples)
        j = rng.integers(0, n - 1, size=n_samples)
        j = j + (j >= i)  # uniform over ordered off-diagonal pairs
        pool = np.empty(n_samples)
        for lo in range(0, n_samples, 1_000_000):
            hi = min(lo + 1_000_000, n_samples)
            pool[lo:hi] = ((x[i[lo:hi]] - x[j[lo:hi]]) ** 2).sum(axis=1)
        n_pairs = n_samples
    e_cutoff = float(np.quantile(pool, 1.0 - quantile_level))
    return SimilarityThreshold(e_cutoff, e_min, e_max, quantile_level, exact, n_pairs)


def build_similarity(values: np.ndarray, thr: SimilarityThreshold) -> SparseSimilarity:
    """Materialize only the retained pairs and row-normalize.

    The diagonal similarity is 1 by definition and always survives the
    threshold, so every row has a positive sum and isolated points degrade
    to self-loops rather than empty rows.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    span = thr.e_max - thr.e_min
    indptr = np.zeros(n + 1, dtype=np.int64)
    idx_parts: list[np.ndarray] = []
    dat_parts: list[np.ndarray] = []
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        e = _block_sq_dists(x, lo, hi)
        keep = e < thr.e_cutoff
        local = np.arange(hi - lo)
        keep[local, np.arange(lo, hi)] = True  # diagonal always retained
        w = 1.0 - (e - thr.e_min) / span
        w[local, np.arange(lo, hi)] = 1.0
        r, c = np.nonzero(keep)
        idx_parts.append(c.astype(np.int32))
        dat_parts.append(w[r, c])
        indptr[lo + 1 : hi + 1] = keep.sum(axis=1).cumsum() + indptr[lo]
    indices = np.concatenate(idx_parts)
    data = np.concatenate(dat_parts)
    row_sums = np.add.reduceat(data, indptr[:-1])
    data = data / np.repeat(row_sums, np.diff(indptr))
    matrix = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    return SparseSimilarity(matrix, row_sums, thr)


def select_rn(values: np.ndarray, seeds: SeedSet, rn_count: int | None = None) -> np.ndarray:
    """The rn_count non-seed nodes feature-farthest from the positive centroid.

    Ties break toward the smaller node id; the result is sorted ascending.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    n_p = len(seeds)
    if rn_count is None:
        rn_count = n_p
    if rn_count < 1:
        raise ValueError(f"rn_count must be >= 1, got {rn_count}")
    if rn_count > n - n_p:
        raise ValueError(f"rn_count {rn_count} exceeds the {n - n_p} non-seed nodes")
    centroid = x[seeds.ids].mean(axis=0)
    d2 = ((x - centroid) ** 2).sum(axis=1)
    candidates = np.flatnonzero(~seeds.member_mask(n))
    order = np.lexsort((candidates, -d2[candidates]))
    return np.sort(candidates[order[:rn_count]])


def initial_state(n: int, seed_ids: np.ndarray, rn_ids: np.ndarray) -> np.ndarray:
    """+1 on positives, -|P|/|RN| on reliable negatives, 0 elsewhere."""
    g0 = np.zeros(n)
    g0[seed_ids] = 1.0
    g0[rn_ids] = -len(seed_ids) / len(rn_ids)
    return g0


@dataclass(frozen=True)
class PropagationState:
    g0: np.ndarray
    g_inf: np.ndarray
    iterations: int
    residual: float


def propagate(ws: SparseSimilarity, g0: np.ndarray, alpha: float = 0.8,
              max_iter: int = 1000, tol: float = 1e-6) -> PropagationState:
    """Iterate g <- (1 - alpha) W_n^T g + alpha g0 to its stationary point.

    Stops when the Euclidean step norm drops below ``tol``; raises
    PropagationError with the last residual otherwise.
    """
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    wt = ws.matrix.T.tocsr()
    g = np.asarray(g0, dtype=np.float64)
    residual = np.inf
    for it in range(1, max_iter + 1):
        g_next = (1.0 - alpha) * (wt @ g) + alpha * g0
        residual = float(np.linalg.norm(g_next - g))
        g = g_next
        if residual < tol:
            return PropagationState(np.asarray(g0, dtype=np.float64), g, it, residual)
    raise PropagationError(max_iter, residual, tol)


def fixed_point_residual(ws: SparseSimilarity, state: PropagationState,
                         alpha: float) -> float:
    """||g - ((1-alpha) W_n^T g + alpha g0)||_2 at the returned state."""
    g = state.g_inf
    return float(np.linalg.norm(g - ((1.0 - alpha) * (ws.matrix.T @ g) + alpha * state.g0)))


def _ceil_frac(fraction: float, count: int) -> int:
    # guarded against float noise pushing an exact integer boundary up
    return int(math.ceil(fraction * count - 1e-9))


@dataclass(frozen=True)
class LabelAssignment:
    labels: np.ndarray  # int8 codes into LABEL_NAMES
    ranking: np.ndarray  # undetermined node ids, g_inf descending
    split: tuple[float, float]

    def names(self) -> list[str]:
        return [LABEL_NAMES[c] for c in self.labels]


def assign_labels(state: PropagationState, seed_ids: np.ndarray, rn_ids: np.ndarray,
                  split: tuple[float, float] = (1.0 / 3.0, 2.0 / 3.0)) -> LabelAssignment:
    """Split the undetermined ranking at the two cut fractions.

    The first ceil(f1 * u) ranked nodes become LP, the next up to
    ceil(f2 * u) WN, the rest LN; g_inf ties break toward the smaller id.
    """
    f1, f2 = split
    if not (0 < f1 <= f2 < 1):
        raise ValueError(f"split fractions must satisfy 0 < f1 <= f2 < 1, got {split}")
    n = len(state.g_inf)
    labels = np.full(n, LN, dtype=np.int8)
    labels[seed_ids] = P
    labels[rn_ids] = RN
    determined = np.zeros(n, dtype=bool)
    determined[seed_ids] = True
    determined[rn_ids] = True
    und = np.flatnonzero(~determined)
    order = np.lexsort((und, -state.g_inf[und]))
    ranking = und[order]
    u = len(ranking)
    n_lp = _ceil_frac(f1, u)
    n_top = _ceil_frac(f2, u)
    labels[ranking[:n_lp]] = LP
    labels[ranking[n_lp:n_top]] = WN
    labels[ranking[n_top:]] = LN
    return LabelAssignment(labels, ranking, (float(f1), float(f2)))
