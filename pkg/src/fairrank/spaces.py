"""Input/output metric spaces, pairwise distortion, neighbors, 2-D embedding.

The input space is the feature representation under Gower distance; the
output space is the ranking under absolute rank difference. Both pairwise
matrices are min-max normalized over their off-diagonal entries onto a
common [0,1] scale, and the distortion of a pair is the absolute difference
of its two normalized distances.

Normalization convention: if all off-diagonal entries are equal, they all map
to 1 (keeps "everyone equidistant" meaning equidistant rather than collapsed
to zero).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import FeatureView, CONTINUOUS
from .errors import HTooLarge, SizeMismatch


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix with zero diagonal."""

    values: np.ndarray
    normalized: bool

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SpacePair:
    """Normalized input and output distance matrices plus their distortion."""

    input: DistanceMatrix
    output: DistanceMatrix
    distortion: np.ndarray  # |input - output|, entries in [0,1]

    @property
    def n(self) -> int:
        return self.input.n


def gower_distance(a: int, b: int, view: FeatureView) -> float:
    """Mean per-feature distance between rows ``a`` and ``b`` of the view.

    Continuous features contribute |x_a - x_b| on the view's [0,1] scale
    (zero-range features contribute 0), categorical features contribute 0/1.
    """
    total = 0.0
    for j, kind in enumerate(view.kinds):
        va, vb = view.matrix[a, j], view.matrix[b, j]
        if kind == CONTINUOUS:
            total += abs(va - vb)
        else:
            total += 0.0 if va == vb else 1.0
    return total / view.p


def minmax_normalize(values: np.ndarray) -> np.ndarray:
    """Min-max scale the off-diagonal entries to [0,1]; all-equal maps to all 1."""
    n = values.shape[0]
    out = np.zeros_like(values, dtype=np.float64)
    if n < 2:
        return out
    mask = ~np.eye(n, dtype=bool)
    off = values[mask]
    lo, hi = off.min(), off.max()
    if hi == lo:
        out[mask] = 1.0
    else:
        out[mask] = (off - lo) / (hi - lo)
    return out


def rank_distance_matrix(rank: np.ndarray) -> np.ndarray:
    """|r_i - r_j| as a float matrix."""
    r = np.asarray(rank, dtype=np.float64)
    return np.abs(r[:, None] - r[None, :])


def build_space_pair(view: FeatureView, ranking) -> SpacePair:
    """Normalized Gower / rank-difference matrices and their distortion."""
    if ranking.n != view.n:
        raise SizeMismatch(f"ranking covers {ranking.n} rows, view has {view.n}")
    d_in = minmax_normalize(view.gower_matrix())
    d_out = minmax_normalize(rank_distance_matrix(ranking.rank))
    distortion = np.abs(d_in - d_out)
    np.fill_diagonal(distortion, 0.0)
    for m in (d_in, d_out, distortion):
        m.setflags(write=False)
    return SpacePair(
        input=DistanceMatrix(d_in, normalized=True),
        output=DistanceMatrix(d_out, normalized=True),
        distortion=distortion,
    )


def nearest_neighbors(view: FeatureView, i: int, h: int = 4) -> np.ndarray:
    """Ids of the ``h`` rows closest to ``i`` in Gower distance (``i`` excluded).

    Ties are broken by ascending id, so results are reproducible.
    """
    n = view.n
    if h >= n:
        raise HTooLarge(f"h={h} must be < n={n}")
    d = view.gower_matrix()[i].copy()
    d[i] = np.inf
    # stable sort on distance keeps ascending id among exact ties
    order = np.argsort(d, kind="stable")
    return order[:h].astype(np.int64)


def all_nearest_neighbors(view: FeatureView, h: int = 4) -> np.ndarray:
    """n x h matrix of neighbor ids, same tie rule as :func:`nearest_neighbors`."""
    n = view.n
    if h >= n:
        raise HTooLarge(f"h={h} must be < n={n}")
    d = view.gower_matrix().copy()
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")
    return order[:, :h].astype(np.int64)


@dataclass(frozen=True)
class Embedding2D:
    coords: np.ndarray  # n x 2


def embed_2d(dm: DistanceMatrix) -> Embedding2D:
    """Classical metric MDS onto two axes.

    Double-centers the squared-distance matrix, takes the top-2 eigenpairs of
    the Gram matrix and scales eigenvectors by sqrt(eigenvalue). Negative
    eigenvalues (non-Euclidean inputs) clamp to zero. Each axis is flipped so
    its largest-magnitude coordinate is positive, which makes the output
    deterministic up to the eigensolver itself.
    """
    d = np.asarray(dm.values, dtype=np.float64)
    n = d.shape[0]
    if d.shape != (n, n) or not np.allclose(d, d.T):
        raise SizeMismatch("distance matrix must be square and symmetric")
    sq = d * d
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * (j @ sq @ j)
    gram = 0.5 * (gram + gram.T)  # fight asymmetry from rounding
    eigvals, eigvecs = np.linalg.eigh(gram)
    coords = np.zeros((n, 2), dtype=np.float64)
    for axis in range(2):
        lam = eigvals[-1 - axis]
        if lam <= 0:
            continue
        vec = eigvecs[:, -1 - axis] * np.sqrt(lam)
        k = int(np.argmax(np.abs(vec)))
        if vec[k] < 0:
            vec = -vec
        coords[:, axis] = vec
    coords.setflags(write=False)
    return Embedding2D(coords=coords)
