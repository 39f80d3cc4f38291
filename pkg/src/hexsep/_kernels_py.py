"""Pure numpy/scipy implementation of the component kernels.

Used when the compiled extension is unavailable (or disabled with
HEXSEP_PURE=1).  Must stay observationally identical to the compiled
backend: same pair sets, same canonical labels.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

_EMPTY = np.empty(0, dtype=np.int32)


def radius_pairs(pts: np.ndarray, r: float):
    """All index pairs (a < b) with Euclidean distance <= r."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if len(pts) < 2:
        return _EMPTY, _EMPTY
    pairs = cKDTree(pts).query_pairs(r, output_type="ndarray")
    return pairs[:, 0].astype(np.int32), pairs[:, 1].astype(np.int32)


def union_labels(n: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Component labels for n nodes under edges (a[k], b[k]).

    The label of every node is the smallest node index in its component.
    """
    if n == 0:
        return _EMPTY
    if len(a) == 0:
        return np.arange(n, dtype=np.int32)
    g = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
    ncomp, comp = connected_components(g, directed=False)
    first = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n, dtype=np.int64))
    return first[comp].astype(np.int32)


def max_fraction_sweep(n: int, a: np.ndarray, b: np.ndarray,
                       d2: np.ndarray, radii2: np.ndarray) -> np.ndarray:
    """Largest-component fraction after inserting edges up to each radius.

    ``d2`` must be ascending (pairs sorted by squared length), ``radii2``
    ascending squared radii.  Output is non-decreasing by construction.
    """
    out = np.empty(len(radii2), dtype=np.float64)
    for k, r2 in enumerate(radii2):
        m = int(np.searchsorted(d2, r2, side="right"))
        labels = union_labels(n, a[:m], b[:m])
        out[k] = np.bincount(labels).max() / n
    return out
