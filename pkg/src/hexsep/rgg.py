"""Random geometric graphs on the unit square, in two connectivity modes.

``continuum`` joins two points whenever their Euclidean distance is at most
r.  ``hex`` overlays the hexagonal partition with cell circumradius r/4 and
joins two points whenever their cells coincide or share a boundary.  Every
hex edge then has length at most (2 + sqrt(3)) r / 4 < r, so the hex graph
is always a subgraph of the continuum graph on the same points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .geom import HexGrid, Point2, axial_cells

MODE_CONTINUUM = "continuum"
MODE_HEX = "hex"
MODES = (MODE_CONTINUUM, MODE_HEX)

_EMPTY32 = np.empty(0, dtype=np.int32)

# forward half of the six touching-cell offsets; the other half is covered
# by symmetry when enumerating unordered pairs
_FORWARD_OFFSETS = ((0, 1), (1, -1), (1, 0))

_CELL_BIAS = 1 << 30
_CELL_STRIDE = 1 << 31


def as_points_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (n, 2)")
    return pts


def _cell_keys(cells: np.ndarray) -> np.ndarray:
    i = cells[:, 0].astype(np.int64)
    j = cells[:, 1].astype(np.int64)
    return (i + _CELL_BIAS) * _CELL_STRIDE + (j + _CELL_BIAS)


def _hex_cell_graph(cells: np.ndarray):
    """Unique cells, per-point cell ids, and touching-cell pair arrays."""
    ucells, inverse = np.unique(cells, axis=0, return_inverse=True)
    keys = _cell_keys(ucells)  # sorted, since np.unique sorts rows
    pa, pb = [], []
    for di, dj in _FORWARD_OFFSETS:
        want = keys + di * _CELL_STRIDE + dj
        pos = np.searchsorted(keys, want)
        pos = np.clip(pos, 0, len(keys) - 1)
        hit = keys[pos] == want
        pa.append(np.nonzero(hit)[0])
        pb.append(pos[hit])
    a = np.concatenate(pa).astype(np.int32) if pa else _EMPTY32
    b = np.concatenate(pb).astype(np.int32) if pb else _EMPTY32
    return ucells, inverse.astype(np.int64), a, b


def _hex_point_labels(pts: np.ndarray, r: float) -> np.ndarray:
    """Component labels of the hex-mode graph (min point index per component)."""
    n = len(pts)
    if n == 0:
        return _EMPTY32
    cells = axial_cells(pts, r / 4.0)
    ucells, inverse, ca, cb = _hex_cell_graph(cells)
    cell_labels = kernels.union_labels(len(ucells), ca, cb)
    comp = cell_labels[inverse]
    first = np.full(len(ucells), n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n, dtype=np.int64))
    return first[comp].astype(np.int32)


def _run_products(sorted_idx, s1, c1, s2, c2):
    """Index pairs from the cartesian products of matched index runs."""
    tot = (c1 * c2).astype(np.int64)
    T = int(tot.sum())
    if T == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    t_of = np.repeat(np.arange(len(tot)), tot)
    within = np.arange(T) - np.repeat(np.cumsum(tot) - tot, tot)
    ii = within // c2[t_of]
    jj = within % c2[t_of]
    return sorted_idx[s1[t_of] + ii], sorted_idx[s2[t_of] + jj]


def _hex_point_pairs(pts: np.ndarray, r: float):
    """All unordered point pairs whose cells coincide or touch (a < b)."""
    n = len(pts)
    if n < 2:
        return _EMPTY32, _EMPTY32
    cells = axial_cells(pts, r / 4.0)
    keys = _cell_keys(cells)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    ukeys, starts = np.unique(skeys, return_index=True)
    counts = np.diff(np.append(starts, n))

    out_a, out_b = [], []
    # within-cell pairs: product of a run with itself, upper triangle
    a, b = _run_products(order, starts, counts, starts, counts)
    keep = a < b
    out_a.append(a[keep])
    out_b.append(b[keep])
    # cross-cell pairs for each forward touching offset
    for di, dj in _FORWARD_OFFSETS:
        want = ukeys + di * _CELL_STRIDE + dj
        pos = np.searchsorted(ukeys, want)
        pos = np.clip(pos, 0, len(ukeys) - 1)
        hit = ukeys[pos] == want
        if not hit.any():
            continue
        a, b = _run_products(order, starts[hit], counts[hit],
                             starts[pos[hit]], counts[pos[hit]])
        out_a.append(np.minimum(a, b))
        out_b.append(np.maximum(a, b))
    return (np.concatenate(out_a).astype(np.int32),
            np.concatenate(out_b).astype(np.int32))


@dataclass
class Graph:
    """A geometric graph instance: points, radius, connectivity mode."""

    points: np.ndarray
    radius: float
    mode: str
    edge_a: np.ndarray = field(repr=False)
    edge_b: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def edge_count(self) -> int:
        return len(self.edge_a)

    @cached_property
    def edges(self) -> frozenset:
        """Unordered index pairs, materialized as a set of (u, v), u < v."""
        return frozenset(zip(self.edge_a.tolist(), self.edge_b.tolist()))

    def edge_lengths(self) -> np.ndarray:
        d = self.points[self.edge_a] - self.points[self.edge_b]
        return np.hypot(d[:, 0], d[:, 1])


def build_graph(points, r: float, mode: str = MODE_CONTINUUM) -> Graph:
    """Construct the geometric graph for one mode.

    Continuum candidate pairs come from a uniform spatial hash with cell
    size r; hex pairs from cell-bucket joins.  Either way the result is
    identical to the quadratic all-pairs rule.
    """
    pts = as_points_array(points)
    if r <= 0:
        raise ValueError("radius must be positive")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == MODE_CONTINUUM:
        a, b = kernels.radius_pairs(pts, r)
    else:
        a, b = _hex_point_pairs(pts, r)
    return Graph(points=pts, radius=r, mode=mode, edge_a=a, edge_b=b)


@dataclass
class ClusterSet:
    """A partition of points into clusters.

    Cluster ids are the smallest member index of each cluster, so they are
    stable under any backend and insertion order.  ``centers`` holds the
    representative point of each cluster: member centroids for connected
    components, fitted centers for the clustering pipeline.
    """

    points: np.ndarray
    labels: np.ndarray
    centers: dict[int, Point2]

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def cluster_ids(self) -> list[int]:
        return sorted(int(c) for c in np.unique(self.labels)) if self.n else []

    @cached_property
    def sizes(self) -> dict[int, int]:
        ids, counts = np.unique(self.labels, return_counts=True)
        return {int(c): int(k) for c, k in zip(ids, counts)}

    def members(self, cluster_id: int) -> np.ndarray:
        return np.nonzero(self.labels == cluster_id)[0]


def _centroids(pts: np.ndarray, labels: np.ndarray) -> dict[int, Point2]:
    out = {}
    for cid in np.unique(labels):
        mem = pts[labels == cid]
        out[int(cid)] = Point2(float(mem[:, 0].mean()), float(mem[:, 1].mean()))
    return out


def connected_components(g: Graph) -> ClusterSet:
    labels = kernels.union_labels(g.n, g.edge_a, g.edge_b)
    return ClusterSet(points=g.points, labels=labels,
                      centers=_centroids(g.points, labels) if g.n else {})


def component_labels(points, r: float, mode: str) -> np.ndarray:
    """Fast path to component labels without materializing a Graph."""
    pts = as_points_array(points)
    if mode == MODE_CONTINUUM:
        a, b = kernels.radius_pairs(pts, r)
        return kernels.union_labels(len(pts), a, b)
    if mode == MODE_HEX:
        return _hex_point_labels(pts, r)
    raise ValueError(f"mode must be one of {MODES}")


def largest_fraction(cs: ClusterSet) -> float:
    """Size of the largest cluster divided by the number of points."""
    if cs.n == 0:
        raise ValueError("empty cluster set")
    return int(np.bincount(cs.labels).max()) / cs.n


def largest_component_fraction(points, r: float, mode: str) -> float:
    pts = as_points_array(points)
    if len(pts) == 0:
        raise ValueError("empty point set")
    labels = component_labels(pts, r, mode)
    return int(np.bincount(labels).max()) / len(pts)


def has_majority_cluster(cs: ClusterSet, rho: float) -> bool:
    """True iff some cluster holds at least a rho fraction of all points.

    For rho > 1/2 at most one cluster can qualify, so the event is
    equivalently "the largest cluster reaches rho".
    """
    if not 0 < rho <= 1:
        raise ValueError("rho must be in (0, 1]")
    return largest_fraction(cs) >= rho


# offsets between (col, row) offset coordinates of touching cells depend on
# the parity of the source column
_OFFSET_NEIGHBORS_EVEN = ((0, 1), (0, -1), (1, 0), (1, -1), (-1, -1), (-1, 0))
_OFFSET_NEIGHBORS_ODD = ((0, 1), (0, -1), (1, 0), (1, 1), (-1, 0), (-1, 1))


def occupied_hex_fraction(points, r: float, torus: bool = False) -> float:
    """Largest cluster of occupied cells over the total cell count.

    A cell is occupied when at least one point lands in it; occupied cells
    cluster under the touching-cell relation.  With ``torus=True`` the cell
    indices additionally wrap modulo the column/row extent of the covering
    cell array, which can only add adjacencies, so the torus fraction is
    always >= the plain fraction on the same sample.
    """
    pts = as_points_array(points)
    if r <= 0:
        raise ValueError("radius must be positive")
    grid = HexGrid(circumradius=r / 4.0)
    covering = grid.cells_in_unit_square()
    total = len(covering)
    if len(pts) == 0 or total == 0:
        return 0.0

    cols = np.array([c.i for c in covering])
    rows = np.array([c.j + (c.i >> 1) for c in covering])
    col_lo, n_cols = int(cols.min()), int(cols.max() - cols.min() + 1)
    row_lo, n_rows = int(rows.min()), int(rows.max() - rows.min() + 1)

    cells = axial_cells(pts, r / 4.0)
    occ = np.unique(cells, axis=0)
    occ_col = occ[:, 0]
    occ_row = occ[:, 1] + (occ[:, 0] >> 1)
    index = {(int(c), int(w)): k for k, (c, w) in enumerate(zip(occ_col, occ_row))}

    pa, pb = [], []
    for k, (c, w) in enumerate(zip(occ_col, occ_row)):
        offsets = _OFFSET_NEIGHBORS_EVEN if (c % 2 == 0) else _OFFSET_NEIGHBORS_ODD
        for dc, dw in offsets:
            nc, nw = int(c + dc), int(w + dw)
            if torus:
                nc = (nc - col_lo) % n_cols + col_lo
                nw = (nw - row_lo) % n_rows + row_lo
            other = index.get((nc, nw))
            if other is not None and other != k:
                pa.append(k)
                pb.append(other)
    labels = kernels.union_labels(
        len(occ), np.array(pa, dtype=np.int32), np.array(pb, dtype=np.int32)
    )
    return int(np.bincount(labels).max()) / total
