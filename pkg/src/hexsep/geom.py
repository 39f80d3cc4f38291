"""Hexagonal partition of the unit square.

Flat-top hexagonal cells indexed by axial coordinates (i, j).  A grid is
parameterized by the circumradius of one cell (the radius of the circle
through its six vertices), so the cell diameter is twice the circumradius.
Cells are clipped at the unit-square boundary; partial cells are valid
cells.  Optionally the index lattice wraps modulo ``m_grid`` on both axes,
which turns index arithmetic (shifts, distances, adjacency) into its torus
variant without changing the planar geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

SQRT3 = math.sqrt(3.0)


class Point2(NamedTuple):
    x: float
    y: float


class HexIndex(NamedTuple):
    i: int
    j: int


# Candidate cells probed by locate(), in lexicographic (di, dj) order so that
# an exact distance tie resolves to the lexicographically smallest index.
_LOCATE_OFFSETS = np.array(
    [(-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0)], dtype=np.int64
)

# Axial offsets of the six cells sharing a boundary with a given cell.
TOUCHING_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


def axial_center(idx_i, idx_j, circumradius: float, origin=(0.0, 0.0)):
    """Cell center(s) for axial indices; accepts scalars or arrays."""
    cx = origin[0] + 1.5 * circumradius * np.asarray(idx_i, dtype=np.float64)
    cy = origin[1] + SQRT3 * circumradius * (
        np.asarray(idx_j, dtype=np.float64) + np.asarray(idx_i, dtype=np.float64) / 2.0
    )
    return cx, cy


def axial_cells(points: np.ndarray, circumradius: float, origin=(0.0, 0.0)) -> np.ndarray:
    """Map points (n, 2) to containing-cell axial indices (n, 2).

    Fractional axial coordinates are cube-rounded, then refined by an exact
    nearest-center comparison over the rounded cell and its six neighbours.
    Since hexagonal cells are the Voronoi regions of their centers, the
    nearest center is the containing cell; exact distance ties go to the
    lexicographically smallest (i, j).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (n, 2)")
    if circumradius <= 0:
        raise ValueError("circumradius must be positive")
    dx = pts[:, 0] - origin[0]
    dy = pts[:, 1] - origin[1]
    qf = (2.0 / 3.0) * dx / circumradius
    rf = (-dx / 3.0 + (SQRT3 / 3.0) * dy) / circumradius

    # cube rounding: round each cube coordinate, then repair the one with the
    # largest rounding error so the coordinates still sum to zero
    xf, zf = qf, rf
    yf = -qf - rf
    rx = np.round(xf)
    ry = np.round(yf)
    rz = np.round(zf)
    ex = np.abs(rx - xf)
    ey = np.abs(ry - yf)
    ez = np.abs(rz - zf)
    fix_x = (ex > ey) & (ex > ez)
    fix_z = ~fix_x & (ez > ey)
    rx = np.where(fix_x, -ry - rz, rx)
    rz = np.where(fix_z, -rx - ry, rz)
    q0 = rx.astype(np.int64)
    r0 = rz.astype(np.int64)

    cand_i = q0[:, None] + _LOCATE_OFFSETS[:, 0][None, :]
    cand_j = r0[:, None] + _LOCATE_OFFSETS[:, 1][None, :]
    cx, cy = axial_center(cand_i, cand_j, circumradius, origin)
    d2 = (pts[:, 0][:, None] - cx) ** 2 + (pts[:, 1][:, None] - cy) ** 2
    best = np.argmin(d2, axis=1)  # first minimum == lexicographically smallest
    rows = np.arange(len(pts))
    return np.stack([cand_i[rows, best], cand_j[rows, best]], axis=1)


@dataclass(frozen=True)
class HexGrid:
    """Hexagonal partition with a fixed cell circumradius.

    ``origin`` is the center of cell (0, 0); by default the corner of the
    unit square.  With ``torus=True`` all index arithmetic is taken modulo
    ``m_grid`` on both axes.
    """

    circumradius: float
    origin: Point2 = field(default=Point2(0.0, 0.0))
    torus: bool = False
    m_grid: int | None = None

    def __post_init__(self):
        if self.circumradius <= 0:
            raise ValueError("circumradius must be positive")
        if self.torus and (self.m_grid is None or self.m_grid < 1):
            raise ValueError("torus grids need m_grid >= 1")

    def locate(self, p) -> HexIndex:
        """Containing cell of a point (ties to lexicographically smallest index)."""
        cell = axial_cells(np.array([[p[0], p[1]]]), self.circumradius, self.origin)[0]
        i, j = int(cell[0]), int(cell[1])
        if self.torus:
            i %= self.m_grid
            j %= self.m_grid
        return HexIndex(i, j)

    def cell_center(self, idx) -> Point2:
        cx, cy = axial_center(idx[0], idx[1], self.circumradius, self.origin)
        return Point2(float(cx), float(cy))

    def cell_polygon(self, idx) -> list[Point2]:
        """The six vertices of a cell, counter-clockwise from angle 0."""
        cx, cy = self.cell_center(idx)
        out = []
        for k in range(6):
            a = math.pi * k / 3.0
            out.append(Point2(cx + self.circumradius * math.cos(a),
                              cy + self.circumradius * math.sin(a)))
        return out

    def torus_shift(self, idx, k: int, l: int) -> HexIndex:
        """Translate an index by (k, l) modulo m_grid on both axes."""
        if not self.torus:
            raise ValueError("torus_shift requires a torus grid")
        m = self.m_grid
        return HexIndex((idx[0] + k) % m, (idx[1] + l) % m)

    def cells_in_unit_square(self) -> list[HexIndex]:
        """All cells whose closed hexagon intersects [0, 1]^2."""
        R = self.circumradius
        ox, oy = self.origin
        # column i has x-extent [ox + 1.5 R i - R, ox + 1.5 R i + R]
        i_lo = math.floor((0.0 - ox - R) / (1.5 * R))
        i_hi = math.ceil((1.0 - ox + R) / (1.5 * R))
        out = []
        for i in range(i_lo, i_hi + 1):
            cx = ox + 1.5 * R * i
            if cx + R < 0.0 or cx - R > 1.0:
                continue
            # row j has y-extent [cy - sqrt(3) R / 2, cy + sqrt(3) R / 2]
            j_lo = math.floor((0.0 - oy - SQRT3 * R / 2) / (SQRT3 * R) - i / 2.0)
            j_hi = math.ceil((1.0 - oy + SQRT3 * R / 2) / (SQRT3 * R) - i / 2.0)
            for j in range(j_lo, j_hi + 1):
                if _hex_intersects_unit_square(self, HexIndex(i, j)):
                    out.append(HexIndex(i, j))
        return out


def _hex_intersects_unit_square(grid: HexGrid, idx: HexIndex) -> bool:
    """Exact convex intersection test (separating axis) against [0, 1]^2."""
    verts = grid.cell_polygon(idx)
    xs = [v.x for v in verts]
    ys = [v.y for v in verts]
    # square's edge normals are the coordinate axes
    if max(xs) < 0.0 or min(xs) > 1.0 or max(ys) < 0.0 or min(ys) > 1.0:
        return False
    # hexagon edge normals: three distinct directions suffice (opposite edges
    # are parallel); project the square onto each
    square = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
    for k in range(3):
        a = verts[k]
        b = verts[k + 1]
        nx, ny = (b.y - a.y), (a.x - b.x)
        hex_proj = [nx * v.x + ny * v.y for v in verts]
        sq_proj = [nx * p[0] + ny * p[1] for p in square]
        if max(hex_proj) < min(sq_proj) or min(hex_proj) > max(sq_proj):
            return False
    return True


def _signed_wrap(d: int, m: int) -> int:
    """Representative of d mod m in [-m//2, m - m//2)."""
    return (d + m // 2) % m - m // 2


def hamming(a, b, m_grid: int | None = None) -> int:
    """Index distance |di| + |dj|, with circular axis distances when wrapped."""
    di = a[0] - b[0]
    dj = a[1] - b[1]
    if m_grid is not None:
        di = min(di % m_grid, (-di) % m_grid)
        dj = min(dj % m_grid, (-dj) % m_grid)
    return abs(di) + abs(dj)


def are_hex_neighbors(a, b, m_grid: int | None = None) -> bool:
    """Index-rule adjacency: hamming(a, b) <= 2 and each axis differs by <= 1.

    This is the coarse box rule on the index lattice.  It admits the two
    axial-diagonal pairs (+1, +1) and (-1, -1) whose cells do not share a
    boundary; use :func:`cells_touch` for geometric adjacency.
    """
    di = a[0] - b[0]
    dj = a[1] - b[1]
    if m_grid is not None:
        di = min(di % m_grid, (-di) % m_grid)
        dj = min(dj % m_grid, (-dj) % m_grid)
    return abs(di) <= 1 and abs(dj) <= 1 and abs(di) + abs(dj) <= 2


def cells_touch(a, b, m_grid: int | None = None) -> bool:
    """True iff the two cells are identical or share a boundary segment."""
    di = a[0] - b[0]
    dj = a[1] - b[1]
    if m_grid is not None:
        di = _signed_wrap(di, m_grid)
        dj = _signed_wrap(dj, m_grid)
    if di == 0 and dj == 0:
        return True
    return (di, dj) in TOUCHING_OFFSETS
