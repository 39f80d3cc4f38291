import math

import numpy as np
import pytest

from hexsep.geom import (
    HexGrid,
    HexIndex,
    are_hex_neighbors,
    axial_cells,
    axial_center,
    cells_touch,
    hamming,
)

import oracles

SQRT3 = math.sqrt(3.0)


class TestCenters:
    def test_origin_cell_center(self):
        assert axial_center(0, 0, 0.1) == (0.0, 0.0)

    def test_axial_basis(self):
        # one step in i moves 1.5R right and sqrt(3)R/2 up; one step in j
        # moves sqrt(3)R straight up
        R = 0.25
        assert axial_center(1, 0, R) == pytest.approx((1.5 * R, SQRT3 * R / 2))
        assert axial_center(0, 1, R) == pytest.approx((0.0, SQRT3 * R))

    def test_matches_oracle_lattice(self):
        R = 0.37
        for i in range(-4, 5):
            for j in range(-4, 5):
                assert axial_center(i, j, R) == pytest.approx(
                    oracles.hex_center(i, j, R), abs=1e-12)

    def test_adjacent_center_distance(self):
        # any two touching cells sit exactly sqrt(3)R apart
        R = 0.2
        cx, cy = axial_center(2, -1, R)
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
            nx, ny = axial_center(2 + di, -1 + dj, R)
            assert math.hypot(nx - cx, ny - cy) == pytest.approx(SQRT3 * R)

    def test_origin_offset(self):
        g = HexGrid(circumradius=0.1, origin=(0.3, -0.2))
        base = HexGrid(circumradius=0.1)
        bx, by = base.cell_center((2, 1))
        gx, gy = g.cell_center((2, 1))
        assert (gx - bx, gy - by) == pytest.approx((0.3, -0.2))


class TestLocate:
    def test_center_maps_to_own_cell(self):
        g = HexGrid(circumradius=0.11)
        for i in range(-3, 4):
            for j in range(-3, 4):
                assert g.locate(g.cell_center((i, j))) == (i, j)

    def test_against_exhaustive_nearest_center(self):
        R = 0.09
        g = HexGrid(circumradius=R)
        rng = np.random.default_rng(101)
        pts = rng.uniform(-1.0, 1.0, (300, 2))
        for p in pts:
            assert tuple(g.locate(p)) == oracles.hex_cell_by_search(p, R, span=3)

    def test_point_lies_in_assigned_polygon(self):
        R = 0.13
        g = HexGrid(circumradius=R)
        rng = np.random.default_rng(7)
        pts = rng.uniform(-0.8, 0.8, (400, 2))
        for p in pts:
            idx = g.locate(p)
            assert oracles.point_in_hexagon(p, g.cell_center(idx), R, slack=1e-9)

    def test_vectorized_matches_scalar(self):
        R = 0.21
        g = HexGrid(circumradius=R)
        rng = np.random.default_rng(55)
        pts = rng.uniform(-2, 2, (500, 2))
        cells = axial_cells(pts, R)
        for p, (i, j) in zip(pts, cells):
            assert g.locate(p) == (i, j)

    def test_boundary_tie_is_lexicographic(self):
        # the midpoint of a shared edge is equidistant from both centers and
        # must resolve to the smaller (i, j)
        R = 1.0
        g = HexGrid(circumradius=R)
        a = np.array(g.cell_center((0, 0)))
        b = np.array(g.cell_center((0, 1)))
        mid = (a + b) / 2.0
        assert tuple(g.locate(mid)) == (0, 0)
        c = np.array(g.cell_center((1, 0)))
        assert tuple(g.locate((a + c) / 2.0)) == (0, 0)

    def test_partition_covers_plane(self):
        # cells tile: shifting a point by one cell's lattice vector shifts
        # its index accordingly
        R = 0.3
        g = HexGrid(circumradius=R)
        rng = np.random.default_rng(11)
        for p in rng.uniform(-1, 1, (100, 2)):
            i, j = g.locate(p)
            q = (p[0] + 1.5 * R, p[1] + SQRT3 * R / 2)
            assert g.locate(q) == (i + 1, j)


class TestPolygon:
    def test_vertices_on_circumcircle(self):
        g = HexGrid(circumradius=0.4)
        cx, cy = g.cell_center((1, 1))
        poly = g.cell_polygon((1, 1))
        assert len(poly) == 6
        for vx, vy in poly:
            assert math.hypot(vx - cx, vy - cy) == pytest.approx(0.4)

    def test_flat_top_orientation(self):
        # a flat-top hexagon has vertices at angles 0 and 180 degrees
        g = HexGrid(circumradius=1.0)
        xs = sorted(vx for vx, vy in g.cell_polygon((0, 0)))
        assert xs[0] == pytest.approx(-1.0)
        assert xs[-1] == pytest.approx(1.0)

    def test_area_sums_to_one(self):
        # the covering of the unit square has at least the square's area
        g = HexGrid(circumradius=0.05)
        cells = g.cells_in_unit_square()
        hex_area = 1.5 * SQRT3 * 0.05 ** 2
        assert len(cells) * hex_area >= 1.0

    def test_covering_is_tight(self):
        # every covering cell actually intersects the square: its center
        # cannot be farther than one circumradius from the square
        g = HexGrid(circumradius=0.07)
        for idx in g.cells_in_unit_square():
            cx, cy = g.cell_center(idx)
            dx = max(0.0 - cx, 0.0, cx - 1.0)
            dy = max(0.0 - cy, 0.0, cy - 1.0)
            assert math.hypot(dx, dy) <= 0.07 + 1e-12

    def test_unit_square_points_located_in_covering(self):
        g = HexGrid(circumradius=0.11)
        cover = set(g.cells_in_unit_square())
        rng = np.random.default_rng(3)
        for p in rng.random((300, 2)):
            assert tuple(g.locate(p)) in cover


class TestHamming:
    def test_frozen_examples(self):
        assert hamming((0, 0), (0, 0)) == 0
        assert hamming((0, 0), (1, 0)) == 1
        assert hamming((0, 0), (1, 1)) == 2
        assert hamming((2, -3), (2, 5)) == 8
        assert hamming((2, -3), (4, -3)) == 2

    def test_wraparound(self):
        assert hamming((0, 0), (9, 9), m_grid=10) == 2
        assert hamming((0, 0), (9, 0), m_grid=10) == 1
        assert hamming((1, 1), (1, 1), m_grid=4) == 0

    def test_symmetry(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            a = tuple(rng.integers(-5, 6, 2))
            b = tuple(rng.integers(-5, 6, 2))
            assert hamming(a, b) == hamming(b, a)
            assert hamming(a, b, m_grid=7) == hamming(b, a, m_grid=7)


class TestNeighborRules:
    def test_index_rule_frozen_examples(self):
        assert are_hex_neighbors((0, 0), (1, 1))
        assert are_hex_neighbors((0, 0), (0, 1))
        assert not are_hex_neighbors((0, 0), (0, 2))
        assert not are_hex_neighbors((0, 0), (2, 1))

    def test_index_rule_is_box(self):
        # the index rule admits exactly the 8 cells of the surrounding box
        center = (3, -2)
        admitted = [
            (i, j)
            for i in range(-1, 6)
            for j in range(-6, 3)
            if (i, j) != center and are_hex_neighbors(center, (i, j))
        ]
        assert len(admitted) == 8

    def test_touching_is_six_cells(self):
        center = (3, -2)
        touching = [
            (i, j)
            for i in range(-1, 6)
            for j in range(-6, 3)
            if (i, j) != center and cells_touch(center, (i, j))
        ]
        assert len(touching) == 6
        # the two admitted-but-not-touching cells are the axial diagonals
        assert cells_touch(center, center)
        assert not cells_touch(center, (4, -1))
        assert not cells_touch(center, (2, -3))

    def test_touching_matches_center_distance_oracle(self):
        for di in range(-2, 3):
            for dj in range(-2, 3):
                got = cells_touch((0, 0), (di, dj))
                want = oracles.cells_touch_by_distance((0, 0), (di, dj))
                assert got == want, (di, dj)

    def test_touching_implies_index_rule(self):
        rng = np.random.default_rng(40)
        for _ in range(300):
            a = tuple(rng.integers(-6, 7, 2))
            b = tuple(rng.integers(-6, 7, 2))
            if a != b and cells_touch(a, b):
                assert are_hex_neighbors(a, b)

    def test_wrapped_neighbors(self):
        assert cells_touch((0, 0), (9, 0), m_grid=10)
        assert are_hex_neighbors((0, 0), (9, 9), m_grid=10)
        assert not cells_touch((0, 0), (5, 5), m_grid=10)


class TestTorus:
    def test_frozen_shift_examples(self):
        g = HexGrid(circumradius=0.1, torus=True, m_grid=10)
        assert g.torus_shift((9, 9), 1, 1) == (0, 0)
        g8 = HexGrid(circumradius=0.1, torus=True, m_grid=8)
        assert g8.torus_shift((2, 7), -3, 5) == (7, 4)

    def test_shift_is_group_action(self):
        g = HexGrid(circumradius=0.1, torus=True, m_grid=6)
        rng = np.random.default_rng(9)
        for _ in range(200):
            idx = HexIndex(int(rng.integers(0, 6)), int(rng.integers(0, 6)))
            k1, l1, k2, l2 = (int(v) for v in rng.integers(-10, 11, 4))
            once = g.torus_shift(g.torus_shift(idx, k1, l1), k2, l2)
            both = g.torus_shift(idx, k1 + k2, l1 + l2)
            assert once == both
            assert g.torus_shift(idx, 0, 0) == idx

    def test_shift_inverse(self):
        g = HexGrid(circumradius=0.1, torus=True, m_grid=5)
        for i in range(5):
            for j in range(5):
                moved = g.torus_shift((i, j), 3, -7)
                back = g.torus_shift(moved, -3, 7)
                assert back == (i, j)

    def test_shift_requires_torus(self):
        g = HexGrid(circumradius=0.1)
        with pytest.raises(ValueError):
            g.torus_shift((0, 0), 1, 0)
