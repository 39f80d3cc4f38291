"""Closed-form threshold quantities for hexagon-partitioned samples.

Conventions: a sample of m^2 points is organized against a hexagonal
partition whose cell count is s(m, n) = m^2 + 2 m (n - 1)^2, where n is the
side of the class grid (n^2 classes).  All cells fit in the unit square, so
one cell's circumradius is r(m, n) = 1 / (2 sqrt(s)) and the cell diameter
is twice that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Site-percolation threshold of the hexagonal lattice, 1 - 2 sin(pi/18).
P_C = 1.0 - 2.0 * math.sin(math.pi / 18.0)


def _check_mn(m: int, n: int) -> None:
    if int(m) != m or int(n) != n:
        raise ValueError("m and n must be integers")
    if m < 1 or n < 1 or n > m:
        raise ValueError("require 1 <= n <= m")


def hex_count(m: int, n: int) -> int:
    """Number of hexagonal cells, m^2 + 2 m (n - 1)^2."""
    _check_mn(m, n)
    return m * m + 2 * m * (n - 1) ** 2


def circumradius(m: int, n: int) -> float:
    """Circumradius of one cell when hex_count(m, n) cells tile the square."""
    return 1.0 / (2.0 * math.sqrt(hex_count(m, n)))


def cell_diameter(m: int, n: int) -> float:
    """Diameter of one cell (twice the circumradius)."""
    return 2.0 * circumradius(m, n)


def expected_classes(m: int, rho: float) -> tuple[float, int]:
    """Class requirement at occupancy rho: real solution and integer count.

    Solves m^2 / hex_count(m, n) = rho for real n, rounds up (a fractional
    class requirement needs the next whole class), clamps the side to
    [1, m], and returns (n_real, side^2).
    """
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    if not 0.0 < rho <= P_C:
        raise ValueError("rho must be in (0, p_c]")
    n_real = 1.0 + math.sqrt(m * (1.0 - rho) / (2.0 * rho))
    side = min(max(math.ceil(n_real), 1), m)
    return n_real, side * side


def majority_n(m: int) -> int:
    """Class-grid side at which the sample occupies half of the cells."""
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    return int(math.floor(1.0 + math.sqrt(m / 2.0) + 0.5))


def critical_radius_estimate(m: int, n: int) -> float:
    """Midpoint estimate of the critical radius, (1/(2n) + circumradius)/2."""
    _check_mn(m, n)
    return (1.0 / (2.0 * n) + circumradius(m, n)) / 2.0


def threshold_interval_length(m: int, n: int) -> float:
    """Width of the threshold window, 1/(2n) - circumradius; O(1/n)."""
    _check_mn(m, n)
    length = 1.0 / (2.0 * n) - circumradius(m, n)
    if length <= 0.0:
        raise ValueError("degenerate window: 1/(2n) does not exceed the circumradius")
    return length


def connectivity_radius_scale(n_points: float) -> float:
    """Connectivity scale sqrt(ln n / n) for n points in the unit square."""
    if n_points < 2:
        raise ValueError("need at least 2 points")
    return math.sqrt(math.log(n_points) / n_points)


@dataclass(frozen=True)
class ThresholdParams:
    """Bundle of the closed-form quantities for one (m, n) configuration."""

    m: int
    n: int
    rho: float | None
    s: int
    r: float
    b: float
    r0_star: float
    delta_star: float
    p_c: float = P_C

    @classmethod
    def compute(cls, m: int, n: int | None = None, rho: float | None = None):
        """Derive everything from m; n falls back to a rho-derived side or,
        with neither given, to the majority-cluster default."""
        if n is None:
            if rho is not None:
                _, k = expected_classes(m, rho)
                n = math.isqrt(k)
            else:
                n = majority_n(m)
        _check_mn(m, n)
        return cls(
            m=m,
            n=n,
            rho=rho,
            s=hex_count(m, n),
            r=circumradius(m, n),
            b=cell_diameter(m, n),
            r0_star=critical_radius_estimate(m, n),
            delta_star=threshold_interval_length(m, n),
        )
