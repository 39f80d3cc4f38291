"""Independent reference implementations used to check the package.

Everything here deliberately takes a different computational route from the
library code: full distance matrices instead of spatial hashing, boolean
matrix closure instead of union-find, dense eigensolvers instead of power
iteration, explicit quadratic formulas instead of atan2, and plain Python
loops instead of vectorized harvesting.  Slow is fine; these run at test
sizes only.
"""

from __future__ import annotations

import math

import numpy as np

SQRT3 = math.sqrt(3.0)


# ----------------------------------------------------------------- graphs

def brute_radius_pairs(pts: np.ndarray, r: float) -> set[tuple[int, int]]:
    """All i<j with Euclidean distance <= r, via the full distance matrix."""
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    n = len(pts)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            if d2[i, j] <= r * r:
                out.add((i, j))
    return out


def closure_components(n: int, pairs) -> np.ndarray:
    """Component labels (min member index) by boolean-matrix closure."""
    adj = np.eye(n, dtype=bool)
    for i, j in pairs:
        adj[i, j] = adj[j, i] = True
    while True:
        nxt = adj @ adj
        if (nxt == adj).all():
            break
        adj = nxt
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        labels[i] = int(np.nonzero(adj[i])[0][0])
    return labels


def hex_center(i: int, j: int, R: float) -> tuple[float, float]:
    return 1.5 * R * i, SQRT3 * R * (j + i / 2.0)


def hex_cell_by_search(p, R: float, span: int = 40) -> tuple[int, int]:
    """Nearest hexagon center over an exhaustive index window.

    Ties broken toward the lexicographically smallest (i, j), matching the
    documented boundary convention.
    """
    x, y = float(p[0]), float(p[1])
    ci = int(round(x / (1.5 * R)))
    cj = int(round(y / (SQRT3 * R) - ci / 2.0))
    best = None
    for i in range(ci - span, ci + span + 1):
        for j in range(cj - span, cj + span + 1):
            hx, hy = hex_center(i, j, R)
            d2 = (x - hx) ** 2 + (y - hy) ** 2
            key = (d2, i, j)
            if best is None or key < best:
                best = key
    return best[1], best[2]


def point_in_hexagon(p, center, R: float, slack: float = 1e-12) -> bool:
    """Half-plane membership test for a flat-top hexagon."""
    x = float(p[0]) - center[0]
    y = float(p[1]) - center[1]
    apothem = SQRT3 / 2.0 * R
    for k in range(6):
        ang = math.pi / 6.0 + k * math.pi / 3.0
        if x * math.cos(ang) + y * math.sin(ang) > apothem + slack:
            return False
    return True


def cells_touch_by_distance(a, b, R: float = 1.0) -> bool:
    """Two cells share an edge iff their centers sit sqrt(3)*R apart."""
    if tuple(a) == tuple(b):
        return True
    ax, ay = hex_center(a[0], a[1], R)
    bx, by = hex_center(b[0], b[1], R)
    d = math.hypot(ax - bx, ay - by)
    return abs(d - SQRT3 * R) <= 1e-9 * R


# --------------------------------------------------------------- spectral

def eigh_axes(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top two covariance eigenvectors via the dense symmetric solver."""
    centered = rows - rows.mean(axis=0)
    cov = centered.T @ centered / len(rows)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1]
    axes = vecs[:, order[:2]].T.copy()
    for k in range(2):
        for c in axes[k]:
            if abs(c) > 1e-12:
                if c < 0:
                    axes[k] = -axes[k]
                break
    return axes, vals[order[:2]]


def tls_line_quadratic(pts: np.ndarray) -> tuple[np.ndarray, float]:
    """Total-least-squares line via the explicit 2x2 quadratic formula.

    Returns a unit normal w and offset theta with w @ p = theta on the line.
    The normal is the scatter matrix eigenvector of the smaller eigenvalue.
    """
    c = pts.mean(axis=0)
    d = pts - c
    sxx = float(d[:, 0] @ d[:, 0])
    syy = float(d[:, 1] @ d[:, 1])
    sxy = float(d[:, 0] @ d[:, 1])
    tr = sxx + syy
    det = sxx * syy - sxy * sxy
    lam = tr / 2.0 - math.sqrt(max(tr * tr / 4.0 - det, 0.0))
    # eigenvector of [[sxx, sxy], [sxy, syy]] for eigenvalue lam; both rows
    # of (S - lam I) give a candidate, keep the better-conditioned one
    cand1 = np.array([sxy, lam - sxx])
    cand2 = np.array([lam - syy, sxy])
    w = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    if np.linalg.norm(w) < 1e-300:
        w = np.array([1.0, 0.0]) if sxx <= syy else np.array([0.0, 1.0])
    w = w / np.linalg.norm(w)
    for comp in w:
        if abs(comp) > 1e-12:
            if comp < 0:
                w = -w
            break
    return w, float(w @ c)


# -------------------------------------------------------------- intervals

def wilson_by_roots(successes: int, trials: int, z: float) -> tuple[float, float]:
    """Score interval endpoints as roots of its defining quadratic."""
    p = successes / trials
    a = 1.0 + z * z / trials
    b = -(2.0 * p + z * z / trials)
    c = p * p
    roots = np.roots([a, b, c])
    lo, hi = sorted(float(np.real(r)) for r in roots)
    return max(0.0, lo), min(1.0, hi)


# --------------------------------------------------------- sv re-creation

def removal_rounds(labels, d_abs, start: list[int], rounds: int,
                   minimize: bool, tol: float = 1e-9) -> list[int]:
    """Re-simulate the round-based harvest with plain Python floats.

    Each round finds the extremal |distance| among survivors, collects every
    survivor within tol of it, then drops the collected points and the whole
    class of the smallest-index collected point.
    """
    survivors = sorted(int(i) for i in start)
    taken: list[int] = []
    for _ in range(rounds):
        if not survivors:
            break
        ranked = sorted(survivors, key=lambda i: (float(d_abs[i]), i))
        pivot = ranked[0] if minimize else ranked[-1]
        target = float(d_abs[pivot])
        group = [i for i in survivors if abs(float(d_abs[i]) - target) <= tol]
        taken.extend(group)
        dead_class = labels[min(group)]
        dead = set(group)
        survivors = [i for i in survivors
                     if i not in dead and labels[i] != dead_class]
    return sorted(taken)


def equivalency_members(distances, d_abs, anomalous: list[int], side: int,
                        theta_gamma: float, d_theta: float,
                        tol: float = 1e-9) -> list[int]:
    """Literal membership test for the equivalent-point set."""
    if not anomalous:
        return []
    m = min(float(d_abs[i]) for i in anomalous)
    out = set()
    for i in anomalous:
        if float(d_abs[i]) - m <= tol:
            out.add(int(i))
    for i in range(len(distances)):
        if abs(float(distances[i]) - side * theta_gamma) <= d_theta + tol:
            out.add(int(i))
    return sorted(out)
