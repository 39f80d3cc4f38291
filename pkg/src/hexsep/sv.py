"""Support-vector harvesting around the shifted plane.

All comparisons use an absolute tolerance of 1e-9: points within that of
an exact attainment count as attaining, which keeps the sets deterministic
under floating-point noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pipeline import AnomalyReport, DetectorModel, Hyperplane

TOL = 1e-9


def _round_harvest(report: AnomalyReport, active: list[int], d_abs: np.ndarray,
                   rounds: int, pick_min: bool) -> list[int]:
    """Shared removal loop for both sides.

    Each round takes every active point attaining the side's extremum of
    |distance| (within TOL), then retires those points together with the
    whole class of the lowest-index attainer.  The anomaly side extremizes
    toward the plane (min), the regular side away from it (max).
    """
    labels = report.clusters.labels
    out: list[int] = []
    active = list(active)
    for _ in range(rounds):
        if not active:
            break
        vals = d_abs[active]
        target = vals.min() if pick_min else vals.max()
        hit = [p for p, v in zip(active, vals) if abs(v - target) <= TOL]
        out.extend(hit)
        drop_class = labels[hit[0]]
        hit_set = set(hit)
        active = [p for p in active
                  if p not in hit_set and labels[p] != drop_class]
    return sorted(int(p) for p in out)


def extract_anomaly_side(report: AnomalyReport, h: Hyperplane, gamma: float,
                         n0: int) -> list[int]:
    """Anomalies nearest the shifted plane, accumulated per removal round.

    Round k shifts the plane against the surviving anomalies; the survivors
    minimizing the distance to it are exactly those minimizing |distance to
    the base plane| (every survivor sits beyond the shifted plane), so the
    harvest is independent of gamma.  At most n0^2 rounds run; each round
    also retires the class of its lowest-index attainer.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    return _round_harvest(report, list(report.anomalous_points),
                          np.abs(report.distances), n0 * n0, pick_min=True)


def extract_regular_side(report: AnomalyReport, h: Hyperplane, gamma: float,
                         n0: int) -> list[int]:
    """Symmetric harvest over the regular side: per round, the surviving
    regular points farthest from the base plane (nearest the shifted plane
    from inside the band)."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    return _round_harvest(report, list(report.regular_points),
                          np.abs(report.distances), n0 * n0, pick_min=False)


def equivalency_class(report: AnomalyReport, model: DetectorModel) -> list[int]:
    """Points interchangeable with the pivot anomaly x_star.

    The set joins (a) the anomalies attaining the minimal |distance| and
    (b) every point whose distance to the shifted plane (the geometric
    plane at signed offset side * theta_gamma) is at most the margin
    d_theta.  Nonempty whenever any anomaly exists: x_star belongs to (a).
    """
    X = report.anomalous_points
    if len(X) == 0:
        return []
    d_abs = np.abs(report.distances)
    m = d_abs[X].min()
    attainers = {int(p) for p in X if d_abs[p] - m <= TOL}
    plane_pos = model.side * model.theta_gamma
    band = np.abs(report.distances - plane_pos) <= model.d_theta + TOL
    return sorted(attainers | {int(p) for p in np.nonzero(band)[0]})


@dataclass
class SupportVectorSet:
    """The three harvested sets plus the pivot anomaly."""

    anomaly_side: list[int]
    regular_side: list[int]
    equivalent: list[int]
    x_star: int


def collect_support_vectors(report: AnomalyReport, h: Hyperplane,
                            model: DetectorModel, n0: int) -> SupportVectorSet:
    return SupportVectorSet(
        anomaly_side=extract_anomaly_side(report, h, model.gamma, n0),
        regular_side=extract_regular_side(report, h, model.gamma, n0),
        equivalent=equivalency_class(report, model),
        x_star=model.x_star,
    )
