"""Analytic detection pipeline.

Raw rows are projected to the plane (top-2 principal axes via iterated
power method, deterministic start), scaled into the unit square, clustered
with a radius bound taken from the hexagonal closed forms, and split by a
total-least-squares hyperplane: points whose distance to the plane reaches
the cell circumradius R0 are anomalies.  A gamma-controlled shift of the
plane toward the anomalies turns the split into an activation rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .geom import Point2
from .rgg import ClusterSet, as_points_array
from .thresh import circumradius


class IngestError(ValueError):
    """Raised for malformed input rows; carries 1-based row/column hints."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        where = ""
        if row is not None:
            where += f" (row {row}"
            where += f", column {column})" if column is not None else ")"
        super().__init__(message + where)
        self.row = row
        self.column = column


class NotSeparableError(RuntimeError):
    """No anomalies were found, so no shifted plane exists."""


def _power_axis(C: np.ndarray, orth: np.ndarray | None = None,
                max_iter: int = 5000, tol: float = 1e-14):
    """Dominant eigenvector of a PSD matrix by power iteration.

    Start vector is fixed (all-ones, then basis vectors if degenerate); with
    ``orth`` given, iterates are kept orthogonal to it, yielding the leading
    eigenvector of the deflated operator.
    """
    d = C.shape[0]
    starts = [np.ones(d)] + [np.eye(d)[k] for k in range(d)]
    v = None
    for cand in starts:
        w = cand.astype(np.float64).copy()
        if orth is not None:
            w -= (w @ orth) * orth
        nw = np.linalg.norm(w)
        if nw > 1e-12:
            v = w / nw
            break
    if v is None:
        raise ValueError("no start vector available")
    for _ in range(max_iter):
        w = C @ v
        if orth is not None:
            w -= (w @ orth) * orth
        nw = np.linalg.norm(w)
        if nw <= 1e-300:
            break  # null direction: keep the deterministic start
        w /= nw
        if np.linalg.norm(w - v) <= tol:
            v = w
            break
        v = w
    lam = float(v @ C @ v)
    return v, lam


def _fix_sign(v: np.ndarray) -> np.ndarray:
    for comp in v:
        if abs(comp) > 1e-12:
            return v if comp > 0 else -v
    return v


@dataclass
class ProjectionTransform:
    """Everything needed to reproject a batch the way ingest() did.

    ``apply`` is batch-level: with rank uniformization the coordinates are
    ranks within the supplied batch, so only the training batch round-trips
    exactly.
    """

    center: np.ndarray
    axes: np.ndarray           # (2, d), orthonormal rows
    axis_variance: np.ndarray  # (2,)
    rank_uniformized: bool
    scale_min: np.ndarray      # (2,)
    scale_span: np.ndarray     # (2,)

    def apply(self, rows) -> np.ndarray:
        X = np.asarray(rows, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.center):
            raise ValueError("row width does not match the fitted transform")
        scores = (X - self.center) @ self.axes.T
        if self.rank_uniformized:
            n = len(scores)
            scores = np.column_stack(
                [rankdata(scores[:, k], method="average") / (n + 1) for k in range(2)]
            )
        out = np.empty_like(scores)
        for k in range(2):
            if self.scale_span[k] > 0:
                out[:, k] = (scores[:, k] - self.scale_min[k]) / self.scale_span[k]
            else:
                out[:, k] = 0.5  # no spread on this axis
        return out


@dataclass
class Dataset:
    """Projected input: n_rows points in the unit square plus the transform."""

    raw_dim: int
    n_rows: int
    projected: np.ndarray
    transform: ProjectionTransform


def ingest(rows, rank_uniformize: bool = False) -> Dataset:
    """Project numeric rows to the plane and scale into the unit square.

    The two projection axes are the top principal directions of the row
    covariance, found by power iteration with deflation; each axis is
    oriented so its first nonzero component is positive.  Optionally each
    projected coordinate is replaced by rank/(n+1) before scaling.
    """
    try:
        X = np.asarray(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise IngestError(f"non-numeric input: {exc}") from exc
    if X.ndim != 2:
        raise IngestError("input must be rows of equal width")
    n, d = X.shape
    if d < 2:
        raise IngestError("need at least 2 columns to project")
    if n < 2:
        raise IngestError("need at least 2 rows")
    bad = ~np.isfinite(X)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise IngestError("non-finite value", row=int(r) + 1, column=int(c) + 1)

    center = X.mean(axis=0)
    Xc = X - center
    C = (Xc.T @ Xc) / n
    if float(np.trace(C)) <= 1e-24:
        raise IngestError("degenerate input: zero variance in every column")

    v1, lam1 = _power_axis(C)
    v2, lam2 = _power_axis(C - lam1 * np.outer(v1, v1), orth=v1)
    v1 = _fix_sign(v1)
    v2 = _fix_sign(v2)
    axes = np.vstack([v1, v2])

    scores = Xc @ axes.T
    if rank_uniformize:
        scores = np.column_stack(
            [rankdata(scores[:, k], method="average") / (n + 1) for k in range(2)]
        )
    mins = scores.min(axis=0)
    spans = scores.max(axis=0) - mins
    # a span at floating-point noise level is no spread at all; scaling it
    # up to the unit interval would manufacture geometry from roundoff
    spans[spans <= 1e-12 * spans.max()] = 0.0
    transform = ProjectionTransform(
        center=center, axes=axes,
        axis_variance=np.array([lam1, lam2]),
        rank_uniformized=rank_uniformize,
        scale_min=mins, scale_span=spans,
    )
    projected = np.empty_like(scores)
    for k in range(2):
        if spans[k] > 0:
            projected[:, k] = (scores[:, k] - mins[k]) / spans[k]
        else:
            projected[:, k] = 0.5
    return Dataset(raw_dim=d, n_rows=n, projected=projected, transform=transform)


def cluster(points, m: int, n: int) -> ClusterSet:
    """Radius-bounded clustering with bound circumradius(m, n).

    A leader-follower pass assigns each point to the nearest existing
    center within the bound or opens a new cluster at the point; Lloyd
    recentering repeats the pass until the partition is stable (at most
    100 rounds).  Any member left farther than the bound from its final
    center is re-seeded as a singleton, so the bound holds at termination.
    """
    pts = as_points_array(points)
    n_pts = len(pts)
    if n_pts == 0:
        raise ValueError("no points to cluster")
    if n_pts > m * m:
        raise ValueError(f"{n_pts} points exceed the m^2 = {m * m} design size")
    if n_pts < m * m:
        warnings.warn(f"clustering {n_pts} points against a design size of {m * m}",
                      stacklevel=2)
    bound = circumradius(m, n)

    def assign_pass(centers: np.ndarray):
        cl = list(centers)
        assign = np.empty(n_pts, dtype=np.int64)
        for idx in range(n_pts):
            if cl:
                arr = np.asarray(cl)
                d2 = ((arr - pts[idx]) ** 2).sum(axis=1)
                best = int(np.argmin(d2))
                if d2[best] <= bound * bound:
                    assign[idx] = best
                    continue
            cl.append(pts[idx].copy())
            assign[idx] = len(cl) - 1
        return assign, np.asarray(cl)

    assign, centers = assign_pass(np.empty((0, 2)))
    prev_labels = None
    for _ in range(100):
        # recenter on members, dropping empty clusters
        new_centers = [pts[assign == cid].mean(axis=0)
                       for cid in range(len(centers)) if (assign == cid).any()]
        centers = np.asarray(new_centers)
        assign, centers = assign_pass(centers)
        labels = _canonical_labels(assign)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels

    # enforce the bound: stragglers become singletons, other centers stay
    center_of = {}
    for idx in range(n_pts):
        c = centers[assign[idx]]
        if np.hypot(*(pts[idx] - c)) > bound:
            assign[idx] = -(idx + 1)  # unique singleton marker
            center_of[idx] = pts[idx]
    labels = _canonical_labels(assign)
    centers_map: dict[int, Point2] = {}
    for cid in np.unique(labels):
        members = np.nonzero(labels == cid)[0]
        head = int(members[0])
        if head in center_of:
            c = center_of[head]
        else:
            c = centers[assign[head]]
        centers_map[int(cid)] = Point2(float(c[0]), float(c[1]))
    return ClusterSet(points=pts, labels=labels.astype(np.int32), centers=centers_map)


def _canonical_labels(assign: np.ndarray) -> np.ndarray:
    """Relabel an assignment so each cluster id is its smallest member index."""
    out = np.empty(len(assign), dtype=np.int64)
    seen: dict[int, int] = {}
    for idx, a in enumerate(assign):
        key = int(a)
        if key not in seen:
            seen[key] = idx
        out[idx] = seen[key]
    return out


@dataclass(frozen=True)
class Hyperplane:
    """Oriented line w . p = theta with unit normal w."""

    w: np.ndarray
    theta: float


def fit_hyperplane(points) -> Hyperplane:
    """Total-least-squares line through the centroid.

    The line direction is the principal axis of the 2x2 scatter (closed
    half-angle form); the normal w is its perpendicular, oriented so the
    first nonzero component is positive, and theta = w . centroid.
    """
    pts = as_points_array(points)
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    c = pts.mean(axis=0)
    dx = pts[:, 0] - c[0]
    dy = pts[:, 1] - c[1]
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    sxy = float(dx @ dy)
    angle = 0.5 * math.atan2(2.0 * sxy, sxx - syy)  # principal-axis direction
    w = _fix_sign(np.array([-math.sin(angle), math.cos(angle)]))
    return Hyperplane(w=w, theta=float(w @ c))


def signed_distance(p, h: Hyperplane) -> float:
    """Signed offset of a point from the plane (w is unit, so a distance)."""
    return float(h.w[0] * p[0] + h.w[1] * p[1] - h.theta)


def signed_distances(points, h: Hyperplane) -> np.ndarray:
    pts = as_points_array(points)
    return pts @ h.w - h.theta


@dataclass
class AnomalyReport:
    """Outcome of the segregation step for one clustered dataset."""

    clusters: ClusterSet
    hyperplane: Hyperplane
    r0: float
    distances: np.ndarray          # signed distance per point
    anomalous_classes: list[int]
    anomalous_points: np.ndarray   # indices (X), sorted
    regular_points: np.ndarray     # indices (X^c), sorted


def detect(clusters: ClusterSet, h: Hyperplane, r0: float) -> AnomalyReport:
    """Split points and classes by distance-to-plane against the radius r0.

    A class is anomalous iff its center is at distance >= r0 from the
    plane; a point is anomalous iff it is, regardless of its class.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    dist = signed_distances(clusters.points, h)
    anom_mask = np.abs(dist) >= r0
    anom_classes = sorted(
        cid for cid, ctr in clusters.centers.items()
        if abs(signed_distance(ctr, h)) >= r0
    )
    return AnomalyReport(
        clusters=clusters, hyperplane=h, r0=r0, distances=dist,
        anomalous_classes=anom_classes,
        anomalous_points=np.nonzero(anom_mask)[0],
        regular_points=np.nonzero(~anom_mask)[0],
    )


@dataclass(frozen=True)
class DetectorModel:
    """Shifted-plane detector derived from one anomaly report."""

    base: Hyperplane
    gamma: float
    d_theta: float
    theta_gamma: float
    x_star: int
    y_hat: int | None
    w_shift: np.ndarray
    side: int  # sign of the innermost anomaly's signed distance


def compute_shift(report: AnomalyReport, h: Hyperplane, gamma: float) -> DetectorModel:
    """Place the detection band between the farthest regular point and the
    nearest anomaly.

    theta_gamma interpolates between those two absolute distances
    (gamma -> 0 hugs the anomaly, gamma -> 1 hugs the regular side) and is
    strictly decreasing in gamma.  Raises NotSeparableError when there is
    no anomaly at all, and ValueError on an inconsistent report where the
    margin d_theta is not positive.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    X = report.anomalous_points
    if len(X) == 0:
        raise NotSeparableError("no anomalous points: nothing to separate")
    d_abs = np.abs(report.distances)
    if len(report.regular_points) > 0:
        sub = int(np.argmax(d_abs[report.regular_points]))
        y_hat: int | None = int(report.regular_points[sub])
        y_dist = float(d_abs[y_hat])
    else:
        y_hat = None
        y_dist = 0.0  # empty regular side: measure from the plane itself
    sub = int(np.argmin(d_abs[X]))
    x_star = int(X[sub])
    d_theta = float(d_abs[x_star]) - y_dist
    if d_theta <= 0:
        raise ValueError("inconsistent report: no margin between the sides")
    theta_gamma = float(d_abs[x_star]) - gamma * d_theta
    return DetectorModel(
        base=h, gamma=gamma, d_theta=d_theta, theta_gamma=theta_gamma,
        x_star=x_star, y_hat=y_hat,
        w_shift=(1.0 + theta_gamma) * h.w,
        side=1 if report.distances[x_star] >= 0 else -1,
    )


def activation(model: DetectorModel, p) -> float:
    """phi(p) = w_shift . p - (theta + theta_gamma)."""
    h = model.base
    return float(model.w_shift[0] * p[0] + model.w_shift[1] * p[1]
                 - (h.theta + model.theta_gamma))


def activation_reflected(model: DetectorModel, p) -> float:
    """The mirrored activation, i.e. the same construction at -theta_gamma."""
    h = model.base
    w_hat = (1.0 - model.theta_gamma) * h.w
    return float(w_hat[0] * p[0] + w_hat[1] * p[1] - (h.theta - model.theta_gamma))


ANOMALOUS = "anomalous"
REGULAR = "regular"


def classify(model: DetectorModel, p) -> str:
    """Band rule: anomalous iff |signed distance to the base plane| >= theta_gamma."""
    return ANOMALOUS if abs(signed_distance(p, model.base)) >= model.theta_gamma else REGULAR


@dataclass
class PipelineResult:
    """Convenience bundle for one full run over projected points."""

    clusters: ClusterSet
    hyperplane: Hyperplane
    report: AnomalyReport
    model: DetectorModel
    n0: int   # side of the class grid implied by the recovered cluster count
    r0: float


def run_detection(points, m: int, n: int, gamma: float) -> PipelineResult:
    """cluster -> fit -> detect -> shift with R0 = circumradius(m, n0)."""
    pts = as_points_array(points)
    clusters_ = cluster(pts, m, n)
    k0 = len(clusters_.cluster_ids)
    n0 = math.ceil(math.sqrt(k0))
    r0 = circumradius(m, n0)
    h = fit_hyperplane(pts)
    report = detect(clusters_, h, r0)
    model = compute_shift(report, h, gamma)
    return PipelineResult(clusters=clusters_, hyperplane=h, report=report,
                          model=model, n0=n0, r0=r0)
