"""Monte Carlo estimation of majority-cluster probabilities.

Trials are coupled by construction: the points of trial t depend only on
the process seed and t (counter-style seed derivation), never on worker
scheduling, evaluation order, or which radii were probed.  Evaluating
several radii or both connectivity modes therefore reuses the exact same
samples, which makes the per-trial monotonicity below exact rather than
statistical:

* continuum indicators are non-decreasing in r on every trial (growing r
  only adds edges);
* a hex success implies a continuum success at the same r on the same
  trial (the hex graph is a subgraph).

Both facts are asserted on every run that computes them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import rgg
from .rgg import MODE_CONTINUUM, MODE_HEX
from . import kernels

#: Seed used when the caller provides none.  A fixed constant, not entropy,
#: so unconfigured runs are reproducible.
DEFAULT_SEED = 1729

SQRT2 = math.sqrt(2.0)

#: two-sided 95% normal quantile, for Wilson score intervals
Z95 = 1.959963984540054

FIXED_COUNT = "fixed"
POISSON_COUNT = "poisson"


@dataclass(frozen=True)
class NodeProcessSpec:
    """A distribution over point sets in the unit square.

    ``kind`` is "fixed" (exactly ``size`` points) or "poisson" (Poisson
    count with intensity ``size``); points are i.i.d. uniform either way.
    """

    kind: str = FIXED_COUNT
    size: float = 100
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in (FIXED_COUNT, POISSON_COUNT):
            raise ValueError("kind must be 'fixed' or 'poisson'")
        if self.size <= 0:
            raise ValueError("size must be positive")
        if self.kind == FIXED_COUNT and int(self.size) != self.size:
            raise ValueError("fixed-count size must be an integer")


def trial_rng(spec: NodeProcessSpec, trial: int) -> np.random.Generator:
    """Independent generator for one trial, a pure function of (seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(trial,)))


def sample_points(spec: NodeProcessSpec, trial: int = 0) -> np.ndarray:
    """Draw the point set of one trial; same (spec, trial) gives same output."""
    rng = trial_rng(spec, trial)
    if spec.kind == FIXED_COUNT:
        n = int(spec.size)
    else:
        n = int(rng.poisson(spec.size))
    return rng.random((n, 2))


def full_connectivity_radius(pts: np.ndarray) -> float:
    """Twice the largest pairwise distance (0 for fewer than two points)."""
    n = len(pts)
    if n < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return 2.0 * float(np.sqrt((diff ** 2).sum(axis=2)).max())


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval; always contains the point estimate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    # p = 0 and p = 1 touch the boundary exactly; roundoff must not move them
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class ProbEstimate:
    """Estimated probability that some cluster holds a rho fraction."""

    p_hat: float
    ci_low: float
    ci_high: float
    successes: int
    trials: int
    rho: float
    r: float | str
    mode: str


def _check_rho(rho: float) -> None:
    if not 0.5 < rho < 1.0:
        raise ValueError("rho must be in (1/2, 1)")


def _map_trials(trials: int, workers: int, fn: Callable[[int], object]) -> list:
    """Evaluate fn(0..trials-1); results are ordered by trial index, so the
    outcome is independent of the worker count."""
    results: list = [None] * trials
    if workers <= 1:
        for t in range(trials):
            results[t] = fn(t)
        return results

    def run_block(lo: int, hi: int) -> None:
        for t in range(lo, hi):
            results[t] = fn(t)

    block = max(1, math.ceil(trials / (workers * 4)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_block, lo, min(lo + block, trials))
            for lo in range(0, trials, block)
        ]
        for f in futures:
            f.result()
    return results


def _majority_fraction(pts: np.ndarray, r: float, mode: str) -> float:
    n = len(pts)
    if n == 0:
        return 0.0
    if mode == MODE_CONTINUUM and r >= SQRT2:
        return 1.0  # unit-square diameter; the graph is complete
    labels = rgg.component_labels(pts, r, mode)
    return int(np.bincount(labels).max()) / n


def _resolve_radius(pts: np.ndarray, r: float | str, mode: str) -> float:
    if r == "full":
        if mode != MODE_CONTINUUM:
            raise ValueError("the 'full' radius shortcut applies to continuum mode")
        return full_connectivity_radius(pts) if len(pts) > 1 else 1.0
    if not isinstance(r, (int, float)) or r <= 0:
        raise ValueError("radius must be positive or 'full'")
    return float(r)


def estimate_probability(spec: NodeProcessSpec, rho: float, r: float | str,
                         mode: str = MODE_CONTINUUM, trials: int = 100,
                         workers: int = 1) -> ProbEstimate:
    """Fraction of trials on which some cluster reaches rho, with 95% CI.

    ``r`` may be the string "full", meaning twice the largest pairwise
    distance of each trial, which yields a complete graph and success on
    every trial.
    """
    _check_rho(rho)
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def one(t: int) -> bool:
        pts = sample_points(spec, t)
        if len(pts) == 0:
            return False
        rr = _resolve_radius(pts, r, mode)
        return _majority_fraction(pts, rr, mode) >= rho

    hits = _map_trials(trials, workers, one)
    successes = int(np.count_nonzero(hits))
    lo, hi = wilson_interval(successes, trials)
    return ProbEstimate(p_hat=successes / trials, ci_low=lo, ci_high=hi,
                        successes=successes, trials=trials, rho=rho, r=r, mode=mode)


@dataclass(frozen=True)
class ThresholdCurve:
    """Coupled estimates of the majority-cluster probability along radii."""

    spec: NodeProcessSpec
    rho: float
    mode: str
    radii: np.ndarray
    p_hat: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    trials: int
    coupled: bool = True


def _continuum_indicator_row(pts: np.ndarray, radii: np.ndarray, rho: float) -> np.ndarray:
    """Per-trial success indicators for all radii from one union-find sweep."""
    n = len(pts)
    if n == 0:
        return np.zeros(len(radii), dtype=bool)
    cap = min(float(radii[-1]), SQRT2)
    a, b = kernels.radius_pairs(pts, cap)
    d = pts[a.astype(np.int64)] - pts[b.astype(np.int64)]
    d2 = d[:, 0] ** 2 + d[:, 1] ** 2
    order = np.argsort(d2, kind="stable")
    fr = kernels.max_fraction_sweep(n, a[order], b[order], d2[order],
                                    np.minimum(radii, SQRT2) ** 2)
    return fr >= rho


def _validated_radii(radii) -> np.ndarray:
    arr = np.asarray(sorted(set(float(r) for r in radii)), dtype=np.float64)
    if len(arr) == 0:
        raise ValueError("need at least one radius")
    if arr[0] <= 0:
        raise ValueError("radii must be positive")
    return arr


def threshold_curve(spec: NodeProcessSpec, rho: float, mode: str, radii,
                    trials: int = 100, workers: int = 1) -> ThresholdCurve:
    """Estimate the probability curve over a radius ladder, coupled per trial.

    Every trial draws one point set and evaluates it at all radii.  In
    continuum mode the per-trial indicators are checked to be exactly
    non-decreasing, hence so is the estimated curve.
    """
    _check_rho(rho)
    if mode not in rgg.MODES:
        raise ValueError(f"mode must be one of {rgg.MODES}")
    arr = _validated_radii(radii)

    def one(t: int) -> np.ndarray:
        pts = sample_points(spec, t)
        if mode == MODE_CONTINUUM:
            ind = _continuum_indicator_row(pts, arr, rho)
            if not np.all(np.diff(ind.astype(np.int8)) >= 0):
                raise AssertionError("continuum indicators must grow with r")
            return ind
        if len(pts) == 0:
            return np.zeros(len(arr), dtype=bool)
        return np.array(
            [_majority_fraction(pts, r, mode) >= rho for r in arr], dtype=bool
        )

    rows = np.array(_map_trials(trials, workers, one))
    succ = rows.sum(axis=0)
    bounds = np.array([wilson_interval(int(k), trials) for k in succ])
    return ThresholdCurve(spec=spec, rho=rho, mode=mode, radii=arr,
                          p_hat=succ / trials, ci_low=bounds[:, 0],
                          ci_high=bounds[:, 1], trials=trials)


def compare_curves(spec: NodeProcessSpec, rho: float, radii, trials: int = 100,
                   workers: int = 1) -> tuple[ThresholdCurve, ThresholdCurve]:
    """Both connectivity modes on identical samples.

    Asserts, per trial and radius, that a hex success implies a continuum
    success (subgraph containment).
    """
    _check_rho(rho)
    arr = _validated_radii(radii)

    def one(t: int):
        pts = sample_points(spec, t)
        cont = _continuum_indicator_row(pts, arr, rho)
        if not np.all(np.diff(cont.astype(np.int8)) >= 0):
            raise AssertionError("continuum indicators must grow with r")
        if len(pts) == 0:
            hexes = np.zeros(len(arr), dtype=bool)
        else:
            hexes = np.array(
                [_majority_fraction(pts, r, MODE_HEX) >= rho for r in arr], dtype=bool
            )
        if np.any(hexes & ~cont):
            raise AssertionError("hex success without continuum success")
        return cont, hexes

    both = _map_trials(trials, workers, one)
    curves = []
    for k in range(2):
        rows = np.array([pair[k] for pair in both])
        succ = rows.sum(axis=0)
        bounds = np.array([wilson_interval(int(s), trials) for s in succ])
        curves.append(ThresholdCurve(
            spec=spec, rho=rho, mode=(MODE_CONTINUUM, MODE_HEX)[k], radii=arr,
            p_hat=succ / trials, ci_low=bounds[:, 0], ci_high=bounds[:, 1],
            trials=trials))
    return curves[0], curves[1]


def compare_models(spec: NodeProcessSpec, rho: float, r: float | str,
                   trials: int = 100, workers: int = 1
                   ) -> tuple[ProbEstimate, ProbEstimate]:
    """Continuum and hex estimates at one radius on identical samples."""
    _check_rho(rho)

    def one(t: int):
        pts = sample_points(spec, t)
        if len(pts) == 0:
            return False, False
        rr = full_connectivity_radius(pts) if r == "full" else float(r)
        if rr <= 0:
            rr = 1.0  # single point: any positive radius, trivially connected
        cont = _majority_fraction(pts, rr, MODE_CONTINUUM) >= rho
        hexes = _majority_fraction(pts, rr, MODE_HEX) >= rho
        if hexes and not cont:
            raise AssertionError("hex success without continuum success")
        return cont, hexes

    both = _map_trials(trials, workers, one)
    out = []
    for k, mode in enumerate((MODE_CONTINUUM, MODE_HEX)):
        successes = sum(1 for pair in both if pair[k])
        lo, hi = wilson_interval(successes, trials)
        out.append(ProbEstimate(p_hat=successes / trials, ci_low=lo, ci_high=hi,
                                successes=successes, trials=trials, rho=rho,
                                r=r, mode=mode))
    return out[0], out[1]


def _dyadic_step(tol: float) -> float:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return 2.0 ** math.floor(math.log2(tol))


def estimate_quantile_radius(spec: NodeProcessSpec, rho: float, mode: str,
                             eps: float, trials: int = 100, tol: float = 2 ** -10,
                             workers: int = 1,
                             _cache: dict | None = None) -> float:
    """Smallest dyadic-grid radius whose estimated probability reaches eps.

    Bisection over radii snapped to a fixed grid of step 2^k <= tol; all
    probes reuse the same coupled samples, so on a monotone curve the
    returned radius is the exact grid infimum.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    g = _dyadic_step(tol)
    cache = _cache if _cache is not None else {}

    def prob(radius: float) -> float:
        if radius not in cache:
            cache[radius] = estimate_probability(
                spec, rho, radius, mode, trials, workers).p_hat
        return cache[radius]

    lo = 0.0  # virtual left end with probability 0
    hi = math.ceil(SQRT2 / g) * g
    if prob(hi) < eps:
        raise RuntimeError("probability below eps even at the diameter cap")
    first = g
    if prob(first) >= eps:
        return first
    lo = first
    while hi - lo > g * 1.5:
        mid = round(((lo + hi) / 2.0) / g) * g
        if mid <= lo:
            mid = lo + g
        if mid >= hi:
            mid = hi - g
        if prob(mid) >= eps:
            hi = mid
        else:
            lo = mid
    return hi


def estimate_threshold_width(spec: NodeProcessSpec, rho: float, eps: float,
                             mode: str = MODE_CONTINUUM, trials: int = 100,
                             tol: float = 2 ** -10, workers: int = 1) -> dict:
    """Width of the probability transition: r(1 - eps) - r(eps), coupled.

    Both quantiles are read off the same cached grid evaluations; the upper
    quantile search starts at the lower one, so the width is >= 0 by
    construction.
    """
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must be in (0, 1/2)")
    g = _dyadic_step(tol)
    cache: dict = {}
    r_low = estimate_quantile_radius(spec, rho, mode, eps, trials, tol,
                                     workers, _cache=cache)
    if cache[r_low] >= 1.0 - eps:
        r_high = r_low
    else:
        # bisect within [r_low, cap] for the upper quantile
        def prob(radius: float) -> float:
            if radius not in cache:
                cache[radius] = estimate_probability(
                    spec, rho, radius, mode, trials, workers).p_hat
            return cache[radius]

        lo = r_low
        hi = math.ceil(SQRT2 / g) * g
        if prob(hi) < 1.0 - eps:
            raise RuntimeError("probability below 1 - eps even at the diameter cap")
        while hi - lo > g * 1.5:
            mid = round(((lo + hi) / 2.0) / g) * g
            if mid <= lo:
                mid = lo + g
            if mid >= hi:
                mid = hi - g
            if prob(mid) >= 1.0 - eps:
                hi = mid
            else:
                lo = mid
        r_high = hi
    return {
        "r_low": r_low,
        "r_high": r_high,
        "width": r_high - r_low,
        "eps": eps,
        "grid_step": g,
    }
