"""Command line interface.

Subcommands: threshold (closed forms), simulate (Monte Carlo curves),
cluster / detect / sv (the detection pipeline over CSV input).

Option resolution order, highest first: explicit flag, config file
(key=value lines via --config), the HEXSEP_SEED environment variable (seed
only), then built-in defaults.  The default seed is the fixed constant
1729, never entropy, so every unconfigured run is reproducible.

Exit codes for the pipeline commands: 0 on success, 1 on input that cannot
be ingested (with row/column diagnostics), 2 when no anomaly exists and so
no separating band can be built.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__, mc, pipeline, sv, thresh
from .rgg import MODE_CONTINUUM, MODE_HEX

ENV_SEED = "HEXSEP_SEED"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(_jsonable(payload), indent=2)
    if path:
        with open(path, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def load_config(path: str) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    try:
        with open(path) as f:
            for ln, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"line {ln}: expected key=value")
                key, _, value = line.partition("=")
                out[key.strip().lower()] = value.strip()
    except OSError as exc:
        raise ValueError(str(exc)) from exc
    return out


class Options:
    """Flag > config > environment (seed only) > default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name: str, cast, default):
        flag = getattr(self.args, name, None)
        if flag is not None:
            return flag
        if name in self.config:
            try:
                return cast(self.config[name])
            except ValueError as exc:
                raise ValueError(f"config key {name!r}: {exc}") from exc
        if name == "seed" and ENV_SEED in os.environ:
            try:
                return int(os.environ[ENV_SEED])
            except ValueError as exc:
                raise ValueError(f"{ENV_SEED} must be an integer") from exc
        return default


def read_points_csv(path: str, header: bool) -> list[list[float]]:
    """Parse numeric rows, reporting 1-based row/column on any bad cell."""
    rows: list[list[float]] = []
    width: int | None = None
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise pipeline.IngestError(f"cannot open input: {exc}")
    with fh:
        for rownum, rec in enumerate(csv.reader(fh), start=1):
            if header and rownum == 1:
                continue
            if not rec or all(not cell.strip() for cell in rec):
                continue
            vals = []
            for colnum, cell in enumerate(rec, start=1):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise pipeline.IngestError(
                        f"not a number: {cell.strip()!r}", row=rownum, column=colnum)
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise pipeline.IngestError(
                    f"expected {width} columns, found {len(vals)}", row=rownum)
            rows.append(vals)
    if not rows:
        raise pipeline.IngestError("no data rows in input")
    return rows


def _parse_radii(spec: str) -> list[float]:
    """Either comma-separated values or lo:hi:count (inclusive ladder)."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("radius ladder must be lo:hi:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1 or lo <= 0 or hi < lo:
            raise ValueError("invalid radius ladder")
        return list(np.linspace(lo, hi, count))
    vals = [float(tok) for tok in spec.split(",") if tok.strip()]
    if not vals:
        raise ValueError("empty radius list")
    return vals


# ---------------------------------------------------------------- threshold

def cmd_threshold(args: argparse.Namespace) -> int:
    opts = Options(args)
    m = opts.get("m", int, None)
    if m is None:
        print("threshold: --m is required", file=sys.stderr)
        return 1
    n = opts.get("n", int, None)
    rho = opts.get("rho", float, None)
    params = thresh.ThresholdParams.compute(m, n=n, rho=rho)
    payload = {
        "version": __version__,
        "command": "threshold",
        "m": params.m,
        "n": params.n,
        "hex_count": params.s,
        "circumradius": params.r,
        "cell_diameter": params.b,
        "critical_radius_estimate": params.r0_star,
        "threshold_interval_length": params.delta_star,
        "p_c": params.p_c,
        "majority_n": thresh.majority_n(m),
    }
    if rho is not None:
        n_real, k = thresh.expected_classes(m, rho)
        payload["rho"] = rho
        payload["n_real"] = n_real
        payload["expected_classes"] = k
    if args.json:
        _emit_json(payload, args.json if args.json != "-" else None)
    else:
        for key, value in payload.items():
            print(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return 0


# ----------------------------------------------------------------- simulate

def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_simulate(args: argparse.Namespace) -> int:
    opts = Options(args)
    seed = opts.get("seed", int, mc.DEFAULT_SEED)
    trials = opts.get("trials", int, 200)
    workers = opts.get("workers", int, 1)
    rho = opts.get("rho", float, 0.6)
    eps = opts.get("eps", float, 0.1)
    tol = opts.get("tol", float, 2.0 ** -10)
    mode = opts.get("mode", str, "both")
    if mode not in (MODE_CONTINUUM, MODE_HEX, "both"):
        print(f"simulate: unknown mode {mode!r}", file=sys.stderr)
        return 1
    if args.lam is not None:
        spec = mc.NodeProcessSpec(kind=mc.POISSON_COUNT, size=args.lam, seed=seed)
    else:
        spec = mc.NodeProcessSpec(kind=mc.FIXED_COUNT, size=args.n or 100, seed=seed)
    try:
        radii = _parse_radii(args.radii)
    except ValueError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 1

    if mode == "both":
        cont, hexc = mc.compare_curves(spec, rho, radii, trials, workers)
        curves = [cont, hexc]
    else:
        curves = [mc.threshold_curve(spec, rho, mode, radii, trials, workers)]

    lines = ["n,rho,mode,r,trials,p_hat,ci_low,ci_high,seed"]
    for curve in curves:
        for k, r in enumerate(curve.radii):
            lines.append(",".join([
                str(int(spec.size)) if spec.kind == mc.FIXED_COUNT else _fmt(spec.size),
                _fmt(rho), curve.mode, _fmt(r), str(trials),
                _fmt(curve.p_hat[k]), _fmt(curve.ci_low[k]), _fmt(curve.ci_high[k]),
                str(seed),
            ]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)

    if args.summary:
        summary: dict = {
            "version": __version__,
            "command": "simulate",
            "params": {
                "kind": spec.kind, "size": spec.size, "seed": seed,
                "rho": rho, "eps": eps, "tol": tol, "trials": trials,
                "mode": mode, "radii": list(map(float, radii)),
            },
            "curves": {},
        }
        for curve in curves:
            width = mc.estimate_threshold_width(
                spec, rho, eps, curve.mode, trials, tol, workers)
            median = mc.estimate_quantile_radius(
                spec, rho, curve.mode, 0.5, trials, tol, workers)
            entry = {
                "r_eps": width["r_low"],
                "r_1_minus_eps": width["r_high"],
                "delta_hat": width["width"],
                "r0_hat": median,
                "grid_step": width["grid_step"],
            }
            if curve.mode == MODE_HEX:
                entry["fitted_decay_slope"] = _decay_slope(curve, median)
            summary["curves"][curve.mode] = entry
        _emit_json(summary, args.summary if args.summary != "-" else None)
    return 0


def _decay_slope(curve: mc.ThresholdCurve, r0_hat: float) -> float | None:
    """Informational fit of log p_hat against r on the sub-median segment."""
    mask = (curve.radii < r0_hat) & (curve.p_hat > 0) & (curve.p_hat < 0.5)
    if mask.sum() < 2:
        return None
    x = curve.radii[mask]
    y = np.log(curve.p_hat[mask])
    slope = float(np.polyfit(x, y, 1)[0])
    return slope


# ------------------------------------------------------- pipeline commands

def _resolve_mn(opts: Options, n_rows: int) -> tuple[int, int]:
    m = opts.get("m", int, None)
    if m is None:
        root = math.isqrt(n_rows)
        m = root if root * root == n_rows else root + 1
    n = opts.get("n", int, None)
    if n is None:
        rho = opts.get("rho", float, None)
        if rho is not None:
            _, k = thresh.expected_classes(m, rho)
            n = math.isqrt(k)
        else:
            n = thresh.majority_n(m)
    n = min(n, m)
    return m, n


def _cluster_payload(result_clusters, projected) -> dict:
    sizes = result_clusters.sizes
    return {
        "count": len(result_clusters.cluster_ids),
        "sizes": {str(cid): sizes[cid] for cid in result_clusters.cluster_ids},
        "centers": {str(cid): list(result_clusters.centers[cid])
                    for cid in result_clusters.cluster_ids},
        "labels": result_clusters.labels,
        "points": projected,
    }


def _run_pipeline_command(args: argparse.Namespace, want: str) -> int:
    opts = Options(args)
    try:
        rows = read_points_csv(args.input, args.header)
        ds = pipeline.ingest(rows, rank_uniformize=args.rank_uniformize)
    except pipeline.IngestError as exc:
        print(f"{want}: {exc}", file=sys.stderr)
        return 1
    m, n = _resolve_mn(opts, ds.n_rows)
    gamma = opts.get("gamma", float, 0.5)
    seed = opts.get("seed", int, mc.DEFAULT_SEED)

    payload: dict = {
        "version": __version__,
        "command": want,
        "input": {
            "path": args.input,
            "rows": ds.n_rows,
            "raw_dim": ds.raw_dim,
            "rank_uniformized": args.rank_uniformize,
        },
        "params": {"m": m, "n": n, "gamma": gamma, "seed": seed},
        "projection": {
            "center": ds.transform.center,
            "axes": ds.transform.axes,
            "axis_variance": ds.transform.axis_variance,
        },
    }

    if want == "cluster":
        clusters = pipeline.cluster(ds.projected, m, n)
        payload["clusters"] = _cluster_payload(clusters, ds.projected)
        payload["clusters"]["radius_bound"] = thresh.circumradius(m, n)
        _emit_json(payload, args.out)
        return 0

    clusters = pipeline.cluster(ds.projected, m, n)
    k0 = len(clusters.cluster_ids)
    n0 = math.isqrt(k0) if math.isqrt(k0) ** 2 == k0 else math.isqrt(k0) + 1
    r0 = thresh.circumradius(m, n0)
    h = pipeline.fit_hyperplane(ds.projected)
    report = pipeline.detect(clusters, h, r0)
    payload["clusters"] = _cluster_payload(clusters, ds.projected)
    payload["clusters"]["radius_bound"] = thresh.circumradius(m, n)
    payload["clusters"]["n0"] = n0
    payload["hyperplane"] = {"w": h.w, "theta": h.theta}
    payload["anomalies"] = {
        "r0": r0,
        "classes": report.anomalous_classes,
        "points": report.anomalous_points,
        "regular_count": int(len(report.regular_points)),
        "distances": report.distances,
    }
    try:
        model = pipeline.compute_shift(report, h, gamma)
    except pipeline.NotSeparableError as exc:
        payload["detector"] = None
        _emit_json(payload, args.out)
        print(f"{want}: {exc}", file=sys.stderr)
        return 2
    payload["detector"] = {
        "gamma": gamma,
        "d_theta": model.d_theta,
        "theta_gamma": model.theta_gamma,
        "x_star": model.x_star,
        "y_hat": model.y_hat,
        "side": model.side,
        "w_shift": model.w_shift,
        "classification": [pipeline.classify(model, p) for p in ds.projected],
    }
    if want == "sv":
        vectors = sv.collect_support_vectors(report, h, model, n0)
        payload["support_vectors"] = {
            "anomaly_side": vectors.anomaly_side,
            "regular_side": vectors.regular_side,
            "equivalent": vectors.equivalent,
            "x_star": vectors.x_star,
        }
    _emit_json(payload, args.out)
    return 0


def cmd_cluster(args):
    return _run_pipeline_command(args, "cluster")


def cmd_detect(args):
    return _run_pipeline_command(args, "detect")


def cmd_sv(args):
    return _run_pipeline_command(args, "sv")


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexsep",
        description="Hexagonal-partition thresholds, percolation Monte Carlo, "
                    "and threshold-based anomaly detection.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="closed-form threshold quantities")
    p.add_argument("--m", type=int, help="sample grid side (m^2 points)")
    p.add_argument("--n", type=int, help="class grid side (n^2 classes)")
    p.add_argument("--rho", type=float, help="target occupancy in (0, p_c]")
    p.add_argument("--config", help="key=value defaults file")
    p.add_argument("--json", nargs="?", const="-", default=None,
                   help="emit JSON (optionally to a path)")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("simulate", help="Monte Carlo probability curves")
    p.add_argument("--n", type=int, help="points per trial (fixed-count process)")
    p.add_argument("--lam", type=float, help="Poisson intensity (overrides --n)")
    p.add_argument("--rho", type=float, help="majority fraction, in (1/2, 1)")
    p.add_argument("--mode", choices=[MODE_CONTINUUM, MODE_HEX, "both"])
    p.add_argument("--radii", required=True,
                   help="comma list of radii, or lo:hi:count ladder")
    p.add_argument("--trials", type=int)
    p.add_argument("--eps", type=float, help="quantile level for the summary")
    p.add_argument("--tol", type=float, help="radius grid resolution")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="key=value defaults file")
    p.add_argument("--out", help="curve CSV path (default stdout)")
    p.add_argument("--summary", nargs="?", const="-", default=None,
                   help="also estimate quantile radii; JSON (optionally to a path)")
    p.set_defaults(func=cmd_simulate)

    for name, fn, blurb in (
        ("cluster", cmd_cluster, "project and cluster CSV rows"),
        ("detect", cmd_detect, "full anomaly detection over CSV rows"),
        ("sv", cmd_sv, "detection plus support-vector extraction"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--input", required=True, help="CSV of numeric rows")
        p.add_argument("--header", action="store_true",
                       help="first row is a header, skip it")
        p.add_argument("--rank-uniformize", action="store_true",
                       help="rank-uniformize projected coordinates")
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--rho", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--config", help="key=value defaults file")
        p.add_argument("--out", help="JSON report path (default stdout)")
        p.set_defaults(func=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
