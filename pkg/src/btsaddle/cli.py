"""Command-line surface.

Every subcommand emits one JSON document (schema_version "1") to stdout
or --out; curve-producing commands can emit CSV instead (one file per
curve) and render a figure next to the data with --plot.  Output is
deterministic: no timestamps unless --timestamp is given.

Exit codes: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .core import MuParams, unfolding_rhs
from .duffing import DuffingParams, duffing_audit
from .equilibria import Curve, discriminant, solve_equilibria
from .errors import BtSaddleError
from .flow import IntegratorConfig, homoclinic_continuation, integrate
from .melnikov import (assemble_bifset, classify_region, hom_curve,
                       hom_loop_area, hom_param, m_het_closed,
                       m_het_quadrature, m_hom_area, m_hom_closed, nu2_min)
from .memristor import (MemristorParams, first_integral, lienard_reduce,
                        memristor_rhs, sphere_bounds, sphere_slices,
                        to_canonical)

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# argument plumbing


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _min2_int(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("minimum 2")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("minimum 1")
    return value


def _add_output_args(p: argparse.ArgumentParser, fmt: bool = False,
                     plot: bool = False) -> None:
    p.add_argument("--out", help="write the document here instead of stdout")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")
    if plot:
        p.add_argument("--plot", help="render a figure to this path")
    p.add_argument("--timestamp", action="store_true",
                   help="stamp the metadata (off by default for "
                        "reproducible output)")


def _add_tol_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--abs-tol", type=_positive_float, default=1e-10)
    p.add_argument("--rel-tol", type=_positive_float, default=1e-10)
    p.add_argument("--tol-root", type=_positive_float, default=1e-12)
    p.add_argument("--tol-boundary", type=_positive_float, default=1e-6)


def _config(args: argparse.Namespace) -> IntegratorConfig:
    return IntegratorConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


def _metadata(args: argparse.Namespace, **params) -> dict:
    md: dict = {"parameters": params}
    tols = {name: getattr(args, name) for name in
            ("abs_tol", "rel_tol", "tol_root", "tol_boundary")
            if hasattr(args, name)}
    if tols:
        md["tolerances"] = tols
    if getattr(args, "timestamp", False):
        md["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    return md


def _document(kind: str, metadata: dict, payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind,
            "metadata": metadata, "payload": payload}


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _curve_payload(curve: Curve) -> dict:
    entry = {"label": curve.label,
             "samples": [[float(a), float(b)] for a, b in curve.samples]}
    if curve.param is not None:
        entry["theta"] = [float(t) for t in curve.param]
    return entry


def _trajectory_payload(traj) -> dict:
    return {"times": [float(t) for t in traj.times],
            "states": [[float(v) for v in row] for row in traj.states]}


def _sanitize(label: str) -> str:
    return label.replace("+", "_plus").replace("-", "_minus")


def _write_curves_csv(curves: Sequence[Curve], prefix: str) -> list[str]:
    paths = []
    for curve in curves:
        path = f"{prefix}_{_sanitize(curve.label)}.csv"
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            header = ["mu2", "mu1"]
            if curve.param is not None:
                header.append("theta")
            writer.writerow(header)
            for i, (mu2, mu1) in enumerate(curve.samples):
                row = [format(mu2, ".17g"), format(mu1, ".17g")]
                if curve.param is not None:
                    row.append(format(curve.param[i], ".17g"))
                writer.writerow(row)
        paths.append(path)
    return paths


def _require_out_for_csv(args: argparse.Namespace) -> bool:
    if args.format == "csv" and not args.out:
        print("error: --format csv needs --out (used as the file prefix)",
              file=sys.stderr)
        return False
    return True


# ---------------------------------------------------------------------------
# subcommands


def cmd_bifset(args: argparse.Namespace) -> int:
    bs = assemble_bifset(args.mu3, args.resolution)
    points = [{"label": p.label.name, "mu2": p.mu2, "mu1": p.mu1}
              for p in bs.points]
    if args.format == "csv":
        if not _require_out_for_csv(args):
            return 2
        _write_curves_csv(bs.curves, args.out)
        path = f"{args.out}_points.csv"
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["label", "mu2", "mu1"])
            for p in points:
                writer.writerow([p["label"], format(p["mu2"], ".17g"),
                                 format(p["mu1"], ".17g")])
    else:
        payload = {"curves": [_curve_payload(c) for c in bs.curves],
                   "points": points}
        doc = _document("curves",
                        _metadata(args, mu3=args.mu3,
                                  resolution=args.resolution),
                        payload)
        _emit(doc, args.out)
    if args.plot:
        from ._plots import figure_bifset, save_figure
        save_figure(figure_bifset(bs), args.plot)
    return 0


def cmd_melnikov_het(args: argparse.Namespace) -> int:
    closed = m_het_closed(args.nu1, args.nu2, args.nu3)
    payload = {"closed": closed}
    if args.oracle:
        quadrature = m_het_quadrature(args.nu1, args.nu2, args.nu3,
                                      t_span=args.t_span)
        payload["quadrature"] = quadrature
        payload["rel_diff"] = abs(closed - quadrature) / (1.0 + abs(closed))
    doc = _document("report",
                    _metadata(args, nu1=args.nu1, nu2=args.nu2, nu3=args.nu3),
                    payload)
    _emit(doc, args.out)
    return 0


def cmd_melnikov_hom(args: argparse.Namespace) -> int:
    par = hom_param(args.theta)
    nu2 = args.nu2 if args.nu2 is not None else par.nu2
    payload = {"theta": par.theta, "nu2": par.nu2, "nu1": par.nu1,
               "closed": m_hom_closed(args.theta, nu2)}
    if args.check_curve:
        area = hom_loop_area(par.nu1, par.nu2)
        oracle = m_hom_area(par.nu1, par.nu2)
        payload["area_oracle"] = oracle
        payload["loop_area"] = area
        payload["oracle_over_area"] = oracle / area
    doc = _document("report", _metadata(args, theta=args.theta, nu2=nu2),
                    payload)
    _emit(doc, args.out)
    return 0


def cmd_shoot(args: argparse.Namespace) -> int:
    if not _require_out_for_csv(args):
        return 2
    _, nu2_star = nu2_min()
    fractions = np.linspace(args.margin, 1.0 - args.margin, args.samples)
    mu2_samples = [-args.mu3 * (1.0 + f * (nu2_star - 1.0)) for f in fractions]
    cfg = _config(args)
    pieces = []
    failures = []
    for mu2 in mu2_samples:
        try:
            pieces.append(homoclinic_continuation(args.mu3, [mu2], cfg))
        except BtSaddleError as exc:
            failures.append({"mu2": mu2,
                             "error": f"{exc.__class__.__name__}: {exc}"})
    if not pieces:
        print("error: every shooting sample failed", file=sys.stderr)
        return 1
    samples = np.vstack([c.samples for c in pieces])
    thetas = np.concatenate([c.param for c in pieces])
    order = np.argsort(thetas)
    numeric = Curve("hom_numeric", args.mu3, samples[order],
                    param=thetas[order])
    analytic = hom_curve(args.mu3)[0]
    metadata = _metadata(args, mu3=args.mu3, samples=args.samples,
                         margin=args.margin)
    metadata["failures"] = failures
    if args.format == "csv":
        _write_curves_csv([analytic, numeric], args.out)
    else:
        payload = {"curves": [_curve_payload(analytic),
                              _curve_payload(numeric)]}
        _emit(_document("curves", metadata, payload), args.out)
    if args.plot:
        from ._plots import figure_shoot, save_figure
        save_figure(figure_shoot(analytic, numeric), args.plot)
    return 0


def cmd_portrait(args: argparse.Namespace) -> int:
    mu = MuParams(args.mu1, args.mu2, args.mu3)
    cfg = IntegratorConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                           max_time=max(1e4, 2.0 * args.t_final))
    traj = integrate(unfolding_rhs(mu), (args.x, args.y),
                     (0.0, args.t_final), cfg)
    eqs = solve_equilibria(mu, tol_root=args.tol_root)
    metadata = _metadata(args, mu1=args.mu1, mu2=args.mu2, mu3=args.mu3,
                         x=args.x, y=args.y, t_final=args.t_final)
    metadata["equilibria"] = [
        {"x": e.x, "kind": e.kind.name, "trace": e.trace, "det": e.det}
        for e in eqs]
    _emit(_document("trajectory", metadata, _trajectory_payload(traj)),
          args.out)
    if args.plot:
        from ._plots import figure_portrait, save_figure
        fig = figure_portrait([traj], [e.x for e in eqs],
                              title=f"mu = {tuple(mu)}")
        save_figure(fig, args.plot)
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    mu = MuParams(args.mu1, args.mu2, args.mu3)
    label = classify_region(mu, tol_boundary=args.tol_boundary)
    payload = {"region": label.value, "name": label.name,
               "discriminant": discriminant(mu)}
    _emit(_document("report",
                    _metadata(args, mu1=args.mu1, mu2=args.mu2,
                              mu3=args.mu3),
                    payload), args.out)
    return 0


def _memristor_params(args: argparse.Namespace) -> MemristorParams:
    return MemristorParams(a=args.a, b=args.b, beta=args.beta, xi=args.xi,
                           c=args.c)


def cmd_memristor_reduce(args: argparse.Namespace) -> int:
    p = _memristor_params(args)
    lienard_reduce(p, args.h)
    mu = to_canonical(p, args.h)
    payload = {
        "lienard": {
            "F": [0.0, p.b - p.beta, p.a, p.c],
            "g": [0.0, p.xi - p.beta * p.b, -p.beta * p.a, -p.beta * p.c],
            "h": args.h,
        },
        "canonical": {"mu1": mu.mu1, "mu2": mu.mu2, "mu3": mu.mu3},
    }
    _emit(_document("report",
                    _metadata(args, a=p.a, b=p.b, beta=p.beta, xi=p.xi,
                              c=p.c, h=args.h),
                    payload), args.out)
    return 0


def cmd_memristor_sphere(args: argparse.Namespace) -> int:
    p = _memristor_params(args)
    bounds = sphere_bounds(p)
    slices = sphere_slices(p, args.slices, _config(args))
    payload = {
        "A": bounds.A,
        "B": bounds.B,
        "h_interval": list(bounds.h_interval),
        "h_values": slices.h_values,
        "amplitudes": slices.amplitudes,
        "skipped": [{"h": h, "reason": reason}
                    for h, reason in slices.skipped],
        "orbits": [dict(h=h, **_trajectory_payload(orbit))
                   for h, orbit in zip(slices.h_values, slices.orbits)],
    }
    _emit(_document("slices",
                    _metadata(args, a=p.a, b=p.b, beta=p.beta, xi=p.xi,
                              c=p.c, slices=args.slices),
                    payload), args.out)
    if args.plot:
        from ._plots import figure_sphere, save_figure
        save_figure(figure_sphere(slices), args.plot)
    return 0


def cmd_memristor_simulate(args: argparse.Namespace) -> int:
    p = _memristor_params(args)
    cfg = IntegratorConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                           max_time=max(1e4, 2.0 * args.t_final))
    traj = integrate(memristor_rhs(p), (args.x, args.y, args.z),
                     (0.0, args.t_final), cfg)
    h0 = first_integral(p, traj.initial)
    drift = max(abs(first_integral(p, s) - h0) for s in traj.states)
    metadata = _metadata(args, a=p.a, b=p.b, beta=p.beta, xi=p.xi, c=p.c,
                         x=args.x, y=args.y, z=args.z, t_final=args.t_final)
    payload = _trajectory_payload(traj)
    payload["invariant"] = {"h": h0, "drift": drift}
    _emit(_document("trajectory", metadata, payload), args.out)
    return 0


def cmd_duffing_audit(args: argparse.Namespace) -> int:
    p = DuffingParams.cubic(args.alpha, args.omega, args.betad)
    cfg = IntegratorConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                           max_time=max(1e4, 2.0 * args.t_final))
    report = duffing_audit(p, h=args.h, t_final=args.t_final, config=cfg,
                           seed_offset=args.offset)
    payload = {
        "divergence": report.divergence,
        "invariant_drift": report.invariant_drift,
        "amplitude_trend": report.amplitude_trend,
        "n_revolutions": report.n_revolutions,
        "verdict": report.verdict.name,
    }
    if report.n_revolutions:
        payload["amplitude_first"] = float(report.amplitudes[0])
        payload["amplitude_last"] = float(report.amplitudes[-1])
    _emit(_document("report",
                    _metadata(args, alpha=args.alpha, omega=args.omega,
                              betad=args.betad, h=args.h,
                              t_final=args.t_final),
                    payload), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="btsaddle",
        description="Bifurcation set, Melnikov oracles, shooting overlays, "
                    "and the memristor/Duffing applications of the "
                    "saddle-type cubic unfolding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bifset", help="all bifurcation curves and "
                                      "codimension-two points at one mu3")
    p.add_argument("--mu3", type=_positive_float, required=True)
    p.add_argument("--resolution", type=_min2_int, default=400)
    _add_output_args(p, fmt=True, plot=True)
    _add_tol_args(p)
    p.set_defaults(func=cmd_bifset)

    mel = sub.add_parser("melnikov", help="closed forms vs oracles")
    mel_sub = mel.add_subparsers(dest="connection", required=True)

    p = mel_sub.add_parser("het", help="heteroclinic Melnikov value")
    p.add_argument("--nu1", type=float, required=True)
    p.add_argument("--nu2", type=float, required=True)
    p.add_argument("--nu3", type=float, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="also run the quadrature oracle")
    p.add_argument("--t-span", type=_positive_float, default=None)
    _add_output_args(p)
    p.set_defaults(func=cmd_melnikov_het)

    p = mel_sub.add_parser("hom", help="homoclinic curve point and checks")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--nu2", type=float, default=None,
                   help="evaluate the printed closed form at this nu2 "
                        "(default: nu2(theta))")
    p.add_argument("--check-curve", action="store_true",
                   help="run the area-integral oracle at "
                        "(nu1(theta), nu2(theta))")
    _add_output_args(p)
    p.set_defaults(func=cmd_melnikov_hom)

    p = sub.add_parser("shoot", help="numeric homoclinic curve by shooting, "
                                     "paired with the analytic curve")
    p.add_argument("--mu3", type=_positive_float, required=True)
    p.add_argument("--samples", type=_min2_int, default=25)
    p.add_argument("--margin", type=_positive_float, default=0.04,
                   help="fractional inset from the window edges")
    _add_output_args(p, fmt=True, plot=True)
    _add_tol_args(p)
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("portrait", help="one integrated orbit of the "
                                        "unfolding (any mu3 sign)")
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--mu3", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--t-final", type=_positive_float, default=100.0)
    _add_output_args(p, plot=True)
    _add_tol_args(p)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("classify", help="region of the bifurcation set")
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--mu3", type=_positive_float, required=True)
    _add_output_args(p)
    _add_tol_args(p)
    p.set_defaults(func=cmd_classify)

    mem = sub.add_parser("memristor", help="cubic memristor oscillator")
    mem_sub = mem.add_subparsers(dest="action", required=True)

    def add_circuit_args(q: argparse.ArgumentParser) -> None:
        q.add_argument("--a", type=float, required=True)
        q.add_argument("--b", type=float, required=True)
        q.add_argument("--beta", type=_positive_float, required=True)
        q.add_argument("--xi", type=_positive_float, required=True)
        q.add_argument("--c", type=float, default=1.0)

    p = mem_sub.add_parser("reduce", help="Lienard reduction and canonical "
                                          "parameters of one leaf")
    add_circuit_args(p)
    p.add_argument("--h", type=float, default=0.0)
    _add_output_args(p)
    p.set_defaults(func=cmd_memristor_reduce)

    p = mem_sub.add_parser("sphere", help="periodic-orbit foliation slices")
    add_circuit_args(p)
    p.add_argument("--slices", type=_positive_int, default=9)
    _add_output_args(p, plot=True)
    _add_tol_args(p)
    p.set_defaults(func=cmd_memristor_sphere)

    p = mem_sub.add_parser("simulate", help="direct 3D integration with "
                                            "invariant drift")
    add_circuit_args(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--t-final", type=_positive_float, default=50.0)
    _add_output_args(p)
    _add_tol_args(p)
    p.set_defaults(func=cmd_memristor_simulate)

    duf = sub.add_parser("duffing", help="hidden-attractor audit")
    duf_sub = duf.add_subparsers(dest="action", required=True)

    p = duf_sub.add_parser("audit", help="leaf foliation, divergence, and "
                                         "amplitude decay")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--betad", type=float, required=True)
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--t-final", type=_positive_float, default=2000.0)
    p.add_argument("--offset", type=_positive_float, default=1.0,
                   help="initial amplitude above the leaf center")
    _add_output_args(p)
    _add_tol_args(p)
    p.set_defaults(func=cmd_duffing_audit)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BtSaddleError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
