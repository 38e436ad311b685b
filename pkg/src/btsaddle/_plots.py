"""Figure builders for the report path of the CLI.

Everything is built on explicit Figure objects with the Agg canvas, so
rendering works headless and never touches a global pyplot state.
"""

from __future__ import annotations

from typing import Optional, Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .equilibria import Curve
from .flow import Trajectory
from .melnikov import BifurcationSet
from .memristor import SphereSlices

_CURVE_STYLE = {
    "saddle_node": dict(color="black", lw=1.4),
    "hopf": dict(color="tab:red", lw=1.2, ls="--"),
    "het": dict(color="tab:green", lw=1.2, ls="-."),
    "hom": dict(color="tab:blue", lw=1.2),
    "hom_numeric": dict(color="tab:orange", lw=0.0, marker="o", ms=3.5),
}


def _new_figure(width: float = 7.0, height: float = 5.0) -> Figure:
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def _style_for(label: str) -> dict:
    for prefix, style in _CURVE_STYLE.items():
        if label.startswith(prefix) and label != "hom_numeric":
            return style
    return _CURVE_STYLE.get(label, dict(lw=1.0))


def figure_bifset(bs: BifurcationSet) -> Figure:
    fig = _new_figure()
    ax = fig.add_subplot()
    seen = set()
    for curve in bs.curves:
        base = curve.label.rstrip("+-")
        style = _style_for(curve.label)
        ax.plot(curve.samples[:, 0], curve.samples[:, 1],
                label=base if base not in seen else None, **style)
        seen.add(base)
    for pt in bs.points:
        ax.plot([pt.mu2], [pt.mu1], marker="o", ms=4, color="black")
        ax.annotate(pt.label.name, (pt.mu2, pt.mu1), fontsize=7,
                    textcoords="offset points", xytext=(3, 3))
    ax.set_xlabel("mu2")
    ax.set_ylabel("mu1")
    ax.set_title(f"bifurcation set at mu3 = {bs.mu3:g}")
    ax.legend(loc="best", fontsize=8)
    return fig


def figure_shoot(analytic: Curve, numeric: Curve) -> Figure:
    fig = _new_figure()
    ax = fig.add_subplot()
    ax.plot(analytic.samples[:, 0], analytic.samples[:, 1],
            color="tab:blue", lw=1.3, label="analytic")
    ax.plot(numeric.samples[:, 0], numeric.samples[:, 1],
            color="tab:orange", marker="o", ms=3.5, lw=0.0, label="shooting")
    ax.set_xlabel("mu2")
    ax.set_ylabel("mu1")
    ax.set_title(f"homoclinic curve at mu3 = {analytic.mu3:g}")
    ax.legend(loc="best", fontsize=8)
    return fig


def figure_portrait(trajectories: Sequence[Trajectory],
                    equilibria_x: Optional[Sequence[float]] = None,
                    title: Optional[str] = None) -> Figure:
    fig = _new_figure(6.0, 6.0)
    ax = fig.add_subplot()
    for traj in trajectories:
        ax.plot(traj.states[:, 0], traj.states[:, 1], lw=0.9)
    if equilibria_x:
        ax.plot(list(equilibria_x), [0.0] * len(equilibria_x),
                marker="x", ms=6, lw=0.0, color="black")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    return fig


def figure_sphere(slices: SphereSlices) -> Figure:
    fig = _new_figure(7.0, 6.0)
    ax = fig.add_subplot(projection="3d")
    for orbit in slices.orbits:
        ax.plot(orbit.states[:, 0], orbit.states[:, 1], orbit.states[:, 2],
                lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title("periodic-orbit foliation")
    return fig


def save_figure(fig: Figure, path: str, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi)
