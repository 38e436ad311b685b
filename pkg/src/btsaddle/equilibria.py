"""Equilibria and local bifurcation objects in the (mu2, mu1) plane.

Equilibria of the unfolding sit on the x axis at roots of the cubic
x^3 + mu2*x + mu1.  The local bifurcation set at fixed mu3 > 0 consists of
the saddle-node curve 27*mu1^2 + 4*mu2^3 = 0 (cusp at the origin), the two
Hopf half-lines ending at the Bogdanov-Takens points, and a handful of
codimension-two points.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Optional, Sequence

import numpy as np

from .core import MuParams
from .errors import NoIntersection, PositiveMu2InRange, RangeOutsideValidity

DEFAULT_TOL_ROOT = 1e-12

_TWO_PI = 2.0 * math.pi


class EquilibriumKind(enum.Enum):
    Saddle = "saddle"
    StableNode = "stable_node"
    UnstableNode = "unstable_node"
    StableFocus = "stable_focus"
    UnstableFocus = "unstable_focus"
    NonHyperbolic = "non_hyperbolic"


@dataclasses.dataclass(frozen=True)
class Equilibrium:
    """An equilibrium (x, 0) with its Jacobian trace/determinant and type."""

    x: float
    kind: EquilibriumKind
    trace: float
    det: float


@dataclasses.dataclass(frozen=True)
class Curve:
    """A labeled sampled curve in the (mu2, mu1) plane at fixed mu3.

    samples has shape (n, 2) with columns (mu2, mu1); param optionally
    stores the curve parameter (theta for the homoclinic curve).
    """

    label: str
    mu3: float
    samples: np.ndarray
    param: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))
        if self.param is not None:
            object.__setattr__(self, "param", np.asarray(self.param, dtype=float))


class PointLabel(enum.Enum):
    BTplus = "BT+"
    BTminus = "BT-"
    Cusp = "cusp"
    DHT = "DHT"
    Schecter1p = "schecter1+"
    Schecter1m = "schecter1-"
    Schecter2p = "schecter2+"
    Schecter2m = "schecter2-"


@dataclasses.dataclass(frozen=True)
class CodimTwoPoint:
    label: PointLabel
    mu2: float
    mu1: float


def cubic_real_roots(c3: float, c2: float, c1: float, c0: float,
                     tol: float = DEFAULT_TOL_ROOT) -> list[float]:
    """Real roots of c3*x^3 + c2*x^2 + c1*x + c0, ascending.

    Closed-form (trigonometric for three roots, hyperbolic for one)
    followed by one Newton polish per simple root.  A double root is
    returned once with multiplicity collapsed, so the result has length
    1, 2 or 3.
    """
    if c3 == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    # depress: x = t - c2/(3 c3)
    shift = c2 / (3.0 * c3)
    b = c1 / c3
    c = c0 / c3
    p = b - 3.0 * shift * shift
    q = c - shift * (b - 2.0 * shift * shift)

    disc = 4.0 * p**3 + 27.0 * q * q
    scale = 4.0 * abs(p) ** 3 + 27.0 * q * q + 1.0

    if abs(disc) <= 64.0 * np.finfo(float).eps * scale and p < 0.0:
        # degenerate level: one simple and one double root
        ts = [3.0 * q / p, -1.5 * q / p]
    elif disc < 0.0:
        # three distinct real roots
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        ts = [m * math.cos((phi - _TWO_PI * k) / 3.0) for k in range(3)]
    else:
        # single real root, hyperbolic form; |p|^(3/2) can underflow to
        # zero for denormal p, in which case the linear term is
        # negligible against t^3 + q and the cube root takes over
        m = 2.0 * math.sqrt(abs(p) / 3.0)
        denom = p * m
        if denom == 0.0:
            t = math.copysign(abs(q) ** (1.0 / 3.0), -q)
        elif p < 0.0:
            arg = max(1.0, -3.0 * abs(q) / denom)
            t = -math.copysign(m, q) * math.cosh(math.acosh(arg) / 3.0)
        else:
            arg = 3.0 * q / denom
            t = -m * math.sinh(math.asinh(arg) / 3.0)
        if not math.isfinite(t):
            t = math.copysign(abs(q) ** (1.0 / 3.0), -q)
        ts = [t]

    roots = []
    for t in ts:
        x = t - shift
        # one Newton step against the undepressed cubic; skip when the
        # derivative vanishes (double root)
        f = ((c3 * x + c2) * x + c1) * x + c0
        df = (3.0 * c3 * x + 2.0 * c2) * x + c1
        if df != 0.0 and abs(f) > 0.0:
            step = f / df
            if abs(step) < 1.0 + abs(x):
                x -= step
        roots.append(x)
    roots.sort()

    # collapse accidental duplicates from the closed forms
    dedup: list[float] = []
    span = 1.0 + max(abs(r) for r in roots)
    for r in roots:
        if dedup and abs(r - dedup[-1]) <= 1e-9 * span:
            continue
        dedup.append(r)
    return dedup


def discriminant(mu: MuParams) -> float:
    """27*mu1^2 + 4*mu2^3; negative exactly when three simple roots exist."""
    return 27.0 * mu.mu1 * mu.mu1 + 4.0 * mu.mu2**3


def _classify(x: float, mu: MuParams, tol: float) -> Equilibrium:
    det = -(mu.mu2 + 3.0 * x * x)
    trace = mu.mu3 - 3.0 * x * x
    if det < -tol:
        kind = EquilibriumKind.Saddle
    elif abs(det) <= tol or abs(trace) <= tol:
        kind = EquilibriumKind.NonHyperbolic
    else:
        node = trace * trace - 4.0 * det >= 0.0
        if trace < 0.0:
            kind = EquilibriumKind.StableNode if node else EquilibriumKind.StableFocus
        else:
            kind = EquilibriumKind.UnstableNode if node else EquilibriumKind.UnstableFocus
    return Equilibrium(x=x, kind=kind, trace=trace, det=det)


def solve_equilibria(mu: MuParams, tol_root: float = DEFAULT_TOL_ROOT) -> list[Equilibrium]:
    """All equilibria of the unfolding, sorted by x.

    In the three-root case the outer two are saddles and the middle one an
    antisaddle; with a double root the merged equilibrium is reported as
    NonHyperbolic.
    """
    roots = cubic_real_roots(1.0, 0.0, mu.mu2, mu.mu1, tol_root)
    tol_kind = 1e-10 * (1.0 + abs(mu.mu2))
    return [_classify(x, mu, tol_kind) for x in roots]


def saddle_node_mu1(mu2: float) -> float:
    """Positive branch mu1 = sqrt(-4*mu2^3/27) of the fold curve (mu2 <= 0)."""
    if mu2 > 0.0:
        raise PositiveMu2InRange(f"mu2 = {mu2} > 0 has no saddle-node point")
    return 2.0 * (-mu2 / 3.0) ** 1.5


def saddle_node_curve(mu3: float, mu2_range: tuple[float, float] = (-1.0, 0.0),
                      n: int = 256) -> Curve:
    """Both branches of the fold curve as one path through the cusp.

    The samples run along the lower branch from mu2_range[0] up to the
    rightmost mu2 and back along the upper branch, so plotting them in
    order draws the full wedge.
    """
    lo, hi = sorted(mu2_range)
    if hi > 0.0:
        raise PositiveMu2InRange(f"range ({lo}, {hi}) extends past mu2 = 0")
    if n < 2:
        raise ValueError("need at least 2 samples per branch")
    mu2 = np.linspace(lo, hi, n)
    upper = np.array([saddle_node_mu1(m) for m in mu2])
    path2 = np.concatenate([mu2, mu2[-2::-1]])
    path1 = np.concatenate([-upper, upper[-2::-1]])
    return Curve("saddle_node", mu3, np.column_stack([path2, path1]))


def hopf_mu1(mu3: float, mu2: float, sign: int = +1) -> float:
    """mu1 on the Hopf half-line through the center x = sign*sqrt(mu3/3).

    Derived from the equilibrium condition with zero trace:
    mu1 = -sign*((mu3/3)^(3/2) + (mu3/3)^(1/2)*mu2), valid for mu2 < -mu3.
    """
    r = mu3 / 3.0
    return -sign * (r ** 1.5 + math.sqrt(r) * mu2)


def hopf_line(mu3: float, mu2_range: tuple[float, float], n: int = 256) -> tuple[Curve, Curve]:
    """The pair of Hopf half-lines over mu2_range (entirely left of -mu3).

    Each sample admits an equilibrium at x = s*sqrt(mu3/3) with zero trace
    and positive determinant.  Raises RangeOutsideValidity if the range
    touches mu2 >= -mu3, where the line would leave the Hopf regime.
    """
    if mu3 <= 0.0:
        raise RangeOutsideValidity("Hopf lines require mu3 > 0")
    lo, hi = sorted(mu2_range)
    if hi >= -mu3:
        raise RangeOutsideValidity(
            f"mu2 range reaches {hi} >= -mu3 = {-mu3}; Hopf needs mu2 < -mu3")
    mu2 = np.linspace(lo, hi, max(2, n))
    plus = np.array([hopf_mu1(mu3, m, +1) for m in mu2])
    cp = Curve("hopf+", mu3, np.column_stack([mu2, plus]))
    cm = Curve("hopf-", mu3, np.column_stack([mu2, -plus]))
    return cp, cm


def _het_mu1(mu3: float, mu2: float) -> float:
    # positive-prefix branch of the heteroclinic curve (see melnikov.het_curve)
    return math.sqrt(2.0) / 15.0 * mu2 * (3.0 * mu2 + 5.0 * mu3)


def special_points(mu3: float, tol_intersect: float = 1e-10) -> list[CodimTwoPoint]:
    """Codimension-two points at fixed mu3 > 0.

    BT+-, the cusp and DHT come from closed forms.  The four Schecter
    points (fold curve meeting the heteroclinic curve) come from the
    quadratic 27*mu2^2 + (90*mu3 + 50)*mu2 + 75*mu3^2 = 0 obtained by
    eliminating mu1, polished by Newton iteration on the exact
    intersection condition until both curve residuals fall below
    tol_intersect.
    """
    if mu3 <= 0.0:
        raise NoIntersection("special points need mu3 > 0")
    bt1 = 2.0 * (mu3 / 3.0) ** 1.5
    pts = [
        CodimTwoPoint(PointLabel.BTplus, -mu3, bt1),
        CodimTwoPoint(PointLabel.BTminus, -mu3, -bt1),
        CodimTwoPoint(PointLabel.Cusp, 0.0, 0.0),
        CodimTwoPoint(PointLabel.DHT, -5.0 * mu3 / 3.0, 0.0),
    ]

    a = 27.0
    b = 90.0 * mu3 + 50.0
    c = 75.0 * mu3 * mu3
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        raise NoIntersection("saddle-node and heteroclinic curves do not meet")
    sq = math.sqrt(disc)
    roots = sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    if roots[1] >= 0.0:
        raise NoIntersection("no negative-mu2 intersection")

    polished = []
    for mu2 in roots:
        # Newton on F(mu2) = 27*het(mu2)^2 + 4*mu2^3 (intersection of the
        # squared curves), which keeps both residuals at the same zero
        for _ in range(60):
            f = 27.0 * _het_mu1(mu3, mu2) ** 2 + 4.0 * mu2**3
            d = mu2 * 1e-7 if mu2 != 0.0 else 1e-7
            fp = (27.0 * _het_mu1(mu3, mu2 + d) ** 2 + 4.0 * (mu2 + d) ** 3 - f) / d
            if fp == 0.0:
                break
            step = f / fp
            mu2 -= step
            if abs(step) <= 1e-15 * (1.0 + abs(mu2)):
                break
        m1 = abs(_het_mu1(mu3, mu2))
        sn_resid = abs(27.0 * m1 * m1 + 4.0 * mu2**3)
        if sn_resid > tol_intersect * (1.0 + abs(mu2) ** 3):
            raise NoIntersection(
                f"Schecter polish stalled at mu2 = {mu2}, residual {sn_resid}")
        polished.append((mu2, m1))

    # index 1 is the outer intersection (larger |mu2|), 2 the inner one;
    # the +/- suffix is the sign of mu1
    (mu2_out, m1_out), (mu2_in, m1_in) = polished[0], polished[1]
    pts += [
        CodimTwoPoint(PointLabel.Schecter1p, mu2_out, m1_out),
        CodimTwoPoint(PointLabel.Schecter1m, mu2_out, -m1_out),
        CodimTwoPoint(PointLabel.Schecter2p, mu2_in, m1_in),
        CodimTwoPoint(PointLabel.Schecter2m, mu2_in, -m1_in),
    ]
    return pts
