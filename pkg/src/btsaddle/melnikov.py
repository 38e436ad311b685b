"""Melnikov functions and the global bifurcation curves.

Two connection types organize the global set at fixed mu3 > 0:

* heteroclinic: the rescaled system with eps = 0 has a pair of saddle
  connections; their Melnikov function has the closed form m_het_closed,
  double-checked here by direct quadrature along the unperturbed orbit.
* homoclinic: the Melnikov zero locus is the parametric curve
  (nu1(theta), nu2(theta)); its printed closed-form companion
  m_hom_closed is kept for reference but is validated against an
  independent area integral (m_hom_area), which is the trusted oracle.

All curve outputs live in the (mu2, mu1) plane.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import math
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import MuParams
from .equilibria import (Curve, CodimTwoPoint, cubic_real_roots, discriminant,
                         hopf_mu1, saddle_node_curve, special_points)
from .errors import (BracketFailed, NonPositiveMu3, NonPositiveNu2,
                     NoThreeEquilibria, QuadratureNotConverged)

SQRT2 = math.sqrt(2.0)

# ---------------------------------------------------------------------------
# heteroclinic side


def m_het_closed(nu1: float, nu2: float, nu3: float) -> float:
    """(2/15)*sqrt(nu2)*(15*nu1 + 5*sqrt(2)*nu2*nu3 - 3*sqrt(2)*nu2^2)."""
    if nu2 <= 0.0:
        raise NonPositiveNu2(f"nu2 = {nu2}; the saddle pair needs nu2 > 0")
    return (2.0 / 15.0) * math.sqrt(nu2) * (
        15.0 * nu1 + 5.0 * SQRT2 * nu2 * nu3 - 3.0 * SQRT2 * nu2 * nu2)


def m_het_quadrature(nu1: float, nu2: float, nu3: float,
                     t_span: Optional[float] = None, tol: float = 1e-10) -> float:
    """Independent oracle: integrate y*(nu1 + (nu3 - 3x^2)*y) along the
    upper saddle connection x = sqrt(nu2)*tanh(k t), y = nu2/sqrt(2)*sech^2(k t).

    t_span defaults to 20/k, where the sech^2 tail is below 1e-14.
    """
    if nu2 <= 0.0:
        raise NonPositiveNu2(f"nu2 = {nu2}; the saddle pair needs nu2 > 0")
    k = math.sqrt(nu2 / 2.0)
    if t_span is None:
        t_span = 20.0 / k
    sq = math.sqrt(nu2)

    def integrand(t):
        c = math.cosh(k * t)
        sech2 = 1.0 / (c * c)
        x = sq * math.tanh(k * t)
        y = nu2 / SQRT2 * sech2
        return y * (nu1 + (nu3 - 3.0 * x * x) * y)

    val, err = quad(integrand, -t_span, t_span, epsabs=1e-13, epsrel=1e-12,
                    limit=200)
    if err > tol * (1.0 + abs(val)):
        raise QuadratureNotConverged(
            f"estimated error {err} above {tol * (1.0 + abs(val))}")
    return val


def het_mu1(mu3: float, mu2: float) -> float:
    """Positive-prefix branch mu1 = (sqrt(2)/15)*mu2*(3*mu2 + 5*mu3)."""
    return SQRT2 / 15.0 * mu2 * (3.0 * mu2 + 5.0 * mu3)


def het_curve(mu3: float, mu2_range: Optional[tuple[float, float]] = None,
              n: int = 256) -> tuple[Curve, Curve]:
    """Both sign branches of the heteroclinic curve.

    The branches cross mu1 = 0 at mu2 = -5*mu3/3 (the double connection)
    and at the origin.
    """
    if mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu3}")
    if mu2_range is None:
        mu2_range = (-3.0 * mu3, 0.0)
    lo, hi = sorted(mu2_range)
    mu2 = np.linspace(lo, hi, max(2, n))
    mu1 = np.array([het_mu1(mu3, m) for m in mu2])
    return (Curve("het+", mu3, np.column_stack([mu2, mu1])),
            Curve("het-", mu3, np.column_stack([mu2, -mu1])))


# ---------------------------------------------------------------------------
# homoclinic side


@dataclasses.dataclass(frozen=True)
class HomoclinicParam:
    """Loop data at parameter theta: cosh(theta) = 2*sR/omega,
    omega^2 = 2*(nu2 - sR^2), nu1 = nu2*sR - sR^3."""

    theta: float
    nu2: float
    nu1: float
    sR: float
    omega: float


_SERIES_CUT = 0.25
_SERIES_TERMS = range(2, 15)


@functools.lru_cache(maxsize=1)
def _series_coeffs() -> tuple[tuple[float, ...], tuple[float, ...]]:
    # Taylor coefficients of theta^(2k+1) in the numerator
    # 9*sinh(t) + sinh(3t) - 12*t*cosh(t) and the denominator
    # 370*sinh(t) + 115*sinh(3t) + sinh(5t) - 60*t*(11*cosh(t) + cosh(3t)).
    # The k = 0, 1 terms vanish identically, which is why a direct
    # evaluation loses all precision for small theta.
    num, den = [], []
    for k in _SERIES_TERMS:
        f_odd = math.factorial(2 * k + 1)
        f_even = math.factorial(2 * k)
        num.append((9 + 3 ** (2 * k + 1)) / f_odd - 12 / f_even)
        den.append((370 + 115 * 3 ** (2 * k + 1) + 5 ** (2 * k + 1)) / f_odd
                   - (660 + 60 * 9 ** k) / f_even)
    return tuple(num), tuple(den)


def nu2_of_theta(theta: float) -> float:
    """nu2 along the homoclinic zero locus.

    Equal to 10*(cosh(2 theta)+5)*(9 sinh + sinh3 - 12 theta cosh) /
    (3*(370 sinh + 115 sinh3 + sinh5 - 60 theta (11 cosh + cosh3))), but
    evaluated through a power series for small theta and an
    exponentially rescaled form otherwise; the textbook expression
    cancels catastrophically at both ends.
    """
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    if theta < _SERIES_CUT:
        an, ad = _series_coeffs()
        t2 = theta * theta
        p = theta * t2 * t2  # theta^5
        num = den = 0.0
        for a, b in zip(an, ad):
            num += a * p
            den += b * p
            p *= t2
        return 10.0 * (math.cosh(2.0 * theta) + 5.0) * num / (3.0 * den)
    e = math.exp(-theta)
    e2 = e * e
    e4 = e2 * e2
    e6 = e4 * e2
    e10 = e4 * e6
    nhat = (1.0 - e6) + 9.0 * e2 * (1.0 - e2) - 12.0 * theta * e2 * (1.0 + e2)
    dhat = ((1.0 - e10) + 115.0 * e2 * (1.0 - e6) + 370.0 * e4 * (1.0 - e2)
            - 660.0 * theta * e4 * (1.0 + e2) - 60.0 * theta * e2 * (1.0 + e6))
    return (5.0 / 3.0) * (1.0 + 10.0 * e2 + e4) * nhat / dhat


def hom_param(theta: float) -> HomoclinicParam:
    """Loop data (nu2, nu1, sR, omega) at parameter theta."""
    nu2 = nu2_of_theta(theta)
    c = math.cosh(theta)
    c2 = c * c
    sR = math.sqrt(nu2 * c2 / (2.0 + c2))
    # nu1 = nu2*sR - sR^3 without the cancellation of the raw difference
    nu1 = 2.0 * nu2 * sR / (2.0 + c2)
    omega = 2.0 * math.sqrt(nu2 / (2.0 + c2))
    return HomoclinicParam(theta=theta, nu2=nu2, nu1=nu1, sR=sR, omega=omega)


def nu1_of_theta(theta: float) -> float:
    return hom_param(theta).nu1


def _h1(x: float) -> float:
    return (2.0 * x * (26.0 * math.cosh(2.0 * x) + math.cosh(4.0 * x) + 33.0)
            - 5.0 * (10.0 * math.sinh(2.0 * x) + math.sinh(4.0 * x)))


@functools.lru_cache(maxsize=8)
def nu2_min(tol: float = 1e-12) -> tuple[float, float]:
    """The fold of the homoclinic curve: (theta*, nu2(theta*)).

    theta* is the positive zero of
    h1(x) = 2x(26 cosh2x + cosh4x + 33) - 5(10 sinh2x + sinh4x),
    bracketed on [1, 2].
    """
    a, b = 1.0, 2.0
    if _h1(a) * _h1(b) >= 0.0:
        raise BracketFailed("h1 does not change sign on [1, 2]")
    theta_star = brentq(_h1, a, b, xtol=tol, rtol=4.0 * np.finfo(float).eps)
    return theta_star, nu2_of_theta(theta_star)


def m_hom_closed(theta: float, nu2: float) -> float:
    """Literal evaluation of the printed closed form
    sqrt(2)*cosh^2/(cosh^2+2)*(F1 + nu2*F2).

    Kept verbatim for reference.  Its zero locus does not reproduce
    nu2_of_theta (the F2 term of degree cosh^3 appears to have lost its
    coefficient in print), so nothing downstream depends on it; the
    trusted check is m_hom_area.
    """
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    ch = math.cosh(theta)
    sh = math.sinh(theta)
    f1 = (720.0 * theta - 320.0 * sh + 240.0 * theta * ch**3
          - 320.0 * ch**2 * sh - 80.0 * ch**4 * sh + 480.0 * theta * ch)
    f2 = (1440.0 * theta * ch - 768.0 * sh - ch**3
          - 1344.0 * ch**2 * sh - 48.0 * ch**4 * sh)
    return SQRT2 * ch * ch / (ch * ch + 2.0) * (f1 + nu2 * f2)


def _loop_geometry(nu1: float, nu2: float):
    """Roots and loop extent for the level set through the right saddle.

    Returns (sR, omega, xbar) with xbar = omega - sR the inner turning
    point; requires the three-equilibrium regime and nu1 > 0 so the loop
    hangs off the right saddle.
    """
    if nu1 <= 0.0 or 27.0 * nu1 * nu1 - 4.0 * nu2**3 >= 0.0:
        raise NoThreeEquilibria(
            f"(nu1, nu2) = ({nu1}, {nu2}) is not in the loop regime")
    roots = cubic_real_roots(1.0, 0.0, -nu2, nu1)
    if len(roots) != 3:
        raise NoThreeEquilibria(f"got {len(roots)} equilibria")
    sR = roots[2]
    # two more Newton polishes; the factorized loop formula below assumes
    # nu1 - nu2*sR + sR^3 = 0 to machine accuracy
    for _ in range(2):
        f = nu1 - nu2 * sR + sR**3
        df = 3.0 * sR * sR - nu2
        if df != 0.0:
            sR -= f / df
    omega2 = 2.0 * (nu2 - sR * sR)
    if omega2 <= 0.0:
        raise NoThreeEquilibria("right saddle outside the well")
    omega = math.sqrt(omega2)
    return sR, omega, omega - sR


def _loop_integral(nu1: float, nu2: float, weight, tol: float) -> float:
    """2 * integral of weight(x) * y+(x) over the loop [xbar, sR].

    Uses y+(x) = (sR - x) * sqrt(((x + sR)^2 - omega^2)/2) (the level-set
    factorization through the saddle) and the substitutions x = xbar + u^2
    and x = sR - u^2 on the two halves, so both integrands are smooth at
    the turning point and at the saddle.
    """
    sR, omega, xbar = _loop_geometry(nu1, nu2)
    xm = 0.5 * (xbar + sR)

    def left(u):
        x = xbar + u * u
        return 4.0 * u * u * (sR - x) * weight(x) * math.sqrt(
            (2.0 * omega + u * u) / 2.0)

    def right(u):
        x = sR - u * u
        arg = (x + sR) ** 2 - omega * omega
        return 4.0 * u**3 * weight(x) * math.sqrt(arg / 2.0)

    vl, el = quad(left, 0.0, math.sqrt(xm - xbar), epsabs=1e-13, epsrel=1e-11,
                  limit=200)
    vr, er = quad(right, 0.0, math.sqrt(sR - xm), epsabs=1e-13, epsrel=1e-11,
                  limit=200)
    val = vl + vr
    if el + er > tol * (1.0 + abs(val)):
        raise QuadratureNotConverged(
            f"estimated error {el + er} above {tol * (1.0 + abs(val))}")
    return val


def m_hom_area(nu1: float, nu2: float, tol: float = 1e-8) -> float:
    """Area-integral Melnikov value for the loop at (nu1, nu2), nu3 = 1.

    Integrates (3x^2 - 1) over the region bounded by the loop through the
    right saddle.  This is the oracle that validates the parametric zero
    locus (nu1(theta), nu2(theta)).
    """
    return _loop_integral(nu1, nu2, lambda x: 3.0 * x * x - 1.0, tol)


def hom_loop_area(nu1: float, nu2: float, tol: float = 1e-8) -> float:
    """Euclidean area enclosed by the homoclinic loop (scale for tests)."""
    return _loop_integral(nu1, nu2, lambda x: 1.0, tol)


def default_theta_grid(n: int = 60, lo: float = 1e-3, hi: float = 30.0) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def hom_curve(mu3: float, theta_grid: Optional[Sequence[float]] = None
              ) -> tuple[Curve, Curve]:
    """Both sign branches of the homoclinic curve mu2 = -mu3*nu2(theta),
    mu1 = +-mu3^(3/2)*nu1(theta), with theta stored as the curve parameter.

    Endpoints approach the Bogdanov-Takens points (theta -> 0) and the
    double heteroclinic point (theta -> inf).
    """
    if mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu3}")
    thetas = (default_theta_grid() if theta_grid is None
              else np.asarray(theta_grid, dtype=float))
    if thetas.ndim != 1 or np.any(thetas <= 0.0) or np.any(np.diff(thetas) <= 0.0):
        raise ValueError("theta grid must be positive and increasing")
    scale = mu3 ** 1.5
    pars = [hom_param(t) for t in thetas]
    mu2 = np.array([-mu3 * p.nu2 for p in pars])
    mu1 = np.array([scale * p.nu1 for p in pars])
    return (Curve("hom+", mu3, np.column_stack([mu2, mu1]), param=thetas),
            Curve("hom-", mu3, np.column_stack([mu2, -mu1]), param=thetas))


# ---------------------------------------------------------------------------
# region classification and assembly


class RegionLabel(enum.Enum):
    R1 = "1"
    R2 = "2"
    R3 = "3"
    R4 = "4"
    R5 = "5"
    R6 = "6"
    Boundary = "boundary"


_THETA_LO = 1e-8
_THETA_HI = 60.0


def theta_of_nu2(nu2_value: float, leg: int) -> float:
    """Invert nu2(theta) on one monotone leg of the homoclinic curve.

    Leg 1 runs from the Bogdanov-Takens end (nu2 -> 1) up to the fold,
    leg 2 from the fold down to the double heteroclinic end (nu2 -> 5/3).
    Raises ValueError when nu2_value is outside the leg's range.
    """
    if leg not in (1, 2):
        raise ValueError(f"leg must be 1 or 2, got {leg}")
    theta_star, nu2_star = nu2_min()
    if nu2_value >= nu2_star:
        raise ValueError(f"nu2 = {nu2_value} at or beyond the fold {nu2_star}")
    lo, hi = (_THETA_LO, theta_star) if leg == 1 else (theta_star, _THETA_HI)
    edge = nu2_of_theta(_THETA_LO if leg == 1 else _THETA_HI)
    if nu2_value <= edge:
        raise ValueError(f"nu2 = {nu2_value} beyond the leg {leg} end {edge}")
    return brentq(lambda t: nu2_of_theta(t) - nu2_value, lo, hi, xtol=1e-13)


def _hom_leg_mu1(mu3: float, nu2_query: float, leg: int) -> Optional[float]:
    """|mu1| of the homoclinic curve at nu2_query on the given leg, or None
    when nu2_query is outside the leg's range."""
    try:
        theta = theta_of_nu2(nu2_query, leg)
    except ValueError:
        return None
    return mu3 ** 1.5 * nu1_of_theta(theta)


def classify_region(mu: MuParams, tol_boundary: float = 1e-6) -> RegionLabel:
    """Which open region of the bifurcation set contains mu, or Boundary.

    Regions follow the phase-portrait numbering of the diagram at small
    mu3: 1 to 4 carry a limit cycle (between the Hopf line and the
    homoclinic arch, inside the heteroclinic strip past the double
    connection, in the lens between arch and heteroclinic curve, and in
    the wedge past the fold of the arch); 5 is the remaining
    three-equilibrium territory with no cycle; 6 is the single-equilibrium
    zone.  Points within tol_boundary (scaled) of any curve report
    Boundary.
    """
    if mu.mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu.mu3}")
    mu1, mu2, mu3 = mu
    m1 = abs(mu1)
    tol = tol_boundary * (1.0 + abs(mu1) + abs(mu2))

    if math.hypot(mu1, mu2) <= tol:
        return RegionLabel.Boundary
    if mu2 <= 0.0:
        sn = 2.0 * (-mu2 / 3.0) ** 1.5
        if abs(m1 - sn) <= tol:
            return RegionLabel.Boundary
    if mu2 < -mu3 and abs(m1 - hopf_mu1(mu3, mu2, +1)) <= tol:
        return RegionLabel.Boundary
    if mu2 < 0.0 and abs(m1 - abs(het_mu1(mu3, mu2))) <= tol:
        return RegionLabel.Boundary

    theta_star, nu2_star = nu2_min()
    nu2q = -mu2 / mu3
    if 1.0 - 1e-9 < nu2q < nu2_star + 1e-9:
        fold_clamp = min(nu2q, nu2_star * (1.0 - 1e-12))
        for leg in (1, 2):
            leg_m1 = _hom_leg_mu1(mu3, fold_clamp, leg)
            if leg_m1 is not None and abs(m1 - leg_m1) <= tol:
                return RegionLabel.Boundary

    if discriminant(mu) > 0.0:
        return RegionLabel.R6

    # three equilibria from here on; mu2 < 0 guaranteed
    if mu2 >= -mu3:
        # no Hopf line at this mu2 (the near-cusp wedge): no cycle
        return RegionLabel.R5
    if m1 > hopf_mu1(mu3, mu2, +1):
        return RegionLabel.R5
    het_m1 = abs(het_mu1(mu3, mu2))
    if nu2q <= nu2_star:
        leg1 = _hom_leg_mu1(mu3, nu2q, 1)
        if leg1 is not None and m1 > leg1:
            return RegionLabel.R1
        if nu2q > 5.0 / 3.0:
            leg2 = _hom_leg_mu1(mu3, nu2q, 2)
            if leg2 is not None and m1 > leg2:
                return RegionLabel.R5
            if m1 > het_m1:
                return RegionLabel.R3
            return RegionLabel.R2
        return RegionLabel.R5
    if m1 < het_m1:
        return RegionLabel.R2
    return RegionLabel.R4


@dataclasses.dataclass(frozen=True)
class BifurcationSet:
    """All bifurcation curves and codimension-two points at one mu3."""

    mu3: float
    curves: list[Curve]
    points: list[CodimTwoPoint]

    def curve(self, label: str) -> Curve:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)


def assemble_bifset(mu3: float, resolution: int = 400) -> BifurcationSet:
    """The full bifurcation set at mu3 > 0.

    The mu2 extent is chosen to include both intersections of the fold
    curve with the heteroclinic curve with a 15 percent margin.
    """
    if mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu3}")
    pts = special_points(mu3)
    mu2_min = 1.15 * min(p.mu2 for p in pts)

    sn = saddle_node_curve(mu3, (mu2_min, 0.0), n=resolution)
    hopf_hi = -mu3 - 1e-9 * (1.0 + mu3)
    from .equilibria import hopf_line
    hp, hm = hopf_line(mu3, (mu2_min, hopf_hi), n=resolution)
    etp, etm = het_curve(mu3, (mu2_min, 0.0), n=resolution)
    omp, omm = hom_curve(mu3)
    return BifurcationSet(mu3=mu3, curves=[sn, hp, hm, etp, etm, omp, omm],
                          points=pts)
