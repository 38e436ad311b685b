"""Cubic memristor oscillator and its reduction machinery.

The 3D circuit family conserves a first integral, so each level set
("leaf") carries planar dynamics.  This module provides the leaf
integral, the Lienard reduction and its exact inverse (the lift), the
closed-form map onto the canonical unfolding parameters, and the
foliated sphere built from one periodic orbit per leaf.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import MuParams
from .equilibria import cubic_real_roots
from .errors import (BranchUnavailable, CycleNotFound, HypothesesViolated,
                     NonPositiveAlpha, ZeroA12)
from .flow import IntegratorConfig, Trajectory, find_planar_cycle, integrate


@dataclasses.dataclass(frozen=True)
class GeneralFamily:
    """x' = a11*W(z)*x + a12*y, y' = a21*x + a22*y, z' = x with the cubic
    memductance W(z) = q'(z), q(z) = c*z^3 + a*z^2 + b*z."""

    a11: float
    a12: float
    a21: float
    a22: float
    c: float
    a: float
    b: float

    def q(self, z: float) -> float:
        return ((self.c * z + self.a) * z + self.b) * z

    def W(self, z: float) -> float:
        return (3.0 * self.c * z + 2.0 * self.a) * z + self.b

    def rhs(self, t: float, s: Sequence[float]) -> list[float]:
        x, y, z = s
        return [self.a11 * self.W(z) * x + self.a12 * y,
                self.a21 * x + self.a22 * y,
                x]


@dataclasses.dataclass(frozen=True)
class MemristorParams:
    """The oscillator instance a11=-1, a12=1, a21=-xi, a22=beta.

    alpha records the pre-normalization time/admittance scale, if any;
    c generalizes the unit cubic coefficient (the sphere bounds hold for
    c=1 only).
    """

    a: float
    b: float
    beta: float
    xi: float
    c: float = 1.0
    alpha: Optional[float] = None

    def __post_init__(self) -> None:
        if self.beta <= 0.0 or self.xi <= 0.0:
            raise ValueError("beta and xi must be positive")

    def family(self) -> GeneralFamily:
        return GeneralFamily(a11=-1.0, a12=1.0, a21=-self.xi, a22=self.beta,
                             c=self.c, a=self.a, b=self.b)


@dataclasses.dataclass(frozen=True)
class Leaf:
    """One level of the first integral."""

    h: float


def _h_value(h: Union[Leaf, float]) -> float:
    return h.h if isinstance(h, Leaf) else float(h)


def normalize_alpha(a: float, b: float, beta: float, xi: float, alpha: float,
                    c: float = 1.0) -> MemristorParams:
    """Absorb the admittance scale alpha via y~=alpha*y: the memductance
    coefficients and xi pick up one factor of alpha, beta is untouched."""
    if alpha <= 0.0:
        raise NonPositiveAlpha(f"alpha = {alpha}")
    return MemristorParams(a=alpha * a, b=alpha * b, beta=beta,
                           xi=alpha * xi, c=alpha * c, alpha=alpha)


def denormalize(p: MemristorParams) -> dict[str, float]:
    """Invert normalize_alpha; alpha = None is treated as 1."""
    alpha = 1.0 if p.alpha is None else p.alpha
    return {"a": p.a / alpha, "b": p.b / alpha, "beta": p.beta,
            "xi": p.xi / alpha, "c": p.c / alpha, "alpha": alpha}


def memristor_rhs(p: MemristorParams) -> Callable:
    """The 3D field of the oscillator instance."""
    fam = p.family()
    return fam.rhs


def general_first_integral(g: GeneralFamily, state: Sequence[float]) -> float:
    """-a22*x + a12*y - a12*a21*z + a11*a22*q(z); exactly conserved."""
    x, y, z = state
    return (-g.a22 * x + g.a12 * y - g.a12 * g.a21 * z
            + g.a11 * g.a22 * g.q(z))


def first_integral(p: MemristorParams, state: Sequence[float]) -> float:
    """-beta*x + y + xi*z - beta*q(z) for the oscillator instance."""
    return general_first_integral(p.family(), state)


@dataclasses.dataclass(frozen=True)
class LienardSystem:
    """Planar leaf dynamics X' = Y - F(X), Y' = -g(X) + h, with X the
    original z and Y = x + F(X)."""

    family: GeneralFamily
    h: float

    def F(self, X: float) -> float:
        return -self.family.a11 * self.family.q(X) - self.family.a22 * X

    def g(self, X: float) -> float:
        return (self.family.a11 * self.family.a22 * self.family.q(X)
                - self.family.a12 * self.family.a21 * X)

    def rhs(self, t: float, s: Sequence[float]) -> list[float]:
        X, Y = s
        return [Y - self.F(X), self.h - self.g(X)]

    def __call__(self, t: float, s: Sequence[float]) -> list[float]:
        return self.rhs(t, s)

    def equilibria_x(self) -> list[float]:
        """Roots of g(X) = h, increasing."""
        f = self.family
        k = f.a11 * f.a22
        return cubic_real_roots(k * f.c, k * f.a,
                                k * f.b - f.a12 * f.a21, -self.h)


def lienard_reduce(g: Union[GeneralFamily, MemristorParams],
                   h: Union[Leaf, float]) -> LienardSystem:
    """Planar dynamics on the leaf H = h."""
    fam = g.family() if isinstance(g, MemristorParams) else g
    if fam.a12 == 0.0:
        raise ZeroA12("a12 = 0; the leaf is not a graph over (x, z)")
    return LienardSystem(family=fam, h=_h_value(h))


def lift(g: Union[GeneralFamily, MemristorParams], h: Union[Leaf, float],
         traj: Trajectory) -> Trajectory:
    """Map a Lienard-plane path back to 3D on the leaf H = h:
    x = Y - F(X), y = ((a22^2 + a12*a21)*X + a22*Y + h)/a12, z = X.

    The image satisfies the leaf equation exactly (algebraic identity),
    and the 3D field up to the integration error of the planar path.
    """
    fam = g.family() if isinstance(g, MemristorParams) else g
    if fam.a12 == 0.0:
        raise ZeroA12("a12 = 0; no lift available")
    hv = _h_value(h)
    lien = LienardSystem(family=fam, h=hv)
    X = traj.states[:, 0]
    Y = traj.states[:, 1]
    F = np.array([lien.F(v) for v in X])
    x = Y - F
    y = ((fam.a22 * fam.a22 + fam.a12 * fam.a21) * X + fam.a22 * Y + hv) \
        / fam.a12
    return Trajectory(traj.times, np.column_stack([x, y, X]))


def general_to_canonical(g: GeneralFamily, h: Union[Leaf, float]) -> MuParams:
    """Unfolding parameters of the canonical form equivalent to the leaf
    dynamics.  Branch (a) covers a22 != 0 with a11*a22 < 0; branch (b)
    covers a22 = 0."""
    if g.c == 0.0:
        raise ValueError("c = 0: the memductance is not cubic")
    hv = _h_value(h)
    if g.a22 == 0.0:
        mu1 = hv - g.a * g.a12 * g.a21 / (3.0 * g.c)
        mu2 = g.a12 * g.a21
        mu3 = g.a11 * (3.0 * g.c * g.b - g.a * g.a) / (3.0 * g.c)
        return MuParams(mu1, mu2, mu3)
    prod = g.a11 * g.a22
    if prod >= 0.0:
        raise BranchUnavailable(
            f"a11*a22 = {prod} >= 0 with a22 != 0: no canonical form")
    r = g.a * g.a - 3.0 * g.c * g.b
    mu1 = (27.0 * g.c * hv + prod * g.a * (9.0 * g.c * g.b - 2.0 * g.a * g.a)
           - 9.0 * g.c * g.a * g.a12 * g.a21) \
        / (27.0 * g.c * g.c * (-prod) ** 2.5)
    mu2 = (prod * r + 3.0 * g.c * g.a12 * g.a21) / (3.0 * g.c * prod * prod)
    mu3 = (g.a11 * r - 3.0 * g.c * g.a22) / (3.0 * g.c * prod)
    return MuParams(mu1, mu2, mu3)


def to_canonical(p: MemristorParams, h: Union[Leaf, float]) -> MuParams:
    """Canonical unfolding parameters of the oscillator leaf; for c = 1
    this is mu1 = (27h + 9a*xi + 2a^3*beta - 9ab*beta)/(27*beta^(5/2)),
    mu2 = (beta(3b - a^2) - 3xi)/(3*beta^2), mu3 = (a^2-3b+3beta)/(3*beta)."""
    return general_to_canonical(p.family(), h)


class SphereBounds(tuple):
    """(A, B, report); the admissible leaf interval is (-A/27, B/27)."""

    __slots__ = ()

    def __new__(cls, A: float, B: float, report: tuple):
        return super().__new__(cls, (A, B, report))

    @property
    def A(self) -> float:
        return self[0]

    @property
    def B(self) -> float:
        return self[1]

    @property
    def report(self) -> tuple:
        return self[2]

    @property
    def h_interval(self) -> tuple[float, float]:
        return (-self[0] / 27.0, self[1] / 27.0)


def sphere_bounds(p: MemristorParams) -> SphereBounds:
    """Leaf-interval bounds A, B for the foliated sphere, plus the checked
    hypothesis list; raises HypothesesViolated if any inequality fails."""
    a, b, beta, xi = p.a, p.b, p.beta, p.xi
    r = a * a - 3.0 * b
    s = r + 3.0 * beta
    checks = (
        ("a^2 - 3b < 0 (passivity)", r < 0.0),
        ("a^2 - 3b + 3*beta > 0", s > 0.0),
        ("3b - a^2 < 3*xi/beta", -r < 3.0 * xi / beta),
        ("beta*(3b - a^2) - 3*xi < (5/2)*(3b - a^2 - 3*beta)*beta",
         beta * (-r) - 3.0 * xi < 2.5 * (-r - 3.0 * beta) * beta),
        ("(5/2)*(3b - a^2 - 3*beta)*beta < 0", -r - 3.0 * beta < 0.0),
        ("c == 1 (closed-form bounds assume the unit cubic)", p.c == 1.0),
    )
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise HypothesesViolated(failed)
    root = math.sqrt(s)
    even = (4.0 * a * a * beta + 3.0 * beta * beta - 12.0 * b * beta
            + 9.0 * xi) * root
    odd = 9.0 * a * xi + 2.0 * a ** 3 * beta - 9.0 * a * b * beta
    return SphereBounds(even + odd, even - odd, checks)


@dataclasses.dataclass(frozen=True)
class SphereSlices:
    """One closed lifted orbit per sampled leaf; h_values descend from the
    upper pole toward the lower one.  skipped records (h, reason) for
    leaves where no usable cycle was found before replacement."""

    params: MemristorParams
    h_values: list[float]
    orbits: list[Trajectory]
    amplitudes: list[float]
    skipped: list[tuple[float, str]]


_AMPLITUDE_FLOOR = 1e-4


def _slice_cycle(p: MemristorParams, h: float, cfg: IntegratorConfig
                 ) -> tuple[Optional[Trajectory], Optional[float], str]:
    """(lifted orbit, Lienard amplitude, failure reason) for one leaf."""
    lien = lienard_reduce(p, h)
    roots = lien.equilibria_x()
    if len(roots) != 3:
        return None, None, f"{len(roots)} equilibria on the leaf"
    x_star = roots[1]
    y_star = lien.F(x_star)
    seed_x = x_star + 0.35 * (roots[2] - x_star)
    radius = 30.0 * (1.0 + max(abs(r) for r in roots)
                     + max(abs(lien.F(r)) for r in roots))
    cycle = find_planar_cycle(lien.rhs, (seed_x, y_star), x_star,
                              y_section=y_star, config=cfg,
                              amplitude_floor=_AMPLITUDE_FLOOR,
                              escape_radius=radius)
    if cycle is None:
        return None, None, "no cycle (iterates escaped or collapsed)"
    amp = 0.5 * (cycle.states[:, 0].max() - cycle.states[:, 0].min())
    if amp < _AMPLITUDE_FLOOR:
        return None, None, f"cycle radius {amp:.2e} below floor"
    lifted = lift(p, h, cycle)
    drift = max(abs(first_integral(p, s) - h) for s in lifted.states)
    if drift > 1e-7:
        return None, None, f"leaf residual {drift:.2e}"
    gap = float(np.linalg.norm(lifted.final - lifted.initial))
    if gap > 1e-7:
        return None, None, f"closure gap {gap:.2e}"
    return lifted, amp, ""


def sphere_slices(p: MemristorParams, n_slices: int = 9,
                  config: Optional[IntegratorConfig] = None) -> SphereSlices:
    """Sample the foliated sphere: one periodic orbit per leaf.

    Leaves sit at Chebyshev nodes of the admissible interval; the
    closed-form interval slightly overshoots where the cycles actually
    live near the poles, so a failed node bisects toward its nearest
    successful neighbor (toward the midpoint if none yet) until a cycle
    is found.  Failures are recorded, never silently dropped.
    """
    bounds = sphere_bounds(p)
    h_lo, h_hi = bounds.h_interval
    mid = 0.5 * (h_lo + h_hi)
    rad = 0.5 * (h_hi - h_lo)
    cfg = config or IntegratorConfig()
    nodes = [mid + rad * math.cos(math.pi * (2 * j + 1) / (2 * n_slices))
             for j in range(n_slices)]
    h_values: list[float] = []
    orbits: list[Trajectory] = []
    amplitudes: list[float] = []
    skipped: list[tuple[float, str]] = []
    for j, node in enumerate(nodes):
        # bisect failures toward the adjacent inward node so replacements
        # stay local and the stored h sequence keeps descending
        if n_slices == 1:
            anchor = mid
        elif node > mid:
            anchor = nodes[min(j + 1, n_slices - 1)]
        else:
            anchor = nodes[max(j - 1, 0)]
        h = node
        placed = False
        for _ in range(8):
            orbit, amp, reason = _slice_cycle(p, h, cfg)
            if orbit is not None:
                h_values.append(h)
                orbits.append(orbit)
                amplitudes.append(amp)
                placed = True
                break
            skipped.append((h, reason))
            h = 0.5 * (h + anchor)
        if not placed:
            raise CycleNotFound(
                f"no periodic orbit near the leaf h = {node}")
    return SphereSlices(params=p, h_values=h_values, orbits=orbits,
                        amplitudes=amplitudes, skipped=skipped)
