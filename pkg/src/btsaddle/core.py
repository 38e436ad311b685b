"""Parameter spaces and vector fields of the saddle unfolding.

The central object is the planar family

    x' = y
    y' = mu1 + mu2*x + x**3 + y*(mu3 - 3*x**2)

together with two rescalings that expose it as a perturbed Hamiltonian
system.  Everything here is a pure function of its arguments; the heavier
numerics live in :mod:`btsaddle.equilibria`, :mod:`btsaddle.melnikov` and
:mod:`btsaddle.flow`.
"""

from __future__ import annotations

import enum
import math
from typing import Callable, NamedTuple

from .errors import NonPositiveMu3


class MuParams(NamedTuple):
    """Unfolding parameters (mu1, mu2, mu3)."""

    mu1: float
    mu2: float
    mu3: float


class Scaling(enum.Enum):
    """How (mu1, mu2, mu3) is blown up into (nu1, nu2, nu3, eps).

    QuarticA:  mu1 = eps**4 * nu1, mu2 = -eps**2 * nu2, mu3 = eps**2 * nu3
    CubicB:    mu1 = eps**3 * nu1, mu2 = -eps**2 * nu2, mu3 = eps**2 * nu3

    QuarticA keeps the unperturbed system odd-symmetric (the constant term
    joins the perturbation), which is the right frame for heteroclinic
    analysis; CubicB keeps the constant term at leading order, the frame
    for homoclinic analysis.
    """

    QuarticA = "quartic_a"
    CubicB = "cubic_b"


class NuParams(NamedTuple):
    """Rescaled parameters plus the blow-up radius eps and the scaling used."""

    nu1: float
    nu2: float
    nu3: float
    eps: float
    scaling: Scaling


class PlanarState(NamedTuple):
    x: float
    y: float


class HKind(enum.Enum):
    H1 = "H1"
    H2 = "H2"


class Hamiltonian(NamedTuple):
    """Unperturbed energy: H1 = y^2/2 + nu2*x^2/2 - x^4/4, H2 adds -nu1*x.

    nu1 is ignored for kind H1.
    """

    kind: HKind
    nu2: float
    nu1: float = 0.0


def unfolding_field(mu: MuParams, s: PlanarState) -> PlanarState:
    """Velocity of the unfolding at state s."""
    x, y = s
    return PlanarState(y, mu.mu1 + mu.mu2 * x + x**3 + y * (mu.mu3 - 3.0 * x * x))


def unfolding_rhs(mu: MuParams) -> Callable:
    """Return an (t, state) -> list RHS closure suitable for the integrator."""
    mu1, mu2, mu3 = mu

    def rhs(t, s):
        x, y = s
        return [y, mu1 + mu2 * x + x * x * x + y * (mu3 - 3.0 * x * x)]

    return rhs


def to_nu(mu: MuParams, scaling: Scaling) -> NuParams:
    """Rescale with nu3 normalized to 1 (requires mu3 > 0, eps = sqrt(mu3))."""
    if mu.mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu.mu3}: nu3-normalization needs mu3 > 0")
    eps = math.sqrt(mu.mu3)
    nu2 = -mu.mu2 / mu.mu3
    if scaling is Scaling.QuarticA:
        nu1 = mu.mu1 / (mu.mu3 * mu.mu3)
    else:
        nu1 = mu.mu1 / (mu.mu3 * eps)
    return NuParams(nu1, nu2, 1.0, eps, scaling)


def to_mu(nu: NuParams) -> MuParams:
    e2 = nu.eps * nu.eps
    if nu.scaling is Scaling.QuarticA:
        mu1 = e2 * e2 * nu.nu1
    else:
        mu1 = e2 * nu.eps * nu.nu1
    return MuParams(mu1, -e2 * nu.nu2, e2 * nu.nu3)


def hamiltonian_value(h: Hamiltonian, s: PlanarState) -> float:
    x, y = s
    v = 0.5 * y * y + 0.5 * h.nu2 * x * x - 0.25 * x**4
    if h.kind is HKind.H2:
        v -= h.nu1 * x
    return v


def hamiltonian_rhs(h: Hamiltonian) -> Callable:
    """RHS of the unperturbed (eps = 0) Hamiltonian flow."""
    nu1 = h.nu1 if h.kind is HKind.H2 else 0.0
    nu2 = h.nu2

    def rhs(t, s):
        x, y = s
        return [y, nu1 - nu2 * x + x * x * x]

    return rhs


def perturbed_rhs(nu: NuParams) -> Callable:
    """RHS of the rescaled system at blow-up radius nu.eps.

    QuarticA: y' = -nu2*x + x^3 + eps*(nu1 + nu3*y - 3*x^2*y)
    CubicB:   y' = nu1 - nu2*x + x^3 + eps*(nu3*y - 3*x^2*y)
    """
    nu1, nu2, nu3, eps, scaling = nu
    if scaling is Scaling.QuarticA:

        def rhs(t, s):
            x, y = s
            return [y, -nu2 * x + x * x * x + eps * (nu1 + (nu3 - 3.0 * x * x) * y)]

    else:

        def rhs(t, s):
            x, y = s
            return [y, nu1 - nu2 * x + x * x * x + eps * (nu3 - 3.0 * x * x) * y]

    return rhs


def divergence(mu: MuParams, s: PlanarState) -> float:
    """Divergence of the unfolding, mu3 - 3*x^2.

    For mu3 <= 0 it never changes sign, so no periodic orbit can exist
    (Bendixson criterion).
    """
    return mu.mu3 - 3.0 * s.x * s.x
