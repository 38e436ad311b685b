"""Exception types shared across the package.

Every error raised by the library derives from :class:`BtSaddleError`, so
callers (including the CLI) can distinguish domain failures from bugs.
"""

from __future__ import annotations


class BtSaddleError(Exception):
    """Base class for all library errors."""


class NonPositiveMu3(BtSaddleError):
    """mu3 must be positive for the requested normalization or curve."""


class PositiveMu2InRange(BtSaddleError):
    """The saddle-node curve only exists for mu2 <= 0."""


class RangeOutsideValidity(BtSaddleError):
    """The Hopf half-lines are only defined for mu2 < -mu3."""


class NoIntersection(BtSaddleError):
    """Curve intersection has no real solution in the admissible range."""


class NonPositiveNu2(BtSaddleError):
    """The heteroclinic pair exists only for nu2 > 0."""


class QuadratureNotConverged(BtSaddleError):
    """Adaptive quadrature failed to reach the requested accuracy."""


class NoThreeEquilibria(BtSaddleError):
    """Operation requires the three-equilibrium regime (negative discriminant)."""


class BracketFailed(BtSaddleError):
    """Root bracketing failed; the target function does not change sign."""


class StepSizeUnderflow(BtSaddleError):
    """The integrator step size collapsed below machine resolution."""


class MaxTimeExceeded(BtSaddleError):
    """Requested integration span exceeds the configured time budget."""


class NoCrossing(BtSaddleError):
    """A shooting orbit never reached the requested section."""


class RootNotBracketed(BtSaddleError):
    """Continuation could not bracket a root of the splitting function."""


class NonPositiveAlpha(BtSaddleError):
    """The time-scale parameter alpha must be positive."""


class ZeroA12(BtSaddleError):
    """The Lienard reduction needs a12 != 0."""


class BranchUnavailable(BtSaddleError):
    """No canonical-form branch applies to the given coefficients."""


class HypothesesViolated(BtSaddleError):
    """One or more hypotheses of the foliated-sphere construction fail.

    The offending conditions are listed in ``failed``.
    """

    def __init__(self, failed: list[str]):
        self.failed = list(failed)
        super().__init__("hypotheses violated: " + "; ".join(self.failed))


class CycleNotFound(BtSaddleError):
    """No limit cycle could be located for the given slice or parameters."""
