"""Numerical ground truth: integration, manifold shooting, cycle detection.

Everything here runs on top of an adaptive explicit Runge-Kutta 5(4) pair
with event location; the analytic curves in `melnikov` are validated
against these computations, never the other way around.

Backward-time runs (stable manifolds) integrate the negated field over
increasing times, so event directions are stated in the reversed clock.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .core import MuParams, PlanarState, unfolding_rhs
from .equilibria import Curve, Equilibrium, EquilibriumKind, discriminant, \
    solve_equilibria
from .errors import (MaxTimeExceeded, NoCrossing, NonPositiveMu3,
                     NoThreeEquilibria, RootNotBracketed, StepSizeUnderflow)
from .melnikov import nu1_of_theta, nu2_min, theta_of_nu2


@dataclasses.dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and bounds for one integration run.

    max_step = None resolves to min(1.0, 0.1 * span) at call time;
    first_step is only pinned for fixed-step convergence studies.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_step: Optional[float] = None
    max_time: float = 1e4
    first_step: Optional[float] = None

    def __post_init__(self) -> None:
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_step is not None and self.max_step <= 0.0:
            raise ValueError("max_step must be positive")
        if self.max_time <= 0.0:
            raise ValueError("max_time must be positive")
        if self.first_step is not None and self.first_step <= 0.0:
            raise ValueError("first_step must be positive")


DEFAULT_CONFIG = IntegratorConfig()


@dataclasses.dataclass(frozen=True)
class Trajectory:
    """Sampled solution path; states has one row per time."""

    times: np.ndarray
    states: np.ndarray
    events: Optional[tuple] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "states", np.asarray(self.states, dtype=float))
        if self.states.ndim != 2 or len(self.times) != len(self.states):
            raise ValueError("need one state row per time")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def initial(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def integrate(field: Callable, start: Sequence[float],
              t_span: tuple[float, float],
              config: Optional[IntegratorConfig] = None,
              events: Optional[list] = None) -> Trajectory:
    """Integrate ds/dt = field(t, s) over t_span (forward in t).

    Event callables follow the solver convention: scalar-valued, with
    optional `terminal` and `direction` attributes; roots are located by
    the solver's sign-change bisection on each accepted step.
    """
    cfg = config or DEFAULT_CONFIG
    t0, t1 = t_span
    span = t1 - t0
    if span <= 0.0:
        raise ValueError("t_span must be increasing; negate the field "
                         "to run backward")
    if span > cfg.max_time:
        raise MaxTimeExceeded(f"span {span} exceeds max_time {cfg.max_time}")
    max_step = cfg.max_step if cfg.max_step is not None else min(1.0, 0.1 * span)
    kwargs = {}
    if cfg.first_step is not None:
        kwargs["first_step"] = cfg.first_step
    sol = solve_ivp(field, (t0, t1), np.asarray(start, dtype=float),
                    method="RK45", rtol=cfg.rel_tol, atol=cfg.abs_tol,
                    max_step=max_step, events=events, **kwargs)
    if sol.status == -1:
        raise StepSizeUnderflow(sol.message)
    ev = (sol.t_events, sol.y_events) if events is not None else None
    return Trajectory(sol.t, sol.y.T, ev)


def reversed_field(field: Callable) -> Callable:
    """The same phase portrait with time running the other way."""

    def rhs(t, s):
        return [-v for v in field(t, s)]

    return rhs


def _axis_event(index: int, value: float, direction: float = 0.0,
                terminal: bool = True):
    def ev(t, s):
        return s[index] - value

    ev.terminal = terminal
    ev.direction = direction
    return ev


# ---------------------------------------------------------------------------
# manifold shooting


_BRANCHES = {"unstable+": (True, 1.0), "unstable-": (True, -1.0),
             "stable+": (False, 1.0), "stable-": (False, -1.0)}


def saddle_manifold_shot(mu: MuParams, saddle: Equilibrium, branch: str,
                         section_x: float, delta: float = 1e-6,
                         config: Optional[IntegratorConfig] = None,
                         direction: float = 0.0) -> PlanarState:
    """Shoot one local-manifold branch until it crosses x = section_x.

    The start point is saddle + sign * delta * v, with v the unit
    eigenvector (1, lambda)/|..| of the chosen eigenvalue; unstable
    branches run forward, stable ones backward.  `direction` restricts
    the crossing sense of x - section_x (in the integrated clock, which
    is reversed for stable branches); 0 accepts either.
    """
    if saddle.kind is not EquilibriumKind.Saddle:
        raise ValueError(f"{saddle.kind.name} passed where a saddle is required")
    if not 1e-8 <= delta <= 1e-4:
        raise ValueError(f"delta = {delta} outside [1e-8, 1e-4]")
    if branch not in _BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    unstable, sign = _BRANCHES[branch]
    rad = math.sqrt(saddle.trace * saddle.trace - 4.0 * saddle.det)
    lam = 0.5 * (saddle.trace + rad) if unstable else 0.5 * (saddle.trace - rad)
    norm = math.hypot(1.0, lam)
    start = (saddle.x + sign * delta / norm, sign * delta * lam / norm)
    field = unfolding_rhs(mu)
    if not unstable:
        field = reversed_field(field)
    cfg = config or DEFAULT_CONFIG
    ev = _axis_event(0, section_x, direction=direction, terminal=True)
    try:
        traj = integrate(field, start, (0.0, cfg.max_time), cfg, events=[ev])
    except StepSizeUnderflow as exc:
        # cubic blow-up reached before the section did
        raise NoCrossing(
            f"branch {branch} escaped before reaching x = {section_x}: {exc}"
        ) from None
    t_ev, y_ev = traj.events
    if len(t_ev[0]) == 0:
        raise NoCrossing(
            f"branch {branch} never reached x = {section_x} within "
            f"t = {cfg.max_time}")
    return PlanarState(y_ev[0][0][0], y_ev[0][0][1])


@dataclasses.dataclass(frozen=True)
class SplittingResult:
    """Signed manifold separation at the section through the antisaddle."""

    mu: MuParams
    gap: float
    section_x: float


def homoclinic_splitting(mu: MuParams,
                         config: Optional[IntegratorConfig] = None,
                         delta: float = 1e-6) -> SplittingResult:
    """gap = y_unstable - y_stable where the right saddle's loop branches
    cross x = s_C (the antisaddle abscissa), measured at the lower
    crossing; with this orientation the gap sign tracks sign(m_hom_area).

    mu1 < 0 is handled through the (x, y, mu1) -> (-x, -y, -mu1) symmetry:
    the left saddle's loop gap is the negated mirrored gap.
    """
    if discriminant(mu) >= 0.0:
        raise NoThreeEquilibria(f"discriminant >= 0 at mu = {tuple(mu)}")
    if mu.mu1 < 0.0:
        m = homoclinic_splitting(MuParams(-mu.mu1, mu.mu2, mu.mu3), config, delta)
        return SplittingResult(mu=mu, gap=-m.gap, section_x=-m.section_x)
    eqs = solve_equilibria(mu)
    if len(eqs) != 3:
        raise NoThreeEquilibria(f"{len(eqs)} equilibria at mu = {tuple(mu)}")
    saddle = eqs[2]
    section = eqs[1].x
    cfg = config or DEFAULT_CONFIG
    # lower crossings: the loop is traversed clockwise, so the unstable
    # branch arrives moving left (direction -1) and the stable branch, in
    # reversed time, arrives moving right (direction +1)
    u = saddle_manifold_shot(mu, saddle, "unstable-", section, delta, cfg,
                             direction=-1.0)
    s = saddle_manifold_shot(mu, saddle, "stable-", section, delta, cfg,
                             direction=1.0)
    return SplittingResult(mu=mu, gap=u.y - s.y, section_x=section)


def _splitting_root(mu3: float, mu2: float, seed: float,
                    cfg: IntegratorConfig, gap_tol: float = 1e-9) -> float:
    """mu1 root of the splitting gap near the seed value."""
    # trial values may push the loop past its existence range
    invalid = (NoCrossing, NoThreeEquilibria)
    seen: dict[float, float] = {}

    def gap(m1: float) -> float:
        val = homoclinic_splitting(MuParams(m1, mu2, mu3), cfg).gap
        seen[m1] = val
        return val

    def polish(a: float, b: float) -> Optional[float]:
        root = brentq(gap, a, b, xtol=1e-14, rtol=1e-15)
        return root if abs(gap(root)) <= gap_tol else None

    scale = abs(seed)
    try:
        x0, x1 = seed, seed * 1.02
        f0, f1 = gap(x0), gap(x1)
        if abs(f0) <= gap_tol:
            return x0
        for _ in range(25):
            if abs(f1) <= gap_tol:
                return x1
            if f1 == f0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not math.isfinite(x2) or abs(x2 - seed) > 0.5 * scale:
                break
            x0, f0 = x1, f1
            x1, f1 = x2, gap(x2)
        else:
            if abs(f1) <= gap_tol:
                return x1
    except invalid:
        pass
    # secant failed or left the trust region; fall back to a bracketed solve
    grid = seed * np.linspace(0.5, 2.0, 16)
    vals = []
    for g in grid:
        try:
            vals.append(gap(g))
        except invalid:
            vals.append(None)
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa is None or fb is None:
            continue
        if fa == 0.0:
            return a
        if fa * fb < 0.0:
            try:
                root = polish(a, b)
            except invalid:
                root = None
            if root is not None:
                return root
            break
    # near the fold corner the zero is pinched against the existence edge;
    # bisect up to the edge and bracket against it
    for good, bad in _edge_neighbours(grid, vals):
        fg = seen[good]
        lo, hi = good, bad
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            try:
                fm = gap(mid)
            except invalid:
                hi = mid
                continue
            lo = mid
            if abs(fm) <= gap_tol:
                return mid
            if fm * fg < 0.0:
                try:
                    root = polish(min(good, lo), max(good, lo))
                except invalid:
                    root = None
                if root is not None:
                    return root
                break
    best = min(seen.items(), key=lambda kv: abs(kv[1]), default=None)
    if best is not None and abs(best[1]) <= gap_tol:
        return best[0]
    raise RootNotBracketed(
        f"no splitting zero near mu2 = {mu2}, seed mu1 = {seed}")


def _edge_neighbours(grid, vals):
    """(valid, invalid) grid pairs flanking an existence edge, outward."""
    out = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa is not None and fb is None:
            out.append((a, b))
        elif fa is None and fb is not None:
            out.append((b, a))
    return out


def homoclinic_continuation(mu3: float, mu2_samples: Sequence[float],
                            config: Optional[IntegratorConfig] = None) -> Curve:
    """Shooting-based homoclinic curve (mu1 > 0 branch) at the given mu2
    samples, each root-found from the analytic curve as the seed.

    Samples past the fold carry two connection branches; results are
    ordered by the seed's loop parameter theta, so the returned curve
    traces the arch continuously even though it is non-monotone in mu2.
    """
    if mu3 <= 0.0:
        raise NonPositiveMu3(f"mu3 = {mu3}")
    theta_star, nu2_star = nu2_min()
    cfg = config or DEFAULT_CONFIG
    scale = mu3 ** 1.5
    tasks = []
    for mu2 in mu2_samples:
        nu2q = -mu2 / mu3
        if not 1.0 < nu2q < nu2_star:
            raise ValueError(
                f"mu2 = {mu2} outside the homoclinic window "
                f"({-nu2_star * mu3}, {-mu3})")
        legs = (1, 2) if nu2q > 5.0 / 3.0 else (1,)
        for leg in legs:
            try:
                theta = theta_of_nu2(nu2q, leg)
            except ValueError as exc:
                raise RootNotBracketed(str(exc)) from None
            tasks.append((theta, mu2, scale * nu1_of_theta(theta)))
    # walk in theta order, carrying the observed root/seed ratio: past the
    # fold the first-order curve drifts from the true one, and the running
    # correction keeps every secant start within bracketing range
    tasks.sort(key=lambda e: e[0])
    entries = []
    ratio = 1.0
    for theta, mu2, seed in tasks:
        try:
            root = _splitting_root(mu3, mu2, seed * ratio, cfg)
        except RootNotBracketed:
            if theta > theta_star:
                # the far leg ends at the true double connection, slightly
                # short of where the first-order tail reaches; samples past
                # it have no loop to find
                continue
            raise
        ratio = root / seed
        entries.append((theta, mu2, root))
    return Curve("hom_numeric", mu3,
                 np.array([[e[1], e[2]] for e in entries]),
                 param=np.array([e[0] for e in entries]))


# ---------------------------------------------------------------------------
# limit cycles


def _escape_event(x_star: float, y_section: float, radius: float):
    def ev(t, s):
        return radius - math.hypot(s[0] - x_star, s[1] - y_section)

    ev.terminal = True
    ev.direction = -1.0
    return ev


def _map_step(rhs: Callable, start: Sequence[float], x_star: float,
              y_section: float, cfg: IntegratorConfig, radius: float
              ) -> tuple[Optional[float], Optional[Trajectory]]:
    """Advance to the next downward crossing of y = y_section with
    x > x_star.  Returns (crossing x, trajectory), or (None, None) when
    the orbit escapes, collapses, or never returns."""
    start = np.asarray(start, dtype=float)
    t_off = 0.0
    pieces_t, pieces_s = [], []
    if abs(start[1] - y_section) < 1e-12:
        # nudge off the section so the solver does not fire the event at t=0
        burn = integrate(rhs, start, (0.0, 1e-6), cfg)
        pieces_t.append(burn.times)
        pieces_s.append(burn.states)
        start = burn.final
        t_off = burn.times[-1]
    section = _axis_event(1, y_section, direction=-1.0, terminal=True)
    esc = _escape_event(x_star, y_section, radius)
    try:
        leg = integrate(rhs, start, (0.0, cfg.max_time), cfg,
                        events=[section, esc])
    except StepSizeUnderflow:
        return None, None
    t_ev, y_ev = leg.events
    if len(t_ev[1]) > 0 or len(t_ev[0]) == 0:
        return None, None
    xc = y_ev[0][0][0]
    if xc <= x_star:
        return None, None
    pieces_t.append(leg.times + t_off)
    pieces_s.append(leg.states)
    traj = Trajectory(np.concatenate(pieces_t), np.vstack(pieces_s))
    return xc, traj


def return_map(rhs: Callable, x: float, x_star: float, y_section: float = 0.0,
               config: Optional[IntegratorConfig] = None,
               escape_radius: float = 50.0) -> Optional[float]:
    """One application of the Poincare map on the half-line
    {y = y_section, x > x_star}; None when the orbit does not return."""
    cfg = config or DEFAULT_CONFIG
    xc, _ = _map_step(rhs, (x, y_section), x_star, y_section, cfg,
                      escape_radius)
    return xc


def find_planar_cycle(rhs: Callable, seed: Sequence[float], x_star: float,
                      y_section: float = 0.0,
                      config: Optional[IntegratorConfig] = None,
                      displacement_tol: float = 1e-9,
                      amplitude_floor: float = 1e-4,
                      escape_radius: float = 50.0,
                      max_iter: int = 40) -> Optional[Trajectory]:
    """Locate a periodic orbit by Poincare iteration plus a secant polish.

    Returns one period of the cycle (start and end on the section within
    displacement_tol), or None when iterates escape the radius, collapse
    below amplitude_floor toward the equilibrium, or fail to settle.
    """
    cfg = config or DEFAULT_CONFIG

    def pmap(x: float) -> Optional[float]:
        xc, _ = _map_step(rhs, (x, y_section), x_star, y_section, cfg,
                          escape_radius)
        return xc

    x1, _ = _map_step(rhs, np.asarray(seed, dtype=float), x_star, y_section,
                      cfg, escape_radius)
    if x1 is None:
        return None
    x0, f0 = None, None
    fixed = None
    for k in range(max_iter):
        x2 = pmap(x1)
        if x2 is None:
            return None
        if abs(x2 - x_star) < amplitude_floor:
            return None
        f1 = x2 - x1
        if abs(f1) <= displacement_tol:
            fixed = x1
            break
        if k >= 8 and f0 is not None and f1 != f0:
            # plain iteration is slow here; switch to secant on P(x) - x,
            # capping the step at a fraction of the orbit amplitude
            xn = x1 - f1 * (x1 - x0) / (f1 - f0)
            cap = 0.25 * max(abs(x1 - x_star), 1e-6)
            if math.isfinite(xn) and abs(xn - x1) <= cap:
                x0, f0, x1 = x1, f1, xn
                continue
        x0, f0, x1 = x1, f1, x2
    if fixed is None:
        return None
    xc, traj = _map_step(rhs, (fixed, y_section), x_star, y_section, cfg,
                         escape_radius)
    if xc is None or abs(xc - fixed) > displacement_tol:
        return None
    return traj


def find_limit_cycle(mu: MuParams, seed: PlanarState,
                     config: Optional[IntegratorConfig] = None
                     ) -> Optional[Trajectory]:
    """Stable limit cycle of the unfolding through Poincare iteration from
    seed, or None.

    mu3 <= 0 short-circuits to None: the divergence mu3 - 3x^2 is then
    one-signed, which rules out periodic orbits outright.
    """
    if mu.mu3 <= 0.0:
        return None
    eqs = solve_equilibria(mu)
    x_star = eqs[1].x if len(eqs) == 3 else eqs[0].x
    radius = 10.0 * (1.0 + max(abs(e.x) for e in eqs))
    radius = max(radius, 2.0 * math.hypot(seed.x - x_star, seed.y))
    return find_planar_cycle(unfolding_rhs(mu), (seed.x, seed.y), x_star,
                             y_section=0.0, config=config,
                             escape_radius=radius)
