"""Bifurcation set of the saddle-type cubic Bogdanov-Takens unfolding.

The planar family is x' = y, y' = mu1 + mu2*x + x^3 + y*(mu3 - 3x^2).
This package computes its local and global bifurcation curves with
independent numerical cross-checks, and carries the two applications
that reduce to it: the cubic memristor oscillator (a sphere foliated by
periodic orbits) and the Duffing "hidden attractor" audit.
"""

from .core import (HKind, Hamiltonian, MuParams, NuParams, PlanarState,
                   Scaling, divergence, hamiltonian_rhs, hamiltonian_value,
                   perturbed_rhs, to_mu, to_nu, unfolding_field,
                   unfolding_rhs)
from .duffing import (AuditReport, DuffingParams, Verdict, duffing_audit,
                      duffing_invariant, duffing_lift, duffing_reduce,
                      duffing_rhs, leaf_center, reduced_energy)
from .equilibria import (CodimTwoPoint, Curve, Equilibrium, EquilibriumKind,
                         PointLabel, cubic_real_roots, discriminant,
                         hopf_line, hopf_mu1, saddle_node_curve,
                         saddle_node_mu1, solve_equilibria, special_points)
from .errors import (BracketFailed, BranchUnavailable, BtSaddleError,
                     CycleNotFound, HypothesesViolated, MaxTimeExceeded,
                     NoCrossing, NoIntersection, NonPositiveAlpha,
                     NonPositiveMu3, NonPositiveNu2, NoThreeEquilibria,
                     PositiveMu2InRange, QuadratureNotConverged,
                     RangeOutsideValidity, RootNotBracketed,
                     StepSizeUnderflow, ZeroA12)
from .flow import (DEFAULT_CONFIG, IntegratorConfig, SplittingResult,
                   Trajectory, find_limit_cycle, find_planar_cycle,
                   homoclinic_continuation, homoclinic_splitting, integrate,
                   return_map, reversed_field, saddle_manifold_shot)
from .melnikov import (BifurcationSet, HomoclinicParam, RegionLabel,
                       assemble_bifset, classify_region, default_theta_grid,
                       het_curve, het_mu1, hom_curve, hom_loop_area,
                       hom_param, m_het_closed, m_het_quadrature, m_hom_area,
                       m_hom_closed, nu1_of_theta, nu2_min, nu2_of_theta,
                       theta_of_nu2)
from .memristor import (GeneralFamily, Leaf, LienardSystem, MemristorParams,
                        SphereBounds, SphereSlices, denormalize,
                        first_integral, general_first_integral,
                        general_to_canonical, lienard_reduce, lift,
                        memristor_rhs, normalize_alpha, sphere_bounds,
                        sphere_slices, to_canonical)

__version__ = "0.1.0"

__all__ = [
    "AuditReport", "BifurcationSet", "BracketFailed", "BranchUnavailable",
    "BtSaddleError", "CodimTwoPoint", "Curve", "CycleNotFound",
    "DEFAULT_CONFIG", "DuffingParams", "Equilibrium", "EquilibriumKind",
    "GeneralFamily", "HKind", "Hamiltonian", "HomoclinicParam",
    "HypothesesViolated", "IntegratorConfig", "Leaf", "LienardSystem",
    "MaxTimeExceeded", "MemristorParams", "MuParams", "NoCrossing",
    "NoIntersection", "NonPositiveAlpha", "NonPositiveMu3", "NonPositiveNu2",
    "NoThreeEquilibria", "NuParams", "PlanarState", "PointLabel",
    "PositiveMu2InRange", "QuadratureNotConverged", "RangeOutsideValidity",
    "RegionLabel", "RootNotBracketed", "Scaling", "SphereBounds",
    "SphereSlices", "SplittingResult", "StepSizeUnderflow", "Trajectory",
    "Verdict", "ZeroA12", "assemble_bifset", "classify_region",
    "cubic_real_roots", "default_theta_grid", "denormalize", "discriminant",
    "divergence", "duffing_audit", "duffing_invariant", "duffing_lift",
    "duffing_reduce", "duffing_rhs", "find_limit_cycle", "find_planar_cycle",
    "first_integral", "general_first_integral", "general_to_canonical",
    "hamiltonian_rhs", "hamiltonian_value", "het_curve", "het_mu1",
    "hom_curve", "hom_loop_area", "hom_param", "homoclinic_continuation",
    "homoclinic_splitting", "hopf_line", "hopf_mu1", "integrate",
    "leaf_center", "lienard_reduce", "lift", "m_het_closed",
    "m_het_quadrature", "m_hom_area", "m_hom_closed", "memristor_rhs",
    "normalize_alpha", "nu1_of_theta", "nu2_min", "nu2_of_theta",
    "perturbed_rhs", "reduced_energy", "return_map", "reversed_field",
    "saddle_manifold_shot", "saddle_node_curve", "saddle_node_mu1",
    "solve_equilibria", "special_points", "sphere_bounds", "sphere_slices",
    "theta_of_nu2", "to_canonical", "to_mu", "to_nu", "unfolding_field",
    "unfolding_rhs",
]
