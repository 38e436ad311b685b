import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from btsaddle.core import MuParams
from btsaddle.errors import NonPositiveNu2, NoThreeEquilibria
from btsaddle.melnikov import (RegionLabel, assemble_bifset, classify_region,
                               default_theta_grid, het_curve, het_mu1,
                               hom_curve, hom_loop_area, hom_param,
                               m_het_closed, m_het_quadrature, m_hom_area,
                               m_hom_closed, nu1_of_theta, nu2_min,
                               nu2_of_theta, theta_of_nu2)

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------- heteroclinic

def test_het_closed_symmetric_case():
    assert m_het_closed(0.0, 1.0, 1.0) == pytest.approx(4 * SQRT2 / 15,
                                                        rel=1e-14)


def test_het_closed_zero_line():
    # nu2 = 5/3 with nu3 = 1 sits exactly on the connection curve
    assert m_het_closed(0.0, 5.0 / 3.0, 1.0) == pytest.approx(0.0, abs=1e-14)


def test_het_closed_no_friction():
    # nu3 = 0 still leaves the -3x^2 y part of the perturbation in play,
    # so the value is 2 - 2*sqrt(2)/5, not the bare 2*sqrt(nu2)*nu1 term
    assert m_het_closed(1.0, 1.0, 0.0) == pytest.approx(2.0 - 2 * SQRT2 / 5,
                                                        rel=1e-14)


def test_het_closed_generic_point():
    want = (2.0 / 15.0) * (7.5 * SQRT2 - 4.0)
    assert m_het_closed(0.5, 2.0, 1.0) == pytest.approx(want, rel=1e-13)


def test_het_routes_agree_spot():
    closed = m_het_closed(0.5, 2.0, 1.0)
    quad = m_het_quadrature(0.5, 2.0, 1.0)
    assert abs(closed - quad) <= 1e-10 * (1.0 + abs(closed))


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-2.0, max_value=2.0),
       st.floats(min_value=0.1, max_value=5.0),
       st.floats(min_value=-1.0, max_value=1.0))
def test_het_routes_agree_property(nu1, nu2, nu3):
    closed = m_het_closed(nu1, nu2, nu3)
    quad = m_het_quadrature(nu1, nu2, nu3)
    assert abs(closed - quad) <= 1e-8 * (1.0 + abs(closed))


def test_het_linear_in_nu1():
    # the nu1 contribution integrates the connection's y profile once
    base = m_het_closed(0.0, 2.0, 0.7)
    bumped = m_het_closed(0.5, 2.0, 0.7)
    assert bumped - base == pytest.approx(0.5 * 2.0 * math.sqrt(2.0),
                                          rel=1e-12)


def test_het_rejects_nonpositive_nu2():
    with pytest.raises(NonPositiveNu2):
        m_het_closed(0.0, 0.0, 1.0)
    with pytest.raises(NonPositiveNu2):
        m_het_quadrature(0.0, -1.0, 1.0)


def test_het_mu1_values():
    assert het_mu1(0.1, -0.2) == pytest.approx(0.0018856180831641287,
                                               rel=1e-10)
    assert het_mu1(0.5, -5.0 / 6.0) == pytest.approx(0.0, abs=1e-15)
    assert het_mu1(0.1, 0.0) == 0.0


def test_het_mu1_closed_form():
    mu3, mu2 = 0.1, -0.4
    want = (SQRT2 / 15.0) * abs(mu2) * (3 * abs(mu2) - 5 * mu3)
    assert abs(het_mu1(mu3, mu2)) == pytest.approx(want, rel=1e-12)


def test_het_curve_branches_mirror():
    plus, minus = het_curve(0.1, n=64)
    assert plus.label == "het+"
    assert minus.label == "het-"
    assert np.allclose(plus.samples[:, 0], minus.samples[:, 0])
    assert np.allclose(plus.samples[:, 1], -minus.samples[:, 1])


# ----------------------------------------------------------------- homoclinic

def test_parametric_curve_endpoints():
    assert abs(nu2_of_theta(1e-3) - 1.0) <= 1e-3
    assert abs(nu2_of_theta(30.0) - 5.0 / 3.0) <= 1e-6
    assert abs(nu1_of_theta(30.0)) <= 1e-6


def test_parametric_curve_seam_is_continuous():
    # the two evaluation forms swap at theta = 0.25
    lo, hi = 0.25 - 1e-9, 0.25 + 1e-9
    assert nu2_of_theta(lo) == pytest.approx(nu2_of_theta(hi), abs=1e-8)
    assert nu1_of_theta(lo) == pytest.approx(nu1_of_theta(hi), abs=1e-8)


def test_hom_param_internal_identities():
    p = hom_param(1.0)
    assert p.omega**2 == pytest.approx(2.0 * (p.nu2 - p.sR**2), rel=1e-12)
    assert math.cosh(p.theta) == pytest.approx(2.0 * p.sR / p.omega,
                                               rel=1e-12)
    # the loop hangs off a genuine saddle of the frozen system
    assert p.nu1 == pytest.approx(p.nu2 * p.sR - p.sR**3, rel=1e-12)


def test_hom_param_frozen_regression():
    p = hom_param(1.0)
    assert p.nu2 == pytest.approx(1.5725331617048697, rel=1e-13)
    assert p.nu1 == pytest.approx(0.6636573471922216, rel=1e-13)


def test_nu2_minimum_location():
    theta_star, nu2_star = nu2_min()
    assert theta_star == pytest.approx(1.8630981234907849, abs=1e-9)
    assert nu2_star == pytest.approx(2.4548889937978032, abs=1e-9)


def test_nu2_minimum_is_critical():
    theta_star, _ = nu2_min()
    d = 1e-5
    slope = (nu2_of_theta(theta_star + d)
             - nu2_of_theta(theta_star - d)) / (2 * d)
    assert abs(slope) <= 1e-6


def test_nu2_minimum_stable_under_tolerance_halving():
    a, _ = nu2_min(tol=1e-12)
    b, _ = nu2_min(tol=5e-13)
    assert abs(a - b) <= 1e-9


def test_theta_of_nu2_round_trip():
    theta_star, nu2_star = nu2_min()
    for theta in (0.5, 1.2, 1.8):
        assert theta_of_nu2(nu2_of_theta(theta), 1) == pytest.approx(
            theta, rel=1e-10)
    for theta in (2.2, 3.0, 6.0):
        assert theta_of_nu2(nu2_of_theta(theta), 2) == pytest.approx(
            theta, rel=1e-10)
    with pytest.raises(ValueError):
        theta_of_nu2(nu2_star + 0.01, 1)
    with pytest.raises(ValueError):
        theta_of_nu2(1.6, 2)


def test_hom_area_vanishes_on_the_curve():
    for theta in (0.5, 1.0, 2.0, 4.0):
        nu2 = nu2_of_theta(theta)
        nu1 = nu1_of_theta(theta)
        scale = hom_loop_area(nu1, nu2)
        assert abs(m_hom_area(nu1, nu2)) <= 1e-6 * scale


def test_hom_area_frozen_regressions():
    assert m_hom_area(0.3, 1.0) == pytest.approx(-0.1005378364038464,
                                                 rel=1e-10)
    assert m_hom_area(1e-6, 2.0) == pytest.approx(1.0665737904987798,
                                                  rel=1e-10)


def test_hom_area_sign_alternates_across_the_legs():
    # at nu2 = 2 the curve has two branches; crossing each flips the sign
    assert m_hom_area(1e-6, 2.0) > 0.0
    assert m_hom_area(0.3, 2.0) < 0.0
    assert m_hom_area(1.0, 2.0) > 0.0


def test_hom_area_requires_three_equilibria():
    with pytest.raises(NoThreeEquilibria):
        m_hom_area(1.0, 1.0)  # nu1 beyond the fold at 2*(nu2/3)^(3/2)


def test_loop_area_positive_and_frozen():
    area = hom_loop_area(0.3, 1.0)
    assert area == pytest.approx(0.22063706860146393, rel=1e-10)
    assert hom_loop_area(1e-6, 2.0) > 0.0


def test_hom_closed_form_regression():
    assert m_hom_closed(1.0, 0.0) == pytest.approx(413.4739895673892,
                                                   rel=1e-10)


def test_hom_closed_form_disagrees_with_the_curve():
    # the printed closed form does not vanish on the parametric curve the
    # area oracle validates; keep the mismatch visible rather than patching
    theta = 1.0
    nu2 = nu2_of_theta(theta)
    assert abs(m_hom_closed(theta, nu2)) > 1.0


def test_hom_curve_endpoints_and_fold():
    plus, minus = hom_curve(0.1)
    assert plus.label == "hom+"
    assert minus.label == "hom-"
    first = plus.samples[0]
    last = plus.samples[-1]
    assert first[0] == pytest.approx(-0.1, abs=1e-6)
    assert first[1] == pytest.approx(2.0 * (0.1 / 3.0) ** 1.5, abs=1e-6)
    assert last[0] == pytest.approx(-1.0 / 6.0, abs=1e-9)
    assert last[1] == pytest.approx(0.0, abs=1e-9)
    # the default grid reaches close to the fold at -nu2*(theta*) * mu3
    assert -0.24549 < plus.samples[:, 0].min() < -0.2450


def test_hom_curve_stores_theta_and_mirrors():
    grid = default_theta_grid(n=40)
    plus, minus = hom_curve(0.1, theta_grid=grid)
    assert plus.param is not None and len(plus.param) == len(plus.samples)
    assert np.allclose(plus.param, grid)
    assert np.allclose(plus.samples[:, 1], -minus.samples[:, 1])


def test_default_theta_grid_shape():
    grid = default_theta_grid()
    assert len(grid) == 60
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(30.0)
    assert np.all(np.diff(grid) > 0)


# -------------------------------------------------------------- map of regions

def test_classify_layers_between_the_curves():
    # mu2 = -0.2 at mu3 = 0.1 stacks, bottom to top: heteroclinic level,
    # far homoclinic branch, near homoclinic branch, Hopf, fold
    mu3, mu2 = 0.1, -0.2
    levels = [0.0018856180831641287, 0.002478681264713511,
              0.024558871927720587, 0.03042903097250923,
              0.03442651863295482]
    mids = [0.5 * levels[0],
            0.5 * (levels[0] + levels[1]),
            0.5 * (levels[1] + levels[2]),
            0.5 * (levels[2] + levels[3]),
            0.5 * (levels[3] + levels[4]),
            1.2 * levels[4]]
    want = [RegionLabel.R2, RegionLabel.R3, RegionLabel.R5,
            RegionLabel.R1, RegionLabel.R5, RegionLabel.R6]
    got = [classify_region(MuParams(m1, mu2, mu3)) for m1 in mids]
    assert got == want


def test_classify_right_of_the_fold():
    mu3, mu2 = 0.1, -0.3
    levels = [0.01131370849898476, 0.04868644955601476, 0.06324555320336758]
    mids = [0.5 * levels[0], 0.5 * (levels[0] + levels[1]),
            0.5 * (levels[1] + levels[2]), 1.2 * levels[2]]
    want = [RegionLabel.R2, RegionLabel.R4, RegionLabel.R5, RegionLabel.R6]
    got = [classify_region(MuParams(m1, mu2, mu3)) for m1 in mids]
    assert got == want


def test_classify_examples():
    assert classify_region(MuParams(0.0, -1.0, 0.1)) is RegionLabel.R2
    assert classify_region(MuParams(0.05, 0.1, 0.1)) is RegionLabel.R6
    on_het = het_mu1(0.1, -1.0)
    assert classify_region(MuParams(on_het, -1.0, 0.1)) is RegionLabel.Boundary
    assert classify_region(MuParams(0.0, 0.0, 0.1)) is RegionLabel.Boundary


def test_classify_mirror_symmetry():
    for m1, m2 in [(0.0009, -0.2), (0.012, -0.2), (0.027, -0.2)]:
        a = classify_region(MuParams(m1, m2, 0.1))
        b = classify_region(MuParams(-m1, m2, 0.1))
        assert a is b


# ------------------------------------------------------------------- assembly

def test_assemble_bifset():
    bif = assemble_bifset(0.1, resolution=100)
    labels = {c.label for c in bif.curves}
    assert labels == {"saddle_node", "hopf+", "hopf-", "het+", "het-",
                      "hom+", "hom-"}
    assert len(bif.points) == 8
    assert bif.mu3 == 0.1
    for c in bif.curves:
        assert np.all(np.isfinite(c.samples))
        assert c.mu3 == 0.1


def test_assemble_bifset_hom_window():
    bif = assemble_bifset(0.1, resolution=100)
    hom = next(c for c in bif.curves if c.label == "hom+")
    assert hom.samples[:, 0].min() > -0.24549
    assert hom.samples[:, 0].max() <= -0.0999


def test_assemble_bifset_points_mirror():
    bif = assemble_bifset(0.1, resolution=50)
    sig = {(round(p.mu2, 12), round(p.mu1, 12)) for p in bif.points}
    assert sig == {(m2, -m1) for m2, m1 in sig}
