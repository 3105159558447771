import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entwalk.geometry import (
    DegenerateConfigurationError,
    GeometryKind,
    ScaledConfiguration,
    arccosh_from_excess,
    build_frames,
    closed_form_distances,
    closed_form_step_distance,
    construction_distances,
    construction_step_distance,
    minkowski_dot,
    _invert_cos,
    _invert_cosh,
)

from conftest import planar_two_step_distance

S = GeometryKind.SPHERICAL
H = GeometryKind.HYPERBOLIC

azimuths = st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True)


def random_configs(seed, n, geometry):
    rng = np.random.default_rng(seed)
    rho_hi = math.pi - 0.01 if geometry is S else 5.0
    return (
        rng.uniform(0.01, rho_hi, n),
        rng.uniform(0.001, 2.0, n),
        rng.uniform(0.0, 2.0 * math.pi, n),
        rng.uniform(0.0, 2.0 * math.pi, n),
    )


# ---------------------------------------------------------------------------
# frames


def test_spherical_frames_orthogonality_at_right_angle():
    fa, fb = build_frames(math.pi / 2, S)
    assert abs(np.dot(fa.point, fb.point)) < 1e-12
    assert abs(np.dot(fa.e1, fa.point)) < 1e-12
    assert abs(np.dot(fb.e1, fb.point)) < 1e-12
    assert np.allclose(fa.e1, fb.e1)


def test_hyperbolic_frames_distance_inner_product():
    fa, fb = build_frames(1.0, H)
    assert abs(minkowski_dot(fa.point, fb.point) - math.cosh(1.0)) < 1e-12


@given(rho=st.floats(min_value=0.01, max_value=math.pi - 0.01))
def test_spherical_frame_gram_matrix(rho):
    for frame in build_frames(rho, S):
        basis = [frame.e1, frame.e2, frame.point]
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                target = 1.0 if i == j else 0.0
                assert abs(np.dot(u, v) - target) < 1e-12


@given(rho=st.floats(min_value=0.01, max_value=19.0))
def test_hyperbolic_frame_gram_matrix(rho):
    # signature: point +1, tangents -1, mixed products vanish; the
    # cancellation in cosh^2 - sinh^2 scales the rounding floor by cosh(rho)
    tol = 1e-12 * (1.0 + math.cosh(rho))
    for frame in build_frames(rho, H):
        assert abs(minkowski_dot(frame.point, frame.point) - 1.0) < tol
        assert frame.point[0] >= 1.0
        for t in (frame.e1, frame.e2):
            assert abs(minkowski_dot(t, t) + 1.0) < tol
            assert abs(minkowski_dot(t, frame.point)) < tol
        assert abs(minkowski_dot(frame.e1, frame.e2)) < tol


def test_frames_degenerate_separations_raise():
    with pytest.raises(DegenerateConfigurationError):
        build_frames(0.0, S)
    with pytest.raises(DegenerateConfigurationError):
        build_frames(math.pi, S)
    with pytest.raises(DegenerateConfigurationError):
        build_frames(0.0, H)
    with pytest.raises(ValueError):
        build_frames(3.5, S)  # beyond the spherical domain
    with pytest.raises(ValueError):
        build_frames(25.0, H)  # beyond the working cap


# ---------------------------------------------------------------------------
# single-step distances: reference values


@pytest.mark.parametrize("geometry", [S, H])
def test_common_axis_step_preserves_separation(geometry):
    cfg = ScaledConfiguration(rho=0.8, lam=0.6, phi_a=0.0, phi_b=0.0)
    assert construction_step_distance(cfg, geometry) == pytest.approx(0.8, abs=1e-12)
    assert closed_form_step_distance(cfg, geometry) == pytest.approx(0.8, abs=1e-12)


@pytest.mark.parametrize("geometry", [S, H])
def test_zero_step_preserves_separation(geometry):
    cfg = ScaledConfiguration(rho=1.1, lam=0.0, phi_a=2.0, phi_b=5.0)
    assert construction_step_distance(cfg, geometry) == pytest.approx(1.1, abs=1e-12)
    assert closed_form_step_distance(cfg, geometry) == pytest.approx(1.1, abs=1e-12)


def test_receding_along_common_geodesic_spherical():
    # opposite azimuths push the agents apart along the connecting geodesic
    cfg = ScaledConfiguration(rho=0.7, lam=0.2, phi_a=0.0, phi_b=math.pi)
    assert construction_step_distance(cfg, S) == pytest.approx(1.1, abs=1e-12)
    assert closed_form_step_distance(cfg, S) == pytest.approx(1.1, abs=1e-12)


def test_receding_along_common_geodesic_hyperbolic():
    cfg = ScaledConfiguration(rho=0.7, lam=0.2, phi_a=0.0, phi_b=math.pi)
    assert construction_step_distance(cfg, H) == pytest.approx(1.1, abs=1e-12)
    assert closed_form_step_distance(cfg, H) == pytest.approx(1.1, abs=1e-12)


def test_closed_form_smooth_at_zero_separation():
    cfg = ScaledConfiguration(rho=0.0, lam=0.4, phi_a=1.0, phi_b=1.0)
    assert closed_form_step_distance(cfg, S) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DegenerateConfigurationError):
        construction_step_distance(cfg, S)


# ---------------------------------------------------------------------------
# closed form vs construction


@pytest.mark.parametrize("geometry,tol", [(S, 1e-12), (H, 1e-9)])
def test_closed_form_matches_construction(geometry, tol):
    rho, lam, pa, pb = random_configs(101, 2000, geometry)
    diff = np.abs(
        construction_distances(geometry, rho, lam, pa, pb)
        - closed_form_distances(geometry, rho, lam, pa, pb)
    )
    assert np.max(diff) <= tol


@pytest.mark.parametrize("geometry,tol", [(S, 1e-12), (H, 1e-9)])
def test_agent_relabeling_symmetry(geometry, tol):
    # swapping the agents maps the azimuths to (pi - phi_b, pi - phi_a);
    # verified against the construction, not just the closed form
    rho, lam, pa, pb = random_configs(55, 1500, geometry)
    base = construction_distances(geometry, rho, lam, pa, pb)
    swapped = construction_distances(
        geometry, rho, lam, math.pi - pb, math.pi - pa
    )
    assert np.max(np.abs(base - swapped)) <= tol
    closed = closed_form_distances(geometry, rho, lam, math.pi - pb, math.pi - pa)
    assert np.max(np.abs(base - closed)) <= tol


@settings(max_examples=60, deadline=None)
@given(
    rho=st.floats(min_value=0.01, max_value=3.0),
    lam=st.floats(min_value=0.0, max_value=2.0),
    pa=azimuths,
    pb=azimuths,
)
def test_spherical_range_and_triangle_bound(rho, lam, pa, pb):
    cfg = ScaledConfiguration(rho=rho, lam=lam, phi_a=pa, phi_b=pb)
    d = closed_form_step_distance(cfg, S)
    assert 0.0 <= d <= math.pi
    assert d <= rho + 2.0 * lam + 1e-9


@settings(max_examples=60, deadline=None)
@given(
    rho=st.floats(min_value=0.01, max_value=5.0),
    lam=st.floats(min_value=0.0, max_value=2.0),
    pa=azimuths,
    pb=azimuths,
)
def test_hyperbolic_range_and_triangle_bound(rho, lam, pa, pb):
    cfg = ScaledConfiguration(rho=rho, lam=lam, phi_a=pa, phi_b=pb)
    d = closed_form_step_distance(cfg, H)
    assert 0.0 <= d <= rho + 2.0 * lam + 1e-9


# ---------------------------------------------------------------------------
# flat limit


@pytest.mark.parametrize("geometry", [S, H])
def test_flat_limit_second_order_convergence(geometry):
    rng = np.random.default_rng(42)
    pa = rng.uniform(0.0, 2.0 * math.pi, 50)
    pb = rng.uniform(0.0, 2.0 * math.pi, 50)
    r, l = 1.0, 0.3
    flat = planar_two_step_distance(r, l, pa, pb)
    errors = []
    for radius in (10.0, 20.0, 40.0):
        curved = radius * closed_form_distances(
            geometry, r / radius, l / radius, pa, pb
        )
        errors.append(np.mean(np.abs(curved - flat)))
    order_1 = math.log2(errors[0] / errors[1])
    order_2 = math.log2(errors[1] / errors[2])
    assert order_1 >= 1.9
    assert order_2 >= 1.9


# ---------------------------------------------------------------------------
# numerics


def test_arccosh_from_excess_matches_mpmath():
    mpmath.mp.dps = 40
    for w in (1e-14, 1e-10, 1e-8, 1e-5, 1e-2, 1.0, 50.0):
        expected = float(mpmath.acosh(mpmath.mpf(1) + mpmath.mpf(w)))
        got = float(arccosh_from_excess(np.asarray(w)))
        assert got == pytest.approx(expected, rel=1e-13, abs=1e-300)


def test_inverse_guards_flag_numerical_bugs():
    with pytest.raises(ValueError):
        _invert_cos(np.array(1.5))
    with pytest.raises(ValueError):
        _invert_cos(np.array(-1.0 - 1e-9))
    with pytest.raises(ValueError):
        _invert_cosh(np.array(0.5), np.array(1.0))
    # within rounding slack: silently clipped
    assert _invert_cos(np.array(1.0 + 1e-13)) == 0.0
    assert _invert_cosh(np.array(1.0 - 1e-13), np.array(1.0)) == 0.0


def test_scaled_configuration_validation():
    with pytest.raises(ValueError):
        ScaledConfiguration(rho=-0.1, lam=0.1, phi_a=0.0, phi_b=0.0)
    with pytest.raises(ValueError):
        ScaledConfiguration(rho=0.1, lam=-0.1, phi_a=0.0, phi_b=0.0)
    cfg = ScaledConfiguration(rho=0.1, lam=0.1, phi_a=-1.0, phi_b=7.0)
    assert 0.0 <= cfg.phi_a < 2.0 * math.pi
    assert 0.0 <= cfg.phi_b < 2.0 * math.pi


def test_domain_caps_enforced():
    with pytest.raises(ValueError):
        closed_form_step_distance(
            ScaledConfiguration(rho=3.2, lam=0.1, phi_a=0.0, phi_b=0.0), S
        )
    with pytest.raises(ValueError):
        closed_form_step_distance(
            ScaledConfiguration(rho=21.0, lam=0.1, phi_a=0.0, phi_b=0.0), H
        )
    with pytest.raises(ValueError):
        closed_form_step_distance(
            ScaledConfiguration(rho=1.0, lam=21.0, phi_a=0.0, phi_b=0.0), H
        )
