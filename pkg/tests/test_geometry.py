import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s2orbits.errors import InvalidParameters
from s2orbits.geometry import (EquatorPoint, PlanarElliptic, ProblemParams, RangeError,
                               SingularPoint, SpherePoint, SpheroConical, U_of_u,
                               cartesian_to_spheroconical, elliptic_drop, elliptic_lift,
                               gnomonic_project, local_time_scale, spheroconical_to_cartesian)

from conftest import P


def random_sphere(n, seed=0, R=1.0):
    x = np.random.default_rng(seed).normal(size=(n, 3))
    return R * x / np.linalg.norm(x, axis=1, keepdims=True)


def test_params_derived():
    p = ProblemParams(R=2.0, theta_f=np.pi / 6, gamma1=2.0, gamma2=1.0)
    assert p.sigma ** 2 + p.sigma_bar ** 2 == pytest.approx(1.0, abs=1e-15)
    assert p.gamma == pytest.approx(1 / 3)
    assert p.a == pytest.approx(2.0 * np.tan(np.pi / 6))
    assert p.time_unit == pytest.approx(np.sqrt(8.0 / 3.0))


@pytest.mark.parametrize("kw", [dict(theta_f=0.0), dict(theta_f=np.pi / 2), dict(R=-1.0),
                                dict(gamma1=1.0, gamma2=2.0), dict(gamma2=0.0)])
def test_params_rejected(kw):
    with pytest.raises(InvalidParameters):
        ProblemParams(**kw)


def test_focus_limit():
    sb = P.sigma_bar
    pt = spheroconical_to_cartesian(SpheroConical(sb, sb), P)
    assert np.allclose(pt.as_array(), P.centers()[0], atol=1e-12)


def test_equator_at_U_one():
    for V in (-0.3, 0.0, 0.45):
        assert spheroconical_to_cartesian(SpheroConical(1.0, V), P).Z == 0.0


def test_range_error():
    with pytest.raises(RangeError):
        spheroconical_to_cartesian(SpheroConical(0.2, 0.0), P)
    with pytest.raises(RangeError):
        spheroconical_to_cartesian(SpheroConical(0.8, 0.6), P)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(-1.0, 1.0), st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_sphere_constraint(a, b, sy, sz):
    sb = P.sigma_bar
    U = sb + (1 - sb) * a
    V = sb * b
    x = spheroconical_to_cartesian(SpheroConical(U, V, sy, sz), P).as_array()
    assert abs(x @ x - 1.0) < 1e-12


def test_roundtrip_bulk():
    pts = random_sphere(10_000, seed=1)
    worst = 0.0
    for x in pts:
        sc = cartesian_to_spheroconical(SpherePoint(*x), P)
        y = spheroconical_to_cartesian(sc, P).as_array()
        worst = max(worst, np.max(np.abs(x - y)))
    assert worst < 1e-10


def test_north_pole():
    sc = cartesian_to_spheroconical(SpherePoint(0.0, 0.0, 1.0), P)
    assert sc.V == pytest.approx(0.0, abs=1e-15)
    assert sc.U == pytest.approx(P.sigma_bar, abs=1e-15)
    assert np.allclose(spheroconical_to_cartesian(sc, P).as_array(), [0, 0, 1], atol=1e-12)


def test_near_focus_limits():
    f2 = P.centers()[1]
    x = f2 + np.array([1e-7, 1e-7, 0.0])
    sc = cartesian_to_spheroconical(SpherePoint(*(x / np.linalg.norm(x))), P)
    assert sc.U == pytest.approx(P.sigma_bar, abs=1e-6)
    assert sc.V == pytest.approx(-P.sigma_bar, abs=1e-6)


def test_center_is_singular():
    with pytest.raises(SingularPoint):
        cartesian_to_spheroconical(SpherePoint(*P.centers()[0]), P)


def test_lift_examples():
    assert elliptic_drop(PlanarElliptic(3.0, 0.0), P).V == 0.0
    assert elliptic_drop(PlanarElliptic(1.0, 0.0), P).U == pytest.approx(P.sigma_bar, abs=1e-15)
    assert 1.0 - elliptic_drop(PlanarElliptic(1e9, 0.0), P).U < 1e-15
    with pytest.raises(EquatorPoint):
        elliptic_lift(SpheroConical(1.0, 0.0), P)


def test_lift_drop_roundtrip():
    rng = np.random.default_rng(2)
    sb = P.sigma_bar
    for _ in range(10_000):
        sc = SpheroConical(rng.uniform(sb, 0.999), rng.uniform(-sb, sb) * 0.999,
                           int(rng.choice([1, -1])), int(rng.choice([1, -1])))
        back = elliptic_drop(elliptic_lift(sc, P), P)
        assert abs(back.U - sc.U) < 1e-12 and abs(back.V - sc.V) < 1e-12
        assert (back.sign_Y, back.sign_Z) == (sc.sign_Y, sc.sign_Z)


def test_lift_monotone():
    u = np.linspace(1.0, 50.0, 1000)
    assert np.all(np.diff(U_of_u(u, P)) > 0)


def test_gnomonic_centers():
    f1, f2 = P.centers()
    assert np.allclose(gnomonic_project(SpherePoint(*f1), P), (P.a, 0.0), atol=1e-15)
    assert np.allclose(gnomonic_project(SpherePoint(*f2), P), (-P.a, 0.0), atol=1e-15)
    assert np.allclose(gnomonic_project(SpherePoint(*-f1), P, "south"), (-P.a, 0.0), atol=1e-15)
    assert np.allclose(gnomonic_project(SpherePoint(*-f2), P, "south"), (P.a, 0.0), atol=1e-15)
    assert gnomonic_project(SpherePoint(0.0, 0.0, 1.0), P) == (0.0, 0.0)


def test_gnomonic_equator():
    with pytest.raises(EquatorPoint):
        gnomonic_project(SpherePoint(1.0, 0.0, 0.0), P)


def test_gnomonic_matches_planar_elliptic():
    # the projected point has the elliptic coordinates of the lift
    pts = random_sphere(500, seed=3)
    pts = pts[pts[:, 2] > 0.05]
    a = P.a
    for x in pts:
        pe = elliptic_lift(cartesian_to_spheroconical(SpherePoint(*x), P), P)
        x1, x2 = gnomonic_project(SpherePoint(*x), P)
        r1, r2 = np.hypot(x1 - a, x2), np.hypot(x1 + a, x2)
        assert abs((r1 + r2) / (2 * a) - pe.u) < 1e-10
        assert abs((r2 - r1) / (2 * a) - pe.v) < 1e-10


def test_local_time_scale():
    assert local_time_scale(ProblemParams(theta_f=np.pi / 4)) == pytest.approx(np.sqrt(0.5), abs=1e-15)
    assert local_time_scale(P) == pytest.approx(np.sqrt(np.cos(np.pi / 6) * np.sin(np.pi / 6)), abs=1e-15)
    assert local_time_scale(ProblemParams(theta_f=1e-12)) < 1e-5
