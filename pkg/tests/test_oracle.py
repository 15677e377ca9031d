import numpy as np
import pytest

from s2orbits.errors import SingularityEncountered, ToleranceFailure
from s2orbits.geometry import ProblemParams
from s2orbits.invariants import CartesianState, from_planar
from s2orbits.oracle import (IntegratorConfig, SeparatedInitial, compare_to_analytic,
                             initial_from_analytic, integrate_cartesian, integrate_separated,
                             integrate_separated_angles, state_from_angles, turning_points)
from s2orbits.orbit_engine import periods, physical_time, printed_xyz, spec_from_hg, uv_of_zeta

from conftest import GALLERY, P, rep_spec

FAST = IntegratorConfig(method="DOP853")


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0.0)


def test_turning_point_start():
    inv = from_planar((-0.27, 0.8), P)  # t_p(1): u1 < u < u2 in the north
    spec = spec_from_hg(-0.27, 0.8, P)
    u2 = spec.branch.u2
    tr = integrate_separated(inv, P, SeparatedInitial(u2, 0.3, 1, 1), (0.0, 10.0), FAST)
    assert tr.residual < 1e-8
    # u leaves the outer caustic and turns around at both caustics
    assert np.all(tr.u <= u2 + 1e-9) and np.all(tr.u >= spec.branch.u1 - 1e-9)
    assert len(turning_points(tr)["u"]) >= 1


def test_gallery_b_stays_lemniscatic():
    (h, g), _, _ = GALLERY["b"]
    spec = spec_from_hg(h, g, P)
    u1, u2 = spec.branch.u1, spec.branch.u2
    tr = integrate_separated(spec.inv, P, (1.2, 0.1, 1, 1), (0.0, 30.0), FAST)
    assert -1 < u1 < 1
    assert np.all(tr.u >= 1.0 - 1e-12) and np.all(tr.u <= u2 + 1e-9)
    assert np.all(np.abs(tr.v) <= 1.0)


def test_outside_region_rejected():
    inv = from_planar((-0.27, 0.8), P)
    with pytest.raises(ValueError):
        integrate_separated(inv, P, (10.0, 0.0, 1, 1), (0.0, 1.0), FAST)


def test_residual_guard():
    spec = rep_spec("p_tp")
    y0 = initial_from_analytic(spec)
    loose = IntegratorConfig(rtol=1e-3, atol=1e-3, residual_tol=1e-12)
    with pytest.raises(ToleranceFailure):
        integrate_separated_angles(spec.inv, P, y0, (0.0, 10.0), loose)


@pytest.mark.parametrize("key", ["p_tp", "n_tl2", "z_tl", "p_tmp"])
def test_separated_matches_analytic(key):
    spec = rep_spec(key)
    z = np.linspace(0, 10, 501)
    tr = integrate_separated_angles(spec.inv, P, initial_from_analytic(spec), (0, 10), FAST, zeta_eval=z)
    ana = np.array(printed_xyz(spec, z)).T
    assert np.max(np.linalg.norm(ana - tr.xyz, axis=1)) < 1e-6
    u, _ = uv_of_zeta(spec, z)
    finite = np.abs(u) < 1e3
    assert np.max(np.abs(1 / u[finite] - tr.w[finite])) < 1e-6


def test_cartesian_conservation_physical_time():
    # ten radial periods of an orbit that keeps clear of both centers
    spec = rep_spec("p_tp")
    st = state_from_angles(initial_from_analytic(spec), P)
    T = 10 * physical_time(spec, periods(spec)[0])
    free = integrate_cartesian(st, P, (0.0, T), IntegratorConfig(), n=400)
    assert np.ptp(free.H) < 1e-8 and np.ptp(free.Omega) < 1e-8
    assert free.H[0] == pytest.approx(spec.inv.H, abs=1e-12)
    # the sphere bound is met with the per-step renormalization
    tr = integrate_cartesian(st, P, (0.0, T), IntegratorConfig(project=True), n=400)
    assert np.max(np.abs(np.sum(tr.xyz ** 2, axis=1) - 1.0)) < 1e-9
    assert np.max(np.abs(np.sum(tr.xyz * tr.vel, axis=1))) < 1e-9
    assert np.ptp(tr.H) < 1e-8 and np.ptp(tr.Omega) < 1e-8


def test_projection_option():
    spec = rep_spec("n_tp1")
    st = state_from_angles(initial_from_analytic(spec), P)
    tr = integrate_cartesian(st, P, (0.0, 10.0), IntegratorConfig(project=True), n=50)
    assert np.max(np.abs(np.sum(tr.xyz ** 2, axis=1) - 1.0)) < 1e-13


def test_meridian_symmetry():
    p = ProblemParams.from_gamma(0.5)
    x0 = np.array([0.0, np.sin(0.3), np.cos(0.3)])
    tr = integrate_cartesian(CartesianState.from_arrays(x0, [0, 0, 0]), p, (0.0, 5.0), FAST, n=200)
    assert np.max(np.abs(tr.xyz[:, 0])) < 1e-12


def test_center_collision():
    x0 = P.centers()[0]
    with pytest.raises(SingularityEncountered):
        integrate_cartesian(CartesianState.from_arrays(x0, [0, 0, 0]), P, (0.0, 1.0), FAST)


def test_routes_agree_time_clock():
    spec = rep_spec("n_tsp")
    y0 = initial_from_analytic(spec)
    st = state_from_angles(y0, P)
    tz = integrate_cartesian(st, P, (0.0, 10.0), FAST, n=201, clock="zeta")
    tt = integrate_cartesian(st, P, (0.0, tz.t[-1]), FAST, eval_points=tz.t, clock="t")
    assert np.max(np.abs(tz.xyz - tt.xyz)) < 1e-8
    assert np.max(np.abs(tt.zeta - tz.zeta)) < 1e-8


def test_closed_g_closed_orbit():
    spec = spec_from_hg(0.0, 0.0, P)
    rep = compare_to_analytic(spec, P, (0.0, 10.0), FAST)
    assert rep.max_dev < 1e-6 and rep.max_dev_cartesian < 1e-6
    assert rep.crossings_analytic == 0 and rep.crossings_oracle == 0


def test_gallery_i_crossing_parity():
    (h, g), ph, _ = GALLERY["i"]
    spec = spec_from_hg(h, g, P, ph)
    rep = compare_to_analytic(spec, P, (0.0, 10.0), FAST)
    u, _ = uv_of_zeta(spec, np.linspace(0, 10, 2001))
    sg = np.sign(u)
    assert rep.crossings_match
    assert rep.crossings_analytic == int(np.count_nonzero(sg[1:] != sg[:-1]))
    assert rep.passed()


def test_tolerance_convergence():
    spec = rep_spec("p_tsp")
    devs = [compare_to_analytic(spec, P, (0.0, 10.0), IntegratorConfig(rtol=t, atol=t, residual_tol=1e-4),
                                n=401).max_dev for t in (1e-6, 1e-9, 1e-12)]
    assert devs[0] > devs[1] > devs[2]


def test_rk4_step_halving():
    spec = rep_spec("z_tl")
    y0 = initial_from_analytic(spec)
    z = np.linspace(0, 5, 11)
    ana = np.array(printed_xyz(spec, z)).T
    errs = []
    for h in (0.02, 0.01):
        cfg = IntegratorConfig(method="rk4", step=h, residual_tol=1e-6)
        tr = integrate_separated_angles(spec.inv, P, y0, (0, 5), cfg, zeta_eval=z)
        errs.append(np.max(np.abs(tr.xyz - ana)))
    # fourth order: halving the step cuts the error by about 16
    assert 10 < errs[0] / errs[1] < 24


def test_report_dict():
    rep = compare_to_analytic(rep_spec("p_tp"), P, (0.0, 2.0), FAST, n=101)
    d = rep.as_dict()
    assert d["crossings_match"] is True and d["elapsed_zeta"] == [0.0, 2.0]
