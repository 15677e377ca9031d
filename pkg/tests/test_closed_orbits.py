import numpy as np
import pytest

from s2orbits.closed_orbits import (CommensurabilityProblem, breakpoints, class_segments,
                                    closure_error, common_period, find_bracket, residual,
                                    solution_record, solve)
from s2orbits.elliptic import complete_K
from s2orbits.errors import ClassExit, InvalidParameters, NoSignChange
from s2orbits.orbit_engine import periods, sample

from conftest import CLOSED_CASES, P


def test_zero_zero_residual():
    # T_u = 4K(1/2); the angular speed at Omega = 0 carries sqrt(1 - 2 gamma)
    prob = CommensurabilityProblem(1, 1, 0.0, "t_s'")
    K = complete_K(0.5)
    assert residual(prob, 0.0, P) == pytest.approx(4 * K * (1 - 1 / np.sqrt(P.c)), rel=1e-13)


def test_closed_a_residual_near_reference():
    prob = CommensurabilityProblem(2, 3, -0.25, "t_p")
    spec_T = periods(solve(prob, P)[1])
    assert abs(residual(prob, 0.80727, P)) < 1e-3 * spec_T[1]


def test_sign_change_across_bracket():
    prob = CommensurabilityProblem(2, 3, -0.25, "t_p", bracket=(0.75, 0.9))
    a, b = find_bracket(prob, P)
    assert np.sign(residual(prob, a, P)) != np.sign(residual(prob, b, P))


@pytest.mark.parametrize("case", sorted(CLOSED_CASES))
def test_closed_roots(case):
    fam, h, (pp, qq), target, ph = CLOSED_CASES[case]
    prob = CommensurabilityProblem(pp, qq, h, fam, phases=ph)
    g, spec = solve(prob, P)
    assert abs(g - target) < 1e-4
    Tu, Tv = periods(spec)
    assert abs(pp * Tu - qq * Tv) < 1e-12 * max(Tu, Tv)
    assert closure_error(spec, common_period(prob, spec)) < 1e-8


def test_closed_c_not_in_primed_region():
    with pytest.raises(NoSignChange):
        solve(CommensurabilityProblem(3, 1, -0.25, "t_s'"), P)


def test_sampled_closure():
    fam, h, (pp, qq), _, ph = CLOSED_CASES["b"]
    prob = CommensurabilityProblem(pp, qq, h, fam, phases=ph)
    _, spec = solve(prob, P)
    s = sample(spec, (0.0, common_period(prob, spec)), 2)
    assert np.linalg.norm(s.xyz[0] - s.xyz[1]) < 1e-8


def test_bracket_stability():
    fam, h, (pp, qq), _, _ = CLOSED_CASES["d"]
    base = solve(CommensurabilityProblem(pp, qq, h, fam), P)[0]
    for lo, hi in ((1.5, 1.7), (1.45, 1.75), (1.52, 1.65)):
        g, _ = solve(CommensurabilityProblem(pp, qq, h, fam, bracket=(lo, hi)), P)
        assert abs(g - base) < 1e-12


def test_transposed_problem():
    fam, h, (pp, qq), _, _ = CLOSED_CASES["i"]
    g, _ = solve(CommensurabilityProblem(pp, qq, h, fam), P)
    h2, spec = solve(CommensurabilityProblem(pp, qq, g, fam, fixed="G"), P)
    assert h2 == pytest.approx(h, abs=1e-9)
    assert spec.orbit_class.family == fam


def test_class_exit():
    prob = CommensurabilityProblem(2, 3, -0.25, "t_p")
    with pytest.raises(ClassExit):
        residual(prob, 0.2, P)
    with pytest.raises(ClassExit):
        solve(CommensurabilityProblem(1, 1, 0.5, "t_mp"), P)


def test_no_sign_change():
    with pytest.raises(NoSignChange):
        solve(CommensurabilityProblem(1, 50, 0.5, "t_p"), P)


@pytest.mark.parametrize("bad", [dict(p=2, q=4), dict(p=0, q=1), dict(p=1.5, q=2),
                                 dict(p=1, q=1, fixed="H"), dict(p=1, q=1, bracket=(1.0, 0.5))])
def test_invalid_problems(bad):
    kw = dict(fixed_value=0.5, family="t_p")
    kw.update(bad)
    with pytest.raises(InvalidParameters):
        CommensurabilityProblem(**kw)


def test_segments_follow_curves():
    prob = CommensurabilityProblem(1, 1, 0.5, "t_p")
    assert 1.5 in breakpoints(prob, P)
    (a, b), = class_segments(prob, P)
    assert a == 1.5


def test_record_fields():
    fam, h, (pp, qq), _, ph = CLOSED_CASES["h"]
    prob = CommensurabilityProblem(pp, qq, h, fam, phases=ph)
    rec = solution_record(prob, *solve(prob, P))
    assert set(rec) >= {"p", "q", "Omega", "G", "class", "T_u", "T_v", "residual"}
    assert rec["class"] == "t_ds"
