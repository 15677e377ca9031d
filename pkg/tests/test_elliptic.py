import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from s2orbits.elliptic import (carlson_rf, cn, complete_K, dn, incomplete_F,
                               jacobi_sn_cn_dn, sn)
from s2orbits.errors import DegenerateModulus, InvalidModulus

m_open = st.floats(0.0, 0.999, allow_nan=False)
s_any = st.floats(-50.0, 50.0, allow_nan=False)


def K_quad(m):
    return quad(lambda t: 1.0 / np.sqrt(1.0 - m * np.sin(t) ** 2), 0.0, np.pi / 2,
                epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def test_K_at_zero():
    assert complete_K(0.0) == pytest.approx(np.pi / 2, abs=1e-15)


def test_K_half_against_quadrature():
    assert abs(complete_K(0.5) - K_quad(0.5)) < 1e-12


def test_K_monotone_example():
    assert np.isfinite(complete_K(0.99)) and complete_K(0.99) > complete_K(0.5)


@pytest.mark.parametrize("m", [-1e-3, 1.5, np.nan])
def test_K_rejects_bad_modulus(m):
    with pytest.raises(InvalidModulus):
        complete_K(m)


@pytest.mark.parametrize("m", [1.0, 1.0 - 1e-13])
def test_K_degenerate(m):
    with pytest.raises(DegenerateModulus):
        complete_K(m)


@settings(max_examples=60, deadline=None)
@given(m_open)
def test_K_matches_quadrature(m):
    assert abs(complete_K(m) - K_quad(m)) < 1e-11 * max(1.0, K_quad(m))


@settings(max_examples=60, deadline=None)
@given(m_open, m_open)
def test_K_monotone(m1, m2):
    if m1 < m2:
        assert complete_K(m1) < complete_K(m2)


def test_circular_limit():
    s = np.linspace(-7, 7, 41)
    a, b, c = jacobi_sn_cn_dn(s, 0.0)
    assert np.allclose(a, np.sin(s), atol=1e-15) and np.allclose(b, np.cos(s), atol=1e-15)
    assert np.all(c == 1.0)


def test_hyperbolic_limit():
    s = np.linspace(-7, 7, 41)
    a, b, c = jacobi_sn_cn_dn(s, 1.0)
    assert np.allclose(a, np.tanh(s), atol=1e-15)
    assert np.allclose(b, 1 / np.cosh(s), atol=1e-15) and np.allclose(c, 1 / np.cosh(s), atol=1e-15)


def test_identity_example():
    a, b, c = jacobi_sn_cn_dn(0.7, 0.3)
    assert abs(a * a + b * b - 1) < 1e-12 and abs(c * c + 0.3 * a * a - 1) < 1e-12


def test_against_scipy():
    from scipy.special import ellipj
    s = np.linspace(-20, 20, 401)
    for m in (0.0, 0.1, 0.5, 0.9, 0.999999):
        ours = jacobi_sn_cn_dn(s, m)
        ref = ellipj(s, m)[:3]
        for x, y in zip(ours, ref):
            assert np.max(np.abs(x - y)) < 1e-12


def test_wrappers_agree():
    a, b, c = jacobi_sn_cn_dn(1.3, 0.4)
    assert (sn(1.3, 0.4), cn(1.3, 0.4), dn(1.3, 0.4)) == (a, b, c)


@settings(max_examples=200, deadline=None)
@given(s_any, m_open)
def test_pythagorean_identities(s, m):
    a, b, c = jacobi_sn_cn_dn(s, m)
    assert abs(a * a + b * b - 1) < 1e-11
    assert abs(c * c + m * a * a - 1) < 1e-11


@settings(max_examples=100, deadline=None)
@given(st.floats(-10.0, 10.0), m_open)
def test_periodicity(s, m):
    K = complete_K(m)
    assert abs(sn(s + 4 * K, m) - sn(s, m)) < 1e-9
    assert abs(dn(s + 2 * K, m) - dn(s, m)) < 1e-9


def test_F_special_values():
    for m in (0.0, 0.3, 0.9):
        assert incomplete_F(0.0, m) == 0.0
        assert incomplete_F(np.pi / 2, m) == pytest.approx(complete_K(m), rel=1e-14)


def test_F_roundtrip_example():
    assert abs(sn(incomplete_F(0.4, 0.6), 0.6) - np.sin(0.4)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(-6.0, 6.0), m_open)
def test_F_roundtrip(phi, m):
    assert abs(sn(incomplete_F(phi, m), m) - np.sin(phi)) < 1e-10


def test_F_against_scipy():
    from scipy.special import ellipkinc
    for phi in np.linspace(-5, 5, 23):
        for m in (0.0, 0.2, 0.7, 0.99):
            assert abs(incomplete_F(phi, m) - ellipkinc(phi, m)) < 1e-13 * max(1, abs(phi))


def test_carlson_rf_closed_form():
    # R_F(0, 1, 1) = pi/2 and R_F(x, x, x) = 1/sqrt(x)
    assert carlson_rf(0.0, 1.0, 1.0) == pytest.approx(np.pi / 2, rel=1e-14)
    assert carlson_rf(4.0, 4.0, 4.0) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("m", [0.05, 0.5, 0.8206258453362208, 0.99, 1 - 1e-9])
def test_values_at_quarter_periods(m):
    K = complete_K(m)
    for j in (1, 2, 3, -1, 5):
        a, b, c = jacobi_sn_cn_dn(j * K, m)
        # sn = +-1 or 0, and dn = sqrt(1 - m) at odd quarter periods
        if j % 2:
            assert abs(abs(a) - 1) < 1e-12 and abs(b) < 1e-7
            assert abs(c - np.sqrt(1 - m)) < 1e-12
        else:
            assert abs(a) < 1e-12 and abs(c - 1) < 1e-12
