"""Elliptic integrals of the first kind and Jacobi elliptic functions.

K(m) is computed with the arithmetic-geometric mean, sn/cn/dn with the
descending Landen (AGM) recursion, and F(phi|m) with Carlson's R_F.
All routines use the parameter convention m = k**2.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateModulus, InvalidModulus

EPS_DEGEN = 1e-12
_MAX_ITER = 64


def _check_m(m: float) -> float:
    m = float(m)
    if not np.isfinite(m) or m < 0.0 or m > 1.0:
        raise InvalidModulus(f"parameter m={m!r} outside [0, 1]")
    return m


def _agm(a: float, b: float) -> float:
    for _ in range(_MAX_ITER):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return a


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind K(m)."""
    m = _check_m(m)
    if m >= 1.0 - EPS_DEGEN:
        raise DegenerateModulus(f"K diverges as m -> 1 (m={m!r})")
    return np.pi / (2.0 * _agm(1.0, np.sqrt(1.0 - m)))


def jacobi_sn_cn_dn(s, m: float):
    """Return (sn, cn, dn) of s for parameter m.

    ``s`` may be a scalar or an array; the result has the same shape.
    """
    m = _check_m(m)
    s_arr = np.asarray(s, dtype=float)
    if m == 0.0:
        return np.sin(s_arr), np.cos(s_arr), np.ones_like(s_arr)
    if m == 1.0:
        sech = 1.0 / np.cosh(s_arr)
        return np.tanh(s_arr), sech, sech.copy()

    # reduce to [-2K, 2K] so the recursion sees moderate angles
    if m < 1.0 - EPS_DEGEN:
        quarter = complete_K(m)
        s_arr = s_arr - 4.0 * quarter * np.round(s_arr / (4.0 * quarter))

    a = [1.0]
    c = [np.sqrt(m)]
    b = np.sqrt(1.0 - m)
    for _ in range(_MAX_ITER):
        if abs(c[-1]) <= 1e-16:
            break
        an, bn = a[-1], b
        a.append(0.5 * (an + bn))
        c.append(0.5 * (an - bn))
        b = np.sqrt(an * bn)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * s_arr
    phis = [phi]
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] * np.sin(phi) / a[j]))
        phis.append(phi)
    phi0 = phis[-1]
    sn = np.sin(phi0)
    cn = np.cos(phi0)
    # dn^2 = cn^2 + (1 - m) sn^2 has no cancellation, unlike the Landen
    # ratio cn(phi0)/cos(phi1 - phi0), which is 0/0 at s = K
    dn = np.sqrt(cn * cn + (1.0 - m) * sn * sn)
    return sn, cn, dn


def sn(s, m: float):
    return jacobi_sn_cn_dn(s, m)[0]


def cn(s, m: float):
    return jacobi_sn_cn_dn(s, m)[1]


def dn(s, m: float):
    return jacobi_sn_cn_dn(s, m)[2]


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_F(x, y, z) by duplication."""
    if min(x, y, z) < 0.0 or (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise ValueError("R_F needs non-negative arguments, at most one zero")
    for _ in range(200):
        mu = (x + y + z) / 3.0
        dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
        if max(abs(dx), abs(dy), abs(dz)) < 1e-4:
            e2 = dx * dy - dz * dz
            e3 = dx * dy * dz
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
                    - 3.0 * e2 * e3 / 44.0) / np.sqrt(mu)
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    raise RuntimeError("R_F duplication did not converge")


def incomplete_F(phi: float, m: float) -> float:
    """Incomplete elliptic integral F(phi|m) for any real amplitude."""
    m = _check_m(m)
    if m >= 1.0 - EPS_DEGEN:
        raise DegenerateModulus(f"F is unbounded as m -> 1 (m={m!r})")
    phi = float(phi)
    n = np.round(phi / np.pi)
    r = phi - n * np.pi
    sr = np.sin(r)
    cr = np.cos(r)
    part = sr * carlson_rf(cr * cr, 1.0 - m * sr * sr, 1.0) if sr != 0.0 else 0.0
    return float(part + 2.0 * n * complete_K(m)) if n else float(part)
