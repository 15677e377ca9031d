"""Closed-form orbit blocks, one per family and regime.

Each block provides
  * the elliptic parameters (k_u^2, g_u, k_v^2, g_v) from the branch points,
  * the K-multipliers of the u and v periods,
  * the Cartesian formulas X, Y, Z with their Upsilon normalisations,
    transcribed term by term,
  * a Moebius description u = (a + b*w)/(c + d*w) with w one of sn^2, dn^2
    or cn of the phase; this feeds the compact cross-check path and the
    conversion of an initial coordinate into a phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Moebius:
    kind: str  # "sn2", "dn2" or "cn"
    a: float
    b: float
    c: float
    d: float

    def w(self, jac):
        sn, cn, dn = jac
        return {"sn2": sn * sn, "dn2": dn * dn, "cn": cn}[self.kind]

    def num_den(self, jac):
        w = self.w(jac)
        return self.a + self.b * w, self.c + self.d * w

    def invert(self, x: float) -> float:
        """Value of the Jacobi quantity w at which N/D equals x."""
        return (self.a - self.c * x) / (self.d * x - self.b)


@dataclass(frozen=True)
class BlockData:
    key: str
    k_u2: float
    g_u: float
    k_v2: float
    g_v: float
    mult: tuple
    mob_u: Moebius
    mob_v: Moebius
    xyz: Callable


def _sq(x):
    return np.sqrt(x)


# --- Omega > 0 ------------------------------------------------------------

def _ups_v_p_sn(v1, s, sb, snv):
    return _sq((v1 - 1) ** 2 + 4 * (1 - v1) * (sb**2 * v1 - s**2) * snv**2
               + 4 * (sb**2 * v1**2 + s**2) * snv**4)


def _ups_u_p_dn(u2, s, sb, dnu):
    return _sq((u2 - 1) ** 2 + 4 * (1 - u2) * (sb**2 * u2 - s**2) * dnu**2
               + 4 * (sb**2 * u2**2 + s**2) * dnu**4)


def _ups_v_p_dn(v1, s, sb, dnv):
    return _sq((1 + v1) ** 2 + 2 * (1 - v1**2) * (s**2 - sb**2) * dnv**2
               + (1 - v1) ** 2 * dnv**4)


def _p_tp(bp, k_u, k_v, s, sb, ju, jv):
    u2, v1 = bp.u2, bp.v1
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uu = _sq((u2 - 1) ** 2 - 2 * (u2**2 - 1) * (s**2 - sb**2) * dnu**2 + (u2 + 1) ** 2 * dnu**4)
    Uv = _ups_v_p_sn(v1, s, sb, snv)
    f = 1.0 / (Uu * Uv)
    X = f * sb * (1 - u2 - (u2 + 1) * dnu**2) * (1 - v1 + 2 * v1 * snv**2)
    Y = f * 4 * s * sb * _sq(u2**2 - 1) * _sq(v1**2 - 1) * dnu * snv * cnv
    Z = f * s * (u2 - 1 - (u2 + 1) * dnu**2) * (v1 - 1 + 2 * snv**2)
    return X, Y, Z


def _p_tl(bp, k_u, k_v, s, sb, ju, jv):
    u2, v1 = bp.u2, bp.v1
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_p_dn(u2, s, sb, dnu) * _ups_v_p_sn(v1, s, sb, snv))
    X = f * sb * (u2 - 1 - 2 * u2 * dnu**2) * (1 - v1 + 2 * v1 * snv**2)
    Y = f * 4 * s * sb * k_u * _sq(1 - u2**2) * _sq(v1**2 - 1) * dnu * snu * snv * cnv
    Z = f * s * (1 - u2 - 2 * dnu**2) * (v1 - 1 + 2 * snv**2)
    return X, Y, Z


def _p_tsp(bp, k_u, k_v, s, sb, ju, jv):
    u2, v1 = bp.u2, bp.v1
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uv = _sq(4 * (sb**2 * v1**2 + s**2) + 4 * (1 - v1) * (sb**2 * v1 - s**2) * snv**2
             + (v1 - 1) ** 2 * snv**4)
    f = 1.0 / (_ups_u_p_dn(u2, s, sb, dnu) * Uv)
    X = f * sb * (1 - u2 + 2 * u2 * dnu**2) * (2 * v1 + (1 - v1) * snv**2)
    Y = f * 4 * s * sb * k_u * _sq(1 - u2**2) * _sq(1 - v1**2) * dnu * snu * cnv
    Z = f * s * (u2 - 1 + 2 * dnu**2) * (2 - (1 - v1) * snv**2)
    return X, Y, Z


def _p_tds(bp, k_u, k_v, s, sb, ju, jv):
    u2, v1 = bp.u2, bp.v1
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_p_dn(u2, s, sb, dnu) * _ups_v_p_dn(v1, s, sb, dnv))
    X = f * sb * (1 - u2 + 2 * u2 * dnu**2) * (1 + v1 - (1 - v1) * dnv**2)
    Y = f * 4 * s * sb * k_u * _sq(1 - u2**2) * _sq(1 - v1**2) * dnu * snu * dnv
    Z = f * s * (u2 - 1 + 2 * dnu**2) * (1 + v1 + (1 - v1) * dnv**2)
    return X, Y, Z


def _p_tmp(bp, k_u, k_v, s, sb, ju, jv):
    u2, v1 = bp.u2, bp.v1
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uu = _sq((1 + u2) ** 2 - 4 * (1 + u2) * (sb**2 * u2 + s**2) * snu**2
             + 4 * (sb**2 * u2**2 + s**2) * snu**4)
    f = 1.0 / (Uu * _ups_v_p_dn(v1, s, sb, dnv))
    X = f * sb * (u2 + 1 - 2 * u2 * snu**2) * (1 + v1 - (1 - v1) * dnv**2)
    Y = f * 4 * s * sb * _sq(1 - u2**2) * _sq(1 - v1**2) * cnu * snu * dnv
    Z = f * s * (1 + u2 - 2 * snu**2) * (1 + v1 + (1 - v1) * dnv**2)
    return X, Y, Z


# --- Omega < 0 ------------------------------------------------------------

def _ups_u_n_p(u1, s, sb, dnu):
    return _sq((u1 - 1) ** 2 - 2 * (u1**2 - 1) * (s**2 - sb**2) * dnu**2 + (u1 + 1) ** 2 * dnu**4)


def _ups_u_n_l(u1, s, sb, dnu):
    return _sq((u1 - 1) ** 2 + 4 * (1 - u1) * (sb**2 * u1 - s**2) * dnu**2
               + 4 * (sb**2 * u1**2 + s**2) * dnu**4)


def _ups_v_n_cn(A, B, s, sb, snv, cnv):
    return _sq(A**2 * (1 + cnv) ** 2 + 2 * A * B * (s**2 - sb**2) * snv**2 + B**2 * (1 - cnv) ** 2)


def _ups_v_n_sn(v2, s, sb, snv):
    return _sq((v2 - 1) ** 2 + 4 * (1 - v2) * (sb**2 * v2 - s**2) * snv**2
               + 4 * (sb**2 * v2**2 + s**2) * snv**4)


def _absv(bp):
    # |1 - v1| and |1 + v1| as complex moduli of the conjugate root
    return abs(1 - bp.v1), abs(1 + bp.v1)


def _n_tp1(bp, k_u, k_v, s, sb, ju, jv):
    u1 = bp.u1
    A, B = _absv(bp)
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_n_p(u1, s, sb, dnu) * _ups_v_n_cn(A, B, s, sb, snv, cnv))
    X = f * sb * (u1 - 1 + (u1 + 1) * dnu**2) * (B * (1 - cnv) - A * (1 + cnv))
    Y = f * 4 * s * sb * _sq(u1**2 - 1) * _sq(A * B) * dnu * snv
    Z = f * s * (1 - u1 + (u1 + 1) * dnu**2) * (B * (1 - cnv) + A * (1 + cnv))
    return X, Y, Z


def _n_tp2(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_n_p(u1, s, sb, dnu) * _ups_v_n_sn(v2, s, sb, snv))
    X = f * sb * (1 - u1 - (u1 + 1) * dnu**2) * (1 - v2 + 2 * v2 * snv**2)
    Y = f * 4 * s * sb * _sq(u1**2 - 1) * _sq(v2**2 - 1) * dnu * snv * cnv
    Z = f * s * (-1 + u1 - (u1 + 1) * dnu**2) * (v2 - 1 + 2 * snv**2)
    return X, Y, Z


def _n_tl1(bp, k_u, k_v, s, sb, ju, jv):
    u1 = bp.u1
    A, B = _absv(bp)
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_n_l(u1, s, sb, dnu) * _ups_v_n_cn(A, B, s, sb, snv, cnv))
    X = f * sb * (1 - u1 + 2 * u1 * dnu**2) * (B * (1 - cnv) - A * (1 + cnv))
    Y = f * 4 * s * sb * k_u * _sq(1 - u1**2) * _sq(A * B) * dnu * snu * snv
    Z = f * s * (u1 - 1 + 2 * dnu**2) * (B * (1 - cnv) + A * (1 + cnv))
    return X, Y, Z


def _n_tl2(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_n_l(u1, s, sb, dnu) * _ups_v_n_sn(v2, s, sb, snv))
    X = f * sb * (u1 - 1 - 2 * u1 * dnu**2) * (1 - v2 + 2 * v2 * snv**2)
    Y = f * 4 * s * sb * k_u * _sq(1 - u1**2) * _sq(v2**2 - 1) * dnu * snu * snv * cnv
    Z = f * s * (1 - u1 - 2 * dnu**2) * (v2 - 1 + 2 * snv**2)
    return X, Y, Z


def _n_ts1(bp, k_u, k_v, s, sb, ju, jv):
    u1, v1, v2 = bp.u1, bp.v1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uv = _sq((v1 - 1) ** 2 * (sb**2 * v2**2 + s**2)
             - 2 * (1 - v1) * (1 - v2) * (sb**2 * v1 * v2 + s**2) * snv**2
             + (v2 - 1) ** 2 * (sb**2 * v1**2 + s**2) * snv**4)
    f = 1.0 / (_ups_u_n_l(u1, s, sb, dnu) * Uv)
    X = f * sb * (1 - u1 + 2 * u1 * dnu**2) * (v2 * (1 - v1) + v1 * (v2 - 1) * snv**2)
    Y = (f * 2 * s * sb * k_u * _sq(1 - u1**2) * _sq(1 - v2**2) * (1 - v1)
         * dnu * snu * dnv * cnv)
    Z = f * s * (u1 - 1 + 2 * dnu**2) * (1 - v1 - (1 - v2) * snv**2)
    return X, Y, Z


def _n_ts2(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uv = _sq(4 * (sb**2 * v2**2 + s**2) - 4 * (1 + v2) * (sb**2 * v2 + s**2) * dnv**2
             + (1 + v2) ** 2 * dnv**4)
    f = 1.0 / (_ups_u_n_l(u1, s, sb, dnu) * Uv)
    X = f * sb * (1 - u1 + 2 * u1 * dnu**2) * (2 * v2 - (1 + v2) * dnv**2)
    Y = f * 4 * s * sb * k_u * k_v * _sq(1 - u1**2) * _sq(1 - v2**2) * dnu * snu * snv
    Z = f * s * (u1 - 1 + 2 * dnu**2) * (2 - (1 + v2) * dnv**2)
    return X, Y, Z


def _n_tsp(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uv = _sq(4 * (sb**2 * v2**2 + s**2) + 4 * (1 - v2) * (sb**2 * v2 - s**2) * snv**2
             + (v2 - 1) ** 2 * snv**4)
    f = 1.0 / (_ups_u_n_l(u1, s, sb, dnu) * Uv)
    X = f * sb * (1 - u1 + 2 * u1 * dnu**2) * (2 * v2 + (1 - v2) * snv**2)
    Y = f * 4 * s * sb * k_u * _sq(1 - u1**2) * _sq(1 - v2**2) * dnu * snu * cnv
    Z = f * s * (u1 - 1 + 2 * dnu**2) * (2 - (1 - v2) * snv**2)
    return X, Y, Z


# --- Omega = 0 ------------------------------------------------------------

def _ups_v_z(v2, s, sb, dnv):
    return _sq(sb**2 * (1 + v2) ** 2 - 2 * sb**2 * v2 * (1 + v2) * dnv**2
               + (sb**2 * v2**2 + s**2) * dnv**4)


def _ups_u_z_l(u1, s, sb, snu):
    return _sq(1 - 2 * (sb**2 * u1 + s**2) * snu**2 + (sb**2 * u1**2 + s**2) * snu**4)


def _z_tp(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uu = _sq((sb**2 * u1**2 + s**2) - 2 * (sb**2 * u1 + s**2) * snu**2 + snu**4)
    f = 1.0 / (Uu * _ups_v_z(v2, s, sb, dnv))
    X = f * sb * (u1 - snu**2) * (-1 - v2 + v2 * dnv**2)
    Y = f * 2 * s * sb * _sq(u1**2 - 1) * _sq((1 + v2) / (v2 - 1)) * dnu * snv * cnv
    Z = f * s * cnu**2 * dnv**2
    return X, Y, Z


def _z_tl(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    f = 1.0 / (_ups_u_z_l(u1, s, sb, snu) * _ups_v_z(v2, s, sb, dnv))
    X = f * sb * (1 - u1 * snu**2) * (-1 - v2 + v2 * dnv**2)
    Y = (f * 2 * SQ2 * s * sb * _sq(1 - u1) * _sq((1 + v2) / (v2 - 1))
         * dnu * snu * snv * cnv)
    Z = f * s * cnu**2 * dnv**2
    return X, Y, Z


def _z_tsp(bp, k_u, k_v, s, sb, ju, jv):
    u1, v2 = bp.u1, bp.v2
    snu, cnu, dnu = ju
    snv, cnv, dnv = jv
    Uv = _sq(sb**2 * (1 + v2) ** 2 - 2 * sb**2 * (1 + v2) * dnv**2 + dnv**4)
    f = 1.0 / (_ups_u_z_l(u1, s, sb, snu) * Uv)
    X = f * sb * (1 - u1 * snu**2) * (1 + v2 - dnv**2)
    Y = f * SQ2 * s * sb * _sq(1 - u1) * _sq(1 - v2**2) * dnu * snu * cnv
    Z = f * s * cnu**2 * dnv**2
    return X, Y, Z


# --- parameter tables -------------------------------------------------------

def block_key(family: str, regime: str, subtype: str) -> str:
    tag = {"positive": "p", "negative": "n", "zero": "z"}[regime]
    name = {"t_p": "tp", "t_l": "tl", "t_s": "ts", "t_s'": "tsp", "t_ds": "tds", "t_mp": "tmp"}[family]
    if regime == "negative" and family in ("t_p", "t_l"):
        name += subtype
    if regime == "negative" and family == "t_s":
        name += {"zone1": "1", "zone2": "2"}[subtype]
    return f"{tag}_{name}"


XYZ = {
    "p_tp": _p_tp, "p_tl": _p_tl, "p_tsp": _p_tsp, "p_tds": _p_tds, "p_tmp": _p_tmp,
    "n_tp1": _n_tp1, "n_tp2": _n_tp2, "n_tl1": _n_tl1, "n_tl2": _n_tl2,
    "n_ts1": _n_ts1, "n_ts2": _n_ts2, "n_tsp": _n_tsp,
    "z_tp": _z_tp, "z_tl": _z_tl, "z_tsp": _z_tsp,
}

MULTIPLIERS = {
    "p_tp": (2, 2), "p_tmp": (2, 2), "p_tl": (4, 2), "p_tds": (4, 2), "p_tsp": (4, 4),
    "n_tp2": (2, 2), "n_tp1": (2, 4), "n_tl2": (4, 2),
    "n_tl1": (4, 4), "n_ts1": (4, 4), "n_ts2": (4, 4), "n_tsp": (4, 4),
    "z_tp": (2, 2), "z_tl": (4, 2), "z_tsp": (4, 4),
}


def block_data(key: str, bp) -> BlockData:
    """Elliptic parameters and Moebius maps of block ``key``."""
    u1, u2, v1, v2 = bp.u1, bp.u2, bp.v1, bp.v2
    tag = key[0]
    name = key[2:]

    # radial part
    if tag == "p":
        if name == "tp":
            ku = 2 * (u2 - u1) / ((1 - u1) * (1 + u2))
            gu = 2 / np.sqrt((1 - u1) * (1 + u2))
            mu = Moebius("dn2", u2 - 1, u2 + 1, 1 - u2, u2 + 1)
        elif name == "tmp":
            ku = 2 * (u2 - u1) / ((1 - u1) * (1 + u2))
            gu = 2 / np.sqrt((1 - u1) * (1 + u2))
            mu = Moebius("sn2", u2 + 1, -2 * u2, 1 + u2, -2.0)
        else:
            ku = (1 - u1) * (1 + u2) / (2 * (u2 - u1))
            gu = SQ2 / np.sqrt(u2 - u1)
            mu = Moebius("dn2", u2 - 1, -2 * u2, 1 - u2, -2.0)
    elif tag == "n":
        if name in ("tp1", "tp2"):
            ku = 2 * (u2 - u1) / ((u1 + 1) * (u2 - 1))
            gu = 2 / np.sqrt((u1 + 1) * (u2 - 1))
            mu = Moebius("dn2", u1 - 1, u1 + 1, 1 - u1, u1 + 1)
        else:
            ku = (u1 + 1) * (u2 - 1) / (2 * (u2 - u1))
            gu = SQ2 / np.sqrt(u2 - u1)
            mu = Moebius("dn2", 1 - u1, 2 * u1, u1 - 1, 2.0)
    else:
        if name == "tp":
            ku = 2 / (u1 + 1)
            gu = 2 / np.sqrt(1 + u1)
            mu = Moebius("sn2", u1, -1.0, 1.0, -1.0)
        else:
            ku = (u1 + 1) / 2
            gu = SQ2
            mu = Moebius("sn2", 1.0, -u1, 1.0, -1.0)

    # angular part
    if tag == "p":
        if name in ("tp", "tl"):
            kv = 2 * (v2 - v1) / ((1 - v1) * (1 + v2))
            gv = 2 / np.sqrt((1 - v1) * (1 + v2))
            mv = Moebius("sn2", 1 - v1, 2 * v1, v1 - 1, 2.0)
        elif name == "tsp":
            kv = (1 - v1) * (1 + v2) / (2 * (v2 - v1))
            gv = SQ2 / np.sqrt(v2 - v1)
            mv = Moebius("sn2", 2 * v1, 1 - v1, 2.0, -(1 - v1))
        else:
            kv = 2 * (v2 - v1) / ((1 - v1) * (1 + v2))
            gv = 2 / np.sqrt((1 - v1) * (1 + v2))
            mv = Moebius("dn2", 1 + v1, -(1 - v1), 1 + v1, 1 - v1)
    elif tag == "n":
        if name in ("tp1", "tl1"):
            A, B = abs(1 - v1), abs(1 + v1)
            kv = (4 - (A - B) ** 2) / (4 * A * B)
            gv = 1 / np.sqrt(A * B)
            mv = Moebius("cn", B - A, -(A + B), A + B, A - B)
        elif name in ("tp2", "tl2"):
            kv = 2 * (v2 - v1) / ((v1 + 1) * (v2 - 1))
            gv = 2 / np.sqrt((v1 + 1) * (v2 - 1))
            mv = Moebius("sn2", 1 - v2, 2 * v2, v2 - 1, 2.0)
        elif name == "ts1":
            kv = (1 + v1) * (1 - v2) / ((1 - v1) * (1 + v2))
            gv = 2 / np.sqrt((1 - v1) * (1 + v2))
            mv = Moebius("sn2", v2 * (1 - v1), v1 * (v2 - 1), 1 - v1, -(1 - v2))
        elif name == "ts2":
            kv = (1 + v1) * (1 - v2) / ((1 - v1) * (1 + v2))
            gv = 2 / np.sqrt((1 - v1) * (1 + v2))
            mv = Moebius("dn2", 2 * v2, -(1 + v2), 2.0, -(1 + v2))
        else:
            kv = (v1 + 1) * (v2 - 1) / (2 * (v2 - v1))
            gv = SQ2 / np.sqrt(v2 - v1)
            mv = Moebius("sn2", 2 * v2, 1 - v2, 2.0, -(1 - v2))
    else:
        if name in ("tp", "tl"):
            kv = 2 / (1 - v2)
            gv = 2 / np.sqrt(1 - v2)
            mv = Moebius("dn2", -1 - v2, v2, 0.0, 1.0)
        else:
            kv = (1 - v2) / 2
            gv = SQ2
            mv = Moebius("dn2", 1 + v2, -1.0, 0.0, 1.0)

    return BlockData(key, float(np.real(ku)), float(np.real(gu)), float(np.real(kv)),
                     float(np.real(gv)), MULTIPLIERS[key], mu, mv, XYZ[key])
