"""Ramification points, critical curves and orbit classification.

Everything here works in the planar chart (h, g) with
h*u^2 + u - g = 0 for the radial roots and -h*v^2 + c*v + g = 0,
c = 1 - 2*gamma, for the angular roots.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import S2OrbitsError
from .geometry import ProblemParams
from .invariants import InvariantPair, from_planar

TOL_CRIT = 1e-9
TOL_REGIME = 1e-14

FAMILIES = ("t_p", "t_l", "t_s", "t_s'", "t_ds", "t_mp")
CURVE_NAMES = ("L1_1", "L1_2", "L1_3", "Lg_1", "Lg_2", "Lg_3")


class AmbiguousClass(S2OrbitsError):
    """Two ordering chains matched the same point."""


@dataclass(frozen=True)
class BranchPoints:
    """Roots of the radial and angular quadratics.

    For Omega = 0 only u1 and v2 exist; the missing roots are None.
    Complex conjugate pairs are stored as Python complex numbers.
    """

    u1: object
    u2: object
    v1: object
    v2: object

    @property
    def u_real(self) -> bool:
        return not isinstance(self.u1, complex)

    @property
    def v_real(self) -> bool:
        return not isinstance(self.v1, complex)

    @property
    def south(self):
        """Roots of the southern radial quadratic: (-u2, -u1)."""
        if self.u2 is None:
            return None, -self.u1
        return -self.u2, -self.u1


@dataclass(frozen=True)
class OrbitClass:
    family: str | None
    regime: str
    subtype: str = "none"
    forbidden: bool = False
    critical: bool = False
    curves: tuple = ()

    @property
    def label(self) -> str:
        if self.critical:
            return "critical"
        if self.forbidden:
            return "forbidden"
        return self.family

    @property
    def allowed(self) -> bool:
        return not (self.critical or self.forbidden)

    def __str__(self) -> str:
        if not self.allowed:
            return self.label
        if self.subtype != "none":
            return f"{self.family}({self.subtype})"
        return self.family


def regime_of(h: float) -> str:
    if abs(h) <= TOL_REGIME:
        return "zero"
    return "negative" if h < 0 else "positive"


def _pair(center: float, disc: float):
    if disc >= 0:
        r = np.sqrt(disc)
        return center - r, center + r
    r = cmath.sqrt(disc)
    return complex(center - r), complex(center + r)


def branch_points_hg(h: float, g: float, p: ProblemParams) -> BranchPoints:
    c = p.c
    if regime_of(h) == "zero":
        v2 = -g / c if c != 0 else None
        return BranchPoints(g, None, None, v2)
    # the quadratic formula is arranged to avoid cancellation for small h
    u1, u2 = _stable_roots(h, 1.0, -g)
    v1, v2 = _stable_roots(-h, c, g)
    return BranchPoints(u1, u2, v1, v2)


def _stable_roots(a: float, b: float, cc: float):
    """Roots of a*x^2 + b*x + cc sorted by real part."""
    disc = b * b - 4.0 * a * cc
    if disc < 0:
        r = cmath.sqrt(disc)
        x1, x2 = (-b - r) / (2 * a), (-b + r) / (2 * a)
        return (complex(x1), complex(x2)) if x1.real <= x2.real else (complex(x2), complex(x1))
    r = np.sqrt(disc)
    q = -0.5 * (b + np.copysign(r, b))
    if q == 0.0:
        return 0.0, 0.0
    x1, x2 = q / a, cc / q
    return (x1, x2) if x1 <= x2 else (x2, x1)


def branch_points(inv: InvariantPair, p: ProblemParams) -> BranchPoints:
    return branch_points_hg(inv.h, inv.g, p)


def critical_residuals_hg(h: float, g: float, p: ProblemParams):
    c = p.c
    return (h - g + 1.0, h - g - 1.0, 4.0 * h * g + 1.0,
            h - g - c, h - g + c, 4.0 * h * g + c * c)


def critical_curves(inv: InvariantPair, p: ProblemParams):
    """Signed residuals of the six bifurcation curves in curve order."""
    return critical_residuals_hg(inv.h, inv.g, p)


def _matches(h: float, g: float, p: ProblemParams):
    """All (family, subtype) pairs whose ordering chain holds strictly."""
    bp = branch_points_hg(h, g, p)
    out = []
    reg = regime_of(h)
    if reg == "zero":
        u1, v2 = bp.u1, bp.v2
        if v2 is None:
            return out
        if u1 > 1 and v2 < -1:
            out.append(("t_p", "none"))
        if -1 < u1 < 1 and v2 < -1:
            out.append(("t_l", "none"))
        if -1 < u1 < 1 and -1 < v2 < 1:
            out.append(("t_s'", "none"))
        return out
    if not bp.u_real:
        return out
    u1, u2 = bp.u1, bp.u2
    if reg == "negative":
        vc = not bp.v_real
        v1, v2 = (None, None) if vc else (bp.v1, bp.v2)
        if 1 < u1 and vc:
            out.append(("t_p", "1"))
        if 1 < u1 and not vc and v2 < -1:
            out.append(("t_p", "2"))
        inner = -1 < u1 < 1 < u2
        if inner and vc:
            out.append(("t_l", "1"))
        if inner and not vc and v2 < -1:
            out.append(("t_l", "2"))
        if inner and not vc and -1 < v1 < v2 < 1:
            out.append(("t_s", "zone1"))
        if inner and not vc and v1 < -1 < v2 < 1:
            out.append(("t_s'", "none"))
        return out
    if not bp.v_real:
        return out
    v1, v2 = bp.v1, bp.v2
    if u1 < -1 < 1 < u2 and v1 < -1 and v2 > 1:
        out.append(("t_p", "none"))
    if u1 < -1 < u2 < 1 and v1 < -1 and v2 > 1:
        out.append(("t_l", "none"))
    if u1 < -1 < u2 < 1 and -1 < v1 < 1 < v2:
        out.append(("t_s'", "none"))
    if u1 < -1 < u2 < 1 and -1 < v1 and v2 < 1:
        out.append(("t_ds", "none"))
    if -1 < u1 < u2 < 1 and -1 < v1 and v2 < 1:
        out.append(("t_mp", "none"))
    return out


def classify_hg(h: float, g: float, p: ProblemParams) -> OrbitClass:
    reg = regime_of(h)
    res = critical_residuals_hg(h, g, p)
    if reg == "zero":
        # only the straight lines survive at h = 0
        res = res[:2] + (1.0,) + res[3:5] + (1.0,)
    on = tuple(n for n, r in zip(CURVE_NAMES, res) if abs(r) < TOL_CRIT)
    if on:
        return OrbitClass(None, reg, critical=True, curves=on)
    hits = _matches(h, g, p)
    if not hits:
        return OrbitClass(None, reg, forbidden=True)
    if len(hits) > 1:
        raise AmbiguousClass(f"chains {hits} all hold at h={h}, g={g}")
    fam, sub = hits[0]
    return OrbitClass(fam, reg, sub)


def classify(inv: InvariantPair, p: ProblemParams) -> OrbitClass:
    """Orbit family of an invariant pair; satellitary Omega<0 points report zone1.

    A t_s point supports two distinct orbits; the second one is obtained by
    passing subtype "zone2" to the orbit engine.
    """
    return classify_hg(inv.h, inv.g, p)


def classify_grid(region, resolution, p: ProblemParams):
    """Row-major grid of classes over h_min..h_max x g_min..g_max.

    Returns (h_values, g_values, classes) with classes[i][j] for g_values[i]
    and h_values[j].
    """
    h_min, h_max, g_min, g_max = map(float, region)
    nh, ng = map(int, resolution)
    if nh < 1 or ng < 1:
        raise ValueError("resolution must be positive")
    hs = np.linspace(h_min, h_max, nh) if nh > 1 else np.array([0.5 * (h_min + h_max)])
    gs = np.linspace(g_min, g_max, ng) if ng > 1 else np.array([0.5 * (g_min + g_max)])
    grid = [[classify_hg(float(h), float(g), p) for h in hs] for g in gs]
    return hs, gs, grid


def hg_point(h: float, g: float, p: ProblemParams) -> InvariantPair:
    return from_planar((h, g), p)
