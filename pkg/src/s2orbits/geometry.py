"""Coordinate systems on the sphere and the maps between them.

Conventions: the centers sit at F1 = (R sin tf, 0, R cos tf) and
F2 = (-R sin tf, 0, R cos tf).  theta1, theta2 are great-circle angles
to F1 and F2; U = sin((theta1 + theta2)/2), V = sin((theta2 - theta1)/2).
The elliptic coordinates (u, v) of the tangent planes relate to (U, V) by
U = sb*u/sqrt(sb^2 u^2 + s^2), V = sb*v/sqrt(sb^2 v^2 + s^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameters, PoleSingularity, S2OrbitsError


class RangeError(S2OrbitsError, ValueError):
    """Coordinate outside its admissible interval."""


class EquatorPoint(S2OrbitsError, ValueError):
    """Operation undefined on the equator (gnomonic infinity)."""


SingularPoint = PoleSingularity

EQUATOR_EPS = 1e-10


@dataclass(frozen=True)
class ProblemParams:
    """Sphere radius, half-separation angle and center strengths."""

    R: float = 1.0
    theta_f: float = np.pi / 6
    gamma1: float = 2.0 / 3.0
    gamma2: float = 1.0 / 3.0
    sigma: float = field(init=False)
    sigma_bar: float = field(init=False)
    gamma: float = field(init=False)
    a: float = field(init=False)

    def __post_init__(self):
        if not (self.R > 0 and np.isfinite(self.R)):
            raise InvalidParameters(f"R must be positive, got {self.R!r}")
        if not 0.0 < self.theta_f < np.pi / 2:
            raise InvalidParameters(f"theta_f must lie in (0, pi/2), got {self.theta_f!r}")
        if not 0.0 < self.gamma2 <= self.gamma1:
            raise InvalidParameters("strengths must satisfy 0 < gamma2 <= gamma1")
        s, sb = np.cos(self.theta_f), np.sin(self.theta_f)
        object.__setattr__(self, "sigma", float(s))
        object.__setattr__(self, "sigma_bar", float(sb))
        object.__setattr__(self, "gamma", self.gamma2 / (self.gamma1 + self.gamma2))
        object.__setattr__(self, "a", self.R * sb / s)

    @classmethod
    def from_gamma(cls, gamma: float, theta_f: float = np.pi / 6, R: float = 1.0):
        """Unit total strength split as (1 - gamma, gamma)."""
        if not 0.0 < gamma <= 0.5:
            raise InvalidParameters(f"gamma must lie in (0, 1/2], got {gamma!r}")
        return cls(R=R, theta_f=theta_f, gamma1=1.0 - gamma, gamma2=gamma)

    @property
    def c(self) -> float:
        """Angular coupling 1 - 2*gamma."""
        return 1.0 - 2.0 * self.gamma

    @property
    def strength(self) -> float:
        return self.gamma1 + self.gamma2

    @property
    def energy_unit(self) -> float:
        return self.strength / self.R

    @property
    def time_unit(self) -> float:
        return float(np.sqrt(self.R ** 3 / self.strength))

    def centers(self) -> np.ndarray:
        R, s, sb = self.R, self.sigma, self.sigma_bar
        return np.array([[R * sb, 0.0, R * s], [-R * sb, 0.0, R * s]])


@dataclass(frozen=True)
class SpherePoint:
    X: float
    Y: float
    Z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.Z], dtype=float)


@dataclass(frozen=True)
class SpheroConical:
    U: float
    V: float
    sign_Y: int = 1
    sign_Z: int = 1


@dataclass(frozen=True)
class PlanarElliptic:
    u: float
    v: float
    sign_x2: int = 1


def _sgn(x) -> int:
    return -1 if x < 0 else 1


def spheroconical_to_cartesian(sc: SpheroConical, p: ProblemParams) -> SpherePoint:
    s, sb, R = p.sigma, p.sigma_bar, p.R
    U, V = float(sc.U), float(sc.V)
    tol = 1e-12
    if not (sb - tol <= U <= 1.0 + tol) or not (-sb - tol <= V <= sb + tol):
        raise RangeError(f"(U, V) = ({U}, {V}) outside sigma_bar <= U <= 1, |V| <= sigma_bar")
    X = R * U * V / sb
    Y2 = max(0.0, (U * U - sb * sb) * (sb * sb - V * V)) * (R / (s * sb)) ** 2
    Z2 = max(0.0, (1.0 - U * U) * (1.0 - V * V)) * (R / s) ** 2
    return SpherePoint(X, sc.sign_Y * np.sqrt(Y2), sc.sign_Z * np.sqrt(Z2))


def center_angles(xyz, p: ProblemParams):
    """Great-circle angles (theta1, theta2) to F1 and F2; arrays welcome."""
    x = np.asarray(xyz, dtype=float)
    f1, f2 = p.centers() / p.R
    r = x / np.linalg.norm(x, axis=-1, keepdims=True)
    t1 = np.arctan2(np.linalg.norm(np.cross(r, f1), axis=-1), r @ f1)
    t2 = np.arctan2(np.linalg.norm(np.cross(r, f2), axis=-1), r @ f2)
    return t1, t2


def cartesian_to_uv(xyz, p: ProblemParams):
    """Vectorised (U, V) from Cartesian rows."""
    t1, t2 = center_angles(xyz, p)
    return np.sin(0.5 * (t1 + t2)), np.sin(0.5 * (t2 - t1))


def cartesian_to_spheroconical(pt: SpherePoint, p: ProblemParams) -> SpheroConical:
    t1, t2 = center_angles(pt.as_array(), p)
    if min(t1, t2, np.pi - t1, np.pi - t2) < 1e-14:
        raise PoleSingularity("point coincides with a center or anti-center")
    U = float(np.sin(0.5 * (t1 + t2)))
    V = float(np.sin(0.5 * (t2 - t1)))
    return SpheroConical(U, V, _sgn(pt.Y), _sgn(pt.Z))


def elliptic_lift(sc: SpheroConical, p: ProblemParams) -> PlanarElliptic:
    """(U, V) -> (u, v); the southern sheet carries a negative u."""
    s, sb = p.sigma, p.sigma_bar
    U, V = float(sc.U), float(sc.V)
    if U >= 1.0:
        raise EquatorPoint("U = 1 has no finite elliptic image")
    u = s * U / (sb * np.sqrt(1.0 - U * U))
    v = s * V / (sb * np.sqrt(1.0 - V * V))
    return PlanarElliptic(sc.sign_Z * u, v, sc.sign_Y)


def elliptic_drop(pe: PlanarElliptic, p: ProblemParams) -> SpheroConical:
    s, sb = p.sigma, p.sigma_bar
    u, v = float(pe.u), float(pe.v)
    U = sb * abs(u) / np.sqrt(sb * sb * u * u + s * s)
    V = sb * v / np.sqrt(sb * sb * v * v + s * s)
    return SpheroConical(U, V, pe.sign_x2, _sgn(u))


def U_of_u(u, p: ProblemParams):
    u = np.asarray(u, dtype=float)
    return p.sigma_bar * np.abs(u) / np.sqrt(p.sigma_bar ** 2 * u * u + p.sigma ** 2)


def V_of_v(v, p: ProblemParams):
    v = np.asarray(v, dtype=float)
    return p.sigma_bar * v / np.sqrt(p.sigma_bar ** 2 * v * v + p.sigma ** 2)


def uv_from_cartesian(xyz, p: ProblemParams):
    """Signed elliptic coordinates (u, v) of Cartesian rows.

    Returns 1/u rather than u so equator points stay finite.
    """
    x = np.asarray(xyz, dtype=float) / p.R
    s, sb = p.sigma, p.sigma_bar
    _, V = cartesian_to_uv(x, p)
    v = s * V / (sb * np.sqrt(1.0 - V * V))
    dv = np.sqrt(sb * sb * v * v + s * s)
    q = x[..., 2] * dv / s
    w = q * sb / np.sqrt(np.maximum(1.0 - s * s * q * q, 1e-300))
    return w, v


def gnomonic_project(pt: SpherePoint, p: ProblemParams, hemisphere: str = "north"):
    """Central projection to the tangent plane followed by x2 = y/sigma."""
    if abs(pt.Z) < EQUATOR_EPS * p.R:
        raise EquatorPoint("equator points project to infinity")
    sgn = 1.0 if hemisphere == "north" else -1.0
    if sgn * pt.Z < 0:
        raise RangeError(f"point is not in the {hemisphere} hemisphere")
    z = sgn * pt.Z
    x, y = p.R * pt.X / z, p.R * pt.Y / z
    return x, y / p.sigma


def local_time_scale(p: ProblemParams) -> float:
    """sqrt(sigma*sigma_bar), the rate d(zeta)/d(varsigma)."""
    return float(np.sqrt(p.sigma * p.sigma_bar))
