"""Constants of motion and the spherical <-> planar invariant charts.

All values are nondimensional: lengths in units of R, energies in units
of (gamma1 + gamma2)/R, time in units of sqrt(R^3/(gamma1 + gamma2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleSingularity
from .geometry import ProblemParams, SpherePoint


@dataclass(frozen=True)
class CartesianState:
    """Position on the sphere and its velocity (physical units)."""

    position: SpherePoint
    velocity: tuple

    @classmethod
    def from_arrays(cls, x, xdot):
        x = np.asarray(x, dtype=float)
        return cls(SpherePoint(*map(float, x)), tuple(float(c) for c in xdot))

    def arrays(self):
        return self.position.as_array(), np.asarray(self.velocity, dtype=float)


@dataclass(frozen=True)
class InvariantPair:
    H: float
    Omega: float
    G: float
    h: float
    g: float


def from_planar(hg, p: ProblemParams) -> InvariantPair:
    """Build the invariant record from the planar chart (h, g)."""
    h, g = map(float, hg)
    Omega = h * p.sigma / p.sigma_bar
    G = g * p.sigma_bar / p.sigma
    return InvariantPair(H=G + Omega, Omega=Omega, G=G, h=h, g=g)


def from_spherical(Omega: float, G: float, p: ProblemParams) -> InvariantPair:
    Omega, G = float(Omega), float(G)
    return InvariantPair(H=G + Omega, Omega=Omega, G=G,
                         h=Omega * p.sigma_bar / p.sigma, g=G * p.sigma / p.sigma_bar)


def to_planar(inv: InvariantPair, p: ProblemParams):
    return inv.Omega * p.sigma_bar / p.sigma, inv.G * p.sigma / p.sigma_bar


def nondimensional_state(state: CartesianState, p: ProblemParams):
    """Unit-sphere position and velocity in nondimensional time."""
    x, xd = state.arrays()
    return x / p.R, xd * p.time_unit / p.R


def to_physical_velocity(xdot_nd, p: ProblemParams):
    """Scale a nondimensional velocity back to physical units."""
    return np.asarray(xdot_nd, dtype=float) * p.R / p.time_unit


def _center_cosines(x, p: ProblemParams):
    s, sb = p.sigma, p.sigma_bar
    c1 = s * x[..., 2] + sb * x[..., 0]
    c2 = s * x[..., 2] - sb * x[..., 0]
    d1, d2 = 1.0 - c1 * c1, 1.0 - c2 * c2
    if np.any(d1 <= 1e-28) or np.any(d2 <= 1e-28):
        raise PoleSingularity("state sits on a center or anti-center")
    return c1, c2, np.sqrt(d1), np.sqrt(d2)


def potential_nd(x, p: ProblemParams):
    """Nondimensional potential -((1-g) cot theta1 + g cot theta2)."""
    c1, c2, r1, r2 = _center_cosines(np.asarray(x, dtype=float), p)
    gam = p.gamma
    return -((1.0 - gam) * c1 / r1 + gam * c2 / r2)


def hamiltonian_nd(x, xd, p: ProblemParams):
    """Energy for unit-sphere rows x and nondimensional velocities xd."""
    L = np.cross(x, xd)
    return 0.5 * np.sum(L * L, axis=-1) + potential_nd(x, p)


def second_invariant_nd(x, xd, p: ProblemParams):
    x = np.asarray(x, dtype=float)
    L = np.cross(x, xd)
    s = p.sigma
    c1, c2, r1, r2 = _center_cosines(x, p)
    gam = p.gamma
    pot = -s * x[..., 2] * ((1.0 - gam) / r1 + gam / r2)
    return 0.5 * (L[..., 0] ** 2 + s * s * L[..., 1] ** 2) + pot


def hamiltonian(state: CartesianState, p: ProblemParams) -> float:
    x, xd = nondimensional_state(state, p)
    return float(hamiltonian_nd(x, xd, p))


def second_invariant(state: CartesianState, p: ProblemParams) -> float:
    x, xd = nondimensional_state(state, p)
    return float(second_invariant_nd(x, xd, p))


def invariants_of_state(state: CartesianState, p: ProblemParams) -> InvariantPair:
    H = hamiltonian(state, p)
    Om = second_invariant(state, p)
    return from_spherical(Om, H - Om, p)


def separation_constant(U, V, Udot, Vdot, H, north: bool, p: ProblemParams):
    """G from the radial separated equation at a known (U, V, U', V').

    Uses the canonical momentum p_U = (U^2 - V^2) U' / ((U^2 - sb^2)(1 - U^2)).
    """
    sb2 = p.sigma_bar ** 2
    pU = (U * U - V * V) * Udot / ((U * U - sb2) * (1.0 - U * U))
    pm = 1.0 if north else -1.0
    return H * U * U + pm * U * np.sqrt(1.0 - U * U) - 0.5 * (U * U - sb2) * (1.0 - U * U) * pU * pU


def angular_separation_constant(U, V, Udot, Vdot, H, p: ProblemParams):
    """G from the angular separated equation (independent of hemisphere)."""
    sb2 = p.sigma_bar ** 2
    pV = (U * U - V * V) * Vdot / ((sb2 - V * V) * (1.0 - V * V))
    return 0.5 * (sb2 - V * V) * (1.0 - V * V) * pV * pV + H * V * V - p.c * V * np.sqrt(1.0 - V * V)
