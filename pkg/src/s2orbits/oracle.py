"""Numerical verification without elliptic functions.

Separated route: with w = 1/u = cos(alpha) and v = cos(beta) the planar
first integrals become
    alpha'^2 = 2 (h + cos a - g cos^2 a),   beta'^2 = 2 (-h cos^2 b + c cos b + g),
which are integrated in second-order form.  The angles keep the sheet
(sign of Y) and stay regular through the equator (w = 0) and the caustics.

Cartesian route: Newton's equations on the unit sphere with the multiplier
eliminated, optionally reparametrised by the local time zeta
(dt/dzeta = sin(theta1) sin(theta2)/sqrt(sigma sigma_bar)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import SingularityEncountered, ToleranceFailure
from .geometry import ProblemParams, local_time_scale
from .invariants import (CartesianState, InvariantPair, hamiltonian_nd, second_invariant_nd,
                         to_physical_velocity)

METHODS = ("RK45", "DOP853", "rk4")


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "RK45"
    rtol: float = 1e-12
    atol: float = 1e-12
    max_step: float = np.inf
    step: float = 1e-3  # fixed-step RK4 only
    project: bool = False
    residual_tol: float = 1e-8

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.rtol <= 0 or self.atol <= 0 or self.step <= 0 or self.residual_tol <= 0:
            raise ValueError("tolerances and step must be positive")


@dataclass(frozen=True)
class SeparatedInitial:
    """Start point (u0, v0) with directions of the angle variables.

    alpha = arccos(1/u0) in [0, pi] and beta = sign_Y * arccos(v0).
    d(alpha)/dzeta has the sign of sign_u (= sign of du/dzeta away from
    |u| = 1); d(beta)/dzeta has the sign of -sign_v * sign_Y.
    """

    u0: float
    v0: float
    sign_u: int = 1
    sign_v: int = 1
    sign_Y: int = 1


@dataclass
class SeparatedTrajectory:
    zeta: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    dalpha: np.ndarray
    dbeta: np.ndarray
    t: np.ndarray
    xyz: np.ndarray
    residual: float

    @property
    def w(self):
        return np.cos(self.alpha)

    @property
    def u(self):
        with np.errstate(divide="ignore"):
            return 1.0 / np.cos(self.alpha)

    @property
    def v(self):
        return np.cos(self.beta)


@dataclass
class CartesianTrajectory:
    t: np.ndarray
    zeta: np.ndarray
    xyz: np.ndarray
    vel: np.ndarray
    H: np.ndarray
    Omega: np.ndarray

    def states(self):
        return [CartesianState.from_arrays(x, v) for x, v in zip(self.xyz, self.vel)]


@dataclass
class DeviationReport:
    max_dev: float
    mean_dev: float
    max_dev_cartesian: float
    route_agreement: float
    H_drift: float
    Omega_drift: float
    H_offset: float
    Omega_offset: float
    crossings_analytic: int
    crossings_oracle: int
    elapsed_zeta: tuple

    @property
    def crossings_match(self) -> bool:
        return self.crossings_analytic == self.crossings_oracle

    def passed(self, tol: float = 1e-6, drift: float = 1e-8) -> bool:
        return (self.max_dev < tol and self.max_dev_cartesian < tol and self.route_agreement < tol
                and self.H_drift < drift and self.Omega_drift < drift and self.crossings_match)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["elapsed_zeta"] = list(self.elapsed_zeta)
        d["crossings_match"] = self.crossings_match
        return d


# --- separated route ----------------------------------------------------------

def _planar(inv: InvariantPair, p: ProblemParams):
    return inv.h, inv.g, p.c


def angle_to_xyz(alpha, beta, p: ProblemParams):
    """Unit-sphere point of the angle variables."""
    s, sb = p.sigma, p.sigma_bar
    ca, cb = np.cos(alpha), np.cos(beta)
    dw = np.sqrt(sb * sb + s * s * ca * ca)
    dv = np.sqrt(sb * sb * cb * cb + s * s)
    f = 1.0 / (dw * dv)
    return np.stack([f * sb * cb, f * s * sb * np.sin(alpha) * np.sin(beta), f * s * ca], axis=-1)


def angle_velocity(alpha, beta, da, db, p: ProblemParams):
    """d(xyz)/dzeta by the chain rule."""
    s, sb = p.sigma, p.sigma_bar
    ca, sa, cb, sbt = np.cos(alpha), np.sin(alpha), np.cos(beta), np.sin(beta)
    dw = np.sqrt(sb * sb + s * s * ca * ca)
    dv = np.sqrt(sb * sb * cb * cb + s * s)
    iw, iv = 1.0 / dw, 1.0 / dv
    diw = s * s * ca * sa / dw**3  # d(1/dw)/dalpha
    div = sb * sb * cb * sbt / dv**3  # d(1/dv)/dbeta
    X_a = sb * cb * iv * diw
    X_b = sb * iw * (-sbt * iv + cb * div)
    Y_a = s * sb * sbt * iv * (ca * iw + sa * diw)
    Y_b = s * sb * sa * iw * (cb * iv + sbt * div)
    Z_a = s * iv * (-sa * iw + ca * diw)
    Z_b = s * ca * iw * div
    return np.array([X_a * da + X_b * db, Y_a * da + Y_b * db, Z_a * da + Z_b * db])


def _dt_dzeta_angles(alpha, beta, p: ProblemParams):
    s, sb = p.sigma, p.sigma_bar
    ca, cb = np.cos(alpha), np.cos(beta)
    U2 = sb * sb / (sb * sb + s * s * ca * ca)
    V2 = sb * sb * cb * cb / (sb * sb * cb * cb + s * s)
    return (U2 - V2) / local_time_scale(p)


def _fa(alpha, h, g):
    ca = np.cos(alpha)
    return 2.0 * (h + ca - g * ca * ca)


def _fb(beta, h, g, c):
    cb = np.cos(beta)
    return 2.0 * (-h * cb * cb + c * cb + g)


def _sep_rhs(h, g, c, p):
    def rhs(z, y):
        a, b, da, db, _ = y
        return [da, db, -np.sin(a) + g * np.sin(2 * a), h * np.sin(2 * b) - c * np.sin(b),
                _dt_dzeta_angles(a, b, p)]
    return rhs


def _rk4(rhs, span, y0, step, t_eval, post=None):
    """Fixed-step classical RK4 with output at t_eval (exact hits)."""
    t0, t1 = span
    y = np.asarray(y0, dtype=float)
    out = np.empty((len(t_eval), len(y)))
    t = t0
    j = 0
    direction = np.sign(t1 - t0) or 1.0
    while j < len(t_eval) and abs(t_eval[j] - t) < 1e-15:
        out[j] = y
        j += 1
    while j < len(t_eval):
        target = t_eval[j]
        while direction * (target - t) > 1e-15:
            hstep = direction * min(step, abs(target - t))
            k1 = np.asarray(rhs(t, y))
            k2 = np.asarray(rhs(t + hstep / 2, y + hstep / 2 * k1))
            k3 = np.asarray(rhs(t + hstep / 2, y + hstep / 2 * k2))
            k4 = np.asarray(rhs(t + hstep, y + hstep * k3))
            y = y + hstep / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = t + hstep
            if post is not None:
                y = post(y)
        out[j] = y
        j += 1
    return out.T


def _solve(rhs, span, y0, cfg: IntegratorConfig, t_eval, post=None, events=None):
    if cfg.method == "rk4":
        return _rk4(rhs, span, y0, cfg.step, t_eval, post)
    if post is None:
        sol = solve_ivp(rhs, span, y0, method=cfg.method, rtol=cfg.rtol, atol=cfg.atol,
                        max_step=cfg.max_step, t_eval=t_eval, events=events)
        if sol.status < 0:
            raise SingularityEncountered(sol.message)
        return sol.y
    # projection after each output interval
    ys = [np.asarray(y0, dtype=float)]
    y = ys[0]
    for a, b in zip(t_eval[:-1], t_eval[1:]):
        sol = solve_ivp(rhs, (a, b), y, method=cfg.method, rtol=cfg.rtol, atol=cfg.atol,
                        max_step=cfg.max_step)
        if sol.status < 0:
            raise SingularityEncountered(sol.message)
        y = post(sol.y[:, -1])
        ys.append(y)
    return np.array(ys).T


def _initial_angles(inv, initial: SeparatedInitial):
    h, g = inv.h, inv.g
    w0 = 1.0 / float(initial.u0)
    alpha = float(np.arccos(np.clip(w0, -1.0, 1.0)))
    beta = float(initial.sign_Y * np.arccos(np.clip(initial.v0, -1.0, 1.0)))
    return alpha, beta


def integrate_separated_angles(inv: InvariantPair, p: ProblemParams, y0, zeta_span,
                               cfg: IntegratorConfig = IntegratorConfig(), n: int = 1001,
                               zeta_eval=None):
    """Integrate from an explicit angle state (alpha, beta, alpha', beta')."""
    h, g, c = _planar(inv, p)
    z = np.linspace(zeta_span[0], zeta_span[1], n) if zeta_eval is None else np.asarray(zeta_eval)
    y = _solve(_sep_rhs(h, g, c, p), (float(z[0]), float(z[-1])),
               list(y0) + [0.0], cfg, z)
    a, b, da, db, t = y
    res = float(max(np.max(np.abs(da * da - _fa(a, h, g))), np.max(np.abs(db * db - _fb(b, h, g, c)))))
    if res > 10.0 * cfg.residual_tol:
        raise ToleranceFailure(f"first-integral residual {res:.3e} exceeds 10x tolerance")
    xyz = p.R * angle_to_xyz(a, b, p)
    return SeparatedTrajectory(z, a, b, da, db, t, xyz, res)


def integrate_separated(inv: InvariantPair, p: ProblemParams, initial, zeta_span,
                        cfg: IntegratorConfig = IntegratorConfig(), n: int = 1001, zeta_eval=None):
    """Integrate the separated equations from (u0, v0, sign_u, sign_v[, sign_Y])."""
    if not isinstance(initial, SeparatedInitial):
        initial = SeparatedInitial(*initial)
    h, g, c = _planar(inv, p)
    alpha, beta = _initial_angles(inv, initial)
    fa, fb = _fa(alpha, h, g), _fb(beta, h, g, c)
    if fa < -1e-9 or fb < -1e-9:
        raise ValueError("initial point outside the region allowed by the invariants")
    da = initial.sign_u * np.sqrt(max(fa, 0.0))
    db = -initial.sign_v * initial.sign_Y * np.sqrt(max(fb, 0.0))
    return integrate_separated_angles(inv, p, (alpha, beta, da, db), zeta_span, cfg, n, zeta_eval)


def turning_points(traj: SeparatedTrajectory):
    """Local times where alpha' or beta' change sign (linear interpolation)."""
    out = {}
    for name, d in (("u", traj.dalpha), ("v", traj.dbeta)):
        idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]
        z = traj.zeta
        out[name] = z[idx] - d[idx] * (z[idx + 1] - z[idx]) / (d[idx + 1] - d[idx])
    return out


def initial_from_analytic(spec, zeta0: float = 0.0, delta: float = 1e-3):
    """Angle state (alpha, beta, alpha', beta') matching an analytic orbit.

    Angles come from the analytic point, speeds from the first integrals;
    the four sign choices are fixed by matching the analytic positions at
    zeta0 +- delta with a second-order Taylor step.
    """
    from .orbit_engine import printed_xyz

    p = spec.params
    h, g, c = spec.inv.h, spec.inv.g, p.c
    from .geometry import uv_from_cartesian
    x0 = np.array(printed_xyz(spec, zeta0)) / p.R
    w0, v0 = uv_from_cartesian(x0, p)
    a0 = float(np.arccos(np.clip(w0, -1, 1)))
    b0 = float(np.arccos(np.clip(v0, -1, 1)))
    fa, fb = max(_fa(a0, h, g), 0.0), max(_fb(b0, h, g, c), 0.0)
    zs = np.array([zeta0 - delta, zeta0 + delta])
    target = np.array(printed_xyz(spec, zs)).T / p.R
    best = None
    for sa, sbeta, sdb in itertools.product((1, -1), (1, -1), (1, -1)):
        b = sbeta * b0
        da, db = sa * np.sqrt(fa), sdb * np.sqrt(fb)
        dda = -np.sin(a0) + g * np.sin(2 * a0)
        ddb = h * np.sin(2 * b) - c * np.sin(b)
        dz = zs - zeta0
        pa = a0 + da * dz + 0.5 * dda * dz * dz
        pb = b + db * dz + 0.5 * ddb * dz * dz
        err = np.max(np.abs(angle_to_xyz(pa, pb, p) - target))
        err0 = np.max(np.abs(angle_to_xyz(a0, b, p) - x0))
        score = max(err, err0)
        if best is None or score < best[0]:
            best = (score, (a0, b, da, db))
    if best[0] > 1e-6:
        raise ToleranceFailure(f"no sign choice reproduces the analytic orbit (error {best[0]:.2e})")
    return best[1]


# --- Cartesian route ------------------------------------------------------------

def _force(x, p: ProblemParams):
    s, sb, gam = p.sigma, p.sigma_bar, p.gamma
    f1 = np.array([sb, 0.0, s])
    f2 = np.array([-sb, 0.0, s])
    c1, c2 = f1 @ x, f2 @ x
    d1, d2 = 1.0 - c1 * c1, 1.0 - c2 * c2
    if d1 < 1e-16 or d2 < 1e-16:
        raise SingularityEncountered("trajectory reached a center")
    F = (1.0 - gam) * f1 / d1**1.5 + gam * f2 / d2**1.5
    return F, np.sqrt(d1) * np.sqrt(d2)


def _cart_rhs(p: ProblemParams, clock: str):
    scale = local_time_scale(p)
    s, sb = p.sigma, p.sigma_bar
    f1 = np.array([sb, 0.0, s])
    f2 = np.array([-sb, 0.0, s])

    def rhs_t(tau, y):
        x, xd = y[:3], y[3:6]
        F, s12 = _force(x, p)
        r2 = x @ x
        acc = F - (x @ F) * x / r2 - (xd @ xd) * x / r2
        return np.concatenate([xd, acc, [scale / s12]])

    def rhs_zeta(tau, y):
        # y[3:6] is dx/dzeta, which stays bounded through close approaches
        x, xz = y[:3], y[3:6]
        F, s12 = _force(x, p)
        c1, c2 = f1 @ x, f2 @ x
        r1, r2c = np.sqrt(1.0 - c1 * c1), np.sqrt(1.0 - c2 * c2)
        k = s12 / scale
        grad_k = -(r2c * c1 / r1 * f1 + r1 * c2 / r2c * f2) / scale
        r2 = x @ x
        Ft = F - (x @ F) * x / r2
        acc = (grad_k @ xz) / k * xz + k * k * Ft - (xz @ xz) * x / r2
        return np.concatenate([xz, acc, [k]])

    return rhs_zeta if clock == "zeta" else rhs_t


def _project(y):
    x = y[:3] / np.linalg.norm(y[:3])
    xd = y[3:6] - (x @ y[3:6]) * x
    return np.concatenate([x, xd, y[6:]])


def integrate_cartesian(state0: CartesianState, p: ProblemParams, span,
                        cfg: IntegratorConfig = IntegratorConfig(), n: int = 1001,
                        clock: str = "t", eval_points=None) -> CartesianTrajectory:
    """Newton's equations on the sphere.

    With clock="t" the span is physical time and the local time is carried
    along; with clock="zeta" the roles swap.  Both are nondimensional.
    """
    if clock not in ("t", "zeta"):
        raise ValueError("clock must be 't' or 'zeta'")
    x0 = state0.position.as_array() / p.R
    v0 = np.asarray(state0.velocity, dtype=float) * p.time_unit / p.R
    tau = np.linspace(span[0], span[1], n) if eval_points is None else np.asarray(eval_points, float)
    post = _project if cfg.project else None
    if clock == "zeta":
        v0 = v0 * _force(x0, p)[1] / local_time_scale(p)
    y = _solve(_cart_rhs(p, clock), (float(tau[0]), float(tau[-1])),
               np.concatenate([x0, v0, [0.0]]), cfg, tau, post)
    x, xd, aux = y[:3].T, y[3:6].T, y[6]
    if clock == "zeta":
        s12 = np.array([_force(xi, p)[1] for xi in x])
        xd = xd / (s12 / local_time_scale(p))[:, None]
    # the carried clock starts at zero
    t, zeta = (tau, aux) if clock == "t" else (aux, tau)
    H = hamiltonian_nd(x, xd, p)
    Om = second_invariant_nd(x, xd, p)
    return CartesianTrajectory(np.asarray(t), np.asarray(zeta), p.R * x,
                               to_physical_velocity(xd, p), H, Om)


def state_from_angles(y0, p: ProblemParams) -> CartesianState:
    """Cartesian state (physical units) of an angle state."""
    a, b, da, db = y0
    x = angle_to_xyz(a, b, p)
    dxdz = angle_velocity(a, b, da, db, p)
    rate = _dt_dzeta_angles(a, b, p)
    if rate == 0.0:
        raise SingularityEncountered("initial point is a center")
    xd = dxdz / rate
    return CartesianState.from_arrays(p.R * x, to_physical_velocity(xd, p))


# --- comparison -----------------------------------------------------------------

def _count_sign_changes(z):
    s = np.sign(z)
    s = s[s != 0]
    return int(np.count_nonzero(s[:-1] != s[1:]))


def compare_to_analytic(spec, p: ProblemParams, zeta_span, cfg: IntegratorConfig = IntegratorConfig(),
                        n: int = 2001) -> DeviationReport:
    """Analytic orbit against both oracle routes on a common zeta grid."""
    from .orbit_engine import printed_xyz

    z = np.linspace(zeta_span[0], zeta_span[1], n)
    ana = np.array(printed_xyz(spec, z)).T
    y0 = initial_from_analytic(spec, float(z[0]))
    sep = integrate_separated_angles(spec.inv, p, y0, (z[0], z[-1]), cfg, zeta_eval=z)
    cart = integrate_cartesian(state_from_angles(y0, p), p, (z[0], z[-1]), cfg,
                               clock="zeta", eval_points=z)
    dev = np.linalg.norm(ana - sep.xyz, axis=1)
    dev_c = np.linalg.norm(ana - cart.xyz, axis=1)
    agree = np.linalg.norm(sep.xyz - cart.xyz, axis=1)
    return DeviationReport(
        max_dev=float(dev.max() / p.R), mean_dev=float(dev.mean() / p.R),
        max_dev_cartesian=float(dev_c.max() / p.R), route_agreement=float(agree.max() / p.R),
        H_drift=float(np.ptp(cart.H)), Omega_drift=float(np.ptp(cart.Omega)),
        H_offset=float(abs(cart.H[0] - spec.inv.H)), Omega_offset=float(abs(cart.Omega[0] - spec.inv.Omega)),
        crossings_analytic=_count_sign_changes(ana[:, 2]),
        crossings_oracle=_count_sign_changes(cart.xyz[:, 2]),
        elapsed_zeta=(float(z[0]), float(z[-1])))
