"""Closed-form orbits as functions of the local time zeta.

A spec is built from an invariant pair, two initial phases and three signs.
``evaluate`` runs the printed block for the family; ``evaluate_compact``
rebuilds the same point from u(zeta), v(zeta) through the sg/|u| form and
serves as the cross-check path.

Time conventions (R = 1, unit total strength):
  s_u = sign_u * w_u * zeta + s_u0, with w_u = sqrt(2|h|)/g_u,
  s_v = sign_v * w_v * zeta + s_v0, with w_v = sqrt(2|h|)/g_v;
  for Omega = 0, w_u = sqrt(2)/g_u and w_v = sqrt(2(1 - 2 gamma))/g_v.
  dt/dzeta = (U^2 - V^2)/sqrt(sigma*sigma_bar).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bifurcation import BranchPoints, OrbitClass, branch_points, classify
from .elliptic import complete_K, incomplete_F, jacobi_sn_cn_dn
from .errors import (CriticalCurve, ForbiddenRegion,
                     ModulusOutOfRange, UnsupportedFamily)
from .families import BlockData, block_data, block_key
from .geometry import ProblemParams, SpherePoint, local_time_scale
from .invariants import InvariantPair

K_TOL = 1e-12
TIME_TOL = 1e-10
MAX_PENDING = 1 << 18


@dataclass(frozen=True)
class OrbitSpec:
    orbit_class: OrbitClass
    inv: InvariantPair
    branch: BranchPoints
    params: ProblemParams
    block: BlockData = field(repr=False)
    s_u0: float = 0.0
    s_v0: float = 0.0
    sign_u: int = 1
    sign_v: int = 1
    sign_Y: int = 1

    @property
    def key(self) -> str:
        return self.block.key

    @property
    def k_u2(self) -> float:
        return self.block.k_u2

    @property
    def k_v2(self) -> float:
        return self.block.k_v2

    @property
    def g_u(self) -> float:
        return self.block.g_u

    @property
    def g_v(self) -> float:
        return self.block.g_v

    @property
    def speeds(self):
        """Unsigned phase velocities (ds_u/dzeta, ds_v/dzeta)."""
        h = self.inv.h
        if self.orbit_class.regime == "zero":
            return np.sqrt(2.0) / self.g_u, np.sqrt(2.0 * self.params.c) / self.g_v
        base = np.sqrt(2.0 * abs(h))
        return base / self.g_u, base / self.g_v

    def phases(self, zeta):
        wu, wv = self.speeds
        z = np.asarray(zeta, dtype=float)
        return self.sign_u * wu * z + self.s_u0, self.sign_v * wv * z + self.s_v0

    def with_phases(self, s_u0: float, s_v0: float) -> "OrbitSpec":
        return _replace(self, s_u0=float(s_u0), s_v0=float(s_v0))

    def reversed(self) -> "OrbitSpec":
        """Same orbit traversed backwards in zeta."""
        return _replace(self, sign_u=-self.sign_u, sign_v=-self.sign_v)


def _replace(spec, **kw):
    from dataclasses import replace
    return replace(spec, **kw)


@dataclass(frozen=True)
class SphereSample:
    zeta: float
    point: SpherePoint
    U: float
    V: float
    t_phys: float


@dataclass
class OrbitSamples:
    """Array view of a sampled orbit; indexing yields SphereSample."""

    zeta: np.ndarray
    t: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    U: np.ndarray
    V: np.ndarray

    def __len__(self) -> int:
        return len(self.zeta)

    def __getitem__(self, i: int) -> SphereSample:
        return SphereSample(float(self.zeta[i]),
                            SpherePoint(float(self.X[i]), float(self.Y[i]), float(self.Z[i])),
                            float(self.U[i]), float(self.V[i]), float(self.t[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def xyz(self) -> np.ndarray:
        return np.column_stack([self.X, self.Y, self.Z])


def build_spec(inv: InvariantPair, p: ProblemParams, phases=(0.0, 0.0), signs=(1, 1, 1),
               zone: str = "zone1") -> OrbitSpec:
    """Select the block for the class of ``inv`` and validate its moduli.

    ``zone`` picks which of the two satellitary orbits an Omega<0 t_s point
    describes; it is ignored for other families.
    """
    cls = classify(inv, p)
    if cls.critical:
        raise CriticalCurve(f"(h, g) = ({inv.h}, {inv.g}) lies on {', '.join(cls.curves)}")
    if cls.forbidden:
        raise ForbiddenRegion(f"(h, g) = ({inv.h}, {inv.g}) admits no motion")
    if cls.family == "t_s":
        if zone not in ("zone1", "zone2"):
            raise UnsupportedFamily(f"unknown satellitary zone {zone!r}")
        cls = OrbitClass(cls.family, cls.regime, zone)
    if cls.regime == "zero" and p.c <= 0:
        raise UnsupportedFamily("Omega = 0 needs gamma < 1/2")
    bp = branch_points(inv, p)
    blk = block_data(block_key(cls.family, cls.regime, cls.subtype), bp)
    for name, m in (("k_u^2", blk.k_u2), ("k_v^2", blk.k_v2)):
        if not np.isfinite(m) or m < -K_TOL or m > 1 + K_TOL:
            raise ModulusOutOfRange(f"{name} = {m} for block {blk.key}")
        if m >= 1 - K_TOL:
            raise CriticalCurve(f"{name} = {m} is degenerate for block {blk.key}")
    blk = _clip_moduli(blk)
    su, sv, sy = (int(np.sign(x)) or 1 for x in signs)
    return OrbitSpec(cls, inv, bp, p, blk, float(phases[0]), float(phases[1]), su, sv, sy)


def _clip_moduli(blk: BlockData) -> BlockData:
    from dataclasses import replace
    return replace(blk, k_u2=min(max(blk.k_u2, 0.0), 1.0), k_v2=min(max(blk.k_v2, 0.0), 1.0))


def spec_from_hg(h: float, g: float, p: ProblemParams, phases=(0.0, 0.0), signs=(1, 1, 1),
                 zone: str = "zone1") -> OrbitSpec:
    from .invariants import from_planar
    return build_spec(from_planar((h, g), p), p, phases, signs, zone)


def _jacobi(spec: OrbitSpec, zeta):
    su, sv = spec.phases(zeta)
    return jacobi_sn_cn_dn(su, spec.k_u2), jacobi_sn_cn_dn(sv, spec.k_v2)


def printed_xyz(spec: OrbitSpec, zeta):
    """Cartesian point(s) from the printed block, arrays over zeta."""
    ju, jv = _jacobi(spec, zeta)
    p = spec.params
    X, Y, Z = spec.block.xyz(spec.branch, np.sqrt(spec.k_u2), np.sqrt(spec.k_v2),
                             p.sigma, p.sigma_bar, ju, jv)
    return p.R * X, spec.sign_Y * p.R * Y, p.R * Z


def uv_numden(spec: OrbitSpec, zeta):
    """(N_u, D_u, N_v, D_v) with u = N_u/D_u and v = N_v/D_v."""
    ju, jv = _jacobi(spec, zeta)
    nu, du = spec.block.mob_u.num_den(ju)
    nv, dv = spec.block.mob_v.num_den(jv)
    return nu, du, nv, dv


def uv_of_zeta(spec: OrbitSpec, zeta):
    """Signed elliptic coordinates; u is +-inf at equator crossings."""
    nu, du, nv, dv = uv_numden(spec, zeta)
    with np.errstate(divide="ignore", invalid="ignore"):
        return nu / du, nv / dv


def UV_of_zeta(spec: OrbitSpec, zeta):
    """|U| and V straight from the Moebius forms (no trigonometry)."""
    nu, du, nv, dv = uv_numden(spec, zeta)
    s, sb = spec.params.sigma, spec.params.sigma_bar
    U = sb * np.abs(nu) / np.sqrt(sb * sb * nu * nu + s * s * du * du)
    V = sb * nv * np.sign(dv) / np.sqrt(sb * sb * nv * nv + s * s * dv * dv)
    return U, V


def evaluate_points(spec: OrbitSpec, zeta) -> np.ndarray:
    """Cartesian points as an (n, 3) array."""
    return np.stack(printed_xyz(spec, np.asarray(zeta, dtype=float)), axis=-1)


def evaluate_compact(spec: OrbitSpec, zeta):
    """Cross-check path: sg/|u| form with |Y| only (sign taken from sign_Y)."""
    nu, du, nv, dv = uv_numden(spec, zeta)
    p = spec.params
    s, sb, R = p.sigma, p.sigma_bar, p.R
    yu = np.sqrt(sb * sb * nu * nu + s * s * du * du)
    yv = np.sqrt(sb * sb * nv * nv + s * s * dv * dv)
    f = R / (yu * yv)
    X = f * sb * np.abs(nu) * nv * np.sign(dv)
    Z = f * s * np.sign(nu) * du * np.abs(dv)
    Yabs = f * s * sb * np.sqrt(np.maximum(nu * nu - du * du, 0.0)) * np.sqrt(np.maximum(dv * dv - nv * nv, 0.0))
    return X, Yabs, Z


def evaluate(spec: OrbitSpec, zeta: float) -> SphereSample:
    X, Y, Z = printed_xyz(spec, zeta)
    U, V = UV_of_zeta(spec, zeta)
    t = physical_time(spec, zeta)
    return SphereSample(float(zeta), SpherePoint(float(X), float(Y), float(Z)),
                        float(U), float(V), float(t))


def periods(spec: OrbitSpec):
    """(T_u, T_v) in local time."""
    mu, mv = spec.block.mult
    wu, wv = spec.speeds
    return mu * complete_K(spec.k_u2) / wu, mv * complete_K(spec.k_v2) / wv


def time_rate(spec: OrbitSpec, zeta):
    """dt/dzeta = (U^2 - V^2)/sqrt(sigma*sigma_bar)."""
    U, V = UV_of_zeta(spec, zeta)
    return (U * U - V * V) / local_time_scale(spec.params)


def _simpson_cumulative(f, z, tol):
    """Cumulative integral of f over the grid z by adaptive Simpson.

    All pending intervals are refined together so f is called on arrays.
    """
    z = np.asarray(z, dtype=float)
    n = len(z) - 1
    if n <= 0:
        return np.zeros(len(z))
    a, b = z[:-1], z[1:]
    span = max(abs(z[-1] - z[0]), 1e-300)
    owner = np.arange(n)
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    eps = tol * np.abs(b - a) / span
    acc = np.zeros(n)
    for depth in range(60):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(np.concatenate([lm, rm])).reshape(2, -1)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        err = left + right - whole
        # the size guard stops runaway refinement on a bad integrand
        done = (np.abs(err) <= 15.0 * eps) | (depth == 59) | (len(a) > MAX_PENDING)
        np.add.at(acc, owner[done], (left + right + err / 15.0)[done])
        keep = ~done
        if not keep.any():
            break
        a2 = np.concatenate([a[keep], m[keep]])
        b2 = np.concatenate([m[keep], b[keep]])
        fa2 = np.concatenate([fa[keep], fm[keep]])
        fb2 = np.concatenate([fm[keep], fb[keep]])
        fm2 = np.concatenate([flm[keep], frm[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        eps = np.concatenate([eps[keep], eps[keep]]) * 0.5
        owner = np.concatenate([owner[keep], owner[keep]])
        a, b, fa, fb, fm = a2, b2, fa2, fb2, fm2
        m = 0.5 * (a + b)
    return np.concatenate([[0.0], np.cumsum(acc)])


def physical_time(spec: OrbitSpec, zeta, tol: float = TIME_TOL):
    """Nondimensional physical time elapsed from zeta = 0."""
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    nodes = np.unique(np.concatenate([[0.0], z]))
    cum = _simpson_cumulative(lambda x: time_rate(spec, x), nodes, tol)
    cum -= cum[np.searchsorted(nodes, 0.0)]
    t = np.interp(z, nodes, cum)
    return t if np.ndim(zeta) else float(t[0])


def fd_state(spec: OrbitSpec, zeta, step: float | None = None):
    """Unit-sphere positions and nondimensional velocities dx/dt at zeta.

    Centered differences of position against the recovered physical time,
    with step cbrt(eps) times the longer period by default.
    """
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    if step is None:
        step = np.cbrt(np.finfo(float).eps) * max(periods(spec))
    R = spec.params.R
    x = evaluate_points(spec, z) / R
    xp = evaluate_points(spec, z + step) / R
    xm = evaluate_points(spec, z - step) / R
    tt = physical_time(spec, np.concatenate([z - step, z + step]))
    dt = tt[len(z):] - tt[:len(z)]
    return x, (xp - xm) / dt[:, None]


def sample(spec: OrbitSpec, zeta_range, n: int) -> OrbitSamples:
    """Uniform zeta grid with Cartesian, (U, V) and physical time columns."""
    if n < 2:
        raise ValueError("need at least two samples")
    z0, z1 = map(float, zeta_range)
    z = np.linspace(z0, z1, n)
    X, Y, Z = printed_xyz(spec, z)
    U, V = UV_of_zeta(spec, z)
    t = physical_time(spec, z)
    return OrbitSamples(z, np.asarray(t), X, Y, Z, U, V)


# --- phases from an initial coordinate ------------------------------------

def _phase_of(mob, x: float, m: float, sign: int) -> float:
    w = mob.invert(x)
    if mob.kind == "cn":
        phi = np.arccos(np.clip(w, -1.0, 1.0))
    elif mob.kind == "sn2":
        phi = np.arcsin(np.sqrt(np.clip(w, 0.0, 1.0)))
    else:
        sn2 = (1.0 - w) / m if m > 0 else 0.0
        phi = np.arcsin(np.sqrt(np.clip(sn2, 0.0, 1.0)))
    return sign * incomplete_F(phi, m)


def phases_from_point(inv: InvariantPair, p: ProblemParams, u0: float, v0: float,
                      signs=(1, 1, 1), zone: str = "zone1", branch=(1, 1)):
    """Phases (s_u0, s_v0) placing the orbit at elliptic point (u0, v0).

    The Jacobi quantity w is recovered algebraically and converted to a
    phase with the incomplete integral F.  The principal branch lies in
    [0, K] (sn^2, dn^2 forms) or [0, 2K] (cn form); ``branch = (-1, ...)``
    selects the mirror phase -s instead, which sits at the same coordinate
    with the opposite sheet.
    """
    spec = build_spec(inv, p, (0.0, 0.0), signs, zone)
    su0 = _phase_of(spec.block.mob_u, float(u0), spec.k_u2, branch[0])
    sv0 = _phase_of(spec.block.mob_v, float(v0), spec.k_v2, branch[1])
    return su0, sv0


def spec_from_point(inv, p, u0, v0, signs=(1, 1, 1), zone="zone1", branch=(1, 1)):
    su0, sv0 = phases_from_point(inv, p, u0, v0, signs, zone, branch)
    return build_spec(inv, p, (su0, sv0), signs, zone)


# --- orbit-level checks -----------------------------------------------------

def allowed_ranges(spec: OrbitSpec):
    """Admissible |u| interval (north and south) and v interval of the class.

    Returns ((lo_n, hi_n), (lo_s, hi_s) or None, (v_lo, v_hi)).
    """
    bp = spec.branch
    fam, reg, sub = spec.orbit_class.family, spec.orbit_class.regime, spec.orbit_class.subtype
    inf = np.inf
    if reg == "zero":
        lo = bp.u1 if fam == "t_p" else 1.0
        vr = (bp.v2, 1.0) if fam == "t_s'" else (-1.0, 1.0)
        return (lo, inf), None, vr
    if reg == "negative":
        if fam == "t_p":
            ur = (bp.u1, bp.u2)
        else:
            ur = (1.0, bp.u2)
        if fam == "t_s":
            vr = (bp.v2, 1.0) if sub == "zone1" else (-1.0, bp.v1)
        elif fam == "t_s'":
            vr = (bp.v2, 1.0)
        else:
            vr = (-1.0, 1.0)
        return ur, None, vr
    north = (max(1.0, bp.u2), inf)
    south = (max(1.0, -bp.u1), inf)
    if fam in ("t_p", "t_l"):
        vr = (-1.0, 1.0)
    elif fam == "t_s'":
        vr = (bp.v1, 1.0)
    else:
        vr = (bp.v1, bp.v2)
    return north, south, vr


def confinement_violation(spec: OrbitSpec, zeta, slack: float = 1e-9):
    """Largest amount by which sampled (u, v) leave the class ranges."""
    nu, du, nv, dv = uv_numden(spec, zeta)
    ur_n, ur_s, vr = allowed_ranges(spec)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = du / nu  # 1/u stays finite
        v = nv / dv
    north = w >= 0
    bad = np.zeros_like(w)
    # |u| >= lo  <=>  |w| <= 1/lo ; |u| <= hi  <=>  |w| >= 1/hi
    for mask, rng in ((north, ur_n), (~north, ur_s)):
        if rng is None:
            bad = np.where(mask, np.inf, bad)
            continue
        lo, hi = rng
        aw = np.abs(w)
        over = np.maximum(aw - 1.0 / lo, 0.0)
        under = np.maximum(1.0 / hi - aw, 0.0) if np.isfinite(hi) else 0.0 * aw
        bad = np.where(mask, np.maximum(over, under), bad)
    bad = np.maximum(bad, np.maximum(vr[0] - v, 0.0))
    bad = np.maximum(bad, np.maximum(v - vr[1], 0.0))
    return float(np.max(bad)) if np.size(bad) else 0.0


def equator_crossings(spec: OrbitSpec, zeta_span, n: int = 4000, tol: float = 1e-14):
    """Local times where Z changes sign, refined by bisection."""
    z = np.linspace(zeta_span[0], zeta_span[1], n)
    Z = printed_xyz(spec, z)[2]
    idx = np.nonzero(np.sign(Z[:-1]) * np.sign(Z[1:]) < 0)[0]
    out = []
    for i in idx:
        a, b = z[i], z[i + 1]
        za = Z[i]
        while b - a > tol * max(1.0, abs(a)):
            m = 0.5 * (a + b)
            zm = printed_xyz(spec, m)[2]
            if np.sign(zm) == np.sign(za):
                a, za = m, zm
            else:
                b = m
        out.append(0.5 * (a + b))
    return np.array(out)
