"""Closed orbits from the commensurability condition p*T_u = q*T_v.

One invariant is held fixed in the scaled chart and the other is solved
for. The free variable is searched only inside the stretch of the line that
belongs to the requested family, so the periods stay finite throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bifurcation import classify_hg, regime_of
from .errors import (ClassExit, ConvergenceFailure, CriticalCurve, DegenerateModulus,
                     ForbiddenRegion, InvalidParameters, ModulusOutOfRange, NoSignChange)
from .geometry import ProblemParams
from .invariants import from_planar
from .orbit_engine import OrbitSpec, build_spec, evaluate_points, periods

SCAN_POINTS = 64
CLOSURE_TOL = 1e-8


@dataclass(frozen=True)
class CommensurabilityProblem:
    """Search for p*T_u = q*T_v along one line of the (h, g) chart.

    ``fixed`` is "Omega" (hold h, solve for g) or "G" (hold g, solve for h).
    ``fixed_value`` and ``bracket`` are in the scaled chart. ``subtype``
    restricts Omega<0 t_p/t_l to type "1" or "2"; ``zone`` picks which of the
    two t_s orbits the returned spec describes.
    """

    p: int
    q: int
    fixed_value: float
    family: str
    fixed: str = "Omega"
    subtype: str | None = None
    zone: str = "zone1"
    bracket: tuple | None = None
    phases: tuple = (0.0, 0.0)
    signs: tuple = (1, 1, 1)

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 1 or self.q < 1:
            raise InvalidParameters("p and q must be positive integers")
        if math.gcd(int(self.p), int(self.q)) != 1:
            raise InvalidParameters(f"p={self.p} and q={self.q} are not coprime")
        if self.fixed not in ("Omega", "G"):
            raise InvalidParameters("fixed must be 'Omega' or 'G'")
        if self.bracket is not None and not self.bracket[0] < self.bracket[1]:
            raise InvalidParameters("bracket must be an increasing pair")

    def point(self, free_value: float):
        if self.fixed == "Omega":
            return float(self.fixed_value), float(free_value)
        return float(free_value), float(self.fixed_value)


def _in_class(prob: CommensurabilityProblem, h: float, g: float, p: ProblemParams) -> bool:
    cls = classify_hg(h, g, p)
    if not cls.allowed or cls.family != prob.family:
        return False
    return prob.subtype is None or cls.subtype == prob.subtype


def _spec(prob: CommensurabilityProblem, free_value: float, p: ProblemParams) -> OrbitSpec:
    h, g = prob.point(free_value)
    if not _in_class(prob, h, g, p):
        raise ClassExit(f"(h, g) = ({h}, {g}) is not {prob.family}")
    try:
        return build_spec(from_planar((h, g), p), p, prob.phases, prob.signs, prob.zone)
    except (CriticalCurve, ForbiddenRegion, ModulusOutOfRange, DegenerateModulus) as exc:
        raise ClassExit(str(exc)) from exc


def residual(prob: CommensurabilityProblem, free_value: float, p: ProblemParams) -> float:
    """p*T_u - q*T_v at the given value of the free invariant."""
    Tu, Tv = periods(_spec(prob, free_value, p))
    return prob.p * Tu - prob.q * Tv


def breakpoints(prob: CommensurabilityProblem, p: ProblemParams):
    """Values of the free variable where the line meets a critical curve."""
    c = p.c
    x = float(prob.fixed_value)
    if prob.fixed == "Omega":
        pts = [x + 1, x - 1, x - c, x + c]
        if regime_of(x) != "zero":
            pts += [-1 / (4 * x), -c * c / (4 * x)]
    else:
        pts = [x + 1, x - 1, x + c, x - c, 0.0]
        if x != 0:
            pts += [-1 / (4 * x), -c * c / (4 * x)]
    return sorted(set(pts))


def class_segments(prob: CommensurabilityProblem, p: ProblemParams, window=None):
    """Open intervals of the free variable lying inside the requested class."""
    cuts = breakpoints(prob, p)
    if window is None:
        span = max(abs(v) for v in cuts + [float(prob.fixed_value)]) + 4.0
        window = (-span, span)
    lo, hi = window
    edges = [lo] + [b for b in cuts if lo < b < hi] + [hi]
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        h, g = prob.point(0.5 * (a + b))
        if _in_class(prob, h, g, p):
            out.append((a, b))
    return out


def _scan(prob, a: float, b: float, p: ProblemParams):
    """First sign change of the residual on 64 interior Chebyshev points.

    The points crowd toward the segment ends, where the periods vary fastest.
    """
    xs = a + (b - a) * 0.5 * (1.0 - np.cos(np.pi * (np.arange(SCAN_POINTS) + 0.5) / SCAN_POINTS))
    prev = None
    for x in xs:
        try:
            r = residual(prob, float(x), p)
        except ClassExit:
            prev = None
            continue
        if r == 0.0:
            return float(x), float(x)
        if prev is not None and np.sign(r) != np.sign(prev[1]):
            return prev[0], float(x)
        prev = (float(x), r)
    return None


def find_bracket(prob: CommensurabilityProblem, p: ProblemParams):
    """Sign-change bracket inside the class region (and the user bracket)."""
    segs = class_segments(prob, p, prob.bracket)
    if not segs:
        raise ClassExit(f"no {prob.family} stretch on this line")
    for a, b in segs:
        hit = _scan(prob, a, b, p)
        if hit is not None:
            return hit
    raise NoSignChange(f"p*T_u - q*T_v keeps its sign over {segs}")


def closure_error(spec: OrbitSpec, period: float) -> float:
    """|x(0) - x(period)| for the sampled orbit."""
    xyz = evaluate_points(spec, np.array([0.0, period]))
    return float(np.linalg.norm(xyz[1] - xyz[0]))


def solve(prob: CommensurabilityProblem, p: ProblemParams, tol: float = 1e-12):
    """Root of the commensurability residual and the matching closed-orbit spec."""
    a, b = find_bracket(prob, p)
    if a == b:
        root = a
    else:
        root = brentq(lambda x: residual(prob, x, p), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                      maxiter=200)
    spec = _spec(prob, root, p)
    Tu, Tv = periods(spec)
    if abs(prob.p * Tu - prob.q * Tv) > tol * max(Tu, Tv):
        raise ConvergenceFailure(f"residual {prob.p * Tu - prob.q * Tv} above tolerance")
    return root, spec


def common_period(prob: CommensurabilityProblem, spec: OrbitSpec) -> float:
    Tu, _ = periods(spec)
    return prob.p * Tu


def solution_record(prob: CommensurabilityProblem, value: float, spec: OrbitSpec) -> dict:
    Tu, Tv = periods(spec)
    return {"p": prob.p, "q": prob.q, "Omega": spec.inv.Omega, "G": spec.inv.G,
            "h": spec.inv.h, "g": spec.inv.g, "class": str(spec.orbit_class),
            "T_u": Tu, "T_v": Tv, "residual": prob.p * Tu - prob.q * Tv,
            "closure_error": closure_error(spec, prob.p * Tu)}
