"""Command-line front end.

Subcommands: classify, orbit, grid, closed, verify. Every option can also be
given in a config file (``--config``), either JSON or ``key = value`` lines,
using the long option name with dashes or underscores. Command-line flags win
over the file. ``S2ORBITS_TOL`` overrides the default verify tolerance.

Exit codes: 0 success, 2 usage or config error, 3 forbidden region,
4 critical curve, 5 engine failure, 6 verification failed.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .bifurcation import branch_points, classify, classify_grid, critical_curves, CURVE_NAMES
from .closed_orbits import CommensurabilityProblem, solution_record, solve
from .errors import (ClassExit, CriticalCurve, ForbiddenRegion, InvalidParameters, NoSignChange,
                     S2OrbitsError)
from .geometry import ProblemParams
from .invariants import from_planar, from_spherical
from .oracle import IntegratorConfig, compare_to_analytic
from .orbit_engine import build_spec, periods, sample

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORBIDDEN = 3
EXIT_CRITICAL = 4
EXIT_ENGINE = 5
EXIT_VERIFY = 6

ENV_TOL = "S2ORBITS_TOL"
DEFAULT_VERIFY_TOL = 1e-6


class ConfigError(Exception):
    """Bad configuration file or option combination."""


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering used by every output."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


# --- parser -----------------------------------------------------------------

def _common(sp: argparse.ArgumentParser, invariants: bool = True, output: bool = True):
    g = sp.add_argument_group("problem")
    g.add_argument("--config", help="JSON or key=value file with option values")
    g.add_argument("--R", type=float, help="sphere radius (default 1)")
    g.add_argument("--theta-f", type=float, help="half-separation angle in radians (default pi/6)")
    g.add_argument("--gamma", type=float, help="relative strength gamma2/(gamma1+gamma2) (default 1/3)")
    g.add_argument("--gamma1", type=float, help="strength of the first center")
    g.add_argument("--gamma2", type=float, help="strength of the second center")
    if invariants:
        g.add_argument("--h", type=float, help="scaled invariant (sigma_bar/sigma)*Omega")
        g.add_argument("--g", type=float, help="scaled invariant (sigma/sigma_bar)*G")
        g.add_argument("--Omega", type=float, help="raw second invariant")
        g.add_argument("--G", type=float, help="raw separation constant")
    if output:
        g.add_argument("--out", help="output path (default stdout)")
        g.add_argument("--format", choices=("csv", "json"), help="output format")


def _orbit_opts(sp):
    o = sp.add_argument_group("orbit")
    o.add_argument("--phases", type=float, nargs=2, metavar=("S_U0", "S_V0"), help="initial phases")
    o.add_argument("--signs", type=int, nargs=3, metavar=("SU", "SV", "SY"),
                   help="sign_u sign_v sign_Y, each +1 or -1")
    o.add_argument("--zone", choices=("zone1", "zone2"), help="which t_s orbit for Omega<0")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="s2orbits", description="Two fixed centers on the sphere.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="orbit family of an invariant pair")
    _common(sp)

    sp = sub.add_parser("orbit", help="sample a closed-form orbit")
    _common(sp)
    _orbit_opts(sp)
    sp.add_argument("--zeta-min", type=float, help="window start (default 0)")
    sp.add_argument("--zeta-max", type=float, help="window end (default 70)")
    sp.add_argument("--n", type=int, help="number of samples (default 1000)")

    sp = sub.add_parser("grid", help="classify a rectangle of the (h, g) chart")
    _common(sp, invariants=False)
    sp.add_argument("--region", type=float, nargs=4, metavar=("HMIN", "HMAX", "GMIN", "GMAX"))
    sp.add_argument("--resolution", type=int, nargs=2, metavar=("NH", "NG"))

    sp = sub.add_parser("closed", help="solve p*T_u = q*T_v")
    _common(sp, invariants=False)
    _orbit_opts(sp)
    sp.add_argument("--p", type=int, help="radial multiplier")
    sp.add_argument("--q", type=int, help="angular multiplier")
    sp.add_argument("--family", help="t_p, t_l, t_s, t_s', t_ds or t_mp")
    sp.add_argument("--subtype", help="restrict Omega<0 t_p/t_l to type 1 or 2")
    sp.add_argument("--fixed", choices=("Omega", "G"), help="invariant held fixed (default Omega)")
    sp.add_argument("--value", type=float, help="fixed invariant in the scaled chart")
    sp.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--tol", type=float, help="relative residual tolerance (default 1e-12)")

    sp = sub.add_parser("verify", help="compare the closed form with the numerical oracle")
    _common(sp)
    _orbit_opts(sp)
    sp.add_argument("--zeta-span", type=float, nargs=2, metavar=("Z0", "Z1"))
    sp.add_argument("--n", type=int, help="comparison grid size (default 2001)")
    sp.add_argument("--method", choices=("RK45", "DOP853", "rk4"))
    sp.add_argument("--rtol", type=float)
    sp.add_argument("--atol", type=float)
    sp.add_argument("--tol", type=float, help=f"deviation tolerance (default {DEFAULT_VERIFY_TOL}, env {ENV_TOL})")
    sp.add_argument("--drift", type=float, help="invariant drift tolerance (default 1e-8)")
    return ap


DEFAULTS = {
    "R": 1.0, "theta_f": math.pi / 6, "phases": (0.0, 0.0), "signs": (1, 1, 1), "zone": "zone1",
    "zeta_min": 0.0, "zeta_max": 70.0, "n": None, "region": (-1.99, 1.99, -1.99, 1.99),
    "resolution": (200, 200), "fixed": "Omega", "zeta_span": (0.0, 10.0), "method": "RK45",
    "rtol": 1e-12, "atol": 1e-12, "drift": 1e-8,
}


# --- config files -------------------------------------------------------------

def _coerce(action: argparse.Action, raw, where: str):
    conv = action.type or str
    try:
        if action.nargs is not None:
            items = raw if isinstance(raw, list) else str(raw).replace(",", " ").split()
            if len(items) != action.nargs:
                raise ValueError(f"expected {action.nargs} values, got {len(items)}")
            vals = tuple(conv(x) for x in items)
        else:
            if isinstance(raw, (list, dict)):
                raise ValueError("expected a scalar")
            vals = conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    if action.choices is not None and vals not in action.choices:
        raise ConfigError(f"{where}: {vals!r} not in {list(action.choices)}")
    return vals


def read_config(path: str):
    """Return [(key, raw_value, location)] from a JSON or key=value file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        return [(k, v, f"{path}: field {k!r}") for k, v in data.items()]
    out = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out.append((k, v, f"{path}:{no}: field {k!r}"))
    return out


def merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace):
    """Fill options that were not given on the command line from --config."""
    if not getattr(args, "config", None):
        return args
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    for key, raw, where in read_config(args.config):
        dest = key.replace("-", "_")
        if dest not in actions:
            raise ConfigError(f"{where}: unknown option for '{args.command}'")
        if getattr(args, dest) is None:
            setattr(args, dest, _coerce(actions[dest], raw, where))
    return args


def _default(args, name):
    v = getattr(args, name, None)
    return DEFAULTS.get(name) if v is None else v


def params_of(args) -> ProblemParams:
    R, tf = _default(args, "R"), _default(args, "theta_f")
    if args.gamma is not None and (args.gamma1 is not None or args.gamma2 is not None):
        raise ConfigError("give either gamma or gamma1/gamma2, not both")
    if args.gamma1 is not None or args.gamma2 is not None:
        if args.gamma1 is None or args.gamma2 is None:
            raise ConfigError("gamma1 and gamma2 must be given together")
        return ProblemParams(R=R, theta_f=tf, gamma1=args.gamma1, gamma2=args.gamma2)
    gamma = 1.0 / 3.0 if args.gamma is None else args.gamma
    return ProblemParams.from_gamma(gamma, tf, R)


def invariants_of(args, p: ProblemParams):
    scaled = (args.h, args.g)
    raw = (args.Omega, args.G)
    has_s = any(v is not None for v in scaled)
    has_r = any(v is not None for v in raw)
    if has_s == has_r:
        raise ConfigError("give exactly one invariant chart: --h/--g or --Omega/--G")
    pair = scaled if has_s else raw
    if None in pair:
        raise ConfigError("both invariants of the chosen chart are required")
    return from_planar(pair, p) if has_s else from_spherical(*pair, p)


def _signs(args):
    s = tuple(_default(args, "signs"))
    if any(v not in (1, -1) for v in s):
        raise ConfigError("signs must be +1 or -1")
    return s


# --- output -------------------------------------------------------------------

def write_output(text: str, path: str | None):
    """Write atomically to ``path`` or print to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".s2orbits-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(c if isinstance(c, str) else fmt(c) for c in r) + "\n")
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _spec_meta(spec) -> dict:
    Tu, Tv = periods(spec)
    return {"class": str(spec.orbit_class), "block": spec.key, "h": spec.inv.h, "g": spec.inv.g,
            "Omega": spec.inv.Omega, "G": spec.inv.G, "H": spec.inv.H,
            "k_u2": spec.k_u2, "k_v2": spec.k_v2, "g_u": spec.g_u, "g_v": spec.g_v,
            "s_u0": spec.s_u0, "s_v0": spec.s_v0,
            "signs": [spec.sign_u, spec.sign_v, spec.sign_Y], "T_u": Tu, "T_v": Tv}


def _root_repr(x):
    if x is None:
        return None
    if isinstance(x, complex):
        return [x.real, x.imag]
    return float(x)


# --- commands -------------------------------------------------------------------

def cmd_classify(args) -> int:
    p = params_of(args)
    inv = invariants_of(args, p)
    cls = classify(inv, p)
    bp = branch_points(inv, p)
    res = critical_curves(inv, p)
    rec = {"class": str(cls), "family": cls.family, "regime": cls.regime, "subtype": cls.subtype,
           "forbidden": cls.forbidden, "critical": cls.critical, "curves": list(cls.curves),
           "h": inv.h, "g": inv.g, "Omega": inv.Omega, "G": inv.G,
           "branch_points": {k: _root_repr(getattr(bp, k)) for k in ("u1", "u2", "v1", "v2")},
           "residuals": dict(zip(CURVE_NAMES, map(float, res)))}
    if _default(args, "format") == "json":
        text = _json_text(rec)
    else:
        lines = [f"class: {rec['class']}", f"regime: {cls.regime}",
                 f"h: {fmt(inv.h)}", f"g: {fmt(inv.g)}"]
        for k, v in rec["branch_points"].items():
            lines.append(f"{k}: " + ("none" if v is None else
                                     " ".join(map(fmt, v)) if isinstance(v, list) else fmt(v)))
        for k, v in rec["residuals"].items():
            lines.append(f"{k}: {fmt(v)}")
        text = "\n".join(lines) + "\n"
    write_output(text, args.out)
    if cls.critical:
        return EXIT_CRITICAL
    if cls.forbidden:
        return EXIT_FORBIDDEN
    return EXIT_OK


def _spec_of(args, p):
    inv = invariants_of(args, p)
    return build_spec(inv, p, tuple(_default(args, "phases")), _signs(args), _default(args, "zone"))


def cmd_orbit(args) -> int:
    p = params_of(args)
    n = args.n if args.n is not None else 1000
    z0, z1 = _default(args, "zeta_min"), _default(args, "zeta_max")
    if n < 2:
        raise ConfigError("n must be at least 2")
    if not z1 > z0:
        raise ConfigError("window length must be positive")
    spec = _spec_of(args, p)
    s = sample(spec, (z0, z1), n)
    cols = ("zeta", "t", "X", "Y", "Z", "U", "V")
    if _default(args, "format") == "json":
        text = _json_text({"spec": _spec_meta(spec),
                           "samples": {c: [float(v) for v in getattr(s, c)] for c in cols}})
    else:
        text = csv_text(cols, zip(*(getattr(s, c) for c in cols)))
    write_output(text, args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    p = params_of(args)
    region = _default(args, "region")
    res = _default(args, "resolution")
    if min(res) < 1:
        raise ConfigError("resolution must be positive")
    if not (region[1] > region[0] and region[3] > region[2]):
        raise ConfigError("region must be (hmin, hmax, gmin, gmax) with positive extent")
    hs, gs, grid = classify_grid(region, res, p)
    rows = []
    for i, g in enumerate(gs):
        for j, h in enumerate(hs):
            c = grid[i][j]
            flags = "critical:" + ";".join(c.curves) if c.critical else ("forbidden" if c.forbidden else "")
            rows.append((float(h), float(g), c.label, c.subtype, flags))
    if _default(args, "format") == "json":
        text = _json_text([dict(zip(("h", "g", "class", "subtype", "flags"), r)) for r in rows])
    else:
        text = csv_text(("h", "g", "class", "subtype", "flags"), rows)
    write_output(text, args.out)
    return EXIT_OK


def cmd_closed(args) -> int:
    p = params_of(args)
    for k in ("p", "q", "family", "value"):
        if getattr(args, k) is None:
            raise ConfigError(f"closed needs --{k}")
    prob = CommensurabilityProblem(args.p, args.q, args.value, args.family, _default(args, "fixed"),
                                   args.subtype, _default(args, "zone"),
                                   tuple(args.bracket) if args.bracket else None,
                                   tuple(_default(args, "phases")), _signs(args))
    tol = args.tol if args.tol is not None else 1e-12
    value, spec = solve(prob, p, tol)
    rec = solution_record(prob, value, spec)
    if _default(args, "format") == "csv":
        keys = ("p", "q", "Omega", "G", "class", "T_u", "T_v", "residual")
        text = csv_text(keys, [tuple(rec[k] for k in keys)])
    else:
        text = _json_text(rec)
    write_output(text, args.out)
    return EXIT_OK


def verify_tolerance(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(ENV_TOL)
    if env:
        try:
            return float(env)
        except ValueError:
            raise ConfigError(f"{ENV_TOL}={env!r} is not a number") from None
    return DEFAULT_VERIFY_TOL


def cmd_verify(args) -> int:
    p = params_of(args)
    tol = verify_tolerance(args)
    cfg = IntegratorConfig(method=_default(args, "method"), rtol=_default(args, "rtol"),
                           atol=_default(args, "atol"))
    span = tuple(_default(args, "zeta_span"))
    if not span[1] > span[0]:
        raise ConfigError("zeta span must have positive length")
    spec = _spec_of(args, p)
    rep = compare_to_analytic(spec, p, span, cfg, n=args.n or 2001)
    ok = rep.passed(tol, _default(args, "drift"))
    rec = rep.as_dict()
    rec.update({"tolerance": tol, "passed": ok, "class": str(spec.orbit_class)})
    if _default(args, "format") == "csv":
        keys = sorted(k for k, v in rec.items() if not isinstance(v, (list, dict)))
        text = csv_text(keys, [tuple(str(rec[k]) if isinstance(rec[k], (bool, str)) else rec[k]
                                     for k in keys)])
    else:
        text = _json_text(rec)
    write_output(text, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"classify": cmd_classify, "orbit": cmd_orbit, "grid": cmd_grid,
            "closed": cmd_closed, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        merge_config(parser, args)
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidParameters) as exc:
        print(f"s2orbits: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ForbiddenRegion as exc:
        print(f"s2orbits: forbidden: {exc}", file=sys.stderr)
        return EXIT_FORBIDDEN
    except CriticalCurve as exc:
        print(f"s2orbits: critical: {exc}", file=sys.stderr)
        return EXIT_CRITICAL
    except (ClassExit, NoSignChange, S2OrbitsError) as exc:
        print(f"s2orbits: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
