import numpy as np
import pytest

from s2orbits.geometry import ProblemParams
from s2orbits.orbit_engine import spec_from_hg

P = ProblemParams.from_gamma(1.0 / 3.0)

# one (h, g) point per printed block, with phases that keep the orbit
# clear of both centers over zeta in [0, 10]
REPS = {
    "p_tp": ((0.5, 2.0), (1.0, 2.0), "zone1"),
    "p_tl": ((0.25, 1.0), (1.25, 0.0), "zone1"),
    "p_tsp": ((0.5, 0.5), (1.75, 1.75), "zone1"),
    "p_tds": ((0.8, 0.2), (1.0, 2.0), "zone1"),
    "p_tmp": ((1.5, 0.2), (1.0, 2.0), "zone1"),
    "n_tp1": ((-0.27, 0.8), (0.0, 0.0), "zone1"),
    "n_tp2": ((-0.02, 1.2), (0.0, 0.0), "zone1"),
    "n_tl1": ((-0.3, 0.6), (1.25, 3.0), "zone1"),
    "n_tl2": ((-0.05, 0.4), (1.25, 1.5), "zone1"),
    "n_ts1": ((-0.5, 0.0), (1.25, 2.0), "zone1"),
    "n_ts2": ((-0.5, 0.0), (1.5, 0.5), "zone2"),
    "n_tsp": ((-0.2, -0.1), (0.75, 2.5), "zone1"),
    "z_tp": ((0.0, 1.5), (0.0, 0.0), "zone1"),
    "z_tl": ((0.0, 0.5), (1.0, 1.0), "zone1"),
    "z_tsp": ((0.0, 0.0), (0.75, 2.75), "zone1"),
}

# parameter sets, phases and expected families of the nine reference orbits
GALLERY = {
    "a": ((-0.27, 0.8), (0.0, 0.0), "t_p"),
    "b": ((-0.3, 0.6), (1.0, 0.0), "t_l"),
    "c": ((-0.2, -0.1), (1.0, 0.0), "t_s'"),
    "d": ((0.5, 2.0), (1.0, 2.0), "t_p"),
    "e": ((0.25, 1.0), (0.0, 0.0), "t_l"),
    "f": ((0.5, 0.5), (1.0, 2.0), "t_s'"),
    "g": ((-0.5, 0.0), (1.0, 0.0), "t_s"),
    "h": ((0.8, 0.2), (1.0, 2.0), "t_ds"),
    "i": ((1.5, 0.2), (1.0, 2.0), "t_mp"),
}

# reference closed orbits: family, fixed h, (p, q), reference g, phases.
# (c) is solved in the t_s region where its root actually lies.
CLOSED_CASES = {
    "a": ("t_p", -0.25, (2, 3), 0.80727, (0.0, 0.0)),
    "b": ("t_l", -0.2, (1, 1), 0.29835, (3.0, 0.0)),
    "c": ("t_s", -0.25, (3, 1), 0.10725, (3.0, -1.0)),
    "d": ("t_p", 0.5, (3, 4), 1.56826, (1.0, 0.0)),
    "e": ("t_l", 0.25, (3, 4), 0.72393, (0.0, 0.0)),
    "f": ("t_s'", 0.3, (2, 1), 0.07292, (3.0, 1.0)),
    "h": ("t_ds", 0.6, (1, 1), 0.23559, (3.0, 0.0)),
    "i": ("t_mp", 1.5, (2, 3), 0.47580, (0.0, 0.0)),
}


def rep_spec(key, p=P):
    (h, g), ph, zone = REPS[key]
    return spec_from_hg(h, g, p, ph, zone=zone)


@pytest.fixture
def params():
    return P


@pytest.fixture(params=sorted(REPS))
def rep(request):
    return request.param, rep_spec(request.param)


# acceptance lines, echoed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
