"""Closed-form orbits for two fixed Newtonian centers on the sphere."""

from .bifurcation import (BranchPoints, OrbitClass, branch_points, classify, classify_grid,
                          classify_hg, critical_curves)
from .closed_orbits import CommensurabilityProblem, residual, solve
from .elliptic import complete_K, incomplete_F, jacobi_sn_cn_dn
from .errors import *  # noqa: F401,F403
from .geometry import (PlanarElliptic, ProblemParams, SpherePoint, SpheroConical,
                       cartesian_to_spheroconical, elliptic_drop, elliptic_lift,
                       gnomonic_project, local_time_scale, spheroconical_to_cartesian)
from .invariants import (CartesianState, InvariantPair, from_planar, from_spherical,
                         hamiltonian, second_invariant, to_planar)
from .oracle import (IntegratorConfig, compare_to_analytic, integrate_cartesian,
                     integrate_separated)
from .orbit_engine import (OrbitSpec, SphereSample, build_spec, evaluate, periods,
                           physical_time, sample, spec_from_hg)

__version__ = "0.1.0"
