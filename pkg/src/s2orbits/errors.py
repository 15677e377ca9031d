"""Exception hierarchy shared by every module."""


class S2OrbitsError(Exception):
    """Base class for all package errors."""


class InvalidModulus(S2OrbitsError, ValueError):
    """Elliptic parameter m outside [0, 1]."""


class DegenerateModulus(S2OrbitsError, ValueError):
    """Parameter too close to 1 for a finite quarter period."""


class InvalidParameters(S2OrbitsError, ValueError):
    """Physical parameters outside their admissible range."""


class PoleSingularity(S2OrbitsError, ValueError):
    """Point coincides with a force center."""


class ForbiddenRegion(S2OrbitsError):
    """Invariant pair admits no real motion."""


class CriticalCurve(S2OrbitsError):
    """Invariant pair lies on a bifurcation curve."""


class ModulusOutOfRange(S2OrbitsError):
    """Derived elliptic parameter left [0, 1] inside a family region."""


class UnsupportedFamily(S2OrbitsError):
    """No closed-form block exists for the requested family."""


class SingularityEncountered(S2OrbitsError):
    """Numerical trajectory came too close to a force center."""


class ToleranceFailure(S2OrbitsError):
    """A conserved quantity drifted beyond the allowed bound."""


class NoSignChange(S2OrbitsError):
    """Commensurability residual does not change sign in the bracket."""


class ClassExit(S2OrbitsError):
    """Invariant pair left the requested orbit family."""


class ConvergenceFailure(S2OrbitsError):
    """Iterative solver hit its iteration cap."""
