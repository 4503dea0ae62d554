"""Exception types shared across the package."""


class ConelabError(Exception):
    """Base class for all package errors."""


class MeshError(ConelabError):
    """Invalid simplicial complex topology or geometry."""


class ChainError(ConelabError):
    """Invalid chain data or operation."""


class FlatNormError(ConelabError):
    """Flat-distance solve failed (unbounded, stalled, or bad instance)."""


class ConeSpecError(ConelabError):
    """Invalid boundary-cone description."""


class DecompositionError(ConelabError):
    """A 1-current could not be decomposed as requested.

    Carries the offending cycle (a point polyline) when the failure is an
    unmatchable cycle.
    """

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class AdmissibilityError(ConelabError):
    """A perturbed cross-section violates an admissibility condition."""

    def __init__(self, message, condition=None, value=None):
        super().__init__(message)
        self.condition = condition
        self.value = value


class StraighteningError(ConelabError):
    """Straightening map could not be built or inverted."""


class FitError(ConelabError):
    """A numerical fit did not converge to the requested residual."""
