"""Exception hierarchy.

Domain errors (bad geometry, degenerate inputs) derive from ``BeqError`` and map to
CLI exit code 2; I/O and schema problems use ``SchemaError`` and map to exit code 1.
"""


class BeqError(Exception):
    """Base class for domain errors."""


class PoleProximityError(BeqError):
    pass


class DegenerateOrigin(BeqError):
    """B'(0) vanishes, so the critical points are not well separated from 0."""


class RootFindFailure(BeqError):
    pass


class ClassificationError(BeqError):
    """A critical point could not be placed strictly inside or outside the circle."""


class BranchSwapError(BeqError):
    pass


class PoleError(BeqError):
    pass


class AtomAtInfinity(BeqError):
    pass


class InfiniteConstant(BeqError):
    pass


class MeasureError(BeqError):
    """Measure violates a precondition (total mass, support)."""


class SymmetryViolation(BeqError):
    pass


class ExceptionalConfiguration(BeqError):
    def __init__(self, report, message=None):
        self.report = report
        if message is None:
            message = "configuration lies in the exceptional set: " + ", ".join(
                r.describe() for r in report.reasons
            )
        super().__init__(message)


class InfinityPresent(BeqError):
    """A line configuration contains the point at infinity; use energy_V_with_infinity."""


class InterpolationFailure(BeqError):
    pass


class DegenerateOutput(BeqError):
    """Every candidate interpolant has B'(0) = 0."""


class CurveMismatch(BeqError):
    pass


class SchemaError(ValueError):
    """Malformed problem document."""
