"""Exception hierarchy shared by every conekit module.

Each class corresponds to one error condition of the public operations, so
the command line front end can map exceptions to exit codes one-to-one.
"""


class ConekitError(Exception):
    """Base class for all conekit errors."""


# --- input / validation errors ------------------------------------------


class ParseError(ConekitError):
    """Malformed document, rational literal or field."""


class DuplicateLine(ConekitError):
    """Two lines of an arrangement coincide."""


class WeightOutOfRange(ConekitError):
    """A cone-angle weight is outside the open interval (0, 1)."""


class InvalidGerm(ConekitError):
    """Curve-germ parameters violate their arithmetic constraints."""


class InvalidEigenvalue(ConekitError):
    """Link eigenvalue must be non-negative."""


class InvalidMode(ConekitError):
    """Degenerate separated-mode problem."""


class UnsupportedCone(ConekitError):
    """Operation not defined for this cone kind."""


class NotProduct(ConekitError):
    """Operation requires a product cone."""


class OutOfModel(ConekitError):
    """Angle data outside the range the flat-metric model covers."""


# --- admissibility errors ------------------------------------------------


class NonKlt(ConekitError):
    """Local integrability (klt) condition fails."""


class NotStable(ConekitError):
    """A multiple point is not stable (klt + Troyanov)."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NotGeneric(ConekitError):
    """Arrangement has a point of multiplicity three or more."""


class NotCY(ConekitError):
    """Weights do not satisfy the Calabi-Yau degree condition."""


# --- numerical errors ----------------------------------------------------


class NumericFailure(ConekitError):
    """A numerical routine did not reach its requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class PathTooClose(ConekitError):
    """Integration path passes too close to a non-endpoint cone point."""
