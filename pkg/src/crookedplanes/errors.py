"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for geometric consistency failures."""


class CoordinateError(GeometryError):
    """Input coordinates violate a defining identity or range constraint."""


class EllipticElementError(GeometryError):
    """An operation requiring a non-elliptic isometry received an elliptic
    (or otherwise translation-length-free) element."""

    def __init__(self, message, isometry_class=None):
        super().__init__(message)
        self.isometry_class = isometry_class


class KissingError(GeometryError):
    """A crooked-plane configuration degenerates to planes that touch in a
    point, ray or halfplane.  Carries the offending coefficient names."""

    def __init__(self, message, coefficients=()):
        super().__init__(message)
        self.coefficients = tuple(coefficients)


class DisjointnessUndecidedError(GeometryError):
    """The sufficient disjointness criterion does not apply to this pair of
    crooked planes; the result is indeterminate rather than false."""
