"""Exception types shared across the package."""


class SympbError(Exception):
    """Base class for all package errors."""


class NonConvexCurve(SympbError, ValueError):
    """Curve data violates strict convexity or does not enclose the origin."""


class FlatPoint(SympbError):
    """Affine machinery requested on a curve with vanishing curvature."""


class BoundaryChord(SympbError):
    """Chord lies on (or numerically too close to) the boundary of phase space."""


class DegenerateChord(BoundaryChord):
    """Higher-dimensional analogue of :class:`BoundaryChord`."""


class ConvergenceFailure(SympbError):
    """An iterative solver did not reach its tolerance."""


class RootBracketFailure(SympbError):
    """A sign change could not be bracketed along a search line."""


class OmegaOutOfRange(SympbError, ValueError):
    """Round-sphere closed form needs 0 < omega < 1."""


class PolygonMapUndefined(SympbError):
    """Base for the configurations on which the polygon map is undefined.

    ``step`` carries the iteration index at which the orbit terminated,
    when known.
    """

    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


class ParallelSides(PolygonMapUndefined):
    pass


class VertexHit(PolygonMapUndefined):
    pass


class NonGeneric(SympbError, ValueError):
    """Trapezoid ratio is an integer."""
