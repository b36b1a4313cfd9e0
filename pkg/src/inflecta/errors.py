"""Exception types shared across the package."""


class InflectaError(Exception):
    """Base class for all package errors."""


class ChartDegenerate(InflectaError):
    """The working affine chart is unsuitable (leading coefficient vanishes)."""


class RootFindingFailed(InflectaError):
    pass


class DegenerateFiber(InflectaError):
    """The inflection fiber is not a reduced set of 3d(d-2) points.

    This is the expected outcome for curves on (or very near) the discriminant
    locus, so callers treat it as a signal rather than a crash.
    """


class SingularJacobian(InflectaError):
    pass


class PathFailure(InflectaError):
    def __init__(self, message, strand=None):
        super().__init__(message)
        self.strand = strand


class PathCollision(InflectaError):
    def __init__(self, message, strands=None):
        super().__init__(message)
        self.strands = strands


class MatchAmbiguous(InflectaError):
    pass


class RadiusTooLarge(InflectaError):
    pass
