"""Inflection points of plane curves, their monodromy, and group certification."""

from .errors import (
    ChartDegenerate,
    DegenerateFiber,
    InflectaError,
    MatchAmbiguous,
    PathCollision,
    PathFailure,
    RadiusTooLarge,
    RootFindingFailed,
    SingularJacobian,
)
from .permgroup import Permutation, PermGroup, compose, cycle_type, group_order, identity, inverse
from .polyalg import CoordChange, HomPoly3, ProjPoint, hessian_det
from .solver import InflectionSet, inflection_points, random_smooth_curve
from .tracker import CoeffPath, TrackOptions, monodromy_permutation, track_path

__all__ = [
    "ChartDegenerate",
    "DegenerateFiber",
    "InflectaError",
    "MatchAmbiguous",
    "PathCollision",
    "PathFailure",
    "RadiusTooLarge",
    "RootFindingFailed",
    "SingularJacobian",
    "Permutation",
    "PermGroup",
    "compose",
    "cycle_type",
    "group_order",
    "identity",
    "inverse",
    "CoordChange",
    "HomPoly3",
    "ProjPoint",
    "hessian_det",
    "InflectionSet",
    "inflection_points",
    "random_smooth_curve",
    "CoeffPath",
    "TrackOptions",
    "monodromy_permutation",
    "track_path",
]

__version__ = "0.1.0"
