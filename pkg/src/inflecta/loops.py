"""Loops in coefficient space: random generating triangles and bypasses.

Paths live in the affine chart of coefficient space that fixes the base
curve's largest coefficient (the base is normalized so that coefficient has
modulus one).  Segment lengths are Euclidean distances of coefficient vectors
in that chart.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateFiber, RadiusTooLarge
from .polyalg import (
    HomPoly3,
    _fs_pairwise,
    fermat,
    fermat_u_family,
    monomial,
    monomials,
    nodal_family,
    random_curve,
    two_tuple_base,
)
from .solver import cluster, inflection_points
from .tracker import CoeffPath

__all__ = [
    "BypassSpec",
    "densify",
    "random_loop",
    "bypass_loop",
    "fermat_points",
    "fermat_bypass_base",
    "local_radius",
    "nodal_spec",
    "two_tuple_spec",
    "fermat_spec",
    "SEGMENT_LENGTH",
    "DEFAULT_RADIUS",
    "CIRCLE_STEPS",
]

SEGMENT_LENGTH = 0.05
DEFAULT_RADIUS = 1e-2
CIRCLE_STEPS = 64
FERMAT_RADIUS = 1e-3
# size of the generic perturbation that resolves the non-reduced j=2 Fermat points
FERMAT_PERTURBATION = 1e-7


def densify(waypoints, max_len=SEGMENT_LENGTH):
    """Insert evenly spaced points so every segment is at most ``max_len`` long."""
    W = [np.asarray(waypoints[0], dtype=complex)]
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
        k = max(1, math.ceil(np.linalg.norm(b - a) / max_len))
        for i in range(1, k):
            W.append(a + (b - a) * (i / k))
        W.append(b)
    return np.array(W)


def _close(W):
    W = np.array(W)
    W[-1] = W[0]
    return W


def random_loop(base, seed, max_len=SEGMENT_LENGTH):
    """Closed triangle base -> R1 -> R2 -> base with seeded random corners.

    The corners share the base's largest coefficient, so the whole loop stays
    in one affine chart of coefficient space.
    """
    base = base.normalized()
    a0 = base.vector()
    pivot = int(np.argmax(np.abs(a0)))
    rng = np.random.default_rng(seed)
    corners = []
    for _ in range(2):
        r = random_curve(base.degree, rng).vector()
        r[pivot] = a0[pivot]
        corners.append(r)
    W = _close(densify([a0, corners[0], corners[1], a0], max_len))
    return CoeffPath(base.degree, W, closed=True, provenance=f"random:{seed}")


@dataclass(frozen=True, eq=False)
class BypassSpec:
    """Small circle around ``center_curve`` in the pencil spanned by ``direction``."""

    center_curve: HomPoly3
    direction: np.ndarray
    radius: float = DEFAULT_RADIUS
    circle_steps: int = CIRCLE_STEPS
    base_curve: Optional[HomPoly3] = None
    approach_steps: int = 0
    family: str = "custom"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.circle_steps < 16:
            raise ValueError("circle_steps must be at least 16")
        v = np.asarray(self.direction, dtype=complex)
        if v.shape != (len(monomials(self.center_curve.degree)),) or not np.any(v):
            raise ValueError("direction must be a nonzero coefficient vector")
        object.__setattr__(self, "direction", v / np.linalg.norm(v))

    def point(self, theta):
        """Coefficient vector center + radius * e^{i theta} * direction."""
        return self.center_curve.vector() + self.radius * np.exp(1j * theta) * self.direction

    def entry(self):
        return self.point(0.0)

    def with_radius(self, radius):
        return BypassSpec(self.center_curve, self.direction, radius, self.circle_steps,
                          self.base_curve, self.approach_steps, self.family, dict(self.meta))


def _probe(spec, seed=0):
    for theta in np.arange(4) * (np.pi / 2) + np.pi / 4:
        curve = HomPoly3.from_vector(spec.center_curve.degree, spec.point(theta))
        try:
            inflection_points(curve, seed=seed)
        except DegenerateFiber as exc:
            raise RadiusTooLarge(f"fiber at probe angle {theta:.3f} is degenerate: {exc}") from exc


def bypass_loop(spec, clockwise=False, probe=True):
    """Closed path: approach segment, a full circle around the center, return.

    Without a ``base_curve`` the loop starts at the entry point of the circle.
    """
    if probe:
        _probe(spec)
    sign = -1.0 if clockwise else 1.0
    thetas = sign * 2 * np.pi * np.arange(spec.circle_steps + 1) / spec.circle_steps
    circle = [spec.point(t) for t in thetas]
    circle[-1] = circle[0]
    if spec.base_curve is None:
        W = np.array(circle)
    else:
        a0 = spec.base_curve.vector()
        if spec.approach_steps > 0:
            approach = [a0 + (circle[0] - a0) * (i / spec.approach_steps) for i in range(spec.approach_steps + 1)]
        else:
            approach = list(densify([a0, circle[0]]))
        approach[-1] = circle[0]
        W = np.array(approach[:-1] + circle + approach[::-1][1:])
        W[-1] = W[0]
    orient = "cw" if clockwise else "ccw"
    return CoeffPath(spec.center_curve.degree, W, closed=True,
                     provenance=f"bypass:{spec.family}:r={spec.radius:g}:{orient}")


# -- pencil specifications --------------------------------------------------

def _direction(d, k, m, n):
    v = np.zeros(len(monomials(d)), dtype=complex)
    v[monomials(d).index((k, m, n))] = 1.0
    return v


def local_radius(center, direction, point, local_count, start=DEFAULT_RADIUS,
                 factor=10.0, min_radius=1e-9, ratio=1 / 3, seed=0):
    """Largest radius start/factor^k at which the circle only sees the local picture.

    At the entry point the ``local_count`` fiber points nearest ``point`` must
    be at least 1/ratio times closer to it than the next one.  Otherwise the
    local points have grown into the rest of the fiber, which signals that
    the circle also encloses another discriminant point of the pencil.
    """
    d = center.degree
    direction = np.asarray(direction, dtype=complex)
    direction = direction / np.linalg.norm(direction)
    target = np.asarray(point, dtype=complex)[None, :]
    r = start
    while r >= min_radius:
        curve = HomPoly3.from_vector(d, center.vector() + r * direction)
        try:
            fib = inflection_points(curve, seed=seed)
        except DegenerateFiber:
            r /= factor
            continue
        dist = np.sort(_fs_pairwise(fib.coords(), target)[:, 0])
        if dist[local_count - 1] <= ratio * dist[local_count]:
            return r
        r /= factor
    raise RadiusTooLarge(f"no radius >= {min_radius:g} isolates the local fiber")


def _scaled(curve):
    return curve.max_abs(), curve.normalized()


def nodal_spec(d=4, seed=0, radius=None, circle_steps=CIRCLE_STEPS):
    """Bypass around t = 0 in the pencil nodal_family(d, seed, t).

    Six inflection points run into the node as t -> 0; without an explicit
    radius the largest one isolating them is chosen.
    """
    s, center = _scaled(nodal_family(d, seed, 0.0))
    direction = _direction(d, 0, 0, d)
    if radius is None:
        radius = local_radius(center, direction, [0, 0, 1], 6)
    return BypassSpec(center, direction, radius, circle_steps,
                      family="nodal", meta={"seed": seed, "scale": s, "special_point": [0, 0, 1],
                                            "local_count": 6})


def two_tuple_spec(d=4, seed=0, radius=None, circle_steps=CIRCLE_STEPS, max_tries=20):
    """Bypass around v = 0 in base + v z2^2 z3^(d-2).

    The base is redrawn until (0,0,1) is its only multiple inflection point:
    a nearby pencil member then has exactly one close pair of inflection
    points, near (0,0,1), and no other pair.
    """
    for attempt in range(max_tries):
        base = two_tuple_base(d, seed + 1000 * attempt)
        if _clean_two_tuple(base, d):
            s, center = _scaled(base)
            direction = _direction(d, 0, 2, d - 2)
            r = radius if radius is not None else local_radius(center, direction, [0, 0, 1], 2)
            return BypassSpec(center, direction, r, circle_steps, family="two-tuple",
                              meta={"seed": seed, "attempt": attempt, "scale": s,
                                    "special_point": [0, 0, 1], "local_count": 2})
    raise RuntimeError("no clean 2-tuple base found")


def _clean_two_tuple(base, d, v=1e-6):
    curve = base + monomial(0, 2, d - 2, v)
    try:
        fib = inflection_points(curve)
    except DegenerateFiber:
        return False
    Z = fib.coords()
    D = _fs_pairwise(Z, Z)
    np.fill_diagonal(D, np.inf)
    close = np.argwhere(np.triu(D < 1e-2))
    if len(close) != 1:
        return False
    target = np.array([0, 0, 1], dtype=complex)
    near = _fs_pairwise(Z[close[0]], target[None, :]).max()
    return bool(near < 1e-2)


def fermat_points(d):
    """The 3d Fermat flexes (0,mu,1), (mu,0,1), (mu,1,0), mu^d = -1, as (j, l, point)."""
    mus = [np.exp(1j * np.pi * (2 * l - 1) / d) for l in range(1, d + 1)]
    out = []
    for l, mu in enumerate(mus, start=1):
        out.append((1, l, np.array([0, mu, 1])))
    for l, mu in enumerate(mus, start=1):
        out.append((2, l, np.array([mu, 0, 1])))
    for l, mu in enumerate(mus, start=1):
        out.append((3, l, np.array([mu, 1, 0])))
    return out


def _fermat_pencil_center(d, perturbation, seed):
    center = fermat(d)
    if perturbation:
        center = center + random_curve(d, np.random.default_rng(seed)) * perturbation
    return center


def fermat_bypass_base(d, u0=FERMAT_RADIUS, seed=0, perturbation=FERMAT_PERTURBATION):
    """Fiber over fermat_u_family(d, u0) (+ a tiny seeded perturbation) with cluster labels.

    For d >= 4 every member of the unperturbed pencil keeps the points on
    z2 = 0 as multiple flexes, so the fiber is only reduced after the
    perturbation.  Labels are (j, l) of the nearest Fermat flex.
    """
    curve = fermat_u_family(d, u0)
    if perturbation:
        curve = curve + random_curve(d, np.random.default_rng(seed)) * perturbation
    fib = inflection_points(curve, seed=seed)
    refs = fermat_points(d)
    R = np.array([p for _, _, p in refs])
    D = _fs_pairwise(fib.coords(), R)
    labels = [refs[i][:2] for i in np.argmin(D, axis=1)]
    return curve, fib, labels


def fermat_spec(d=5, radius=FERMAT_RADIUS, seed=0, perturbation=FERMAT_PERTURBATION,
                circle_steps=CIRCLE_STEPS):
    """Bypass around u = 0 in the pencil fermat(d) + u z1^2 z3^(d-2)."""
    center = _fermat_pencil_center(d, perturbation, seed)
    return BypassSpec(center, _direction(d, 2, 0, d - 2), radius, circle_steps,
                      family="fermat", meta={"seed": seed, "perturbation": perturbation})


def cluster_labels(points, radius=0.1):
    """Cluster index for every point (single linkage in Fubini-Study distance)."""
    groups = cluster(points, radius)
    lab = [0] * len(points)
    for c, g in enumerate(groups):
        for i in g:
            lab[i] = c
    return lab
