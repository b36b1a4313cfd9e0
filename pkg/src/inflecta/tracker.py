"""Continuation of the inflection fiber along paths in coefficient space.

All strands advance with one shared step in the segment parameter s, which
keeps the run deterministic and lets collisions be checked at every accepted
step.  Along a linear segment a(s) = a0 + s*da the curve is linear in s and
its Hessian is an exact cubic in s, so the parameter derivatives used by the
predictor are exact.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import convolve

from .errors import MatchAmbiguous, PathCollision, PathFailure
from .permgroup import Permutation
from .polyalg import (
    HomPoly3,
    ProjPoint,
    _fs_pairwise,
    coord_change_matrix,
    dehomogenize,
    monomials,
    second_partials,
)
from .solver import (
    _ChartSystem,
    _join_chart,
    _newton_batch,
    bivar_eval,
)

__all__ = [
    "CoeffPath",
    "TrackOptions",
    "TrackResult",
    "track_path",
    "match_points",
    "monodromy_permutation",
    "COLLISION_DISTANCE",
]

COLLISION_DISTANCE = 1e-4
CHART_ESCAPE = 1e6


@dataclass(frozen=True, eq=False)
class CoeffPath:
    """Piecewise-linear path through coefficient vectors (monomials() order).

    A single waypoint is the constant path.
    """

    degree: int
    waypoints: np.ndarray
    closed: bool = False
    provenance: str = ""

    def __post_init__(self):
        W = np.array(self.waypoints, dtype=complex)
        if W.ndim != 2 or W.shape[1] != len(monomials(self.degree)) or len(W) == 0:
            raise ValueError("waypoints must be a non-empty (k, n_monomials) array")
        if len(W) > 1 and np.any(np.all(W[1:] == W[:-1], axis=1)):
            raise ValueError("consecutive waypoints must differ")
        if self.closed and len(W) > 1 and not np.array_equal(W[0], W[-1]):
            raise ValueError("closed path must end exactly where it starts")
        W.setflags(write=False)
        object.__setattr__(self, "waypoints", W)

    @property
    def n_segments(self):
        return len(self.waypoints) - 1

    def curve_at(self, i):
        return HomPoly3.from_vector(self.degree, self.waypoints[i])

    def reversed(self):
        return CoeffPath(self.degree, self.waypoints[::-1], self.closed, _tag(self.provenance, "reversed"))

    def then(self, other):
        """This path followed by ``other``; the join must match bitwise."""
        if other.degree != self.degree or not np.array_equal(self.waypoints[-1], other.waypoints[0]):
            raise ValueError("paths do not join")
        W = np.concatenate([self.waypoints, other.waypoints[1:]])
        closed = self.closed and other.closed
        return CoeffPath(self.degree, W, closed, f"{self.provenance}+{other.provenance}")

    def length(self):
        return float(np.linalg.norm(np.diff(self.waypoints, axis=0), axis=1).sum())

    def to_json(self):
        return {
            "degree": self.degree,
            "closed": self.closed,
            "provenance": self.provenance,
            "waypoints": [[[float(c.real), float(c.imag)] for c in w] for w in self.waypoints],
        }

    @classmethod
    def from_json(cls, data):
        W = np.array([[complex(re, im) for re, im in w] for w in data["waypoints"]])
        return cls(int(data["degree"]), W, bool(data["closed"]), data.get("provenance", ""))


def _tag(prov, suffix):
    return f"{prov}:{suffix}" if prov else suffix


@dataclass(frozen=True)
class TrackOptions:
    initial_step: float = 1e-2
    min_step: float = 1e-9
    newton_tol: float = 1e-11
    max_newton_iters: int = 8
    step_expand: float = 2.0
    step_contract: float = 0.5
    max_steps: int = 200_000
    expand_after: int = 4

    def __post_init__(self):
        if not 0 < self.min_step < self.initial_step <= 1:
            raise ValueError("need 0 < min_step < initial_step <= 1")
        if self.max_newton_iters < 1 or self.max_steps < 1:
            raise ValueError("iteration limits must be positive")

    def to_json(self):
        return dict(self.__dict__)

    @classmethod
    def from_json(cls, data):
        return cls(**data)


@dataclass
class TrackResult:
    end_points: list
    diagnostics: dict = field(default_factory=dict)
    permutation: Optional[Permutation] = None
    trajectories: Optional[list] = None


def _hessian_cubic(q0, qd):
    """Hess(q0 + s*qd) as four forms, the coefficients of s^0 .. s^3.

    Each second partial is linear in s, so the entries are stored as
    (2, D+1, D+1) arrays indexed by (power of s, k, m) and the determinant is
    expanded with exact 3-D convolutions.
    """
    M0, M1 = second_partials(q0), second_partials(qd)
    E = [[np.stack([M0[i][j].grid, M1[i][j].grid]) for j in range(3)] for i in range(3)]

    def mul(a, b):
        return convolve(a, b, method="direct")

    det = (mul(E[0][0], mul(E[1][1], E[2][2]) - mul(E[1][2], E[2][1]))
           - mul(E[0][1], mul(E[1][0], E[2][2]) - mul(E[1][2], E[2][0]))
           + mul(E[0][2], mul(E[1][0], E[2][1]) - mul(E[1][1], E[2][0])))
    D = 3 * (q0.degree - 2)
    return [HomPoly3(D, det[k]) for k in range(4)]


class _Segment:
    """Chart-3 tables of F and Hess along one linear segment, as polynomials in s."""

    def __init__(self, T, a0, a1, d):
        q0 = HomPoly3.from_vector(d, T @ a0)
        qd = HomPoly3.from_vector(d, T @ (a1 - a0))
        self.f = [dehomogenize(q0, 3), dehomogenize(qd, 3)]
        cubic = _hessian_cubic(q0, qd)
        self.g = [dehomogenize(h, 3) for h in cubic]
        self.df, self.dg = d, 3 * (d - 2)

    def system(self, s):
        f = self.f[0] + s * self.f[1]
        g = ((self.g[3] * s + self.g[2]) * s + self.g[1]) * s + self.g[0]
        return _ChartSystem(f, g, self.df, self.dg)

    def velocity(self, s, x, y):
        Fs = bivar_eval(self.f[1], x, y)
        Gs = bivar_eval((3 * self.g[3] * s + 2 * self.g[2]) * s + self.g[1], x, y)
        return Fs, Gs


def _jacobian(system, x, y):
    return (bivar_eval(system.fx, x, y), bivar_eval(system.fy, x, y),
            bivar_eval(system.gx, x, y), bivar_eval(system.gy, x, y))


def _tangent(seg, s, x, y):
    system = seg.system(s)
    a, b, c, d = _jacobian(system, x, y)
    Fs, Gs = seg.velocity(s, x, y)
    det = a * d - b * c
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = -(d * Fs - b * Gs) / det
        ys = -(a * Gs - c * Fs) / det
    return xs, ys


def _nearest_gap(x, y):
    P = np.stack([x, y], axis=1)
    D = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2)
    np.fill_diagonal(D, np.inf)
    return D.min(axis=1)


def _fs_min_pair(x, y):
    Z = _join_chart(x, y, 3)
    D = _fs_pairwise(Z, Z)
    np.fill_diagonal(D, np.inf)
    i, j = np.unravel_index(np.argmin(D), D.shape)
    return float(D[i, j]), (int(min(i, j)), int(max(i, j)))


def _correct(seg, s, x, y, opts, gap):
    """Newton at fixed s.  Returns (x, y, ok) with ok per strand."""
    system = seg.system(s)
    ok = np.ones(x.shape, dtype=bool)
    conv = np.zeros(x.shape, dtype=bool)
    prev = None
    for it in range(opts.max_newton_iters):
        dx, dy, _ = system.step(x, y)
        size = np.sqrt(np.abs(dx) ** 2 + np.abs(dy) ** 2)
        bad = ~np.isfinite(size)
        if it == 0:
            # a large first correction means the predictor landed near another strand
            bad |= size > 0.25 * gap
        else:
            bad |= (size > 0.5 * prev) & (size > 1e-13 * (1 + np.abs(x) + np.abs(y)))
        ok &= ~(bad & ~conv)
        step = ok & ~conv
        x = np.where(step, x - np.where(bad, 0, dx), x)
        y = np.where(step, y - np.where(bad, 0, dy), y)
        prev = size
        conv |= ok & (system.residual(x, y) < opts.newton_tol)
        if np.all(conv | ~ok):
            break
    return x, y, ok & conv


def track_path(path, start, opts=None, record=False):
    """Continue every point of ``start`` along ``path``.

    ``end_points[i]`` is where the strand starting at ``start.points[i]``
    arrives.  Raises PathFailure when a strand cannot be continued and
    PathCollision when two strands meet.
    """
    opts = opts or TrackOptions()
    d = path.degree
    if start.curve.degree != d:
        raise ValueError("degree mismatch between path and start fiber")
    U = start.chart_change.matrix
    T = coord_change_matrix(d, U)
    Z = start.coords() @ np.linalg.inv(U).T
    with np.errstate(divide="ignore", invalid="ignore"):
        x, y = Z[:, 0] / Z[:, 2], Z[:, 1] / Z[:, 2]
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise PathFailure("start point at infinity in the solve chart")
    W = path.waypoints
    diag = {"steps": 0, "rejected": 0, "min_step": 1.0, "segments": path.n_segments,
            "min_separation": float("inf")}
    traj = [np.stack([x, y], axis=1) @ U[:, :2].T + U[:, 2]] if record else None
    h = opts.initial_step
    accepted_run = 0
    for k in range(path.n_segments):
        seg = _Segment(T, W[k], W[k + 1], d)
        if k == 0:
            x, y, _, _ = _newton_batch(seg.system(0.0), x, y)
        s = 0.0
        while s < 1.0:
            if diag["steps"] >= opts.max_steps:
                raise PathFailure(f"step budget {opts.max_steps} exhausted")
            hh = min(h, 1.0 - s)
            gap = _nearest_gap(x, y)
            xs, ys = _tangent(seg, s, x, y)
            xp, yp = x + hh * xs, y + hh * ys
            xn, yn, ok = _correct(seg, s + hh, xp, yp, opts, gap)
            if not ok.all():
                diag["rejected"] += 1
                accepted_run = 0
                h = hh * opts.step_contract
                if h < opts.min_step:
                    strand = int(np.nonzero(~ok)[0][0])
                    raise PathFailure(f"step underflow at segment {k}, s={s:.6g}", strand=strand)
                continue
            big = np.maximum(np.abs(xn), np.abs(yn)) > CHART_ESCAPE
            if big.any():
                raise PathFailure("strand left the tracking chart", strand=int(np.nonzero(big)[0][0]))
            x, y, s = xn, yn, (1.0 if hh == 1.0 - s else s + hh)
            diag["steps"] += 1
            diag["min_step"] = min(diag["min_step"], hh)
            dist, pair = _fs_min_pair(x, y)
            diag["min_separation"] = min(diag["min_separation"], dist)
            if dist < COLLISION_DISTANCE:
                raise PathCollision(f"strands {pair} within {dist:.2e} at segment {k}", strands=pair)
            if record:
                traj.append(np.stack([x, y], axis=1) @ U[:, :2].T + U[:, 2])
            accepted_run += 1
            if accepted_run >= opts.expand_after:
                h = min(1.0, hh * opts.step_expand)
                accepted_run = 0
        if k == path.n_segments - 1:
            x, y, _, _ = _newton_batch(seg.system(1.0), x, y)
    Zc = _join_chart(x, y, 3) @ U.T
    ends = [ProjPoint(z) for z in Zc]
    result = TrackResult(ends, diag)
    if record:
        result.trajectories = traj
    return result


def match_points(end, start, ratio=10.0):
    """Permutation p with end[i] closest to start[p[i]], checked to be unambiguous."""
    if len(end) != len(start):
        raise MatchAmbiguous("point sets differ in size")
    E = np.array([p.coords if isinstance(p, ProjPoint) else p for p in end], dtype=complex)
    S = np.array([p.coords if isinstance(p, ProjPoint) else p for p in start], dtype=complex)
    D = _fs_pairwise(E, S)
    images = []
    for i, row in enumerate(D):
        order = np.argsort(row, kind="stable")
        if len(row) > 1 and row[order[1]] < ratio * row[order[0]]:
            raise MatchAmbiguous(f"end point {i} has no clear nearest start point")
        images.append(int(order[0]))
    if len(set(images)) != len(images):
        raise MatchAmbiguous("nearest-neighbour matching is not a bijection")
    return Permutation(images)


def monodromy_permutation(loop, base, opts=None):
    """Track the closed ``loop`` from ``base`` and match endpoints back to it."""
    if not loop.closed:
        raise ValueError("monodromy needs a closed path")
    result = track_path(loop, base, opts)
    perm = match_points(result.end_points, base.points)
    D = _fs_pairwise(np.array([p.coords for p in result.end_points]),
                     np.array([base.points[j].coords for j in perm.images]))
    result.diagnostics["match_distance"] = float(np.diag(D).max()) if len(D) else 0.0
    result.permutation = perm
    return result
