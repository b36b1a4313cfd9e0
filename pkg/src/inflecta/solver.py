"""Inflection points of plane curves by resultant elimination.

The curve and its Hessian are moved into a random unitary chart, the y
variable is eliminated with a numerically interpolated Sylvester resultant,
x-roots are found by Aberth-Ehrlich iteration, y is recovered per root and
every candidate is polished by Newton's method on the pair (F, Hess).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ChartDegenerate, DegenerateFiber, RootFindingFailed, SingularJacobian
from .polyalg import (
    CoordChange,
    HomPoly3,
    ProjPoint,
    _fs_pairwise,
    change_coords,
    curve_from_json,
    curve_to_json,
    dehomogenize,
    evaluate_many,
    hessian_det,
    partial,
    random_curve,
)

log = logging.getLogger(__name__)

SEPARATION = 1e-6
RESIDUAL_TOL = 1e-10
MAX_CHARTS = 4
# neighbours must sit this many conditioned rounding errors apart
CONDITION_SLACK = 1e3


def expected_count(d):
    return 3 * d * (d - 2)


@dataclass(frozen=True, eq=False)
class InflectionSet:
    curve: HomPoly3
    points: list
    residuals: list
    chart_change: CoordChange
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def coords(self):
        return np.array([p.coords for p in self.points])

    def to_json(self):
        return {
            "curve": curve_to_json(self.curve),
            "chart_change": self.chart_change.to_json(),
            "points": [p.to_json() for p in self.points],
            "residuals": [float(r) for r in self.residuals],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            curve=curve_from_json(data["curve"]),
            points=[ProjPoint.from_json(p) for p in data["points"]],
            residuals=[float(r) for r in data["residuals"]],
            chart_change=CoordChange.from_json(data["chart_change"]),
        )


def random_unitary(rng):
    """Haar-random 3x3 unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


# -- bivariate helpers --------------------------------------------------------

def bivar_eval(B, x, y):
    """Evaluate sum B[i, j] x^i y^j at arrays x, y (broadcast)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n0, n1 = B.shape
    X = np.power.outer(x, np.arange(n0))
    Y = np.power.outer(y, np.arange(n1))
    return np.einsum("...i,ij,...j->...", X, B, Y)


def bivar_dx(B):
    return (np.arange(1, B.shape[0])[:, None] * B[1:, :]) if B.shape[0] > 1 else np.zeros((1, B.shape[1]), complex)


def bivar_dy(B):
    return (np.arange(1, B.shape[1])[None, :] * B[:, 1:]) if B.shape[1] > 1 else np.zeros((B.shape[0], 1), complex)


def _deg_in(B, axis):
    nz = np.nonzero(np.any(B != 0, axis=1 - axis))[0]
    return int(nz[-1]) if nz.size else -1


def _total_degree(B):
    i, j = np.nonzero(B)
    return int((i + j).max()) if i.size else -1


# -- resultant ------------------------------------------------------------

def sylvester_resultant(f, g, eliminate="y"):
    """Resultant of two bivariate polynomials with respect to one variable.

    Polynomials are dense arrays ``B[i, j]`` for ``x**i * y**j``.  The result
    is an ascending coefficient array in the remaining variable, obtained by
    evaluating the Sylvester determinant at roots of unity and interpolating
    with an FFT.  The leading coefficients in the eliminated variable must be
    nonzero constants, otherwise ChartDegenerate is raised.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if eliminate == "x":
        f, g = f.T, g.T
    elif eliminate != "y":
        raise ValueError("eliminate must be 'x' or 'y'")
    m, n = _deg_in(f, 1), _deg_in(g, 1)
    if m < 0 or n < 0:
        raise ChartDegenerate("zero polynomial")
    for P, k in ((f, m), (g, n)):
        lead = P[:, k]
        if abs(lead[0]) <= 1e-12 * np.abs(P).max() or np.any(lead[1:] != 0) and \
                np.abs(lead[1:]).max() > 1e-12 * np.abs(P).max():
            raise ChartDegenerate("leading coefficient in the eliminated variable is not a nonzero constant")
    if m == 0 and n == 0:
        return np.array([1.0 + 0j])
    bound = max(m * _deg_in(g, 0) + _deg_in(f, 0) * n, 0)
    # with constant leading coefficients the degree is at most the Bezout number
    bezout = _total_degree(f) * _total_degree(g)
    N = bound + 1
    xs = np.exp(2j * np.pi * np.arange(N) / N)
    vals = np.linalg.det(_sylvester_stack(f, g, m, n, xs)[0])
    coeffs = np.fft.fft(vals) / N
    return coeffs[: min(bound, bezout) + 1]


def _sylvester_stack(f, g, m, n, xs, derivative=False):
    """Sylvester matrices (and optionally their x-derivatives) at each x."""
    P = np.power.outer(xs, np.arange(max(f.shape[0], g.shape[0])))
    fy = P[:, : f.shape[0]] @ f[:, : m + 1]
    gy = P[:, : g.shape[0]] @ g[:, : n + 1]
    size = m + n
    S = np.zeros((len(xs), size, size), dtype=complex)
    # rows hold descending powers of y
    for r in range(n):
        S[:, r, r : r + m + 1] = fy[:, ::-1]
    for r in range(m):
        S[:, n + r, r : r + n + 1] = gy[:, ::-1]
    if not derivative:
        return S, None
    dfy = P[:, : f.shape[0] - 1] @ bivar_dx(f)[:, : m + 1]
    dgy = P[:, : g.shape[0] - 1] @ bivar_dx(g)[:, : n + 1]
    dS = np.zeros_like(S)
    for r in range(n):
        dS[:, r, r : r + m + 1] = dfy[:, ::-1]
    for r in range(m):
        dS[:, n + r, r : r + n + 1] = dgy[:, ::-1]
    return S, dS


def _resultant_aberth(f, g, z, max_iter=100):
    """Aberth iteration on x -> det Syl(x) using R/R' = 1/tr(Syl^-1 Syl').

    Works from the Sylvester matrices directly, so it does not suffer from
    the dynamic range of the monomial coefficients at high degree.
    """
    m, n = _deg_in(f, 1), _deg_in(g, 1)
    z = np.array(z, dtype=complex)
    active = np.ones(len(z), dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        S, dS = _sylvester_stack(f, g, m, n, z[idx], derivative=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            try:
                tr = np.trace(np.linalg.solve(S, dS), axis1=1, axis2=2)
            except np.linalg.LinAlgError:
                tr = np.array([np.trace(np.linalg.lstsq(a, b, rcond=None)[0]) for a, b in zip(S, dS)])
            w = 1.0 / tr
            diff = z[idx, None] - z[None, :]
            diff[np.arange(idx.size), idx] = 1.0
            inv = 1.0 / diff
            inv[np.arange(idx.size), idx] = 0.0
            delta = w / (1 - w * inv.sum(axis=1))
        delta = np.where(np.isfinite(delta), delta, 0)
        z[idx] -= delta
        active[idx] = np.abs(delta) > 1e-14 * (1 + np.abs(z[idx]))
    return z


# -- univariate roots -------------------------------------------------------

def _initial_guesses(c, rng):
    """Starting points from the upper convex hull of (i, log|c_i|)."""
    n = len(c) - 1
    mod = np.abs(c)
    idx = [i for i in range(n + 1) if mod[i] > 0]
    logs = {i: np.log(mod[i]) for i in idx}
    hull = []
    for i in idx:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (logs[b] - logs[a]) * (i - a) <= (logs[i] - logs[a]) * (b - a):
                hull.pop()
            else:
                break
        hull.append(i)
    z = []
    for a, b in zip(hull[:-1], hull[1:]):
        k = b - a
        r = np.exp((logs[a] - logs[b]) / k)
        ang = 2 * np.pi * np.arange(k) / k + 2 * np.pi * a / n + 0.4
        z.extend(r * np.exp(1j * ang))
    z = np.array(z, dtype=complex)
    # small deterministic perturbation breaks residual symmetries
    return z * (1 + 1e-3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)))


def _horner(c, z):
    """p(z), p'(z) for ascending coefficients c."""
    p = np.full(z.shape, c[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def backward_error(c, z):
    """|p(z)| relative to sum |c_i| |z|^i."""
    c = np.asarray(c, dtype=complex)
    z = np.asarray(z, dtype=complex)
    p, _ = _horner(c, z)
    scale, _ = _horner(np.abs(c).astype(complex), np.abs(z).astype(complex))
    return np.abs(p) / np.maximum(scale.real, 1e-300)


def univariate_roots(c, max_iter=500, tol=1e-10):
    """All roots of sum c[i] x^i by Aberth-Ehrlich iteration plus Newton polish.

    The returned roots satisfy ``backward_error(c, root) <= tol``.
    """
    c = np.asarray(c, dtype=complex)
    n = len(c) - 1
    if n < 1:
        raise ValueError("need degree >= 1")
    if abs(c[-1]) <= 1e-12 * np.abs(c).max():
        raise ValueError("leading coefficient is numerically zero")
    if n == 1:
        return np.array([-c[0] / c[1]])
    rng = np.random.default_rng(12345)
    z = _initial_guesses(c, rng)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        p, dp = _horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            delta = w / (1 - w * s)
        delta = np.where(np.isfinite(delta), delta, 0)
        delta[~active] = 0
        z = z - delta
        active &= np.abs(delta) > 1e-15 * (1 + np.abs(z))
        if not active.any():
            break
    # Newton polish, accepting a step only if it reduces the backward error
    err = backward_error(c, z)
    for _ in range(5):
        p, dp = _horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            znew = z - p / dp
        ok = np.isfinite(znew)
        enew = np.where(ok, backward_error(c, np.where(ok, znew, 0)), np.inf)
        better = enew < err
        z = np.where(better, znew, z)
        err = np.where(better, enew, err)
    if not np.all(np.isfinite(z)) or err.max() > tol:
        raise RootFindingFailed(f"Aberth iteration did not converge (max backward error {err.max():.2e})")
    return z


# -- Newton on (F, Hess) in an affine chart ---------------------------------

class _ChartSystem:
    """F and Hess dehomogenized in one chart, with derivative tables."""

    def __init__(self, f, g, df, dg):
        self.f, self.g = f, g
        self.fx, self.fy = bivar_dx(f), bivar_dy(f)
        self.gx, self.gy = bivar_dx(g), bivar_dy(g)
        self.df, self.dg = df, dg
        self.nf, self.ng = np.abs(f).sum(), np.abs(g).sum()

    def residual(self, x, y):
        s = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
        rf = np.abs(bivar_eval(self.f, x, y)) / (self.nf * s ** self.df)
        rg = np.abs(bivar_eval(self.g, x, y)) / (self.ng * s ** self.dg)
        return np.maximum(rf, rg)

    def step(self, x, y):
        F = bivar_eval(self.f, x, y)
        G = bivar_eval(self.g, x, y)
        a, b = bivar_eval(self.fx, x, y), bivar_eval(self.fy, x, y)
        c, d = bivar_eval(self.gx, x, y), bivar_eval(self.gy, x, y)
        det = a * d - b * c
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = (d * F - b * G) / det
            dy = (a * G - c * F) / det
        return dx, dy, self.sigma_min(x, y, (a, b, c, d))

    def sigma_min(self, x, y, jac=None):
        """Smallest singular value of the coefficient-scaled Jacobian.

        Rows are divided by ||F||_1 s^(d-1) and ||Hess||_1 s^(D-1), so the
        value is comparable across curves; its inverse is a condition number.
        """
        x, y = np.atleast_1d(x), np.atleast_1d(y)
        if jac is None:
            jac = (bivar_eval(self.fx, x, y), bivar_eval(self.fy, x, y),
                   bivar_eval(self.gx, x, y), bivar_eval(self.gy, x, y))
        a, b, c, d = jac
        s = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
        r1 = self.nf * s ** max(self.df - 1, 0)
        r2 = self.ng * s ** max(self.dg - 1, 0)
        J = np.empty((len(x), 2, 2), dtype=complex)
        J[:, 0, 0], J[:, 0, 1] = a / r1, b / r1
        J[:, 1, 0], J[:, 1, 1] = c / r2, d / r2
        J = np.where(np.isfinite(J), J, 0)
        return np.linalg.svd(J, compute_uv=False)[:, -1]


def _newton_batch(system, x, y, max_iter=60):
    """Newton until the update stagnates at rounding level."""
    x = np.array(x, dtype=complex)
    y = np.array(y, dtype=complex)
    res = system.residual(x, y)
    live = np.ones(x.shape, dtype=bool)
    iters = np.zeros(x.shape, dtype=int)
    for _ in range(max_iter):
        if not live.any():
            break
        dx, dy, _ = system.step(x[live], y[live])
        ok = np.isfinite(dx) & np.isfinite(dy)
        dx, dy = np.where(ok, dx, 0), np.where(ok, dy, 0)
        xn, yn = x[live] - dx, y[live] - dy
        rn = system.residual(xn, yn)
        idx = np.nonzero(live)[0]
        improve = ok & (rn <= res[idx] * 1.5)
        x[idx[improve]] = xn[improve]
        y[idx[improve]] = yn[improve]
        res[idx[improve]] = rn[improve]
        iters[idx[improve]] += 1
        size = np.abs(dx) + np.abs(dy)
        scale = 1 + np.abs(x[idx]) + np.abs(y[idx])
        done = ~improve | (size <= 1e-15 * scale)
        live[idx[done]] = False
    return x, y, res, iters


def _chart_system(curve, hess, chart):
    return _ChartSystem(dehomogenize(curve, chart), dehomogenize(hess, chart), curve.degree, hess.degree)


def _split_chart(z, chart):
    z = np.asarray(z, dtype=complex)
    rest = [i for i in range(3) if i != chart - 1]
    return z[..., rest[0]] / z[..., chart - 1], z[..., rest[1]] / z[..., chart - 1]


def _join_chart(u, v, chart):
    z = np.ones(np.shape(u) + (3,), dtype=complex)
    rest = [i for i in range(3) if i != chart - 1]
    z[..., rest[0]] = u
    z[..., rest[1]] = v
    return z


def newton_iterate(curve, pt, chart=None, tol=1e-12, max_iter=60, hess=None, sing_tol=1e-8):
    """Refine pt on (F, Hess); returns (point, iterations, residual).

    Raises SingularJacobian if the smallest singular value of the scaled
    Jacobian drops below ``sing_tol`` at any iterate, which is what happens at
    multiple inflection points.
    """
    hess = hessian_det(curve) if hess is None else hess
    z = pt.coords if isinstance(pt, ProjPoint) else np.asarray(pt, dtype=complex)
    chart = chart or int(np.argmax(np.abs(z))) + 1
    if z[chart - 1] == 0:
        raise ValueError("point lies at infinity in the requested chart")
    system = _chart_system(curve, hess, chart)
    u, v = _split_chart(z, chart)
    u, v = np.array([u]), np.array([v])
    res = system.residual(u, v)
    iters = 0
    for _ in range(max_iter):
        du, dv, smin = system.step(u, v)
        if smin[0] < sing_tol:
            raise SingularJacobian(f"Jacobian of (F, Hess) is singular (sigma_min {smin[0]:.2e})")
        un, vn = u - du, v - dv
        rn = system.residual(un, vn)
        if not np.isfinite(rn[0]) or rn[0] > 1.5 * res[0]:
            break
        u, v, res = un, vn, rn
        iters += 1
        if abs(du[0]) + abs(dv[0]) <= 1e-15 * (1 + abs(u[0]) + abs(v[0])):
            break
        if res[0] <= tol * 1e-3:
            break
    if res[0] > tol:
        raise SingularJacobian(f"Newton stalled at residual {res[0]:.2e}")
    return ProjPoint(_join_chart(u[0], v[0], chart)), iters, float(res[0])


def newton_refine(curve, pt, chart=None):
    return newton_iterate(curve, pt, chart)[0]


def point_residuals(curve, hess, Z):
    """max(|F|/||F||_1, |Hess|/||Hess||_1) at normalized representatives."""
    Z = np.asarray(Z, dtype=complex)
    Z = Z / np.take_along_axis(Z, np.argmax(np.abs(Z), axis=1)[:, None], axis=1)
    rf = np.abs(evaluate_many(curve, Z)) / curve.norm1()
    rh = np.abs(evaluate_many(hess, Z)) / max(hess.norm1(), 1e-300)
    return np.maximum(rf, rh)


# -- clustering ---------------------------------------------------------------

def cluster(points, radius):
    """Single-linkage clusters under Fubini-Study distance, as index lists."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = len(points)
    if n == 0:
        return []
    Z = np.array([p.coords if isinstance(p, ProjPoint) else p for p in points])
    D = _fs_pairwise(Z, Z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in zip(*np.nonzero(np.triu(D < radius, 1))):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _dedupe(Z, res, sep):
    order = np.argsort(res, kind="stable")
    kept = []
    for i in order:
        if kept:
            dist = _fs_pairwise(Z[i : i + 1], Z[kept])[0]
            if dist.min() < sep:
                continue
        kept.append(i)
    return kept


def _ill_separated(Z, smin, sep):
    """Count points whose nearest neighbour is within the error they can carry.

    A simple root has forward error about eps/sigma_min; a split multiple root
    shows up as neighbours separated by little more than that.
    """
    D = _fs_pairwise(Z, Z)
    np.fill_diagonal(D, np.inf)
    nearest = D.min(axis=1)
    with np.errstate(divide="ignore"):
        floor = np.maximum(sep, CONDITION_SLACK * np.finfo(float).eps / smin)
    return int(np.count_nonzero(nearest < floor))


def canonical_order(Z):
    """Deterministic ordering of normalized points by rounded coordinates."""
    keys = [tuple(np.round(np.concatenate([z.real, z.imag]), 6)) for z in Z]
    return sorted(range(len(Z)), key=lambda i: keys[i])


def _solve_in_chart(curve, hess, U, expected):
    q = change_coords(curve, U)
    hq = hessian_det(q)
    f = dehomogenize(q, 3)
    g = dehomogenize(hq, 3)
    R = sylvester_resultant(f, g, "y")
    if len(R) - 1 != expected:
        raise ChartDegenerate(f"resultant has degree {len(R) - 1}, expected {expected}")
    try:
        xs = univariate_roots(R)
    except (ValueError, RootFindingFailed):
        # top coefficients lost to rounding (high degree): start from the hull guesses
        xs = _initial_guesses(R, np.random.default_rng(0))
    xs = _resultant_aberth(f, g, xs)
    system = _ChartSystem(f, g, q.degree, hq.degree)
    ys = np.empty_like(xs)
    for i, x in enumerate(xs):
        coeffs = np.power(x, np.arange(f.shape[0])) @ f
        cand = univariate_roots(coeffs[: _deg_in(f, 1) + 1], tol=1e-8)
        r = system.residual(np.full(cand.shape, x), cand)
        ys[i] = cand[np.argmin(r)]
    x, y, res, _ = _newton_batch(system, xs, ys)
    W = _join_chart(x, y, 3)
    Z = W @ U.T
    return Z, point_residuals(curve, hess, Z), system.sigma_min(x, y)


def inflection_points(curve, seed=0, sep=SEPARATION, tol=RESIDUAL_TOL, max_charts=MAX_CHARTS):
    """Compute the 3d(d-2) inflection points of a smooth curve.

    Raises DegenerateFiber when no chart produces the full, well separated
    set with residuals below ``tol``.
    """
    d = curve.degree
    if d < 3:
        raise ValueError("inflection points need degree >= 3")
    expected = expected_count(d)
    curve = curve.normalized()
    hess = hessian_det(curve)
    if hess.is_zero():
        raise DegenerateFiber("Hessian vanishes identically")
    rng = np.random.default_rng(seed)
    reasons = []
    for attempt in range(max_charts):
        U = random_unitary(rng)
        try:
            Z, res, smin = _solve_in_chart(curve, hess, U, expected)
        except (ChartDegenerate, RootFindingFailed) as exc:
            reasons.append(f"chart {attempt}: {exc}")
            continue
        good = np.all(np.isfinite(Z), axis=1)
        Z, res, smin = Z[good], res[good], smin[good]
        kept = _dedupe(Z, res, sep)
        Z, res, smin = Z[kept], res[kept], smin[kept]
        Z = Z / np.take_along_axis(Z, np.argmax(np.abs(Z) >= np.abs(Z).max(axis=1, keepdims=True) * (1 - 1e-9), axis=1)[:, None], axis=1)
        if len(Z) != expected:
            reasons.append(f"chart {attempt}: {len(Z)} distinct points, expected {expected}")
            continue
        if res.max() > tol:
            reasons.append(f"chart {attempt}: residual {res.max():.2e} exceeds {tol:.0e}")
            continue
        bad = _ill_separated(Z, smin, sep)
        if bad:
            reasons.append(f"chart {attempt}: {bad} points closer than their conditioning allows")
            continue
        order = canonical_order(Z)
        return InflectionSet(
            curve=curve,
            points=[ProjPoint(Z[i]) for i in order],
            residuals=[float(res[i]) for i in order],
            chart_change=CoordChange(U),
            meta={"chart_attempts": attempt + 1},
        )
    raise DegenerateFiber("; ".join(reasons))


def random_smooth_curve(d, seed, max_tries=20):
    """Seeded random curve whose inflection fiber solves cleanly."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        curve = random_curve(d, rng).normalized()
        try:
            inflection_points(curve, seed=seed)
        except DegenerateFiber:
            continue
        return curve
    raise DegenerateFiber(f"no clean random curve of degree {d} in {max_tries} draws")


# -- singular points ------------------------------------------------------------

def singular_points(curve, seed=0, tol=1e-8):
    """Points where all three partials vanish.

    Returns ``None`` when two partials share a component in every chart
    tried; that can only happen for singular curves (see is_singular).
    """
    d = curve.degree
    curve = curve.normalized()
    rng = np.random.default_rng(seed)
    for _ in range(MAX_CHARTS):
        U = random_unitary(rng)
        q = change_coords(curve, U)
        p1, p2, p3 = (partial(q, i) for i in (1, 2, 3))
        f, g = dehomogenize(p1, 3), dehomogenize(p2, 3)
        try:
            R = sylvester_resultant(f, g, "y")
        except ChartDegenerate:
            continue
        if np.abs(R).max() <= 1e-9 * np.abs(f).sum() * np.abs(g).sum() or len(R) <= 1 and d > 1:
            return None
        xs = univariate_roots(R, tol=1e-8)
        cand_x, cand_y = [], []
        for x in xs:
            cy = np.power(x, np.arange(f.shape[0])) @ f
            cy = cy[: _deg_in(f, 1) + 1]
            if len(cy) < 2:
                continue
            for y in univariate_roots(cy, tol=1e-8):
                cand_x.append(x)
                cand_y.append(y)
        system = _ChartSystem(f, g, d - 1, d - 1)
        x, y, _, _ = _newton_batch(system, np.array(cand_x), np.array(cand_y))
        out = []
        for xi, yi in zip(x, y):
            w = np.array([xi, yi, 1.0])
            w = w / np.abs(w).max()
            vals = [abs(evaluate_many(pp, w[None, :])[0]) / max(pp.norm1(), 1e-300) for pp in (p1, p2, p3)]
            if max(vals) < tol:
                out.append(ProjPoint(U @ w))
        kept = []
        for p in out:
            if all(_fs_pairwise(p.coords[None], k.coords[None])[0, 0] > 1e-5 for k in kept):
                kept.append(p)
        return kept
    raise ChartDegenerate("no usable chart for the singular-point solve")


def is_singular(curve, seed=0):
    pts = singular_points(curve, seed=seed)
    return pts is None or len(pts) > 0
