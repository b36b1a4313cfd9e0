"""Homogeneous polynomials in three variables.

A degree-d form is stored as a dense ``(d+1, d+1)`` complex grid where
``grid[k, m]`` is the coefficient of ``z1**k * z2**m * z3**(d-k-m)``.  Entries
with ``k + m > d`` are always zero.  Because the z3 exponent is implied, the
product of two forms is exactly the 2-D convolution of their grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import convolve2d

__all__ = [
    "HomPoly3",
    "ProjPoint",
    "CoordChange",
    "monomials",
    "evaluate",
    "evaluate_many",
    "partial",
    "hessian_det",
    "det3",
    "change_coords",
    "coord_change_matrix",
    "dehomogenize",
    "fs_distance",
    "fermat",
    "klein",
    "klein_symmetric",
    "hesse_member",
    "fermat_u_family",
    "fermat_u_hessian",
    "two_tuple_base",
    "two_tuple_family",
    "nodal_family",
    "random_curve",
    "monomial",
    "curve_to_json",
    "curve_from_json",
]


@lru_cache(maxsize=None)
def monomials(d):
    """Exponent triples of degree ``d`` in graded-lexicographic order."""
    return tuple((k, m, d - k - m) for k in range(d, -1, -1) for m in range(d - k, -1, -1))


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def _mask(d):
    k, m = np.indices((d + 1, d + 1))
    mask = k + m <= d
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def _vector_index(d):
    mons = monomials(d)
    return np.array([e[0] for e in mons]), np.array([e[1] for e in mons])


@dataclass(frozen=True, eq=False)
class HomPoly3:
    degree: int
    grid: np.ndarray

    def __post_init__(self):
        d = int(self.degree)
        if d < 0:
            raise ValueError("degree must be non-negative")
        g = np.array(self.grid, dtype=complex)
        if g.shape != (d + 1, d + 1):
            raise ValueError(f"grid shape {g.shape} does not match degree {d}")
        if np.any(g[~_mask(d)] != 0):
            raise ValueError("exponent triples must sum to the degree")
        g.setflags(write=False)
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "grid", g)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, d):
        return cls(d, np.zeros((d + 1, d + 1), dtype=complex))

    @classmethod
    def from_coeffs(cls, d, coeffs):
        """Build from a mapping ``{(k, m, n): value}``."""
        g = np.zeros((d + 1, d + 1), dtype=complex)
        for (k, m, n), c in coeffs.items():
            if k < 0 or m < 0 or n < 0 or k + m + n != d:
                raise ValueError(f"exponent {(k, m, n)} does not have degree {d}")
            g[k, m] += c
        return cls(d, g)

    @classmethod
    def from_vector(cls, d, vec):
        vec = np.asarray(vec, dtype=complex)
        ks, ms = _vector_index(d)
        if vec.shape != ks.shape:
            raise ValueError(f"expected {ks.size} coefficients, got {vec.shape}")
        g = np.zeros((d + 1, d + 1), dtype=complex)
        g[ks, ms] = vec
        return cls(d, g)

    # -- views ------------------------------------------------------------
    @property
    def coeffs(self):
        return {(k, m, n): complex(self.grid[k, m]) for k, m, n in monomials(self.degree)}

    def vector(self):
        ks, ms = _vector_index(self.degree)
        return self.grid[ks, ms].copy()

    def norm1(self):
        return float(np.abs(self.grid).sum())

    def max_abs(self):
        return float(np.abs(self.grid).max()) if self.grid.size else 0.0

    def is_zero(self):
        return not np.any(self.grid)

    def normalized(self):
        """Scale so that the largest coefficient modulus is one."""
        s = self.max_abs()
        return self if s == 0 else HomPoly3(self.degree, self.grid / s)

    def allclose(self, other, tol=1e-10):
        """Coefficientwise comparison after scaling both by the larger maximum."""
        if self.degree != other.degree:
            return False
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        return bool(np.abs(self.grid - other.grid).max() <= tol * scale)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, HomPoly3):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        return HomPoly3(self.degree, self.grid + other.grid)

    def __sub__(self, other):
        if not isinstance(other, HomPoly3):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("cannot subtract forms of different degree")
        return HomPoly3(self.degree, self.grid - other.grid)

    def __neg__(self):
        return HomPoly3(self.degree, -self.grid)

    def __mul__(self, other):
        if isinstance(other, HomPoly3):
            return HomPoly3(self.degree + other.degree, convolve2d(self.grid, other.grid))
        if isinstance(other, (int, float, complex, np.number)):
            return HomPoly3(self.degree, self.grid * other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n):
        out = HomPoly3.from_coeffs(0, {(0, 0, 0): 1.0})
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        terms = [f"({c.real:.4g}{c.imag:+.4g}j)*z^{e}" for e, c in self.coeffs.items() if c != 0]
        return f"HomPoly3(d={self.degree}, {' + '.join(terms) or '0'})"


def monomial(k, m, n, c=1.0):
    return HomPoly3.from_coeffs(k + m + n, {(k, m, n): c})


def _normalize_coords(z):
    z = np.asarray(z, dtype=complex).reshape(3)
    mod = np.abs(z)
    top = mod.max()
    if top == 0 or not np.isfinite(top):
        raise ValueError("projective point needs a finite nonzero coordinate")
    # first coordinate within rounding of the maximum, so ties break stably
    i = int(np.argmax(mod >= top * (1 - 1e-9)))
    return z / z[i]


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Point of P^2, stored with its largest-modulus coordinate equal to 1."""

    coords: np.ndarray

    def __post_init__(self):
        z = _normalize_coords(self.coords)
        z.setflags(write=False)
        object.__setattr__(self, "coords", z)

    @property
    def chart(self):
        """1-based index of the coordinate that equals one."""
        return int(np.argmax(np.abs(self.coords - 1) == 0)) + 1

    def __iter__(self):
        return iter(self.coords)

    def to_json(self):
        return [[float(c.real), float(c.imag)] for c in self.coords]

    @classmethod
    def from_json(cls, data):
        return cls(np.array([complex(re, im) for re, im in data]))

    def __repr__(self):
        return "ProjPoint(" + ", ".join(f"{c:.6g}" for c in self.coords) + ")"


def fs_distance(p, q):
    """Fubini-Study distance, accurate for nearby points (atan2 form)."""
    a = np.asarray(p.coords if isinstance(p, ProjPoint) else p, dtype=complex)
    b = np.asarray(q.coords if isinstance(q, ProjPoint) else q, dtype=complex)
    return float(_fs_pairwise(a[None, :], b[None, :])[0, 0])


def _fs_pairwise(A, B):
    """Pairwise Fubini-Study distances between rows of A and rows of B."""
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    B = B / np.linalg.norm(B, axis=1, keepdims=True)
    inner = np.abs(A.conj() @ B.T)
    wedge = np.zeros(inner.shape)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        wedge += np.abs(np.outer(A[:, i], B[:, j]) - np.outer(A[:, j], B[:, i])) ** 2
    return np.arctan2(np.sqrt(wedge), inner)


@dataclass(frozen=True, eq=False)
class CoordChange:
    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=complex)
        if a.shape != (3, 3):
            raise ValueError("coordinate change must be 3x3")
        if abs(np.linalg.det(a)) < 1e-6:
            raise ValueError("coordinate change is numerically singular")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    def inverse(self):
        return CoordChange(np.linalg.inv(self.matrix))

    def apply(self, pt):
        """Image A*z of a projective point."""
        return ProjPoint(self.matrix @ pt.coords)

    def to_json(self):
        return [[[float(c.real), float(c.imag)] for c in row] for row in self.matrix]

    @classmethod
    def from_json(cls, data):
        return cls(np.array([[complex(re, im) for re, im in row] for row in data]))


def _powers(z, d):
    return np.power.outer(np.asarray(z, dtype=complex), np.arange(d + 1))


def evaluate_many(p, Z):
    """Evaluate p at each row of an (n, 3) array, taken as given (no rescaling)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    d = p.degree
    P1, P2, P3 = (_powers(Z[:, i], d) for i in range(3))
    k, m = np.indices((d + 1, d + 1))
    n = np.clip(d - k - m, 0, d)
    terms = P1[:, k] * P2[:, m] * P3[:, n] * p.grid
    return terms.reshape(len(Z), -1).sum(axis=1)


def evaluate(p, pt):
    """Value of p at the normalized representative of pt."""
    z = pt.coords if isinstance(pt, ProjPoint) else _normalize_coords(pt)
    return complex(evaluate_many(p, z[None, :])[0])


def partial(p, axis):
    """Partial derivative with respect to z_axis (axis is 1, 2 or 3)."""
    d = p.degree
    if d == 0:
        return HomPoly3.zero(0)
    g = p.grid
    out = np.zeros((d, d), dtype=complex)
    if axis == 1:
        out[:, :] = (np.arange(1, d + 1)[:, None] * g[1:, :d])
    elif axis == 2:
        out[:, :] = (np.arange(1, d + 1)[None, :] * g[:d, 1:])
    elif axis == 3:
        k, m = np.indices((d, d))
        out[:, :] = np.clip(d - k - m, 0, None) * g[:d, :d]
    else:
        raise ValueError("axis must be 1, 2 or 3")
    out[~_mask(d - 1)] = 0
    return HomPoly3(d - 1, out)


def second_partials(p):
    """Symmetric 3x3 nested list of second partial derivatives."""
    first = [partial(p, i) for i in (1, 2, 3)]
    M = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            M[i][j] = M[j][i] = partial(first[i], j + 1)
    return M


def det3(M):
    """Determinant of a 3x3 matrix of forms, by cofactor expansion."""
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def hessian_det(p):
    """Hessian determinant det(d^2 p / dz_i dz_j), a form of degree 3(d-2)."""
    if p.degree < 2:
        raise ValueError("Hessian needs degree >= 2")
    return det3(second_partials(p))


def _as_matrix(A):
    return A.matrix if isinstance(A, CoordChange) else CoordChange(A).matrix


def coord_change_matrix(d, A):
    """Matrix T with T @ p.vector() == change_coords(p, A).vector() for degree d."""
    A = _as_matrix(A)
    lin = [HomPoly3.from_coeffs(1, {(1, 0, 0): A[i, 0], (0, 1, 0): A[i, 1], (0, 0, 1): A[i, 2]})
           for i in range(3)]
    pows = [[HomPoly3.from_coeffs(0, {(0, 0, 0): 1.0})] for _ in range(3)]
    for i in range(3):
        for _ in range(d):
            pows[i].append(pows[i][-1] * lin[i])
    mons = monomials(d)
    T = np.empty((len(mons), len(mons)), dtype=complex)
    for col, (k, m, n) in enumerate(mons):
        T[:, col] = (pows[0][k] * pows[1][m] * pows[2][n]).vector()
    return T


def change_coords(p, A):
    """The form z -> p(A z)."""
    T = coord_change_matrix(p.degree, A)
    return HomPoly3.from_vector(p.degree, T @ p.vector())


def dehomogenize(p, chart):
    """Dense bivariate coefficient array after setting z_chart = 1.

    ``B[i, j]`` multiplies ``u**i * v**j`` where (u, v) are the two remaining
    variables in increasing index order.
    """
    d = p.degree
    g = p.grid
    B = np.zeros((d + 1, d + 1), dtype=complex)
    for k, m, n in monomials(d):
        c = g[k, m]
        if chart == 3:
            B[k, m] = c
        elif chart == 2:
            B[k, n] = c
        elif chart == 1:
            B[m, n] = c
        else:
            raise ValueError("chart must be 1, 2 or 3")
    return B


# -- named curves -----------------------------------------------------------

def fermat(d):
    return HomPoly3.from_coeffs(d, {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1})


def klein():
    """Klein quartic z1^3 z2 + z2^3 z3 + z3^3 z1 (24 simple flexes)."""
    return HomPoly3.from_coeffs(4, {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1})


def klein_symmetric():
    """The six-term quartic sum over i != j of z_i^3 z_j.

    Smooth, but the coordinate points are hyperflexes, so only 21 distinct
    inflection points exist; the fiber is degenerate.
    """
    return HomPoly3.from_coeffs(4, {(3, 1, 0): 1, (3, 0, 1): 1, (1, 3, 0): 1,
                                    (0, 3, 1): 1, (1, 0, 3): 1, (0, 1, 3): 1})


def hesse_member(t1, t2):
    return HomPoly3.from_coeffs(3, {(3, 0, 0): t1, (0, 3, 0): t1, (0, 0, 3): t1, (1, 1, 1): t2})


def fermat_u_family(d, u):
    """z1^d + z2^d + z3^d + u z1^2 z3^(d-2)."""
    if d < 3:
        raise ValueError("degree must be at least 3")
    c = {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}
    c[(2, 0, d - 2)] = c.get((2, 0, d - 2), 0) + u
    return HomPoly3.from_coeffs(d, c)


def fermat_u_hessian(d, u):
    """Closed form of hessian_det(fermat_u_family(d, u)) for d >= 4.

    d(d-1) z2^(d-2) z3^(d-4) H(u, z1, z3) with
    H = (d(d-1) z1^(d-2) + 2u z3^(d-2)) (d(d-1) z3^2 + (d-2)(d-3) u z1^2)
        - 4 (d-2)^2 u^2 z1^2 z3^(d-2).
    """
    if d < 4:
        raise ValueError("closed form needs d >= 4")
    c = d * (d - 1)
    a = monomial(d - 2, 0, 0, c) + monomial(0, 0, d - 2, 2 * u)
    b = monomial(0, 0, 2, c) + monomial(2, 0, 0, (d - 2) * (d - 3) * u)
    H = a * b - monomial(2, 0, d - 2, 4 * (d - 2) ** 2 * u ** 2)
    return monomial(0, d - 2, d - 4, c) * H


def random_curve(d, rng):
    """Form with i.i.d. standard complex Gaussian coefficients."""
    n = len(monomials(d))
    vec = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
    return HomPoly3.from_vector(d, vec)


def two_tuple_base(d, seed):
    """Curve z2^4 R(z2, z3) + z1 S(z1, z2, z3) with R(0,1) = S(0,0,1) = 1.

    (0, 0, 1) is then a 2-tuple inflection point with tangent z1 = 0.  For
    d = 4, R is the constant 1.
    """
    if d < 4:
        raise ValueError("2-tuple inflection points need d >= 4")
    rng = np.random.default_rng(seed)
    c = {}
    r = d - 4
    for m in range(r + 1):
        val = 1.0 if m == 0 else complex(rng.standard_normal(), rng.standard_normal()) / math.sqrt(2)
        c[(0, 4 + m, r - m)] = val  # z2^4 * z2^m z3^(r-m)
    S = random_curve(d - 1, rng).coeffs
    S[(0, 0, d - 1)] = 1.0
    for (k, m, n), val in S.items():
        key = (k + 1, m, n)
        c[key] = c.get(key, 0) + val
    return HomPoly3.from_coeffs(d, c)


def two_tuple_family(d, base, v):
    """base + v z2^2 z3^(d-2)."""
    if base.degree != d:
        raise ValueError("base degree mismatch")
    return base + monomial(0, 2, d - 2, v)


def nodal_family(d, seed, t, max_tries=100):
    """Pencil z1 z2 z3^(d-2) + z3^(d-3) C(z1, z2) + R + t z3^d.

    C is a random binary cubic with both extreme coefficients bounded away
    from zero; R carries random coefficients on every monomial whose z3
    exponent is at most d-4.  At t = 0 the curve has a node at (0, 0, 1).
    """
    if d < 3:
        raise ValueError("degree must be at least 3")
    rng = np.random.default_rng(seed)

    def gauss():
        return complex(rng.standard_normal(), rng.standard_normal()) / math.sqrt(2)

    for _ in range(max_tries):
        cubic = {j: gauss() for j in range(4)}  # coefficient of z1^j z2^(3-j)
        if abs(cubic[3]) > 1e-2 and abs(cubic[0]) > 1e-2:
            break
    else:
        raise RuntimeError("could not draw a nodal curve with a_{3,0,d-3}, a_{0,3,d-3} != 0")
    c = {(1, 1, d - 2): 1.0, (0, 0, d): t}
    for j, val in cubic.items():
        c[(j, 3 - j, d - 3)] = val
    for k, m, n in monomials(d):
        if n <= d - 4:
            c[(k, m, n)] = gauss()
    return HomPoly3.from_coeffs(d, c)


# -- serialization ----------------------------------------------------------

def curve_to_json(p):
    return {
        "degree": p.degree,
        "coeffs": [
            {"k": k, "m": m, "n": n, "re": float(c.real), "im": float(c.imag)}
            for (k, m, n), c in p.coeffs.items()
        ],
    }


def curve_from_json(data):
    d = int(data["degree"])
    return HomPoly3.from_coeffs(
        d, {(int(c["k"]), int(c["m"]), int(c["n"])): complex(c["re"], c["im"]) for c in data["coeffs"]}
    )
