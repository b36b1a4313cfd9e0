import numpy as np
import pytest

from inflecta.errors import ChartDegenerate, DegenerateFiber, RootFindingFailed, SingularJacobian
from inflecta.polyalg import (
    ProjPoint,
    _fs_pairwise,
    dehomogenize,
    evaluate,
    fermat,
    hesse_member,
    hessian_det,
    klein_symmetric,
    nodal_family,
    two_tuple_base,
)
from inflecta.solver import (
    InflectionSet,
    backward_error,
    cluster,
    expected_count,
    inflection_points,
    is_singular,
    newton_iterate,
    newton_refine,
    point_residuals,
    random_smooth_curve,
    sylvester_resultant,
    univariate_roots,
)


def same_set(A, B, tol):
    D = _fs_pairwise(np.asarray(A), np.asarray(B))
    rows = D.argmin(axis=1)
    return len(set(rows)) == len(A) == len(B) and D.min(axis=1).max() < tol


# -- resultant ------------------------------------------------------------------

def test_resultant_hand_example():
    f = np.zeros((2, 3))
    f[0, 2], f[1, 0] = 1, -1      # y^2 - x
    g = np.zeros((2, 2))
    g[0, 1], g[1, 0] = 1, -1      # y - x
    assert np.allclose(sylvester_resultant(f, g, "y"), [0, -1, 1], atol=1e-14)


def test_resultant_eliminate_x_is_transpose():
    rng = np.random.default_rng(2)
    mask = np.add.outer(np.arange(3), np.arange(3)) <= 2
    f = rng.standard_normal((3, 3)) * mask
    g = rng.standard_normal((3, 3)) * mask
    f[0, 2] = f[2, 0] = g[0, 2] = g[2, 0] = 1.0
    assert np.allclose(sylvester_resultant(f, g, "x"), sylvester_resultant(f.T, g.T, "y"))


def test_resultant_vanishes_only_at_common_roots():
    f = np.zeros((2, 3))
    f[0, 2], f[0, 0] = 1, -1      # y^2 - 1
    g = np.zeros((2, 2))
    g[0, 1], g[1, 0], g[0, 0] = 1, -1, -5   # y - x - 5
    R = sylvester_resultant(f, g, "y")
    # common roots at x = -4 (y=1) and x = -6 (y=-1)
    assert sorted(univariate_roots(R).real.round(10)) == [-6, -4]


def test_resultant_rejects_nonconstant_leading_coefficient():
    f = np.zeros((2, 2))
    f[1, 1] = 1                   # x y
    g = np.zeros((1, 2))
    g[0, 1] = 1
    with pytest.raises(ChartDegenerate):
        sylvester_resultant(f, g, "y")
    with pytest.raises(ValueError):
        sylvester_resultant(f, g, "z")


def test_quartic_resultant_has_degree_24(quartic_base):
    curve, fib = quartic_base
    U = fib.chart_change.matrix
    from inflecta.polyalg import change_coords
    q = change_coords(curve, U)
    R = sylvester_resultant(dehomogenize(q, 3), dehomogenize(hessian_det(q), 3))
    assert len(R) - 1 == 24
    # its roots are the chart-3 x-coordinates of the fiber
    xs = univariate_roots(R, tol=1e-8)
    W = fib.coords() @ np.linalg.inv(U).T
    fx = W[:, 0] / W[:, 2]
    D = np.abs(xs[:, None] - fx[None, :])
    assert D.min(axis=1).max() < 1e-6 * (1 + np.abs(fx).max())


# -- univariate roots -----------------------------------------------------------

def test_roots_of_x2_plus_1():
    r = univariate_roots([1, 0, 1])
    assert np.allclose(sorted(r, key=lambda z: z.imag), [-1j, 1j])


@pytest.mark.parametrize("d", [2, 5, 12, 30])
def test_roots_of_unity(d):
    c = np.zeros(d + 1)
    c[0], c[-1] = -1, 1
    r = univariate_roots(c)
    assert np.allclose(np.abs(r), 1, atol=1e-12)
    assert np.allclose(r ** d, 1, atol=1e-11)
    assert len(np.unique(np.round(np.angle(r), 8))) == d


def test_roots_backward_error():
    c = np.random.default_rng(3).standard_normal(21) + 0j
    r = univariate_roots(c)
    assert backward_error(c, r).max() <= 1e-10


def test_roots_preconditions():
    with pytest.raises(ValueError):
        univariate_roots([3.0])
    with pytest.raises(ValueError):
        univariate_roots([1.0, 1.0, 1e-15])


def test_roots_failure_is_reported():
    c = np.random.default_rng(0).standard_normal(40) + 0j
    with pytest.raises(RootFindingFailed):
        univariate_roots(c, max_iter=1, tol=1e-14)


# -- inflection points ----------------------------------------------------------

def test_expected_counts():
    assert [expected_count(d) for d in (3, 4, 5, 6)] == [9, 24, 45, 72]


def fermat_cubic_points():
    mu = [np.exp(1j * np.pi * (2 * l - 1) / 3) for l in (1, 2, 3)]
    return [p for m in mu for p in ([0, m, 1], [m, 0, 1], [m, 1, 0])]


def test_fermat_cubic_fiber():
    fib = inflection_points(fermat(3), seed=4)
    assert len(fib) == 9
    assert same_set(fib.coords(), fermat_cubic_points(), 1e-10)


@pytest.mark.parametrize("t", [(1, 0.5), (1, -1 + 2j), (0.3, 4), (1j, 1)])
def test_hesse_members_share_base_points(t):
    fib = inflection_points(hesse_member(*t), seed=1)
    assert same_set(fib.coords(), fermat_cubic_points(), 1e-9)


@pytest.mark.parametrize("d", [4, 5])
def test_fermat_is_degenerate(d):
    with pytest.raises(DegenerateFiber):
        inflection_points(fermat(d))


def test_multiple_flexes_are_degenerate():
    with pytest.raises(DegenerateFiber):
        inflection_points(klein_symmetric())
    with pytest.raises(DegenerateFiber):
        inflection_points(two_tuple_base(4, 0))


def test_degree_two_rejected():
    from inflecta.polyalg import HomPoly3
    with pytest.raises(ValueError):
        inflection_points(HomPoly3.from_coeffs(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}))


@pytest.mark.parametrize("d", [3, 4, 5])
def test_fiber_cardinality_and_residuals(d):
    for seed in range(50):
        fib = inflection_points(random_smooth_curve(d, seed), seed=seed)
        assert len(fib) == expected_count(d)
        assert max(fib.residuals) <= 1e-10


def test_degree_six():
    fib = inflection_points(random_smooth_curve(6, 0))
    assert len(fib) == 72 and max(fib.residuals) <= 1e-10


@pytest.mark.parametrize("d", [3, 4, 5])
def test_chart_independence(d):
    curve = random_smooth_curve(d, 9)
    a = inflection_points(curve, seed=1)
    b = inflection_points(curve, seed=2)
    assert not np.allclose(a.chart_change.matrix, b.chart_change.matrix)
    assert same_set(a.coords(), b.coords(), 1e-8)


def test_solve_is_deterministic():
    curve = random_smooth_curve(4, 3)
    a, b = inflection_points(curve, seed=5), inflection_points(curve, seed=5)
    assert np.array_equal(a.coords(), b.coords())


def test_points_satisfy_the_equations(cubic_base):
    curve, fib = cubic_base
    res = point_residuals(curve, hessian_det(curve), fib.coords())
    assert res.max() <= 1e-10
    assert np.allclose(res, fib.residuals)


def test_inflection_set_json(quartic_base):
    _, fib = quartic_base
    back = InflectionSet.from_json(fib.to_json())
    assert np.array_equal(back.coords(), fib.coords())
    assert back.curve.allclose(fib.curve, 0)


# -- Newton ---------------------------------------------------------------------

def test_newton_fixed_point(quartic_base):
    curve, fib = quartic_base
    for p in fib.points[:6]:
        q = newton_refine(curve, p)
        assert np.abs(q.coords - p.coords).max() < 1e-12


def test_newton_quadratic_convergence(quartic_base):
    curve, fib = quartic_base
    rng = np.random.default_rng(0)
    for p in fib.points:
        z = p.coords + 1e-4 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
        q, iters, res = newton_iterate(curve, z)
        assert iters <= 6 and res <= 1e-12
        assert np.abs(q.coords - p.coords).max() < 1e-10


def test_newton_in_every_chart(cubic_base):
    curve, fib = cubic_base
    p = fib.points[0]
    for chart in (1, 2, 3):
        if abs(p.coords[chart - 1]) > 1e-3:
            q = newton_refine(curve, p, chart)
            assert np.abs(q.coords - p.coords).max() < 1e-11


def test_newton_singular_at_two_tuple_point():
    with pytest.raises(SingularJacobian):
        newton_refine(two_tuple_base(4, 0), ProjPoint([0, 0, 1]))


def test_newton_rejects_point_at_infinity():
    with pytest.raises(ValueError):
        newton_refine(fermat(3), ProjPoint([1, 0, 0]), chart=3)


# -- clustering -----------------------------------------------------------------

def test_cluster_examples(cubic_base):
    pts = cubic_base[1].points
    assert cluster(pts, 1e-6) == [[i] for i in range(9)]
    assert cluster(pts, 10.0) == [list(range(9))]
    with pytest.raises(ValueError):
        cluster(pts, 0)
    assert cluster([], 1) == []


def test_cluster_single_linkage():
    pts = [ProjPoint([1, 0, 1]), ProjPoint([1 + 0.05, 0, 1]), ProjPoint([1.1, 0, 1]), ProjPoint([0, 1, 1])]
    assert cluster(pts, 0.04) == [[0, 1, 2], [3]]


# -- singular locus -------------------------------------------------------------

def test_singularity_detection():
    assert is_singular(nodal_family(4, 0, 0.0))
    assert not is_singular(random_smooth_curve(4, 0))
    assert not is_singular(fermat(5))


def test_random_smooth_curve_is_seeded():
    assert random_smooth_curve(4, 11).allclose(random_smooth_curve(4, 11), 0)
    assert not random_smooth_curve(4, 11).allclose(random_smooth_curve(4, 12))


def test_fiber_points_lie_on_curve(cubic_base):
    curve, fib = cubic_base
    assert max(abs(evaluate(curve, p)) for p in fib.points) < 1e-12
