import numpy as np
import pytest

from inflecta.errors import MatchAmbiguous, PathCollision, PathFailure
from inflecta.loops import random_loop
from inflecta.permgroup import Permutation, compose, identity, inverse
from inflecta.polyalg import ProjPoint, _fs_pairwise, nodal_family
from inflecta.solver import inflection_points
from inflecta.tracker import (
    CoeffPath,
    TrackOptions,
    match_points,
    monodromy_permutation,
    track_path,
)


def test_constant_path_is_identity(cubic_base):
    curve, fib = cubic_base
    loop = CoeffPath(3, [curve.vector()], closed=True)
    assert loop.n_segments == 0
    res = monodromy_permutation(loop, fib)
    assert res.permutation == identity(9)
    assert res.diagnostics["match_distance"] < 1e-12


def test_loop_then_reverse_is_identity(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 3)
    assert monodromy_permutation(L.then(L.reversed()), fib).permutation == identity(9)


def test_inverse_law(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 4)
    p = monodromy_permutation(L, fib).permutation
    q = monodromy_permutation(L.reversed(), fib).permutation
    assert q == inverse(p)


def test_group_law(cubic_base):
    curve, fib = cubic_base
    L, M = random_loop(curve, 5), random_loop(curve, 6)
    pl = monodromy_permutation(L, fib).permutation
    pm = monodromy_permutation(M, fib).permutation
    assert monodromy_permutation(L.then(M), fib).permutation == compose(pm, pl)


def test_oracle_equivalence(quartic_base):
    curve, fib = quartic_base
    res = track_path(random_loop(curve, 1), fib)
    fresh = inflection_points(curve, seed=77)
    E = np.array([p.coords for p in res.end_points])
    D = _fs_pairwise(E, fresh.coords())
    assert len(set(D.argmin(axis=1))) == 24
    assert D.min(axis=1).max() < 1e-8


def test_open_path_tracks_to_the_target_fiber(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 8)
    half = CoeffPath(3, L.waypoints[: L.n_segments // 2 + 1])
    res = track_path(half, fib)
    fresh = inflection_points(half.curve_at(half.n_segments), seed=2)
    D = _fs_pairwise(np.array([p.coords for p in res.end_points]), fresh.coords())
    assert D.min(axis=1).max() < 1e-8


def test_tracking_is_deterministic(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 9)
    a, b = track_path(L, fib), track_path(L, fib)
    assert all(np.array_equal(p.coords, q.coords) for p, q in zip(a.end_points, b.end_points))
    assert a.diagnostics == b.diagnostics


def test_diagnostics_and_trajectories(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 2)
    res = track_path(L, fib, record=True)
    diag = res.diagnostics
    assert diag["segments"] == L.n_segments
    assert diag["steps"] >= L.n_segments
    assert 0 < diag["min_step"] <= 1
    assert diag["min_separation"] > 1e-4
    assert len(res.trajectories) == diag["steps"] + 1
    assert _fs_pairwise(res.trajectories[0], fib.coords()).diagonal().max() < 1e-10


def test_through_the_node_fails():
    d = 4
    a, b = nodal_family(d, 0, -1e-3), nodal_family(d, 0, 1e-3)
    fib = inflection_points(a)
    with pytest.raises((PathCollision, PathFailure)):
        track_path(CoeffPath(d, [a.vector(), b.vector()]), fib)


def test_open_path_is_not_a_loop(cubic_base):
    curve, fib = cubic_base
    path = CoeffPath(3, random_loop(curve, 1).waypoints[:3])
    with pytest.raises(ValueError):
        monodromy_permutation(path, fib)


def test_degree_mismatch(cubic_base, quartic_base):
    with pytest.raises(ValueError):
        track_path(random_loop(quartic_base[0], 0), cubic_base[1])


# -- matching -------------------------------------------------------------------

def points(n, seed=0):
    rng = np.random.default_rng(seed)
    return [ProjPoint(z) for z in rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))]


def test_match_perturbed_is_identity():
    start = points(24)
    end = [ProjPoint(p.coords + 1e-9) for p in start]
    assert match_points(end, start) == identity(24)


def test_match_swap_is_transposition():
    start = points(9)
    end = [start[1], start[0]] + start[2:]
    assert match_points(end, start) == Permutation.from_cycles(9, [(0, 1)])


def test_match_ambiguous():
    start = points(3)
    mid = ProjPoint(start[0].coords)
    with pytest.raises(MatchAmbiguous):
        match_points([mid, mid, start[2]], start)
    a, b = start[0].coords, start[1].coords
    halfway = ProjPoint(a / np.linalg.norm(a) + b / np.linalg.norm(b))
    with pytest.raises(MatchAmbiguous):
        match_points([halfway, start[1], start[2]], start)
    with pytest.raises(MatchAmbiguous):
        match_points(start[:2], start)


# -- data types -----------------------------------------------------------------

def test_coeffpath_invariants(cubic_base):
    v = cubic_base[0].vector()
    with pytest.raises(ValueError):
        CoeffPath(3, [v, v + 1, v + 1])
    with pytest.raises(ValueError):
        CoeffPath(3, [v, v + 1], closed=True)
    with pytest.raises(ValueError):
        CoeffPath(3, [v[:5]])
    with pytest.raises(ValueError):
        CoeffPath(3, np.zeros((0, 10)))
    with pytest.raises(ValueError):
        CoeffPath(3, [v, v + 1]).then(CoeffPath(3, [v + 2, v]))


def test_coeffpath_json_and_length(cubic_base):
    L = random_loop(cubic_base[0], 0)
    back = CoeffPath.from_json(L.to_json())
    assert np.array_equal(back.waypoints, L.waypoints)
    assert back.closed and back.provenance == L.provenance
    assert L.length() == pytest.approx(L.reversed().length())
    assert L.reversed().provenance.endswith("reversed")


def test_track_options_validation():
    with pytest.raises(ValueError):
        TrackOptions(initial_step=1e-10, min_step=1e-9)
    with pytest.raises(ValueError):
        TrackOptions(initial_step=2)
    with pytest.raises(ValueError):
        TrackOptions(max_newton_iters=0)
    o = TrackOptions(newton_tol=1e-10)
    assert TrackOptions.from_json(o.to_json()) == o


def test_finer_options_same_permutation(cubic_base):
    curve, fib = cubic_base
    L = random_loop(curve, 11)
    p = monodromy_permutation(L, fib).permutation
    fine = TrackOptions(initial_step=1e-3, newton_tol=1e-12)
    assert monodromy_permutation(L, fib, fine).permutation == p
    finer_loop = random_loop(curve, 11, max_len=0.01)
    assert monodromy_permutation(finer_loop, fib).permutation == p
