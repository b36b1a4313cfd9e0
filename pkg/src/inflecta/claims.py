"""Registry of checkable claims.

``CLAIMS`` is plain data: a recipe name, its parameters, and expectations.
An expectation ``key: value`` requires ``evidence[key] == value``;
``key_below: value`` requires ``evidence[key] < value``.  Adding a claim
means adding a row (and, if needed, a recipe), never editing the checker.
"""

import math
import time

import numpy as np

from .experiments import ExperimentConfig, build_bypass_spec, run_monodromy
from .loops import bypass_loop, fermat_bypass_base, fermat_points, fermat_spec
from .permgroup import cycle_type, restrict
from .polyalg import (
    CoordChange,
    ProjPoint,
    _fs_pairwise,
    change_coords,
    evaluate,
    fermat_u_family,
    fermat_u_hessian,
    hesse_member,
    hessian_det,
    klein,
)
from .solver import cluster, inflection_points, is_singular
from .tracker import match_points, monodromy_permutation

__all__ = ["CLAIMS", "RECIPES", "verify_claim", "check_expectations"]

_OMEGA = complex(np.exp(2j * np.pi / 3))


def _ones(n):
    return [1] * n


CLAIMS = {
    "THM_MAIN_D3": {
        "description": "cubic monodromy group has order 216 and is 2-transitive on 9 points",
        "recipe": "monodromy",
        "params": {"degree": 3, "seed": 0, "loops": 25},
        "expect": {"order": "216", "transitive": True, "two_transitive": True},
    },
    "THM_MAIN_D4": {
        "description": "quartic monodromy group is the full symmetric group on 24 points",
        "recipe": "monodromy",
        "params": {"degree": 4, "seed": 0, "loops": 50},
        "expect": {"order": str(math.factorial(24)), "is_symmetric": True},
    },
    "NODAL_CYCLES": {
        "description": "bypass around a nodal quartic is two disjoint 3-cycles, generating a group of order 3",
        "recipe": "local_bypass",
        "params": {"family": "nodal", "degree": 4, "seed": 0},
        "expect": {"cycle_type": [3, 3] + _ones(18), "square_cycle_type": [3, 3] + _ones(18),
                   "cube_is_identity": True, "stable_under_halving": True, "clockwise_is_inverse": True},
    },
    "TWO_TUPLE_TRANSPOSITION": {
        "description": "bypass around a quartic with one 2-tuple inflection point is a transposition",
        "recipe": "local_bypass",
        "params": {"family": "two-tuple", "degree": 4, "seed": 0},
        "expect": {"cycle_type": [2] + _ones(22), "stable_under_halving": True,
                   "clockwise_is_inverse": True},
    },
    "FERMAT_CLUSTERS": {
        "description": "near the Fermat quintic the 45 flexes form 15 clusters of 3; the bypass "
                       "preserves them and is a 3-cycle on each j=1 cluster",
        "recipe": "fermat_clusters",
        "params": {"degree": 5, "u0": 1e-3, "radius": 0.1},
        "expect": {"cluster_sizes": [3] * 15, "clusters_match_fermat_points": True,
                   "clusters_preserved": True, "j1_cycle_types": [[3]] * 5,
                   "j1_diameters_shrink": True},
    },
    "HESSE_BASEPOINTS": {
        "description": "smooth members of the Hesse pencil share their 9 inflection points",
        "recipe": "hesse_basepoints",
        "params": {"members": [[1, 0], [1, 1], [1, 6], [2, -1], [1, 1j]]},
        "expect": {"counts": [9] * 5, "max_match_distance_below": 1e-8},
    },
    "HESSE_DEGENERATE": {
        "description": "exactly four members of the Hesse pencil are singular",
        "recipe": "hesse_degenerate",
        "params": {
            "singular": [[0, 1], [1, -3], [1, -3 * _OMEGA], [1, -3 * _OMEGA ** 2]],
            "smooth": [[1, 0], [1, 1], [1, 6], [1, -3.01], [1, 3], [2, 1j], [1, -2.9 * _OMEGA]],
        },
        "expect": {"singular_flags": [True] * 4, "smooth_flags": [False] * 7},
    },
    "KLEIN_COUNT_AND_SYMMETRY": {
        "description": "Klein quartic has 24 simple flexes permuted with order 3 by the cyclic shift",
        "recipe": "klein",
        "params": {},
        "expect": {"count": 24, "permutation_order": 3, "fixed_points_consistent": True},
    },
    "HESSIAN_CURVE2": {
        "description": "Hessian of z1^d+z2^d+z3^d+u z1^2 z3^(d-2) factors in closed form",
        "recipe": "curve2",
        "params": {"degrees": [4, 5, 6], "samples": 5, "seed": 0},
        "expect": {"max_relative_error_below": 1e-12},
    },
    "LEMMA_PI_PROFILE": {
        "description": "bypass cycle types equal the local ramification profiles",
        "recipe": "lemma_pi",
        "params": {"cases": [["nodal", 4, [3, 3]], ["two-tuple", 4, [2]]],
                   "fermat_degree": 5},
        "expect": {"profiles_match": True, "fermat_j1_cycles_in_clusters": True},
    },
}


# -- recipes -----------------------------------------------------------------

def _recipe_monodromy(degree, seed, loops):
    cert = run_monodromy(ExperimentConfig(degree, seed=seed, num_random_loops=loops))
    a = cert["analysis"]
    return {"order": a["order"], "transitive": a["transitive"], "two_transitive": a["two_transitive"],
            "is_symmetric": a["is_symmetric"], "loops_used": cert["random_loops_used"],
            "failures": len(cert["failures"]), "certificate": cert}


def _bypass_perm(spec, clockwise=False):
    loop = bypass_loop(spec, clockwise=clockwise)
    fib = inflection_points(loop.curve_at(0))
    return monodromy_permutation(loop, fib).permutation, fib


def _recipe_local_bypass(family, degree, seed):
    spec = build_bypass_spec(family, degree, seed)
    p, _ = _bypass_perm(spec)
    half, _ = _bypass_perm(spec.with_radius(spec.radius / 2))
    cw, _ = _bypass_perm(spec, clockwise=True)
    return {
        "radius": spec.radius,
        "cycle_type": list(cycle_type(p)),
        "square_cycle_type": list(cycle_type(p * p)),
        "cube_is_identity": (p ** 3).is_identity(),
        "permutation_order": p.order(),
        "half_radius_cycle_type": list(cycle_type(half)),
        "stable_under_halving": cycle_type(half) == cycle_type(p),
        "clockwise_is_inverse": (cw * p).is_identity(),
        "permutation": p.to_json(),
    }


def fermat_labels(points, d):
    refs = fermat_points(d)
    R = np.array([q for _, _, q in refs])
    Z = np.array([p.coords for p in points])
    return [refs[i][:2] for i in np.argmin(_fs_pairwise(Z, R), axis=1)]


def _cluster_diameter(points, idx):
    Z = np.array([points[i].coords for i in idx])
    return float(_fs_pairwise(Z, Z).max())


def _recipe_fermat_clusters(degree, u0, radius, sweep=(1e-2, 1e-3, 1e-4)):
    d = degree
    _, fib, labels = fermat_bypass_base(d, u0)
    groups = cluster(fib.points, radius)
    sizes = sorted(len(g) for g in groups)
    match = all(len({labels[i] for i in g}) == 1 for g in groups) and len(groups) == 3 * d
    spec = fermat_spec(d)
    p, fib2 = _bypass_perm(spec)
    lab2 = fermat_labels(fib2.points, d)
    preserved = all(lab2[p[i]] == lab2[i] for i in range(len(lab2)))
    per_j = {1: [], 2: [], 3: []}
    for j, l in sorted(set(lab2)):
        idx = [i for i, lab in enumerate(lab2) if lab == (j, l)]
        if all(p[i] in idx for i in idx):
            per_j[j].append([c for c in cycle_type(restrict(p, idx)) if c > 1] or [1])
        else:
            per_j[j].append(None)
    diam = []
    for u in sweep:
        _, f, lab = fermat_bypass_base(d, u)
        j1 = [[i for i, x in enumerate(lab) if x == (1, l)] for l in range(1, d + 1)]
        diam.append(max(_cluster_diameter(f.points, g) for g in j1))
    return {
        "cluster_sizes": sizes,
        "clusters_match_fermat_points": match,
        "clusters_preserved": preserved,
        "j1_cycle_types": per_j[1],
        "j2_cycle_types_observed": per_j[2],
        "j3_cycle_types_observed": per_j[3],
        "j1_diameters": dict(zip(map(str, sweep), diam)),
        "j1_diameters_shrink": all(a > b for a, b in zip(diam, diam[1:])),
        "bypass_radius": spec.radius,
        "perturbation": spec.meta["perturbation"],
    }


def _recipe_hesse_basepoints(members):
    fibers = [inflection_points(hesse_member(*m)) for m in members]
    ref = fibers[0]
    worst = 0.0
    for f in fibers[1:]:
        perm = match_points(f.points, ref.points)
        Z = np.array([p.coords for p in f.points])
        R = np.array([ref.points[j].coords for j in perm.images])
        worst = max(worst, float(np.diag(_fs_pairwise(Z, R)).max()))
    return {"counts": [len(f.points) for f in fibers], "max_match_distance": worst}


def _recipe_hesse_degenerate(singular, smooth):
    return {
        "singular_flags": [is_singular(hesse_member(*m)) for m in singular],
        "smooth_flags": [is_singular(hesse_member(*m)) for m in smooth],
    }


def _recipe_klein():
    curve = klein()
    fib = inflection_points(curve)
    A = CoordChange(np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex))
    invariant = change_coords(curve, A).allclose(curve)
    images = [ProjPoint(A.matrix @ p.coords) for p in fib.points]
    perm = match_points(images, fib.points)
    # direct check: fixed points of the shift are (1, w, w^2) for cube roots w
    hess = hessian_det(curve)
    direct = 0
    for k in range(3):
        w = _OMEGA ** k
        pt = ProjPoint([1, w, w * w])
        if abs(evaluate(curve, pt)) < 1e-12 and abs(evaluate(hess, pt)) < 1e-9 * hess.norm1():
            direct += 1
    fixed = sum(1 for i in range(len(perm)) if perm[i] == i)
    return {
        "count": len(fib.points),
        "curve_invariant": invariant,
        "permutation_order": perm.order(),
        "fixed_points": fixed,
        "fixed_points_direct": direct,
        "fixed_points_consistent": fixed == direct,
        "cycle_type": list(cycle_type(perm)),
    }


def _recipe_curve2(degrees, samples, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d in degrees:
        for _ in range(samples):
            u = complex(rng.standard_normal(), rng.standard_normal())
            a = hessian_det(fermat_u_family(d, u))
            b = fermat_u_hessian(d, u)
            worst = max(worst, float(np.abs(a.grid - b.grid).max() / b.max_abs()))
    return {"max_relative_error": worst}


def _recipe_lemma_pi(cases, fermat_degree):
    profiles = {}
    ok = True
    for family, d, profile in cases:
        p, _ = _bypass_perm(build_bypass_spec(family, d))
        observed = sorted((c for c in cycle_type(p) if c > 1), reverse=True)
        profiles[family] = observed
        ok &= observed == sorted(profile, reverse=True)
    d = fermat_degree
    p, fib = _bypass_perm(fermat_spec(d))
    lab = fermat_labels(fib.points, d)
    in_clusters = True
    for l in range(1, d + 1):
        idx = [i for i, x in enumerate(lab) if x == (1, l)]
        if not all(p[i] in idx for i in idx) or cycle_type(restrict(p, idx)) != (d - 2,):
            in_clusters = False
    return {"profiles": profiles, "profiles_match": bool(ok), "fermat_j1_cycles_in_clusters": in_clusters}


RECIPES = {
    "monodromy": _recipe_monodromy,
    "local_bypass": _recipe_local_bypass,
    "fermat_clusters": _recipe_fermat_clusters,
    "hesse_basepoints": _recipe_hesse_basepoints,
    "hesse_degenerate": _recipe_hesse_degenerate,
    "klein": _recipe_klein,
    "curve2": _recipe_curve2,
    "lemma_pi": _recipe_lemma_pi,
}


def check_expectations(evidence, expect):
    """List of (key, expected, observed, passed)."""
    rows = []
    for key, want in expect.items():
        if key.endswith("_below"):
            name = key[: -len("_below")]
            got = evidence.get(name)
            rows.append((key, want, got, got is not None and got < want))
        else:
            got = evidence.get(key)
            rows.append((key, want, got, got == want))
    return rows


def verify_claim(claim_id):
    """Run a registered claim; returns a JSON-ready report with ``passed``."""
    if claim_id not in CLAIMS:
        raise KeyError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIMS)}")
    claim = CLAIMS[claim_id]
    t0 = time.perf_counter()
    evidence = RECIPES[claim["recipe"]](**claim["params"])
    rows = check_expectations(evidence, claim["expect"])
    return {
        "claim": claim_id,
        "description": claim["description"],
        "passed": all(r[3] for r in rows),
        "checks": [{"key": k, "expected": _jsonable(w), "observed": _jsonable(g), "passed": bool(p)}
                   for k, w, g, p in rows],
        "evidence": _jsonable(evidence),
        "seconds": round(time.perf_counter() - t0, 3),
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x
