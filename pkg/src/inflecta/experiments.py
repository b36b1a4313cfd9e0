"""Monodromy experiments, certificates and replay.

A certificate stores the base curve, its fiber, and for every loop the
recipe needed to rebuild it (kind, seed, family, radius) together with the
resulting permutation.  The group analysis is a pure function of the stored
permutations, so it can always be recomputed and compared.
"""

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateFiber, MatchAmbiguous, PathCollision, PathFailure, RadiusTooLarge
from .loops import bypass_loop, fermat_spec, nodal_spec, random_loop, two_tuple_spec
from .permgroup import (
    Permutation,
    PermGroup,
    cycle_type,
    is_2_transitive,
    is_transitive,
    lemma_act_check,
)
from .polyalg import curve_from_json, curve_to_json
from .solver import InflectionSet, expected_count, inflection_points, random_smooth_curve
from .tracker import TrackOptions, monodromy_permutation

__all__ = [
    "ExperimentConfig",
    "default_loops",
    "analyze",
    "build_bypass_spec",
    "run_monodromy",
    "replay",
    "ReplayReport",
    "thread_count",
    "loop_seed",
    "TRACKING_ERRORS",
    "FORMAT",
]

FORMAT = "inflecta-certificate/1"
MAX_RETRIES = 3
TRACKING_ERRORS = (PathFailure, PathCollision, MatchAmbiguous)
FAMILIES = ("nodal", "two-tuple", "fermat")


def default_loops(d):
    return 25 if d == 3 else 50


@dataclass
class ExperimentConfig:
    degree: int
    seed: int = 0
    num_random_loops: Optional[int] = None
    bypasses: list = field(default_factory=list)
    bypass_radius: Optional[float] = None
    tolerances: dict = field(default_factory=dict)
    stop_early: bool = True
    replay_sample: int = 2
    out: Optional[str] = None

    def __post_init__(self):
        if self.degree < 3:
            raise ValueError("degree must be at least 3")
        if self.num_random_loops is None:
            self.num_random_loops = default_loops(self.degree)
        if self.num_random_loops < 0 or (self.num_random_loops == 0 and not self.bypasses):
            raise ValueError("need at least one random loop or one bypass")
        for fam in self.bypasses:
            if fam not in FAMILIES:
                raise ValueError(f"unknown bypass family {fam!r}")
        self.track_options()

    def track_options(self):
        return TrackOptions(**self.tolerances)

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, data):
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


def thread_count(default=None):
    env = os.environ.get("INFLECTA_THREADS")
    if env:
        return max(1, int(env))
    return default or min(4, os.cpu_count() or 1)


def loop_seed(seed, index, attempt):
    return int(np.random.SeedSequence([seed, index, attempt]).generate_state(1)[0])


def _target_reached(d, order):
    n = expected_count(d)
    return order == 216 if d == 3 else order == math.factorial(n)


# -- analysis ------------------------------------------------------------------

def analyze(perms, n):
    """Group verdicts computed from the permutations alone."""
    G = PermGroup(perms, n)
    order = G.order()
    out = {
        "degree": n,
        "generators": len(perms),
        "order": str(order),
        "transitive": is_transitive(perms, n),
        "two_transitive": is_2_transitive(perms, n),
        "is_symmetric": order == math.factorial(n),
        "generator_cycle_types": [list(cycle_type(p)) for p in perms],
    }
    transpositions = [p for p in perms if sorted(cycle_type(p)) == [1] * (n - 2) + [2]]
    if n >= 4:
        m1 = (n + 3) // 2
        m1_set = list(range(m1))
        g1 = [Permutation.from_cycles(n, [[0, 1]]), Permutation.from_cycles(n, [m1_set])]
        verdict = lemma_act_check(perms, g1, m1_set, transpositions[0] if transpositions else None,
                                  recorded=perms, n=n)
        out["lemma_act"] = verdict.to_json()
    return out


# -- bypasses ---------------------------------------------------------------------

def build_bypass_spec(family, d, seed=0, radius=None, base_curve=None):
    if family == "nodal":
        spec = nodal_spec(d, seed, radius)
    elif family == "two-tuple":
        spec = two_tuple_spec(d, seed, radius)
    elif family == "fermat":
        spec = fermat_spec(d) if radius is None else fermat_spec(d, radius)
    else:
        raise ValueError(f"unknown bypass family {family!r}")
    if base_curve is not None:
        from .loops import BypassSpec

        spec = BypassSpec(spec.center_curve, spec.direction, spec.radius, spec.circle_steps,
                          base_curve, spec.approach_steps, spec.family, dict(spec.meta))
    return spec


def _make_loop(recipe, base):
    if recipe["kind"] == "random":
        return random_loop(base, recipe["seed"])
    spec = build_bypass_spec(recipe["family"], base.degree, recipe["seed"], recipe["radius"], base)
    return bypass_loop(spec, probe=False)


def _run_recipe(recipe, base, fib, opts):
    loop = _make_loop(recipe, base)
    res = monodromy_permutation(loop, fib, opts)
    return loop, res


def _attempt_random(index, config, base, fib, opts):
    failures = []
    for attempt in range(MAX_RETRIES + 1):
        recipe = {"kind": "random", "index": index, "attempt": attempt,
                  "seed": loop_seed(config.seed, index, attempt)}
        try:
            loop, res = _run_recipe(recipe, base, fib, opts)
        except TRACKING_ERRORS as exc:
            failures.append({"index": index, "attempt": attempt, "error": type(exc).__name__,
                             "message": str(exc)})
            continue
        return recipe, loop, res, failures
    return None, None, None, failures


def _entry(recipe, loop, res):
    p = res.permutation
    return {
        "recipe": recipe,
        "provenance": loop.provenance,
        "waypoints": len(loop.waypoints),
        "permutation": p.to_json(),
        "cycle_type": list(cycle_type(p)),
        "diagnostics": res.diagnostics,
    }


def run_monodromy(config, threads=None, log=None):
    """Build a certificate dictionary for ``config``.

    Random loops are generated in index order; with several threads they
    are evaluated in batches, but results are consumed strictly in index order
    and everything after the stopping point is discarded, so the certificate
    does not depend on the thread count.
    """
    t0 = time.perf_counter()
    d = config.degree
    n = expected_count(d)
    opts = config.track_options()
    base = random_smooth_curve(d, config.seed)
    fib = inflection_points(base, seed=config.seed)
    base = fib.curve
    entries, failures, perms = [], [], []
    threads = threads or thread_count()

    for fam in config.bypasses:
        spec = build_bypass_spec(fam, d, config.seed, config.bypass_radius)
        recipe = {"kind": "bypass", "family": fam, "seed": config.seed, "radius": spec.radius}
        try:
            loop, res = _run_recipe(recipe, base, fib, opts)
        except TRACKING_ERRORS as exc:
            failures.append({"bypass": fam, "error": type(exc).__name__, "message": str(exc)})
            continue
        entries.append(_entry(recipe, loop, res))
        perms.append(res.permutation)
        if log:
            log(f"bypass {fam}: cycle type {cycle_type(res.permutation)}")

    done = False
    index = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while index < config.num_random_loops and not done:
            batch = list(range(index, min(index + threads, config.num_random_loops)))
            results = list(pool.map(lambda i: _attempt_random(i, config, base, fib, opts), batch))
            for i, (recipe, loop, res, fails) in zip(batch, results):
                failures.extend(fails)
                if recipe is not None:
                    entries.append(_entry(recipe, loop, res))
                    perms.append(res.permutation)
                index = i + 1
                if config.stop_early and perms and _target_reached(d, PermGroup(perms, n).order()):
                    done = True
                    break
            if log:
                log(f"random loops: {index}, generators: {len(perms)}")

    analysis = analyze(perms, n) if perms else None
    cert = {
        "format": FORMAT,
        "config": config.to_json(),
        "base_curve": curve_to_json(base),
        "base_fiber": fib.to_json(),
        "loops": entries,
        "failures": failures,
        "random_loops_used": index,
        "analysis": analysis,
        "target_reached": bool(perms) and _target_reached(d, int(analysis["order"])),
        "wall_clock_s": round(time.perf_counter() - t0, 3),
    }
    return cert


def save_certificate(cert, path):
    with open(path, "w") as fh:
        json.dump(cert, fh, indent=1)


def load_certificate(path):
    with open(path) as fh:
        return json.load(fh)


# -- replay -------------------------------------------------------------------------

@dataclass
class ReplayReport:
    ok: bool
    problems: list

    def to_json(self):
        return {"ok": self.ok, "problems": self.problems}


def replay(cert, sample=None, opts=None):
    """Recompute verdicts from stored permutations and re-track a sample of loops."""
    problems = []
    config = ExperimentConfig.from_json(cert["config"])
    n = expected_count(config.degree)
    perms = []
    for i, entry in enumerate(cert["loops"]):
        try:
            p = Permutation(entry["permutation"])
        except ValueError as exc:
            problems.append({"loop": i, "problem": f"invalid permutation: {exc}"})
            continue
        if p.degree != n:
            problems.append({"loop": i, "problem": f"degree {p.degree}, expected {n}"})
            continue
        if list(cycle_type(p)) != entry["cycle_type"]:
            problems.append({"loop": i, "problem": "stored cycle type does not match permutation"})
        perms.append(p)
    if not problems:
        recomputed = analyze(perms, n) if perms else None
        if recomputed != cert["analysis"]:
            problems.append({"loop": None, "problem": "recomputed analysis differs from stored analysis"})
    sample = config.replay_sample if sample is None else sample
    if sample:
        base = curve_from_json(cert["base_curve"])
        fib = InflectionSet.from_json(cert["base_fiber"])
        opts = opts or config.track_options()
        for i, entry in enumerate(cert["loops"][:sample]):
            try:
                _, res = _run_recipe(entry["recipe"], base, fib, opts)
            except (TRACKING_ERRORS + (DegenerateFiber, RadiusTooLarge)) as exc:
                problems.append({"loop": i, "problem": f"re-tracking failed: {exc}"})
                continue
            if res.permutation.to_json() != entry["permutation"]:
                problems.append({"loop": i, "problem": "re-tracked permutation differs"})
    return ReplayReport(not problems, problems)
