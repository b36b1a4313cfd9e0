"""Command-line entry point: ``inflecta solve|monodromy|bypass|verify|replay``.

Exit codes: 0 pass, 1 usage error, 2 claim or replay failure,
3 degenerate fiber, 4 tracking failure.
"""

import argparse
import csv
import json
import logging
import sys

import numpy as np

from .errors import DegenerateFiber, MatchAmbiguous, PathCollision, PathFailure, RadiusTooLarge
from .experiments import (
    ExperimentConfig,
    build_bypass_spec,
    load_certificate,
    replay,
    run_monodromy,
    save_certificate,
)
from .loops import bypass_loop
from .permgroup import cycle_type
from .polyalg import curve_from_json, fermat, hesse_member, klein
from .solver import inflection_points, random_smooth_curve
from .tracker import match_points, track_path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_DEGENERATE = 3
EXIT_TRACKING = 4

log = logging.getLogger("inflecta")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj, out):
    text = json.dumps(obj, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {out}")
    else:
        print(text)


def _load_curve(args):
    name = args.curve
    if name is None or name == "random":
        return random_smooth_curve(args.degree, args.seed)
    if name == "fermat":
        return fermat(args.degree)
    if name == "klein":
        return klein()
    if name == "hesse":
        return hesse_member(1.0, 1.0)
    with open(name) as fh:
        return curve_from_json(json.load(fh))


def cmd_solve(args):
    curve = _load_curve(args)
    fib = inflection_points(curve, seed=args.seed)
    data = fib.to_json()
    data["count"] = len(fib.points)
    _emit(data, args.out)
    return EXIT_OK


def _config_from_args(args):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    for key, val in (("degree", args.degree), ("seed", args.seed), ("num_random_loops", args.loops),
                     ("bypass_radius", args.radius), ("out", args.out)):
        if val is not None:
            data[key] = val
    if args.family:
        data["bypasses"] = list(args.family)
    if "degree" not in data:
        raise ValueError("--degree is required (or a config file with a degree)")
    return ExperimentConfig.from_json(data)


def cmd_monodromy(args):
    config = _config_from_args(args)
    cert = run_monodromy(config, log=log.info)
    a = cert["analysis"]
    if config.out:
        save_certificate(cert, config.out)
        print(f"wrote {config.out}")
    if a is None:
        print("no loop could be tracked", file=sys.stderr)
        return EXIT_TRACKING
    print(json.dumps({k: a[k] for k in ("order", "transitive", "two_transitive", "is_symmetric")}))
    if config.num_random_loops > 0 and not cert["target_reached"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_bypass(args):
    spec = build_bypass_spec(args.family, args.degree, args.seed, args.radius)
    loop = bypass_loop(spec)
    fib = inflection_points(loop.curve_at(0), seed=args.seed)
    result = track_path(loop, fib, record=bool(args.csv))
    perm = match_points(result.end_points, fib.points)
    report = {
        "family": args.family,
        "degree": args.degree,
        "radius": spec.radius,
        "permutation": perm.to_json(),
        "cycle_type": list(cycle_type(perm)),
        "diagnostics": result.diagnostics,
    }
    if args.csv:
        _write_trajectories(args.csv, result.trajectories)
    _emit(report, args.out)
    return EXIT_OK


def _write_trajectories(path, traj):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "strand", "z1_re", "z1_im", "z2_re", "z2_im", "z3_re", "z3_im"])
        for step, Z in enumerate(traj):
            for strand, z in enumerate(Z):
                z = z / z[np.argmax(np.abs(z))]
                w.writerow([step, strand] + [f"{v:.12g}" for c in z for v in (c.real, c.imag)])


def _write_diameters(path, diameters):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["abs_u", "max_j1_cluster_diameter"])
        for u, diam in diameters.items():
            w.writerow([u, f"{diam:.12g}"])


def cmd_verify(args):
    from .claims import CLAIMS, verify_claim

    if args.list or not args.claim:
        for cid, claim in CLAIMS.items():
            print(f"{cid:28s} {claim['description']}")
        return EXIT_OK
    if args.claim not in CLAIMS:
        print(f"unknown claim {args.claim!r}", file=sys.stderr)
        return EXIT_USAGE
    report = verify_claim(args.claim)
    cert = report["evidence"].pop("certificate", None)
    if cert is not None and args.out:
        path = args.out + ".certificate.json"
        save_certificate(cert, path)
        report["evidence"]["certificate_path"] = path
    if args.csv and "j1_diameters" in report["evidence"]:
        _write_diameters(args.csv, report["evidence"]["j1_diameters"])
    for row in report["checks"]:
        print(f"{'ok  ' if row['passed'] else 'FAIL'} {row['key']}: observed {row['observed']}")
    print(f"{args.claim}: {'PASS' if report['passed'] else 'FAIL'} ({report['seconds']} s)")
    if args.out:
        _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_replay(args):
    cert = load_certificate(args.certificate)
    report = replay(cert, sample=args.sample)
    for p in report.problems:
        print(f"loop {p['loop']}: {p['problem']}", file=sys.stderr)
    print("replay:", "PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser():
    p = _Parser(prog="inflecta", description="Inflection points of plane curves and their monodromy.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute the inflection points of one curve")
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--curve", help="random (default), fermat, klein, hesse, or a curve JSON file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    m = sub.add_parser("monodromy", help="build a monodromy certificate")
    m.add_argument("--degree", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("--loops", type=int, help="maximum number of random loops")
    m.add_argument("--family", action="append", choices=["nodal", "two-tuple", "fermat"],
                   help="add a bypass loop (repeatable)")
    m.add_argument("--radius", type=float, help="bypass radius (default: chosen per family)")
    m.add_argument("--config", help="ExperimentConfig JSON")
    m.add_argument("--out")
    m.set_defaults(func=cmd_monodromy)

    b = sub.add_parser("bypass", help="local monodromy of one bypass loop")
    b.add_argument("--family", required=True, choices=["nodal", "two-tuple", "fermat"])
    b.add_argument("--degree", type=int, default=4)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--radius", type=float)
    b.add_argument("--csv", help="write strand trajectories as CSV")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bypass)

    v = sub.add_parser("verify", help="run a registered claim")
    v.add_argument("claim", nargs="?")
    v.add_argument("--list", action="store_true")
    v.add_argument("--out")
    v.add_argument("--csv", help="write cluster diameters vs |u| (FERMAT_CLUSTERS)")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("replay", help="re-check a certificate")
    r.add_argument("certificate")
    r.add_argument("--sample", type=int, help="number of loops to re-track")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except DegenerateFiber as exc:
        print(f"degenerate fiber: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except RadiusTooLarge as exc:
        print(f"degenerate fiber on the bypass circle: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (PathFailure, PathCollision, MatchAmbiguous) as exc:
        print(f"tracking failure: {exc}", file=sys.stderr)
        return EXIT_TRACKING
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
