"""Command-line surface: body construction, distance estimation, exact
certification, theorem suites, equilateral families, and SVG rendering.

Machine output is JSON (sorted keys, two-space indent) except the
equilateral distance matrix, which is CSV.  Identical argv and seed produce
byte-identical output.  Exit codes: 0 success, 2 validation or hypothesis
error, 1 internal failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bodies import LinearMap, body_from_dict, body_to_dict
from .certificate import (
    CONTACT_TOL,
    ContactCertificate,
    certify_euclidean_distance,
    verify_certificate,
)
from .constructions import equilateral_family, hanner, standard_body
from .distance import estimate_distance
from .errors import BmdistError, MalformedSpec
from .oracles import SuiteConfig, theorem_suite
from .svg import render_svg

SUITE_DEFAULTS = SuiteConfig()


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedSpec(f"cannot read {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"{path!r} is not valid JSON: {exc}") from None


def _load_body(path):
    return body_from_dict(_load_json(path))


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out):
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def cmd_body(args) -> int:
    given = [s for s in (args.hanner, args.name, args.infile) if s is not None]
    if len(given) != 1:
        raise MalformedSpec("body needs exactly one of --hanner, --name, --in")
    if args.hanner is not None:
        body = hanner(args.hanner)
    elif args.name is not None:
        body = standard_body(args.name, n=args.n, m=args.m)
    else:
        body = _load_body(args.infile)
    _emit_json(body_to_dict(body), args.out)
    return 0


def cmd_distance(args) -> int:
    K = _load_body(args.a)
    L = _load_body(args.b)
    est = estimate_distance(
        K,
        L,
        restarts=args.restarts if args.restarts is not None else 200,
        seed=args.seed if args.seed is not None else 0,
        tol=args.tol if args.tol is not None else 1e-9,
    )
    _emit_json(est.to_dict(), args.out)
    return 0


def cmd_certify(args) -> int:
    K = _load_body(args.body)
    cert = certify_euclidean_distance(
        K, tol=args.tol if args.tol is not None else CONTACT_TOL
    )
    _emit_json(cert.to_dict(), args.out)
    return 0


def cmd_verify_certificate(args) -> int:
    data = _load_json(args.cert)
    # accept either a bare certificate or a full certification record
    if "certificate" in data:
        data = data["certificate"]
    cert = ContactCertificate.from_dict(data)
    result = verify_certificate(cert)
    _emit_json(result, args.out)
    return 0 if result["ok"] else 2


def cmd_theorem(args) -> int:
    report = theorem_suite(
        args.suite,
        cases=args.cases if args.cases is not None else SUITE_DEFAULTS.cases,
        seed=args.seed if args.seed is not None else SUITE_DEFAULTS.seed,
        tol=args.tol if args.tol is not None else SUITE_DEFAULTS.tol,
        restarts=(
            args.restarts if args.restarts is not None else SUITE_DEFAULTS.restarts
        ),
    )
    _emit(report.to_json() + "\n", args.out)
    return 0


def cmd_equilateral(args) -> int:
    family = equilateral_family(args.n, args.count)
    k = len(family)
    dist = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            est = estimate_distance(
                family[i],
                family[j],
                restarts=args.restarts if args.restarts is not None else 80,
                seed=args.seed if args.seed is not None else 0,
            )
            dist[i, j] = dist[j, i] = est.upper
    rows = [",".join(repr(float(x)) for x in row) for row in dist]
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def cmd_render(args) -> int:
    bodies = [_load_body(p) for p in args.bodies]
    if args.witness is not None:
        data = _load_json(args.witness)
        if "witness" in data:
            data = data["witness"]
        w = LinearMap.from_dict(data)
        # draw the positioned pair: K + u against M(body + v)
        shift = LinearMap(np.eye(w.dim), pre_translate=w.pre_translate)
        mapped = LinearMap(w.matrix, pre_translate=w.post_translate)
        from .bodies import apply_map

        bodies = [apply_map(shift, bodies[0])] + [
            apply_map(mapped, b) for b in bodies[1:]
        ]
    _emit(render_svg(bodies), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base RNG seed")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--restarts", type=int, default=None, help="restart count")
    common.add_argument("--out", default=None, help="write output to this file")

    p = argparse.ArgumentParser(
        prog="bmdist",
        description="Banach-Mazur distance toolkit: construction, estimation, "
        "exact certification, theorem suites, rendering.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("body", parents=[common], help="construct or normalize a body")
    b.add_argument("--hanner", help="Hanner tree, e.g. 'l1(linf(seg,seg),seg)'")
    b.add_argument("--name", help="catalogue name, e.g. cross_polytope")
    b.add_argument("--n", type=int, default=None, help="dimension parameter")
    b.add_argument("--m", type=int, default=None, help="vertex-count parameter")
    b.add_argument("--in", dest="infile", help="body JSON file to round-trip")
    b.set_defaults(func=cmd_body)

    d = sub.add_parser("distance", parents=[common], help="estimate d_BM(A, B)")
    d.add_argument("--a", required=True, help="first body JSON file")
    d.add_argument("--b", required=True, help="second body JSON file")
    d.set_defaults(func=cmd_distance)

    c = sub.add_parser(
        "certify", parents=[common], help="exact distance to the Euclidean ball"
    )
    c.add_argument("--body", required=True, help="body JSON file")
    c.set_defaults(func=cmd_certify)

    vc = sub.add_parser(
        "verify-certificate",
        parents=[common],
        help="replay a stored certificate arithmetically",
    )
    vc.add_argument("--cert", required=True, help="certificate JSON file")
    vc.set_defaults(func=cmd_verify_certificate)

    t = sub.add_parser("theorem", parents=[common], help="run a randomized suite")
    t.add_argument("--suite", required=True, help="suite name, e.g. thm-3d-cones")
    t.add_argument("--cases", type=int, default=None, help="number of cases")
    t.set_defaults(func=cmd_theorem)

    e = sub.add_parser(
        "equilateral", parents=[common], help="family and its distance matrix (CSV)"
    )
    e.add_argument("--n", type=int, default=2, help="ambient dimension")
    e.add_argument("--count", type=int, default=4, help="family size")
    e.set_defaults(func=cmd_equilateral)

    r = sub.add_parser("render", parents=[common], help="SVG overlay of 2D bodies")
    r.add_argument("bodies", nargs="+", help="body JSON files")
    r.add_argument(
        "--witness",
        help="DistanceEstimate JSON; positions the first body against the rest",
    )
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BmdistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
