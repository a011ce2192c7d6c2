"""Command line front end.

Points are written FACE:U,V with FACE a face name such as 5678, or cN for
corner N, or ``star`` for the five-fold junction point of face 5678.
Coordinates may be fractions (1/3) or decimals; in exact mode decimals
are read as exact rationals.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gmpy2 import mpq

from . import atlas, cube, cutlocus as cl, gmpr, serialize, svg, unfold, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def parse_point(text: str, exact: bool) -> cube.SurfacePoint:
    t = text.strip()
    if t == "star":
        return cube.point(0, *gmpr.STAR_UV, exact=False)
    if t.lower().startswith("c") and t[1:].isdigit():
        lab = int(t[1:])
        if not 1 <= lab <= 8:
            raise UsageError(f"no corner {lab}")
        return cube.corner_point(lab, exact)
    try:
        face, uv = t.split(":")
        u, v = uv.split(",")
        conv = mpq if exact else (lambda s: float(mpq(s)))
        return cube.point(face, conv(u), conv(v), exact=exact)
    except (ValueError, KeyError, cube.CubeError) as e:
        raise UsageError(f"bad point {text!r}: {e}") from None


def _tol(args, *pts):
    if args.mode == "exact" and all(p.exact for p in pts):
        return None
    return args.tol


def _emit(args, doc: dict | str):
    text = doc if isinstance(doc, str) else serialize.dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_distance(args):
    exact = args.mode == "exact"
    p, q = parse_point(args.p, exact), parse_point(args.q, exact)
    d2 = unfold.geodesic_distance2(p, q, tol=_tol(args, p, q)) if p != q else 0
    if args.out:
        _emit(args, {"schema": serialize.SCHEMA.format("distance"), "source": serialize.point_json(p),
                     "target": serialize.point_json(q), "length2": serialize.scalar(d2),
                     "length": float(d2) ** 0.5})
    print(f"squared {serialize.scalar(d2)}")
    print(f"distance {float(d2) ** 0.5:.12f}")
    return EXIT_OK


def cmd_geodesics(args):
    exact = args.mode == "exact"
    p, q = parse_point(args.p, exact), parse_point(args.q, exact)
    if p == q:
        raise UsageError("source and target coincide")
    gs = unfold.minimal_geodesics(p, q, tol=_tol(args, p, q))
    _emit(args, {"schema": serialize.SCHEMA.format("geodesics"), "multiplicity": len(gs),
                 "geodesics": [serialize.geodesic_json(g) for g in gs]})
    return EXIT_OK


def cmd_cutlocus(args):
    p = parse_point(args.p, args.mode == "exact")
    g = cl.cut_locus(p, _tol(args, p))
    fmt = args.format or ("svg" if args.out and args.out.endswith(".svg") else "json")
    _emit(args, svg.cut_locus_svg(g) if fmt == "svg" else serialize.cut_locus_json(g))
    return EXIT_OK


def cmd_classify(args):
    p = parse_point(args.p, args.mode == "exact")
    c = cl.classify_point(p, _tol(args, p))
    doc = serialize.classification_json(p, c)
    name = atlas.LQ_NAMES.get(c.top) or {v: k for k, v in atlas.diagram_codes().items()}.get(c.top)
    if name and cl.home_quadrant(p) == cube.QuadrantId(0, 0):
        doc["top_name"] = name
    _emit(args, doc)
    return EXIT_OK


def cmd_atlas(args):
    face = cube.face(args.face).id
    if args.left_quadrant:
        found = atlas.left_quadrant_taxonomy(args.res, args.depth)
        names = {v: k for k, v in atlas.diagram_codes().items()}
        for code, (kind, w) in sorted(found.items(), key=lambda kv: names.get(kv[0], "~")):
            print(f"{names.get(code, '?'):5} {kind:7} ({w[0]:.4f}, {w[1]:.4f}) {code}")
        print(f"{len(found)} distinct top-half codes (expected 12)")
        return EXIT_OK
    a = atlas.region_atlas(face, args.res, args.depth)
    s = a.summary()
    for k in ("region", "curve", "point", "edge", "corner", "total", "unresolved", "samples"):
        print(f"{k:10} {s[k]}")
    print(f"expected total 193, got {s['total']}")
    if args.out:
        if args.out.endswith(".json"):
            doc = serialize.atlas_json(a)
            doc["summary"].pop("seconds", None)
            _emit(args, doc)
        else:
            _emit(args, svg.atlas_svg(a))
    return EXIT_OK


def cmd_plan(args):
    exact = args.mode == "exact"
    p, q = parse_point(args.p, exact), parse_point(args.q, exact)
    r = gmpr.plan(p, q, _tol(args, p, q))
    if args.out:
        _emit(args, serialize.plan_json(r))
    print(f"index {r.index}")
    print(f"witness {r.selection_witness}")
    print(f"length {r.geodesic.length:.12f}")
    print("path " + " -> ".join("(" + ", ".join(f"{float(t):.6f}" for t in x) + ")"
                                for x in r.geodesic.polyline3d()))
    return EXIT_OK


def cmd_verify(args):
    print(f"suite {args.suite}, seed {args.seed}")
    checks = verify.run_suite(args.suite, seed=args.seed, depth=args.depth, res=args.res)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if args.out:
        Path(args.out).write_text(serialize.dumps({
            "schema": serialize.SCHEMA.format("verify"), "suite": args.suite, "seed": args.seed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]}))
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=cube.DEFAULT_TOL,
                        help="float comparison tolerance (float mode)")
    common.add_argument("--res", type=int, default=16, help="atlas base grid per side")
    common.add_argument("--depth", type=int, default=10, help="atlas refinement depth")
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    common.add_argument("--out", help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="cubegeodesic", description="geodesics and cut loci on the unit cube")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, npts in (("distance", cmd_distance, 2), ("geodesics", cmd_geodesics, 2),
                           ("cutlocus", cmd_cutlocus, 1), ("classify", cmd_classify, 1),
                           ("plan", cmd_plan, 2)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("p", help="source point, FACE:U,V | cN | star")
        if npts == 2:
            sp.add_argument("q", help="target point")
        sp.set_defaults(fn=fn)
    sub.choices["cutlocus"].add_argument("--format", choices=("json", "svg"))
    sp = sub.add_parser("atlas", parents=[common])
    sp.add_argument("--face", default="5678")
    sp.add_argument("--left-quadrant", action="store_true",
                    help="top-half taxonomy of the left quadrant instead of the full face")
    sp.set_defaults(fn=cmd_atlas)
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("suite", choices=tuple(verify.SUITES))
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, cube.CubeError, unfold.DegenerateSourceTarget) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
