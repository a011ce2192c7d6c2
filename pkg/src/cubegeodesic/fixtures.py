"""Convergent pair sequences for the continuity probe.

Each fixture is a limit pair (p0, q0) and pairs (p_k, q_k), k = 1..STEPS,
with p_k approaching p0 at distance ~2^-k. Targets q_k are either fixed,
the point of p_k's cut locus nearest q0, or the nearest vertex of degree
>= 3. Sequences are built once and stored as JSON; see build_all.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from importlib import resources

from gmpy2 import mpq

from . import cube, cutlocus as cl, gmpr
from .atlas import LQ_NAMES

log = logging.getLogger(__name__)

STEPS = 12
FIXTURE_FILE = "data/continuity_fixtures.json"


@dataclass
class Fixture:
    name: str
    index: int
    pairs: list
    limit: tuple


def half(k: int):
    return mpq(1, 2 ** k)


def _d2(a, b):
    return sum((a[i] - b[i]) ** 2 for i in range(3))


def nearest_on_locus(p: cube.SurfacePoint, q0: cube.SurfacePoint) -> cube.SurfacePoint:
    """Point of p's cut locus closest (in 3D) to q0, exact for exact input."""
    g = gmpr.source_info(p, None).graph
    x = q0.to3d()
    best = None
    for e in g.edges:
        for a, b in zip(e.polyline, e.polyline[1:]):
            d = [b[i] - a[i] for i in range(3)]
            dd = sum(t * t for t in d)
            t = sum((x[i] - a[i]) * d[i] for i in range(3)) / dd
            t = min(max(t, mpq(0)), mpq(1))
            y = tuple(a[i] + t * d[i] for i in range(3))
            if best is None or _d2(x, y) < _d2(x, best):
                best = y
    return cube.from3d(best, exact=True)


def nearest_vertex(p: cube.SurfacePoint, v0: cube.SurfacePoint) -> cube.SurfacePoint:
    g = gmpr.source_info(p, None).graph
    x = v0.to3d()
    vs = [v for v in g.vertices if v.degree >= 3]
    return min(vs, key=lambda v: _d2(x, v.point.to3d())).point


def top_name(p: cube.SurfacePoint) -> str:
    c = cl.classify_point(p, None)
    return LQ_NAMES.get(c.top, c.top) if c.generic else "curve:" + c.top


def bisect_boundary(a, b, face: int = 0, iters: int = 44):
    """Last point on a's side of the first class change along segment a-b."""
    ca = top_name(cube.point(face, *a))
    lo, hi = (mpq(a[0]), mpq(a[1])), (mpq(b[0]), mpq(b[1]))
    for _ in range(iters):
        m = ((lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2)
        if top_name(cube.point(face, *m)) == ca:
            lo = m
        else:
            hi = m
    return lo


def _pt(face, u, v):
    return cube.point(face, mpq(u), mpq(v))


def _make(name, index, limit_p, path, target, q0):
    """path(k) -> p_k; target in {"fixed", "locus", "vertex"}."""
    pairs = []
    for k in range(1, STEPS + 1):
        p = path(k)
        if target == "fixed":
            q = q0
        elif target == "locus":
            q = nearest_on_locus(p, q0)
        else:
            q = nearest_vertex(p, q0)
        pairs.append((p, q))
    return Fixture(name, index, pairs, (limit_p, q0))


def _edge_point(p, pick, s=mpq(1, 2)):
    """Point at parameter s along the first segment of the cut-locus edge chosen by pick."""
    g = gmpr.source_info(p, None).graph
    e = pick(g)
    a, b = e.polyline[0], e.polyline[1]
    return cube.from3d(tuple(a[i] + s * (b[i] - a[i]) for i in range(3)), exact=True)


def _edge_to(label):
    def pick(g):
        for e in g.edges:
            for i in (e.a, e.b):
                if g.vertices[i].label == label and g.vertices[i].degree == 1:
                    return e
        raise LookupError(label)
    return pick


def _vertex_by_regions(p, want_index, which=0):
    """A degree>=3 vertex of p's cut locus whose plan has the given index."""
    g = gmpr.source_info(p, None).graph
    hits = []
    for v in g.vertices:
        if v.degree >= 3 and v.degree < 5:
            r = gmpr.plan(p, v.point, None)
            if r.index == want_index:
                hits.append(v.point)
    return hits[which]


def build_all() -> list[Fixture]:
    fx = []
    s = half

    # ---- E1: unique geodesics
    e1 = [((0, "1/5", "1/2"), (1, "1/3", "2/3")), ((0, "3/7", "1/9"), (0, "5/6", "4/5")),
          ((2, "1/2", "1/3"), (4, "1/4", "3/4")), ((5, "2/3", "1/6"), (3, "1/7", "3/7")),
          ((1, "1/2", "1/2"), (3, "1/3", "1/5")), ((3, "4/5", "1/5"), (0, "1/4", "1/3")),
          ((4, "1/3", "1/3"), (2, "2/3", "2/5"))]
    dirs = [(1, 2), (-2, 1), (1, -1), (-1, 3), (3, 1), (2, -1), (-1, 1)]
    for i, ((fa, ua, va), (fb, ub, vb)) in enumerate(e1):
        p0, q0 = _pt(fa, ua, va), _pt(fb, ub, vb)
        a, b = dirs[i]
        fx.append(_make(f"e1-pair-{i}", 1, p0,
                        lambda k, p0=p0, a=a, b=b: _pt(p0.face, p0.u + a * s(k) / 8, p0.v + b * s(k) / 8),
                        "fixed", q0))
    p0 = _pt(0, "1/5", "1/2")
    fx.append(_make("e1-leaf-corner", 1, p0,
                    lambda k: _pt(0, mpq(1, 5) + s(k) / 8, mpq(1, 2) + s(k) / 16),
                    "fixed", cube.corner_point(1)))
    fx.append(_make("e1-target-on-edge", 1, _pt(0, "1/4", "1/3"),
                    lambda k: _pt(0, mpq(1, 4) - s(k) / 8, mpq(1, 3)),
                    "fixed", _pt(0, "1/2", "0")))
    fx.append(_make("e1-corner-source", 1, cube.corner_point(8),
                    lambda k: _pt(0, s(k) / 4, 1 - s(k) / 8),
                    "fixed", _pt(0, "1", "1/2")))

    # ---- E2: two geodesics
    pa = _pt(0, "1/5", "1/2")
    q_arm = _edge_point(pa, _edge_to(1))
    fx.append(_make("e2-moving-target-on-arm", 2, pa, lambda k: pa, "fixed", q_arm))
    fx[-1].pairs = [(pa, _edge_point(pa, _edge_to(1), mpq(1, 2) - s(k) / 4))
                    for k in range(1, STEPS + 1)]
    fx.append(_make("e2-region-A", 2, pa,
                    lambda k: _pt(0, mpq(1, 5) + s(k) / 16, mpq(1, 2) + s(k) / 16),
                    "locus", q_arm))
    q6 = _edge_point(pa, _edge_to(6), mpq(1, 3))
    fx.append(_make("e2-region-A-arm6", 2, pa,
                    lambda k: _pt(0, mpq(1, 5) - s(k) / 16, mpq(1, 2)), "locus", q6))
    conn = _edge_point(pa, lambda g: next(e for e in g.edges
                                          if {e.a, e.b} == set(g.connecting_segment)))
    fx.append(_make("e2-connecting-segment", 2, pa, lambda k: pa, "fixed", conn))
    fx[-1].pairs = [(pa, _edge_point(pa, lambda g: next(e for e in g.edges
                                                        if {e.a, e.b} == set(g.connecting_segment)),
                                     mpq(1, 2) + s(k) / 4))
                    for k in range(1, STEPS + 1)]

    # region D collapsing onto curve DF (v = 7/8)
    u_df = bisect_boundary(("1/256", "7/8"), ("1/8", "7/8"))[0]
    pdf = cube.point(0, u_df, mpq(7, 8))
    q1 = _edge_point(pdf, _edge_to(1))
    fx.append(_make("e2-D-to-DF", 2, pdf,
                    lambda k: cube.point(0, u_df - s(k) / 64, mpq(7, 8)), "locus", q1))

    # corner-8 approach families: along edge 5-8, along the diagonal, along DF
    v8 = cube.corner_point(8)
    q_edge = cube.from3d((mpq(1, 2), 0, 1))        # on the arm 2-1 of corner 8's cut locus
    q_diag = cube.from3d((mpq(3, 4), 0, mpq(3, 4)))   # on the diagonal arm 2-5
    fx.append(_make("e2-corner8-along-edge", 2, v8,
                    lambda k: _pt(0, 0, 1 - s(k) / 2), "locus", q_edge))
    fx.append(_make("e2-corner8-along-diagonal", 2, v8,
                    lambda k: _pt(0, s(k) / 4, 1 - s(k) / 4), "locus", q_diag))

    def on_df(k):
        r = s(k) / 2
        u = bisect_boundary((r / 64, 1 - r), (r / 2, 1 - r))[0]
        return cube.point(0, u, 1 - r)
    fx.append(_make("e2-corner8-along-DF", 2, v8, on_df, "locus", q_edge))

    # edge 5-8 approached from both adjacent faces
    pe = _pt(0, "0", "1/3")
    qe = _edge_point(pe, _edge_to(6))
    fx.append(_make("e2-edge-from-5678", 2, pe, lambda k: _pt(0, s(k) / 8, mpq(1, 3)), "locus", qe))
    fx.append(_make("e2-edge-from-5841", 2, pe,
                    lambda k: cube.from3d((0, mpq(1, 3), s(k) / 8)), "locus", qe))
    # degree-2 vertex at corner 2 of an edge point's cut locus
    c2 = cube.corner_point(2)
    fx.append(_make("e2-degree2-vertex", 2, pe, lambda k: pe, "fixed", c2))
    # face center along the diagonal
    pc = _pt(0, "1/2", "1/2")
    qc = _edge_point(pc, lambda g: g.edges[0])
    fx.append(_make("e2-center-along-diagonal", 2, pc,
                    lambda k: _pt(0, mpq(1, 2) - s(k) / 8, mpq(1, 2) - s(k) / 8), "locus", qc))

    # ---- E3: a discrete set, so convergent sequences are eventually constant
    tab = gmpr.e3_table()
    for i in (0, 3, 7, 8, 9, 20, 31, 40, 50, 55):
        e = tab.entries[i]
        fx.append(_make(f"e3-constant-{i}", 3, e.source, lambda k, e=e: e.source, "fixed", e.target))

    # ---- E4
    for j in range(3):
        v = _vertex_by_regions(pa, 4, j)
        fx.append(_make(f"e4-region-A-vertex-{j}", 4, pa,
                        lambda k: _pt(0, mpq(1, 5) + s(k) / 16, mpq(1, 2) - s(k) / 32), "vertex", v))
    u_fa = bisect_boundary(("1/4", "1/2"), ("1/4", "1"))
    pfa = cube.point(0, *u_fa)
    v = max((w for w in gmpr.source_info(pfa, None).graph.vertices), key=lambda w: w.degree).point
    fx.append(_make("e4-A-to-FA", 4, pfa,
                    lambda k: cube.point(0, u_fa[0], u_fa[1] - s(k) / 64), "vertex", v))
    pf = _pt(0, "1/20", "9/10")
    for j in range(2):
        v = _vertex_by_regions(pf, 4, j)
        fx.append(_make(f"e4-region-F-vertex-{j}", 4, pf,
                        lambda k: _pt(0, mpq(1, 20) + s(k) / 256, mpq(9, 10)), "vertex", v))
    pd = _pt(0, "1/50", "1/2")
    v = _vertex_by_regions(pd, 4, 0)
    fx.append(_make("e4-region-D", 4, pd, lambda k: _pt(0, mpq(1, 50), mpq(1, 2) + s(k) / 64),
                    "vertex", v))
    pdp = _pt(0, "1/50", "1/3")
    v = _vertex_by_regions(pdp, 4, 0)
    fx.append(_make("e4-region-D'", 4, pdp, lambda k: _pt(0, mpq(1, 50), mpq(1, 3) - s(k) / 64),
                    "vertex", v))
    pt = cube.from3d((0, mpq(1, 2), mpq(1, 5)))        # partner quadrant on face 5841
    v = _vertex_by_regions(pt, 4, 0)
    fx.append(_make("e4-partner-quadrant", 4, pt,
                    lambda k: cube.from3d((0, mpq(1, 2) + s(k) / 16, mpq(1, 5))), "vertex", v))
    po = _pt(3, "1/2", "1/5")
    v = _vertex_by_regions(po, 4, 0)
    fx.append(_make("e4-other-face", 4, po, lambda k: _pt(3, mpq(1, 2) - s(k) / 16, mpq(1, 5)),
                    "vertex", v))

    # ---- E5
    pg = _pt(0, "1/4", "1/4")
    for j in range(3):
        v = _vertex_by_regions(pg, 5, j)
        fx.append(_make(f"e5-diagonal-vertex-{j}", 5, pg,
                        lambda k: _pt(0, mpq(1, 4) + s(k) / 16, mpq(1, 4) + s(k) / 16), "vertex", v))
    v = _vertex_by_regions(pc, 5, 0)
    fx.append(_make("e5-center-along-diagonal", 5, pc,
                    lambda k: _pt(0, mpq(1, 2) - s(k) / 8, mpq(1, 2) - s(k) / 8), "vertex", v))
    v = _vertex_by_regions(pd, 5, 0)
    fx.append(_make("e5-region-D", 5, pd, lambda k: _pt(0, mpq(1, 50), mpq(1, 2) + s(k) / 64),
                    "vertex", v))
    v = _vertex_by_regions(pf, 5, 0)
    fx.append(_make("e5-region-F-table", 5, pf,
                    lambda k: _pt(0, mpq(1, 20) + s(k) / 256, mpq(9, 10)), "vertex", v))
    v = _vertex_by_regions(pe, 5, 0)
    fx.append(_make("e5-edge-from-5678", 5, pe, lambda k: _pt(0, s(k) / 8, mpq(1, 3)), "vertex", v))
    fx.append(_make("e5-edge-from-5841", 5, pe,
                    lambda k: cube.from3d((0, mpq(1, 3), s(k) / 8)), "vertex", v))
    v = _vertex_by_regions(pdf, 5, 0)
    fx.append(_make("e5-D-to-DF", 5, pdf,
                    lambda k: cube.point(0, u_df - s(k) / 64, mpq(7, 8)), "vertex", v))
    pg2 = _pt(2, "3/4", "1/4")
    v = _vertex_by_regions(pg2, 5, 0)
    fx.append(_make("e5-antidiagonal-other-face", 5, pg2,
                    lambda k: _pt(2, mpq(3, 4) - s(k) / 16, mpq(1, 4) + s(k) / 16), "vertex", v))
    return fx


def load() -> list[Fixture]:
    from .serialize import parse_fixtures
    with resources.files(__package__).joinpath(FIXTURE_FILE).open() as fh:
        return parse_fixtures(json.load(fh))


def probe(f: Fixture, tol=None) -> list[float]:
    return gmpr.continuity_probe(f.index, f.pairs, f.limit, tol)


def decay_ok(devs: list[float], fit_steps: int = 4, slack: float = 2.0, floor: float = 1e-12):
    """Fit C on the first steps, then require dev_k <= slack*C*2^-k for all k
    and a non-increasing tail after step 3. Returns (ok, C)."""
    c = max(d * 2 ** (k + 1) for k, d in enumerate(devs[:fit_steps]))
    bound_ok = all(d <= slack * c * 2.0 ** -(k + 1) + floor for k, d in enumerate(devs))
    tail = devs[2:]
    mono = all(b <= a + floor for a, b in zip(tail, tail[1:]))
    return bound_ok and mono, c


def main(argv=None):
    import argparse
    from pathlib import Path
    from .serialize import dumps, fixtures_json
    ap = argparse.ArgumentParser(description="rebuild the continuity fixture file")
    ap.add_argument("--out", default=str(Path(__file__).parent / FIXTURE_FILE))
    args = ap.parse_args(argv)
    fx = build_all()
    Path(args.out).write_text(dumps(fixtures_json(fx)))
    print(f"{len(fx)} fixtures -> {args.out}")


if __name__ == "__main__":
    main()
