"""JSON encoding of points, geodesics, cut loci, plans and fixtures.

Exact rationals are written as strings ("3/8"), floats as JSON numbers.
Every top-level document carries a "schema" field.
"""
from __future__ import annotations

import json

from gmpy2 import mpq

from . import cube, cutlocus as cl, unfold

SCHEMA = "cubegeodesic.{}/1"


def scalar(x):
    if isinstance(x, float):
        return x
    return cube.fmt_scalar(x)


def parse_scalar(x):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return x if isinstance(x, float) else mpq(x)
    return mpq(str(x))


def point_json(p: cube.SurfacePoint) -> dict:
    return {"face": cube.FACES[p.face].name, "u": scalar(p.u), "v": scalar(p.v)}


def parse_point(d: dict, exact: bool | None = None) -> cube.SurfacePoint:
    u, v = parse_scalar(d["u"]), parse_scalar(d["v"])
    return cube.point(d["face"], u, v, exact=exact)


def xyz_json(x) -> list:
    return [scalar(t) for t in x]


def geodesic_json(g: unfold.Geodesic) -> dict:
    return {
        "schema": SCHEMA.format("geodesic"),
        "source": point_json(g.source),
        "target": point_json(g.target),
        "length2": scalar(g.length2),
        "length": g.length,
        "faces": [cube.FACES[f].name for f in g.unfolding.faces],
        "crossings": [{"edge": list(c.edge), "point": xyz_json(c.point3d)} for c in g.crossings],
        "polyline3d": [xyz_json(x) for x in g.polyline3d()],
    }


def cut_locus_json(g: cl.CutLocusGraph) -> dict:
    t = g.tree()
    return {
        "schema": SCHEMA.format("cutlocus"),
        "source": point_json(g.source),
        "vertices": [{"id": i, "point": point_json(v.point), "degree": v.degree,
                      "label": v.label} for i, v in enumerate(g.vertices)],
        "edges": [{"a": e.a, "b": e.b, "polyline3d": [xyz_json(x) for x in e.polyline]}
                  for e in g.edges],
        "leaves": sorted(t.leaf_labels()),
        "degrees": list(t.degree_sequence()),
        "code": g.code(),
    }


def parse_cut_locus(d: dict) -> cl.CutLocusGraph:
    verts = [cl.CutVertex(parse_point(v["point"]), v["degree"], v["label"])
             for v in d["vertices"]]
    edges = [cl.CutEdge(e["a"], e["b"], [tuple(parse_scalar(t) for t in x)
                                         for x in e["polyline3d"]])
             for e in d["edges"]]
    return cl.CutLocusGraph(parse_point(d["source"]), verts, edges)


def classification_json(p: cube.SurfacePoint, c: cl.Classification) -> dict:
    return {"schema": SCHEMA.format("classification"), "point": point_json(p),
            "full": c.full, "top": c.top, "bottom": c.bottom,
            "degrees": list(c.degrees), "generic": c.generic}


def plan_json(r) -> dict:
    return {"schema": SCHEMA.format("plan"), "index": r.index,
            "selection_witness": r.selection_witness,
            "geodesic": geodesic_json(r.geodesic)}


def atlas_json(a) -> dict:
    return {
        "schema": SCHEMA.format("atlas"),
        "face": cube.FACES[a.face].name,
        "resolution": a.resolution,
        "depth": a.depth,
        "key": a.key,
        "summary": a.summary(),
        "strata": [{"kind": s.kind, "code": s.code, "witness": list(s.witness),
                    "size": s.size} for s in a.strata],
    }


def fixtures_json(fixtures) -> dict:
    return {
        "schema": SCHEMA.format("fixtures"),
        "fixtures": [{"name": f.name, "index": f.index,
                      "limit": [point_json(f.limit[0]), point_json(f.limit[1])],
                      "pairs": [[point_json(p), point_json(q)] for p, q in f.pairs]}
                     for f in fixtures],
    }


def parse_fixtures(d: dict):
    from .fixtures import Fixture
    out = []
    for f in d["fixtures"]:
        pairs = [(parse_point(a), parse_point(b)) for a, b in f["pairs"]]
        lim = (parse_point(f["limit"][0]), parse_point(f["limit"][1]))
        out.append(Fixture(f["name"], f["index"], pairs, lim))
    return out


def dumps(doc: dict) -> str:
    """Deterministic JSON text."""
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
