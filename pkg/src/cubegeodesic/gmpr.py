"""Five-rule geodesic motion planner.

Every ordered pair (p, q) gets an index 1..5 and one minimal geodesic:

1. unique minimal geodesic
2. two minimal geodesics (cut-locus edges and degree-2 vertices); the one
   arriving in the clockwise rotation sense about the center of the
   connecting segment, or a fixed side on the connecting segment itself
3. the 56 pairs with five or six minimal geodesics
4, 5. degree-3/4 vertices, decided by the approach regions at the vertex

Orientation: clockwise in the inside-view face charts (the star plane has
the same handedness). Ties in the rotation rule fall back to the side rule.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import cube, cutlocus as cl, star as starmod, unfold
from .cube import DEFAULT_TOL, SurfacePoint, sign

SQRT7 = math.sqrt(7)
# junction of regions D, D', F, F', A in the left quadrant of face 5678;
# agrees with the bisection in atlas.locate_star to 1e-10
STAR_UV = ((3 - SQRT7) / 4, (SQRT7 - 1) / 4)
SWAP_25 = {1: 1, 2: 5, 3: 3, 4: 4, 5: 2, 6: 6, 7: 7, 8: 8}
# (x, y, z) -> (z, 1-y, x): swaps the two quadrants along edge 5-8
HALF_TURN_58 = cube.SymmetryElement((2, 1, 0), (1, -1, 1))


class AmbiguousRotation(RuntimeError):
    pass


class UnclassifiedVertex(RuntimeError):
    pass


@dataclass(frozen=True)
class PlanResult:
    index: int
    geodesic: unfold.Geodesic
    selection_witness: str


@lru_cache(maxsize=None)
def vertex_rules() -> dict:
    with resources.files(__package__).joinpath("data/vertex_rules.json").open() as fh:
        return json.load(fh)


def constant_path(p: SurfacePoint) -> unfold.Geodesic:
    s = (p.u, p.v)
    return unfold.Geodesic(p, p, unfold._make_unfolding((p.face,)), (s, s), 0, (), p.face)


# ---------------------------------------------------------------------------
# frames

def is_primary(q: cube.QuadrantId) -> bool:
    """Of the two quadrants along one cube edge, the one on the lower face id."""
    return q.face == min(cube.faces_of_edge(q.edge))


def source_frame(p: SurfacePoint, tol: float = DEFAULT_TOL):
    """Rotation taking p's home quadrant to the quadrant pair at edge 5-8.

    Primary quadrants land on the left quadrant of face 5678 and use its
    rules directly. Their partners land on the quadrant of face 5841 at
    edge 5-8; there the rules are read with labels 2 and 5 interchanged.
    Returns (rotation, swap flag).
    """
    hq = cl.home_quadrant(p, tol)
    g = cl.quadrant_rotation(hq)
    if is_primary(hq):
        return g, False
    return HALF_TURN_58 @ g, True


def _compose(*perms):
    out = {}
    for lab in range(1, 9):
        x = lab
        for pm in perms:
            x = pm[x]
        out[lab] = x
    return out


# ---------------------------------------------------------------------------
# per-source data

@dataclass
class SourceInfo:
    source: SurfacePoint
    graph: cl.CutLocusGraph
    tol: float
    corner: int | None = None
    frame: cube.SymmetryElement | None = None
    swap: bool = False
    top_nodes: frozenset = frozenset()
    halves: tuple = ()
    kind: str = "quadrant"                 # quadrant | edge | diagonal | center | corner

    @property
    def star(self) -> starmod.StarPolygon:
        return self.graph.star


@lru_cache(maxsize=512)
def source_info(p: SurfacePoint, tol: float = DEFAULT_TOL) -> SourceInfo:
    g = cl.cut_locus(p, tol)
    c = cube.corner_label(p, tol)
    if c is not None:
        return SourceInfo(p, g, tol, corner=c, kind="corner")
    S, swap = source_frame(p, tol)
    cp = S.corner_perm
    group = frozenset(l for l in range(1, 9) if cp[l] in cl.LQ_TOP)
    top, bot, conn = cl.split_tree(g.tree(), group)
    g.connecting_segment = conn
    q = cube.quadrant_of(p, tol)
    kind = q if isinstance(q, str) else "quadrant"
    nodes = frozenset(n for n in top.tree.labels if n != top.root)
    return SourceInfo(p, g, tol, None, S, swap, nodes, (top, bot), kind)


def _in_sector(a, b, d, tol):
    """d in the counter-clockwise half-open sector [a, b)."""
    cr = unfold._cross
    dot = a[0] * d[0] + a[1] * d[1]
    if sign(cr(a, d), tol) == 0 and dot > 0:
        return True
    if sign(cr(b, d), tol) == 0 and b[0] * d[0] + b[1] * d[1] > 0:
        return False
    if sign(cr(a, b), tol) > 0:
        return sign(cr(a, d), tol) > 0 and sign(cr(d, b), tol) > 0
    return not (sign(cr(b, d), tol) >= 0 and sign(cr(d, a), tol) >= 0)


def site_of(st: starmod.StarPolygon, geod: unfold.Geodesic) -> int:
    """Index of the source image whose cell the geodesic runs through."""
    dirs = [c.geodesic.direction for c in st.cuts]
    d = geod.direction
    for k in range(8):
        if _in_sector(dirs[k], dirs[(k + 1) % 8], d, st.tol):
            return k
    raise AssertionError("direction outside every sector")


def star_image(st: starmod.StarPolygon, geod: unfold.Geodesic, k: int):
    s, d = st.source_xy, geod.direction
    return st.charts[k]((s[0] + d[0], s[1] + d[1]))


def cw_angle(d) -> float:
    """Clockwise angle of d from the +u axis, in [0, 2pi)."""
    return math.atan2(-float(d[1]), float(d[0])) % (2 * math.pi)


def phi3(geods: list[unfold.Geodesic]) -> unfold.Geodesic:
    return min(geods, key=lambda g: cw_angle(g.direction))


# ---------------------------------------------------------------------------
# rule 2

def _side_select(info: SourceInfo, geods):
    """Fixed side on the connecting segment: the geodesic crossing the edge
    opposite the quadrant edge in the lower-numbered adjacent face."""
    hq = cl.home_quadrant(info.source, info.tol)
    e = hq.edge
    f = min(cube.faces_of_edge(e))
    opp = tuple(sorted(set(cube.FACES[f].corners) - set(e)))
    hit = [g for g in geods if any(tuple(sorted(c.edge)) == opp for c in g.crossings)]
    if len(hit) == 1:
        return hit[0], f"side: crosses edge {opp[0]}-{opp[1]}"
    return phi3(geods), "side: clockwise-angle fallback"


def _arrival_in(geod: unfold.Geodesic, f: int):
    s, t = geod.planar_segment
    unf = geod.unfolding
    v = unf.isometries[-1].inverse_linear((t[0] - s[0], t[1] - s[1]))
    if unf.last == f:
        return v
    return unfold.hinge_placement(f, unfold.IDENTITY, unf.last).linear(v)


def _e2_corner(info: SourceInfo, q: SurfacePoint, geods):
    x = cube.CORNERS[info.corner]
    opp = cube.CORNER_AT[tuple(1 - t for t in x)]
    faces = [f for f in cube.incident_faces(q, info.tol) if opp in cube.FACES[f].corners]
    f = min(faces)
    qx = cube.local_coords(q, f)
    ox = cube.FACES[f].corner_uv(opp)
    d = (qx[0] - ox[0], qx[1] - ox[1])
    fld = (d[1], -d[0])
    signs = []
    for g in geods:
        a = _arrival_in(g, f)
        signs.append(sign(a[0] * fld[0] + a[1] * fld[1], info.tol))
    pos = [g for g, s in zip(geods, signs) if s > 0]
    if len(pos) != 1:
        raise AmbiguousRotation(f"corner source {info.corner}, q={q}")
    return pos[0], f"rotation about corner {opp}"


def e2_select(p: SurfacePoint, q: SurfacePoint, geods, tol: float = DEFAULT_TOL):
    """Pick one of two minimal geodesics. Returns (geodesic, witness)."""
    info = source_info(p, tol)
    if info.corner is not None:
        return _e2_corner(info, q, geods)
    g = info.graph
    a, b = g.connecting_segment
    loc = cl.locate_on_cut_locus(p, q, g, tol)
    if loc.kind == "edge":
        e = g.edges[loc.index]
        if {e.a, e.b} == {a, b}:
            return _side_select(info, geods)
    st = info.star
    ks = [site_of(st, x) for x in geods]
    x = star_image(st, geods[0], ks[0])
    pa, pb = g.vertices[a].planar, g.vertices[b].planar
    c = ((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2)
    d = (x[0] - c[0], x[1] - c[1])
    fld = (d[1], -d[0])
    sites = st.sites
    n = (sites[ks[1]][0] - sites[ks[0]][0], sites[ks[1]][1] - sites[ks[0]][1])
    s = sign(fld[0] * n[0] + fld[1] * n[1], tol)
    if s == 0:
        raise AmbiguousRotation(f"q={q} is on the line through the segment center")
    pick = 0 if s > 0 else 1
    lab = st.site_neighbours(ks[pick])
    return geods[pick], f"rotation: arrives from cell {lab[0]}-{lab[1]}"


# ---------------------------------------------------------------------------
# rules 4 and 5

@lru_cache(maxsize=None)
def _class_names() -> dict[str, str]:
    from . import atlas
    return {code: name for name, code in atlas.diagram_codes().items()}


def _vertex_perm(info: SourceInfo, node: int) -> tuple[dict, str]:
    S = info.frame
    if node in info.top_nodes:
        pm, half = S.corner_perm, "top"
    else:
        pm, half = (cube.VERTICAL_REFLECTION @ S).corner_perm, "bottom"
    if info.swap:
        pm = _compose(pm, SWAP_25)
    return pm, half


def _canonical_class(info: SourceInfo, half: str, pm: dict) -> str | None:
    h = info.halves[0] if half == "top" else info.halves[1]
    t = h.tree.relabeled({k: v for k, v in pm.items()})
    return _class_names().get(cl.canonical_code(t, h.root))


def e45_select(p: SurfacePoint, q: SurfacePoint, geods, tol: float = DEFAULT_TOL):
    """Returns (index, geodesic, witness) for a degree-3/4 vertex q."""
    info = source_info(p, tol)
    loc = cl.locate_on_cut_locus(p, q, info.graph, tol)
    if loc.kind != "vertex":
        raise UnclassifiedVertex(f"{q} is not a vertex of the cut locus of {p}")
    st = info.star
    by_site = {site_of(st, x): x for x in geods}
    pm, half = _vertex_perm(info, loc.index)
    regions = {}
    for k, x in by_site.items():
        a, b = st.site_neighbours(k)
        regions[tuple(sorted((pm[a], pm[b])))] = x
    rules = vertex_rules()

    def wit(reg, why):
        return f"{why}: {half} half, region {reg[0]}-{reg[1]}"

    if info.kind in ("diagonal", "center"):
        rule = rules["degenerate_sources"]
        for reg in map(tuple, rule["order"]):
            if reg in regions:
                return rule["index"], regions[reg], wit(reg, info.kind)
        reg = min(regions)
        return rule["index"], regions[reg], wit(reg, info.kind)
    for r in rules["first_match"]:
        reg = tuple(r["region"])
        if reg in regions:
            return r["index"], regions[reg], wit(reg, "approach")
    name = _canonical_class(info, half, pm)
    r = rules["residual"].get(name)
    if r is not None and tuple(r["region"]) in regions:
        reg = tuple(r["region"])
        return r["index"], regions[reg], wit(reg, f"table {name}")
    raise UnclassifiedVertex(f"class {name}, regions {sorted(regions)} at {p} -> {q}")


# ---------------------------------------------------------------------------
# rule 3

@dataclass(frozen=True)
class E3Entry:
    kind: str                     # corner | star
    source: SurfacePoint
    target: SurfacePoint
    name: str


@dataclass
class E3Table:
    entries: list[E3Entry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entries:
            out[e.kind] = out.get(e.kind, 0) + 1
        return out

    def lookup(self, p: SurfacePoint, q: SurfacePoint, radius: float = 1e-6) -> E3Entry | None:
        x, y = p.to3d(), q.to3d()
        for e in self.entries:
            if (math.dist(map(float, x), map(float, e.source.to3d())) < radius
                    and math.dist(map(float, y), map(float, e.target.to3d())) < radius):
                return e
        return None


def _circumcenter(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return ux, uy


def star_vertex(p: SurfacePoint, tol: float = DEFAULT_TOL) -> SurfacePoint:
    """Degree-5 vertex of the cut locus of a (float) star point."""
    g = cl.cut_locus(p, tol)
    v = max(g.vertices, key=lambda w: w.degree)
    if v.degree != 5:
        raise ValueError(f"no degree-5 vertex at {p}")
    sites = sorted(v.sites)
    pts = [g.star.sites[k] for k in sites[:3]]
    x = _circumcenter(*pts)
    return g.star.fold(sites[0], x)


@lru_cache(maxsize=None)
def e3_table(tol: float = DEFAULT_TOL) -> E3Table:
    tab = E3Table()
    for lab, x in sorted(cube.CORNERS.items()):
        opp = cube.CORNER_AT[tuple(1 - t for t in x)]
        tab.entries.append(E3Entry("corner", cube.corner_point(lab), cube.corner_point(opp),
                                   f"corner {lab} -> {opp}"))
    base = cube.point(0, *STAR_UV, exact=False)
    bases = [("*", base), ("*'", cube.apply_symmetry(cube.VERTICAL_REFLECTION, base))]
    bases = [(n, b, star_vertex(b, tol)) for n, b in bases]
    for qd in cube.all_quadrants():
        inv = cl.quadrant_rotation(qd).inverse()
        for n, b, v in bases:
            tab.entries.append(E3Entry("star", cube.apply_symmetry(inv, b),
                                       cube.apply_symmetry(inv, v),
                                       f"{n} in quadrant {qd.face}.{qd.quadrant}"))
    return tab


# ---------------------------------------------------------------------------
# planner

def plan(p: SurfacePoint, q: SurfacePoint, tol: float = DEFAULT_TOL) -> PlanResult:
    if tol is None and not (p.exact and q.exact):
        tol = DEFAULT_TOL
    if p == q:
        return PlanResult(1, constant_path(p), "constant path")
    geods = unfold.minimal_geodesics(p, q, tol=tol)
    m = len(geods)
    if m == 1:
        return PlanResult(1, geods[0], "unique")
    if m == 2:
        try:
            g, w = e2_select(p, q, geods, tol)
        except AmbiguousRotation:
            g, w = _side_select(source_info(p, tol), geods)
        return PlanResult(2, g, w)
    if m >= 5:
        e = e3_table().lookup(p, q)
        w = f"table: {e.name}" if e else f"table: untabulated multiplicity {m}"
        return PlanResult(3, phi3(geods), w)
    i, g, w = e45_select(p, q, geods, tol)
    return PlanResult(i, g, w)


def gmpr_index(p: SurfacePoint, q: SurfacePoint, tol: float = DEFAULT_TOL) -> int:
    return plan(p, q, tol).index


# ---------------------------------------------------------------------------
# continuity

def path_deviation(a: unfold.Geodesic, b: unfold.Geodesic, samples: int = 65) -> float:
    """Max 3D distance between the two paths at equal arc-length fractions."""
    worst = 0.0
    for i in range(samples):
        s = i / (samples - 1)
        worst = max(worst, math.dist(a.point_at(s), b.point_at(s)))
    return worst


def continuity_probe(index: int, pairs, limit, tol: float = DEFAULT_TOL) -> list[float]:
    """Deviation of plan(pair) from plan(limit) along a convergent sequence.

    Every pair and the limit must be classified with ``index``.
    """
    ref = plan(*limit, tol)
    if ref.index != index:
        raise ValueError(f"limit pair has index {ref.index}, expected {index}")
    out = []
    for p, q in pairs:
        r = plan(p, q, tol)
        if r.index != index:
            raise ValueError(f"pair {p}, {q} has index {r.index}, expected {index}")
        out.append(path_deviation(r.geodesic, ref.geodesic))
    return out
