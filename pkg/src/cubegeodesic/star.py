"""Star unfolding of the cube from a source point and its clipped Voronoi diagram.

The surface is cut along one shortest path from the source to each of the
eight corners and developed into a 16-gon whose vertices alternate between
source images and corner images.  The Voronoi ridges of the eight source
images inside the polygon are the unfolded cut locus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import cube, unfold
from .cube import DEFAULT_TOL, SurfacePoint, sign
from .unfold import PlanarIsometry


class DegenerateSites(ValueError):
    pass


@dataclass(frozen=True)
class Affine:
    """Planar rigid motion x -> rot(k, x) + t with rational translation."""
    k: int
    t: tuple

    def __call__(self, x):
        r = unfold.rot(self.k, x)
        return (r[0] + self.t[0], r[1] + self.t[1])

    def inverse(self) -> "Affine":
        r = unfold.rot(-self.k, self.t)
        return Affine(-self.k % 4, (-r[0], -r[1]))

    def about(self, c, k: int) -> "Affine":
        """Compose with a rotation by k quarter turns about the point c."""
        y = unfold.rot(k, self.t)
        rc = unfold.rot(k, c)
        return Affine((self.k + k) % 4, (y[0] - rc[0] + c[0], y[1] - rc[1] + c[1]))


IDENTITY = Affine(0, (0, 0))
TURN = -1


@dataclass(frozen=True)
class Cut:
    corner: int
    geodesic: unfold.Geodesic

    @property
    def end(self):
        return self.geodesic.planar_segment[1]


def _half(d):
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def angle_key(d):
    """Sort key for directions by counter-clockwise angle from +x."""
    return _AngleKey(d)


class _AngleKey:
    __slots__ = ("d", "h")

    def __init__(self, d):
        self.d = d
        self.h = _half(d)

    def __lt__(self, other):
        if self.h != other.h:
            return self.h < other.h
        return unfold._cross(self.d, other.d) > 0


def choose_cut(p: SurfacePoint, geods: list[unfold.Geodesic], tol=DEFAULT_TOL):
    """Pick one shortest path to a corner as the cut.

    Prefer paths that start inside the root face (the limit of the unique
    path from nearby interior points); break remaining ties by angle.
    """
    def leaves_root(g):
        if not g.unfolding.hinge_segments:
            return False
        h0, h1, _, _ = g.unfolding.hinge_segments[0]
        s = g.planar_segment[0]
        e = (h1[0] - h0[0], h1[1] - h0[1])
        return sign(unfold._cross(e, (s[0] - h0[0], s[1] - h0[1])), tol) == 0
    pool = [g for g in geods if not leaves_root(g)] or list(geods)
    return min(pool, key=lambda g: angle_key(g.direction))


@dataclass
class StarPolygon:
    source: SurfacePoint
    root: int
    cuts: list[Cut]                        # ccw order of departure at the source
    charts: list[Affine]                   # chart k: root chart -> star plane
    vertices: list[tuple]                  # (kind, label, point) in ccw order
    tol: float = DEFAULT_TOL

    @property
    def sites(self) -> list[tuple]:
        return [self.charts[k](self.source_xy) for k in range(8)]

    @property
    def source_xy(self):
        return (self.source.u, self.source.v)

    @property
    def points(self) -> list[tuple]:
        return [v[2] for v in self.vertices]

    def area(self):
        pts = self.points
        a = 0
        for i in range(len(pts)):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % len(pts)]
            a += x0 * y1 - x1 * y0
        return a / 2

    def corner_image(self, label: int):
        for kind, lab, x in self.vertices:
            if kind == "corner" and lab == label:
                return x
        raise KeyError(label)

    def site_neighbours(self, k: int) -> tuple[int, int]:
        """Corner labels adjacent to source image k along the boundary."""
        n = len(self.vertices)
        for i, (kind, lab, _) in enumerate(self.vertices):
            if kind == "source" and lab == k:
                a = self.vertices[(i - 1) % n][1]
                b = self.vertices[(i + 1) % n][1]
                return tuple(sorted((a, b)))
        raise KeyError(k)

    def to_root(self, k: int, x):
        """Map a star-plane point seen from site k back into the root chart."""
        return self.charts[k].inverse()(x)

    def fold(self, k: int, x) -> SurfacePoint:
        y = self.to_root(k, x)
        return unfold.fold(self.root, unfold.IDENTITY, self.source_xy, y, self.tol)

    def fold_segment(self, k: int, a, b) -> list[tuple]:
        """3D polyline of the star-plane segment a-b lying in cell k.

        Walks from the source to the midpoint (a geodesic inside the cell)
        and then outwards to each end, so corner endpoints are only reached
        at the end of a walk.
        """
        ya, yb = self.to_root(k, a), self.to_root(k, b)
        m = ((ya[0] + yb[0]) / 2, (ya[1] + yb[1]) / 2)
        f, pl, _, _ = unfold.walk(self.root, unfold.IDENTITY, self.source_xy, m, self.tol)[-1]
        left = unfold.fold_polyline(f, pl, m, ya, self.tol)
        right = unfold.fold_polyline(f, pl, m, yb, self.tol)
        return left[::-1] + right[1:]


def star_unfold(p: SurfacePoint, tol: float = DEFAULT_TOL) -> StarPolygon:
    if cube.is_corner(p, tol):
        raise cube.IsCorner(repr(p))
    cuts = []
    for label in range(1, 9):
        geods = unfold.minimal_geodesics(p, cube.corner_point(label, p.exact), tol=tol)
        cuts.append(Cut(label, choose_cut(p, geods, tol)))
    cuts.sort(key=lambda c: angle_key(c.geodesic.direction))
    s = (p.u, p.v)
    charts = [IDENTITY]
    for k in range(1, 8):
        c = charts[-1](cuts[k].end)
        charts.append(charts[-1].about(c, TURN))
    verts = []
    for k in range(8):
        verts.append(("source", k, charts[k](s)))
        nxt = cuts[(k + 1) % 8]
        verts.append(("corner", nxt.corner, charts[k](nxt.end)))
    star = StarPolygon(p, p.face, cuts, charts, verts, tol)
    if star.area() < 0:
        star.vertices = verts[::-1]
    return star


# ---------------------------------------------------------------------------
# Voronoi diagram clipped to the star polygon

def _clip(poly, a, b, c, tol):
    """Part of polygon with a*x + b*y <= c (Sutherland-Hodgman)."""
    out = []
    n = len(poly)
    for i in range(n):
        P, Q = poly[i], poly[(i + 1) % n]
        fp = a * P[0] + b * P[1] - c
        fq = a * Q[0] + b * Q[1] - c
        sp, sq = sign(fp, tol), sign(fq, tol)
        if sp <= 0:
            out.append(P)
        if sp * sq < 0:
            t = fp / (fp - fq)
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    return _dedupe(out, tol)


def _same(p, q, tol):
    return sign(p[0] - q[0], tol) == 0 and sign(p[1] - q[1], tol) == 0


def _dedupe(poly, tol):
    out = []
    for x in poly:
        if not out or not _same(out[-1], x, tol):
            out.append(x)
    while len(out) > 1 and _same(out[0], out[-1], tol):
        out.pop()
    return out


def _d2(x, s):
    return (x[0] - s[0]) ** 2 + (x[1] - s[1]) ** 2


def polygon_area(pts):
    a = 0
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        a += x0 * y1 - x1 * y0
    return a / 2


@dataclass
class RidgeNode:
    id: int
    point: tuple
    sites: frozenset
    label: int | None = None               # corner label for corner images
    on_boundary: bool = False


@dataclass
class Ridge:
    a: int
    b: int
    sites: tuple[int, int]


@dataclass
class VoronoiCellComplex:
    sites: list[tuple]
    polygon: list[tuple]
    cells: dict[int, list[tuple]]
    nodes: list[RidgeNode] = field(default_factory=list)
    ridges: list[Ridge] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    def degree(self, i: int) -> int:
        return sum(1 for r in self.ridges if i in (r.a, r.b))

    @cached_property
    def adjacency(self) -> dict[int, list[int]]:
        adj = {n.id: [] for n in self.nodes}
        for r in self.ridges:
            adj[r.a].append(r.b)
            adj[r.b].append(r.a)
        return adj


def nearest_sites(x, sites, tol=DEFAULT_TOL) -> frozenset:
    ds = [_d2(x, s) for s in sites]
    m = min(ds)
    return frozenset(i for i, d in enumerate(ds) if sign(d - m, tol) == 0)


def clipped_voronoi(sites, polygon, tol: float = DEFAULT_TOL,
                    corner_labels: dict | None = None) -> VoronoiCellComplex:
    """Voronoi cells of ``sites`` clipped to ``polygon`` plus the ridge graph.

    ``polygon`` is a ccw list of points.  ``corner_labels`` maps polygon
    vertex points to labels; ridge nodes at those points inherit them.
    """
    sites = list(sites)
    for i in range(len(sites)):
        for j in range(i):
            if _same(sites[i], sites[j], tol):
                raise DegenerateSites(f"sites {j} and {i} coincide")
    cells = {}
    for k, sk in enumerate(sites):
        cell = list(polygon)
        for j, sj in enumerate(sites):
            if j == k or not cell:
                continue
            a = 2 * (sj[0] - sk[0])
            b = 2 * (sj[1] - sk[1])
            c = sj[0] ** 2 + sj[1] ** 2 - sk[0] ** 2 - sk[1] ** 2
            cell = _clip(cell, a, b, c, tol)
        if len(cell) >= 3 and sign(polygon_area(cell), tol) != 0:
            cells[k] = cell
    cx = VoronoiCellComplex(sites, list(polygon), cells, tol=tol)
    _build_ridges(cx, corner_labels or {})
    return cx


def _point_key(x, tol):
    if isinstance(x[0], float):
        r = 7
        return (round(x[0], r) + 0.0, round(x[1], r) + 0.0)
    return x


def _on_polygon_boundary(x, polygon, tol):
    n = len(polygon)
    for i in range(n):
        P, Q = polygon[i], polygon[(i + 1) % n]
        if sign(unfold._cross((Q[0] - P[0], Q[1] - P[1]), (x[0] - P[0], x[1] - P[1])), tol):
            continue
        lo0, hi0 = sorted((P[0], Q[0]))
        lo1, hi1 = sorted((P[1], Q[1]))
        if sign(x[0] - lo0, tol) >= 0 and sign(hi0 - x[0], tol) >= 0 and \
                sign(x[1] - lo1, tol) >= 0 and sign(hi1 - x[1], tol) >= 0:
            return True
    return False


def _build_ridges(cx: VoronoiCellComplex, corner_labels):
    tol = cx.tol
    # clipping keeps near-boundary vertices unmoved, so float equidistance
    # is tested with the same slack as the endpoint merge radius
    loose = tol * 100 if cx.sites and isinstance(cx.sites[0][0], float) else tol
    # ridge candidates: cell edges whose midpoint is equidistant to 2+ sites
    cand = []
    for k, cell in cx.cells.items():
        m = len(cell)
        for i in range(m):
            P, Q = cell[i], cell[(i + 1) % m]
            if _same(P, Q, tol):
                continue
            mid = ((P[0] + Q[0]) / 2, (P[1] + Q[1]) / 2)
            near = nearest_sites(mid, cx.sites, loose)
            if len(near) < 2 or k not in near:
                continue
            if _on_polygon_boundary(mid, cx.polygon, tol):
                continue
            cand.append((k, near, P, Q))

    # cluster endpoints; exact mode only merges equal points, float mode
    # merges transitively within 100 tol so short ridges collapse cleanly
    pts = list(corner_labels)
    for _, _, P, Q in cand:
        pts += [P, Q]
    key_of = {}
    reps = []
    for x in pts:
        kx = _point_key(x, tol)
        if kx not in key_of:
            key_of[kx] = len(reps)
            reps.append(x)
    parent = list(range(len(reps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if reps and isinstance(reps[0][0], float):
        r = tol * 100
        order = sorted(range(len(reps)), key=lambda i: reps[i][0])
        for a_i, a in enumerate(order):
            for b in order[a_i + 1:]:
                if reps[b][0] - reps[a][0] > r:
                    break
                if abs(reps[b][1] - reps[a][1]) <= r:
                    pa, pb = find(a), find(b)
                    if pa != pb:
                        parent[max(pa, pb)] = min(pa, pb)
    label_of = {}
    for x, lab in corner_labels.items():
        label_of[find(key_of[_point_key(x, tol)])] = (lab, x)

    nodes: list[RidgeNode] = []
    node_of_root: dict = {}

    def node(x):
        root = find(key_of[_point_key(x, tol)])
        if root in node_of_root:
            return node_of_root[root]
        lab, y = label_of.get(root, (None, reps[root]))
        n = RidgeNode(len(nodes), y, nearest_sites(y, cx.sites, tol * 100 if
                                                   isinstance(y[0], float) else tol),
                      lab, _on_polygon_boundary(y, cx.polygon, tol))
        nodes.append(n)
        node_of_root[root] = n.id
        return n.id

    seen = {}
    for k, near, P, Q in cand:
        a, b = node(P), node(Q)
        if a == b:
            continue
        others = sorted(near - {k})
        pair = tuple(sorted((k, others[0])))
        key = (min(a, b), max(a, b))
        if key not in seen:
            seen[key] = Ridge(key[0], key[1], pair)
    cx.nodes = nodes
    cx.ridges = list(seen.values())
    _merge_collinear(cx)


def _merge_collinear(cx: VoronoiCellComplex):
    """Drop unlabeled degree-2 nodes between ridges of the same site pair."""
    changed = True
    while changed:
        changed = False
        inc: dict[int, list[Ridge]] = {}
        for r in cx.ridges:
            inc.setdefault(r.a, []).append(r)
            inc.setdefault(r.b, []).append(r)
        for nid, rs in inc.items():
            n = cx.nodes[nid]
            if len(rs) == 2 and n.label is None and rs[0].sites == rs[1].sites:
                r1, r2 = rs
                ends = [x for x in (r1.a, r1.b, r2.a, r2.b) if x != nid]
                cx.ridges = [r for r in cx.ridges if r is not r1 and r is not r2]
                cx.ridges.append(Ridge(min(ends), max(ends), r1.sites))
                changed = True
                break
    used = {r.a for r in cx.ridges} | {r.b for r in cx.ridges}
    remap = {}
    nodes = []
    for n in cx.nodes:
        if n.id in used:
            remap[n.id] = len(nodes)
            n.id = len(nodes)
            nodes.append(n)
    cx.nodes = nodes
    for r in cx.ridges:
        r.a, r.b = remap[r.a], remap[r.b]
    cx.__dict__.pop("adjacency", None)


def star_voronoi(star: StarPolygon) -> VoronoiCellComplex:
    labels = {x: lab for kind, lab, x in star.vertices if kind == "corner"}
    return clipped_voronoi(star.sites, star.points, star.tol, labels)


@dataclass
class RidgeTree:
    """Ridge graph as a planar tree: node degrees and leaf labels."""
    complex: VoronoiCellComplex

    @property
    def degrees(self) -> dict[int, int]:
        return {n.id: len(v) for n, v in zip(self.complex.nodes,
                                             self.complex.adjacency.values())}

    @property
    def leaves(self) -> list[RidgeNode]:
        adj = self.complex.adjacency
        return [n for n in self.complex.nodes if len(adj[n.id]) == 1]

    def is_tree(self) -> bool:
        n, e = len(self.complex.nodes), len(self.complex.ridges)
        if n == 0:
            return True
        if e != n - 1:
            return False
        adj = self.complex.adjacency
        seen, stack = {0}, [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n


def ridge_tree(cx: VoronoiCellComplex) -> RidgeTree:
    return RidgeTree(cx)
