"""Cut loci as labeled trees on the cube surface, halves and canonical codes."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import cube, star as starmod, unfold
from .cube import DEFAULT_TOL, SurfacePoint, sign

LQ_TOP = frozenset({1, 2, 5, 6})      # top half for the quadrant of face 5678 at edge 5-8


class NoConnectingSegment(RuntimeError):
    pass


class NotATree(RuntimeError):
    """The folded ridge graph is not a tree (numerical breakdown)."""


# ---------------------------------------------------------------------------
# labeled trees and canonical codes

@dataclass
class LabeledTree:
    labels: dict                        # node -> corner label, "R" for a root marker, or None
    adj: dict                           # node -> set of nodes

    def relabeled(self, perm: dict) -> "LabeledTree":
        labels = {n: (perm.get(l, l) if isinstance(l, int) else l)
                  for n, l in self.labels.items()}
        return LabeledTree(labels, {n: set(a) for n, a in self.adj.items()})

    def degree(self, n) -> int:
        return len(self.adj[n])

    def leaf_labels(self) -> frozenset:
        return frozenset(l for n, l in self.labels.items()
                         if isinstance(l, int) and len(self.adj[n]) == 1)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted((len(a) for a in self.adj.values()), reverse=True))

    def find(self, label):
        for n, l in self.labels.items():
            if l == label:
                return n
        return None


def _encode(t: LabeledTree, v, parent) -> str:
    kids = sorted(_encode(t, w, v) for w in t.adj[v] if w != parent)
    lab = t.labels.get(v)
    return "(" + ("" if lab is None else str(lab)) + "".join(kids) + ")"


def _centers(t: LabeledTree) -> list:
    if len(t.adj) <= 2:
        return list(t.adj)
    deg = {n: len(a) for n, a in t.adj.items()}
    layer = [n for n, d in deg.items() if d <= 1]
    remaining = len(deg)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for n in layer:
            for w in t.adj[n]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return layer


def canonical_code(t: LabeledTree, root=None) -> str:
    """String equal for two trees iff there is a label-preserving isomorphism.

    With ``root`` the code is for the rooted tree.
    """
    if not t.adj:
        return "()"
    if root is not None:
        return _encode(t, root, None)
    cs = _centers(t)
    if len(cs) == 1:
        return _encode(t, cs[0], None)
    a, b = cs
    ea, eb = _encode(t, a, b), _encode(t, b, a)
    return "E" + "".join(sorted((ea, eb)))


# ---------------------------------------------------------------------------
# cut-locus graph

@dataclass
class CutVertex:
    point: SurfacePoint
    degree: int
    label: int | None
    planar: tuple | None = None
    sites: frozenset = frozenset()


@dataclass
class CutEdge:
    a: int
    b: int
    polyline: list                      # 3D points
    sites: tuple | None = None


@dataclass
class CutLocusGraph:
    source: SurfacePoint
    vertices: list[CutVertex]
    edges: list[CutEdge]
    star: starmod.StarPolygon | None = None
    complex: starmod.VoronoiCellComplex | None = None
    connecting_segment: tuple | None = field(default=None)

    def tree(self) -> LabeledTree:
        adj = {i: set() for i in range(len(self.vertices))}
        for e in self.edges:
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
        return LabeledTree({i: v.label for i, v in enumerate(self.vertices)}, adj)

    @property
    def leaf_labels(self) -> frozenset:
        return self.tree().leaf_labels()

    def vertices_of_degree(self, d: int) -> list[CutVertex]:
        return [v for v in self.vertices if v.degree == d]

    def code(self) -> str:
        return canonical_code(self.tree())


def _corner_cut_locus(p: SurfacePoint) -> CutLocusGraph:
    c = cube.corner_label(p)
    x = cube.CORNERS[c]
    opp_xyz = tuple(1 - t for t in x)
    opp = cube.CORNER_AT[opp_xyz]
    center = CutVertex(cube.corner_point(opp, p.exact), 6, opp)
    verts = [center]
    edges = []
    for lab in range(1, 9):
        if lab in (c, opp):
            continue
        verts.append(CutVertex(cube.corner_point(lab, p.exact), 1, lab))
        edges.append(CutEdge(0, len(verts) - 1, [opp_xyz, cube.CORNERS[lab]]))
    return CutLocusGraph(p, verts, edges)


def cut_locus(p: SurfacePoint, tol: float = DEFAULT_TOL) -> CutLocusGraph:
    """Cut locus of ``p`` folded from the star unfolding onto the cube."""
    if cube.is_corner(p, tol):
        return _corner_cut_locus(p)
    st = starmod.star_unfold(p, tol)
    cx = starmod.star_voronoi(st)
    adj = cx.adjacency
    verts = []
    for n in cx.nodes:
        k = min(n.sites)
        if n.label is not None:
            sp = cube.corner_point(n.label, p.exact)
        else:
            sp = st.fold(k, n.point)
        verts.append(CutVertex(sp, len(adj[n.id]), n.label, n.point, n.sites))
    edges = []
    for r in cx.ridges:
        k = r.sites[0]
        a, b = cx.nodes[r.a].point, cx.nodes[r.b].point
        edges.append(CutEdge(r.a, r.b, st.fold_segment(k, a, b), r.sites))
    g = CutLocusGraph(p, verts, edges, st, cx)
    if len(edges) != len(verts) - 1 or not _connected(g.tree()):
        raise NotATree(f"{len(verts)} vertices, {len(edges)} edges at {p}")
    return g


def _connected(t: LabeledTree) -> bool:
    if not t.adj:
        return True
    start = next(iter(t.adj))
    seen = {start}
    stack = [start]
    while stack:
        for w in t.adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(t.adj)


# ---------------------------------------------------------------------------
# quadrant frames and halves

@lru_cache(maxsize=None)
def quadrant_rotation(q: cube.QuadrantId) -> cube.SymmetryElement:
    """The unique rotation taking quadrant ``q`` to quadrant 0 of face 5678."""
    f = cube.FACES[q.face]
    cu = [("0.2", "0.5"), ("0.5", "0.2"), ("0.8", "0.5"), ("0.5", "0.8")][q.quadrant]
    probe = cube.point(f.id, *cu)
    target = cube.QuadrantId(0, 0)
    for g in cube.rotation_group():
        if cube.quadrant_of(cube.apply_symmetry(g, probe)) == target:
            return g
    raise AssertionError(f"no rotation for {q}")


def home_quadrant(p: SurfacePoint, tol: float = DEFAULT_TOL) -> cube.QuadrantId:
    """Quadrant used to orient ``p``'s cut locus (closed-quadrant convention).

    Edge points use the quadrant of their canonical face that they bound;
    diagonal and center points use the lowest adjacent quadrant index.
    """
    q = cube.quadrant_of(p, tol)
    if isinstance(q, cube.QuadrantId):
        return q
    u, v = p.u, p.v
    if q == "edge":
        if sign(u, tol) == 0:
            return cube.QuadrantId(p.face, 0)
        if sign(v, tol) == 0:
            return cube.QuadrantId(p.face, 1)
        if sign(u - 1, tol) == 0:
            return cube.QuadrantId(p.face, 2)
        return cube.QuadrantId(p.face, 3)
    if q == "center":
        return cube.QuadrantId(p.face, 0)
    a = sign(v - u, tol)
    b = sign(1 - u - v, tol)
    if a == 0:        # main diagonal: quadrants 0|1 below center, 2|3 above
        return cube.QuadrantId(p.face, 0 if b > 0 else 2)
    return cube.QuadrantId(p.face, 0 if a > 0 else 1)


def top_group(q: cube.QuadrantId) -> frozenset:
    g = quadrant_rotation(q)
    cp = g.corner_perm
    return frozenset(l for l in range(1, 9) if cp[l] in LQ_TOP)


@dataclass
class HalfGraph:
    half: str                         # "top" | "bottom"
    tree: LabeledTree
    root: object                      # node carrying the "R" marker
    attachment: object                # node of the half touching the connecting segment

    def code(self) -> str:
        return canonical_code(self.tree, self.root)


def _spanning(t: LabeledTree, nodes) -> set:
    """Minimal subtree containing ``nodes``."""
    nodes = set(nodes)
    if not nodes:
        return set()
    start = next(iter(nodes))
    parent = {start: None}
    order = [start]
    for x in order:
        for y in t.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    keep = set()
    for n in nodes:
        while n is not None and n not in keep:
            keep.add(n)
            n = parent[n]
    # prune to the minimal subtree: strip unmarked leaves
    changed = True
    while changed:
        changed = False
        for n in list(keep):
            if n in nodes:
                continue
            if sum(1 for w in t.adj[n] if w in keep) <= 1:
                keep.discard(n)
                changed = True
    return keep


def _path(t: LabeledTree, a, b) -> list:
    parent = {a: None}
    order = [a]
    for x in order:
        for y in t.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    out = [b]
    while out[-1] != a:
        out.append(parent[out[-1]])
    return out[::-1]


def split_tree(t: LabeledTree, top: frozenset):
    """Split a cut-locus tree into its two halves.

    Returns (top HalfGraph, bottom HalfGraph, connecting (a, b)), where
    a == b when the connecting segment degenerates to a point.
    """
    tops = [n for n, l in t.labels.items() if isinstance(l, int) and l in top]
    bots = [n for n, l in t.labels.items() if isinstance(l, int) and l not in top]
    st, sb = _spanning(t, tops), _spanning(t, bots)
    common = st & sb
    if len(common) > 1:
        raise NoConnectingSegment("halves overlap in more than one vertex")
    if common:
        a = b = next(iter(common))
    else:
        best = None
        for x in st:
            for y in sb:
                pth = _path(t, x, y)
                if best is None or len(pth) < len(best):
                    best = pth
        if best is None or len(best) != 2:
            raise NoConnectingSegment("halves are not joined by a single edge")
        a, b = best
    return _half(t, st, a, "top"), _half(t, sb, b, "bottom"), (a, b)


def _half(t: LabeledTree, keep: set, attach, name: str) -> HalfGraph:
    labels = {n: t.labels[n] for n in keep}
    adj = {n: {w for w in t.adj[n] if w in keep} for n in keep}
    root = ("R", name)
    labels[root] = "R"
    adj[root] = {attach}
    adj[attach].add(root)
    return HalfGraph(name, LabeledTree(labels, adj), root, attach)


def split_halves(g: CutLocusGraph, tol: float = DEFAULT_TOL):
    if cube.is_corner(g.source, tol):
        raise NoConnectingSegment("corner sources have no halves")
    q = home_quadrant(g.source, tol)
    top, bot, conn = split_tree(g.tree(), top_group(q))
    g.connecting_segment = conn
    return top, bot


@dataclass(frozen=True)
class Classification:
    full: str
    top: str
    bottom: str
    degrees: tuple = ()

    @property
    def generic(self) -> bool:
        """True for the cut-locus shape of an open region: six degree-3 nodes, eight leaves."""
        return self.degrees == GENERIC_DEGREES


GENERIC_DEGREES = (3,) * 6 + (1,) * 8


def classify_point(p: SurfacePoint, tol: float = DEFAULT_TOL) -> Classification:
    g = cut_locus(p, tol)
    top, bot = split_halves(g, tol)
    t = g.tree()
    return Classification(g.code(), top.code(), bot.code(), t.degree_sequence())


# ---------------------------------------------------------------------------
# membership

@dataclass(frozen=True)
class Location:
    kind: str                        # "off" | "edge" | "vertex"
    index: int | None = None
    multiplicity: int = 1


def _on_segment3(x, a, b, tol):
    d = [b[i] - a[i] for i in range(3)]
    w = [x[i] - a[i] for i in range(3)]
    cr = (d[1] * w[2] - d[2] * w[1], d[2] * w[0] - d[0] * w[2], d[0] * w[1] - d[1] * w[0])
    if any(sign(c, tol) for c in cr):
        return False
    dot = sum(d[i] * w[i] for i in range(3))
    dd = sum(d[i] * d[i] for i in range(3))
    return sign(dot, tol) >= 0 and sign(dot - dd, tol) <= 0


def locate_on_cut_locus(p: SurfacePoint, q: SurfacePoint, g: CutLocusGraph | None = None,
                        tol: float = DEFAULT_TOL) -> Location:
    if p == q:
        raise unfold.DegenerateSourceTarget(repr(p))
    if g is None:
        g = cut_locus(p, tol)
    x = q.to3d()
    for i, v in enumerate(g.vertices):
        y = v.point.to3d()
        if all(sign(x[j] - y[j], tol) == 0 for j in range(3)):
            if v.degree == 1:
                return Location("off", None, 1)
            return Location("vertex", i, v.degree)
    for i, e in enumerate(g.edges):
        for a, b in zip(e.polyline, e.polyline[1:]):
            if _on_segment3(x, a, b, tol):
                return Location("edge", i, 2)
    return Location("off", None, 1)
