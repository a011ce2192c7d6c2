"""Region atlases: a face cut into connected pieces of constant cut-locus class.

Classification of each sample is combinatorial (canonical code of the cut
locus).  Region boundaries have no closed form, so they are found by
adaptive refinement and bisection between samples with different codes.
"""
from __future__ import annotations

import bisect
import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import cube, cutlocus as cl
from .cube import DEFAULT_TOL

log = logging.getLogger(__name__)

# Lattice-to-face offsets, chosen irrational-looking and asymmetric so that no
# sample lands on an edge, a diagonal or a center line of the face.
OFFSET_U = (0.0314159, 0.0707107)
OFFSET_V = (0.0271828, 0.0577216)
OUT = "out"
# crossings of one region pair closer than this (face units) belong to one
# curve; bridges gaps where a wedge is thinner than a cell
CURVE_GAP = 1 / 32
# hot cells closer than this (face units) are one junction
JUNCTION_GAP = 3 / 256
# components with at most this many samples are below resolution
SLIVER = 2
# looser tolerance used right on a boundary so that vanishing edges merge
BOUNDARY_TOL = 1e-7


def lattice_uv(i, j, n: int) -> tuple[float, float]:
    (a, b), (c, d) = OFFSET_U, OFFSET_V
    return (i + a) / (n + b), (j + c) / (n + d)


def left_quadrant(u, v) -> bool:
    return u < min(v, 1 - v)


class Classifier:
    """Cached float classification of points of one face."""

    def __init__(self, face: int = 0, key: str = "full", tol: float = DEFAULT_TOL,
                 exact: bool = False):
        self.face = face
        self.exact = exact
        self.key = key
        self.tol = tol
        self.calls = 0
        self.nongeneric: list = []
        self._cache: dict = {}

    def classify(self, u: float, v: float, tol: float | None = None) -> cl.Classification:
        tol = self.tol if tol is None else tol
        k = (u, v, tol)
        c = self._cache.get(k)
        if c is None:
            self.calls += 1
            if self.exact and tol == self.tol:
                p = cube.point(self.face, mpq(u), mpq(v))
            else:
                p = cube.point(self.face, u, v, exact=False, tol=tol)
            try:
                c = cl.classify_point(p, tol)
            except cl.NotATree:
                # float merging broke the tree (happens next to corners)
                c = cl.classify_point(cube.point(self.face, mpq(u), mpq(v)), None)
            self._cache[k] = c
        return c

    def code(self, u: float, v: float, tol: float | None = None) -> str:
        return getattr(self.classify(u, v, tol), self.key)

    def region_code(self, u: float, v: float) -> str:
        """Code of the open region at (u, v).

        A sample within the merge radius of a curve reports a collapsed
        tree; it is nudged (geometrically growing steps in alternating
        irrational directions, never leaving its quadrant) until the tree
        is generic.
        """
        c = self.classify(u, v)
        if c.generic:
            return getattr(c, self.key)
        q0 = cube.quadrant_of(cube.point(self.face, u, v, exact=False))
        step = 1e-6
        for k in range(12):
            for du, dv in NUDGES:
                x, y = u + step * du, v + step * dv
                if not (0 < x < 1 and 0 < y < 1):
                    continue
                q = cube.quadrant_of(cube.point(self.face, x, y, exact=False))
                if isinstance(q0, cube.QuadrantId) and q != q0:
                    continue
                c = self.classify(x, y)
                if c.generic:
                    return getattr(c, self.key)
            step *= 2
        self.nongeneric.append((u, v))
        return getattr(self.classify(u, v), self.key)


NUDGES = ((0.731, 0.682), (-0.682, 0.731), (-0.731, -0.682), (0.682, -0.731))


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class Stratum:
    kind: str                 # "region" | "curve" | "point" | "edge" | "corner"
    code: str | None
    witness: tuple[float, float]
    size: int = 1             # samples (regions) or crossings (curves)


@dataclass
class RegionAtlas:
    face: int
    resolution: int
    depth: int
    key: str
    strata: list[Stratum] = field(default_factory=list)
    unresolved: list[tuple[float, float]] = field(default_factory=list)
    samples: int = 0
    seconds: float = 0.0
    leaves: list = field(default_factory=list)   # (x, y, size, code at low corner)
    n: int = 0                                   # lattice steps per side

    def count(self, kind: str | None = None) -> int:
        return sum(1 for s in self.strata if kind is None or s.kind == kind)

    def codes(self, kind: str | None = None) -> set[str]:
        return {s.code for s in self.strata if s.code and (kind is None or s.kind == kind)}

    def summary(self) -> dict:
        kinds = ("region", "curve", "point", "edge", "corner")
        out = {k: self.count(k) for k in kinds}
        out["total"] = self.count()
        # a cell decomposition of the closed square has V - E + F = 1
        out["euler_residual"] = (out["point"] + out["corner"] - out["curve"] - out["edge"]
                                 + out["region"] - 1)
        out["distinct_codes"] = len(self.codes())
        out["unresolved"] = len(self.unresolved)
        out["samples"] = self.samples
        out["seconds"] = round(self.seconds, 1)
        return out


class QuadGrid:
    """Adaptive quadtree over the unit face.

    Samples sit on the lattice of spacing 1/2**depth (mapped by
    ``lattice_uv`` so no sample is on a rational line); a cell is split while samples on its
    boundary disagree and it is larger than one lattice step.
    """

    def __init__(self, code_fn, resolution: int, depth: int, inside=None):
        n = 1 << depth
        if resolution & (resolution - 1) or resolution > n:
            raise ValueError("resolution must be a power of two not exceeding 2**depth")
        self.n = n
        self.code_fn = code_fn
        self.inside = inside
        self.codes: dict[tuple[int, int], str] = {}
        self.hline: dict[int, list[int]] = defaultdict(list)
        self.vline: dict[int, list[int]] = defaultdict(list)
        self.leaves: set[tuple[int, int, int]] = set()
        s = n // resolution
        for i in range(resolution):
            for j in range(resolution):
                self.leaves.add((i * s, j * s, s))

    def uv(self, i, j) -> tuple[float, float]:
        return lattice_uv(i, j, self.n)

    def code(self, i, j) -> str:
        c = self.codes.get((i, j))
        if c is None:
            u, v = self.uv(i, j)
            if self.inside is not None and not self.inside(u, v):
                c = OUT
            else:
                c = self.code_fn(u, v)
            self.codes[(i, j)] = c
            bisect.insort(self.hline[j], i)
            bisect.insort(self.vline[i], j)
        return c

    def edge_samples(self, x, y, s):
        """Samples on the boundary of cell (x, y, s), in cyclic order per side."""
        sides = []
        for (a, b, horiz) in ((y, x, True), (y + s, x, True), (x, y, False), (x + s, y, False)):
            line = self.hline[a] if horiz else self.vline[a]
            lo = bisect.bisect_left(line, b)
            hi = bisect.bisect_right(line, b + s)
            pts = [(t, a) if horiz else (a, t) for t in line[lo:hi]]
            sides.append(pts)
        return sides

    def _corners(self, x, y, s):
        for i, j in ((x, y), (x + s, y), (x, y + s), (x + s, y + s)):
            self.code(i, j)

    def uniform(self, cell) -> bool:
        x, y, s = cell
        self._corners(x, y, s)
        seen = {self.codes[p] for side in self.edge_samples(x, y, s) for p in side}
        return len(seen) == 1

    def leaf_at(self, i, j):
        """Leaf whose closed square contains lattice point (i, j) strictly inside or on its low sides."""
        s = 1
        while s <= self.n:
            c = (i - i % s, j - j % s, s)
            if c in self.leaves:
                return c
            s *= 2
        return None

    def refine(self):
        queue = sorted(self.leaves)
        while queue:
            cell = queue.pop()
            if cell not in self.leaves:
                continue
            x, y, s = cell
            if s == 1 or self.uniform(cell):
                continue
            h = s // 2
            self.leaves.discard(cell)
            kids = [(x, y, h), (x + h, y, h), (x, y + h, h), (x + h, y + h, h)]
            self.leaves.update(kids)
            for k in kids:
                self._corners(*k)
            queue.extend(kids)
            # neighbours whose sides now carry new samples
            for (i, j) in ((x + h, y - 1), (x + h, y + s), (x - 1, y + h), (x + s, y + h)):
                if 0 <= i < self.n and 0 <= j < self.n:
                    nb = self.leaf_at(i, j)
                    if nb is not None and nb[2] > 1:
                        queue.append(nb)

    def unit_segments(self):
        """Consecutive sample pairs along every leaf side."""
        done = set()
        for (x, y, s) in self.leaves:
            for side in self.edge_samples(x, y, s):
                for a, b in zip(side, side[1:]):
                    if (a, b) not in done:
                        done.add((a, b))
                        yield a, b


def _components(grid: QuadGrid):
    uf = UnionFind()
    crossings = []
    for a, b in grid.unit_segments():
        ca, cb = grid.codes[a], grid.codes[b]
        uf.find(a), uf.find(b)
        if ca == cb:
            uf.union(a, b)
        elif OUT not in (ca, cb):
            crossings.append((a, b))
    # join equal diagonal corners of a unit cell unless the other diagonal
    # is an equal pair too (a saddle, left unresolved); this keeps thin
    # wedges along the mask staircase and near junctions connected
    for (x, y, s) in grid.leaves:
        if s != 1:
            continue
        c = [grid.codes.get(p) for p in ((x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1))]
        for k in (0, 1):
            a, b, o1, o2 = c[k], c[k + 2], c[k + 1], c[(k + 3) % 4]
            if a == b and a not in (None, OUT) and (o1 != o2 or o1 == OUT):
                p = [(x, y), (x + 1, y)][k]
                q = [(x + 1, y + 1), (x, y + 1)][k]
                uf.union(p, q)
    return uf, crossings


def _lattice(gap: float, n: int) -> int:
    return max(1, round(gap * n))


def _merge_slivers(grid: QuadGrid, uf: UnionFind, crossings):
    """Join components of one code whose boundary samples are close.

    Wedges that taper into a face corner get thinner than a leaf cell and
    break into fragments; on one face no two regions share a code, so
    fragments of a code within CURVE_GAP are one region, and fragments
    of at most SLIVER samples join the largest component of their code.
    """
    edge_pts = defaultdict(set)
    for a, b in crossings:
        for p in (a, b):
            edge_pts[grid.codes[p]].add(p)
    for code, pts in edge_pts.items():
        roots = {uf.find(p) for p in pts}
        if len(roots) < 2:
            continue
        for group in _clusters(sorted(pts), _lattice(CURVE_GAP, grid.n)):
            for p in group[1:]:
                uf.union(group[0], p)
    size = defaultdict(int)
    for p, c in grid.codes.items():
        if c != OUT:
            size[uf.find(p)] += 1
    best = {}
    for r, k in size.items():
        c = grid.codes[r]
        if c not in best or k > size[best[c]]:
            best[c] = r
    for r, k in list(size.items()):
        c = grid.codes[r]
        if k <= SLIVER and best[c] != r:
            uf.union(best[c], r)


def _clusters(points, radius):
    """Group lattice points within Chebyshev distance ``radius``."""
    uf = UnionFind()
    buckets = defaultdict(list)
    r = max(1, radius)
    for p in points:
        uf.find(p)
        buckets[(p[0] // r, p[1] // r)].append(p)
    for (bx, by), pts in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q in buckets.get((bx + dx, by + dy), ()):
                    for p in pts:
                        if max(abs(p[0] - q[0]), abs(p[1] - q[1])) <= radius:
                            uf.union(p, q)
    groups = defaultdict(list)
    for p in points:
        groups[uf.find(p)].append(p)
    return list(groups.values())


def bisect_segment(clf: Classifier, a, b, iters: int = 40):
    """Point on segment a-b where the code of a first changes."""
    ca = clf.code(*a)
    for _ in range(iters):
        m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        if clf.code(*m) == ca:
            a = m
        else:
            b = m
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def _boundary_code(clf: Classifier, a, b):
    x = bisect_segment(clf, a, b)
    return x, clf.code(*x, tol=BOUNDARY_TOL)


def region_atlas(face: int = 0, resolution: int = 32, depth: int = 10, *,
                 key: str = "full", inside=None, refine_iters: int = 40,
                 edges: bool = True,
                 tol: float = DEFAULT_TOL) -> RegionAtlas:
    """Partition of a face (or the part where ``inside`` holds) by cut-locus code.

    Regions are connected components of equal-code samples.  Curves are
    connected runs of boundary crossings between one pair of regions,
    each with the code found by bisecting one crossing.  Points are
    clusters of lattice cells where three or more regions meet.  With
    ``edges`` the four face edges and corners are split the same way in 1D.
    """
    t0 = time.time()
    clf = Classifier(face, key, tol)
    grid = QuadGrid(clf.region_code, resolution, depth, inside)
    grid.refine()
    uf, crossings = _components(grid)
    atlas = RegionAtlas(face, resolution, depth, key)

    _merge_slivers(grid, uf, crossings)
    comps = defaultdict(list)
    for p, c in grid.codes.items():
        if c != OUT:
            comps[uf.find(p)].append(p)
    for root, pts in sorted(comps.items()):
        atlas.strata.append(Stratum("region", grid.codes[root], grid.uv(*root), len(pts)))

    # curves: crossings grouped by the pair of regions they separate
    by_pair = defaultdict(list)
    for a, b in crossings:
        pair = tuple(sorted((uf.find(a), uf.find(b))))
        mid = (a[0] + b[0], a[1] + b[1])          # doubled lattice coordinates
        by_pair[pair].append((mid, a, b))
    seen = {}
    for pair, items in sorted(by_pair.items()):
        mids = [m for m, _, _ in items]
        index = {m: (a, b) for m, a, b in items}
        for group in _clusters(mids, 2 * _lattice(CURVE_GAP, grid.n)):
            a, b = index[min(group)]
            x, code = _boundary_code(clf, grid.uv(*a), grid.uv(*b)) if refine_iters else (grid.uv(*a), None)
            # pieces of one curve broken where it runs into a corner
            if code is not None and code in seen:
                seen[code].size += len(group)
                continue
            st = Stratum("curve", code, x, len(group))
            seen[code] = st
            atlas.strata.append(st)

    # points: unit cells touching three or more regions
    region_codes = {s.code for s in atlas.strata if s.kind == "region"}
    hot = []
    for (x, y, s) in grid.leaves:
        if s != 1:
            continue
        roots = set()
        for side in grid.edge_samples(x, y, s):
            for p in side:
                if grid.codes[p] != OUT:
                    roots.add(uf.find(p))
        if len(roots) >= 3:
            hot.append((x, y))
    for group in _clusters(hot, _lattice(JUNCTION_GAP, grid.n)):
        cx = sum(p[0] for p in group) / len(group) + 0.5
        cy = sum(p[1] for p in group) / len(group) + 0.5
        w = grid.uv(cx, cy)
        code = clf.code(*w, tol=BOUNDARY_TOL)
        # the centroid of a hot cluster usually falls just inside a region
        atlas.strata.append(Stratum("point", None if code in region_codes else code, w, len(group)))

    if edges and inside is None:
        _edge_strata(atlas, clf, grid.n, refine_iters)

    atlas.unresolved.extend(clf.nongeneric)
    atlas.samples = clf.calls
    atlas.n = grid.n
    atlas.leaves = sorted((x, y, sz, grid.codes[(x, y)]) for x, y, sz in grid.leaves)
    atlas.seconds = time.time() - t0
    log.info("atlas face %d: %s", face, atlas.summary())
    return atlas


def _edge_strata(atlas: RegionAtlas, clf: Classifier, n: int, iters: int):
    """Split the four face edges (corners excluded) into constant-code runs."""
    f = cube.FACES[atlas.face]
    for lab in sorted(f.corners):
        atlas.strata.append(Stratum("corner", f"corner{lab}", f.corner_uv(lab)))
    for side in range(4):
        def at(k):
            s = lattice_uv(k, k, n)[0]
            return [(0.0, s), (s, 0.0), (1.0, s), (s, 1.0)][side]
        pts = [at(k) for k in range(n + 1)]
        codes = [clf.code(*p) for p in pts]
        start = 0
        for k in range(1, n + 1):
            if codes[k] != codes[k - 1]:
                atlas.strata.append(Stratum("edge", codes[start], pts[start], k - start))
                x = bisect_segment(clf, pts[k - 1], pts[k], iters)
                atlas.strata.append(Stratum("point", clf.code(*x, tol=BOUNDARY_TOL), x))
                start = k
        atlas.strata.append(Stratum("edge", codes[start], pts[start], n + 1 - start))


# ---------------------------------------------------------------------------
# top halves in the left quadrant of face 5678

# Each diagram is a caterpillar read from the connecting segment upwards:
# (label of the trunk vertex or None, leaves hanging off it).
TOP_HALF_DIAGRAMS = {
    "D": [(None, [1]), (None, [6]), (None, [5, 2])],
    "DF": [(None, [1]), (None, [5, 6, 2])],
    "F": [(None, [1]), (None, [5]), (None, [2, 6])],
    "FA": [(None, [1, 5]), (None, [6, 2])],
    "A": "A",
    "E": [(None, [1, 6]), (2, [5])],
    "DD'": [(None, [1, 6]), (None, [5, 2])],
    "*": [(None, [1, 6, 5, 2])],
    "D'": [(None, [6]), (None, [1]), (None, [5, 2])],
    "D'F'": [(None, [6]), (None, [1, 2, 5])],
    "F'": [(None, [6]), (None, [2]), (None, [5, 1])],
    "F'A": [(None, [6, 2]), (None, [1, 5])],
}
REGION_NAMES = ("D", "F", "A", "D'", "F'")
CURVE_NAMES = ("DF", "FA", "DD'", "D'F'", "F'A")


def diagram_tree(name: str) -> cl.LabeledTree:
    shape = TOP_HALF_DIAGRAMS[name]
    labels, adj = {}, defaultdict(set)

    def add(n, lab, parent):
        labels[n] = lab
        adj[n]
        if parent is not None:
            adj[n].add(parent)
            adj[parent].add(n)

    add("R", "R", None)
    if shape == "A":
        add("v", None, "R")
        for k, pair in enumerate(((1, 5), (2, 6))):
            add(("w", k), None, "v")
            for lab in pair:
                add(lab, lab, ("w", k))
    else:
        prev = "R"
        for k, (lab, leaves) in enumerate(shape):
            add(("t", k), lab, prev)
            for x in leaves:
                add(x, x, ("t", k))
            prev = ("t", k)
    return cl.LabeledTree(labels, dict(adj))


def diagram_codes() -> dict[str, str]:
    return {name: cl.canonical_code(diagram_tree(name), "R") for name in TOP_HALF_DIAGRAMS}


def left_quadrant_taxonomy(resolution: int = 16, depth: int = 8) -> dict[str, tuple[str, tuple]]:
    """Distinct top-half codes of the closed-at-the-edge left quadrant of face 5678.

    Open regions and curves come from the adaptive atlas, the edge 5-8 is
    sampled on its own, and the junction point is located by bisection.
    Returns code -> (kind, witness).
    """
    atlas = region_atlas(0, resolution, depth, key="top", inside=left_quadrant)
    found: dict[str, tuple[str, tuple]] = {}
    for s in atlas.strata:
        if s.code is not None:
            found.setdefault(s.code, (s.kind, s.witness))
    clf = Classifier(0, "top")
    n = 1 << depth
    for k in range(n + 1):
        v = lattice_uv(k, k, n)[1]
        found.setdefault(clf.code(0.0, v), ("edge", (0.0, v)))
    star = locate_star()
    found.setdefault(clf.code(*star, tol=BOUNDARY_TOL), ("point", star))
    return found


# ---------------------------------------------------------------------------
# the five-region junction in the left quadrant

LQ_NAMES = {
    "(R(((1)(5))((2)(6))))": "A",
    "(R((((2)(5))(6))(1)))": "D",
    "(R((((2)(5))(1))(6)))": "D'",
    "(R((((2)(6))(5))(1)))": "F",
    "(R((((1)(5))(2))(6)))": "F'",
}


def locate_star(tol: float = 1e-9, clf: Classifier | None = None) -> tuple[float, float]:
    """Junction of D, D', F, F' and A in the left quadrant of face 5678.

    Nested bisection: for a column u the D'/D transition height is found by
    bisection; the column is left of the junction iff the two codes meeting
    there are exactly D' and D.  Samples are classified exactly so the
    bisection can go below the float merge radius.
    """
    clf = clf or Classifier(0, "top", exact=True)
    names = {v: k for k, v in LQ_NAMES.items()}
    lower = {names["D'"], names["F'"]}

    def column(u):
        a, b = (u, 0.3), (u, 0.55)
        while b[1] - a[1] > tol / 4:
            m = (u, (a[1] + b[1]) / 2)
            if clf.code(*m) in lower:
                a = m
            else:
                b = m
        return a, b

    lo, hi = 0.06, 0.12
    while hi - lo > tol:
        u = (lo + hi) / 2
        a, b = column(u)
        if clf.code(*a) == names["D'"] and clf.code(*b) == names["D"]:
            lo = u
        else:
            hi = u
    a, b = column((lo + hi) / 2)
    return ((lo + hi) / 2, (a[1] + b[1]) / 2)


def star_point(tol: float = 1e-9) -> cube.SurfacePoint:
    """The junction point as a float surface point (classify it with BOUNDARY_TOL)."""
    u, v = locate_star(tol)
    return cube.point(0, u, v, exact=False)
