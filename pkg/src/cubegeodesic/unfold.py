"""Face-sequence unfoldings and exact minimal geodesics on the cube.

A placement maps face-local (u, v) into the plane of the root face as
``x -> rot(k, x) + t`` with k quarter turns and an integer translation, so
placed faces are always axis-aligned unit squares with integer corners.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import cube
from .cube import DEFAULT_TOL, FACES, SurfacePoint, sign

MAX_FACES = 5


class DegenerateSourceTarget(ValueError):
    pass


class FoldError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# planar isometries

def rot(k: int, x):
    k %= 4
    a, b = x
    if k == 0:
        return (a, b)
    if k == 1:
        return (-b, a)
    if k == 2:
        return (-a, -b)
    return (b, -a)


@dataclass(frozen=True)
class PlanarIsometry:
    rotation: int                    # quarter turns, counter-clockwise
    translation: tuple[int, int]

    def __call__(self, x):
        r = rot(self.rotation, x)
        return (r[0] + self.translation[0], r[1] + self.translation[1])

    def inverse_apply(self, y):
        d = (y[0] - self.translation[0], y[1] - self.translation[1])
        return rot(-self.rotation, d)

    def linear(self, d):
        return rot(self.rotation, d)

    def inverse_linear(self, d):
        return rot(-self.rotation, d)

    def square(self) -> tuple[int, int]:
        """Lower-left corner of the placed unit square."""
        pts = [self((0, 0)), self((1, 1))]
        return (min(p[0] for p in pts), min(p[1] for p in pts))


IDENTITY = PlanarIsometry(0, (0, 0))


def hinge_placement(f: int, pf: PlanarIsometry, g: int) -> PlanarIsometry:
    """Placement of face ``g`` unfolded across its edge with placed face ``f``."""
    a, b = cube.shared_edge(f, g)
    fa = pf(FACES[f].corner_uv(a))
    fb = pf(FACES[f].corner_uv(b))
    ga = FACES[g].corner_uv(a)
    gb = FACES[g].corner_uv(b)
    want = (fb[0] - fa[0], fb[1] - fa[1])
    have = (gb[0] - ga[0], gb[1] - ga[1])
    for k in range(4):
        if rot(k, have) == want:
            r = rot(k, ga)
            return PlanarIsometry(k, (fa[0] - r[0], fa[1] - r[1]))
    raise AssertionError("hinge edges are not congruent")


@dataclass(frozen=True)
class Unfolding:
    faces: tuple[int, ...]
    hinges: tuple[tuple[int, int], ...]
    isometries: tuple[PlanarIsometry, ...]
    # placed hinge endpoints, paired with the corner labels they represent
    hinge_segments: tuple = field(repr=False, compare=False, default=())

    @property
    def last(self) -> int:
        return self.faces[-1]


def _make_unfolding(seq: tuple[int, ...]) -> Unfolding:
    isos = [IDENTITY]
    hinges, segs = [], []
    for f, g in zip(seq, seq[1:]):
        e = cube.shared_edge(f, g)
        hinges.append(e)
        pf = isos[-1]
        a, b = e
        segs.append((pf(FACES[f].corner_uv(a)), pf(FACES[f].corner_uv(b)), a, b))
        isos.append(hinge_placement(f, pf, g))
    return Unfolding(tuple(seq), tuple(hinges), tuple(isos), tuple(segs))


@lru_cache(maxsize=None)
def _all_sequences(src: int, max_faces: int) -> tuple[Unfolding, ...]:
    out = []

    def grow(seq):
        out.append(_make_unfolding(tuple(seq)))
        if len(seq) == max_faces:
            return
        for g in cube.neighbours(seq[-1]):
            if len(seq) >= 2 and g == seq[-2]:
                continue
            seq.append(g)
            grow(seq)
            seq.pop()

    grow([src])
    return tuple(out)


def enumerate_unfoldings(src, dst, max_faces: int = MAX_FACES) -> list[Unfolding]:
    """Non-backtracking face sequences from ``src`` to ``dst`` with placements."""
    if max_faces < 1:
        raise ValueError("max_faces must be >= 1")
    s, d = cube.face(src).id, cube.face(dst).id
    return [u for u in _all_sequences(s, max_faces) if u.last == d]


# ---------------------------------------------------------------------------
# geodesics

@dataclass(frozen=True)
class Crossing:
    edge: tuple[int, int]
    point3d: tuple
    param: object            # position along the planar segment, in (0, 1)


@dataclass(frozen=True)
class Geodesic:
    source: SurfacePoint
    target: SurfacePoint
    unfolding: Unfolding
    planar_segment: tuple    # (source image, target image) in the root chart
    length2: object
    crossings: tuple[Crossing, ...]
    root: int                # chart the planar segment lives in

    @property
    def length(self) -> float:
        return math.sqrt(float(self.length2))

    @property
    def key(self) -> tuple:
        return tuple(c.point3d for c in self.crossings)

    @property
    def direction(self):
        """Planar direction (root chart) leaving the source."""
        s, t = self.planar_segment
        return (t[0] - s[0], t[1] - s[1])

    def polyline3d(self) -> list[tuple]:
        return [self.source.to3d(), *[c.point3d for c in self.crossings],
                self.target.to3d()]

    @property
    def surface_polyline(self) -> list[SurfacePoint]:
        return [cube.from3d(x, exact=self.source.exact) for x in self.polyline3d()]

    def arrival3d(self):
        """3D direction of travel on the last straight piece."""
        pts = self.polyline3d()
        a, b = pts[-2], pts[-1]
        return tuple(b[i] - a[i] for i in range(3))

    def point_at(self, s: float):
        """3D point at arc-length fraction ``s`` (float)."""
        pts = [tuple(float(c) for c in x) for x in self.polyline3d()]
        segs = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
        total = sum(segs)
        if total == 0:
            return pts[0]
        want = s * total
        for (a, b), L in zip(zip(pts, pts[1:]), segs):
            if want <= L or L == 0 and want <= 0:
                f = want / L if L else 0.0
                return tuple(a[i] + f * (b[i] - a[i]) for i in range(3))
            want -= L
        return pts[-1]


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _check(unf: Unfolding, s, t, tol):
    """Crossings of segment s->t with the hinges of ``unf`` or None if invalid."""
    d = (t[0] - s[0], t[1] - s[1])
    out = []
    last = 0
    for h0, h1, a, b in unf.hinge_segments:
        e = (h1[0] - h0[0], h1[1] - h0[1])
        den = _cross(d, e)
        if sign(den, tol) == 0:
            return None
        w = (h0[0] - s[0], h0[1] - s[1])
        tt = _cross(w, e) / den
        lam = _cross(w, d) / den
        if sign(tt, tol) < 0 or sign(tt - 1, tol) > 0:
            return None
        if sign(lam, tol) < 0 or sign(lam - 1, tol) > 0:
            return None
        at_end = sign(tt, tol) == 0 or sign(tt - 1, tol) == 0
        if not at_end and (sign(lam, tol) == 0 or sign(lam - 1, tol) == 0):
            return None          # through a corner
        if sign(tt - last, tol) < 0:
            return None
        if out and not at_end and sign(tt - last, tol) == 0:
            return None
        last = tt
        out.append((a, b, lam, tt, at_end))
    return out


def _to_crossings(raw) -> tuple[Crossing, ...]:
    out = []
    for a, b, lam, tt, at_end in raw:
        if at_end:
            continue
        ca, cb = cube.CORNERS[a], cube.CORNERS[b]
        x = tuple(ca[i] + lam * (cb[i] - ca[i]) for i in range(3))
        out.append(Crossing((a, b), x, tt))
    return tuple(out)


def _candidates(p: SurfacePoint, q: SurfacePoint, tol, max_faces=MAX_FACES):
    root = p.face
    s = (p.u, p.v)
    targets = {f: cube.local_coords(q, f) for f in cube.incident_faces(q, tol)}
    cands = []
    for unf in _all_sequences(root, max_faces):
        if unf.last in targets:
            T = unf.isometries[-1](targets[unf.last])
            d2 = (T[0] - s[0]) ** 2 + (T[1] - s[1]) ** 2
            cands.append((d2, unf, T))
    cands.sort(key=lambda c: c[0])
    return root, s, cands


def _tied(a, b, tol):
    return sign(a - b, tol) == 0


def minimal_geodesics(p: SurfacePoint, q: SurfacePoint, *, tol: float = DEFAULT_TOL,
                      max_faces: int = MAX_FACES) -> list[Geodesic]:
    """All distinct minimal geodesics from ``p`` to ``q``."""
    if p == q:
        raise DegenerateSourceTarget(repr(p))
    root, s, cands = _candidates(p, q, tol, max_faces)
    best = None
    found: dict[tuple, Geodesic] = {}
    for d2, unf, T in cands:
        if best is not None and not _tied(d2, best, tol):
            break
        raw = _check(unf, s, T, tol)
        if raw is None:
            continue
        if best is None:
            best = d2
        g = Geodesic(p, q, unf, (s, T), d2, _to_crossings(raw), root)
        k = _key(g, tol)
        if k not in found:
            found[k] = g
    return list(found.values())


def _key(g: Geodesic, tol):
    if g.source.exact:
        return g.key
    r = max(1, int(round(-math.log10(tol))) - 2)
    return tuple(tuple(round(float(c), r) for c in x) for x in g.key)


def geodesic_distance2(p: SurfacePoint, q: SurfacePoint, *, tol: float = DEFAULT_TOL):
    """Squared geodesic distance (exact for exact inputs)."""
    if p == q:
        return 0 if p.exact else 0.0
    root, s, cands = _candidates(p, q, tol)
    for d2, unf, T in cands:
        if _check(unf, s, T, tol) is not None:
            return d2
    raise AssertionError("no valid unfolding found")


def geodesic_distance(p: SurfacePoint, q: SurfacePoint, *, tol: float = DEFAULT_TOL) -> float:
    return math.sqrt(float(geodesic_distance2(p, q, tol=tol)))


def multiplicity(p: SurfacePoint, q: SurfacePoint, *, tol: float = DEFAULT_TOL) -> int:
    return len(minimal_geodesics(p, q, tol=tol))


# ---------------------------------------------------------------------------
# folding planar points back onto the surface

def walk(face: int, placement: PlanarIsometry, a, b, tol: float = DEFAULT_TOL):
    """Follow the planar segment a->b across placed faces.

    Starts in ``face`` placed by ``placement`` (``a`` must lie in that
    square) and unfolds neighbours as the segment leaves each square.
    Returns a list of (face, placement, t_in, t_out).
    """
    d = (b[0] - a[0], b[1] - a[1])
    pieces = []
    t_cur = 0
    prev = None
    for _ in range(16):
        x0, y0 = placement.square()
        t_out, side = _exit(a, d, x0, y0, t_cur, tol)
        if t_out is None:
            raise FoldError("segment leaves the face through a corner")
        if sign(t_out - 1, tol) >= 0:
            pieces.append((face, placement, t_cur, 1))
            return pieces
        pieces.append((face, placement, t_cur, t_out))
        nxt = _across(face, placement, side)
        if nxt == prev and sign(t_out - t_cur, tol) == 0:
            raise FoldError("walk is stuck on an edge")
        prev = face
        placement = hinge_placement(face, placement, nxt)
        face = nxt
        t_cur = t_out
    raise FoldError("segment too long to fold")


def _exit(a, d, x0, y0, t_min, tol):
    """Parameter where a + t d leaves the square [x0,x0+1]x[y0,y0+1]."""
    best, sides = None, []
    for axis in (0, 1):
        if sign(d[axis], tol) == 0:
            continue
        lo = (x0, y0)[axis]
        bound = lo + 1 if d[axis] > 0 else lo
        t = (bound - a[axis]) / d[axis]
        side = (axis, bound)
        if best is None or sign(t - best, tol) < 0:
            best, sides = t, [side]
        elif sign(t - best, tol) == 0:
            sides.append(side)
    if best is None:
        return 1, None
    if sign(best - 1, tol) >= 0:
        return best, None
    if len(sides) > 1:
        return None, None
    return best, sides[0]


def _across(face: int, placement: PlanarIsometry, side) -> int:
    axis, bound = side
    for g in cube.neighbours(face):
        a, b = cube.shared_edge(face, g)
        pa = placement(FACES[face].corner_uv(a))
        pb = placement(FACES[face].corner_uv(b))
        if pa[axis] == bound and pb[axis] == bound:
            return g
    raise AssertionError("no neighbour across side")


def fold(face: int, placement: PlanarIsometry, a, b, tol: float = DEFAULT_TOL) -> SurfacePoint:
    """Surface point reached by the straight planar segment a->b."""
    f, pl, _, _ = walk(face, placement, a, b, tol)[-1]
    u, v = pl.inverse_apply(b)
    return cube.canonicalize(f, u, v, tol=tol)


def fold_polyline(face: int, placement: PlanarIsometry, a, b,
                  tol: float = DEFAULT_TOL) -> list[tuple]:
    """3D polyline of the straight planar segment a->b folded onto the cube."""
    d = (b[0] - a[0], b[1] - a[1])
    pts = []
    for f, pl, t0, t1 in walk(face, placement, a, b, tol):
        for t in (t0, t1):
            y = (a[0] + t * d[0], a[1] + t * d[1])
            u, v = pl.inverse_apply(y)
            x = FACES[f].to3d(u, v)
            if not pts or any(sign(x[i] - pts[-1][i], tol) for i in range(3)):
                pts.append(x)
    return pts
