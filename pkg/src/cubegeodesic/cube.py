"""Unit-cube surface model: faces, corner labels, surface points, symmetries.

Corners carry the labels 1..8.  Face 5678 lies in z=0 with
5=(0,0,0), 6=(1,0,0), 7=(1,1,0), 8=(0,1,0); corner i+4 sits directly
below corner i, so 8 is opposite 2, 5 opposite 3, 6 opposite 4 and 7
opposite 1.

Every face has a local chart (u, v) in [0,1]^2 oriented so that the chart
is seen from inside the cube.  Unfolding neighbouring faces into the plane
of one face therefore never needs a reflection.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from gmpy2 import mpq

DEFAULT_TOL = 1e-9

CORNERS: dict[int, tuple[int, int, int]] = {
    1: (0, 0, 1), 2: (1, 0, 1), 3: (1, 1, 1), 4: (0, 1, 1),
    5: (0, 0, 0), 6: (1, 0, 0), 7: (1, 1, 0), 8: (0, 1, 0),
}
CORNER_AT = {xyz: label for label, xyz in CORNERS.items()}


class CubeError(ValueError):
    pass


class CoordinateOutOfRange(CubeError):
    pass


class IsCorner(CubeError):
    pass


@dataclass(frozen=True)
class Face:
    id: int
    name: str               # corner labels, e.g. "5678"
    origin: tuple[int, int, int]
    u_axis: tuple[int, int, int]
    v_axis: tuple[int, int, int]

    @property
    def corners(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.name)

    @property
    def inward_normal(self) -> tuple[int, int, int]:
        return _cross3(self.u_axis, self.v_axis)

    def to3d(self, u, v):
        o, a, b = self.origin, self.u_axis, self.v_axis
        return tuple(o[i] + u * a[i] + v * b[i] for i in range(3))

    def from3d(self, x):
        """Local (u, v) of a 3D point assumed to lie in the face plane."""
        d = [x[i] - self.origin[i] for i in range(3)]
        u = sum(d[i] * self.u_axis[i] for i in range(3))
        v = sum(d[i] * self.v_axis[i] for i in range(3))
        return u, v

    def corner_uv(self, label: int) -> tuple[int, int]:
        u, v = self.from3d(CORNERS[label])
        return int(u), int(v)


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


# Ordered corner quadruples follow the chart boundary (0,0),(1,0),(1,1),(0,1).
FACES: tuple[Face, ...] = (
    Face(0, "5678", (0, 0, 0), (1, 0, 0), (0, 1, 0)),
    Face(1, "1432", (0, 0, 1), (0, 1, 0), (1, 0, 0)),
    Face(2, "5126", (0, 0, 0), (0, 0, 1), (1, 0, 0)),
    Face(3, "8734", (0, 1, 0), (1, 0, 0), (0, 0, 1)),
    Face(4, "5841", (0, 0, 0), (0, 1, 0), (0, 0, 1)),
    Face(5, "6237", (1, 0, 0), (0, 0, 1), (0, 1, 0)),
)
FACE_BY_NAME = {f.name: f for f in FACES}
FACE_BY_CORNERS = {frozenset(f.corners): f for f in FACES}


def face(key) -> Face:
    """Look a face up by id, by corner string in any order, or pass through."""
    if isinstance(key, Face):
        return key
    if isinstance(key, int):
        return FACES[key]
    k = frozenset(int(c) for c in str(key))
    try:
        return FACE_BY_CORNERS[k]
    except KeyError:
        raise CubeError(f"no face with corners {key!r}") from None


@lru_cache(maxsize=None)
def edges() -> tuple[tuple[int, int], ...]:
    """The 12 cube edges as sorted corner-label pairs."""
    out = []
    for a, b in itertools.combinations(range(1, 9), 2):
        pa, pb = CORNERS[a], CORNERS[b]
        if sum(abs(pa[i] - pb[i]) for i in range(3)) == 1:
            out.append((a, b))
    return tuple(out)


@lru_cache(maxsize=None)
def shared_edge(f1: int, f2: int) -> tuple[int, int] | None:
    common = set(FACES[f1].corners) & set(FACES[f2].corners)
    if len(common) != 2:
        return None
    return tuple(sorted(common))


@lru_cache(maxsize=None)
def neighbours(f: int) -> tuple[int, ...]:
    return tuple(g.id for g in FACES if g.id != f and shared_edge(f, g.id))


def faces_of_edge(edge: tuple[int, int]) -> tuple[int, int]:
    e = set(edge)
    return tuple(f.id for f in FACES if e <= set(f.corners))


def faces_of_corner(label: int) -> tuple[int, ...]:
    return tuple(f.id for f in FACES if label in f.corners)


# ---------------------------------------------------------------------------
# numbers

def as_scalar(x, exact: bool = True):
    """Coerce to an exact rational (mpq) or a float."""
    if not exact:
        return float(x)
    if isinstance(x, float):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def is_exact(x) -> bool:
    return not isinstance(x, float)


def sign(x, tol: float = DEFAULT_TOL) -> int:
    if isinstance(x, float):
        if x > tol:
            return 1
        if x < -tol:
            return -1
        return 0
    return (x > 0) - (x < 0)


def fmt_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# surface points

@dataclass(frozen=True)
class SurfacePoint:
    """A point on the cube surface in the chart of one face.

    Build instances with :func:`point` or :func:`canonicalize`; equality and
    hashing are only meaningful for canonical representatives.
    """
    face: int
    u: object
    v: object

    @property
    def exact(self) -> bool:
        return is_exact(self.u) and is_exact(self.v)

    def to3d(self):
        return FACES[self.face].to3d(self.u, self.v)

    def __repr__(self) -> str:
        return (f"SurfacePoint({FACES[self.face].name}, "
                f"{fmt_scalar(self.u)}, {fmt_scalar(self.v)})")


def _snap(x, tol):
    if isinstance(x, float):
        for k in (0.0, 1.0):
            if abs(x - k) <= tol:
                return k
    return x


def canonicalize(f, u, v, *, exact: bool | None = None,
                 tol: float = DEFAULT_TOL) -> SurfacePoint:
    """Canonical representative of the point (u, v) of face ``f``.

    Points on an edge or corner are re-expressed in the lowest-id face that
    contains them.
    """
    fc = face(f)
    if exact is None:
        exact = not (isinstance(u, float) or isinstance(v, float))
    u, v = as_scalar(u, exact), as_scalar(v, exact)
    lo, hi = (-tol, 1 + tol) if not exact else (0, 1)
    if not (lo <= u <= hi and lo <= v <= hi):
        raise CoordinateOutOfRange(f"({u}, {v}) outside [0,1]^2")
    u, v = _snap(u, tol), _snap(v, tol)
    if 0 < u < 1 and 0 < v < 1:
        return SurfacePoint(fc.id, u, v)
    x = fc.to3d(u, v)
    for g in FACES:
        if g.id >= fc.id:
            break
        gu, gv = g.from3d(x)
        if _in_unit(gu, tol) and _in_unit(gv, tol) and _on_plane(g, x, tol):
            return SurfacePoint(g.id, _snap(gu, tol), _snap(gv, tol))
    return SurfacePoint(fc.id, u, v)


def _in_unit(t, tol):
    if isinstance(t, float):
        return -tol <= t <= 1 + tol
    return 0 <= t <= 1


def _on_plane(g: Face, x, tol):
    n = g.inward_normal
    d = sum((x[i] - g.origin[i]) * n[i] for i in range(3))
    return sign(d, tol) == 0


def point(f, u, v, **kw) -> SurfacePoint:
    return canonicalize(f, u, v, **kw)


def corner_point(label: int, exact: bool = True) -> SurfacePoint:
    f = FACES[faces_of_corner(label)[0]]
    u, v = f.corner_uv(label)
    return canonicalize(f.id, u, v, exact=exact)


def from3d(x, *, exact: bool | None = None, tol: float = DEFAULT_TOL) -> SurfacePoint:
    """Surface point at a 3D location on the cube boundary."""
    for g in FACES:
        if _on_plane(g, x, tol):
            gu, gv = g.from3d(x)
            if _in_unit(gu, tol) and _in_unit(gv, tol):
                return canonicalize(g.id, gu, gv, exact=exact, tol=tol)
    raise CoordinateOutOfRange(f"{x} is not on the cube surface")


def embed3d(p: SurfacePoint):
    return p.to3d()


def incident_faces(p: SurfacePoint, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """All faces whose closed square contains ``p``."""
    x = p.to3d()
    out = []
    for g in FACES:
        if _on_plane(g, x, tol):
            gu, gv = g.from3d(x)
            if _in_unit(gu, tol) and _in_unit(gv, tol):
                out.append(g.id)
    return tuple(out)


def local_coords(p: SurfacePoint, f: int):
    """(u, v) of ``p`` in the chart of face ``f`` (which must contain p)."""
    if f == p.face:
        return p.u, p.v
    return FACES[f].from3d(p.to3d())


def corner_label(p: SurfacePoint, tol: float = DEFAULT_TOL) -> int | None:
    x = p.to3d()
    for label, c in CORNERS.items():
        if all(sign(x[i] - c[i], tol) == 0 for i in range(3)):
            return label
    return None


def is_corner(p: SurfacePoint, tol: float = DEFAULT_TOL) -> bool:
    return corner_label(p, tol) is not None


# ---------------------------------------------------------------------------
# quadrants

QUADRANT_EDGE_SIDE = ("u=0", "v=0", "u=1", "v=1")


@dataclass(frozen=True)
class QuadrantId:
    face: int
    quadrant: int           # index into QUADRANT_EDGE_SIDE

    @property
    def edge(self) -> tuple[int, int]:
        """The cube edge this quadrant abuts."""
        f = FACES[self.face]
        uv = [(0, 0), (1, 0), (1, 1), (0, 1)]
        pairs = [(3, 0), (0, 1), (1, 2), (2, 3)]
        a, b = pairs[self.quadrant]
        la = f.corners[uv.index(uv[a])]
        lb = f.corners[uv.index(uv[b])]
        return tuple(sorted((la, lb)))


def all_quadrants() -> list[QuadrantId]:
    return [QuadrantId(f.id, q) for f in FACES for q in range(4)]


def quadrant_of(p: SurfacePoint, tol: float = DEFAULT_TOL):
    """Open quadrant containing ``p``, or "center" / "diagonal" / "edge".

    Points on a face edge report "edge"; those are shared by two quadrants
    on adjacent faces.
    """
    if is_corner(p, tol):
        raise IsCorner(repr(p))
    u, v = p.u, p.v
    if sign(u, tol) == 0 or sign(v, tol) == 0 or sign(u - 1, tol) == 0 or sign(v - 1, tol) == 0:
        return "edge"
    a = sign(v - u, tol)         # above main diagonal
    b = sign(1 - u - v, tol)     # below anti-diagonal
    if a == 0 and b == 0:
        return "center"
    if a == 0 or b == 0:
        return "diagonal"
    if a > 0 and b > 0:
        q = 0
    elif a < 0 and b > 0:
        q = 1
    elif a < 0 and b < 0:
        q = 2
    else:
        q = 3
    return QuadrantId(p.face, q)


# ---------------------------------------------------------------------------
# symmetries

@dataclass(frozen=True)
class SymmetryElement:
    """Isometry x -> M (x - c) + c of the unit cube, c the cube center.

    ``perm[i]`` is the source axis of output axis i and ``signs[i]`` its
    sign, so M is a signed permutation matrix.
    """
    perm: tuple[int, int, int]
    signs: tuple[int, int, int]

    def apply3d(self, x):
        out = []
        for i in range(3):
            t = x[self.perm[i]]
            out.append(t if self.signs[i] > 0 else 1 - t)
        return tuple(out)

    @property
    def corner_perm(self) -> dict[int, int]:
        return {lab: CORNER_AT[self.apply3d(c)] for lab, c in CORNERS.items()}

    @property
    def det(self) -> int:
        parity = _perm_parity(self.perm)
        s = self.signs[0] * self.signs[1] * self.signs[2]
        return parity * s

    @property
    def is_rotation(self) -> bool:
        return self.det == 1

    def __matmul__(self, other: "SymmetryElement") -> "SymmetryElement":
        # (self @ other)(x) = self(other(x))
        perm = tuple(other.perm[self.perm[i]] for i in range(3))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(3))
        return SymmetryElement(perm, signs)

    def inverse(self) -> "SymmetryElement":
        perm = [0, 0, 0]
        signs = [1, 1, 1]
        for i in range(3):
            perm[self.perm[i]] = i
            signs[self.perm[i]] = self.signs[i]
        return SymmetryElement(tuple(perm), tuple(signs))

    def cycles(self) -> str:
        return cycle_notation(self.corner_perm)


def _perm_parity(p) -> int:
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
    return -1 if inv % 2 else 1


def cycle_notation(perm: dict[int, int]) -> str:
    seen, parts = set(), []
    for start in sorted(perm):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


IDENTITY = SymmetryElement((0, 1, 2), (1, 1, 1))
# y -> 1-y; corner relabelling (1 4)(2 3)(5 8)(6 7)
VERTICAL_REFLECTION = SymmetryElement((0, 1, 2), (1, -1, 1))
# (x, y, z) -> (y, 1-x, z); relabelling (1 4 3 2)(5 8 7 6)
QUARTER_TURN = SymmetryElement((1, 0, 2), (1, -1, 1))
# (x, y, z) -> (z, y, x); relabelling (1 6)(4 7)
HORIZONTAL_REFLECTION = SymmetryElement((2, 1, 0), (1, 1, 1))


@lru_cache(maxsize=None)
def symmetry_group() -> tuple[SymmetryElement, ...]:
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            out.append(SymmetryElement(perm, signs))
    return tuple(out)


def rotation_group() -> tuple[SymmetryElement, ...]:
    return tuple(g for g in symmetry_group() if g.is_rotation)


def apply_symmetry(g: SymmetryElement, p: SurfacePoint) -> SurfacePoint:
    x = g.apply3d(p.to3d())
    return from3d(x, exact=p.exact)


def relabel(g: SymmetryElement, labels: Iterable[int]) -> list[int]:
    cp = g.corner_perm
    return [cp[x] for x in labels]
