"""Mesh-Dijkstra distance oracle on a gridded cube surface.

Independent of the unfolding code: the surface is sampled as the lattice
points of [0, n]^3 lying on the boundary, and edges join lattice points of
one face by straight in-face steps. Distances overestimate the true
geodesic distance by the angular gap of the step stencil.
"""
from __future__ import annotations

import math
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from . import cube


def stencil(radius: int) -> list[tuple[int, int]]:
    """Primitive lattice steps with max-norm <= radius (radius 1 gives 8 neighbours)."""
    out = []
    for a in range(-radius, radius + 1):
        for b in range(-radius, radius + 1):
            if (a, b) != (0, 0) and gcd(abs(a), abs(b)) == 1:
                out.append((a, b))
    return out


class MeshOracle:
    def __init__(self, n: int = 200, radius: int = 1):
        self.n = n
        self.radius = radius
        self._index: dict[tuple[int, int, int], int] = {}
        self._build()

    def node(self, x: tuple[int, int, int]) -> int:
        return self._index[x]

    def _id(self, x):
        i = self._index.get(x)
        if i is None:
            i = self._index[x] = len(self._index)
        return i

    def _build(self):
        n = self.n
        steps = [s for s in stencil(self.radius) if s > (0, 0)]
        rows, cols, wts = [], [], []
        for f in cube.FACES:
            o = [c * n for c in f.origin]
            ua, va = f.u_axis, f.v_axis

            def lat(i, j):
                return tuple(o[k] + i * ua[k] + j * va[k] for k in range(3))

            ids = np.empty((n + 1, n + 1), dtype=np.int64)
            for i in range(n + 1):
                for j in range(n + 1):
                    ids[i, j] = self._id(lat(i, j))
            for a, b in steps:
                w = math.hypot(a, b) / n
                i0, i1 = max(0, -a), min(n, n - a)
                j0, j1 = max(0, -b), min(n, n - b)
                src = ids[i0:i1 + 1, j0:j1 + 1].ravel()
                dst = ids[i0 + a:i1 + a + 1, j0 + b:j1 + b + 1].ravel()
                rows.append(src)
                cols.append(dst)
                wts.append(np.full(src.shape, w))
        r, c, w = np.concatenate(rows), np.concatenate(cols), np.concatenate(wts)
        m = len(self._index)
        # shared face edges appear twice; keep the minimum (they are equal anyway)
        self.graph = coo_matrix((w, (r, c)), shape=(m, m)).tocsr()
        self.graph.sum_duplicates()
        self._fix_duplicates(r, c, w, m)

    def _fix_duplicates(self, r, c, w, m):
        # sum_duplicates adds repeated edges on shared cube edges; rebuild with min
        key = r * m + c
        order = np.lexsort((w, key))
        key, r, c, w = key[order], r[order], c[order], w[order]
        first = np.ones(len(key), dtype=bool)
        first[1:] = key[1:] != key[:-1]
        self.graph = coo_matrix((w[first], (r[first], c[first])), shape=(m, m)).tocsr()

    def lattice(self, p: cube.SurfacePoint) -> tuple[int, int, int]:
        """Nearest lattice point to ``p`` (exact when p is on the grid)."""
        return tuple(int(round(float(t) * self.n)) for t in p.to3d())

    def snap_error(self, p: cube.SurfacePoint) -> float:
        x = p.to3d()
        y = self.lattice(p)
        return math.dist([float(t) for t in x], [t / self.n for t in y])

    def distances_from(self, sources: list[cube.SurfacePoint]) -> np.ndarray:
        idx = [self.node(self.lattice(p)) for p in sources]
        return dijkstra(self.graph, directed=False, indices=idx)

    def distance(self, p: cube.SurfacePoint, q: cube.SurfacePoint) -> float:
        d = self.distances_from([p])
        return float(d[0, self.node(self.lattice(q))])
