"""Plain SVG drawings: cut loci on the six faces, star polygons, face atlases.

Only the standard library is used; output is a text string.
"""
from __future__ import annotations

import hashlib
from xml.sax.saxutils import escape

from . import cube

PANEL = 200          # pixels per face side
MARGIN = 24

# faces laid out as a cross, (column, row) per face id, viewed from inside
NET = {0: (1, 1), 1: (3, 1), 2: (1, 2), 3: (1, 0), 4: (0, 1), 5: (2, 1)}


def _doc(w, h, body):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def _f(x) -> str:
    return f"{float(x):.3f}"


class _Panel:
    """Maps a face chart (u, v) into a square panel; v grows upwards."""

    def __init__(self, x0, y0, size=PANEL):
        self.x0, self.y0, self.size = x0, y0, size

    def __call__(self, u, v):
        return self.x0 + float(u) * self.size, self.y0 + (1 - float(v)) * self.size

    def frame(self, label):
        x, y = self.x0, self.y0
        return (f'<rect x="{_f(x)}" y="{_f(y)}" width="{self.size}" height="{self.size}" '
                f'fill="none" stroke="#888"/>'
                f'<text x="{_f(x + self.size / 2)}" y="{_f(y + self.size / 2)}" fill="#bbb" '
                f'text-anchor="middle">{escape(label)}</text>')


def _corner_labels(panel, f):
    out = []
    for lab in f.corners:
        u, v = f.corner_uv(lab)
        x, y = panel(u, v)
        dx = 4 if u == 0 else -10
        dy = -4 if v == 0 else 12
        out.append(f'<text x="{_f(x + dx)}" y="{_f(y + dy)}">{lab}</text>')
    return out


def _face_segments(poly3d):
    """Split a 3D polyline into (face, uv, uv) pieces lying in one face."""
    out = []
    for a, b in zip(poly3d, poly3d[1:]):
        mid = tuple((float(s) + float(t)) / 2 for s, t in zip(a, b))
        try:
            f = cube.from3d(mid, exact=False, tol=1e-6).face
        except cube.CubeError:
            continue
        face = cube.FACES[f]
        out.append((f, face.from3d(tuple(float(t) for t in a)), face.from3d(tuple(float(t) for t in b))))
    return out


def cut_locus_svg(g) -> str:
    """Cut locus drawn on an unfolded cross of the six faces."""
    body = []
    panels = {}
    for f in cube.FACES:
        c, r = NET[f.id]
        panels[f.id] = p = _Panel(MARGIN + c * PANEL, MARGIN + r * PANEL)
        body.append(p.frame(f.name))
        body.extend(_corner_labels(p, f))
    for e in g.edges:
        for f, a, b in _face_segments(e.polyline):
            (x1, y1), (x2, y2) = panels[f](*a[:2]), panels[f](*b[:2])
            body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                        f'stroke="#c00" stroke-width="2"/>')
    for v in g.vertices:
        if v.degree < 3:
            continue
        x, y = panels[v.point.face](v.point.u, v.point.v)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="#c00"/>'
                    f'<text x="{_f(x + 5)}" y="{_f(y - 5)}" fill="#c00">{v.degree}</text>')
    s = g.source
    x, y = panels[s.face](s.u, s.v)
    body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="#06c"/>'
                f'<text x="{_f(x + 6)}" y="{_f(y + 12)}" fill="#06c">P</text>')
    return _doc(4 * PANEL + 2 * MARGIN, 3 * PANEL + 2 * MARGIN, body)


def star_svg(star, cx=None) -> str:
    """Star polygon with source images, corner labels and Voronoi ridges."""
    pts = [(float(x), float(y)) for x, y in star.points]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    lo_x, lo_y = min(xs), min(ys)
    span = max(max(xs) - lo_x, max(ys) - lo_y)
    scale = (3 * PANEL) / span

    def m(x):
        return MARGIN + (float(x[0]) - lo_x) * scale, MARGIN + (max(ys) - float(x[1])) * scale

    body = ['<polygon points="' + " ".join(f"{_f(a)},{_f(b)}" for a, b in map(m, pts))
            + '" fill="#f4f4f4" stroke="#333"/>']
    if cx is not None:
        for r in cx.ridges:
            (x1, y1), (x2, y2) = m(cx.nodes[r.a].point), m(cx.nodes[r.b].point)
            body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                        f'stroke="#c00" stroke-width="1.5"/>')
    for kind, lab, x in star.vertices:
        a, b = m(x)
        if kind == "corner":
            body.append(f'<text x="{_f(a + 4)}" y="{_f(b - 4)}">{lab}</text>')
        else:
            body.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="3" fill="#06c"/>')
    size = 3 * PANEL + 2 * MARGIN
    return _doc(size, size, body)


def _colour(code) -> str:
    if code is None:
        return "#ffffff"
    h = hashlib.sha1(code.encode()).digest()
    return "#%02x%02x%02x" % tuple(128 + c // 2 for c in h[:3])


def atlas_svg(atlas, size=3 * PANEL) -> str:
    """Face atlas: leaf cells filled by code, curve and point witnesses on top."""
    from .atlas import lattice_uv
    panel = _Panel(MARGIN, MARGIN, size)
    body = []
    n = atlas.n
    for x, y, s, code in atlas.leaves:
        u0, v0 = lattice_uv(x, y, n)
        u1, v1 = lattice_uv(x + s, y + s, n)
        (a, b1), (c, b0) = panel(u0, v0), panel(u1, v1)
        body.append(f'<rect x="{_f(a)}" y="{_f(b0)}" width="{_f(c - a)}" height="{_f(b1 - b0)}" '
                    f'fill="{_colour(code)}" stroke="none"/>')
    body.append(panel.frame(""))
    body.extend(_corner_labels(panel, cube.FACES[atlas.face]))
    for st in atlas.strata:
        if st.kind in ("curve", "point"):
            x, y = panel(*st.witness)
            r, col = (1.5, "#333") if st.kind == "curve" else (3, "#c00")
            body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="{col}"/>')
    summary = atlas.summary()
    line = ", ".join(f"{k} {summary[k]}" for k in ("region", "curve", "point", "edge", "corner", "total"))
    body.append(f'<text x="{MARGIN}" y="{MARGIN + size + 16}">{escape(line)}</text>')
    return _doc(size + 2 * MARGIN, size + 2 * MARGIN + 24, body)
