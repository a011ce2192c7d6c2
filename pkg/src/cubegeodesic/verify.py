"""Verification suites shared by the ``verify`` subcommand and the acceptance tests.

Every check returns a :class:`Check`; a suite is a list of checks run in
a fixed order with a fixed seed, so reports are reproducible.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import atlas, cube, cutlocus as cl, gmpr, oracle, serialize, star, unfold
from . import fixtures as fx

DEFAULT_SEED = 20240611
DEN = 997                      # denominators of random exact coordinates


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(name, fn, *a, **kw) -> Check:
    t = time.time()
    passed, detail, data = fn(*a, **kw)
    return Check(name, bool(passed), detail, time.time() - t, data)


def random_point(rng: random.Random, face=None, den: int = DEN) -> cube.SurfacePoint:
    f = rng.randrange(6) if face is None else face
    return cube.point(f, mpq(rng.randrange(1, den), den), mpq(rng.randrange(1, den), den))


def left_quadrant_point(rng: random.Random, den: int = DEN) -> cube.SurfacePoint:
    v = mpq(rng.randrange(1, den), den)
    u = min(v, 1 - v) * mpq(rng.randrange(1, den), den)
    return cube.point(0, u, v)


def special_source(rng: random.Random, kind: str) -> cube.SurfacePoint:
    f = rng.randrange(6)
    t = mpq(rng.randrange(1, DEN), DEN)
    if kind == "edge":
        return cube.point(f, mpq(0), t)
    if kind == "diagonal":
        return cube.point(f, t, t)
    if kind == "antidiagonal":
        return cube.point(f, t, 1 - t)
    if kind == "center":
        return cube.point(f, mpq(1, 2), mpq(1, 2))
    if kind == "corner":
        return cube.corner_point(rng.randrange(1, 9))
    return random_point(rng, f)


SOURCE_KINDS = ("interior", "interior", "edge", "diagonal", "antidiagonal", "center", "corner")


def structured_pairs(n: int, rng: random.Random):
    """(p, q, expected multiplicity) with q on or off the cut locus of p.

    Targets are the branch vertices of the locus (expected: degree), one
    interior point of every locus edge (2), the leaves (1) and a random
    point, whose expectation comes from locating it on the locus.
    """
    out = []
    k = 0
    while len(out) < n:
        p = special_source(rng, SOURCE_KINDS[k % len(SOURCE_KINDS)])
        k += 1
        g = cl.cut_locus(p, None)
        for v in g.vertices:
            out.append((p, v.point, v.degree))
        for e in g.edges:
            a, b = e.polyline[0], e.polyline[1]
            mid = tuple((s + t) / 2 for s, t in zip(a, b))
            out.append((p, cube.from3d(mid, exact=True), 2))
        q = random_point(rng)
        if q != p:
            out.append((p, q, cl.locate_on_cut_locus(p, q, g, None).multiplicity))
    rng.shuffle(out)
    return out[:n]


# ---------------------------------------------------------------------------
# acceptance criteria

def corner_locus():
    g = cl.cut_locus(cube.corner_point(8))
    centre = [v for v in g.vertices if v.degree == 6]
    ok = len(centre) == 1 and centre[0].label == 2 and centre[0].point.exact
    ok = ok and sorted(g.tree().leaf_labels()) == [1, 3, 4, 5, 6, 7]
    arms = {}
    for e in g.edges:
        ends = [tuple(e.polyline[0]), tuple(e.polyline[-1])]
        other = ends[1] if ends[0] == cube.CORNERS[2] else ends[0]
        arms[cube.CORNER_AT.get(tuple(int(t) for t in other))] = e.polyline
    straight = all(len(pl) == 2 for pl in arms.values())
    edge_arms = {l for l in arms if sum(a != b for a, b in zip(cube.CORNERS[l], cube.CORNERS[2])) == 1}
    diag_arms = {l for l in arms if sum(a != b for a, b in zip(cube.CORNERS[l], cube.CORNERS[2])) == 2}
    ok = ok and straight and edge_arms == {1, 3, 6} and diag_arms == {4, 5, 7}
    return ok, f"centre {[v.label for v in centre]}, edges to {sorted(edge_arms)}, diagonals to {sorted(diag_arms)}", {}


def star_invariants(n: int = 100, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        st = star.star_unfold(random_point(rng), None)
        kinds = [k for k, _, _ in st.vertices]
        if len(st.vertices) != 16 or kinds.count("source") != 8 or st.area() != 6:
            bad += 1
    return bad == 0, f"{n - bad}/{n} stars with 16 vertices, 8 source images, area 6", {}


def multiplicity_spectrum(n: int = 500, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    pairs = structured_pairs(n, rng)
    bad = []
    for p, q, want in pairs:
        if p == q:
            continue
        got = unfold.multiplicity(p, q, tol=None)
        if got != want:
            bad.append((p, q, want, got))
    corner = all(unfold.multiplicity(cube.corner_point(a), cube.corner_point(b), tol=None) == 6
                 for a, b in ((8, 2), (1, 7), (5, 3), (6, 4)))
    sp = cube.point(0, *gmpr.STAR_UV, exact=False)
    degs = sorted(v.degree for v in cl.cut_locus(sp, atlas.BOUNDARY_TOL).vertices)
    five = degs.count(5) == 1
    ok = not bad and corner and five
    return ok, (f"{len(pairs) - len(bad)}/{len(pairs)} structured pairs agree, corner pairs 6: {corner}, "
                f"* has one degree-5 vertex: {five}"), {"mismatches": bad[:5]}


def left_quadrant_taxonomy(res: int = 16, depth: int = 8):
    found = atlas.left_quadrant_taxonomy(res, depth)
    expected = atlas.diagram_codes()
    inv = {c: name for name, c in expected.items()}
    per = []
    for name in atlas.TOP_HALF_DIAGRAMS:
        t = atlas.diagram_tree(name)
        hit = found.get(expected[name])
        if hit is None:
            per.append(False)
            continue
        # leaf labels and degree sequence of the half found at the witness
        kind, (u, v) = hit
        tol = cube.DEFAULT_TOL if kind in ("region", "edge") else atlas.BOUNDARY_TOL
        h, _ = cl.split_halves(cl.cut_locus(cube.point(0, u, v, exact=False), tol), tol)
        per.append(h.tree.leaf_labels() == t.leaf_labels()
                   and h.tree.degree_sequence() == t.degree_sequence())
    extra = [c for c in found if c not in inv]
    ok = len(found) == 12 and all(per) and not extra
    names = sorted(inv[c] for c in found if c in inv)
    return ok, f"{len(found)} distinct top-half codes, matched {len(names)}/12: {' '.join(names)}", \
        {"unmatched": extra}


def face_atlas(res: int = 16, depth: int = 10, expected: int = 193):
    a = atlas.region_atlas(0, res, depth)
    s = a.summary()
    ok = s["total"] == expected and s["unresolved"] == 0
    return ok, (f"{s['total']} strata (expected {expected}): {s['region']} regions, {s['curve']} curves, "
                f"{s['point']} points, {s['edge']} edges, {s['corner']} corners; "
                f"unresolved {s['unresolved']}"), {"summary": s}


def duality(n: int = 100, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    V = cube.VERTICAL_REFLECTION
    R = cube.QUARTER_TURN
    bad_v = bad_r = 0
    for _ in range(n):
        p = left_quadrant_point(rng)
        top, bot = cl.split_halves(cl.cut_locus(p, None), None)
        top_v, _ = cl.split_halves(cl.cut_locus(cube.apply_symmetry(V, p), None), None)
        if cl.canonical_code(bot.tree.relabeled(V.corner_perm), bot.root) != top_v.code():
            bad_v += 1
        g = cl.cut_locus(p, None)
        ok = True
        S = cube.IDENTITY
        for _k in range(3):
            S = R @ S
            q = cube.apply_symmetry(S, p)
            gq = cl.cut_locus(q, None)
            tq, _ = cl.split_halves(gq, None)
            ok &= gq.code() == cl.canonical_code(g.tree().relabeled(S.corner_perm))
            ok &= tq.code() == cl.canonical_code(top.tree.relabeled(S.corner_perm), top.root)
        bad_r += not ok
    return bad_v == 0 and bad_r == 0, (f"reflection {V.cycles()}: {n - bad_v}/{n}; "
                                       f"rotation {R.cycles()}: {n - bad_r}/{n}"), {}


def planner_soundness(n_random: int = 10000, n_structured: int = 2000, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    pairs = [(random_point(rng), random_point(rng)) for _ in range(n_random)]
    pairs += [(p, q) for p, q, _ in structured_pairs(n_structured, rng)]
    tab = gmpr.e3_table()
    pairs += [(e.source, e.target) for e in tab.entries]
    used = {}
    failures = []
    for p, q in pairs:
        exact = p.exact and q.exact
        tol = None if exact else cube.DEFAULT_TOL
        try:
            r = gmpr.plan(p, q, tol)
        except Exception as e:          # totality is what is being checked
            failures.append(f"{p} -> {q}: {type(e).__name__}: {e}")
            continue
        used[r.index] = used.get(r.index, 0) + 1
        d2 = unfold.geodesic_distance2(p, q, tol=tol) if p != q else 0
        same = r.geodesic.length2 == d2 if exact else abs(float(r.geodesic.length2) - float(d2)) < 1e-9
        ends = r.geodesic.source == p and r.geodesic.target == q
        if not (same and ends):
            failures.append(f"{p} -> {q}: length2 {r.geodesic.length2} vs {d2}")
    counts = tab.counts()
    table_ok = len(tab) == 56 and counts.get("corner") == 8 and counts.get("star") == 48
    ok = not failures and sorted(used) == [1, 2, 3, 4, 5] and table_ok
    return ok, (f"{len(pairs)} pairs, {len(failures)} failures, index use "
                f"{dict(sorted(used.items()))}, E3 table {len(tab)} = {counts.get('corner')} corner "
                f"+ {counts.get('star')} star"), {"failures": failures[:5], "used": used}


REQUIRED_FIXTURES = ("e2-corner8-along-edge", "e2-corner8-along-diagonal", "e2-corner8-along-DF",
                     "e2-D-to-DF")


def continuity():
    fixtures = fx.load()
    rows, bad = [], []
    for f in fixtures:
        devs = fx.probe(f)
        ok, c = fx.decay_ok(devs)
        rows.append((f.name, f.index, c, devs))
        if not ok:
            bad.append(f.name)
    names = {f.name for f in fixtures}
    missing = [n for n in REQUIRED_FIXTURES if n not in names]
    idx = sorted({f.index for f in fixtures})
    ok = not bad and not missing and idx == [1, 2, 3, 4, 5]
    return ok, (f"{len(fixtures) - len(bad)}/{len(fixtures)} fixtures decay as C*2^-k, "
                f"indices {idx}, failing {bad}, missing {missing}"), {"rows": rows}


def oracle_agreement(n: int = 200, seed: int = DEFAULT_SEED, mesh: int = 200, radius: int = 3):
    rng = random.Random(seed)
    o = oracle.MeshOracle(mesh, radius)
    pairs = [(random_point(rng, den=mesh), random_point(rng, den=mesh)) for _ in range(n)]
    pairs = [(p, q) for p, q in pairs if p != q]
    dist = o.distances_from([p for p, _ in pairs])
    worst, below = 0.0, 0
    for k, (p, q) in enumerate(pairs):
        ex = unfold.geodesic_distance(p, q, tol=None)
        m = float(dist[k, o.node(o.lattice(q))])
        rel = (m - ex) / ex
        worst = max(worst, rel)
        below += rel < -1e-9
    d2 = unfold.geodesic_distance2(cube.corner_point(8), cube.corner_point(2), tol=None)
    ok = worst <= 0.02 and below == 0 and d2 == 5
    return ok, (f"{len(pairs)} pairs, worst excess {worst:.4%}, below exact {below}, "
                f"corner 8 -> 2 squared distance {cube.fmt_scalar(d2)}"), {}


# ---------------------------------------------------------------------------
# extra geometry counters

def metric_properties(n: int = 200, seed: int = DEFAULT_SEED):
    rng = random.Random(seed)
    G = cube.symmetry_group()
    asym = tri = equi = 0
    for _ in range(n):
        p, q, r = random_point(rng), random_point(rng), random_point(rng)
        dpq = unfold.geodesic_distance2(p, q, tol=None)
        asym += dpq != unfold.geodesic_distance2(q, p, tol=None)
        a = math.sqrt(dpq)
        b = unfold.geodesic_distance(q, r, tol=None)
        c = unfold.geodesic_distance(p, r, tol=None)
        tri += c > a + b + 1e-12
        g = G[rng.randrange(len(G))]
        gp, gq = cube.apply_symmetry(g, p), cube.apply_symmetry(g, q)
        equi += unfold.geodesic_distance2(gp, gq, tol=None) != dpq
    return asym == tri == equi == 0, (f"{n} triples: symmetry violations {asym}, triangle violations {tri}, "
                                      f"isometry violations {equi}"), {}


def json_round_trip(n: int = 20, seed: int = DEFAULT_SEED):
    import json
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        g = cl.cut_locus(random_point(rng), None)
        doc = json.loads(serialize.dumps(serialize.cut_locus_json(g)))
        bad += serialize.parse_cut_locus(doc).code() != g.code()
    return bad == 0, f"{n - bad}/{n} cut loci re-import to the same code", {}


# ---------------------------------------------------------------------------
# suites

CRITERIA = (
    ("1 corner cut locus", corner_locus),
    ("2 star unfolding invariants", star_invariants),
    ("3 multiplicity spectrum", multiplicity_spectrum),
    ("4 left-quadrant top-half taxonomy", left_quadrant_taxonomy),
    ("5 full-face region count", face_atlas),
    ("6 duality relations", duality),
    ("7 planner soundness", planner_soundness),
    ("8 continuity decay", continuity),
    ("9 oracle agreement", oracle_agreement),
)

SUITES = {
    "geometry": ("metric", "2", "9"),
    "cutlocus": ("1", "3", "6", "json"),
    "atlas": ("4", "5"),
    "gmpr": ("7",),
    "continuity": ("8",),
}
SUITES["all"] = ("metric", "json") + tuple(str(k) for k in range(1, 10))

EXTRA = {"metric": ("metric properties", metric_properties),
         "json": ("cut-locus JSON round trip", json_round_trip)}


def run_suite(name: str, seed: int = DEFAULT_SEED, depth: int = 10, res: int = 16, out=print):
    """Run a named suite; returns the list of checks, printing one line each."""
    checks = []
    for key in SUITES[name]:
        if key in EXTRA:
            title, fn = EXTRA[key]
            kw = {"seed": seed}
        else:
            title, fn = CRITERIA[int(key) - 1]
            kw = {}
            if fn in (star_invariants, multiplicity_spectrum, duality, planner_soundness, oracle_agreement):
                kw["seed"] = seed
            if fn is face_atlas:
                kw = {"res": res, "depth": depth}
        c = _timed(title, fn, **kw)
        checks.append(c)
        out(c.line())
    return checks
