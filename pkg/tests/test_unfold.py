import math

from gmpy2 import mpq
from hypothesis import given, settings

from cubegeodesic import cube, oracle, unfold
from conftest import points


def test_corner_to_opposite_corner():
    p, q = cube.corner_point(8), cube.corner_point(2)
    assert unfold.geodesic_distance2(p, q, tol=None) == 5
    assert unfold.multiplicity(p, q, tol=None) == 6


def test_same_face_is_planar():
    p, q = cube.point(0, mpq(0), mpq(0)), cube.point(0, mpq(1), mpq(1))
    assert unfold.geodesic_distance2(p, q, tol=None) == 2


def test_adjacent_faces():
    # across edge 5-8: (1/2, 1/2) on face 5678 to the centre of face 5841
    p, q = cube.point("5678", mpq(1, 2), mpq(1, 2)), cube.point("5841", mpq(1, 2), mpq(1, 2))
    assert unfold.geodesic_distance2(p, q, tol=None) == 1


def test_opposite_face_centres():
    p, q = cube.point("5678", mpq(1, 2), mpq(1, 2)), cube.point("1432", mpq(1, 2), mpq(1, 2))
    assert unfold.geodesic_distance2(p, q, tol=None) == 4
    assert unfold.multiplicity(p, q, tol=None) == 4


@settings(max_examples=40, deadline=None)
@given(points, points)
def test_distance_symmetric(p, q):
    if p != q:
        assert unfold.geodesic_distance2(p, q, tol=None) == unfold.geodesic_distance2(q, p, tol=None)


@settings(max_examples=40, deadline=None)
@given(points, points)
def test_geodesics_are_minimal_and_end_right(p, q):
    if p == q:
        return
    d2 = unfold.geodesic_distance2(p, q, tol=None)
    for g in unfold.minimal_geodesics(p, q, tol=None):
        assert g.length2 == d2
        assert g.source == p and g.target == q
        pl = g.polyline3d()
        walked = sum(math.dist(map(float, a), map(float, b)) for a, b in zip(pl, pl[1:]))
        assert abs(walked - math.sqrt(d2)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(points, points)
def test_isometry_invariance(p, q):
    if p == q:
        return
    d2 = unfold.geodesic_distance2(p, q, tol=None)
    for g in cube.symmetry_group()[::11]:
        gp, gq = cube.apply_symmetry(g, p), cube.apply_symmetry(g, q)
        assert unfold.geodesic_distance2(gp, gq, tol=None) == d2


def test_float_mode_agrees_with_exact(rng):
    for _ in range(20):
        f1, f2 = rng.randrange(6), rng.randrange(6)
        a = [mpq(rng.randrange(1, 97), 97) for _ in range(4)]
        pe, qe = cube.point(f1, a[0], a[1]), cube.point(f2, a[2], a[3])
        pf = cube.point(f1, float(a[0]), float(a[1]), exact=False)
        qf = cube.point(f2, float(a[2]), float(a[3]), exact=False)
        assert abs(unfold.geodesic_distance(pe, qe, tol=None) - unfold.geodesic_distance(pf, qf)) < 1e-9


def test_mesh_oracle_sandwich(rng):
    n = 40
    o = oracle.MeshOracle(n, 3)
    pairs = []
    for _ in range(15):
        p = cube.point(rng.randrange(6), mpq(rng.randrange(1, n), n), mpq(rng.randrange(1, n), n))
        q = cube.point(rng.randrange(6), mpq(rng.randrange(1, n), n), mpq(rng.randrange(1, n), n))
        if p != q:
            pairs.append((p, q))
    d = o.distances_from([p for p, _ in pairs])
    for k, (p, q) in enumerate(pairs):
        ex = unfold.geodesic_distance(p, q, tol=None)
        m = d[k, o.node(o.lattice(q))]
        assert ex - 1e-9 <= m <= 1.05 * ex
