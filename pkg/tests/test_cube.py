import pytest
from gmpy2 import mpq
from hypothesis import given, settings

from cubegeodesic import cube
from conftest import points


def test_face_and_corner_counts():
    assert len(cube.FACES) == 6
    assert len(cube.edges()) == 12
    for lab in range(1, 9):
        assert len(cube.faces_of_corner(lab)) == 3


def test_labelling_identities():
    # corner 8 opposite corner 2, edge 5-8 exists, face 5678 exists
    assert tuple(1 - t for t in cube.CORNERS[8]) == cube.CORNERS[2]
    assert (5, 8) in cube.edges() or (8, 5) in cube.edges()
    assert cube.face("5678").id == 0


def test_faces_are_oriented_inside_view():
    for f in cube.FACES:
        n = f.inward_normal
        centre = f.to3d(mpq(1, 2), mpq(1, 2))
        inner = tuple(c + mpq(1, 4) * k for c, k in zip(centre, n))
        assert all(0 < t < 1 for t in inner)


def test_group_sizes():
    assert len(cube.symmetry_group()) == 48
    assert len(cube.rotation_group()) == 24
    assert cube.QUARTER_TURN.cycles() == "(1 4 3 2)(5 8 7 6)"
    assert cube.VERTICAL_REFLECTION.cycles() == "(1 4)(2 3)(5 8)(6 7)"


def test_edge_point_canonical():
    p = cube.point("5678", mpq(0), mpq(1, 3))
    q = cube.from3d(p.to3d())
    assert p == q


def test_out_of_range():
    with pytest.raises(cube.CubeError):
        cube.point(0, mpq(3, 2), mpq(1, 2))


@settings(max_examples=50, deadline=None)
@given(points)
def test_symmetry_preserves_surface(p):
    for g in cube.symmetry_group()[::7]:
        q = cube.apply_symmetry(g, p)
        x = q.to3d()
        assert any(t in (0, 1) for t in x)
        assert cube.apply_symmetry(g.inverse(), q) == p
