from gmpy2 import mpq
from hypothesis import given, settings

from cubegeodesic import cube, star, unfold
from conftest import points


@settings(max_examples=30, deadline=None)
@given(points)
def test_star_polygon_shape(p):
    st = star.star_unfold(p, None)
    kinds = [k for k, _, _ in st.vertices]
    assert len(st.vertices) == 16
    assert kinds.count("source") == 8 and kinds.count("corner") == 8
    assert sorted(lab for k, lab, _ in st.vertices if k == "corner") == list(range(1, 9))
    assert st.area() == 6


def test_source_images_at_geodesic_distance():
    # every corner image sits at the true geodesic distance from its two neighbouring source images
    p = cube.point(0, mpq(1, 5), mpq(2, 5))
    st = star.star_unfold(p, None)
    n = len(st.vertices)
    for i, (kind, lab, x) in enumerate(st.vertices):
        if kind != "corner":
            continue
        d2 = unfold.geodesic_distance2(p, cube.corner_point(lab), tol=None)
        for j in (i - 1, (i + 1) % n):
            s = st.vertices[j][2]
            assert (x[0] - s[0]) ** 2 + (x[1] - s[1]) ** 2 == d2


def test_voronoi_ridges_form_tree():
    p = cube.point(3, mpq(2, 7), mpq(3, 5))
    cx = star.star_voronoi(star.star_unfold(p, None))
    assert star.ridge_tree(cx).is_tree()


def test_corner_source_rejected():
    import pytest
    with pytest.raises(cube.IsCorner):
        star.star_unfold(cube.corner_point(3))
