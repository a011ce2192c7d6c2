"""Atlas machinery on synthetic code functions, plus cheap checks on the real classifier."""
from cubegeodesic import atlas


def _synthetic(fn, res=4, depth=6):
    grid = atlas.QuadGrid(fn, res, depth)
    grid.refine()
    uf, crossings = atlas._components(grid)
    atlas._merge_slivers(grid, uf, crossings)
    roots = {}
    for p, c in grid.codes.items():
        roots.setdefault(uf.find(p), c)
    return grid, roots


def test_two_half_planes():
    grid, roots = _synthetic(lambda u, v: "a" if u < 0.37 else "b")
    assert sorted(roots.values()) == ["a", "b"]
    # refinement concentrates on the boundary
    small = [s for _, _, s in grid.leaves if s == 1]
    assert small and all(abs(grid.uv(x, y)[0] - 0.37) < 0.05 for x, y, s in grid.leaves if s == 1)


def test_three_regions_meet():
    def fn(u, v):
        if v < 0.5:
            return "a" if u < 0.5 else "b"
        return "c"
    _, roots = _synthetic(fn)
    assert sorted(roots.values()) == ["a", "b", "c"]


def test_separated_equal_codes_stay_apart():
    _, roots = _synthetic(lambda u, v: "x" if abs(u - 0.5) < 0.1 else "y")
    assert sorted(roots.values()) == ["x", "y", "y"]


def test_wedge_into_corner_is_one_region():
    # a wedge thinner than a cell near the corner breaks into pieces unless merged
    def fn(u, v):
        return "w" if abs(v - 3 * u) < 0.02 * (u + v) else ("l" if v > 3 * u else "r")
    _, roots = _synthetic(fn, res=4, depth=5)
    assert sorted(roots.values()).count("w") == 1


def test_lattice_avoids_rational_lines():
    n = 1 << 10
    for k in range(0, n + 1, 37):
        u, v = atlas.lattice_uv(k, k, n)
        assert u != v and u + v != 1 and u != 0.5 and v != 0.5


def test_classifier_codes_are_stable():
    clf = atlas.Classifier(0, "top")
    assert atlas.LQ_NAMES[clf.code(0.2, 0.5)] == "A"
    assert clf.code(0.2, 0.5) == clf.code(0.21, 0.49)


def test_small_left_quadrant_atlas():
    a = atlas.region_atlas(0, 4, 5, key="top", inside=atlas.left_quadrant, edges=False)
    names = {atlas.LQ_NAMES.get(s.code) for s in a.strata if s.kind == "region"}
    assert {"A", "D", "D'"} <= names


def test_star_junction_near_closed_form():
    from cubegeodesic import gmpr
    u, v = atlas.locate_star(1e-8)
    assert abs(u - gmpr.STAR_UV[0]) < 1e-7 and abs(v - gmpr.STAR_UV[1]) < 1e-7
