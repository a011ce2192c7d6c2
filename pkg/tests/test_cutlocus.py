import json

import pytest
from gmpy2 import mpq
from hypothesis import given, settings

from cubegeodesic import atlas, cube, cutlocus as cl, serialize, unfold
from conftest import points

A_POINT = cube.point(0, mpq(1, 5), mpq(1, 2))


def test_corner_locus_is_six_star():
    g = cl.cut_locus(cube.corner_point(8))
    assert sorted(v.degree for v in g.vertices) == [1] * 6 + [6]
    hub = next(v for v in g.vertices if v.degree == 6)
    assert hub.label == 2
    assert sorted(g.tree().leaf_labels()) == [1, 3, 4, 5, 6, 7]


@settings(max_examples=25, deadline=None)
@given(points)
def test_locus_is_tree_with_corner_leaves(p):
    g = cl.cut_locus(p, None)
    t = g.tree()
    assert len(g.edges) == len(g.vertices) - 1
    assert t.leaf_labels() <= frozenset(range(1, 9))
    # all eight corners are on the locus
    assert {v.label for v in g.vertices if v.label} == set(range(1, 9))


@settings(max_examples=15, deadline=None)
@given(points)
def test_vertices_have_degree_many_geodesics(p):
    g = cl.cut_locus(p, None)
    for v in g.vertices:
        if v.degree >= 3 and v.point != p:
            assert unfold.multiplicity(p, v.point, tol=None) == v.degree


def test_canonical_code_ignores_node_names():
    t = cl.LabeledTree({0: None, 1: 1, 2: 2, 3: 3}, {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}})
    u = cl.LabeledTree({"a": 3, "b": None, "c": 1, "d": 2},
                       {"b": {"a", "c", "d"}, "a": {"b"}, "c": {"b"}, "d": {"b"}})
    assert cl.canonical_code(t) == cl.canonical_code(u)
    assert cl.canonical_code(t) != cl.canonical_code(t.relabeled({1: 4, 2: 2, 3: 3}))


def test_region_a_halves():
    c = cl.classify_point(A_POINT, None)
    assert c.generic
    assert atlas.LQ_NAMES[c.top] == "A"
    top, bot = cl.split_halves(cl.cut_locus(A_POINT, None), None)
    assert top.tree.leaf_labels() == frozenset({1, 2, 5, 6})
    assert bot.tree.leaf_labels() == frozenset({3, 4, 7, 8})


def test_named_regions_of_left_quadrant():
    # witnesses picked from the top-half atlas of the left quadrant
    clf = atlas.Classifier(0, "top")
    names = {atlas.LQ_NAMES[clf.code(u, v)] for u, v in
             ((0.2, 0.5), (0.0164, 0.428), (0.0164, 0.953), (0.05, 0.3), (0.0164, 0.047))}
    assert names == {"A", "D", "F", "D'", "F'"}


def test_twelve_diagrams_distinct():
    codes = atlas.diagram_codes()
    assert len(codes) == 12 and len(set(codes.values())) == 12
    for name in codes:
        t = atlas.diagram_tree(name)
        assert {l for l in t.labels.values() if isinstance(l, int)} == {1, 2, 5, 6}


def test_locate_on_locus():
    g = cl.cut_locus(A_POINT, None)
    v = next(v for v in g.vertices if v.degree == 3)
    assert cl.locate_on_cut_locus(A_POINT, v.point, g, None).kind == "vertex"
    e = g.edges[0]
    mid = cube.from3d(tuple((a + b) / 2 for a, b in zip(e.polyline[0], e.polyline[1])))
    assert cl.locate_on_cut_locus(A_POINT, mid, g, None).multiplicity == 2


@settings(max_examples=10, deadline=None)
@given(points)
def test_json_round_trip(p):
    g = cl.cut_locus(p, None)
    doc = json.loads(serialize.dumps(serialize.cut_locus_json(g)))
    assert doc["schema"].startswith("cubegeodesic.cutlocus/")
    assert serialize.parse_cut_locus(doc).code() == g.code()


def test_reflection_duality_example():
    V = cube.VERTICAL_REFLECTION
    top, bot = cl.split_halves(cl.cut_locus(A_POINT, None), None)
    top_r, _ = cl.split_halves(cl.cut_locus(cube.apply_symmetry(V, A_POINT), None), None)
    assert cl.canonical_code(bot.tree.relabeled(V.corner_perm), bot.root) == top_r.code()


def test_corner_has_no_halves():
    with pytest.raises(cl.NoConnectingSegment):
        cl.split_halves(cl.cut_locus(cube.corner_point(1)))
