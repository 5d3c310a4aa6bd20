"""Lattice-polygon geometry: hulls, counts, width, symmetries, models."""
from __future__ import annotations

import math
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polybetti.polygon import (AffineUnimodularMap, DimensionError,
                               canonical_form, classify, convex_hull, dilate,
                               ehrhart_count, from_vertices, hull_contains,
                               interior_hull, is_lw_minimal, lattice_width,
                               lawrence_prism, minkowski_sum, named_polygon,
                               parse_polygon, prune_vertex, sigma_point,
                               standard_triangle, symmetry_group,
                               unimodular_map_between, upsilon_indexed,
                               upsilon_triangle)

points = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


def polygon_from(pts):
    try:
        return from_vertices(pts)
    except (DimensionError, ValueError):
        return None


random_polygons = st.lists(points, min_size=3, max_size=8).map(
    polygon_from).filter(lambda p: p is not None)

unimodular_maps = st.tuples(
    st.sampled_from([(1, 0, 0, 1), (0, -1, 1, 0), (1, 1, 0, 1),
                     (1, 0, 1, 1), (0, 1, 1, 0), (2, 1, 1, 1)]),
    points).map(lambda t: AffineUnimodularMap(
        ((t[0][0], t[0][1]), (t[0][2], t[0][3])), t[1]))


def test_model_point_sets_are_frozen():
    assert named_polygon("Sigma").vertices == ((0, 0), (1, 0), (0, 1))
    assert set(named_polygon("Upsilon").vertices) == {(-1, -1), (1, 0),
                                                      (0, 1)}
    assert set(named_polygon("Upsilon_3").vertices) == {(-1, -1), (3, 0),
                                                        (0, 3)}
    assert set(named_polygon("2*Upsilon").vertices) == {(-2, -2), (2, 0),
                                                        (0, 2)}
    assert set(named_polygon("3*Sigma").vertices) == {(0, 0), (3, 0),
                                                      (0, 3)}
    with pytest.raises(ValueError):
        named_polygon("3*Upsilon_2")
    with pytest.raises(ValueError):
        named_polygon("Koszul")


def test_model_lattice_point_counts():
    expected = {"Sigma": 3, "Upsilon": 4, "2*Sigma": 6, "Upsilon_2": 7,
                "3*Sigma": 10, "2*Upsilon": 10, "Upsilon_3": 11,
                "4*Sigma": 15, "Upsilon_4": 16, "5*Sigma": 21}
    for name, n in expected.items():
        assert named_polygon(name).n_points == n


def test_from_vertices_rejects_degenerate():
    with pytest.raises(DimensionError):
        from_vertices([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DimensionError):
        from_vertices([(1, 1)])


def test_parse_polygon_formats():
    inline = parse_polygon("0,0 2,0 0,2")
    as_json = parse_polygon('{"vertices": [[0, 0], [2, 0], [0, 2]]}')
    assert inline == as_json == named_polygon("2*Sigma")
    with pytest.raises(ValueError):
        parse_polygon("")


@given(random_polygons)
def test_pick_identity(poly):
    assert poly.area2 == 2 * poly.n_points - poly.boundary_count - 2
    inner = interior_hull(poly)
    assert poly.n_points == len(inner.points) + poly.boundary_count


@given(random_polygons)
def test_vertices_strictly_convex(poly):
    verts = poly.vertices
    k = len(verts)
    for i in range(k):
        o, a, b = verts[i], verts[(i + 1) % k], verts[(i + 2) % k]
        assert ((a[0] - o[0]) * (b[1] - o[1])
                - (a[1] - o[1]) * (b[0] - o[0])) > 0


@given(random_polygons, st.integers(0, 5))
def test_ehrhart_agreement(poly, q):
    assert ehrhart_count(poly, q) == len(dilate(poly, q).points)


@given(random_polygons)
def test_minkowski_double_is_dilate(poly):
    assert minkowski_sum(poly, poly) == dilate(poly, 2)


def test_minkowski_point_sum(small_corpus):
    for poly in small_corpus:
        if poly.n_points > 12:
            continue
        sums = {(a[0] + b[0], a[1] + b[1])
                for a in poly.points for b in poly.points}
        assert set(dilate(poly, 2).points) <= sums


@given(random_polygons, unimodular_maps)
def test_canonical_form_is_class_invariant(poly, phi):
    image = from_vertices([phi(v) for v in poly.vertices])
    assert canonical_form(poly)[0] == canonical_form(image)[0]
    assert unimodular_map_between(poly, image) is not None


def test_lattice_width_models():
    cases = {"Sigma": 1, "2*Sigma": 2, "3*Sigma": 3, "4*Sigma": 4,
             "5*Sigma": 5, "Upsilon": 2, "2*Upsilon": 4, "Upsilon_2": 3,
             "Upsilon_3": 4, "Upsilon_4": 5}
    for name, w in cases.items():
        assert lattice_width(named_polygon(name))[0] == w, name


@given(random_polygons, unimodular_maps)
def test_lattice_width_is_invariant(poly, phi):
    image = from_vertices([phi(v) for v in poly.vertices])
    assert lattice_width(poly)[0] == lattice_width(image)[0]


def test_lattice_width_recursion(small_corpus):
    for poly in small_corpus:
        inner = interior_hull(poly)
        if inner.dim != 2:
            continue
        inner_poly = from_vertices(list(inner.points))
        assert lattice_width(poly)[0] == lattice_width(inner_poly)[0] + 2


def test_symmetry_group_is_a_group(models):
    for poly in models.values():
        group = symmetry_group(poly)
        pts = set(poly.points)
        table = {g: {v: g(v) for v in pts} for g in group}
        for g in group:
            assert set(table[g].values()) == pts
        # closure under composition, checked on the point action
        actions = {tuple(sorted(table[g].items())) for g in group}
        for g in group:
            for h in group:
                comp = tuple(sorted((v, table[g][table[h][v]])
                                    for v in pts))
                assert comp in actions


def test_symmetry_group_orders():
    assert len(symmetry_group(named_polygon("Sigma"))) == 6
    assert len(symmetry_group(named_polygon("2*Sigma"))) == 6
    assert len(symmetry_group(named_polygon("Upsilon"))) == 6
    square = from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(symmetry_group(square)) == 8


def test_classify_models():
    assert classify(named_polygon("3*Sigma")).tag == "Sigma_multiple"
    assert classify(named_polygon("3*Sigma")).params == (3,)
    got = classify(from_vertices([(-1, -1), (2, 0), (0, 2)]))
    assert (got.tag, got.params) == ("Upsilon_d", (2,))
    assert classify(named_polygon("2*Upsilon")).tag == "TwoUpsilon"
    assert classify(lawrence_prism(3, 1)).tag == "LawrencePrism"
    assert classify(from_vertices([(0, 0), (3, 0), (1, 2), (0, 1)])).tag \
        == "Other"


@given(unimodular_maps)
def test_classify_witness_maps_points(phi):
    poly = from_vertices([phi(v) for v in upsilon_indexed(2).vertices])
    got = classify(poly)
    assert got.tag == "Upsilon_d"
    image = {got.witness(v) for v in poly.points}
    assert image == set(upsilon_indexed(2).points)


def test_interior_hull_shapes():
    assert interior_hull(named_polygon("2*Sigma")).dim == -1
    assert interior_hull(named_polygon("Upsilon")).dim == 0
    assert interior_hull(named_polygon("3*Sigma")).points.points == ((1, 1),)
    inner4 = interior_hull(named_polygon("4*Sigma"))
    assert inner4.dim == 2 and len(inner4.points) == 3


def test_prune_vertex():
    poly = named_polygon("2*Sigma")
    smaller = prune_vertex(poly, (2, 0))
    assert smaller.n_points == poly.n_points - 1
    assert (2, 0) not in smaller.points
    with pytest.raises(ValueError):
        prune_vertex(poly, (1, 0))  # edge midpoint, not a vertex


def test_lw_minimality_and_sigma_point():
    assert is_lw_minimal(named_polygon("2*Sigma"))
    sq = from_vertices([(0, 0), (2, 0), (2, 2), (0, 2)])
    pt = sigma_point(sq)
    assert pt == (sum(p[0] for p in sq.points), sum(p[1] for p in sq.points))


def test_convex_hull_and_contains():
    hull = tuple(convex_hull([(0, 0), (2, 0), (0, 2), (1, 1), (0, 1)]))
    assert set(hull) == {(0, 0), (2, 0), (0, 2)}
    assert hull_contains(hull, (1, 1))
    assert not hull_contains(hull, (2, 2))


def test_named_families_scale():
    for d in (2, 3, 4):
        assert standard_triangle(d).n_points == (d + 1) * (d + 2) // 2
        assert upsilon_triangle(d).area2 == 3 * d * d
        assert upsilon_indexed(d).n_points == (d * d + 3 * d + 4) // 2


def test_ehrhart_is_quadratic(models):
    for poly in models.values():
        a2, n = poly.area2, poly.n_points
        b = poly.boundary_count
        for q in range(4):
            expect = (a2 * q * q + b * q + 2) // 2
            assert ehrhart_count(poly, q) == expect


def test_all_pairs_unimodular_detection(models):
    names = list(models)
    for x, y in combinations(names, 2):
        assert unimodular_map_between(models[x], models[y]) is None


def test_area_scaling():
    base = named_polygon("Upsilon")
    for d in (1, 2, 3):
        assert dilate(base, d).area2 == d * d * base.area2
        assert math.isqrt(dilate(base, d).area2 // 3) == d
