import pytest

from obstruction.complexes import (
    ChromaticComplex,
    Facet,
    Vertex,
    cartesian_product,
    complex_from_json,
    complex_to_json,
    left_of,
    obs_from_json,
    obs_key,
    obs_to_json,
    product_facet,
    project_left,
    project_right,
    shared_colors,
)
from obstruction.tasks import binary_consensus_action, initial_complex

from helpers import facet_with_values


def test_demo_complex_shape(demo_model):
    assert demo_model.complex.n == 2
    assert len(demo_model.complex.facets) == 5


def test_zero_dimensional_complex():
    c = ChromaticComplex(0, [Facet([Vertex(0, 7)])])
    assert len(c.facets) == 1
    assert c.facets[0].obs(0) == 7


def test_duplicate_color_rejected():
    with pytest.raises(ValueError, match="duplicate colors"):
        Facet([Vertex(0, 1), Vertex(0, 2)])


def test_wrong_facet_size_rejected():
    good = Facet([Vertex(0, 0), Vertex(1, 0)])
    with pytest.raises(ValueError, match="do not match dimension"):
        ChromaticComplex(2, [good])


def test_empty_complex_rejected():
    with pytest.raises(ValueError):
        ChromaticComplex(1, [])


def test_shared_colors_demo(demo_model):
    x1 = facet_with_values(demo_model, (2, 1, 0))
    x2 = facet_with_values(demo_model, (2, 2, 1))
    assert shared_colors(x1, x2) == frozenset({0})


def test_shared_colors_reflexive(demo_model):
    for f in demo_model.complex.facets:
        assert shared_colors(f, f) == frozenset({0, 1, 2})


def test_shared_colors_disjoint():
    x = Facet([Vertex(0, 0), Vertex(1, 0)])
    y = Facet([Vertex(0, 1), Vertex(1, 1)])
    assert shared_colors(x, y) == frozenset()


def _complex_of_values(n, value_rows):
    return ChromaticComplex(
        n,
        [Facet(Vertex(a, row[a]) for a in range(n + 1)) for row in value_rows],
    )


def test_product_cardinality():
    c = _complex_of_values(1, [(0, 0), (1, 1), (2, 2), (3, 3)])
    d = _complex_of_values(1, [(5, 5), (6, 6), (7, 7)])
    p = cartesian_product(c, d)
    assert len(p.facets) == 12


def test_product_single_facets_pairs_observations():
    c = _complex_of_values(1, [(0, 1)])
    d = _complex_of_values(1, [(8, 9)])
    p = cartesian_product(c, d)
    assert len(p.facets) == 1
    assert p.facets[0].obs(0) == (0, 8)
    assert p.facets[0].obs(1) == (1, 9)


def test_product_with_consensus_actions_before_filtering():
    inputs = initial_complex(1, [0, 1])
    actions = binary_consensus_action(1).complex
    p = cartesian_product(inputs, actions)
    assert len(p.facets) == 8


def test_product_dimension_mismatch():
    c = _complex_of_values(1, [(0, 0)])
    d = _complex_of_values(0, [(0,)])
    with pytest.raises(ValueError, match="dimension mismatch"):
        cartesian_product(c, d)


def test_projections_invert_pairing():
    c = _complex_of_values(1, [(0, 0), (1, 1)])
    d = _complex_of_values(1, [(4, 4), (5, 5)])
    for x in c.facets:
        for y in d.facets:
            z = product_facet(x, y)
            assert project_left(z) == x
            assert project_right(z) == y
            for v in z.vertices:
                assert left_of(v) == x.vertex(v.color)


def test_projection_rejects_plain_facet():
    with pytest.raises(ValueError, match="not a product"):
        project_left(Facet([Vertex(0, 3)]))


def test_consensus_product_right_projection():
    from obstruction.tasks import apply_action, initial_model

    model = apply_action(initial_model(1, [0, 1]), binary_consensus_action(1))
    decisions = {project_right(f) for f in model.complex.facets}
    expected = {
        Facet([Vertex(0, d), Vertex(1, d)]) for d in (0, 1)
    }
    assert decisions == expected


def test_product_shared_colors_decompose():
    c = _complex_of_values(1, [(0, 0), (0, 1), (1, 1)])
    d = _complex_of_values(1, [(4, 4), (4, 5)])
    p = cartesian_product(c, d)
    for z in p.facets:
        for w in p.facets:
            assert shared_colors(z, w) == shared_colors(
                project_left(z), project_left(w)
            ) & shared_colors(project_right(z), project_right(w))


def test_complex_json_round_trip(demo_model):
    doc = complex_to_json(demo_model.complex)
    again = complex_from_json(doc)
    assert again == demo_model.complex
    assert complex_to_json(again) == doc


def test_view_and_pair_observations_round_trip():
    view = frozenset({(0, 0), (1, 1)})
    pair = (0, view)
    nested_pair = (3, 4)
    for obs in (5, view, pair, nested_pair, frozenset()):
        assert obs_from_json(obs_to_json(obs)) == obs


def test_obs_key_orders_mixed_kinds():
    items = [frozenset({(0, 1)}), 3, (1, 2), 0]
    ordered = sorted(items, key=obs_key)
    assert ordered == [0, 3, frozenset({(0, 1)}), (1, 2)]


def test_facets_are_canonically_ordered(demo_model):
    keys = [f.key() for f in demo_model.complex.facets]
    assert keys == sorted(keys)


def test_complex_index_lookup(demo_model):
    for i, f in enumerate(demo_model.complex.facets):
        assert demo_model.complex.index(f) == i
    with pytest.raises(KeyError):
        demo_model.complex.index(Facet([Vertex(0, 9), Vertex(1, 9), Vertex(2, 9)]))
