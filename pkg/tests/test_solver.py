import random

import pytest

from obstruction.adversaries import waitfree
from obstruction.complexes import Vertex, project_left
from obstruction.formulas import atom, is_positive, know, not_
from obstruction.generators import binary_consensus_obstruction, verify_obstruction
from obstruction.models import check_morphism, map_facet
from obstruction.solver import (
    Solvability,
    find_morphism,
    knowledge_gain_check,
    random_positive_formula,
    solution_violation,
)
from obstruction.tasks import (
    apply_action,
    binary_consensus_action,
    decide_own_input_action,
    immediate_snapshot_action,
    initial_model,
    round_operator_action,
    set_agreement_action,
)


def snapshot_protocol(n=1, inputs=(0, 1)):
    return apply_action(initial_model(n, inputs), immediate_snapshot_action(n, inputs))


def consensus_task(n=1, inputs=(0, 1)):
    return apply_action(initial_model(n, inputs), binary_consensus_action(n))


def trivial_task(n=1, inputs=(0, 1)):
    return apply_action(initial_model(n, inputs), decide_own_input_action(n, inputs))


def test_consensus_unsolvable_by_snapshot():
    result = find_morphism(snapshot_protocol(), consensus_task())
    assert result.status is Solvability.UNSOLVABLE
    assert result.witness is None
    assert result.explored > 0


def test_search_is_deterministic():
    first = find_morphism(snapshot_protocol(), consensus_task())
    second = find_morphism(snapshot_protocol(), consensus_task())
    assert first.status is second.status
    assert first.explored == second.explored


def test_trivial_task_solvable_with_verified_witness():
    protocol = snapshot_protocol()
    task = trivial_task()
    result = find_morphism(protocol, task)
    assert result.status is Solvability.SOLVABLE
    witness = result.witness

    # Color preservation.
    assert all(v.color == image.color for v, image in witness.items())
    # Simpliciality: facets land on facets.
    for facet in protocol.complex.facets:
        assert map_facet(witness, facet) in task.complex
    # Labeling preservation.
    for facet in protocol.complex.facets:
        assert task.atoms_of(map_facet(witness, facet)) == protocol.atoms_of(facet)
    # Input projection commutes.
    for facet in protocol.complex.facets:
        assert project_left(map_facet(witness, facet)) == project_left(facet)

    assert check_morphism(witness, protocol, task)
    assert solution_violation(witness, protocol, task) is None


def test_trivial_task_has_single_candidate_per_vertex():
    protocol = snapshot_protocol()
    result = find_morphism(protocol, trivial_task())
    # Every vertex has exactly one decision, so the search never backtracks.
    assert result.explored == len(protocol.complex.vertices())


def test_protocol_maps_onto_itself():
    protocol = snapshot_protocol()
    result = find_morphism(protocol, protocol)
    assert result.status is Solvability.SOLVABLE
    assert solution_violation(result.witness, protocol, protocol) is None


def test_budget_exhaustion_reports_resource_limit():
    result = find_morphism(snapshot_protocol(), consensus_task(), budget=1)
    assert result.status is Solvability.RESOURCE_LIMIT
    assert result.explored == 1


def test_budget_must_be_positive():
    with pytest.raises(ValueError, match="positive"):
        find_morphism(snapshot_protocol(), consensus_task(), budget=0)


def test_non_product_models_rejected():
    plain = initial_model(1, [0, 1])
    with pytest.raises(ValueError, match="product update"):
        find_morphism(plain, consensus_task())
    with pytest.raises(ValueError, match="product update"):
        find_morphism(snapshot_protocol(), plain)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="agent set"):
        find_morphism(snapshot_protocol(1), consensus_task(2))


def test_round_protocol_cannot_reach_agreement_quickly():
    # Larger instance: accept either an exhaustive refutation or an honest
    # budget stop, and in the first case agree with the obstruction verdict.
    protocol = apply_action(
        initial_model(2, [0, 1, 2]), round_operator_action(2, waitfree(2))
    )
    task = apply_action(initial_model(2, [0, 1, 2]), set_agreement_action(2, 1))
    result = find_morphism(protocol, task, budget=200_000)
    assert result.status in (Solvability.UNSOLVABLE, Solvability.RESOURCE_LIMIT)
    assert result.witness is None


def test_obstruction_and_search_verdicts_agree_for_two_agents():
    protocol = snapshot_protocol()
    task = consensus_task()
    report = verify_obstruction(task, protocol, binary_consensus_obstruction(1))
    assert report.is_obstruction
    assert find_morphism(protocol, task).status is Solvability.UNSOLVABLE


def test_obstruction_and_search_agree_on_all_small_instances():
    from obstruction.generators import adversary_obstruction

    initial = initial_model(1, [0, 1])
    pairs = [
        (
            apply_action(initial, immediate_snapshot_action(1, [0, 1])),
            consensus_task(),
            binary_consensus_obstruction(1),
        ),
        (
            apply_action(initial, round_operator_action(1, waitfree(1), [0, 1])),
            apply_action(initial, set_agreement_action(1, 1, [0, 1])),
            adversary_obstruction(1, waitfree(1)),
        ),
        (
            apply_action(initial, immediate_snapshot_action(1, [0, 1])),
            apply_action(initial, set_agreement_action(1, 1, [0, 1])),
            adversary_obstruction(1, waitfree(1)),
        ),
    ]
    for protocol, task, phi in pairs:
        report = verify_obstruction(task, protocol, phi)
        result = find_morphism(protocol, task)
        if report.is_obstruction:
            assert result.status is not Solvability.SOLVABLE
        assert result.status is Solvability.UNSOLVABLE


def test_witness_respects_intersections_up_to_inclusion():
    from obstruction.complexes import shared_colors

    protocol = snapshot_protocol()
    task = trivial_task()
    witness = find_morphism(protocol, task).witness
    facets = protocol.complex.facets
    for x in facets:
        for y in facets:
            meet = set(x.vertices) & set(y.vertices)
            mapped = frozenset(witness[v].color for v in meet)
            assert mapped <= shared_colors(map_facet(witness, x), map_facet(witness, y))
    # Injective maps commute with intersection exactly.
    identity = {v: v for f in facets for v in f.vertices}
    for x in facets:
        for y in facets:
            meet_colors = frozenset(v.color for v in set(x.vertices) & set(y.vertices))
            assert meet_colors == shared_colors(
                map_facet(identity, x), map_facet(identity, y)
            )


def test_knowledge_gain_with_identity_map(demo_model):
    identity = {v: v for v in demo_model.complex.vertices()}
    formulas = [know(0, atom(0, 2)), not_(atom(1, 1)), atom(2, 2)]
    assert knowledge_gain_check(identity, demo_model, demo_model, formulas)


def test_knowledge_gain_on_discovered_witness():
    protocol = snapshot_protocol()
    task = trivial_task()
    witness = find_morphism(protocol, task).witness
    rng = random.Random(0)
    formulas = [
        random_positive_formula(rng, [0, 1], [0, 1], depth=3) for _ in range(100)
    ]
    assert all(is_positive(phi) for phi in formulas)
    assert knowledge_gain_check(witness, protocol, task, formulas)


def test_knowledge_gain_rejects_non_positive_formula(demo_model):
    identity = {v: v for v in demo_model.complex.vertices()}
    bad = not_(know(0, atom(0, 2)))
    with pytest.raises(ValueError, match="not positive"):
        knowledge_gain_check(identity, demo_model, demo_model, [bad])


def test_knowledge_gain_rejects_corrupted_map(demo_model):
    broken = {v: Vertex(v.color, 9) for v in demo_model.complex.vertices()}
    with pytest.raises(ValueError, match="not a morphism"):
        knowledge_gain_check(broken, demo_model, demo_model, [atom(0, 2)])


def test_random_positive_formulas_are_deterministic():
    first = [
        random_positive_formula(random.Random(3), [0, 1], [0, 1], depth=3)
        for _ in range(5)
    ]
    second = [
        random_positive_formula(random.Random(3), [0, 1], [0, 1], depth=3)
        for _ in range(5)
    ]
    assert first == second
