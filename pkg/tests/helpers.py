"""Shared test utilities: facet locators and an independent naive evaluator."""

from obstruction.complexes import Facet, shared_colors
from obstruction.models import SimplicialModel
from obstruction.tasks import input_of, seen_agents


def facet_with_values(model: SimplicialModel, values) -> Facet:
    """The facet whose per-color observations equal `values`."""
    target = tuple(values)
    for f in model.complex.facets:
        if tuple(v.obs for v in f.vertices) == target:
            return f
    raise AssertionError(f"no facet with values {target}")


def protocol_facet(model: SimplicialModel, inputs, seen_sets) -> Facet:
    """The product facet with the given input vector and per-agent seen sets."""
    n = model.complex.n
    wanted = [frozenset(s) for s in seen_sets]
    for f in model.complex.facets:
        if all(input_of(f, a) == inputs[a] for a in range(n + 1)) and all(
            seen_agents(f, a) == wanted[a] for a in range(n + 1)
        ):
            return f
    raise AssertionError(f"no facet with inputs {inputs} and views {seen_sets}")


def naive_satisfies(model: SimplicialModel, facet: Facet, phi) -> bool:
    """Plain recursive evaluation straight off the definitions, no caches.

    Relations are recomputed from shared vertices on every query, so this is
    an independent cross-check for the memoized evaluator.
    """
    facets = model.complex.facets

    def related(x, agent):
        return [y for y in facets if agent in shared_colors(x, y)]

    def related_all(x, agents):
        return [y for y in facets if all(a in shared_colors(x, y) for a in agents)]

    def closure(x, agents):
        component = {x}
        changed = True
        while changed:
            changed = False
            for y in facets:
                if y in component:
                    continue
                if any(
                    a in shared_colors(z, y) for z in component for a in agents
                ):
                    component.add(y)
                    changed = True
        return component

    def ev(x, node):
        kind = node.kind
        if kind == "false":
            return False
        if kind == "atom":
            return (node.agent, node.value) in model.atoms_of(x)
        if kind == "or":
            return any(ev(x, c) for c in node.children)
        if kind == "and":
            return all(ev(x, c) for c in node.children)
        if kind == "not":
            return not ev(x, node.children[0])
        if kind == "know":
            return all(ev(y, node.children[0]) for y in related(x, node.agent))
        if kind == "dist":
            return all(ev(y, node.children[0]) for y in related_all(x, node.agents))
        if kind == "common":
            return all(ev(y, node.children[0]) for y in closure(x, node.agents))
        raise AssertionError(kind)

    return ev(facet, phi)
