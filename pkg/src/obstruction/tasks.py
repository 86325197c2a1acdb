"""Initial models, protocol and task action models, and product updates.

Protocols and tasks are action models: complexes whose facets each carry a
precondition formula. Applying an action to an initial model keeps exactly
the product facets whose input half satisfies the action's precondition.

The one-round protocols built here index their facets by how much each agent
saw of the shared memory:

* the snapshot protocol enumerates ordered set partitions of the agents,
  every agent seeing the writes of all blocks up to its own;
* the adversarial round operator enumerates per-agent view sets that must
  include the agent itself, include a surviving process set, and be totally
  ordered by inclusion (no immediacy requirement, so it admits more facets).
"""

from dataclasses import dataclass
from itertools import combinations, product as iter_product
from typing import Iterable, Sequence

from .adversaries import Adversary
from .complexes import (
    ChromaticComplex,
    Facet,
    Vertex,
    complex_to_json,
    complex_from_json,
    product_facet,
)
from .formulas import Formula, and_, atom, or_, parse, render
from .models import SimplicialModel, induce_model


@dataclass(frozen=True)
class ActionModel:
    """A complex of action points, each guarded by a precondition.

    `pinned` is set on uniform models, mapping each action facet to the one
    input facet its precondition singles out; it enables a direct product
    construction that skips formula evaluation.
    """

    complex: ChromaticComplex
    pre: dict[Facet, Formula]
    name: str
    pinned: dict[Facet, Facet] | None = None

    def __post_init__(self):
        missing = [f for f in self.complex.facets if f not in self.pre]
        if missing:
            raise ValueError(f"{len(missing)} facets lack a precondition")


def _nonempty_subsets(items: Sequence[int]) -> list[frozenset[int]]:
    ordered = sorted(items)
    subsets = []
    for size in range(1, len(ordered) + 1):
        subsets.extend(combinations(ordered, size))
    subsets.sort()
    return [frozenset(s) for s in subsets]


def ordered_set_partitions(items: Iterable[int]) -> list[tuple[frozenset[int], ...]]:
    """All ordered partitions into nonempty blocks, in lexicographic block order."""
    universe = tuple(sorted(items))

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield ()
            return
        for block in _nonempty_subsets(remaining):
            rest = tuple(x for x in remaining if x not in block)
            for tail in rec(rest):
                yield (block,) + tail

    return list(rec(universe))


def pin_formula(facet: Facet) -> Formula:
    """Conjunction of atoms holding exactly at this input facet."""
    return and_(*(atom(v.color, v.obs) for v in facet.vertices))


def initial_complex(n: int, inputs: Iterable[int]) -> ChromaticComplex:
    values = sorted(set(inputs))
    if not values:
        raise ValueError("at least one input value required")
    if not all(isinstance(v, int) for v in values):
        raise TypeError("input values must be integers")
    facets = [
        Facet(Vertex(a, assignment[a]) for a in range(n + 1))
        for assignment in iter_product(values, repeat=n + 1)
    ]
    return ChromaticComplex(n, facets)


def initial_model(n: int, inputs: Iterable[int]) -> SimplicialModel:
    """The model of all input assignments over the given value set."""
    return induce_model(initial_complex(n, inputs), "obs")


# -- protocol action models ------------------------------------------------


def immediate_snapshot_action(n: int, inputs: Iterable[int]) -> ActionModel:
    """One action facet per input facet and ordered set partition of agents."""
    agents = range(n + 1)
    partitions = ordered_set_partitions(agents)
    facets, pre, pinned = [], {}, {}
    for x in initial_complex(n, inputs).facets:
        guard = pin_formula(x)
        for partition in partitions:
            seen: set[int] = set()
            views: dict[int, frozenset] = {}
            for block in partition:
                seen |= block
                view = frozenset((b, x.obs(b)) for b in seen)
                for a in block:
                    views[a] = view
            facet = Facet(Vertex(a, views[a]) for a in agents)
            facets.append(facet)
            pre[facet] = guard
            pinned[facet] = x
    return ActionModel(ChromaticComplex(n, facets), pre, "is", pinned)


def view_vectors(n: int, adversary: Adversary) -> list[tuple[frozenset[int], ...]]:
    """Per-agent view sets: self-including, surviving, totally ordered by inclusion."""
    if adversary.n != n:
        raise ValueError("adversary dimension mismatch")
    agents = range(n + 1)
    options = [
        [s for s in _nonempty_subsets(agents) if a in s and adversary.contains(s)]
        for a in agents
    ]
    vectors = []
    for combo in iter_product(*options):
        if all(
            combo[i] <= combo[j] or combo[j] <= combo[i]
            for i in agents
            for j in range(i + 1, n + 1)
        ):
            vectors.append(combo)
    return vectors


def is_immediate(vector: Sequence[frozenset[int]]) -> bool:
    """Snapshot immediacy: whoever you see has seen at most what you saw."""
    return all(
        vector[b] <= vector[a]
        for a in range(len(vector))
        for b in vector[a]
    )


def round_operator_action(
    n: int, adversary: Adversary, inputs: Iterable[int] | None = None
) -> ActionModel:
    """One action facet per input facet and admissible view vector."""
    agents = range(n + 1)
    values = range(n + 1) if inputs is None else inputs
    vectors = view_vectors(n, adversary)
    facets, pre, pinned = [], {}, {}
    for x in initial_complex(n, values).facets:
        guard = pin_formula(x)
        for vector in vectors:
            facet = Facet(
                Vertex(a, frozenset((b, x.obs(b)) for b in vector[a]))
                for a in agents
            )
            facets.append(facet)
            pre[facet] = guard
            pinned[facet] = x
    return ActionModel(ChromaticComplex(n, facets), pre, "round", pinned)


# -- task action models ------------------------------------------------------


def binary_consensus_action(n: int) -> ActionModel:
    """Two action points: everyone decides 0, or everyone decides 1."""
    agents = range(n + 1)
    facets = [Facet(Vertex(a, d) for a in agents) for d in (0, 1)]
    pre = {
        facets[d]: or_(*(atom(a, d) for a in agents))
        for d in (0, 1)
    }
    return ActionModel(ChromaticComplex(n, facets), pre, "bc")


def set_agreement_action(
    n: int, k: int, values: Iterable[int] | None = None
) -> ActionModel:
    """Decision vectors over at most k distinct values, each an input somewhere."""
    if not 1 <= k <= n + 1:
        raise ValueError(f"agreement bound {k} out of range 1..{n + 1}")
    agents = range(n + 1)
    universe = sorted(range(n + 1) if values is None else set(values))
    facets, pre = [], {}
    for decisions in iter_product(universe, repeat=n + 1):
        if len(set(decisions)) > k:
            continue
        facet = Facet(Vertex(a, decisions[a]) for a in agents)
        facets.append(facet)
        pre[facet] = and_(
            *(or_(*(atom(b, decisions[a]) for b in agents)) for a in agents)
        )
    return ActionModel(ChromaticComplex(n, facets), pre, f"sa:{k}")


def decide_own_input_action(n: int, values: Iterable[int]) -> ActionModel:
    """The trivial task: every agent decides exactly its own input."""
    agents = range(n + 1)
    universe = sorted(set(values))
    facets, pre, pinned = [], {}, {}
    for decisions in iter_product(universe, repeat=n + 1):
        facet = Facet(Vertex(a, decisions[a]) for a in agents)
        facets.append(facet)
        pre[facet] = and_(*(atom(a, decisions[a]) for a in agents))
        # The decision facet doubles as the input facet it pins.
        pinned[facet] = facet
    return ActionModel(ChromaticComplex(n, facets), pre, "sa-trivial", pinned)


# -- product update ----------------------------------------------------------


def product_update(model: SimplicialModel, action: ActionModel) -> SimplicialModel:
    """Keep the product facets whose input half satisfies the precondition."""
    if model.complex.n != action.complex.n:
        raise ValueError("dimension mismatch between model and action")
    kept = []
    for x in model.complex.facets:
        for y in action.complex.facets:
            if model.satisfies(x, action.pre[y]):
                kept.append(product_facet(x, y))
    if not kept:
        raise ValueError("empty product update: preconditions exclude every pair")
    return induce_model(ChromaticComplex(model.complex.n, kept), "left")


def uniform_product(model: SimplicialModel, action: ActionModel) -> SimplicialModel:
    """Direct product for uniform actions, pairing each facet with its pinned input."""
    if action.pinned is None:
        raise ValueError(f"action {action.name!r} is not uniform")
    if model.complex.n != action.complex.n:
        raise ValueError("dimension mismatch between model and action")
    kept = []
    for y in action.complex.facets:
        x = action.pinned[y]
        if x in model.complex:
            kept.append(product_facet(x, y))
    if not kept:
        raise ValueError("empty product update: no pinned input facet present")
    return induce_model(ChromaticComplex(model.complex.n, kept), "left")


def apply_action(model: SimplicialModel, action: ActionModel) -> SimplicialModel:
    return (
        uniform_product(model, action)
        if action.pinned is not None
        else product_update(model, action)
    )


# -- facet accessors ---------------------------------------------------------


def input_of(facet: Facet, agent: int) -> int:
    """Input value at the agent's vertex of a product facet."""
    obs = facet.obs(agent)
    if isinstance(obs, tuple) and len(obs) == 2 and isinstance(obs[0], int):
        return obs[0]
    raise ValueError(f"vertex of color {agent} carries no input component")


def output_of(facet: Facet, agent: int) -> int:
    """Decision value at the agent's vertex of a decision-task product facet."""
    obs = facet.obs(agent)
    if isinstance(obs, tuple) and len(obs) == 2 and isinstance(obs[1], int):
        return obs[1]
    raise ValueError(f"vertex of color {agent} carries no decision component")


def view_of(facet: Facet, agent: int) -> frozenset:
    """Snapshot view at the agent's vertex of a protocol (or action) facet."""
    obs = facet.obs(agent)
    if isinstance(obs, tuple) and len(obs) == 2:
        obs = obs[1]
    if isinstance(obs, frozenset):
        return obs
    raise ValueError(f"vertex of color {agent} carries no view")


def seen_agents(facet: Facet, agent: int) -> frozenset[int]:
    """Agents whose writes appear in this agent's view."""
    return frozenset(b for b, _ in view_of(facet, agent))


def min_view(facet: Facet) -> frozenset[int]:
    """Agents seen by everybody: the least element of the view chain."""
    sets = [seen_agents(facet, a) for a in range(len(facet.vertices))]
    least = sets[0]
    for s in sets[1:]:
        least &= s
    return least


# -- serialization -----------------------------------------------------------


def action_to_json(action: ActionModel) -> dict:
    doc = complex_to_json(action.complex)
    doc["name"] = action.name
    doc["pre"] = {
        str(i): render(action.pre[f]) for i, f in enumerate(action.complex.facets)
    }
    return doc


def action_from_json(data: dict) -> ActionModel:
    complex = complex_from_json(data)
    raw = data.get("pre")
    if raw is None:
        raise ValueError("malformed action document: missing preconditions")
    pre = {}
    for i, facet in enumerate(complex.facets):
        text = raw.get(str(i))
        if text is None:
            raise ValueError(f"facet {i} lacks a precondition")
        pre[facet] = parse(text)
    return ActionModel(complex, pre, data.get("name", "imported"))
