"""Exhaustive search for task-solving decision maps, plus verification helpers.

Solving a task means mapping every protocol vertex to a task vertex of the
same color and input value so that protocol facets land on task facets.
Fixing color and input collapses the search to choosing one decision per
protocol vertex, which a backtracking scan with per-facet forward checking
decides exhaustively at small scale.
"""

import random
from dataclasses import dataclass
from enum import Enum

from .complexes import Facet, Vertex, obs_key, project_left
from .formulas import Formula, atom, and_, or_, not_, know, common, distributed, is_positive
from .models import SimplicialModel, map_facet, morphism_violation


class Solvability(Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    RESOURCE_LIMIT = "resource-limit"


@dataclass(frozen=True)
class SolvabilityResult:
    status: Solvability
    witness: dict | None
    explored: int


class _Budget(Exception):
    pass


def _require_product(model: SimplicialModel, role: str) -> None:
    for facet in model.complex.facets:
        for v in facet.vertices:
            if not (isinstance(v.obs, tuple) and len(v.obs) == 2):
                raise ValueError(f"{role} model is not a product update model")


def find_morphism(
    protocol: SimplicialModel,
    task: SimplicialModel,
    budget: int = 10_000_000,
) -> SolvabilityResult:
    """Search for a solving map from the protocol onto the task.

    Returns an exhaustive verdict unless the node budget runs out first;
    a found witness is re-verified against all morphism conditions before
    being reported.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    if protocol.complex.n != task.complex.n:
        raise ValueError("protocol and task must share the agent set")
    _require_product(protocol, "protocol")
    _require_product(task, "task")

    # Decisions available per (color, input value), in ascending order.
    decisions: dict[tuple[int, int], list] = {}
    for v in task.complex.vertices():
        decisions.setdefault((v.color, v.obs[0]), []).append(v.obs[1])
    for options in decisions.values():
        options.sort(key=obs_key)
        deduped = []
        for d in options:
            if not deduped or deduped[-1] != d:
                deduped.append(d)
        options[:] = deduped

    # Decision vectors allowed per input facet of the task.
    allowed_by_input: dict[Facet, list[tuple]] = {}
    for f in task.complex.facets:
        vector = tuple(v.obs[1] for v in f.vertices)
        allowed_by_input.setdefault(project_left(f), []).append(vector)

    vertices = sorted(protocol.complex.vertices(), key=Vertex.key)
    candidates = {
        v: decisions.get((v.color, v.obs[0]), []) for v in vertices
    }
    membership: dict[Vertex, list[int]] = {v: [] for v in vertices}
    facet_allowed: list[list[tuple]] = []
    for i, facet in enumerate(protocol.complex.facets):
        facet_allowed.append(allowed_by_input.get(project_left(facet), []))
        for v in facet.vertices:
            membership[v].append(i)

    # Most constrained first; higher facet degree breaks ties for pruning power.
    order = sorted(
        vertices,
        key=lambda v: (len(candidates[v]), -len(membership[v]), v.key()),
    )
    protocol_facets = protocol.complex.facets
    assignment: dict[Vertex, object] = {}
    explored = 0

    def consistent(facet_id: int) -> bool:
        facet = protocol_facets[facet_id]
        fixed = [
            (i, assignment[v])
            for i, v in enumerate(facet.vertices)
            if v in assignment
        ]
        return any(
            all(vector[i] == d for i, d in fixed)
            for vector in facet_allowed[facet_id]
        )

    def search(depth: int) -> bool:
        nonlocal explored
        if depth == len(order):
            return True
        vertex = order[depth]
        for d in candidates[vertex]:
            if explored >= budget:
                raise _Budget()
            explored += 1
            assignment[vertex] = d
            if all(consistent(i) for i in membership[vertex]):
                if search(depth + 1):
                    return True
            del assignment[vertex]
        return False

    try:
        found = search(0)
    except _Budget:
        return SolvabilityResult(Solvability.RESOURCE_LIMIT, None, explored)

    if not found:
        return SolvabilityResult(Solvability.UNSOLVABLE, None, explored)

    witness = {
        v: Vertex(v.color, (v.obs[0], assignment[v])) for v in vertices
    }
    problem = solution_violation(witness, protocol, task)
    if problem is not None:  # pragma: no cover - internal consistency guard
        raise RuntimeError(f"search produced an invalid witness: {problem}")
    return SolvabilityResult(Solvability.SOLVABLE, witness, explored)


def solution_violation(
    delta: dict[Vertex, Vertex],
    protocol: SimplicialModel,
    task: SimplicialModel,
) -> str | None:
    """Morphism conditions plus preservation of the input half of every vertex."""
    problem = morphism_violation(delta, protocol, task)
    if problem is not None:
        return problem
    for v, image in delta.items():
        if v.obs[0] != image.obs[0]:
            return f"vertex {v.text()} changes its input component"
    return None


def knowledge_gain_check(
    delta: dict[Vertex, Vertex],
    source: SimplicialModel,
    target: SimplicialModel,
    formulas,
) -> bool:
    """Positive truths must pull back along a morphism: target says, source says."""
    formulas = list(formulas)
    for phi in formulas:
        if not is_positive(phi):
            raise ValueError(f"formula is not positive: {phi}")
    problem = morphism_violation(delta, source, target)
    if problem is not None:
        raise ValueError(f"not a morphism: {problem}")
    for facet in source.complex.facets:
        image = map_facet(delta, facet)
        for phi in formulas:
            if target.satisfies(image, phi) and not source.satisfies(facet, phi):
                return False
    return True


def random_positive_formula(
    rng: random.Random,
    agents,
    values,
    depth: int = 3,
) -> Formula:
    """Seeded generator of positive formulas over the given atom universe."""
    agents = sorted(agents)
    values = sorted(values)

    def leaf() -> Formula:
        return atom(rng.choice(agents), rng.choice(values))

    def propositional(d: int) -> Formula:
        if d == 0:
            return leaf()
        pick = rng.randrange(4)
        if pick == 0:
            return leaf()
        if pick == 1:
            return not_(propositional(d - 1))
        parts = [propositional(d - 1) for _ in range(2)]
        return and_(*parts) if pick == 2 else or_(*parts)

    def positive(d: int) -> Formula:
        if d == 0:
            return leaf()
        pick = rng.randrange(7)
        if pick == 0:
            return leaf()
        if pick == 1:
            return not_(propositional(d - 1))
        if pick == 2:
            return and_(positive(d - 1), positive(d - 1))
        if pick == 3:
            return or_(positive(d - 1), positive(d - 1))
        if pick == 4:
            return know(rng.choice(agents), positive(d - 1))
        group = frozenset(rng.sample(agents, rng.randrange(1, len(agents) + 1)))
        ctor = common if pick == 5 else distributed
        return ctor(group, positive(d - 1))

    return positive(depth)
