"""Obstruction formula generators and the semantic obstruction verdict.

An obstruction for a (task, protocol) pair is a positive formula valid in
the task model yet falsified somewhere in the protocol model; exhibiting one
refutes solvability. The generators here target consensus and k-set
agreement; the agreement family is built by recursion over agent sets,
ordered by inverse inclusion, with nodes shared through formula interning.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, TypeVar

from .adversaries import Adversary
from .complexes import Facet
from .formulas import (
    FALSE,
    Formula,
    and_,
    atom,
    common,
    distributed,
    is_positive,
    know,
    not_,
    or_,
    render,
)
from .models import SimplicialModel, Verdict

T = TypeVar("T")


def greatest_fixed_subset(f: Callable[[T], T], universe: Iterable[T]) -> frozenset[T]:
    """Largest nonempty subset mapped onto itself by `f` (iterated image)."""
    current = frozenset(universe)
    if not current:
        raise ValueError("empty universe")
    while True:
        image = frozenset(f(x) for x in current)
        if image == current:
            return current
        current = image


def binary_consensus_obstruction(n: int) -> Formula:
    """Either someone did not input 0, or 'someone input 0' is common knowledge."""
    if n < 1:
        raise ValueError("need at least two agents")
    agents = range(n + 1)
    return or_(
        not_(and_(*(atom(a, 0) for a in agents))),
        common(agents, or_(*(atom(a, 0) for a in agents))),
    )


def _subsets_of(pool: Iterable[int], sizes: Iterable[int]) -> list[frozenset[int]]:
    ordered = sorted(pool)
    out = []
    for size in sizes:
        out.extend(frozenset(c) for c in combinations(ordered, size))
    return out


def _values_known(group: frozenset[int], agents: range) -> Formula:
    """Some agent holds an input from `group`."""
    return or_(*(atom(b, j) for j in sorted(group) for b in agents))


def waitfree_kset_obstruction(n: int, k: int) -> Formula:
    """The inductively built obstruction against one-round wait-free k-agreement."""
    if not 1 <= k <= n:
        raise ValueError(f"agreement bound {k} out of range 1..{n}")
    agents = range(n + 1)
    memo: dict[frozenset[int], Formula] = {}

    def guarded(group: frozenset[int]) -> Formula:
        hit = memo.get(group)
        if hit is not None:
            return hit
        rest = sorted(set(agents) - group)
        parts = [not_(atom(a, a)) for a in rest]
        parts += [know(a, _values_known(group, agents)) for a in rest]
        parts += [
            guarded(group | extra)
            for extra in _subsets_of(rest, range(1, n + 1 - len(group)))
        ]
        result = distributed(group, or_(*parts))
        memo[group] = result
        return result

    cases = [guarded(g) for g in _subsets_of(agents, range(1, k + 1))]
    return or_(*(not_(atom(a, a)) for a in agents), *cases)


@dataclass(frozen=True)
class ObstructionFamily:
    """The agreement obstruction with its per-group building blocks exposed."""

    phi: Formula
    guarded: dict
    cases: dict


def adversary_obstruction_family(
    n: int, adversary: Adversary, prune: bool = True
) -> ObstructionFamily:
    """Build the agreement obstruction for an adversary, by inverse inclusion.

    `cases[A]` says: outside A someone missed the diagonal, or someone
    outside A knows a value of A was input, or a strictly larger group
    already carries its own case distributedly. `guarded[A]` wraps the case
    in distributed knowledge of A, or collapses to false when the processes
    outside A cannot all survive. With `prune`, false branches are dropped
    from disjunctions before emission.
    """
    if adversary.n != n:
        raise ValueError("adversary dimension mismatch")
    c = adversary.csize()
    if c < 2:
        raise ValueError(
            "no nontrivial agreement bound: minimum core size must be at least 2"
        )
    agents = range(n + 1)
    everyone = frozenset(agents)
    guarded: dict[frozenset[int], Formula] = {}
    cases: dict[frozenset[int], Formula] = {}

    def disj(parts: list[Formula]) -> Formula:
        if prune:
            parts = [p for p in parts if p is not FALSE]
        return or_(*parts)

    def build(group: frozenset[int]) -> None:
        rest = sorted(everyone - group)
        parts = [not_(atom(a, a)) for a in rest]
        parts += [know(a, _values_known(group, agents)) for a in rest]
        parts += [
            guarded[group | extra]
            for extra in _subsets_of(rest, range(1, len(rest) + 1))
        ]
        cases[group] = disj(parts)
        if group and adversary.contains(everyone - group):
            guarded[group] = distributed(group, cases[group])
        elif group:
            guarded[group] = FALSE

    for size in range(n + 1, -1, -1):
        for group in _subsets_of(agents, [size]):
            build(group)

    phi = disj(
        [not_(atom(a, a)) for a in agents]
        + [guarded[g] for g in _subsets_of(agents, range(1, c))]
    )
    return ObstructionFamily(phi, guarded, cases)


def adversary_obstruction(n: int, adversary: Adversary, prune: bool = True) -> Formula:
    return adversary_obstruction_family(n, adversary, prune).phi


@dataclass(frozen=True)
class ObstructionReport:
    formula: Formula
    positive: bool
    task_verdict: Verdict
    protocol_verdict: Verdict
    protocol_counterexamples: tuple[Facet, ...]
    counterexample_ids: tuple[int, ...]
    is_obstruction: bool


def verify_obstruction(
    task: SimplicialModel,
    protocol: SimplicialModel,
    phi: Formula,
    cap: int = 10,
) -> ObstructionReport:
    """Check positivity, validity in the task, and refutation in the protocol."""
    if task.complex.n != protocol.complex.n:
        raise ValueError("task and protocol must share the agent set")
    positive = is_positive(phi)
    task_verdict = task.validity(phi)
    counterexamples = protocol.counterexamples(phi, cap)
    protocol_verdict = Verdict(counterexamples[0] if counterexamples else None)
    return ObstructionReport(
        formula=phi,
        positive=positive,
        task_verdict=task_verdict,
        protocol_verdict=protocol_verdict,
        protocol_counterexamples=tuple(counterexamples),
        counterexample_ids=tuple(protocol.complex.index(f) for f in counterexamples),
        is_obstruction=positive and task_verdict.is_valid and bool(counterexamples),
    )


def report_to_json(report: ObstructionReport) -> dict:
    return {
        "formula": render(report.formula),
        "positive": report.positive,
        "task_valid": report.task_verdict.is_valid,
        "protocol_counterexamples": list(report.counterexample_ids),
        "is_obstruction": report.is_obstruction,
    }
