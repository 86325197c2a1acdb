"""Superset-closed adversaries, kept as their minimal survivor sets.

Membership of a process set is decided by inclusion of some survivor set;
cores are the inclusion-minimal sets of processes meeting every survivor.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable


@dataclass(frozen=True)
class Adversary:
    n: int
    survivors: frozenset[frozenset[int]]

    def contains(self, processes: Iterable[int]) -> bool:
        """True when the set of processes includes some survivor set."""
        p = frozenset(processes)
        if not p <= frozenset(range(self.n + 1)):
            raise ValueError(f"processes {sorted(p)} outside 0..{self.n}")
        return any(s <= p for s in self.survivors)

    def cores(self) -> frozenset[frozenset[int]]:
        """All minimal process sets that intersect every survivor set."""
        agents = range(self.n + 1)
        hitting = []
        for size in range(1, self.n + 2):
            for combo in combinations(agents, size):
                c = frozenset(combo)
                if all(c & s for s in self.survivors):
                    hitting.append(c)
        return frozenset(c for c in hitting if not any(h < c for h in hitting))

    def csize(self) -> int:
        return min(len(c) for c in self.cores())

    def survivor_list(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(s)) for s in self.survivors)


def from_survivor_sets(n: int, sets: Iterable[Iterable[int]]) -> Adversary:
    """Normalize the given survivor sets to the minimal antichain."""
    collected = [frozenset(s) for s in sets]
    if not collected:
        raise ValueError("at least one survivor set required")
    agents = frozenset(range(n + 1))
    for s in collected:
        if not s:
            raise ValueError("survivor sets must be nonempty")
        if not s <= agents:
            raise ValueError(f"survivor set {sorted(s)} outside 0..{n}")
    minimal = frozenset(
        s for s in collected if not any(t < s for t in collected)
    )
    return Adversary(n, minimal)


def waitfree(n: int) -> Adversary:
    """The adversary whose survivor sets are the singletons."""
    return from_survivor_sets(n, [{a} for a in range(n + 1)])


def adversary_to_json(adv: Adversary) -> dict:
    return {"n": adv.n, "survivor_sets": [list(s) for s in adv.survivor_list()]}


def adversary_from_json(data: dict) -> Adversary:
    try:
        return from_survivor_sets(data["n"], data["survivor_sets"])
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed adversary document: missing {exc}") from None
