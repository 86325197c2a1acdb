"""Pure chromatic simplicial complexes and their cartesian products.

A vertex carries a process color and an observation; a facet holds exactly
one vertex per color; a complex is determined by its set of facets. Equality
is structural everywhere, so two facets share an agent's vertex exactly when
that agent's color and observation coincide in both.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator

# An observation is one of:
#   int                         -- a plain value (input or decision)
#   frozenset[(int, Obs)]       -- a view: the (agent, observation) pairs seen
#   (Obs, Obs)                  -- a vertex payload of a product complex
Obs = int | frozenset | tuple


def obs_key(obs: Obs) -> tuple:
    """Total-order key over observations, used for canonical sorting."""
    if isinstance(obs, int):
        return (0, obs)
    if isinstance(obs, frozenset):
        return (1, tuple(sorted((a, obs_key(o)) for a, o in obs)))
    if isinstance(obs, tuple) and len(obs) == 2:
        return (2, obs_key(obs[0]), obs_key(obs[1]))
    raise TypeError(f"not an observation: {obs!r}")


def obs_text(obs: Obs) -> str:
    """Compact textual form of an observation, stable across runs."""
    if isinstance(obs, int):
        return str(obs)
    if isinstance(obs, frozenset):
        entries = sorted(obs, key=lambda e: (e[0], obs_key(e[1])))
        return "{" + ",".join(f"{a}:{obs_text(o)}" for a, o in entries) + "}"
    return f"({obs_text(obs[0])},{obs_text(obs[1])})"


def obs_to_json(obs: Obs):
    if isinstance(obs, int):
        return obs
    if isinstance(obs, frozenset):
        entries = sorted(obs, key=lambda e: (e[0], obs_key(e[1])))
        return [[a, obs_to_json(o)] for a, o in entries]
    return [obs_to_json(obs[0]), obs_to_json(obs[1])]


def obs_from_json(data) -> Obs:
    if isinstance(data, bool):
        raise ValueError(f"not an observation: {data!r}")
    if isinstance(data, int):
        return data
    if isinstance(data, list):
        # A view is a list of [agent, obs] entries; anything else of length
        # two is a product pair. Pairs produced by this package always have
        # an integer value on the left, so the two shapes never collide.
        if all(
            isinstance(e, list) and len(e) == 2 and isinstance(e[0], int) and not isinstance(e[0], bool)
            for e in data
        ):
            return frozenset((e[0], obs_from_json(e[1])) for e in data)
        if len(data) == 2:
            return (obs_from_json(data[0]), obs_from_json(data[1]))
    raise ValueError(f"not an observation: {data!r}")


@dataclass(frozen=True)
class Vertex:
    """A colored vertex: one process together with what it observed."""

    color: int
    obs: Obs

    def key(self) -> tuple:
        return (self.color, obs_key(self.obs))

    def text(self) -> str:
        return f"{self.color}:{obs_text(self.obs)}"


class Facet:
    """A maximal simplex: one vertex per color, kept sorted by color."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Vertex]):
        vs = sorted(set(vertices), key=lambda v: v.color)
        colors = [v.color for v in vs]
        if len(set(colors)) != len(colors):
            dup = sorted({c for c in colors if colors.count(c) > 1})
            raise ValueError(f"duplicate colors in facet: {dup}")
        if not vs:
            raise ValueError("empty facet")
        self.vertices: tuple[Vertex, ...] = tuple(vs)

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(v.color for v in self.vertices)

    def vertex(self, color: int) -> Vertex:
        for v in self.vertices:
            if v.color == color:
                return v
        raise KeyError(f"no vertex of color {color}")

    def obs(self, color: int) -> Obs:
        return self.vertex(color).obs

    def key(self) -> tuple:
        return tuple(v.key() for v in self.vertices)

    def text(self) -> str:
        return " ".join(v.text() for v in self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Facet) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Facet({self.text()})"

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices)


class ChromaticComplex:
    """A pure chromatic complex of dimension n, stored by its facets.

    Facets are deduplicated and kept in a canonical order, so indices are
    stable identifiers for export and reporting.
    """

    __slots__ = ("n", "facets", "_pos")

    def __init__(self, n: int, facets: Iterable[Facet]):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        canon = sorted(set(facets), key=Facet.key)
        if not canon:
            raise ValueError("a complex needs at least one facet")
        expected = tuple(range(n + 1))
        for f in canon:
            if f.colors != expected:
                raise ValueError(
                    f"facet colors {f.colors} do not match dimension {n} "
                    f"(expected {expected})"
                )
        self.n = n
        self.facets: tuple[Facet, ...] = tuple(canon)
        self._pos = {f: i for i, f in enumerate(self.facets)}

    def vertices(self) -> frozenset[Vertex]:
        return frozenset(v for f in self.facets for v in f.vertices)

    def index(self, facet: Facet) -> int:
        try:
            return self._pos[facet]
        except KeyError:
            raise KeyError(f"facet not in complex: {facet!r}") from None

    def __contains__(self, facet: Facet) -> bool:
        return facet in self._pos

    def __len__(self) -> int:
        return len(self.facets)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChromaticComplex)
            and self.n == other.n
            and self.facets == other.facets
        )

    def __hash__(self) -> int:
        return hash((self.n, self.facets))

    def __repr__(self) -> str:
        return f"ChromaticComplex(n={self.n}, facets={len(self.facets)})"


def shared_colors(x: Facet, y: Facet) -> frozenset[int]:
    """Colors of the vertices the two facets have in common."""
    other = set(y.vertices)
    return frozenset(v.color for v in x.vertices if v in other)


def cartesian_product(c: ChromaticComplex, d: ChromaticComplex) -> ChromaticComplex:
    """Componentwise product: each vertex pairs the two observations of a color."""
    if c.n != d.n:
        raise ValueError(f"dimension mismatch: {c.n} vs {d.n}")
    facets = [
        product_facet(x, y)
        for x in c.facets
        for y in d.facets
    ]
    return ChromaticComplex(c.n, facets)


def product_facet(x: Facet, y: Facet) -> Facet:
    return Facet(
        Vertex(v.color, (v.obs, y.vertex(v.color).obs)) for v in x.vertices
    )


def _pair_obs(obs: Obs) -> tuple:
    if isinstance(obs, tuple) and len(obs) == 2:
        return obs
    raise ValueError(f"not a product observation: {obs_text(obs)}")


def project_left(z: Facet) -> Facet:
    """First component of a product facet, a color-preserving simplicial map."""
    return Facet(Vertex(v.color, _pair_obs(v.obs)[0]) for v in z.vertices)


def project_right(z: Facet) -> Facet:
    """Second component of a product facet."""
    return Facet(Vertex(v.color, _pair_obs(v.obs)[1]) for v in z.vertices)


def left_of(v: Vertex) -> Vertex:
    return Vertex(v.color, _pair_obs(v.obs)[0])


def right_of(v: Vertex) -> Vertex:
    return Vertex(v.color, _pair_obs(v.obs)[1])


def complex_to_json(c: ChromaticComplex) -> dict:
    return {
        "n": c.n,
        "facets": [
            {"vertices": [{"color": v.color, "obs": obs_to_json(v.obs)} for v in f.vertices]}
            for f in c.facets
        ],
    }


def complex_from_json(data: dict) -> ChromaticComplex:
    try:
        n = data["n"]
        raw_facets = data["facets"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed complex document: missing {exc}") from None
    facets = []
    for entry in raw_facets:
        facets.append(
            Facet(
                Vertex(v["color"], obs_from_json(v["obs"]))
                for v in entry["vertices"]
            )
        )
    return ChromaticComplex(n, facets)
