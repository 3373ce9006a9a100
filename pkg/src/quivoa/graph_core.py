"""Finite directed multigraphs, their shadows and their doubles.

Vertices and edges are named by opaque string identifiers.  Internally every
identifier is interned to a dense integer *letter index*: vertices occupy
``0 .. n-1`` in declaration order and edges follow in declaration order.  The
same indexing is used by the word semigroup, so a word is just a tuple of ints.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import CapacityError, PreconditionError

MAX_SUBSET_VERTICES = 24
STAR_SUFFIX = "~"


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.range


@dataclass(frozen=True)
class DirectedMultigraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "edges", tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        )
        seen = set()
        for name in itertools.chain(self.vertices, (e.id for e in self.edges)):
            if name in seen:
                raise PreconditionError(f"duplicate identifier {name!r}")
            seen.add(name)
        verts = set(self.vertices)
        for e in self.edges:
            for end in (e.source, e.range):
                if end not in verts:
                    raise PreconditionError(f"edge {e.id!r} has unknown endpoint {end!r}")

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]] = ()):
        """Construct from ``(id, source, range)`` triples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def __repr__(self):
        es = ", ".join(f"{e.id}:{e.source}->{e.range}" for e in self.edges)
        return f"DirectedMultigraph({list(self.vertices)}, [{es}])"

    # -- interning -----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def letters(self) -> tuple[str, ...]:
        return self.vertices + tuple(e.id for e in self.edges)

    @cached_property
    def letter_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.letters)}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def range_letter(self) -> tuple[int, ...]:
        """r(x) for every letter x, as a letter index (r(v) = v)."""
        vi = self.vertex_index
        return tuple(range(self.n_vertices)) + tuple(vi[e.range] for e in self.edges)

    @cached_property
    def source_letter(self) -> tuple[int, ...]:
        """s(x) for every letter x, as a letter index (s(v) = v)."""
        vi = self.vertex_index
        return tuple(range(self.n_vertices)) + tuple(vi[e.source] for e in self.edges)

    def is_edge_letter(self, i: int) -> bool:
        return i >= self.n_vertices

    def edge_of_letter(self, i: int) -> Edge:
        return self.edges[i - self.n_vertices]

    def check_vertex(self, v: str) -> None:
        if v not in self.vertex_index:
            raise PreconditionError(f"unknown vertex {v!r}")

    def subset_mask(self, subset: Iterable[str]) -> int:
        mask = 0
        for v in subset:
            self.check_vertex(v)
            mask |= 1 << self.vertex_index[v]
        return mask

    def mask_vertices(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        """Bitmask of the endpoint set of each edge."""
        vi = self.vertex_index
        return tuple((1 << vi[e.source]) | (1 << vi[e.range]) for e in self.edges)


@dataclass(frozen=True)
class UndirectedMultigraph:
    """Vertices plus a multiplicity for each unordered pair (loops allowed).

    Pairs are stored as sorted 2-tuples of vertex ids, ``(v, v)`` for loops,
    with sorting by declaration order of the vertices.
    """

    vertices: tuple[str, ...]
    multiplicity: Mapping[tuple[str, str], int]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        pos = {v: i for i, v in enumerate(self.vertices)}
        if len(pos) != len(self.vertices):
            raise PreconditionError("duplicate vertex in undirected multigraph")
        canon = {}
        for (a, b), k in self.multiplicity.items():
            if a not in pos or b not in pos:
                raise PreconditionError(f"pair ({a!r}, {b!r}) has an unknown endpoint")
            if k < 0:
                raise PreconditionError("multiplicities must be nonnegative")
            if k == 0:
                continue
            key = (a, b) if pos[a] <= pos[b] else (b, a)
            canon[key] = canon.get(key, 0) + k
        object.__setattr__(self, "multiplicity", dict(sorted(canon.items(), key=lambda kv: (pos[kv[0][0]], pos[kv[0][1]]))))

    def __hash__(self):
        return hash((self.vertices, tuple(self.multiplicity.items())))

    def count(self, v: str, w: str) -> int:
        return self.multiplicity.get((v, w), self.multiplicity.get((w, v), 0))

    @property
    def total(self) -> int:
        return sum(self.multiplicity.values())


@dataclass(frozen=True)
class DoubledGraph:
    """Q together with a reversed partner ``e~`` of every edge ``e``.

    ``base`` is the directed multigraph carrying both copies (original edges
    first, partners after in the same order); ``involution`` maps each letter
    index of ``base`` to its partner, fixing vertices.
    """

    original: DirectedMultigraph
    base: DirectedMultigraph
    involution: tuple[int, ...]

    def star(self, edge_id: str) -> str:
        return self.base.letters[self.involution[self.base.letter_index[edge_id]]]


def letter_graph(g) -> DirectedMultigraph:
    """The directed multigraph whose letters index words over ``g``."""
    return g.base if isinstance(g, DoubledGraph) else g


# -- operations --------------------------------------------------------------


def shadow(q: DirectedMultigraph) -> UndirectedMultigraph:
    counts = Counter()
    for e in q.edges:
        counts[(e.source, e.range)] += 1
    return UndirectedMultigraph(q.vertices, dict(counts))


def internal_edges(q: DirectedMultigraph, subset: Iterable[str]) -> tuple[Edge, ...]:
    """Edges with both endpoints in ``subset``."""
    subset = tuple(subset)
    if not subset:
        raise PreconditionError("vertex subset must be nonempty")
    mask = q.subset_mask(subset)
    return tuple(e for e, m in zip(q.edges, q.edge_masks) if m & ~mask == 0)


def n_of(q: DirectedMultigraph, subset: Iterable[str]) -> int:
    return len(internal_edges(q, subset))


def loop_partition(q: DirectedMultigraph) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
    loops = tuple(e for e in q.edges if e.is_loop)
    others = tuple(e for e in q.edges if not e.is_loop)
    return loops, others


def double(q: DirectedMultigraph) -> DoubledGraph:
    stars = [Edge(e.id + STAR_SUFFIX, e.range, e.source) for e in q.edges]
    base = DirectedMultigraph(q.vertices, q.edges + tuple(stars))
    n, m = q.n_vertices, q.n_edges
    involution = tuple(range(n)) + tuple(n + m + j for j in range(m)) + tuple(n + j for j in range(m))
    return DoubledGraph(q, base, involution)


def directed_multiplicity(q: DirectedMultigraph, v: str, w: str) -> int:
    """Number of edges with range ``v`` and source ``w``."""
    q.check_vertex(v)
    q.check_vertex(w)
    return sum(1 for e in q.edges if e.range == v and e.source == w)


def iter_subset_masks(n: int) -> Iterator[int]:
    """Nonempty subsets of ``range(n)`` as bitmasks, by size then lexicographically."""
    if n > MAX_SUBSET_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the subset enumeration guard of {MAX_SUBSET_VERTICES}")
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            yield sum(1 << i for i in combo)


# -- corpora -----------------------------------------------------------------


def random_multigraph(seed, max_vertices=6, max_edges=10, min_vertices=1) -> DirectedMultigraph:
    """A seeded random multigraph with loops and parallel edges allowed."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(min_vertices, max_vertices)
    m = rng.randint(0, max_edges)
    verts = [f"v{i}" for i in range(n)]
    edges = [(f"e{j}", rng.choice(verts), rng.choice(verts)) for j in range(m)]
    return DirectedMultigraph.build(verts, edges)


def relabel(q: DirectedMultigraph, seed) -> tuple[DirectedMultigraph, dict[str, str]]:
    """Rename and reorder vertices and edges at random.

    Returns the new graph and the vertex renaming old -> new.
    """
    rng = random.Random(seed)
    vnames = [f"x{i}" for i in range(q.n_vertices)]
    rng.shuffle(vnames)
    vmap = dict(zip(q.vertices, vnames))
    enames = [f"f{j}" for j in range(q.n_edges)]
    rng.shuffle(enames)
    edges = [(name, vmap[e.source], vmap[e.range]) for name, e in zip(enames, q.edges)]
    rng.shuffle(edges)
    verts = list(vnames)
    rng.shuffle(verts)
    return DirectedMultigraph.build(verts, edges), vmap
