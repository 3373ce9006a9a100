"""Combinatorial model of the maximal ideal space of OA(Q) and GC*_m(Q).

One component per nonempty vertex subset S, a closed polydisc of dimension
n(S) = |{e : r(e), s(e) in S}|.  The blinded descriptor forgets which subset
produced which component and keeps only dimensions plus the incidence
relation "the idempotent sets of the two components meet", which in the
model is ``S_X & S_Y != 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import DescriptorError, GraphMismatchError, PreconditionError
from .free_algebra import AlgebraElement, Gauss, same_graph_or_double
from .graph_core import (
    DirectedMultigraph,
    DoubledGraph,
    UndirectedMultigraph,
    internal_edges,
    iter_subset_masks,
    letter_graph,
    loop_partition,
)

CHARACTER_SLACK = 1e-12


@dataclass(frozen=True)
class Component:
    subset: tuple[str, ...]
    dim: int

    @property
    def degree(self) -> int:
        return len(self.subset)


@dataclass(frozen=True)
class MaxIdealDescriptor:
    vertices: tuple[str, ...]
    components: tuple[Component, ...]

    @property
    def n_components(self) -> int:
        return len(self.components)

    def dims(self) -> list[int]:
        return [c.dim for c in self.components]

    def dim_of(self, subset) -> int:
        key = set(subset)
        for c in self.components:
            if set(c.subset) == key:
                return c.dim
        raise PreconditionError(f"no component for subset {sorted(key)}")


@dataclass(frozen=True)
class BlindedDescriptor:
    """Anonymous entries ``(id, dim)`` plus a symmetric, reflexive incidence."""

    entries: tuple[tuple[str, int], ...]
    incidence: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        m = len(self.entries)
        if len(self.incidence) != m or any(len(row) != m for row in self.incidence):
            raise DescriptorError("incidence matrix has the wrong shape")
        for i in range(m):
            if not self.incidence[i][i]:
                raise DescriptorError("incidence must be reflexive")
            for j in range(i):
                if self.incidence[i][j] != self.incidence[j][i]:
                    raise DescriptorError("incidence must be symmetric")

    @property
    def ids(self) -> list[str]:
        return [i for i, _ in self.entries]

    def dims(self) -> list[int]:
        return [d for _, d in self.entries]


@dataclass(frozen=True)
class InvariantReport:
    n_components: int
    vertex_count: int
    edge_count: int
    alpha: int
    beta: int
    total_dim: int
    k0_rank: int

    def as_dict(self) -> dict:
        return {
            "N_Q": self.n_components,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "alpha": self.alpha,
            "beta": self.beta,
            "total_dim": self.total_dim,
            "k0_rank": self.k0_rank,
        }


@dataclass(frozen=True)
class Character:
    """The character attached to subset S and a point of its polydisc.

    ``lam`` assigns a value of modulus <= 1 to each edge with both endpoints
    in S; missing internal edges default to 0.
    """

    graph: DirectedMultigraph
    subset: tuple[str, ...]
    lam: Mapping[str, Union[Gauss, complex]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.subset:
            raise PreconditionError("character subset must be nonempty")
        object.__setattr__(self, "subset", tuple(self.subset))
        allowed = {e.id for e in internal_edges(self.graph, self.subset)}
        for e, val in self.lam.items():
            if e not in allowed:
                raise PreconditionError(f"edge {e!r} is not internal to {list(self.subset)}")
            mod2 = val.abs2() if isinstance(val, Gauss) else abs(val) ** 2
            if mod2 > (1 + CHARACTER_SLACK) ** 2:
                raise PreconditionError(f"lambda({e}) has modulus > 1")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Gauss) for v in self.lam.values())

    def letter_values(self, g) -> list:
        """Value of each letter of ``g`` (the graph itself or its double)."""
        base = letter_graph(g)
        inside = set(self.subset)
        exact = self.is_exact
        zero, one = (Gauss(0), Gauss(1)) if exact else (0j, 1 + 0j)
        vals = [one if v in inside else zero for v in base.vertices]
        for e in base.edges:
            if isinstance(g, DoubledGraph) and e.id not in g.original.edge_by_id:
                val = self.lam.get(g.star(e.id), zero).conjugate()
            else:
                val = self.lam.get(e.id, zero)
            vals.append(val if exact else complex(val))
        return vals


def build_mispace(q: DirectedMultigraph) -> MaxIdealDescriptor:
    if q.n_vertices == 0:
        raise PreconditionError("graph has no vertices")
    masks = q.edge_masks
    comps = []
    for mask in iter_subset_masks(q.n_vertices):
        dim = sum(1 for m in masks if m & ~mask == 0)
        comps.append(Component(q.mask_vertices(mask), dim))
    return MaxIdealDescriptor(q.vertices, tuple(comps))


def mispace_of_gcm(q) -> MaxIdealDescriptor:
    """Maximal ideal space of GC*_m(Q); characters restrict bijectively to OA(Q)."""
    if isinstance(q, DoubledGraph):
        q = q.original
    return build_mispace(q)


def char_eval(c: Character, x: AlgebraElement, exact: bool = False):
    """phi_lambda(x); exact Gauss result when ``exact`` and lambda is exact."""
    if not same_graph_or_double(x.graph, c.graph):
        raise GraphMismatchError("character and element are over different graphs")
    if exact and not (c.is_exact and x.is_exact):
        raise PreconditionError("exact evaluation needs exact lambda and coefficients")
    vals = c.letter_values(x.graph)
    total = Gauss(0) if exact else 0j
    for w, coeff in x.terms.items():
        prod = coeff if exact else complex(coeff)
        for letter in w:
            v = vals[letter]
            if not v:
                prod = v
                break
            prod = prod * v
        total = total + prod
    return total


def invariants(d: Union[MaxIdealDescriptor, BlindedDescriptor]) -> InvariantReport:
    dims = d.dims()
    count = len(dims)
    n = (count + 1).bit_length() - 1
    if count < 1 or (1 << n) != count + 1:
        raise DescriptorError(f"component count {count} is not 2^k - 1")
    if any(x < 0 for x in dims):
        raise DescriptorError("negative dimension")
    edges = max(dims)
    total = sum(dims)
    if n == 1:
        alpha, beta = edges, 0
        if total != edges:
            raise DescriptorError("single-vertex descriptor with inconsistent total dimension")
    else:
        # alpha * 2^(n-1) + beta * 2^(n-2) = total, alpha + beta = edges
        beta_q = 2 * edges - Fraction(total, 1 << (n - 2))
        if beta_q.denominator != 1:
            raise DescriptorError(f"non-integral non-loop count {beta_q}")
        beta = int(beta_q)
        alpha = edges - beta
        if alpha < 0 or beta < 0:
            raise DescriptorError(f"negative loop/non-loop counts ({alpha}, {beta})")
    return InvariantReport(count, n, edges, alpha, beta, total, n)


def ground_truth(q: DirectedMultigraph) -> InvariantReport:
    """The same report computed straight from the graph."""
    loops, others = loop_partition(q)
    total = sum(c.dim for c in build_mispace(q).components)
    return InvariantReport((1 << q.n_vertices) - 1, q.n_vertices, q.n_edges,
                           len(loops), len(others), total, q.n_vertices)


def blind(d: MaxIdealDescriptor, seed: int) -> BlindedDescriptor:
    rng = random.Random(seed)
    order = list(range(d.n_components))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(d.vertices)}
    masks = []
    for k in order:
        m = 0
        for v in d.components[k].subset:
            m |= 1 << pos[v]
        masks.append(m)
    entries = tuple((f"X{i}", d.components[k].dim) for i, k in enumerate(order))
    incidence = tuple(tuple(bool(a & b) for b in masks) for a in masks)
    return BlindedDescriptor(entries, incidence)


def _neighbourhoods(b: BlindedDescriptor) -> list[int]:
    return [sum(1 << j for j, hit in enumerate(row) if hit) for row in b.incidence]


def degree_one_entries(b: BlindedDescriptor) -> list[int]:
    """Entry positions whose neighbourhood is minimal under inclusion."""
    nb = _neighbourhoods(b)
    out = []
    for i, a in enumerate(nb):
        if not any(c != a and c & ~a == 0 for c in nb):
            out.append(i)
    count = len(b.entries)
    k = (count + 1).bit_length() - 1
    if (1 << k) != count + 1 or len(out) != k:
        raise DescriptorError(f"found {len(out)} degree-1 entries among {count} components")
    return out


def degrees_of(b: BlindedDescriptor) -> dict[str, int]:
    ones = degree_one_entries(b)
    return {
        ident: sum(1 for j in ones if b.incidence[i][j])
        for i, (ident, _) in enumerate(b.entries)
    }


def recover_shadow(b: BlindedDescriptor) -> UndirectedMultigraph:
    """Rebuild the undirected multigraph from dimensions and incidence alone."""
    ones = degree_one_entries(b)
    ids = b.ids
    dims = b.dims()
    touching: dict[frozenset, list[int]] = {}
    for i in range(len(b.entries)):
        hits = frozenset(j for j in ones if b.incidence[i][j])
        if len(hits) == 2:
            touching.setdefault(hits, []).append(i)
    mult = {}
    for y in ones:
        if dims[y]:
            mult[(ids[y], ids[y])] = dims[y]
    for a_pos, y in enumerate(ones):
        for z in ones[a_pos + 1:]:
            cands = touching.get(frozenset((y, z)), [])
            if len(cands) != 1:
                raise DescriptorError(f"{len(cands)} degree-2 entries associated to {ids[y]}, {ids[z]}")
            x = cands[0]
            k = dims[x] - dims[y] - dims[z]
            if k < 0:
                raise DescriptorError(f"negative multiplicity between {ids[y]} and {ids[z]}")
            if k:
                mult[(ids[y], ids[z])] = k
    return UndirectedMultigraph(tuple(ids[y] for y in ones), mult)

