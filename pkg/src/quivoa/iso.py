"""Isomorphism deciders for directed and undirected multigraphs.

Both deciders compare multiplicity matrices by backtracking over vertex
assignments, most constrained vertex first, pruning on per-vertex invariant
vectors.  A positive verdict carries an explicit vertex (and, for directed
graphs, edge) bijection that is re-verified independently of the search.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

from .errors import CapacityError
from .graph_core import DirectedMultigraph, UndirectedMultigraph, loop_partition, shadow
from .mispace import blind, build_mispace, recover_shadow

MAX_ISO_VERTICES = 10


@dataclass(frozen=True)
class IsoWitness:
    verdict: bool
    vertex_map: Optional[dict] = None
    edge_map: Optional[dict] = None
    refutation: Optional[str] = None

    def __post_init__(self):
        if self.verdict and self.vertex_map is None:
            raise ValueError("a positive verdict needs a mapping")
        if not self.verdict and self.refutation is None:
            raise ValueError("a negative verdict needs a refutation")

    def __bool__(self):
        return self.verdict

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "vertex_map": self.vertex_map,
            "edge_map": self.edge_map,
            "refutation": self.refutation,
        }


def _guard(n: int) -> None:
    if n > MAX_ISO_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the isomorphism guard of {MAX_ISO_VERTICES}")


def _matrix_directed(q: DirectedMultigraph) -> list[list[int]]:
    """m[i][j] = number of edges from vertex i to vertex j."""
    n = q.n_vertices
    m = [[0] * n for _ in range(n)]
    vi = q.vertex_index
    for e in q.edges:
        m[vi[e.source]][vi[e.range]] += 1
    return m


def _matrix_undirected(s: UndirectedMultigraph) -> list[list[int]]:
    n = len(s.vertices)
    pos = {v: i for i, v in enumerate(s.vertices)}
    m = [[0] * n for _ in range(n)]
    for (a, b), k in s.multiplicity.items():
        m[pos[a]][pos[b]] = k
        m[pos[b]][pos[a]] = k
    return m


def _signature(m: list[list[int]], i: int) -> tuple:
    n = len(m)
    outs = tuple(sorted(m[i][j] for j in range(n) if j != i))
    ins = tuple(sorted(m[j][i] for j in range(n) if j != i))
    return (m[i][i], outs, ins)


def _search(m1: list[list[int]], m2: list[list[int]]) -> Optional[list[int]]:
    """A permutation p with m1[i][j] == m2[p[i]][p[j]] for all i, j, or None."""
    n = len(m1)
    sig1 = [_signature(m1, i) for i in range(n)]
    sig2 = [_signature(m2, i) for i in range(n)]
    classes = Counter(sig1)
    # rarest invariant class first, ties by declaration order
    order = sorted(range(n), key=lambda i: (classes[sig1[i]], i))
    cands = {i: [j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)}
    assign = [-1] * n
    used = [False] * n

    def consistent(i: int, j: int, depth: int) -> bool:
        if m1[i][i] != m2[j][j]:
            return False
        for k in order[:depth]:
            pk = assign[k]
            if m1[i][k] != m2[j][pk] or m1[k][i] != m2[pk][j]:
                return False
        return True

    def rec(depth: int) -> bool:
        if depth == n:
            return True
        i = order[depth]
        for j in cands[i]:
            if used[j] or not consistent(i, j, depth):
                continue
            assign[i], used[j] = j, True
            if rec(depth + 1):
                return True
            assign[i], used[j] = -1, False
        return False

    return list(assign) if rec(0) else None


def _multiset_refutation(m1, m2) -> Optional[str]:
    n = len(m1)
    off1 = sorted(m1[i][j] for i in range(n) for j in range(n) if i != j and m1[i][j])
    off2 = sorted(m2[i][j] for i in range(n) for j in range(n) if i != j and m2[i][j])
    if off1 != off2:
        return "multiplicity multiset"
    deg1 = sorted(_signature(m1, i) for i in range(n))
    deg2 = sorted(_signature(m2, i) for i in range(n))
    if deg1 != deg2:
        return "degree multiset"
    return None


def verify_digraph_map(q1: DirectedMultigraph, q2: DirectedMultigraph, vmap: dict, emap: dict) -> bool:
    """Independent check that (vmap, emap) is an isomorphism of directed graphs."""
    if sorted(vmap) != sorted(q1.vertices) or sorted(vmap.values()) != sorted(q2.vertices):
        return False
    if sorted(emap) != sorted(e.id for e in q1.edges) or sorted(emap.values()) != sorted(e.id for e in q2.edges):
        return False
    e2 = q2.edge_by_id
    for e in q1.edges:
        f = e2[emap[e.id]]
        if vmap[e.source] != f.source or vmap[e.range] != f.range:
            return False
    return True


def verify_udgraph_map(s1: UndirectedMultigraph, s2: UndirectedMultigraph, vmap: dict) -> bool:
    if sorted(vmap) != sorted(s1.vertices) or sorted(vmap.values()) != sorted(s2.vertices):
        return False
    for a in s1.vertices:
        for b in s1.vertices:
            if s1.count(a, b) != s2.count(vmap[a], vmap[b]):
                return False
    return True


def digraph_isomorphic(q1: DirectedMultigraph, q2: DirectedMultigraph) -> IsoWitness:
    _guard(max(q1.n_vertices, q2.n_vertices))
    if q1.n_vertices != q2.n_vertices:
        return IsoWitness(False, refutation="vertex count")
    if q1.n_edges != q2.n_edges:
        return IsoWitness(False, refutation="edge count")
    if len(loop_partition(q1)[0]) != len(loop_partition(q2)[0]):
        return IsoWitness(False, refutation="loop count")
    m1, m2 = _matrix_directed(q1), _matrix_directed(q2)
    why = _multiset_refutation(m1, m2)
    if why:
        return IsoWitness(False, refutation=why)
    perm = _search(m1, m2)
    if perm is None:
        return IsoWitness(False, refutation="exhausted search")
    vmap = {q1.vertices[i]: q2.vertices[j] for i, j in enumerate(perm)}
    # parallel classes matched in identifier order
    pool = defaultdict(list)
    for f in q2.edges:
        pool[(f.source, f.range)].append(f.id)
    for ids in pool.values():
        ids.sort()
    emap = {}
    for e in sorted(q1.edges, key=lambda e: e.id):
        emap[e.id] = pool[(vmap[e.source], vmap[e.range])].pop(0)
    witness = IsoWitness(True, vmap, emap)
    if not verify_digraph_map(q1, q2, vmap, emap):
        raise AssertionError("search produced an invalid directed isomorphism")
    return witness


def udgraph_isomorphic(s1: UndirectedMultigraph, s2: UndirectedMultigraph) -> IsoWitness:
    _guard(max(len(s1.vertices), len(s2.vertices)))
    if len(s1.vertices) != len(s2.vertices):
        return IsoWitness(False, refutation="vertex count")
    if s1.total != s2.total:
        return IsoWitness(False, refutation="edge count")
    loops1 = sum(k for (a, b), k in s1.multiplicity.items() if a == b)
    loops2 = sum(k for (a, b), k in s2.multiplicity.items() if a == b)
    if loops1 != loops2:
        return IsoWitness(False, refutation="loop count")
    m1, m2 = _matrix_undirected(s1), _matrix_undirected(s2)
    why = _multiset_refutation(m1, m2)
    if why:
        return IsoWitness(False, refutation=why)
    perm = _search(m1, m2)
    if perm is None:
        return IsoWitness(False, refutation="exhausted search")
    vmap = {s1.vertices[i]: s2.vertices[j] for i, j in enumerate(perm)}
    if not verify_udgraph_map(s1, s2, vmap):
        raise AssertionError("search produced an invalid undirected isomorphism")
    return IsoWitness(True, vmap)


def oa_isomorphic(q1: DirectedMultigraph, q2: DirectedMultigraph) -> IsoWitness:
    """OA(Q1) and OA(Q2) are isomorphic Banach algebras iff Q1 and Q2 are isomorphic."""
    return digraph_isomorphic(q1, q2)


def gcm_isomorphic(q1: DirectedMultigraph, q2: DirectedMultigraph, cross_check: bool = False) -> IsoWitness:
    """GC*_m(Q1) and GC*_m(Q2) are isomorphic iff the shadows are isomorphic.

    With ``cross_check`` the shadows recovered from blinded maximal ideal
    space descriptors must agree with the direct verdict.
    """
    _guard(max(q1.n_vertices, q2.n_vertices))
    if q1.n_vertices != q2.n_vertices:
        return IsoWitness(False, refutation="vertex count")
    d1, d2 = build_mispace(q1), build_mispace(q2)
    if sorted(d1.dims()) != sorted(d2.dims()):
        return IsoWitness(False, refutation="dim multiset")
    direct = udgraph_isomorphic(shadow(q1), shadow(q2))
    if cross_check:
        recovered = udgraph_isomorphic(recover_shadow(blind(d1, 0)), recover_shadow(blind(d2, 1)))
        if recovered.verdict != direct.verdict:
            raise AssertionError("recovered shadows disagree with the direct shadow verdict")
    return direct
