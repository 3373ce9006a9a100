import itertools

import numpy as np
import pytest
from _support import brute_udgraph_iso, random_element
from conftest import corpus_graph

from quivoa.errors import DescriptorError, GraphMismatchError, PreconditionError
from quivoa.free_algebra import AlgebraElement, Gauss
from quivoa.graph_core import DirectedMultigraph, double, relabel, shadow
from quivoa.mispace import (
    BlindedDescriptor,
    Character,
    blind,
    build_mispace,
    char_eval,
    degrees_of,
    ground_truth,
    invariants,
    mispace_of_gcm,
    recover_shadow,
)


def brute_dims(q):
    """n(S) for every nonempty subset, counted edge by edge."""
    out = {}
    for k in range(1, q.n_vertices + 1):
        for sub in itertools.combinations(q.vertices, k):
            out[frozenset(sub)] = sum(1 for e in q.edges if e.source in sub and e.range in sub)
    return out


def test_dimensions_match_brute_count():
    for s in range(50):
        q = corpus_graph(s)
        d = build_mispace(q)
        assert {frozenset(c.subset): c.dim for c in d.components} == brute_dims(q)


def test_example_components(example_graph):
    d = build_mispace(example_graph)
    assert d.dim_of(["v1"]) == 2
    assert d.dim_of(["v1", "v2"]) == 3
    assert d.dim_of(["v2", "v3"]) == 0
    assert d.dim_of(["v1", "v2", "v3"]) == 3


def test_gcm_space_matches_oa_space(example_graph):
    assert mispace_of_gcm(double(example_graph)) == build_mispace(example_graph)


def test_invariants_example(example_graph):
    r = invariants(build_mispace(example_graph))
    assert (r.vertex_count, r.edge_count, r.alpha, r.beta) == (3, 3, 2, 1)
    assert r.k0_rank == 3
    assert r == ground_truth(example_graph)


def test_invariants_single_vertex():
    q = DirectedMultigraph.build(["v"], [("a", "v", "v"), ("b", "v", "v")])
    r = invariants(build_mispace(q))
    assert (r.n_components, r.vertex_count, r.alpha, r.beta) == (1, 1, 2, 0)


def test_invariants_work_on_blinded_descriptor():
    for s in range(30):
        q = corpus_graph(s)
        assert invariants(blind(build_mispace(q), s)) == ground_truth(q)


def test_invariants_reject_bad_counts():
    b = BlindedDescriptor((("a", 0), ("b", 0)), ((True, False), (False, True)))
    with pytest.raises(DescriptorError):
        invariants(b)


def test_invariants_reject_inconsistent_totals():
    # two vertices, one edge, total dimension 3 forces a negative non-loop count
    b = BlindedDescriptor(
        (("a", 1), ("b", 1), ("c", 1)),
        ((True, False, True), (False, True, True), (True, True, True)),
    )
    with pytest.raises(DescriptorError):
        invariants(b)


def test_blinded_descriptor_validation():
    with pytest.raises(DescriptorError):
        BlindedDescriptor((("a", 0),), ((False,),))
    with pytest.raises(DescriptorError):
        BlindedDescriptor((("a", 0), ("b", 0)), ((True, True), (False, True)))


def test_blinding_hides_order_but_keeps_dims(example_graph):
    d = build_mispace(example_graph)
    b1, b2 = blind(d, 1), blind(d, 2)
    assert sorted(b1.dims()) == sorted(b2.dims()) == sorted(d.dims())
    assert b1 != b2
    assert blind(d, 1) == b1


def test_degrees_equal_subset_sizes(example_graph):
    d = build_mispace(example_graph)
    b = blind(d, 5)
    degs = sorted(degrees_of(b).values())
    assert degs == sorted(c.degree for c in d.components)


def test_recovered_shadow_matches_brute_force():
    for s in range(60):
        q = corpus_graph(s)
        rec = recover_shadow(blind(build_mispace(q), s))
        if q.n_vertices <= 6:
            assert brute_udgraph_iso(rec, shadow(q))


def test_shadow_recovery_is_relabel_invariant():
    for s in range(20):
        q = corpus_graph(s)
        r, _ = relabel(q, s)
        assert brute_udgraph_iso(recover_shadow(blind(build_mispace(r), 0)), shadow(q))


def test_character_validation(example_graph):
    with pytest.raises(PreconditionError):
        Character(example_graph, ())
    with pytest.raises(PreconditionError):
        Character(example_graph, ("v2",), {"t1": 0.5})
    with pytest.raises(PreconditionError):
        Character(example_graph, ("v1",), {"t1": 1.5})
    Character(example_graph, ("v1",), {"t1": 1.0})


def test_character_values(example_graph):
    c = Character(example_graph, ("v1", "v2"), {"t1": Gauss(1, 1) * Gauss(1, 2) / 5, "t3": Gauss(0, 1)})
    x = AlgebraElement.from_names(example_graph, ["t3", "t1"], Gauss(2))
    exact = char_eval(c, x, exact=True)
    assert isinstance(exact, Gauss)
    assert exact == Gauss(2) * Gauss(0, 1) * (Gauss(1, 1) * Gauss(1, 2) / 5)
    assert abs(char_eval(c, x) - complex(exact)) < 1e-12
    # v3 lies outside S
    assert char_eval(c, AlgebraElement.letter(example_graph, "v3")) == 0


def test_character_on_doubled_graph_conjugates(example_graph):
    d = double(example_graph)
    c = Character(example_graph, ("v1",), {"t1": 0.6 + 0.8j})
    x = AlgebraElement.from_names(d, ["t1~"])
    assert abs(char_eval(c, x) - (0.6 - 0.8j)) < 1e-12


def test_character_graph_mismatch(example_graph, pair_graphs):
    c = Character(example_graph, ("v1",))
    with pytest.raises(GraphMismatchError):
        char_eval(c, AlgebraElement.letter(pair_graphs[0], "v1"))


def test_exact_evaluation_needs_exact_inputs(example_graph):
    c = Character(example_graph, ("v1",), {"t1": 0.5})
    with pytest.raises(PreconditionError):
        char_eval(c, AlgebraElement.letter(example_graph, "t1"), exact=True)


def test_exact_multiplicativity():
    rng = np.random.default_rng(4)
    for s in range(40):
        q = corpus_graph(s)
        subset = q.vertices[: max(1, q.n_vertices // 2)]
        lam = {e.id: Gauss(1, 1) / 2 for e in q.edges if e.source in subset and e.range in subset}
        c = Character(q, subset, lam)
        x, y = random_element(rng, q), random_element(rng, q)
        assert char_eval(c, x * y, exact=True) == char_eval(c, x, exact=True) * char_eval(c, y, exact=True)
