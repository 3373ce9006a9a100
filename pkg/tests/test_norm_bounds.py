import numpy as np
import pytest
from _support import random_element
from conftest import corpus_graph

from quivoa.errors import PreconditionError
from quivoa.free_algebra import AlgebraElement, Gauss
from quivoa.graph_core import DirectedMultigraph, double, relabel
from quivoa.iso import digraph_isomorphic
from quivoa.mispace import Character, char_eval
from quivoa.norm_bounds import BoundConfig, _Candidate, _character_search, gcm_norm_bounds, oa_norm_bounds
from quivoa.reps import random_graph_rep, rep_eval

SMALL = BoundConfig(character_grid=4, refinement_steps=10, rep_trials=8)


def test_sum_of_loops(example_graph):
    x = AlgebraElement.letter(example_graph, "t1") + AlgebraElement.letter(example_graph, "t2")
    b = oa_norm_bounds(example_graph, x)
    assert (b.lower, b.upper) == (2.0, 2.0)
    assert b.witnesses["lower"]["kind"] == "character"


def test_cancelling_character_found_by_refinement():
    # |e^{i theta} - e^{2 i theta}| = |1 - e^{i theta}| reaches 2 at theta = pi
    q = DirectedMultigraph.build(["v"], [("t", "v", "v")])
    x = AlgebraElement.letter(q, "t") - AlgebraElement.from_names(q, ["t", "t"])
    b = oa_norm_bounds(q, x)
    assert b.upper == 2.0
    assert b.lower == pytest.approx(2.0, abs=1e-9)


def test_zero_element(example_graph):
    b = oa_norm_bounds(example_graph, AlgebraElement.zero(example_graph))
    assert (b.lower, b.upper) == (0.0, 0.0)


def test_graph_checks(example_graph, pair_graphs):
    x = AlgebraElement.letter(example_graph, "t1")
    with pytest.raises(PreconditionError):
        oa_norm_bounds(pair_graphs[0], x)
    with pytest.raises(PreconditionError):
        gcm_norm_bounds(double(example_graph), x)


def test_config_validation():
    with pytest.raises(PreconditionError):
        BoundConfig(character_grid=0)
    with pytest.raises(PreconditionError):
        BoundConfig(rep_trials=0)
    with pytest.raises(PreconditionError):
        BoundConfig(rep_dims=())


def test_character_witness_reproduces_lower_bound():
    rng = np.random.default_rng(3)
    for s in range(30):
        q = corpus_graph(s)
        x = random_element(rng, q)
        b = oa_norm_bounds(q, x, SMALL)
        w = b.witnesses["lower"]
        if w["kind"] != "character":
            continue
        lam = {e: complex(*v) for e, v in w["lambda"].items()}
        lam = {e: z / max(1.0, abs(z)) for e, z in lam.items()}
        val = abs(char_eval(Character(q, w["subset"], lam), x))
        # the reported lower bound is the witness value, clamped to the upper bound
        assert b.lower - 1e-9 <= val <= b.upper + 1e-9


def test_upper_bound_dominates_independent_representations():
    rng = np.random.default_rng(5)
    for s in range(40):
        q = corpus_graph(s)
        x = random_element(rng, q)
        b = oa_norm_bounds(q, x, SMALL)
        for k in range(5):
            rep = random_graph_rep(q, 3, [99, s, k])
            assert np.linalg.norm(rep_eval(rep, x), 2) <= b.upper + 1e-9


def test_lower_bound_monotone_in_effort():
    rng = np.random.default_rng(6)
    for s in range(15):
        q = corpus_graph(s)
        x = random_element(rng, q)
        prev = -1.0
        for grid, trials in ((1, 1), (2, 4), (4, 8), (8, 16)):
            cfg = BoundConfig(character_grid=grid, refinement_steps=10, rep_trials=trials)
            b = oa_norm_bounds(q, x, cfg)
            assert b.lower >= prev - 1e-12
            prev = b.lower


def test_bounds_are_deterministic(example_graph):
    x = AlgebraElement.from_names(example_graph, ["t3", "t1"], Gauss(1, 1)) + AlgebraElement.letter(example_graph, "t2")
    a = oa_norm_bounds(example_graph, x, SMALL)
    b = oa_norm_bounds(example_graph, x, SMALL)
    assert a.as_dict() == b.as_dict()


def test_gcm_self_adjoint_spectral_radius():
    q = DirectedMultigraph.build(["v1", "v2"], [("t", "v1", "v2")])
    d = double(q)
    x = AlgebraElement.letter(d, "t") + AlgebraElement.letter(d, "t~")
    b = gcm_norm_bounds(d, x)
    # vertex projections need not be orthogonal: the character on {v1, v2}
    # with lambda(t) = 1 already reaches the l1 bound
    assert (b.lower, b.upper) == (2.0, 2.0)
    assert 0 < b.witnesses["spectral_radius"] <= 2.0


def test_gcm_lower_never_exceeds_upper():
    rng = np.random.default_rng(7)
    for s in range(20):
        d = double(corpus_graph(s))
        x = random_element(rng, d)
        b = gcm_norm_bounds(d, x, SMALL)
        assert 0 <= b.lower <= b.upper


def test_vertex_difference():
    q = DirectedMultigraph.build(["v0", "v1"], [])
    x = AlgebraElement.letter(q, "v0") - AlgebraElement.letter(q, "v1")
    b = oa_norm_bounds(q, x)
    assert b.lower >= 1.0 and b.upper == 2.0


def test_gcm_vertex_and_edge_square(example_graph):
    d = double(example_graph)
    assert gcm_norm_bounds(d, AlgebraElement.letter(d, "v2")).as_dict()["lower"] == 1.0
    b = gcm_norm_bounds(d, AlgebraElement.from_names(d, ["t3~", "t3"]))
    assert (b.lower, b.upper) == (1.0, 1.0)


def test_character_bound_invariant_under_relabelling():
    rng = np.random.default_rng(12)
    for s in range(40):
        q = corpus_graph(s)
        r, _ = relabel(q, s)
        w = digraph_isomorphic(q, r)
        rename = {**w.vertex_map, **w.edge_map}
        x = random_element(rng, q)
        y = AlgebraElement.zero(r)
        for names, c in x.named_terms():
            y = y + AlgebraElement.from_names(r, [rename[n] for n in names], c)
        a, b = _Candidate(), _Candidate()
        _character_search(x, BoundConfig(), False, a)
        _character_search(y, BoundConfig(), False, b)
        assert abs(a.value - b.value) <= 1e-9
