from pathlib import Path

import pytest

from quivoa.graph_core import DirectedMultigraph, random_multigraph

DATA = Path(__file__).resolve().parents[1] / "src" / "quivoa" / "data"

CORPUS_SEEDS = range(200)

ACCEPTANCE = {
    "test_ac01_example_reproduction": "AC1  example mispace reproduction",
    "test_ac02_invariant_recovery": "AC2  invariant recovery on 200 graphs",
    "test_ac03_shadow_round_trip": "AC3  shadow round trip, 3 blinding seeds",
    "test_ac04_classification_pair": "AC4  classification on the two-vertex pair",
    "test_ac05_confluence_oracle": "AC5  confluence oracle",
    "test_ac06_identity_criterion": "AC6  identity iff one vertex",
    "test_ac07_lemma_suite": "AC7  positivity lemma suite",
    "test_ac08_character_and_adjoint": "AC8  character multiplicativity, adjoint compatibility",
    "test_ac09_norm_bound_soundness": "AC9  norm-bound soundness",
    "test_ac10_nest_multiplicity": "AC10 nest-rep multiplicity recovery",
    "test_ac11_homotopy_k0": "AC11 homotopy and K0 rank",
}

_results: dict[str, str] = {}


def corpus_graph(seed: int) -> DirectedMultigraph:
    return random_multigraph(seed, max_vertices=6, max_edges=10)


@pytest.fixture(scope="session")
def corpus():
    return [corpus_graph(s) for s in CORPUS_SEEDS]


@pytest.fixture(scope="session")
def example_graph():
    return DirectedMultigraph.build(
        ["v1", "v2", "v3"], [("t1", "v1", "v1"), ("t2", "v1", "v1"), ("t3", "v1", "v2")]
    )


@pytest.fixture(scope="session")
def pair_graphs():
    q1 = DirectedMultigraph.build(["v1", "v2"], [("e1", "v1", "v2"), ("e2", "v1", "v2")])
    q2 = DirectedMultigraph.build(["w1", "w2"], [("f1", "w1", "w2"), ("f2", "w2", "w1")])
    return q1, q2


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name not in ACCEPTANCE:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(name)
        if prev != "FAIL":
            _results[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in ACCEPTANCE.items():
        status = _results.get(name, "NOT RUN")
        terminalreporter.write_line(f"{status:<8}{label}")


