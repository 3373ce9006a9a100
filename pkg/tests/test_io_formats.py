import json
from fractions import Fraction

import numpy as np
import pytest
from _support import random_element
from conftest import DATA, corpus_graph
from hypothesis import given, settings
from hypothesis import strategies as st

from quivoa.errors import ParseError
from quivoa.free_algebra import AlgebraElement, Gauss
from quivoa.graph_core import double
from quivoa.io_formats import dumps_report, format_expr, format_graph, parse_expr, parse_graph, parse_scalar, read_graph


def test_bundled_example_file(example_graph):
    assert read_graph(DATA / "example_three_vertex.graph") == example_graph


def test_graph_round_trip():
    for s in range(30):
        q = corpus_graph(s)
        assert parse_graph(format_graph(q)).graph == q


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ("vertex a\nvertex a\n", 2, 8, "duplicate"),
        ("vertex a\nedge e a b\n", 2, 10, "unknown endpoint"),
        ("vertex a\nnode b\n", 2, 1, "unknown directive"),
        ("vertex 1a\n", 1, 8, "invalid identifier"),
        ("# nothing\n", 1, 1, "no vertices"),
        ("vertex a\nedge e a\n", 2, 1, "expected"),
    ],
)
def test_graph_errors_carry_positions(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    err = info.value
    assert (err.line, err.column) == (line, col)
    assert fragment in str(err)


def test_comments_and_blank_lines():
    q = parse_graph("# head\n\nvertex a   # trailing\nedge l a a\n").graph
    assert q.vertices == ("a",) and q.n_edges == 1


def test_expression_examples(example_graph):
    x = parse_expr("2 * t1 + (0-1) i * v3 + t3.t1", example_graph)
    assert x.coefficient(["t1"]) == Gauss(2)
    assert x.coefficient(["v3"]) == Gauss(0, -1)
    assert x.coefficient(["t3", "t1"]) == Gauss(1)
    y = parse_expr("1/2 i * v1.t1 - 0.25 * t2", example_graph)
    assert y.coefficient(["t1"]) == Gauss(0, Fraction(1, 2))
    assert y.coefficient(["t2"]) == Gauss(Fraction(-1, 4))
    z = parse_expr("(1 + 2i) * t1", example_graph)
    assert z.coefficient(["t1"]) == Gauss(1, 2)


def test_expression_star_needs_double(example_graph):
    with pytest.raises(ParseError):
        parse_expr("t1~", example_graph)
    d = double(example_graph)
    x = parse_expr("t3~.t3 + v1~", d)
    assert x.coefficient(["t3~", "t3"]) == Gauss(1)
    assert x.coefficient(["v1"]) == Gauss(1)


def test_bare_scalar_needs_single_vertex(example_graph):
    with pytest.raises(ParseError):
        parse_expr("3 + t1", example_graph)
    q = parse_graph("vertex v\nedge a v v\n").graph
    assert parse_expr("3 + a", q).coefficient(["v"]) == Gauss(3)


@pytest.mark.parametrize("bad", ["", "t1 +", "2 *", "t1..t2", "zz", "1/0 * t1", "t1 $", "(1 + 2i * t1"])
def test_expression_errors(example_graph, bad):
    with pytest.raises(ParseError):
        parse_expr(bad, example_graph)


def test_expression_error_column(example_graph):
    with pytest.raises(ParseError) as info:
        parse_expr("t1 + zz", example_graph)
    assert info.value.column == 6


def test_parse_scalar():
    assert parse_scalar("i") == Gauss(0, 1)
    assert parse_scalar("-i") == Gauss(0, -1)
    assert parse_scalar("0.5") == Gauss(Fraction(1, 2))
    assert parse_scalar("-(1-2i)") == Gauss(-1, 2)
    with pytest.raises(ParseError):
        parse_scalar("1 +")


def test_zero_formats_and_parses(example_graph):
    z = AlgebraElement.zero(example_graph)
    assert parse_expr(format_expr(z), example_graph) == z


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 199), st.integers(0, 2**32 - 1), st.booleans())
def test_format_parse_round_trip(s, seed, doubled):
    q = corpus_graph(s)
    g = double(q) if doubled else q
    x = random_element(np.random.default_rng(seed), g)
    assert parse_expr(format_expr(x), g) == x


def test_report_serialisation():
    text = dumps_report({"b": 1.0 / 3, "a": [1 + 2j, Gauss(1, -1), Fraction(3, 4)], "c": np.int64(4)})
    obj = json.loads(text)
    assert list(obj) == ["a", "b", "c"]
    assert obj["b"] == 0.333333333333
    assert obj["a"] == [{"im": 2.0, "re": 1.0}, "(1-1i)", "3/4"]
    assert obj["c"] == 4
    assert dumps_report({"x": float("nan")}) == '{\n  "x": "nan"\n}'
