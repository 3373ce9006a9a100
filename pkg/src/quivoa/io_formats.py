"""Graph files, algebra expressions and JSON reports.

Graph files are line oriented::

    # comment
    vertex v1
    vertex v2
    edge t v1 v2        # identifier, SOURCE, RANGE

Expressions are noncommutative polynomials with exact complex-rational
coefficients::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := scalar '*' word | word | scalar
    word   := letter ('.' letter)*
    letter := id ['~']
    scalar := rational ['i'] | '(' ['+'|'-'] part (('+'|'-') part)* ')' ['i']
    part   := rational ['i']
    rational := number ['/' number]        (number: digits, optional decimals)

A bare scalar term is only meaningful when the graph has a single vertex
(which is then the identity).  ``~`` marks the formal adjoint of a letter and
is only accepted over a doubled graph.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError, PreconditionError
from .free_algebra import AlgebraElement, Gauss
from .graph_core import STAR_SUFFIX, DirectedMultigraph, DoubledGraph, letter_graph

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class GraphDocument:
    text: str
    graph: DirectedMultigraph


# -- graph files ----------------------------------------------------------------


def _tokens_with_columns(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.group(0), m.start() + 1


def parse_graph(text: str) -> GraphDocument:
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    declared: dict[str, tuple[int, int]] = {}
    endpoint_refs: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens_with_columns(line))
        if not toks:
            continue
        head, col = toks[0]
        for tok, c in toks[1:]:
            if not IDENT_RE.match(tok):
                raise ParseError(f"invalid identifier {tok!r}", lineno, c)
        if head == "vertex":
            if len(toks) != 2:
                raise ParseError("expected: vertex <id>", lineno, col)
            name, c = toks[1]
            if name in declared:
                raise ParseError(f"duplicate identifier {name!r}", lineno, c)
            declared[name] = (lineno, c)
            vertices.append(name)
        elif head == "edge":
            if len(toks) != 4:
                raise ParseError("expected: edge <id> <source-id> <range-id>", lineno, col)
            (name, c), (src, cs), (rng, cr) = toks[1:]
            if name in declared:
                raise ParseError(f"duplicate identifier {name!r}", lineno, c)
            declared[name] = (lineno, c)
            edges.append((name, src, rng))
            endpoint_refs += [(src, lineno, cs), (rng, lineno, cr)]
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    vset = set(vertices)
    for name, lineno, c in endpoint_refs:
        if name not in vset:
            raise ParseError(f"unknown endpoint {name!r}", lineno, c)
    if not vertices:
        raise ParseError("graph declares no vertices", 1, 1)
    return GraphDocument(text, DirectedMultigraph.build(vertices, edges))


def read_graph(path) -> DirectedMultigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read()).graph


def format_graph(q: DirectedMultigraph) -> str:
    lines = [f"vertex {v}" for v in q.vertices]
    lines += [f"edge {e.id} {e.source} {e.range}" for e in q.edges]
    return "\n".join(lines) + "\n"


# -- expressions ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/().~]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", 1, i + 1)
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


class _ExprParser:
    def __init__(self, text: str, graph):
        self.text = text
        self.graph = graph
        self.toks = _tokenize(text)
        self.i = 0

    # helpers
    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        return ParseError(msg, 1, tok.pos + 1)

    def accept(self, op: str) -> bool:
        tok = self.peek()
        if tok.kind == "op" and tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            raise self.error(f"expected {op!r}")

    def is_imag_unit(self) -> bool:
        tok = self.peek()
        return tok.kind == "id" and tok.text == "i"

    # grammar
    def parse(self):
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms.append(self.term(sign))
        while True:
            if self.accept("+"):
                terms.append(self.term(1))
            elif self.accept("-"):
                terms.append(self.term(-1))
            else:
                break
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r}")
        return terms

    def term(self, sign: int):
        tok = self.peek()
        if tok.kind == "num" or (tok.kind == "op" and tok.text == "("):
            coeff = self.scalar() * sign
            if self.accept("*"):
                return coeff, self.word(), tok
            return coeff, None, tok
        if tok.kind == "id":
            return Gauss(sign), self.word(), tok
        raise self.error("expected a scalar or a word")

    def rational(self) -> Fraction:
        tok = self.take()
        if tok.kind != "num":
            raise self.error("expected a number", tok)
        val = Fraction(tok.text)
        if self.accept("/"):
            den = self.take()
            if den.kind != "num":
                raise self.error("expected a denominator", den)
            if Fraction(den.text) == 0:
                raise self.error("zero denominator", den)
            val /= Fraction(den.text)
        return val

    def part(self) -> Gauss:
        r = self.rational()
        if self.is_imag_unit():
            self.take()
            return Gauss(0, r)
        return Gauss(r)

    def scalar(self) -> Gauss:
        if not self.accept("("):
            return self.part()
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        val = self.part() * sign
        while True:
            if self.accept("+"):
                val = val + self.part()
            elif self.accept("-"):
                val = val - self.part()
            else:
                break
        self.expect(")")
        if self.is_imag_unit():
            self.take()
            val = val * Gauss(0, 1)
        return val

    def word(self) -> list[str]:
        letters = [self.letter()]
        while self.accept("."):
            letters.append(self.letter())
        return letters

    def letter(self) -> str:
        tok = self.take()
        if tok.kind != "id":
            raise self.error("expected a letter", tok)
        starred = self.accept("~")
        g = self.graph
        q = g.original if isinstance(g, DoubledGraph) else g
        if tok.text not in q.letter_index:
            raise self.error(f"unknown letter {tok.text!r}", tok)
        if not starred:
            return tok.text
        if not isinstance(g, DoubledGraph):
            raise self.error("adjoint marker '~' needs a doubled graph", tok)
        if tok.text in q.vertex_index:
            return tok.text
        return tok.text + STAR_SUFFIX


def parse_expr(text: str, graph) -> AlgebraElement:
    parser = _ExprParser(text, graph)
    terms = parser.parse()
    base = letter_graph(graph)
    out = {}
    sg = AlgebraElement.zero(graph).semigroup
    for coeff, word, tok in terms:
        if word is None:
            if base.n_vertices != 1:
                raise parser.error("a bare scalar needs a unit (single-vertex graph)", tok)
            word = [base.vertices[0]]
        w = sg.reduce(sg.word(word))
        out[w] = out[w] + coeff if w in out else coeff
    return AlgebraElement(graph, out)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c) -> str:
    """Scalar literal in expression syntax (always parseable, possibly with sign)."""
    g = c if isinstance(c, Gauss) else Gauss.coerce(complex(c))
    if not g.im:
        return _fmt_rational(g.re)
    if not g.re:
        return f"{_fmt_rational(g.im)}i"
    sign = "+" if g.im > 0 else "-"
    return f"({_fmt_rational(g.re)}{sign}{_fmt_rational(abs(g.im))}i)"


def format_expr(x: AlgebraElement) -> str:
    if not x.terms:
        return "0 * " + letter_graph(x.graph).vertices[0]
    parts = []
    for names, c in x.named_terms():
        g = c if isinstance(c, Gauss) else Gauss.coerce(complex(c))
        neg = (not g.im and g.re < 0) or (not g.re and g.im < 0)
        if neg:
            g = -g
        word = ".".join(names)
        body = word if g == Gauss(1) else f"{format_scalar(g)} * {word}"
        if not parts:
            parts.append(("- " if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def parse_scalar(text: str):
    """A single scalar literal (CLI convenience); a lone ``i`` means 1i."""
    s = text.strip()
    if s in ("i", "+i"):
        return Gauss(0, 1)
    if s == "-i":
        return Gauss(0, -1)
    parser = _ExprParser(s, DirectedMultigraph(("_",)))
    neg = parser.accept("-")
    if not neg:
        parser.accept("+")
    val = parser.scalar()
    if parser.peek().kind != "eof":
        raise parser.error(f"unexpected {parser.peek().text!r}")
    return -val if neg else val


# -- reports ------------------------------------------------------------------------


def _normalise(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            return str(f)
        return float(f"{f:.12g}")
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _normalise(obj.real), "im": _normalise(obj.imag)}
    if isinstance(obj, (Gauss, Fraction)):
        return format_scalar(obj) if isinstance(obj, Gauss) else _fmt_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _normalise(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_normalise(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _normalise(obj.tolist())
    if hasattr(obj, "as_dict"):
        return _normalise(obj.as_dict())
    raise PreconditionError(f"cannot serialise {type(obj).__name__}")


def dumps_report(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 12 significant digits."""
    return json.dumps(_normalise(obj), sort_keys=True, indent=2, ensure_ascii=False)
