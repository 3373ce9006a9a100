"""Exact arithmetic in the semigroup algebra ℂw(Q).

Coefficients are :class:`Gauss` numbers (exact complex rationals).  The only
place floating coefficients appear is :func:`scale_edges` with a float
parameter, which produces plain ``complex`` coefficients.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import PreconditionError
from .graph_core import DoubledGraph
from .word_semigroup import Word, check_same_graph, semigroup_of


@dataclass(frozen=True)
class Gauss:
    """An exact complex rational ``re + im*i``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "Gauss":
        if isinstance(value, Gauss):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot make an exact scalar from {value!r}")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Gauss({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def _other(self, other):
        if isinstance(other, (Gauss, int, Fraction)):
            return Gauss.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return complex(self) + other
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return complex(self) * other
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return complex(self) / other
        d = o.abs2()
        if not d:
            raise ZeroDivisionError("division by zero scalar")
        return self * Gauss(o.re / d, -o.im / d)

    def __eq__(self, other):
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        if isinstance(other, numbers.Number):
            return complex(self) == other if isinstance(other, (float, complex)) else (not self.im and self.re == other)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


Scalar = Union[Gauss, complex]

ZERO = Gauss()
ONE = Gauss(1)
I = Gauss(0, 1)


def conj(c):
    return c.conjugate()


def sqrt_up(q: Fraction) -> float:
    """Smallest-ish float f with f*f >= q exactly."""
    if q <= 0:
        return 0.0
    f = math.sqrt(float(q))
    while Fraction(f) * Fraction(f) < q:
        f = math.nextafter(f, math.inf)
    return f


def abs_up(c) -> float:
    """A float upper bound on |c| (exact for Gauss, +1 ulp slack for floats)."""
    if isinstance(c, Gauss):
        return sqrt_up(c.abs2())
    return math.nextafter(abs(c), math.inf) if c else 0.0


def _word_key(w: Word):
    return (len(w), w)


class AlgebraElement:
    """A finite linear combination of reduced words over one graph.

    ``graph`` is a DirectedMultigraph or a DoubledGraph; terms map reduced
    words (tuples of letter indices) to nonzero coefficients.
    """

    __slots__ = ("graph", "terms")

    def __init__(self, graph, terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] = ()):
        sg = semigroup_of(graph)
        acc: dict[Word, Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = sg.reduce(w)
            if not isinstance(c, (Gauss, complex)):
                c = Gauss.coerce(c)
            acc[w] = acc[w] + c if w in acc else c
        self.graph = graph
        self.terms = {w: acc[w] for w in sorted(acc, key=_word_key) if acc[w]}

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, graph) -> "AlgebraElement":
        return cls(graph)

    @classmethod
    def from_names(cls, graph, names: Sequence[str], coeff=ONE) -> "AlgebraElement":
        return cls(graph, {semigroup_of(graph).word(names): coeff})

    @classmethod
    def letter(cls, graph, name: str, coeff=ONE) -> "AlgebraElement":
        return cls.from_names(graph, (name,), coeff)

    # -- protocol ------------------------------------------------------

    @property
    def semigroup(self):
        return semigroup_of(self.graph)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Gauss) for c in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "AlgebraElement(0)"
        sg = self.semigroup
        return "AlgebraElement(" + " + ".join(f"{c}*{sg.format(w)}" for w, c in self.terms.items()) + ")"

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.graph == other.graph and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        check_same_graph(self.graph, other.graph)

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return self.scale(Gauss(-1))

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "AlgebraElement":
        if not isinstance(c, (Gauss, complex)):
            c = Gauss.coerce(c)
        return AlgebraElement(self.graph, {w: c * v for w, v in self.terms.items()})

    def coefficient(self, names: Sequence[str]):
        w = self.semigroup.reduce(self.semigroup.word(names))
        return self.terms.get(w, ZERO)

    def named_terms(self) -> list[tuple[tuple[str, ...], Scalar]]:
        sg = self.semigroup
        return [(sg.names(w), c) for w, c in self.terms.items()]

    def edge_free(self) -> bool:
        sg = self.semigroup
        return all(sg.edge_count(w) == 0 for w in self.terms)


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    acc = dict(x.terms)
    for w, c in y.terms.items():
        acc[w] = acc[w] + c if w in acc else c
    return AlgebraElement(x.graph, acc)


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    sg = x.semigroup
    acc: dict[Word, Scalar] = {}
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            w = sg.multiply(u, v)
            c = a * b
            acc[w] = acc[w] + c if w in acc else c
    return AlgebraElement(x.graph, acc)


def adjoint(x: AlgebraElement) -> AlgebraElement:
    if not isinstance(x.graph, DoubledGraph):
        raise PreconditionError("adjoint requires an element over a doubled graph")
    inv = x.graph.involution
    return AlgebraElement(x.graph, {tuple(inv[i] for i in reversed(w)): conj(c) for w, c in x.terms.items()})


def scale_edges(x: AlgebraElement, s) -> AlgebraElement:
    """Multiply each term by ``s**(number of edge letters)``.

    Reduction only ever deletes vertex letters, so the edge-letter count is
    well defined on reduced words and additive under multiplication; this is
    what makes the map an algebra homomorphism for each fixed ``s``.
    An exact ``s`` (int or Fraction) keeps coefficients exact.
    """
    if not 0 <= s <= 1:
        raise PreconditionError(f"homotopy parameter {s} outside [0, 1]")
    if not isinstance(s, (int, Fraction)):
        s = float(s)
    sg = x.semigroup
    out = {}
    for w, c in x.terms.items():
        k = sg.edge_count(w)
        if k == 0:
            out[w] = c
        elif s:
            out[w] = c * (s ** k) if isinstance(s, float) else c * Gauss(Fraction(s) ** k)
    return AlgebraElement(x.graph, out)


def ell1(x: AlgebraElement) -> float:
    """Sum of coefficient moduli, rounded up to a float upper bound."""
    total = Fraction(0)
    for c in x.terms.values():
        total += Fraction(abs_up(c))
    f = float(total)
    if Fraction(f) < total:
        f = math.nextafter(f, math.inf)
    return f


def same_graph_or_double(g, char_graph) -> bool:
    """True when ``g`` equals ``char_graph`` or is its double."""
    if g == char_graph:
        return True
    return isinstance(g, DoubledGraph) and g.original == char_graph

