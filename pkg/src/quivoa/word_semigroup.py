"""Reduced words over V ∪ E and the semigroup they form.

A word is a tuple of letter indices (see :mod:`quivoa.graph_core`).  The
relations ``r(e) e = e = e s(e)`` (with ``r(v) = s(v) = v``) give two
adjacent-pair deletion rules::

    x y -> y   when x == r(y)
    x y -> x   when y == s(x)

Both rules delete a vertex letter, so the number of edge letters in a word is
invariant under reduction.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from .errors import CapacityError, GraphMismatchError, PreconditionError
from .graph_core import DirectedMultigraph, letter_graph

Word = tuple[int, ...]

MAX_ENUM_LEN = 12


class WordSemigroup:
    """The semigroup w(Q) of reduced words of a fixed graph."""

    def __init__(self, graph: DirectedMultigraph):
        self.graph = graph
        self._r = graph.range_letter
        self._s = graph.source_letter

    def __repr__(self):
        return f"WordSemigroup({self.graph!r})"

    # -- rules ---------------------------------------------------------

    def pair_reducible(self, x: int, y: int) -> bool:
        return x == self._r[y] or y == self._s[x]

    def rewrites(self, w: Word) -> list[Word]:
        """Every word reachable from ``w`` by a single rule application."""
        out = []
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if x == self._r[y]:
                out.append(w[:i] + w[i + 1:])
            if y == self._s[x]:
                out.append(w[:i + 1] + w[i + 2:])
        return out

    def is_reduced(self, w: Sequence[int]) -> bool:
        if not w:
            raise PreconditionError("words are nonempty")
        return not any(self.pair_reducible(w[i], w[i + 1]) for i in range(len(w) - 1))

    def reduce(self, w: Sequence[int]) -> Word:
        if not w:
            raise PreconditionError("words are nonempty")
        r, s = self._r, self._s
        stack: list[int] = []
        for y in w:
            while stack and stack[-1] == r[y]:
                stack.pop()
            if stack and y == s[stack[-1]]:
                continue
            stack.append(y)
        return tuple(stack)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> Word:
        return self.reduce(tuple(a) + tuple(b))

    def edge_count(self, w: Sequence[int]) -> int:
        n = self.graph.n_vertices
        return sum(1 for x in w if x >= n)

    def enumerate_reduced(self, max_len: int) -> list[Word]:
        """All reduced words of length <= ``max_len``, by length then lexicographically."""
        if max_len < 1:
            raise PreconditionError("max_len must be at least 1")
        if max_len > MAX_ENUM_LEN:
            raise CapacityError(f"max_len {max_len} exceeds the guard of {MAX_ENUM_LEN}")
        letters = range(len(self.graph.letters))
        level = [(x,) for x in letters]
        out = list(level)
        for _ in range(max_len - 1):
            level = [w + (y,) for w in level for y in letters if not self.pair_reducible(w[-1], y)]
            if not level:
                break
            out.extend(level)
        return out

    def identity(self) -> Optional[Word]:
        if self.graph.n_vertices == 1:
            return (0,)
        return None

    # -- naming --------------------------------------------------------

    def word(self, names: Sequence[str]) -> Word:
        """Letter indices for a sequence of identifiers (not reduced)."""
        idx = self.graph.letter_index
        try:
            return tuple(idx[n] for n in names)
        except KeyError as exc:
            raise PreconditionError(f"unknown letter {exc.args[0]!r}") from None

    def names(self, w: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.graph.letters[i] for i in w)

    def format(self, w: Sequence[int]) -> str:
        return ".".join(self.names(w))


@lru_cache(maxsize=256)
def semigroup_of(graph) -> WordSemigroup:
    """Cached semigroup for a DirectedMultigraph or DoubledGraph."""
    return WordSemigroup(letter_graph(graph))


def reduce(graph, names: Sequence[str]) -> tuple[str, ...]:
    sg = semigroup_of(graph)
    return sg.names(sg.reduce(sg.word(names)))


def multiply(graph, a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    sg = semigroup_of(graph)
    return sg.names(sg.multiply(sg.word(a), sg.word(b)))


def is_reduced(graph, names: Sequence[str]) -> bool:
    sg = semigroup_of(graph)
    return sg.is_reduced(sg.word(names))


def enumerate_reduced(graph, max_len: int) -> list[tuple[str, ...]]:
    sg = semigroup_of(graph)
    return [sg.names(w) for w in sg.enumerate_reduced(max_len)]


def semigroup_identity(graph) -> Optional[tuple[str, ...]]:
    sg = semigroup_of(graph)
    ident = sg.identity()
    return None if ident is None else sg.names(ident)


def check_same_graph(g1, g2) -> None:
    if g1 is not g2 and g1 != g2:
        raise GraphMismatchError("operands are over different graphs")


class NormalFormExplorer:
    """Exhaustive rewriting: the set of normal forms reachable from a word.

    Independent of :meth:`WordSemigroup.reduce`; it follows every maximal
    rewrite sequence (memoised over intermediate words).
    """

    def __init__(self, sg: WordSemigroup):
        self.sg = sg
        self._memo: dict[Word, frozenset[Word]] = {}

    def normal_forms(self, w: Word) -> frozenset[Word]:
        memo = self._memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        nexts = self.sg.rewrites(w)
        if not nexts:
            result = frozenset((w,))
        else:
            acc = set()
            for u in nexts:
                acc |= self.normal_forms(u)
            result = frozenset(acc)
        memo[w] = result
        return result
