"""Random elements and brute-force oracles shared by the tests."""

import itertools
from fractions import Fraction

import numpy as np

from quivoa.free_algebra import AlgebraElement, Gauss
from quivoa.graph_core import letter_graph


def random_word(rng, graph, max_len=4):
    letters = letter_graph(graph).letters
    n = int(rng.integers(1, max_len + 1))
    return [letters[int(i)] for i in rng.integers(0, len(letters), size=n)]


def random_gauss(rng, den=4):
    re, im = rng.integers(-2 * den, 2 * den + 1, size=2)
    return Gauss(Fraction(int(re), den), Fraction(int(im), den))


def random_element(rng, graph, max_terms=4, max_len=4):
    x = AlgebraElement.zero(graph)
    for _ in range(int(rng.integers(1, max_terms + 1))):
        x = x + AlgebraElement.from_names(graph, random_word(rng, graph, max_len), random_gauss(rng))
    return x


def random_disc_point(rng):
    r = np.sqrt(rng.random())
    return complex(r * np.exp(2j * np.pi * rng.random()))


def brute_udgraph_iso(s1, s2):
    """Try every vertex permutation (oracle for small graphs)."""
    if len(s1.vertices) != len(s2.vertices) or s1.total != s2.total:
        return False
    for perm in itertools.permutations(s2.vertices):
        vmap = dict(zip(s1.vertices, perm))
        if all(s1.count(a, b) == s2.count(vmap[a], vmap[b]) for a in s1.vertices for b in s1.vertices):
            return True
    return False


def brute_digraph_iso(q1, q2):
    if q1.n_vertices != q2.n_vertices or q1.n_edges != q2.n_edges:
        return False

    def counts(q, vmap):
        out = {}
        for e in q.edges:
            key = (vmap[e.source], vmap[e.range])
            out[key] = out.get(key, 0) + 1
        return out

    target = counts(q2, {v: v for v in q2.vertices})
    for perm in itertools.permutations(q2.vertices):
        if counts(q1, dict(zip(q1.vertices, perm))) == target:
            return True
    return False
