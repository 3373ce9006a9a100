"""Finite-dimensional representations of graphs and their doubles.

A representation sends vertices to orthogonal projections and edges to
contractions T with ``P_r(e) T P_s(e) = T``.  Different vertices may map to
non-orthogonal projections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import CapacityError, GraphMismatchError, PreconditionError
from .free_algebra import AlgebraElement
from .graph_core import DirectedMultigraph, DoubledGraph, letter_graph
from .parallel import pmap

REP_TOL = 1e-9
MAX_REP_DIM = 32


def matrix_unit(i: int, j: int, n: int = 2) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


E11, E12, E21, E22 = matrix_unit(0, 0), matrix_unit(0, 1), matrix_unit(1, 0), matrix_unit(1, 1)


def operator_norm(m, tol: float = 1e-10, max_iter: int = 20000) -> float:
    """Largest singular value by power iteration on M^H M.

    The starting vector is fixed, so the result is deterministic.  Iteration
    stops once the eigen-residual of the Gram matrix is below ``tol`` relative
    to the current Rayleigh quotient.  The returned value is ``|M x|`` for a
    unit vector x, hence never above the true norm (up to rounding).
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise PreconditionError("operator_norm expects a matrix")
    if a.size == 0:
        return 0.0
    if not np.all(np.isfinite(a)):
        raise PreconditionError("matrix has non-finite entries")
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return 0.0
    a = a / scale
    g = a.conj().T @ a
    n = g.shape[0]
    k = np.arange(n)
    x = (1.0 + k / (n + 1.0)) * np.exp(1j * 0.6180339887 * k)
    x /= np.linalg.norm(x)
    for _ in range(max_iter):
        y = g @ x
        mu = float(np.vdot(x, y).real)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            break
        if np.linalg.norm(y - mu * x) <= tol * mu:
            break
        x = y / ny
    return float(np.linalg.norm(a @ x)) * scale


def psd_check(h, tol: float = 1e-8) -> bool:
    """True iff the hermitian matrix ``h`` has minimum eigenvalue >= -tol."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise PreconditionError("psd_check expects a square matrix")
    if h.size == 0:
        return True
    if np.abs(h - h.conj().T).max() > tol * max(1.0, float(np.abs(h).max())):
        raise PreconditionError("matrix is not hermitian within tolerance")
    herm = (h + h.conj().T) / 2
    return bool(np.linalg.eigvalsh(herm)[0] >= -tol)


@dataclass
class GraphRep:
    """Matrix images of the generators of a graph (or doubled graph)."""

    graph: object
    dim: int
    vertex_images: dict = field(default_factory=dict)
    edge_images: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        base = letter_graph(self.graph)
        zero = np.zeros((self.dim, self.dim), dtype=complex)
        for v in base.vertices:
            self.vertex_images[v] = np.asarray(self.vertex_images.get(v, zero), dtype=complex)
        for e in base.edges:
            self.edge_images[e.id] = np.asarray(self.edge_images.get(e.id, zero), dtype=complex)
        extra = set(self.vertex_images) - set(base.vertices) | set(self.edge_images) - {e.id for e in base.edges}
        if extra:
            raise PreconditionError(f"images given for unknown generators {sorted(extra)}")
        for name, m in list(self.vertex_images.items()) + list(self.edge_images.items()):
            if m.shape != (self.dim, self.dim):
                raise PreconditionError(f"image of {name!r} has shape {m.shape}, expected {(self.dim, self.dim)}")

    def letter_matrices(self) -> list[np.ndarray]:
        base = letter_graph(self.graph)
        return [self.vertex_images[v] for v in base.vertices] + [self.edge_images[e.id] for e in base.edges]

    def violations(self, tol: float = REP_TOL) -> list[str]:
        """Human-readable list of failed representation axioms (empty when valid)."""
        base = letter_graph(self.graph)
        bad = []
        for v, p in self.vertex_images.items():
            if np.abs(p @ p - p).max() > tol:
                bad.append(f"{v}: not idempotent")
            if np.abs(p - p.conj().T).max() > tol:
                bad.append(f"{v}: not self-adjoint")
        for e in base.edges:
            t = self.edge_images[e.id]
            if operator_norm(t) > 1 + tol:
                bad.append(f"{e.id}: not a contraction")
            pr, ps = self.vertex_images[e.range], self.vertex_images[e.source]
            if np.abs(pr @ t @ ps - t).max() > tol:
                bad.append(f"{e.id}: P_r T P_s != T")
        if isinstance(self.graph, DoubledGraph):
            for e in self.graph.original.edges:
                star = self.graph.star(e.id)
                if np.abs(self.edge_images[star] - self.edge_images[e.id].conj().T).max() > tol:
                    bad.append(f"{star}: not the adjoint of {e.id}")
        return bad

    def validate(self, tol: float = REP_TOL) -> "GraphRep":
        bad = self.violations(tol)
        if bad:
            raise PreconditionError("invalid representation: " + "; ".join(bad))
        return self


class NestRep(GraphRep):
    """A two-dimensional representation by upper-triangular matrices."""

    def violations(self, tol: float = REP_TOL) -> list[str]:
        bad = super().violations(tol)
        if self.dim != 2:
            bad.append("nest representations are two-dimensional")
        for name, m in list(self.vertex_images.items()) + list(self.edge_images.items()):
            if self.dim == 2 and abs(m[1, 0]) > tol:
                bad.append(f"{name}: not upper triangular")
        return bad

    def is_onto(self, tol: float = REP_TOL) -> bool:
        """Whether the images span all of T_2 (checked on generators and pairwise products)."""
        mats = [m for m in self.letter_matrices()]
        prods = mats + [a @ b for a in mats for b in mats]
        span = np.array([[m[0, 0], m[0, 1], m[1, 1]] for m in prods])
        return bool(np.linalg.matrix_rank(span, tol=tol) == 3)


def rep_eval(rep: GraphRep, x: AlgebraElement) -> np.ndarray:
    if rep.graph != x.graph:
        raise GraphMismatchError("representation and element are over different graphs")
    mats = rep.letter_matrices()
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for w, c in x.terms.items():
        prod = mats[w[0]]
        for letter in w[1:]:
            prod = prod @ mats[letter]
        out += complex(c) * prod
    return out


def nest_rep(q: DirectedMultigraph, edge_id: str) -> NestRep:
    e = q.edge_by_id.get(edge_id)
    if e is None:
        raise PreconditionError(f"unknown edge {edge_id!r}")
    if e.is_loop:
        raise PreconditionError(f"edge {edge_id!r} is a loop")
    return NestRep(q, 2, {e.range: E11, e.source: E22}, {e.id: E12}, label=f"nest[{e.id}]")


def nest_family(q: DirectedMultigraph, v: str, w: str, params: Optional[Mapping[str, complex]] = None) -> NestRep:
    """The nest representation with P_v -> E11, P_w -> E22.

    ``params`` gives a_e for edges with range v and source w (imaged as
    a_e E12) and lambda for loops at v (lambda E11) or at w (lambda E22).
    Generators without a parameter map to 0.
    """
    q.check_vertex(v)
    q.check_vertex(w)
    if v == w:
        raise PreconditionError("nest families need two distinct vertices")
    params = dict(params or {})
    edges = {}
    for e in q.edges:
        if e.id not in params:
            continue
        a = complex(params.pop(e.id))
        if abs(a) > 1 + REP_TOL:
            raise PreconditionError(f"parameter for {e.id!r} has modulus > 1")
        if e.range == v and e.source == w:
            edges[e.id] = a * E12
        elif e.is_loop and e.range == v:
            edges[e.id] = a * E11
        elif e.is_loop and e.range == w:
            edges[e.id] = a * E22
        else:
            raise PreconditionError(f"edge {e.id!r} takes no parameter in the ({v}, {w}) family")
    if params:
        raise PreconditionError(f"unknown parameters {sorted(params)}")
    return NestRep(q, 2, {v: E11, w: E22}, edges, label=f"nest[{v}<-{w}]")


def between_edges(q: DirectedMultigraph, v: str, w: str) -> list[str]:
    return [e.id for e in q.edges if e.range == v and e.source == w]


def multiplicity_rank(q: DirectedMultigraph, v: str, w: str, seed: int = 0, extra: int = 2) -> int:
    """Rank of the nest-family evaluation matrix for the ordered pair (v, w).

    Rows are family members, columns are all edges of Q, entries are the
    (1, 2) coordinate of pi(T_e).  Members: one indicator family per edge from
    w to v, plus ``extra`` members with random unimodular parameters.
    """
    n_edges = between_edges(q, v, w)
    rng = np.random.default_rng([seed, q.vertex_index[v], q.vertex_index[w]])
    members = [nest_family(q, v, w, {f: 1.0}) for f in n_edges]
    for _ in range(extra):
        members.append(nest_family(q, v, w, {f: np.exp(2j * np.pi * rng.random()) for f in n_edges}))
    if not members:
        members.append(nest_family(q, v, w))
    rows = []
    for pi in members:
        rows.append([pi.edge_images[e.id][0, 1] for e in q.edges])
    if not q.edges:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows), tol=1e-9))


def _random_projection(rng, dim: int) -> np.ndarray:
    rank = int(rng.integers(0, dim + 1))
    if rank == 0:
        return np.zeros((dim, dim), dtype=complex)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    u, _ = np.linalg.qr(z)
    b = u[:, :rank]
    p = b @ b.conj().T
    return (p + p.conj().T) / 2


def _random_rep(graph, dim: int, seed) -> GraphRep:
    if not 1 <= dim <= MAX_REP_DIM:
        raise CapacityError(f"representation dimension {dim} outside [1, {MAX_REP_DIM}]")
    rng = np.random.default_rng(seed)
    q = graph.original if isinstance(graph, DoubledGraph) else graph
    verts = {v: _random_projection(rng, dim) for v in q.vertices}
    edges = {}
    for e in q.edges:
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        t = verts[e.range] @ a @ verts[e.source]
        nrm = operator_norm(t)
        if nrm > 0:
            shrink = 1.0 if rng.random() < 0.5 else rng.random()
            # divide by slightly more than the (lower-bounded) norm to stay contractive
            t = t * (shrink / (nrm * (1 + 1e-12)))
        edges[e.id] = t
        if isinstance(graph, DoubledGraph):
            edges[graph.star(e.id)] = t.conj().T
    return GraphRep(graph, dim, verts, edges, label=f"random[dim={dim}]")


def random_graph_rep(q: DirectedMultigraph, dim: int, seed) -> GraphRep:
    """Seeded random contractive representation of Q."""
    if isinstance(q, DoubledGraph):
        raise PreconditionError("use random_star_rep for doubled graphs")
    return _random_rep(q, dim, seed)


def random_star_rep(d: DoubledGraph, dim: int, seed) -> GraphRep:
    """Seeded random *-representation of a doubled graph (e~ -> T_e^H)."""
    if not isinstance(d, DoubledGraph):
        raise PreconditionError("random_star_rep needs a doubled graph")
    return _random_rep(d, dim, seed)


def edge_unit_star_reps(d: DoubledGraph) -> list[GraphRep]:
    """For each non-loop edge e: P_r(e) -> E11, P_s(e) -> E22, e -> E12, e~ -> E21."""
    out = []
    for e in d.original.edges:
        if e.is_loop:
            continue
        out.append(GraphRep(d, 2, {e.range: E11, e.source: E22},
                            {e.id: E12, d.star(e.id): E21}, label=f"unit[{e.id}]"))
    return out


# -- positivity lemmas on concrete matrices ---------------------------------


def block(t: float, x: np.ndarray) -> np.ndarray:
    """[[t I, x], [x^H, t I]]."""
    n, m = x.shape
    top = np.hstack([t * np.eye(n), x])
    bottom = np.hstack([x.conj().T, t * np.eye(m)])
    return np.vstack([top, bottom])


def block_gen(a, b, c, d) -> np.ndarray:
    return np.vstack([np.hstack([a, b]), np.hstack([c, d])])


LEMMAS = ("order", "square", "product", "sum", "swap", "scalar", "factorization")


@dataclass
class LemmaOutcome:
    name: str
    trials: int = 0
    failures: int = 0
    hypothesis_held: int = 0
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "hypothesis_held": self.hypothesis_held,
            "passed": self.passed,
            "first_failure": self.first_failure,
        }


def _rand_matrix(rng, n: int, m: int, zero_prob: float = 0.05) -> np.ndarray:
    if rng.random() < zero_prob:
        return np.zeros((n, m), dtype=complex)
    z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    # spectral norm in [0.1, 2]
    return z * (rng.uniform(0.1, 2.0) / np.linalg.norm(z, 2))


def _off_boundary(rng, norm: float) -> float:
    """A radius t >= 0 kept at least 10% away from ``norm``."""
    if norm == 0:
        return float(rng.uniform(0, 2))
    u = rng.uniform(0, 0.9) if rng.random() < 0.5 else rng.uniform(1.1, 2.0)
    return norm * u


def _hyp_radius(rng, norm: float) -> float:
    """A radius that usually satisfies the hypothesis t >= norm (sometimes exactly)."""
    r = rng.random()
    if r < 0.15:
        return norm
    if r < 0.8:
        return norm * rng.uniform(1.0, 2.0)
    return norm * rng.uniform(0, 1.0)


def _lemma_trial(name: str, rng, tol: float):
    """Returns (hypothesis_held, ok, detail) for one random instance."""
    n = int(rng.integers(1, 7))
    x = _rand_matrix(rng, n, n)
    nx = operator_norm(x)
    psd = lambda h: psd_check(h, tol)  # noqa: E731
    if name == "order":
        t = _off_boundary(rng, nx)
        lhs = psd(block(t, x))
        rhs = psd(t * t * np.eye(n) - x.conj().T @ x)
        return True, lhs == rhs, f"n={n} t={t:.6g} |x|={nx:.6g}"
    if name == "square":
        t = _off_boundary(rng, nx)
        xx = x.conj().T @ x
        lhs = psd(block(t, x))
        rhs = psd(block_gen(t * t * np.eye(n), xx, xx, t * t * np.eye(n)))
        return True, lhs == rhs, f"n={n} t={t:.6g} |x|={nx:.6g}"
    if name == "product":
        y = _rand_matrix(rng, n, n)
        s, t = _hyp_radius(rng, nx), _hyp_radius(rng, operator_norm(y))
        if not (psd(block(s, x)) and psd(block(t, y))):
            return False, True, ""
        return True, psd(block(s * t, x @ y)), f"n={n} s={s:.6g} t={t:.6g}"
    if name == "sum":
        y = _rand_matrix(rng, n, n)
        s, t = _hyp_radius(rng, nx), _hyp_radius(rng, operator_norm(y))
        if not (psd(block(s, x)) and psd(block(t, y))):
            return False, True, ""
        return True, psd(block(s + t, x + y)), f"n={n} s={s:.6g} t={t:.6g}"
    if name == "swap":
        s = _off_boundary(rng, nx)
        lhs = psd(block(s, x))
        rhs = psd(block(s, x.conj().T))
        return True, lhs == rhs, f"n={n} s={s:.6g}"
    if name == "scalar":
        s = _off_boundary(rng, nx)
        lam = rng.uniform(0.1, 3.0) * np.exp(2j * np.pi * rng.random())
        lhs = psd(block(abs(lam) * s, lam * x))
        rhs = psd(block(s, x))
        return True, lhs == rhs, f"n={n} s={s:.6g} lambda={lam:.6g}"
    if name == "factorization":
        k = int(rng.integers(1, 7))
        x1, x2 = _rand_matrix(rng, n, k), _rand_matrix(rng, k, n)
        prod = x1 @ x2
        t = operator_norm(x1) * operator_norm(x2)
        ok = psd(block(t, prod))
        npd = operator_norm(prod)
        ok = ok and psd(npd * npd * np.eye(n) - prod.conj().T @ prod)
        return True, ok, f"n={n} k={k} t={t:.6g}"
    raise PreconditionError(f"unknown lemma {name!r}")


def lemma_suite(seed: int = 0, trials: int = 500, tol: float = 1e-8, lemmas=LEMMAS) -> dict[str, LemmaOutcome]:
    """Check each positivity lemma on ``trials`` random concrete instances."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")

    def run(name):
        out = LemmaOutcome(name)
        li = LEMMAS.index(name)
        for i in range(trials):
            rng = np.random.default_rng([seed, li, i])
            held, ok, detail = _lemma_trial(name, rng, tol)
            out.trials += 1
            out.hypothesis_held += held
            if not ok:
                out.failures += 1
                if out.first_failure is None:
                    out.first_failure = f"trial {i}: {detail}"
        return out

    return {o.name: o for o in pmap(run, lemmas)}
