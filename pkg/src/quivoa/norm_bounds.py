"""Certified lower and upper bounds for universal norms.

Every lower bound is the modulus or operator norm of an actual evaluation:
a character, a nest representation or a validated random representation.
The upper bound is the l1 norm of the coefficients, valid because every
generator has norm at most one in the universal algebra.

Search effort is organised so that a larger configuration evaluates a
superset of the candidates of a smaller one.  Characters are searched on the
dyadic angle grids 1, 2, 4, ... up to ``character_grid`` (plus the grid of
size ``character_grid`` itself), each followed by coordinate-ascent
refinement.  Random trial i always uses the seed derived from
``(seed, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .free_algebra import AlgebraElement, adjoint, ell1
from .graph_core import DirectedMultigraph, DoubledGraph, iter_subset_masks, letter_graph
from .parallel import pmap
from .reps import (
    between_edges,
    edge_unit_star_reps,
    nest_family,
    operator_norm,
    random_graph_rep,
    random_star_rep,
    rep_eval,
)

MAX_GRID_POINTS = 4096
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class BoundConfig:
    character_grid: int = 16
    refinement_steps: int = 50
    rep_trials: int = 64
    rep_dims: tuple[int, ...] = (2, 3, 4)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rep_dims", tuple(self.rep_dims))
        if min(self.character_grid, self.refinement_steps, self.rep_trials) < 1:
            raise PreconditionError("bound configuration counts must be at least 1")
        if not self.rep_dims or min(self.rep_dims) < 1:
            raise PreconditionError("rep_dims must be a nonempty list of positive sizes")


@dataclass
class NormBounds:
    lower: float
    upper: float
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "witnesses": self.witnesses}


class _Candidate:
    """Running maximum with a description of where it was attained."""

    def __init__(self):
        self.value = 0.0
        self.witness: Optional[dict] = None

    def offer(self, value: float, witness) -> None:
        if value > self.value or self.witness is None:
            self.value = float(value)
            self.witness = witness() if callable(witness) else witness


# -- characters ---------------------------------------------------------------


class _CharacterPolynomial:
    """phi_lambda(x) for a fixed subset, as a function of the free edge values.

    Each surviving term contributes ``c * prod_e lam_e^a_e * conj(lam_e)^b_e``.
    """

    def __init__(self, coeffs, pos_exp, neg_exp, edges):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.pos = np.asarray(pos_exp, dtype=float).reshape(len(coeffs), len(edges))
        self.neg = np.asarray(neg_exp, dtype=float).reshape(len(coeffs), len(edges))
        self.edges = edges

    @property
    def n_vars(self) -> int:
        return len(self.edges)

    def values(self, theta: np.ndarray, rho: Optional[np.ndarray] = None) -> np.ndarray:
        """|p| at points lam = rho * exp(i theta); theta, rho have shape (P, k)."""
        phase = theta @ (self.pos - self.neg).T
        vals = np.exp(1j * phase)
        if rho is not None:
            mod = np.ones_like(phase)
            deg = self.pos + self.neg
            for j in range(self.n_vars):
                mod = mod * np.power(rho[:, j:j + 1], deg[:, j][None, :])
            vals = vals * mod
        return np.abs(vals @ self.coeffs)


def _character_polynomials(x: AlgebraElement):
    """Yield (subset, polynomial) for each distinct set of surviving terms."""
    g = x.graph
    base = letter_graph(g)
    q = g.original if isinstance(g, DoubledGraph) else g
    n = base.n_vertices
    edge_ids = [e.id for e in q.edges]
    col = {e: i for i, e in enumerate(edge_ids)}
    term_info = []
    for w, c in x.terms.items():
        mask = 0
        pos = [0] * len(edge_ids)
        neg = [0] * len(edge_ids)
        for letter in w:
            if letter < n:
                mask |= 1 << letter
                continue
            e = base.edge_of_letter(letter)
            mask |= (1 << base.vertex_index[e.source]) | (1 << base.vertex_index[e.range])
            if isinstance(g, DoubledGraph) and e.id not in q.edge_by_id:
                neg[col[g.star(e.id)]] += 1
            else:
                pos[col[e.id]] += 1
        term_info.append((mask, complex(c), pos, neg))
    seen = set()
    for smask in iter_subset_masks(q.n_vertices):
        alive = tuple(i for i, t in enumerate(term_info) if t[0] & ~smask == 0)
        if not alive or alive in seen:
            continue
        seen.add(alive)
        used = sorted({j for i in alive for j in range(len(edge_ids))
                       if term_info[i][2][j] or term_info[i][3][j]})
        coeffs = [term_info[i][1] for i in alive]
        pos = [[term_info[i][2][j] for j in used] for i in alive]
        neg = [[term_info[i][3][j] for j in used] for i in alive]
        yield q.mask_vertices(smask), _CharacterPolynomial(coeffs, pos, neg, [edge_ids[j] for j in used])


def _grid_levels(g: int) -> list[int]:
    levels, k = [], 1
    while k <= g:
        levels.append(k)
        k *= 2
    if levels[-1] != g:
        levels.append(g)
    return levels


def _points(level: int, k: int, rng) -> np.ndarray:
    """All points of the ``level``-grid on the k-torus, or a seeded sample when too many."""
    angles = 2 * np.pi * np.arange(level) / level
    if level ** k <= MAX_GRID_POINTS:
        mesh = np.meshgrid(*([angles] * k), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)
    idx = rng.integers(0, level, size=(MAX_GRID_POINTS, k))
    idx[0] = 0
    return angles[idx]


def _refine(poly: _CharacterPolynomial, theta: np.ndarray, rho: Optional[np.ndarray], steps: int, start_step: float):
    """Best-single-move ascent over angles (and radii when ``rho`` is given)."""
    k = poly.n_vars
    best_t = theta.copy()
    best_r = None if rho is None else rho.copy()
    best = poly.values(best_t[None, :], None if best_r is None else best_r[None, :])[0]
    step = start_step
    eye = np.eye(k)
    for _ in range(steps):
        if step < 1e-9:
            break
        moves_t = np.vstack([best_t + step * eye, best_t - step * eye])
        moves_r = None
        if best_r is not None:
            moves_r = np.vstack([np.tile(best_r, (2 * k, 1)),
                                 np.clip(best_r + 0.25 * step * eye, 0, 1),
                                 np.clip(best_r - 0.25 * step * eye, 0, 1)])
            moves_t = np.vstack([moves_t, np.tile(best_t, (2 * k, 1))])
        vals = poly.values(moves_t, moves_r)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_t = vals[i], moves_t[i]
            if moves_r is not None:
                best_r = moves_r[i]
        else:
            step /= 2
    return best, best_t, best_r


def _character_search(x: AlgebraElement, cfg: BoundConfig, disc: bool, cand: _Candidate) -> None:
    radii_levels = (0.0, 0.5, 1.0)
    for ci, (subset, poly) in enumerate(_character_polynomials(x)):
        k = poly.n_vars
        if k == 0:
            val = abs(poly.coeffs.sum())
            cand.offer(val, lambda: {"kind": "character", "subset": list(subset), "lambda": {}})
            continue
        for level in _grid_levels(cfg.character_grid):
            rng = np.random.default_rng([cfg.seed, ci, level])
            theta = _points(level, k, rng)
            rho = None
            if disc:
                r_idx = rng.integers(0, len(radii_levels), size=theta.shape)
                r_idx[0] = len(radii_levels) - 1
                rho = np.asarray(radii_levels)[r_idx]
            vals = poly.values(theta, rho)
            i = int(np.argmax(vals))
            best, bt, br = _refine(poly, theta[i], None if rho is None else rho[i],
                                   cfg.refinement_steps, np.pi / max(level, 1))
            for val, t, r in ((vals[i], theta[i], None if rho is None else rho[i]), (best, bt, br)):
                lam = np.exp(1j * t) * (1.0 if r is None else r)
                cand.offer(val, lambda lam=lam: {
                    "kind": "character",
                    "subset": list(subset),
                    "lambda": {e: [float(z.real), float(z.imag)] for e, z in zip(poly.edges, lam)},
                })


# -- representations -----------------------------------------------------------


def _rep_witness(rep, extra=None):
    out = {"kind": "representation", "label": rep.label, "dim": rep.dim}
    if extra:
        out.update(extra)
    return out


def _nest_sweep(q: DirectedMultigraph, x: AlgebraElement, cfg: BoundConfig, cand: _Candidate) -> None:
    sweeps = max(1, cfg.rep_trials // 8)
    for vi, v in enumerate(q.vertices):
        for wi, w in enumerate(q.vertices):
            if v == w:
                continue
            free = between_edges(q, v, w) + [e.id for e in q.edges if e.is_loop and e.range in (v, w)]
            for j in range(sweeps + 1):
                if j == 0:
                    params = {e: 1.0 for e in free}
                else:
                    rng = np.random.default_rng([cfg.seed, 7, vi, wi, j])
                    params = {e: complex(np.exp(2j * np.pi * rng.random())) for e in free}
                pi = nest_family(q, v, w, params)
                cand.offer(operator_norm(rep_eval(pi, x)),
                           lambda pi=pi, j=j: _rep_witness(pi, {"sweep": j}))


def _random_reps(g, x: AlgebraElement, cfg: BoundConfig, cand: _Candidate, star: bool):
    def trial(i):
        dim = cfg.rep_dims[i % len(cfg.rep_dims)]
        seed = [cfg.seed, 11, i]
        rep = random_star_rep(g, dim, seed) if star else random_graph_rep(g, dim, seed)
        rep.validate()
        m = rep_eval(rep, x)
        return i, rep, m, operator_norm(m)

    results = pmap(trial, range(cfg.rep_trials))
    for i, rep, m, val in results:
        cand.offer(val, lambda rep=rep, i=i: _rep_witness(rep, {"trial": i}))
    return results


def _finish(cand: _Candidate, x: AlgebraElement) -> NormBounds:
    upper = ell1(x)
    lower = cand.value
    if lower > upper + BOUND_TOL:
        raise AssertionError(f"lower bound {lower} exceeds l1 bound {upper}")
    # the true norm is <= upper, so rounding excess above it carries no information
    lower = min(lower, upper)
    return NormBounds(lower, upper, {"lower": cand.witness, "upper": {"kind": "l1", "terms": len(x.terms)}})


def oa_norm_bounds(q: DirectedMultigraph, x: AlgebraElement, cfg: Optional[BoundConfig] = None) -> NormBounds:
    cfg = cfg or BoundConfig()
    if x.graph != q:
        raise PreconditionError("element is not over the given graph")
    if not x.terms:
        return NormBounds(0.0, 0.0, {"lower": None, "upper": {"kind": "l1", "terms": 0}})
    cand = _Candidate()
    _character_search(x, cfg, disc=False, cand=cand)
    if q.n_vertices >= 2:
        _nest_sweep(q, x, cfg, cand)
    _random_reps(q, x, cfg, cand, star=False)
    return _finish(cand, x)


def gcm_norm_bounds(d: DoubledGraph, x: AlgebraElement, cfg: Optional[BoundConfig] = None) -> NormBounds:
    cfg = cfg or BoundConfig()
    if not isinstance(d, DoubledGraph) or x.graph != d:
        raise PreconditionError("element is not over the given doubled graph")
    if not x.terms:
        return NormBounds(0.0, 0.0, {"lower": None, "upper": {"kind": "l1", "terms": 0}})
    cand = _Candidate()
    _character_search(x, cfg, disc=True, cand=cand)
    for rep in edge_unit_star_reps(d):
        cand.offer(operator_norm(rep_eval(rep, x)), lambda rep=rep: _rep_witness(rep))
    results = _random_reps(d, x, cfg, cand, star=True)
    bounds = _finish(cand, x)
    if adjoint(x) == x and results:
        radius = max(float(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2)).max()) for _, _, m, _ in results)
        bounds.witnesses["spectral_radius"] = min(radius, bounds.upper)
        bounds.lower = max(bounds.lower, min(radius, bounds.upper))
    return bounds
