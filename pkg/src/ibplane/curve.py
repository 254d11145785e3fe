"""Tradeoff-curve tracing and phase-transition analysis.

The curve is traced by deterministic annealing: sweep beta upward, warm-start
each solve from the previous solution with a small symmetry-breaking
perturbation, and keep the best of that candidate plus a few fresh restarts.
Jumps in the effective cluster count are bracketed by bisection with fresh
restarts (warm starts would drag hysteresis across the transition).

The first critical beta is also predicted spectrally: linearizing the encoder
update around a solution gives a second-order correlation matrix over Y whose
leading admissible eigenvalue lambda sets the instability point at
beta = 1/lambda. The all-ones direction is always an eigenvector with
eigenvalue 1 (rows of the correlation matrix are normalized) and is deflated
before reading off lambda.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClusterError, DimensionError
from .prob import JointDistribution, conditional_rows, js_bits, mi_bits
from .solver import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    IBSolution,
    _restart_init,
    ib_solve,
    ib_solve_multistart,
)

MASS_EPS = 1e-6     # cluster weight below which a cluster is not counted
MERGE_TAU = 1e-4    # JS divergence (bits) under which decoder rows merge
BRACKET_REL_WIDTH = 1e-3  # bisection stops at width <= this * beta
MONOTONE_SLACK = 1e-6


@dataclass(frozen=True)
class CurvePoint:
    beta: float
    R: float
    I_Y: float
    D_IB: float
    L: float
    eff_card: int

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.eff_card < 1:
            raise ValueError(f"eff_card must be >= 1, got {self.eff_card}")
        if abs(self.L - (self.R - self.beta * self.I_Y)) > 1e-9:
            raise ValueError("curve point violates L = R - beta * I_Y")


@dataclass(frozen=True)
class Bifurcation:
    """A bracketed jump of the effective cluster count.

    beta_predicted carries the spectral prediction when one is available
    (it may be None for later splits).
    """

    beta_low: float
    beta_high: float
    card_before: int
    card_after: int
    beta_predicted: float | None = None

    def __post_init__(self):
        if not self.beta_low < self.beta_high:
            raise ValueError("bifurcation bracket must satisfy beta_low < beta_high")
        if not self.card_after > self.card_before:
            raise ValueError("bifurcation must increase the effective cardinality")


@dataclass(frozen=True)
class InfoCurve:
    points: tuple[CurvePoint, ...]
    bifurcations: tuple[Bifurcation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "bifurcations", tuple(self.bifurcations))
        betas = [p.beta for p in self.points]
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("curve betas must be strictly increasing")
        for prev, cur in zip(self.points, self.points[1:]):
            if cur.R < prev.R - MONOTONE_SLACK or cur.I_Y < prev.I_Y - MONOTONE_SLACK:
                raise ValueError(
                    f"curve is not monotone near beta={cur.beta}: "
                    f"R {prev.R}->{cur.R}, I_Y {prev.I_Y}->{cur.I_Y}"
                )


# ---------------------------------------------------------------------------
# Effective cardinality
# ---------------------------------------------------------------------------

def effective_cardinality(sol: IBSolution, mass_eps: float = MASS_EPS,
                          merge_tau: float = MERGE_TAU) -> int:
    """Number of clusters carrying mass above mass_eps, after merging pairs
    whose decoder rows differ by less than merge_tau in JS divergence."""
    if mass_eps <= 0 or merge_tau <= 0:
        raise ValueError("mass_eps and merge_tau must be > 0")
    pt = sol.marginal.p
    dec = sol.decoder.p
    alive = [t for t in range(pt.size) if pt[t] > mass_eps]
    if not alive:
        return 1
    parent = {t: t for t in alive}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for i, a in enumerate(alive):
        for b in alive[i + 1:]:
            if js_bits(dec[a], dec[b]) < merge_tau:
                parent[find(b)] = find(a)
    return len({find(t) for t in alive})


# ---------------------------------------------------------------------------
# Spectral critical beta
# ---------------------------------------------------------------------------

def jacobi_eigenvalues(a, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a small dense symmetric matrix by cyclic Jacobi
    rotations, sorted in decreasing order."""
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("jacobi_eigenvalues needs a square matrix")
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0]])
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
    return np.sort(np.diag(a))[::-1]


def _cluster_stats(j: JointDistribution, sol: IBSolution,
                   t_index: int) -> tuple[np.ndarray, np.ndarray]:
    """p(x|t) and p(y|t) for one cluster, recomputed from the encoder so the
    correlation matrix is exactly row-normalized."""
    if not 0 <= t_index < sol.t_card:
        raise DimensionError(f"cluster index {t_index} out of range")
    px, pygx = conditional_rows(j.p)
    col = sol.encoder.matrix[:, t_index]
    pt = float(px @ col)
    if pt <= 0:
        raise DegenerateClusterError(f"cluster {t_index} has zero mass")
    pxgt = px * col / pt
    return pxgt, pxgt @ pygx


def c_matrix(j: JointDistribution, sol: IBSolution, t_index: int) -> np.ndarray:
    """Second-order correlation matrix over Y conditioned on one cluster:

        C[y, y'] = sum_x p(x|t) p(y|x) p(y'|x) / p(y|t)

    Rows sum to 1, so the all-ones vector is a right eigenvector with
    eigenvalue 1. Rows for y with p(y|t) = 0 are left at zero.
    """
    pxgt, pygt = _cluster_stats(j, sol, t_index)
    _, pygx = conditional_rows(j.p)
    m = pygx.T @ (pxgt[:, None] * pygx)
    c = np.zeros_like(m)
    pos = pygt > 0
    c[pos] = m[pos] / pygt[pos, None]
    return c


def critical_beta_spectral(j: JointDistribution, sol: IBSolution,
                           t_index: int) -> float:
    """Spectral prediction 1/lambda of the beta at which a cluster splits.

    lambda is the largest eigenvalue of the cluster's second-order
    correlation matrix restricted to the complement of the trivial
    (all-ones, eigenvalue-1) mode. The matrix is symmetrized as
    S = D^{-1/2} M D^{-1/2} with D = diag p(y|t), whose unit eigenvector for
    the trivial mode is sqrt(p(y|t)); that mode is projected out before the
    eigenvalues are read off. Returns math.inf when no admissible eigenvalue
    is positive (no transition).
    """
    pxgt, pygt = _cluster_stats(j, sol, t_index)
    _, pygx = conditional_rows(j.p)
    m = pygx.T @ (pxgt[:, None] * pygx)
    sup = pygt > 0
    ms = m[np.ix_(sup, sup)]
    v = np.sqrt(pygt[sup])
    s = ms / np.outer(v, v)
    proj = np.eye(v.size) - np.outer(v, v)
    deflated = proj @ s @ proj
    lam = float(jacobi_eigenvalues(deflated)[0]) if v.size > 1 else 0.0
    if lam <= 1e-12:
        return math.inf
    return 1.0 / lam


# ---------------------------------------------------------------------------
# Annealing sweep
# ---------------------------------------------------------------------------

def geometric_grid(beta_min: float, beta_max: float,
                   factor: float = 1.05) -> np.ndarray:
    """Geometric beta grid from beta_min to beta_max inclusive."""
    if beta_min <= 0 or beta_max <= beta_min:
        raise ValueError("need 0 < beta_min < beta_max")
    if factor <= 1:
        raise ValueError(f"grid factor must be > 1, got {factor}")
    grid = [beta_min]
    while grid[-1] * factor < beta_max:
        grid.append(grid[-1] * factor)
    grid.append(beta_max)
    return np.array(grid)


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _run_all(fns, threads: int):
    if threads > 1 and len(fns) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            futures = [ex.submit(f) for f in fns]
            return [f.result() for f in futures]
    return [f() for f in fns]


def _best(solutions) -> IBSolution:
    return min(solutions, key=lambda s: (s.L, s.R))


def anneal_curve(j: JointDistribution, t_card: int, beta_grid,
                 perturb_mag: float = 1e-3, restarts: int = 3,
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 seed: int = 0, mass_eps: float = MASS_EPS,
                 merge_tau: float = MERGE_TAU, threads: int = 1) -> InfoCurve:
    """Sweep the beta grid with warm starts plus fresh restarts per point and
    bracket every effective-cardinality jump by bisection."""
    beta_grid = np.asarray(beta_grid, dtype=float)
    if beta_grid.size == 0:
        raise ValueError("beta grid is empty")
    if np.any(beta_grid <= 0) or np.any(np.diff(beta_grid) <= 0):
        raise ValueError("beta grid must be strictly increasing and positive")

    points: list[CurvePoint] = []
    cards: list[int] = []
    prev: IBSolution | None = None
    for i, beta in enumerate(beta_grid):
        fns = []
        if prev is not None:
            warm = prev.encoder.perturbed(_derived_seed(seed, i, 0), perturb_mag)
            fns.append(lambda b=beta, w=warm: ib_solve(
                j, t_card, b, init=w, tol=tol, max_iter=max_iter))
        for r in range(restarts):
            s = _derived_seed(seed, i, r + 1)
            fns.append(lambda b=beta, r=r, s=s: ib_solve(
                j, t_card, b, init=_restart_init(j.x_card, t_card, r, s),
                tol=tol, max_iter=max_iter, seed=s))
        best = _best(_run_all(fns, threads))
        card = effective_cardinality(best, mass_eps, merge_tau)
        points.append(CurvePoint(
            beta=float(beta), R=best.R, I_Y=best.I_Y, D_IB=best.D_IB,
            L=best.L, eff_card=card,
        ))
        cards.append(card)
        prev = best

    probe_counter = [0]

    def probe_card(beta: float) -> int:
        # fresh restarts avoid warm-start hysteresis; the tightened tolerance
        # suppresses truncation asymmetry between simultaneous splits, which
        # otherwise flips the merge test arbitrarily right at a transition
        probe_counter[0] += 1
        sol = ib_solve_multistart(
            j, t_card, beta, restarts=max(restarts, 2) + 1, tol=tol * 1e-2,
            max_iter=3 * max_iter, seed=_derived_seed(seed, 7_777, probe_counter[0]))
        return effective_cardinality(sol, mass_eps, merge_tau)

    bifurcations: list[Bifurcation] = []

    def refine(lo: float, c_lo: int, hi: float, c_hi: int):
        if hi - lo <= BRACKET_REL_WIDTH * hi:
            bifurcations.append(Bifurcation(lo, hi, c_lo, c_hi))
            return
        mid = 0.5 * (lo + hi)
        c_mid = probe_card(mid)
        if c_mid > c_lo:
            refine(lo, c_lo, mid, c_mid)
        if c_mid < c_hi:
            refine(mid, c_mid, hi, c_hi)

    for lo_i, lo_c, hi_i, hi_c in _monotone_jumps(cards):
        refine(float(beta_grid[lo_i]), lo_c, float(beta_grid[hi_i]), hi_c)

    return InfoCurve(tuple(points), tuple(bifurcations))


def _monotone_jumps(cards) -> list[tuple[int, int, int, int]]:
    """Jumps (lo_index, lo_card, hi_index, hi_card) of the running maximum.

    Along an annealing sweep the effective cardinality of the optimal branch
    does not decrease; an isolated dip in the raw sequence is convergence
    noise near a transition, so detection works on the running maximum.
    """
    jumps = []
    running = cards[0]
    for i in range(1, len(cards)):
        if cards[i] > running:
            jumps.append((i - 1, running, i, cards[i]))
            running = cards[i]
    return jumps


def detect_bifurcations(curve: InfoCurve, j: JointDistribution, t_card: int,
                        restarts: int = 5, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER, seed: int = 0,
                        mass_eps: float = MASS_EPS,
                        merge_tau: float = MERGE_TAU) -> tuple[Bifurcation, ...]:
    """Attach a spectral prediction to every bracketed jump of a curve.

    The prediction is the smallest finite critical beta over the clusters
    alive in a fresh solution just below the jump; later splits may have no
    finite prediction, in which case it stays None.
    """
    brackets = list(curve.bifurcations)
    if not brackets:
        cards = [p.eff_card for p in curve.points]
        for lo_i, lo_c, hi_i, hi_c in _monotone_jumps(cards):
            brackets.append(Bifurcation(curve.points[lo_i].beta,
                                        curve.points[hi_i].beta, lo_c, hi_c))

    out = []
    for k, br in enumerate(brackets):
        sol = ib_solve_multistart(
            j, t_card, br.beta_low, restarts=restarts, tol=tol,
            max_iter=max_iter, seed=_derived_seed(seed, 31_337, k))
        preds = []
        for t in range(sol.t_card):
            if sol.marginal.p[t] > mass_eps:
                bc = critical_beta_spectral(j, sol, t)
                if math.isfinite(bc):
                    preds.append(bc)
        out.append(Bifurcation(
            beta_low=br.beta_low, beta_high=br.beta_high,
            card_before=br.card_before, card_after=br.card_after,
            beta_predicted=min(preds) if preds else None,
        ))
    return tuple(out)
