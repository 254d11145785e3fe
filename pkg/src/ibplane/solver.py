"""Fixed-beta solver for the compression/relevance tradeoff.

Given a joint p(X,Y), a cluster alphabet size and a tradeoff beta, the solver
minimizes L = I(X;T) - beta * I(T;Y) over soft encoders p(t|x) by iterating
the stationary-point updates

    p(t)   <- sum_x p(x) p(t|x)
    p(y|t) <- sum_x p(y|x) p(x|t)
    p(t|x) <- p(t) * exp(-beta * KL(p(y|x) || p(y|t))) / Z(x)

until the encoder stops moving. All reported quantities (R, I_Y, D_IB, L) are
in bits. The exponent uses the divergence in natural-log units, which is the
same thing as a base-2 exponent on the bit-valued divergence, so the bit
convention and the update rule are mutually consistent.

This is a local method (the problem is not convex); global behavior comes
from seeded restarts and from warm-started annealing in the curve module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEncoderError,
    DimensionError,
    InstanceTooLargeError,
)
from .prob import (
    ConditionalMatrix,
    DiscreteDistribution,
    JointDistribution,
    conditional_rows,
    entropy_bits,
    mi_bits,
)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000
INIT_NOISE = 1e-2  # multiplicative noise that breaks the symmetric fixed point

ORACLE_GUARD = 1_000_000  # max number of deterministic maps to enumerate


@dataclass(frozen=True)
class Encoder:
    """Soft assignment p(t|x) of input symbols to clusters."""

    p_t_given_x: ConditionalMatrix

    @property
    def matrix(self) -> np.ndarray:
        return self.p_t_given_x.p

    @property
    def x_card(self) -> int:
        return self.p_t_given_x.rows

    @property
    def t_card(self) -> int:
        return self.p_t_given_x.cols

    @classmethod
    def from_matrix(cls, m) -> "Encoder":
        return cls(ConditionalMatrix.from_matrix(m))

    @classmethod
    def uniform(cls, x_card: int, t_card: int) -> "Encoder":
        return cls.from_matrix(np.full((x_card, t_card), 1.0 / t_card))

    @classmethod
    def noisy_uniform(cls, x_card: int, t_card: int, seed: int,
                      noise: float = INIT_NOISE) -> "Encoder":
        """Uniform rows with seeded multiplicative noise, renormalized."""
        rng = np.random.default_rng(seed)
        m = np.full((x_card, t_card), 1.0 / t_card)
        m = m * (1.0 + noise * rng.uniform(-1.0, 1.0, size=m.shape))
        m /= m.sum(axis=1, keepdims=True)
        return cls.from_matrix(m)

    @classmethod
    def from_assignment(cls, assignment, t_card: int) -> "Encoder":
        """Deterministic encoder mapping symbol i to cluster assignment[i]."""
        assignment = np.asarray(assignment, dtype=int)
        m = np.zeros((assignment.size, t_card))
        m[np.arange(assignment.size), assignment] = 1.0
        return cls.from_matrix(m)

    @classmethod
    def hard_blend(cls, assignment, t_card: int, eta: float = 1e-2) -> "Encoder":
        """Hard assignment blended with a uniform floor so no cluster is dead."""
        assignment = np.asarray(assignment, dtype=int)
        m = np.full((assignment.size, t_card), eta / t_card)
        m[np.arange(assignment.size), assignment] += 1.0 - eta
        return cls.from_matrix(m)

    def perturbed(self, seed: int, noise: float) -> "Encoder":
        """Multiplicative seeded noise on the rows, renormalized."""
        rng = np.random.default_rng(seed)
        m = self.matrix * (1.0 + noise * rng.uniform(-1.0, 1.0, size=self.matrix.shape))
        m /= m.sum(axis=1, keepdims=True)
        return Encoder.from_matrix(m)


@dataclass(frozen=True)
class IBSolution:
    """Converged (or best-effort) solution at one beta.

    beta >= 0 is accepted: the zero-tradeoff limit is a legitimate query and
    collapses every row of the encoder onto the cluster marginal.
    """

    beta: float
    encoder: Encoder
    decoder: ConditionalMatrix
    marginal: DiscreteDistribution
    R: float
    I_Y: float
    D_IB: float
    L: float
    iterations: int
    converged: bool

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.R < -1e-9 or self.I_Y < -1e-9 or self.D_IB < -1e-9:
            raise ValueError("information quantities must be nonnegative")
        if abs(self.L - (self.R - self.beta * self.I_Y)) > 1e-9:
            raise ValueError("objective does not satisfy L = R - beta * I_Y")

    @property
    def t_card(self) -> int:
        return self.encoder.t_card


# ---------------------------------------------------------------------------
# Update kernel
# ---------------------------------------------------------------------------

def _distortion_nats(pygx: np.ndarray, dec: np.ndarray) -> np.ndarray:
    """d[x, t] = KL(p(y|x) || p(y|t)) in nats; +inf where support is missed."""
    pos = pygx > 0
    logp = np.where(pos, np.log(np.where(pos, pygx, 1.0)), 0.0)
    h = (pygx * logp).sum(axis=1)  # sum_y p log p per row (negative entropy)
    dec_pos = dec > 0
    logdec = np.where(dec_pos, np.log(np.where(dec_pos, dec, 1.0)), 0.0)
    cross = pygx @ logdec.T
    d = h[:, None] - cross
    # a decoder zero under p(y|x) support makes the divergence infinite
    missed = pos[:, None, :] & ~dec_pos[None, :, :]
    d[missed.any(axis=2)] = math.inf
    return d


def _decoder_from(px: np.ndarray, pygx: np.ndarray, enc: np.ndarray,
                  pt: np.ndarray) -> np.ndarray:
    """Bayes decoder p(y|t); zero-mass clusters decode a uniform mixture."""
    w = enc * px[:, None]
    pxgt = np.empty_like(w)
    alive = pt > 0
    pxgt[:, alive] = w[:, alive] / pt[alive]
    pxgt[:, ~alive] = 1.0 / px.size
    return pxgt.T @ pygx


def _step(px: np.ndarray, pygx: np.ndarray, enc: np.ndarray,
          beta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One full update round; returns (new encoder, marginal, decoder)."""
    pt = px @ enc
    dec = _decoder_from(px, pygx, enc, pt)
    d = _distortion_nats(pygx, dec)
    with np.errstate(divide="ignore"):
        logpt = np.log(pt)
    if beta == 0:
        expo = np.zeros_like(d)
    else:
        expo = np.where(np.isinf(d), -math.inf, -beta * d)
    logw = logpt[None, :] + expo
    rowmax = logw.max(axis=1)
    if not np.all(np.isfinite(rowmax)):
        bad = int(np.argmin(np.isfinite(rowmax)))
        raise DegenerateEncoderError(
            f"every cluster is at infinite divergence for symbol x={bad}"
        )
    w = np.exp(logw - rowmax[:, None])
    return w / w.sum(axis=1, keepdims=True), pt, dec


def ib_iterate_once(j: JointDistribution, e: Encoder, beta: float) -> Encoder:
    """Apply one round of the three updates and return the new encoder."""
    if e.x_card != j.x_card:
        raise DimensionError(
            f"encoder has {e.x_card} rows but the joint has {j.x_card} symbols"
        )
    px, pygx = conditional_rows(j.p)
    new, _, _ = _step(px, pygx, e.matrix, beta)
    return Encoder.from_matrix(new)


def _scalars(jp: np.ndarray, px: np.ndarray, enc: np.ndarray,
             beta: float) -> tuple[float, float, float, float]:
    R = mi_bits(enc * px[:, None])
    I_Y = mi_bits(enc.T @ jp)
    D_IB = mi_bits(jp) - I_Y
    L = R - beta * I_Y
    return R, I_Y, D_IB, L


def solution_from_encoder(j: JointDistribution, e: Encoder, beta: float,
                          iterations: int = 0, converged: bool = True) -> IBSolution:
    """Package an encoder with its induced marginal, decoder and scalars."""
    px, pygx = conditional_rows(j.p)
    enc = e.matrix
    pt = px @ enc
    dec = _decoder_from(px, pygx, enc, pt)
    R, I_Y, D_IB, L = _scalars(j.p, px, enc, beta)
    return IBSolution(
        beta=float(beta),
        encoder=e,
        decoder=ConditionalMatrix.from_matrix(dec),
        marginal=DiscreteDistribution(pt),
        R=R, I_Y=I_Y, D_IB=D_IB, L=L,
        iterations=iterations, converged=converged,
    )


def ib_solve(j: JointDistribution, t_card: int, beta: float,
             init: Encoder | None = None, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, seed: int = 0) -> IBSolution:
    """Iterate from init (default: seeded noisy-uniform) until the encoder
    moves less than tol in max-abs, or max_iter rounds elapse."""
    if t_card < 1:
        raise DimensionError(f"t_card must be >= 1, got {t_card}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if init is None:
        init = Encoder.noisy_uniform(j.x_card, t_card, seed)
    if init.x_card != j.x_card or init.t_card != t_card:
        raise DimensionError("init encoder shape does not match (x_card, t_card)")

    px, pygx = conditional_rows(j.p)
    enc = init.matrix
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new, _, _ = _step(px, pygx, enc, beta)
        delta = float(np.max(np.abs(new - enc)))
        enc = new
        if delta < tol:
            converged = True
            break

    sol = solution_from_encoder(
        j, Encoder.from_matrix(enc), beta, iterations=iterations, converged=converged
    )
    assert sol.I_Y <= mi_bits(j.p) + 1e-9
    assert sol.R <= min(entropy_bits(px), math.log2(t_card) if t_card > 1 else 0.0) + 1e-9
    return sol


def _restart_init(x_card: int, t_card: int, r: int, seed: int) -> Encoder | None:
    """Init for restart r: None keeps the solver's noisy-uniform default.

    Noisy-uniform inits alone can miss the fine-split basin just past a
    transition (the symmetric fixed point's basin shrinks to nothing there),
    so odd restarts seed blended hard partitions instead: the maximal
    partition first, then random assignments.
    """
    if r % 2 == 0 or t_card < 2:
        return None
    if r == 1:
        return Encoder.hard_blend(np.arange(x_card) % t_card, t_card)
    rng = np.random.default_rng(seed)
    return Encoder.hard_blend(rng.integers(0, t_card, size=x_card), t_card)


def ib_solve_multistart(j: JointDistribution, t_card: int, beta: float,
                        restarts: int = 20, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER, seed: int = 0) -> IBSolution:
    """Best of `restarts` seeded solves over a diversified init family;
    smallest L wins, ties go to smaller R."""
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    best = None
    for r in range(restarts):
        init = _restart_init(j.x_card, t_card, r, seed + r)
        sol = ib_solve(j, t_card, beta, init=init, tol=tol, max_iter=max_iter,
                       seed=seed + r)
        if best is None or (sol.L, sol.R) < (best.L, best.R):
            best = sol
    return best


def self_consistency_residual(j: JointDistribution, sol: IBSolution) -> float:
    """Max-abs gap between each stored quantity and its recomputation from
    the other two stored quantities."""
    if sol.encoder.x_card != j.x_card:
        raise DimensionError("solution encoder does not match the joint")
    px, pygx = conditional_rows(j.p)
    enc = sol.encoder.matrix
    pt = sol.marginal.p
    dec = sol.decoder.p

    pt_re = px @ enc
    dec_re = _decoder_from(px, pygx, enc, pt_re)

    d = _distortion_nats(pygx, dec)
    with np.errstate(divide="ignore"):
        logpt = np.log(pt)
    if sol.beta == 0:
        expo = np.zeros_like(d)
    else:
        expo = np.where(np.isinf(d), -math.inf, -sol.beta * d)
    logw = logpt[None, :] + expo
    rowmax = logw.max(axis=1)
    if not np.all(np.isfinite(rowmax)):
        raise DegenerateEncoderError("stored marginal/decoder normalize to zero")
    w = np.exp(logw - rowmax[:, None])
    enc_re = w / w.sum(axis=1, keepdims=True)

    return float(max(
        np.max(np.abs(pt_re - pt)),
        np.max(np.abs(dec_re - dec)),
        np.max(np.abs(enc_re - enc)),
    ))


def exhaustive_deterministic_oracle(j: JointDistribution, t_card: int,
                                    beta: float) -> tuple[Encoder, float]:
    """Enumerate all deterministic maps X -> T and return the one minimizing
    L = R - beta * I_Y, with its objective value.

    Independent of the iterative solver: rate and relevance come straight
    from the pushforward of the joint under each map.
    """
    if t_card < 1:
        raise DimensionError(f"t_card must be >= 1, got {t_card}")
    n_maps = t_card ** j.x_card
    if n_maps > ORACLE_GUARD:
        raise InstanceTooLargeError(
            f"{t_card}^{j.x_card} = {n_maps} deterministic maps exceeds the "
            f"guard of {ORACLE_GUARD}"
        )
    px = j.p.sum(axis=1)
    best_key = None
    best_assign = None
    for assign in itertools.product(range(t_card), repeat=j.x_card):
        a = np.asarray(assign, dtype=int)
        pt = np.bincount(a, weights=px, minlength=t_card)
        pty = np.zeros((t_card, j.y_card))
        np.add.at(pty, a, j.p)
        R = entropy_bits(pt)  # I(X;T) = H(T) for a deterministic map
        I_Y = mi_bits(pty)
        L = R - beta * I_Y
        key = (L, R)
        if best_key is None or key < best_key:
            best_key = key
            best_assign = a
    return Encoder.from_assignment(best_assign, t_card), best_key[0]
