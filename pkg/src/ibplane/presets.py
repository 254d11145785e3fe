"""Canonical test joints used by the command-line tool and the test suite."""

from __future__ import annotations

import numpy as np

from .prob import JointDistribution

PRESET_NAMES = ("symmetric", "product", "deterministic", "hierarchical",
                "random", "xor")


def symmetric_joint(eps: float = 0.2) -> JointDistribution:
    """Binary symmetric channel with uniform input: rows [1-eps, eps] / [eps, 1-eps]."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    rows = np.array([[1.0 - eps, eps], [eps, 1.0 - eps]])
    return JointDistribution(2, 2, 0.5 * rows)


def product_joint(x_card: int = 2, y_card: int = 2) -> JointDistribution:
    """Independent uniform X and Y; zero mutual information."""
    p = np.full((x_card, y_card), 1.0 / (x_card * y_card))
    return JointDistribution(x_card, y_card, p)


def deterministic_joint(k: int = 2) -> JointDistribution:
    """Uniform X with Y = X over k symbols; I(X;Y) = log2 k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return JointDistribution(k, k, np.eye(k) / k)


def hierarchical_joint(eps1: float = 0.2, eps2: float = 0.05,
                       levels: int = 2) -> JointDistribution:
    """Nested noisy splits over binary Y with separated critical betas.

    Leaf x carries p(y=0|x) = 0.5 + sum_l o_l * (+-1) over its binary digits,
    with offsets o_1 = 0.5 - eps1 and o_l shrinking geometrically by
    eps2 / (0.5 - eps1); levels=1 reduces to the symmetric preset. The strong
    level-1 contrast splits first, the weaker nested contrasts split later.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if not 0 < eps1 < 0.5:
        raise ValueError(f"eps1 must be in (0, 0.5), got {eps1}")
    o1 = 0.5 - eps1
    if not 0 < eps2 < o1:
        raise ValueError(f"eps2 must be in (0, 0.5 - eps1), got {eps2}")
    ratio = eps2 / o1
    offsets = [o1 * ratio ** level for level in range(levels)]
    x_card = 2 ** levels
    rows = np.empty((x_card, 2))
    for x in range(x_card):
        p0 = 0.5
        for level in range(levels):
            bit = (x >> (levels - 1 - level)) & 1
            p0 += offsets[level] * (1.0 if bit == 0 else -1.0)
        if not 0 < p0 < 1:
            raise ValueError("offsets leave the probability simplex; shrink eps2")
        rows[x] = (p0, 1.0 - p0)
    return JointDistribution(x_card, 2, rows / x_card)


def xor_joint(d: int = 2) -> JointDistribution:
    """Uniform d-bit strings labeled by their parity."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    x_card = 2 ** d
    p = np.zeros((x_card, 2))
    for x in range(x_card):
        p[x, bin(x).count("1") % 2] = 1.0 / x_card
    return JointDistribution(x_card, 2, p)


def random_joint(x_card: int = 3, y_card: int = 2, seed: int = 0) -> JointDistribution:
    """Flat-Dirichlet draw over all cells (seeded unit-rate gammas, normalized)."""
    if x_card < 1 or y_card < 1:
        raise ValueError("cardinalities must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.gamma(1.0, size=(x_card, y_card))
    return JointDistribution(x_card, y_card, g / g.sum())


def gen_preset(name: str, seed: int = 0, **params) -> JointDistribution:
    """Build a preset joint by name; unknown names raise ValueError."""
    if name == "symmetric":
        return symmetric_joint(**params)
    if name == "product":
        return product_joint(**params)
    if name == "deterministic":
        return deterministic_joint(**params)
    if name == "hierarchical":
        return hierarchical_joint(**params)
    if name == "xor":
        return xor_joint(**params)
    if name == "random":
        return random_joint(seed=seed, **params)
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
