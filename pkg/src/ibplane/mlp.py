"""Minimal sigmoidal feedforward classifier over one-hot encoded symbols.

Hidden layers apply the standard sigmoid to affine maps; the output layer is
a normalized exponential over the label alphabet (a single output unit is
treated as the binary case, where the sigmoid itself is the class-1
probability). Training is plain seeded SGD on the average cross-entropy,
measured in bits to match the rest of the package. Everything is
deterministic given the seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DivergenceError, UnsupportedDegenerateError
from .prob import SampleSet, _frozen_array

LN2 = math.log(2.0)


def sigmoid(u):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-u))


def _softmax_rows(u):
    z = u - u.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class NetworkParams:
    """Layer sizes plus per-layer weight matrices (out, in) and bias vectors."""

    layer_sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))
        object.__setattr__(self, "weights", tuple(_frozen_array(w) for w in self.weights))
        object.__setattr__(self, "biases", tuple(_frozen_array(b) for b in self.biases))
        sizes = self.layer_sizes
        if len(sizes) < 2:
            raise DimensionError("a network needs at least input and output layers")
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise DimensionError("one weight matrix and bias per layer transition")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[k + 1], sizes[k]) or b.shape != (sizes[k + 1],):
                raise DimensionError(f"layer {k} shapes do not chain: {w.shape}, {b.shape}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"non-finite parameter in layer {k}")

    @property
    def n_hidden(self) -> int:
        return len(self.layer_sizes) - 2


@dataclass(frozen=True)
class LayerActivations:
    """Hidden activation vectors and the output label distribution for one input."""

    hidden: tuple[np.ndarray, ...]
    output: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(_frozen_array(h) for h in self.hidden))
        object.__setattr__(self, "output", _frozen_array(self.output))
        for h in self.hidden:
            # sigmoid lands in (0,1) mathematically; float saturation can
            # round to the endpoints, which downstream binning tolerates
            if np.any(h < 0) or np.any(h > 1):
                raise ValueError("hidden activation outside [0, 1]")
        if abs(float(self.output.sum()) - 1.0) > 1e-9:
            raise ValueError("output distribution must sum to 1")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    batch_size: int
    seed: int

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")


def init_network(layer_sizes, seed: int) -> NetworkParams:
    """Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2:
        raise DimensionError("layer_sizes needs at least two entries")
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return NetworkParams(sizes, tuple(weights), tuple(biases))


def _forward_batch(net: NetworkParams, x: np.ndarray):
    """Hidden activations (list of (B, width) arrays) and output probs (B, y)."""
    hiddens = []
    h = x
    for w, b in zip(net.weights[:-1], net.biases[:-1]):
        h = sigmoid(h @ w.T + b)
        hiddens.append(h)
    u = h @ net.weights[-1].T + net.biases[-1]
    if net.layer_sizes[-1] == 1:
        p1 = sigmoid(u)
        probs = np.concatenate([1.0 - p1, p1], axis=1)
    else:
        probs = _softmax_rows(u)
    return hiddens, probs


def forward(net: NetworkParams, x_index: int, x_card: int, *,
            layer_noise: float = 0.0, rng=None) -> LayerActivations:
    """Run one symbol through the network (one-hot input of width x_card).

    layer_noise > 0 adds seeded Gaussian noise to each hidden pre-activation,
    turning the deterministic layers into stochastic maps; the default
    pipeline never uses it.
    """
    if net.layer_sizes[0] != x_card:
        raise DimensionError(
            f"network input width {net.layer_sizes[0]} does not match x_card {x_card}"
        )
    if not 0 <= x_index < x_card:
        raise DimensionError(f"x_index {x_index} out of range")
    x = np.zeros((1, x_card))
    x[0, x_index] = 1.0
    if layer_noise > 0:
        if rng is None:
            raise ValueError("layer_noise > 0 needs an explicit rng")
        hiddens = []
        h = x
        for w, b in zip(net.weights[:-1], net.biases[:-1]):
            u = h @ w.T + b + rng.normal(0.0, layer_noise, size=(1, w.shape[0]))
            h = sigmoid(u)
            hiddens.append(h)
        u = h @ net.weights[-1].T + net.biases[-1]
        if net.layer_sizes[-1] == 1:
            p1 = sigmoid(u)
            probs = np.concatenate([1.0 - p1, p1], axis=1)
        else:
            probs = _softmax_rows(u)
    else:
        hiddens, probs = _forward_batch(net, x)
    return LayerActivations(tuple(h[0] for h in hiddens), probs[0])


def forward_all(net: NetworkParams, x_card: int) -> list[LayerActivations]:
    """Activations for every symbol of the input alphabet."""
    x = np.eye(x_card)
    if net.layer_sizes[0] != x_card:
        raise DimensionError(
            f"network input width {net.layer_sizes[0]} does not match x_card {x_card}"
        )
    hiddens, probs = _forward_batch(net, x)
    return [
        LayerActivations(tuple(h[i] for h in hiddens), probs[i])
        for i in range(x_card)
    ]


def batch_loss(net: NetworkParams, x_indices, y_indices) -> float:
    """Average cross-entropy -log2 p(y|x) over a batch, in bits."""
    x_indices = np.asarray(x_indices, dtype=int)
    y_indices = np.asarray(y_indices, dtype=int)
    x = np.zeros((x_indices.size, net.layer_sizes[0]))
    x[np.arange(x_indices.size), x_indices] = 1.0
    _, probs = _forward_batch(net, x)
    with np.errstate(divide="ignore"):
        return float(-np.log2(probs[np.arange(y_indices.size), y_indices]).mean())


def batch_gradients(net: NetworkParams, x_indices, y_indices):
    """Backprop gradients of the bit-valued batch loss.

    Returns (weight grads, bias grads, loss).
    """
    x_indices = np.asarray(x_indices, dtype=int)
    y_indices = np.asarray(y_indices, dtype=int)
    n = x_indices.size
    x = np.zeros((n, net.layer_sizes[0]))
    x[np.arange(n), x_indices] = 1.0

    hiddens, probs = _forward_batch(net, x)
    with np.errstate(divide="ignore"):
        loss = float(-np.log2(probs[np.arange(n), y_indices]).mean())

    if net.layer_sizes[-1] == 1:
        delta = (probs[:, 1:2] - y_indices[:, None]) / (n * LN2)
    else:
        target = np.zeros_like(probs)
        target[np.arange(n), y_indices] = 1.0
        delta = (probs - target) / (n * LN2)

    grads_w = [None] * len(net.weights)
    grads_b = [None] * len(net.biases)
    inputs = [x] + hiddens
    for k in range(len(net.weights) - 1, -1, -1):
        grads_w[k] = delta.T @ inputs[k]
        grads_b[k] = delta.sum(axis=0)
        if k > 0:
            h = hiddens[k - 1]
            delta = (delta @ net.weights[k]) * h * (1.0 - h)
    return grads_w, grads_b, loss


def train_sgd(net: NetworkParams, samples: SampleSet,
              cfg: TrainConfig) -> tuple[NetworkParams, list[float]]:
    """Seeded mini-batch SGD on cross-entropy; returns the trained parameters
    and the per-epoch loss trace (bits). Zero epochs return the input net
    untouched with an empty trace."""
    if samples.n == 0:
        raise DimensionError("cannot train on an empty sample set")
    xs = samples.pairs[:, 0]
    ys = samples.pairs[:, 1]
    if np.any(xs >= net.layer_sizes[0]):
        raise DimensionError("sample x index exceeds the network input width")
    out_card = 2 if net.layer_sizes[-1] == 1 else net.layer_sizes[-1]
    if np.any(ys >= out_card):
        raise DimensionError("sample y index exceeds the network output width")
    if cfg.epochs == 0:
        return net, []

    rng = np.random.default_rng(cfg.seed)
    weights = [w.copy() for w in net.weights]
    biases = [b.copy() for b in net.biases]
    trace = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(samples.n)
        running = 0.0
        current = NetworkParams(net.layer_sizes, tuple(weights), tuple(biases))
        for start in range(0, samples.n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            gw, gb, loss = batch_gradients(current, xs[idx], ys[idx])
            running += loss * idx.size
            weights = [w - cfg.learning_rate * g for w, g in zip(weights, gw)]
            biases = [b - cfg.learning_rate * g for b, g in zip(biases, gb)]
            current = NetworkParams(net.layer_sizes, tuple(weights), tuple(biases))
        epoch_loss = running / samples.n
        if not math.isfinite(epoch_loss):
            raise DivergenceError(f"non-finite loss at epoch {epoch}")
        trace.append(epoch_loss)
    return current, trace


def accuracy(net: NetworkParams, samples: SampleSet) -> float:
    """Fraction of samples whose label matches the argmax prediction."""
    if samples.n == 0:
        raise DimensionError("cannot score an empty sample set")
    acts = forward_all(net, net.layer_sizes[0])
    pred = np.array([int(np.argmax(a.output)) for a in acts])
    return float((pred[samples.pairs[:, 0]] == samples.pairs[:, 1]).mean())


def naive_bayes_neuron(p_active_pos, p_active_neg,
                       prior_pos: float) -> tuple[np.ndarray, float]:
    """Sigmoid weights and bias that compute the exact Bayes posterior for
    conditionally independent binary features.

    p_active_pos[j] = p(x_j = 1 | class 1) and p_active_neg[j] = p(x_j = 1 |
    class 0); prior_pos = p(class 1). On a raw binary feature vector x the
    returned parameters satisfy sigmoid(w . x + b) = p(class 1 | x): each
    weight is the log odds-ratio of the feature being active versus inactive,
    and the inactive-feature contributions are folded into the bias together
    with the prior log-odds.
    """
    p1 = np.asarray(p_active_pos, dtype=float)
    p0 = np.asarray(p_active_neg, dtype=float)
    if p1.shape != p0.shape or p1.ndim != 1:
        raise DimensionError("feature probability vectors must share one shape")
    probs = np.concatenate([p1, p0, [prior_pos]])
    if np.any(probs <= 0) or np.any(probs >= 1):
        raise UnsupportedDegenerateError(
            "all probabilities must lie strictly inside (0, 1)"
        )
    w = np.log(p1 / p0) - np.log((1.0 - p1) / (1.0 - p0))
    b = math.log(prior_pos / (1.0 - prior_pos)) + float(
        np.log((1.0 - p1) / (1.0 - p0)).sum()
    )
    return w, b
