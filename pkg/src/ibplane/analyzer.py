"""Placement of a trained network's layers on the information plane.

Every layer is reduced to a discrete code per input symbol: hidden units are
binned uniformly on (0,1) (or kept as exact activation tuples), the output
layer becomes its argmax prediction. Since each code is then a deterministic
function of X, all mutual informations are computed exactly by pushing the
joint through the code maps; no sample-based estimation is involved.

With exact activation tuples each layer is also a deterministic function of
the previous one, so relevance can only fall with depth. Binned codes are
functions of X but not necessarily of the previous binned layer, so the chain
check reports any increase instead of treating it as fatal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, DimensionError
from .mlp import LayerActivations, NetworkParams, forward_all
from .prob import JointDistribution, entropy_bits, mi_bits

DPI_TOL = 1e-9


@dataclass(frozen=True)
class QuantizerConfig:
    """Uniform binning of sigmoidal activations on (0, 1)."""

    bins: int = 8

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")


@dataclass(frozen=True)
class InfoPlanePoint:
    """One layer's position: index 0 is the input X, m+1 the prediction.

    layer_criterion is I(h_prev; h) + beta * I(Y; h_prev | h) for the beta the
    path was computed with; the input layer has no predecessor and carries 0.
    """

    layer_index: int
    I_X: float
    I_Y: float
    layer_criterion: float


@dataclass(frozen=True)
class LayerPath:
    points: tuple[InfoPlanePoint, ...]
    dpi_violations: tuple[tuple[tuple[int, int], float], ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "dpi_violations", tuple(self.dpi_violations))
        indices = [p.layer_index for p in self.points]
        if indices != list(range(len(indices))):
            raise DimensionError("path must cover layers 0..m+1 in order")


def _bin_codes(vectors: list[np.ndarray], bins: int | None) -> np.ndarray:
    """Map each activation vector to a dense integer code, first-seen order."""
    seen: dict[tuple, int] = {}
    codes = np.empty(len(vectors), dtype=int)
    for i, v in enumerate(vectors):
        if bins is None:
            key = tuple(v.tolist())
        else:
            key = tuple(np.minimum((v * bins).astype(int), bins - 1).tolist())
        codes[i] = seen.setdefault(key, len(seen))
    return codes


def quantize_activations(acts: list[LayerActivations],
                         q: QuantizerConfig | None) -> list[np.ndarray]:
    """Per hidden layer, one integer code per input symbol.

    q=None skips binning and codes each exact activation tuple; this is the
    lossless variant used for exact chain checks.
    """
    if not acts:
        raise DimensionError("no activations given")
    n_hidden = len(acts[0].hidden)
    bins = None if q is None else q.bins
    return [
        _bin_codes([a.hidden[layer] for a in acts], bins)
        for layer in range(n_hidden)
    ]


def prediction_codes(acts: list[LayerActivations]) -> np.ndarray:
    """Argmax label per input symbol; ties break to the lowest index."""
    return np.array([int(np.argmax(a.output)) for a in acts])


def _check_coverage(j: JointDistribution, codes) -> np.ndarray:
    codes = np.asarray(codes)
    if codes.shape != (j.x_card,):
        raise CoverageError(
            f"need one code per input symbol ({j.x_card}), got shape {codes.shape}"
        )
    px = j.p.sum(axis=1)
    bad = (codes < 0) & (px > 0)
    if np.any(bad):
        raise CoverageError(
            f"missing code for supported symbol x={int(np.argmax(bad))}"
        )
    return codes.astype(int)


def layer_mutual_information(j: JointDistribution, codes) -> tuple[float, float]:
    """(I(X;T), I(T;Y)) for a deterministic layer code T of X.

    I(X;T) equals H(T) because T is a function of X; both quantities come
    from the exact pushforward of the joint.
    """
    codes = _check_coverage(j, codes)
    safe = np.where(codes >= 0, codes, 0)
    n_codes = int(safe.max()) + 1
    px = j.p.sum(axis=1)
    pt = np.bincount(safe, weights=px, minlength=n_codes)
    pty = np.zeros((n_codes, j.y_card))
    np.add.at(pty, safe, j.p)
    return entropy_bits(pt), mi_bits(pty)


def _pair_mi(j: JointDistribution, codes_a, codes_b) -> tuple[float, float]:
    """(I(A;B), I(Y;(A,B))) for two deterministic codes of X."""
    a = np.asarray(codes_a, dtype=int)
    b = np.asarray(codes_b, dtype=int)
    px = j.p.sum(axis=1)
    na = int(a.max()) + 1
    nb = int(b.max()) + 1
    pab = np.zeros((na, nb))
    np.add.at(pab, (a, b), px)
    pair = a * nb + b
    p_pair_y = np.zeros((na * nb, j.y_card))
    np.add.at(p_pair_y, pair, j.p)
    return mi_bits(pab), mi_bits(p_pair_y)


def info_plane_path(j: JointDistribution, net: NetworkParams,
                    q: QuantizerConfig | None, beta: float = 1.0) -> LayerPath:
    """Information-plane points for X, every hidden layer, and the prediction.

    beta weights the conditional-relevance term of each layer's criterion;
    there is no principled per-layer choice, so it is caller-supplied (the
    command-line tool sweeps it).
    """
    acts = forward_all(net, j.x_card)
    layer_codes = [np.arange(j.x_card)]
    layer_codes += quantize_activations(acts, q)
    layer_codes.append(prediction_codes(acts))

    points = []
    for i, codes in enumerate(layer_codes):
        i_x, i_y = layer_mutual_information(j, codes)
        if i == 0:
            criterion = 0.0
        else:
            i_ab, i_y_pair = _pair_mi(j, layer_codes[i - 1], codes)
            # I(Y; prev | cur) = I(Y; prev, cur) - I(Y; cur)
            criterion = i_ab + beta * (i_y_pair - i_y)
        points.append(InfoPlanePoint(layer_index=i, I_X=i_x, I_Y=i_y,
                                     layer_criterion=criterion))
    return LayerPath(tuple(points), _dpi_violations(points))


def _dpi_violations(points) -> tuple[tuple[tuple[int, int], float], ...]:
    out = []
    for prev, cur in zip(points, points[1:]):
        rise = cur.I_Y - prev.I_Y
        if rise > DPI_TOL:
            out.append(((prev.layer_index, cur.layer_index), float(rise)))
    return tuple(out)


def dpi_check(path: LayerPath) -> tuple[tuple[tuple[int, int], float], ...]:
    """Adjacent layer pairs where relevance rises with depth beyond 1e-9.

    Exact activation-tuple codes can never appear here; binned codes can,
    because binning breaks the layer-to-layer functional chain, so findings
    are reported with their magnitude rather than raised.
    """
    return _dpi_violations(path.points)


def network_distortion_rate(j: JointDistribution, net: NetworkParams,
                            q: QuantizerConfig | None) -> tuple[float, float]:
    """(R_N, D_N) of the output layer: rate I(X;Yhat) and residual relevance
    I(X;Y) - I(Yhat;Y). The prediction is the exact argmax symbol, so the
    quantizer plays no role here; it is accepted for signature symmetry with
    the path computation."""
    del q
    acts = forward_all(net, j.x_card)
    codes = prediction_codes(acts)
    r_n, i_y = layer_mutual_information(j, codes)
    d_n = mi_bits(j.p) - i_y
    return r_n, d_n
