"""Small feedforward networks in plain numpy.

ReLU hidden layers, identity output, mean-squared-error loss, Adam, and a
central-difference gradient check. Everything takes an explicit rng or seed;
there is no hidden global state.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class MlpSpec:
    """Layer widths from input to output, e.g. (24, 32, 64, 64, 3)."""

    layer_sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least an input and an output layer")
        if any(n < 1 for n in self.layer_sizes):
            raise ValueError(f"layer sizes must be positive: {self.layer_sizes}")


@dataclass
class MlpParams:
    """Weights are (n_out, n_in) per layer; biases are (n_out,)."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.weights + self.biases])


def init_params(spec: MlpSpec, seed: int) -> MlpParams:
    """Uniform +-1/sqrt(fan_in) weights, zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for n_in, n_out in zip(spec.layer_sizes, spec.layer_sizes[1:]):
        bound = 1.0 / np.sqrt(n_in)
        weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
        biases.append(np.zeros(n_out))
    return MlpParams(weights, biases)


def _as_batch(x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x[None, :], True
    if x.ndim == 2:
        return x, False
    raise ValueError(f"input must be 1-D or 2-D, got shape {x.shape}")


def _trace(params: MlpParams, x: np.ndarray) -> list[np.ndarray]:
    """Activations per layer, starting with the input batch."""
    acts = [x]
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = acts[-1] @ w.T + b
        acts.append(z if i == last else np.maximum(z, 0.0))
    return acts


def forward(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Network output for a single vector or a (batch, n_in) matrix."""
    batch, squeeze = _as_batch(x)
    if batch.shape[1] != params.weights[0].shape[1]:
        raise ValueError(
            f"input width {batch.shape[1]} != first layer fan-in "
            f"{params.weights[0].shape[1]}"
        )
    out = _trace(params, batch)[-1]
    return out[0] if squeeze else out


def backward(
    params: MlpParams, x: np.ndarray, grad_out: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Backpropagate dLoss/dOutput through the net.

    Returns (weight_grads, bias_grads) with the same shapes as the params,
    summed over the batch.
    """
    batch, squeeze = _as_batch(x)
    g, _ = _as_batch(grad_out)
    acts = _trace(params, batch)
    if g.shape != acts[-1].shape:
        raise ValueError(f"grad_out shape {g.shape} != output shape {acts[-1].shape}")
    dws = [np.zeros_like(w) for w in params.weights]
    dbs = [np.zeros_like(b) for b in params.biases]
    delta = g
    for i in range(len(params.weights) - 1, -1, -1):
        if i < len(params.weights) - 1:
            delta = delta * (acts[i + 1] > 0.0)
        dws[i] = delta.T @ acts[i]
        dbs[i] = delta.sum(axis=0)
        delta = delta @ params.weights[i]
    return dws, dbs


def mse(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error and its gradient 2*(pred - target)/n w.r.t. pred."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    diff = pred - target
    n = diff.size
    return float(np.mean(diff * diff)), 2.0 * diff / n


@dataclass
class AdamState:
    """Adam with bias correction; moments live here, params stay outside."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m_w: list[np.ndarray] = field(default_factory=list)
    v_w: list[np.ndarray] = field(default_factory=list)
    m_b: list[np.ndarray] = field(default_factory=list)
    v_b: list[np.ndarray] = field(default_factory=list)

    def _ensure(self, params: MlpParams) -> None:
        if not self.m_w:
            self.m_w = [np.zeros_like(w) for w in params.weights]
            self.v_w = [np.zeros_like(w) for w in params.weights]
            self.m_b = [np.zeros_like(b) for b in params.biases]
            self.v_b = [np.zeros_like(b) for b in params.biases]


def adam_step(
    state: AdamState,
    params: MlpParams,
    grads: tuple[list[np.ndarray], list[np.ndarray]],
) -> MlpParams:
    """One Adam update. Advances the state in place, returns fresh params."""
    state._ensure(params)
    state.t += 1
    dws, dbs = grads
    c1 = 1.0 - state.beta1**state.t
    c2 = 1.0 - state.beta2**state.t
    new = params.copy()
    for arrs, ms, vs, gs in (
        (new.weights, state.m_w, state.v_w, dws),
        (new.biases, state.m_b, state.v_b, dbs),
    ):
        for a, m, v, g in zip(arrs, ms, vs, gs):
            m *= state.beta1
            m += (1.0 - state.beta1) * g
            v *= state.beta2
            v += (1.0 - state.beta2) * g * g
            a -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    return new


def gradient_check(
    spec: MlpSpec, seed: int, h: float = 1e-5, backward_fn=backward
) -> float:
    """Largest relative disagreement between backprop and central differences.

    The probe is an MSE loss on one random input/target pair drawn from the
    seed. A healthy implementation lands well under 1e-4.
    """
    rng = np.random.default_rng(seed)
    params = init_params(spec, seed)
    x = rng.normal(size=spec.layer_sizes[0])
    target = rng.normal(size=spec.layer_sizes[-1])

    def loss(p: MlpParams) -> float:
        return mse(forward(p, x), target)[0]

    _, grad_out = mse(forward(params, x), target)
    dws, dbs = backward_fn(params, x, grad_out)
    analytic = np.concatenate([a.ravel() for a in dws + dbs])

    numeric = np.empty_like(analytic)
    idx = 0
    for arr in params.weights + params.biases:
        flat = arr.ravel()
        for j in range(flat.size):
            keep = flat[j]
            flat[j] = keep + h
            up = loss(params)
            flat[j] = keep - h
            down = loss(params)
            flat[j] = keep
            numeric[idx] = (up - down) / (2.0 * h)
            idx += 1

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-4)
    return float(np.max(np.abs(analytic - numeric) / denom))


def save_checkpoint(params: MlpParams, path) -> None:
    """Versioned CSV dump; floats go through repr so loads are bitwise."""
    with open(path, "w", newline="") as fh:
        fh.write("# mlp-checkpoint v1\n")
        sizes = [params.weights[0].shape[1]] + [w.shape[0] for w in params.weights]
        fh.write("layers," + ",".join(str(n) for n in sizes) + "\n")
        w = csv.writer(fh)
        for li, arr in enumerate(params.weights):
            for (i, j), v in np.ndenumerate(arr):
                w.writerow(["w", li, i, j, repr(float(v))])
        for li, arr in enumerate(params.biases):
            for (i,), v in np.ndenumerate(arr):
                w.writerow(["b", li, i, 0, repr(float(v))])


def load_checkpoint(path) -> MlpParams:
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != "# mlp-checkpoint v1":
            raise ValueError(f"not a recognised checkpoint: {header!r}")
        sizes = [int(n) for n in fh.readline().strip().split(",")[1:]]
        spec = MlpSpec(tuple(sizes))
        params = MlpParams(
            [np.zeros((o, i)) for i, o in zip(spec.layer_sizes, spec.layer_sizes[1:])],
            [np.zeros(o) for o in spec.layer_sizes[1:]],
        )
        for kind, li, i, j, v in csv.reader(fh):
            if kind == "w":
                params.weights[int(li)][int(i), int(j)] = float(v)
            else:
                params.biases[int(li)][int(i)] = float(v)
    return params
