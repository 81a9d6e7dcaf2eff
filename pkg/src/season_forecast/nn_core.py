"""Feed-forward and Elman networks with tanh hidden layers and a linear output.

Parameters of a network are exposed as a flat list of arrays via
``net.parameters()`` (weights, then biases, then the recurrent matrix for
Elman nets).  Gradients use the same ordering, so a gradient is simply a
list of arrays congruent with ``net.parameters()``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyBatchError, ShapeError

DEFAULT_HIDDEN = (8, 4)
INIT_RANGE = 0.5

# list of arrays, same order and shapes as net.parameters()
GradientVector = list


def tanh_act(x):
    """Hyperbolic tangent sigmoid transfer function (scalar or array)."""
    return np.tanh(x)


@dataclass
class Mlp:
    """Layered feed-forward net: tanh on every hidden layer, linear output.

    ``weights[i]`` has shape (out, in) and maps layer i to layer i+1.
    """

    weights: list
    biases: list

    def __post_init__(self):
        self.weights = [np.array(w, dtype=float) for w in self.weights]
        self.biases = [np.array(b, dtype=float).reshape(-1) for b in self.biases]
        if not self.weights or len(self.weights) != len(self.biases):
            raise ShapeError("need one bias vector per weight matrix")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or w.shape[0] != b.shape[0]:
                raise ShapeError(f"layer {i}: weight {w.shape} and bias {b.shape} disagree")
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise ShapeError(f"layer {i}: expects {w.shape[1]} inputs, "
                                 f"previous layer has {self.weights[i - 1].shape[0]}")
        if self.weights[-1].shape[0] != 1:
            raise ShapeError("output layer must have exactly one unit")
        for p in self.parameters():
            if not np.all(np.isfinite(p)):
                raise ValueError("network parameters must be finite")

    @classmethod
    def initialize(cls, layer_sizes: Sequence[int], seed: int = 0, **kwargs):
        """Uniform [-0.5, 0.5] weights and zero biases, seeded."""
        sizes = [int(s) for s in layer_sizes]
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise ShapeError(f"invalid layer sizes {layer_sizes!r}")
        rng = np.random.default_rng(seed)
        weights = [rng.uniform(-INIT_RANGE, INIT_RANGE, size=(o, i))
                   for i, o in zip(sizes[:-1], sizes[1:])]
        biases = [np.zeros(o) for o in sizes[1:]]
        return cls(weights, biases, **cls._init_extra(rng, sizes), **kwargs)

    @staticmethod
    def _init_extra(rng, sizes):
        return {}

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def activations(self) -> list[str]:
        return ["tanh"] * (len(self.weights) - 1) + ["linear"]

    @property
    def n_inputs(self) -> int:
        return self.weights[0].shape[1]

    def parameters(self) -> list:
        return [*self.weights, *self.biases]

    def with_parameters(self, params: Sequence[np.ndarray]):
        """Copy of this net with its parameters replaced (same order as parameters())."""
        n = len(self.weights)
        return Mlp(list(params[:n]), list(params[n:2 * n]))

    def set_parameters(self, params):
        """Replace parameters in place, without validation (trusted callers only)."""
        n = len(self.weights)
        self.weights = list(params[:n])
        self.biases = list(params[n:2 * n])

    def copy(self):
        return self.with_parameters([p.copy() for p in self.parameters()])


@dataclass
class ElmanNet(Mlp):
    """Mlp whose first hidden layer also sees its own previous activations.

    ``context`` is mutable state: callers commit it during sequential
    processing and leave it alone for gradient checks.
    """

    recurrent_weights: Optional[np.ndarray] = None
    context: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        super().__post_init__()
        if len(self.weights) < 2:
            raise ShapeError("an Elman net needs at least one hidden layer")
        h1 = self.weights[0].shape[0]
        if self.recurrent_weights is None:
            self.recurrent_weights = np.zeros((h1, h1))
        self.recurrent_weights = np.array(self.recurrent_weights, dtype=float)
        if self.recurrent_weights.shape != (h1, h1):
            raise ShapeError(f"recurrent weights must be {h1}x{h1}, "
                             f"got {self.recurrent_weights.shape}")
        if not np.all(np.isfinite(self.recurrent_weights)):
            raise ValueError("network parameters must be finite")
        if self.context is None:
            self.context = np.zeros(h1)
        self.context = np.array(self.context, dtype=float).reshape(-1)
        if self.context.shape != (h1,):
            raise ShapeError(f"context must have length {h1}")

    @staticmethod
    def _init_extra(rng, sizes):
        h1 = sizes[1]
        return {"recurrent_weights": rng.uniform(-INIT_RANGE, INIT_RANGE, size=(h1, h1))}

    def parameters(self) -> list:
        return [*self.weights, *self.biases, self.recurrent_weights]

    def with_parameters(self, params):
        n = len(self.weights)
        return ElmanNet(list(params[:n]), list(params[n:2 * n]),
                        recurrent_weights=params[2 * n], context=self.context.copy())

    def set_parameters(self, params):
        super().set_parameters(params)
        self.recurrent_weights = params[2 * len(self.weights)]

    def reset(self):
        self.context = np.zeros_like(self.context)


def _check_input(net, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != net.n_inputs:
        raise ShapeError(f"expected input of length {net.n_inputs}, got shape {x.shape}")
    return x


def forward_batch(net: Mlp, inputs: np.ndarray, contexts: Optional[np.ndarray] = None) -> list:
    """Run a batch of rows through the net.

    Returns every layer's activations, ``[inputs, h1, ..., output]``.
    ``contexts`` (one row per sample) feeds the first hidden layer through
    the recurrent matrix and is ignored for plain MLPs.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    if inputs.shape[1] != net.n_inputs:
        raise ShapeError(f"expected {net.n_inputs} input columns, got {inputs.shape[1]}")
    acts = [inputs]
    a = inputs
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        if i == 0 and contexts is not None and isinstance(net, ElmanNet):
            z = z + contexts @ net.recurrent_weights.T
        a = z if i == last else tanh_act(z)
        acts.append(a)
    return acts


def forward_mlp(net: Mlp, x) -> tuple[float, list]:
    """Single-sample forward pass; returns (output, per-layer activations)."""
    x = _check_input(net, x)
    acts = forward_batch(net, x[None, :])
    return float(acts[-1][0, 0]), [a[0] for a in acts]


def forward_elman(net: ElmanNet, x) -> tuple[float, np.ndarray]:
    """One Elman step from the stored context. Does not commit the new context."""
    x = _check_input(net, x)
    acts = forward_batch(net, x[None, :], net.context[None, :])
    return float(acts[-1][0, 0]), acts[1][0].copy()


def step(net: Mlp, x) -> float:
    """Forward one sample, committing the Elman context if there is one."""
    if isinstance(net, ElmanNet):
        y, net.context = forward_elman(net, x)
        return y
    return forward_mlp(net, x)[0]


def elman_contexts(net: ElmanNet, inputs: np.ndarray) -> np.ndarray:
    """Context seen by each row when ``inputs`` are processed in order from net.context.

    Row t is the first-hidden activation after step t-1. Nothing is committed.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    contexts = np.empty((inputs.shape[0], net.context.shape[0]))
    c = net.context.copy()
    w0, b0, r = net.weights[0], net.biases[0], net.recurrent_weights
    for t, x in enumerate(inputs):
        contexts[t] = c
        c = tanh_act(w0 @ x + r @ c + b0)
    return contexts


def _as_arrays(net, batch):
    if isinstance(batch, tuple) and len(batch) == 2 and isinstance(batch[0], np.ndarray) \
            and batch[0].ndim == 2:
        inputs, targets = batch
    else:
        batch = list(batch)
        if not batch:
            raise EmptyBatchError("batch is empty")
        inputs = np.array([np.asarray(x, dtype=float) for x, _ in batch])
        targets = np.array([float(t) for _, t in batch])
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if inputs.shape[0] == 0:
        raise EmptyBatchError("batch is empty")
    if inputs.ndim != 2 or inputs.shape[1] != net.n_inputs:
        raise ShapeError(f"expected inputs of width {net.n_inputs}, got shape {inputs.shape}")
    if targets.shape[0] != inputs.shape[0]:
        raise ShapeError("inputs and targets differ in length")
    return inputs, targets


def batch_mse(net: Mlp, inputs, targets, contexts=None) -> float:
    out = forward_batch(net, inputs, contexts)[-1][:, 0]
    return float(np.mean((out - targets) ** 2))


def mse_and_gradient(net: Mlp, inputs, targets, contexts=None) -> tuple[float, GradientVector]:
    """Batch MSE and its gradient with respect to every parameter.

    For Elman nets the ``contexts`` rows are treated as constant inputs
    (one-step truncated gradient).
    """
    acts = forward_batch(net, inputs, contexts)
    n = acts[0].shape[0]
    resid = acts[-1][:, 0] - targets
    perf = float(np.mean(resid ** 2))

    n_layers = len(net.weights)
    gw = [None] * n_layers
    gb = [None] * n_layers
    delta = (2.0 / n) * resid[:, None]
    for i in range(n_layers - 1, -1, -1):
        gw[i] = delta.T @ acts[i]
        gb[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i]) * (1.0 - acts[i] ** 2)
            if i == 1:
                delta_first = delta
    grads = [*gw, *gb]
    if isinstance(net, ElmanNet):
        if contexts is None:
            grads.append(np.zeros_like(net.recurrent_weights))
        else:
            grads.append(delta_first.T @ contexts)
    return perf, grads


def backprop(net: Mlp, batch) -> GradientVector:
    """Gradient of the batch-mean squared error for every parameter.

    ``batch`` is a sequence of (input, target) pairs or an ``(inputs, targets)``
    array pair.  Elman nets process the batch in order starting from their
    stored context; contexts are frozen inputs for differentiation.
    """
    inputs, targets = _as_arrays(net, batch)
    contexts = elman_contexts(net, inputs) if isinstance(net, ElmanNet) else None
    return mse_and_gradient(net, inputs, targets, contexts)[1]


def numeric_gradient(net: Mlp, batch, eps: float = 1e-5) -> GradientVector:
    """Central-difference estimate of the batch-MSE gradient (test oracle)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    inputs, targets = _as_arrays(net, batch)
    contexts = elman_contexts(net, inputs) if isinstance(net, ElmanNet) else None
    base = [p.copy() for p in net.parameters()]
    grads = []
    for k, p in enumerate(base):
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            params = [q.copy() for q in base]
            params[k][idx] = p[idx] + eps
            up = batch_mse(net.with_parameters(params), inputs, targets, contexts)
            params[k][idx] = p[idx] - eps
            down = batch_mse(net.with_parameters(params), inputs, targets, contexts)
            g[idx] = (up - down) / (2 * eps)
        grads.append(g)
    return grads
