"""Full-batch gradient descent with momentum.

Each parameter change blends the previous change with the current descent
direction::

    dX = mc * dX_prev + lr * (1 - mc) * g,    X <- X + dX

where ``g`` is the negative gradient of the batch MSE.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CongruenceError, DivergenceError, EmptyBatchError, ShapeError
from .nn_core import ElmanNet, elman_contexts, mse_and_gradient, step

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainerConfig:
    lr: float = 0.5
    mc: float = 0.9
    epochs: int = 20000
    goal_mse: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.lr > 0 and math.isfinite(self.lr)):
            raise ValueError(f"lr must be positive, got {self.lr}")
        if not 0.0 <= self.mc <= 1.0:
            raise ValueError(f"mc must lie in [0, 1], got {self.mc}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ValueError(f"epochs must be a positive integer, got {self.epochs}")
        if not self.goal_mse >= 0:
            raise ValueError(f"goal_mse must be >= 0, got {self.goal_mse}")


@dataclass
class MomentumState:
    """Previous change dX_prev for every parameter."""

    prev_update: list

    @classmethod
    def zeros_like(cls, params):
        return cls([np.zeros_like(np.asarray(p, dtype=float)) for p in params])


@dataclass
class TrainingReport:
    mse_per_epoch: list = field(default_factory=list)
    epochs_run: int = 0
    stopped_early: bool = False


def momentum_step(params, grads, state: MomentumState, lr: float, mc: float):
    """Apply one momentum update. ``grads`` are MSE gradients (ascent direction).

    Returns ``(new_params, new_state)``; inputs are not modified.
    """
    if not lr > 0:
        raise ValueError("lr must be positive")
    if not 0.0 <= mc <= 1.0:
        raise ValueError("mc must lie in [0, 1]")
    if not (len(params) == len(grads) == len(state.prev_update)):
        raise CongruenceError("params, grads and momentum state differ in length")
    new_params, updates = [], []
    for p, g, prev in zip(params, grads, state.prev_update):
        p = np.asarray(p, dtype=float)
        g = np.asarray(g, dtype=float)
        if not (p.shape == g.shape == np.shape(prev)):
            raise CongruenceError(f"shape mismatch: param {p.shape}, grad {g.shape}, "
                                  f"prev {np.shape(prev)}")
        dx = mc * prev + lr * (1 - mc) * (-g)
        new_params.append(p + dx)
        updates.append(dx)
    return new_params, MomentumState(updates)


def train(net, dataset, cfg: TrainerConfig):
    """Train ``net`` on a dataset; returns ``(trained_net, report)``.

    ``dataset`` is a WindowedDataset (anything with ``inputs`` and
    ``targets``) or an ``(inputs, targets)`` pair.

    Elman nets are reset at the start of every epoch and the rows are taken
    as one ordered sequence. The returned Elman net keeps the context left
    by a final pass over the rows, ready to continue the sequence.
    """
    if hasattr(dataset, "inputs"):
        inputs, targets = dataset.inputs, dataset.targets
    else:
        inputs, targets = dataset
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if inputs.shape[0] == 0 or targets.shape[0] == 0:
        raise EmptyBatchError("training set is empty")
    if inputs.shape[1] != net.n_inputs:
        raise ShapeError(f"net expects {net.n_inputs} inputs, dataset has {inputs.shape[1]}")
    if targets.shape[0] != inputs.shape[0]:
        raise ShapeError("inputs and targets differ in length")

    net = net.copy()
    is_elman = isinstance(net, ElmanNet)
    state = MomentumState.zeros_like(net.parameters())
    report = TrainingReport()
    for epoch in range(1, int(cfg.epochs) + 1):
        contexts = None
        if is_elman:
            net.reset()
            contexts = elman_contexts(net, inputs)
        with np.errstate(over="ignore", invalid="ignore"):
            perf, grads = mse_and_gradient(net, inputs, targets, contexts)
        if not math.isfinite(perf):
            raise DivergenceError(epoch, perf)
        report.mse_per_epoch.append(perf)
        report.epochs_run = epoch
        if perf <= cfg.goal_mse:
            report.stopped_early = epoch < cfg.epochs
            break
        params, state = momentum_step(net.parameters(), grads, state, cfg.lr, cfg.mc)
        net.set_parameters(params)
    if not all(np.all(np.isfinite(p)) for p in net.parameters()):
        raise DivergenceError(report.epochs_run, float("nan"))
    log.debug("trained %d epochs, final mse %.3g", report.epochs_run, report.mse_per_epoch[-1])

    if is_elman:
        net.reset()
        for x in inputs:
            step(net, x)
    return net, report


def mse(predictions, targets) -> float:
    predictions = np.asarray(predictions, dtype=float).reshape(-1)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if predictions.shape != targets.shape:
        raise ShapeError(f"length mismatch: {predictions.shape[0]} vs {targets.shape[0]}")
    if predictions.size == 0:
        raise EmptyBatchError("cannot take the MSE of empty sequences")
    return float(np.mean((predictions - targets) ** 2))
