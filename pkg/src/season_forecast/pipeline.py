"""End-to-end fitting: windows, 14/4 split, training, held-out evaluation."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .forecast import (DEFAULT_TRAIN_TARGETS, DEFAULT_WINDOW, EnergySeries, WindowedDataset,
                       build_windows, evaluate, split_train_test)
from .nn_core import DEFAULT_HIDDEN, ElmanNet, Mlp
from .preproc import DEFAULT_FACTOR, ScalerConfig
from .trainer import TrainerConfig, TrainingReport, train


@dataclass
class RunConfig:
    """Settings shared by the CLI commands; field names are the config-file keys."""

    lr: float = TrainerConfig.lr
    mc: float = TrainerConfig.mc
    epochs: int = TrainerConfig.epochs
    goal_mse: float = TrainerConfig.goal_mse
    seed: int = TrainerConfig.seed
    factor: float = DEFAULT_FACTOR
    membership: Optional[tuple] = None
    window: int = DEFAULT_WINDOW
    train_targets: int = DEFAULT_TRAIN_TARGETS
    hidden: tuple = DEFAULT_HIDDEN
    kind: str = "mlp"
    seasons: bool = True

    def trainer_config(self) -> TrainerConfig:
        return TrainerConfig(self.lr, self.mc, self.epochs, self.goal_mse, self.seed)

    def scaler(self) -> ScalerConfig:
        return ScalerConfig(self.factor)

    def as_dict(self):
        return asdict(self)


@dataclass
class FitResult:
    net: Mlp
    report: TrainingReport
    train: WindowedDataset
    test: WindowedDataset
    train_mse: float
    test_mse: float


def make_net(cfg: RunConfig, n_inputs: int):
    sizes = [n_inputs, *cfg.hidden, 1]
    cls = ElmanNet if cfg.kind == "elman" else Mlp
    return cls.initialize(sizes, seed=cfg.seed)


def fit(series: EnergySeries, cfg: RunConfig) -> FitResult:
    """Train on the first ``train_targets`` windows and score the rest one step ahead.

    Elman nets reach the test windows with the context left by the training
    span, so held-out scoring continues the sequence.
    """
    ds = build_windows(series, cfg.scaler(), cfg.window, cfg.seasons, cfg.membership)
    train_ds, test_ds = split_train_test(ds, cfg.train_targets)
    net, report = train(make_net(cfg, ds.width), train_ds, cfg.trainer_config())

    scorer = net.copy()
    if isinstance(scorer, ElmanNet):
        scorer.reset()
    train_mse, _ = evaluate(scorer, train_ds)
    test_mse, _ = evaluate(scorer, test_ds)
    return FitResult(net, report, train_ds, test_ds, train_mse, test_mse)


@dataclass(frozen=True)
class SweepRow:
    topology: tuple
    train_mse: float
    test_mse: float

    @property
    def label(self) -> str:
        return "-".join(str(s) for s in self.topology)


def _sweep_one(args):
    series, cfg = args
    res = fit(series, cfg)
    return SweepRow(tuple(res.net.layer_sizes), res.train_mse, res.test_mse)


def sweep(series: EnergySeries, cfg: RunConfig, hidden_sizes: Sequence[tuple],
          jobs: int = 1) -> list:
    """Fit each hidden topology with identical seed and settings; rows sorted by test MSE."""
    if len(hidden_sizes) < 2:
        raise ValueError("a sweep needs at least two topologies")
    tasks = [(series, RunConfig(**{**cfg.as_dict(), "hidden": tuple(h)})) for h in hidden_sizes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    return sorted(rows, key=lambda r: r.test_mse)
