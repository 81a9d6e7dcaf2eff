"""Monthly energy forecasting with small neural nets, momentum training and fuzzy season inputs."""

from .errors import ForecastError
from .forecast import (EnergySeries, ForecastResult, WindowedDataset, build_windows, evaluate,
                       generate_synthetic, predict_multistep, predict_one_step, split_train_test)
from .nn_core import ElmanNet, Mlp, backprop, forward_elman, forward_mlp, numeric_gradient
from .pipeline import RunConfig, fit, sweep
from .preproc import MonthIndex, ScalerConfig, SeasonEncoding, scale, season_membership, unscale
from .trainer import TrainerConfig, TrainingReport, momentum_step, train

__all__ = [
    "ForecastError", "EnergySeries", "ForecastResult", "WindowedDataset", "build_windows",
    "evaluate", "generate_synthetic", "predict_multistep", "predict_one_step",
    "split_train_test", "ElmanNet", "Mlp", "backprop", "forward_elman", "forward_mlp",
    "numeric_gradient", "RunConfig", "fit", "sweep", "MonthIndex", "ScalerConfig",
    "SeasonEncoding", "scale", "season_membership", "unscale", "TrainerConfig",
    "TrainingReport", "momentum_step", "train",
]
__version__ = "0.1.0"
