"""Series-parallel windows, one-step and closed-loop multi-step forecasting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, EmptyBatchError, ShapeError
from .nn_core import ElmanNet, step
from .preproc import MonthIndex, ScalerConfig, SeasonEncoding, encode_season, scale, unscale
from .trainer import mse

DEFAULT_WINDOW = 4
DEFAULT_TRAIN_TARGETS = 14


@dataclass(frozen=True)
class EnergySeries:
    """Consecutive monthly MWh values starting at ``start``."""

    start: MonthIndex
    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise DomainError("an energy series needs at least one value")
        for i, v in enumerate(values):
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"value #{i} ({v}) must be finite and non-negative")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def months(self) -> list:
        return [self.start + i for i in range(len(self.values))]


@dataclass
class WindowedDataset:
    """Rows of ``window`` scaled lags (oldest first), optionally followed by (winter, summer)."""

    inputs: np.ndarray
    targets: np.ndarray
    target_months: list

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        self.targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if not (len(self.inputs) == len(self.targets) == len(self.target_months)):
            raise ShapeError("inputs, targets and target_months differ in length")

    def __len__(self):
        return len(self.targets)

    @property
    def width(self) -> int:
        return self.inputs.shape[1]


@dataclass
class ForecastResult:
    months: list
    scaled: list
    mwh: list
    mode: str

    def __len__(self):
        return len(self.months)


def _season_inputs(month, seasons, membership):
    if not seasons:
        return ()
    return encode_season(month, membership).as_tuple()


def build_windows(series: EnergySeries, scaler: ScalerConfig = ScalerConfig(),
                  window: int = DEFAULT_WINDOW, seasons: bool = True,
                  membership: Optional[Sequence[float]] = None) -> WindowedDataset:
    """One sample per month after the first ``window``: measured lags in, that month out.

    Season inputs belong to the target month.
    """
    if window < 1:
        raise DomainError("window must be at least 1")
    if len(series) <= window:
        raise DomainError(f"series of length {len(series)} is too short for window {window}")
    scaled = [scale(v, scaler) for v in series.values]
    months = series.months
    inputs, targets, target_months = [], [], []
    for t in range(window, len(scaled)):
        inputs.append([*scaled[t - window:t], *_season_inputs(months[t], seasons, membership)])
        targets.append(scaled[t])
        target_months.append(months[t])
    return WindowedDataset(np.array(inputs), np.array(targets), target_months)


def split_train_test(ds: WindowedDataset, train_targets: int = DEFAULT_TRAIN_TARGETS):
    if not 0 < train_targets < len(ds):
        raise DomainError(f"train_targets must lie in 1..{len(ds) - 1}, got {train_targets}")
    k = train_targets
    return (WindowedDataset(ds.inputs[:k], ds.targets[:k], ds.target_months[:k]),
            WindowedDataset(ds.inputs[k:], ds.targets[k:], ds.target_months[k:]))


def predict_one_step(net, lags: Sequence[float], season: Optional[SeasonEncoding] = None) -> float:
    """Forecast the next scaled value from measured lags. Elman nets commit their context."""
    x = list(lags)
    if season is not None:
        x += [season.winter, season.summer]
    if len(x) != net.n_inputs:
        raise ShapeError(f"net expects {net.n_inputs} inputs, got {len(x)}")
    return step(net, np.array(x, dtype=float))


def predict_multistep(net, seed_lags: Sequence[float], start: MonthIndex, horizon: int,
                      scaler: ScalerConfig = ScalerConfig(), seasons: Optional[bool] = None,
                      membership: Optional[Sequence[float]] = None) -> ForecastResult:
    """Closed-loop forecast: each prediction is fed back as the newest lag.

    ``start`` is the month of the first prediction. Whether season inputs are
    used is inferred from the net's input width unless ``seasons`` is given.
    """
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    buf = [float(v) for v in seed_lags]
    if seasons is None:
        seasons = net.n_inputs == len(buf) + 2
    months, out = [], []
    month = start
    for _ in range(int(horizon)):
        season = encode_season(month, membership) if seasons else None
        y = predict_one_step(net, buf, season)
        months.append(month)
        out.append(y)
        buf = buf[1:] + [y]
        month = month + 1
    return ForecastResult(months, out, [unscale(y, scaler) for y in out], "multi-step")


def predict_series(net, ds: WindowedDataset, scaler: ScalerConfig = ScalerConfig()) -> ForecastResult:
    """One-step predictions for every row of ``ds`` (series-parallel mode)."""
    preds = [step(net, x) for x in ds.inputs]
    return ForecastResult(list(ds.target_months), preds,
                          [unscale(y, scaler) for y in preds], "one-step")


def evaluate(net, ds: WindowedDataset):
    """Scaled-domain MSE and residuals (prediction - target) of one-step forecasts."""
    if len(ds) == 0:
        raise EmptyBatchError("cannot evaluate on an empty dataset")
    preds = np.array([step(net, x) for x in ds.inputs])
    return mse(preds, ds.targets), list(preds - ds.targets)


def warm_up(net, ds: WindowedDataset):
    """Reset an Elman net and run it over ``ds`` so its context is warm. No-op for MLPs."""
    if isinstance(net, ElmanNet):
        net.reset()
        for x in ds.inputs:
            step(net, x)
    return net


def generate_synthetic(base: float = 250000.0, amplitude: float = 60000.0, trend: float = 0.0,
                       noise_sd: float = 0.0, months: int = 22, seed: int = 0,
                       start: MonthIndex = MonthIndex(1)) -> EnergySeries:
    """Seasonal series peaking in January: base + amplitude*cos + trend*t + noise, clamped at 0.

    ``t`` counts months from ``start`` (0 for the first value).
    """
    if not base > amplitude >= 0:
        raise DomainError("need base > amplitude >= 0")
    if months < 6:
        raise DomainError("need at least 6 months")
    if noise_sd < 0:
        raise DomainError("noise_sd must be non-negative")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_sd, size=months) if noise_sd > 0 else np.zeros(months)
    values = []
    for t in range(months):
        c = (start + t).calendar_month
        v = base + amplitude * math.cos(2 * math.pi * (c - 1) / 12) + trend * t + noise[t]
        values.append(max(v, 0.0))
    return EnergySeries(start, tuple(values))
