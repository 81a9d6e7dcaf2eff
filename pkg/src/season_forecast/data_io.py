"""CSV series/forecast files, JSON model files and key-value config files."""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ModelFormatError, ParseError
from .forecast import DEFAULT_WINDOW, EnergySeries, ForecastResult
from .nn_core import ElmanNet, Mlp
from .preproc import DEFAULT_FACTOR, MonthIndex, validate_membership
from .pipeline import RunConfig
from .trainer import TrainingReport

SERIES_HEADER = ["year", "month", "value_mwh"]
FORECAST_HEADER = ["year", "month", "scaled", "mwh", "mode"]
REPORT_HEADER = ["epoch", "mse"]
MODEL_FORMAT_VERSION = 1
CONFIG_ENV = "SEASON_FORECAST_CONFIG"


def _fmt(x: float) -> str:
    # repr is the shortest string that parses back to the same double
    return repr(float(x))


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path) from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc}", path) from exc


def _write_text(path, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"{path}: cannot write: {exc}") from exc


def _rows(path, header):
    text = _read_text(path)
    reader = csv.reader(io.StringIO(text))
    rows = [(i, r) for i, r in enumerate(reader, 1) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("file is empty", path, 1)
    line, first = rows[0]
    if [c.strip().lower() for c in first] != header:
        raise ParseError(f"expected header {','.join(header)!r}", path, line)
    return rows[1:]


def load_series(path) -> EnergySeries:
    """Read a ``year,month,value_mwh`` CSV of consecutive months."""
    rows = _rows(path, SERIES_HEADER)
    if not rows:
        raise ParseError("no data rows", path)
    values = []
    start = prev = None
    for line, row in rows:
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", path, line)
        try:
            year, month, value = int(row[0]), int(row[1]), float(row[2])
        except ValueError:
            raise ParseError(f"cannot parse row {row!r}", path, line) from None
        try:
            m = MonthIndex.from_year_month(year, month)
        except DomainError as exc:
            raise ParseError(str(exc), path, line) from None
        if not math.isfinite(value) or value < 0:
            raise ParseError(f"value {row[2]!r} must be finite and non-negative", path, line)
        if prev is not None and m != prev + 1:
            raise ParseError(f"month gap: {m} does not follow {prev}", path, line)
        if start is None:
            start = m
        prev = m
        values.append(value)
    return EnergySeries(start, tuple(values))


def save_series(series: EnergySeries, path):
    lines = [",".join(SERIES_HEADER)]
    for m, v in zip(series.months, series.values):
        lines.append(f"{m.year},{m.calendar_month},{_fmt(v)}")
    _write_text(path, "\n".join(lines) + "\n")


def save_forecast(result: ForecastResult, path):
    if len(result) == 0:
        raise DomainError("refusing to write an empty forecast")
    lines = [",".join(FORECAST_HEADER)]
    for m, s, w in zip(result.months, result.scaled, result.mwh):
        lines.append(f"{m.year},{m.calendar_month},{_fmt(s)},{_fmt(w)},{result.mode}")
    _write_text(path, "\n".join(lines) + "\n")


def load_forecast(path) -> ForecastResult:
    months, scaled, mwh, modes = [], [], [], set()
    for line, row in _rows(path, FORECAST_HEADER):
        try:
            months.append(MonthIndex.from_year_month(int(row[0]), int(row[1])))
            scaled.append(float(row[2]))
            mwh.append(float(row[3]))
            modes.add(row[4].strip())
        except (ValueError, IndexError, DomainError):
            raise ParseError(f"cannot parse row {row!r}", path, line) from None
    if len(modes) > 1:
        raise ParseError(f"mixed modes {sorted(modes)}", path)
    return ForecastResult(months, scaled, mwh, modes.pop() if modes else "one-step")


def save_report(report: TrainingReport, path):
    lines = [",".join(REPORT_HEADER)]
    lines += [f"{i},{_fmt(v)}" for i, v in enumerate(report.mse_per_epoch, 1)]
    _write_text(path, "\n".join(lines) + "\n")


@dataclass
class ModelFile:
    """Everything needed to reproduce predictions from a trained net."""

    net: Mlp
    scaler_factor: float = DEFAULT_FACTOR
    membership: Optional[tuple] = None
    window: int = DEFAULT_WINDOW
    seasons: bool = True
    trainer: dict = field(default_factory=dict)
    format_version: int = MODEL_FORMAT_VERSION

    @property
    def kind(self) -> str:
        return "elman" if isinstance(self.net, ElmanNet) else "mlp"


def save_model(model: ModelFile, path):
    net = model.net
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "layer_sizes": net.layer_sizes,
        "parameters": [float(v) for p in net.parameters() for v in p.ravel()],
        "scaler_factor": float(model.scaler_factor),
        "membership": None if model.membership is None else list(model.membership),
        "window": model.window,
        "seasons": model.seasons,
        "trainer": model.trainer,
    }
    if isinstance(net, ElmanNet):
        doc["context"] = [float(v) for v in net.context]
    _write_text(path, json.dumps(doc, indent=1) + "\n")


def _param_shapes(kind, sizes):
    shapes = [(o, i) for i, o in zip(sizes[:-1], sizes[1:])]
    shapes += [(o,) for o in sizes[1:]]
    if kind == "elman":
        shapes.append((sizes[1], sizes[1]))
    return shapes


def load_model(path, expect_kind: Optional[str] = None) -> ModelFile:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid model file: {exc.msg}", path, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model file must hold a JSON object", path)
    try:
        version = doc["format_version"]
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported format_version {version!r}", path)
        kind = doc["kind"]
        if kind not in ("mlp", "elman"):
            raise ModelFormatError(f"unknown network kind {kind!r}", path)
        if expect_kind is not None and kind != expect_kind:
            raise ModelFormatError(f"model is {kind!r}, expected {expect_kind!r}", path)
        sizes = [int(s) for s in doc["layer_sizes"]]
        flat = np.array(doc["parameters"], dtype=float)
        shapes = _param_shapes(kind, sizes)
        need = sum(int(np.prod(s)) for s in shapes)
        if flat.size != need:
            raise ModelFormatError(f"topology {sizes} needs {need} parameters, "
                                   f"file has {flat.size}", path)
        params, k = [], 0
        for s in shapes:
            n = int(np.prod(s))
            params.append(flat[k:k + n].reshape(s))
            k += n
        n = len(sizes) - 1
        if kind == "elman":
            net = ElmanNet(params[:n], params[n:2 * n], recurrent_weights=params[2 * n],
                           context=doc.get("context"))
        else:
            net = Mlp(params[:n], params[n:])
        membership = doc.get("membership")
        if membership is not None:
            membership = validate_membership(membership)
        return ModelFile(net, float(doc["scaler_factor"]), membership, int(doc["window"]),
                         bool(doc["seasons"]), dict(doc.get("trainer") or {}), version)
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc!r}", path) from None


def _parse_sizes(text: str) -> tuple:
    sizes = tuple(int(s) for s in text.replace("x", ",").split(",") if s.strip())
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"invalid hidden sizes {text!r}")
    return sizes


_CONVERTERS = {
    "lr": float, "mc": float, "epochs": int, "goal_mse": float, "seed": int,
    "factor": float, "window": int, "train_targets": int,
    "hidden": _parse_sizes,
    "membership": lambda s: validate_membership(float(v) for v in s.split(",")),
    "kind": lambda s: {"mlp": "mlp", "elman": "elman"}[s.strip().lower()],
}


def load_config(path) -> RunConfig:
    """Parse ``key = value`` lines (an optional ``[section]`` header is ignored)."""
    text = _read_text(path)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[__top__]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ParseError(f"invalid config: {exc}", path) from None
    cfg = RunConfig()
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = key.strip().lower().replace("-", "_")
            try:
                if key == "seasons":
                    value = parser.getboolean(section, key)
                elif key in _CONVERTERS:
                    value = _CONVERTERS[key](raw)
                else:
                    raise ParseError(f"unknown key {key!r}", path, _find_line(text, key))
            except (ValueError, KeyError, DomainError) as exc:
                raise ParseError(f"bad value for {key!r}: {raw!r} ({exc})", path,
                                 _find_line(text, key)) from None
            setattr(cfg, key, value)
    return cfg


def _find_line(text, key):
    for i, line in enumerate(text.splitlines(), 1):
        if line.strip().lower().replace("-", "_").startswith(key):
            return i
    return None


def resolve_config_path(flag_value) -> Optional[str]:
    return flag_value or os.environ.get(CONFIG_ENV) or None
