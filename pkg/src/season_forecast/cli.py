"""Command-line driver: synth, train, predict, multistep, sweep."""

from __future__ import annotations

import argparse
import logging
import sys

from . import data_io
from .errors import ForecastError
from .forecast import build_windows, generate_synthetic, predict_multistep, predict_series
from .nn_core import ElmanNet
from .pipeline import RunConfig, fit, sweep
from .preproc import MonthIndex, ScalerConfig, scale

log = logging.getLogger("season_forecast")

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sizes(text):
    try:
        return data_io._parse_sizes(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _size_list(text):
    return [_sizes(part) for part in text.split(";") if part.strip()]


def _add_run_flags(p):
    g = p.add_argument_group("run settings (override the config file)")
    g.add_argument("--config", help="key=value config file (default: $%s)" % data_io.CONFIG_ENV)
    g.add_argument("--lr", type=float)
    g.add_argument("--mc", type=float)
    g.add_argument("--epochs", type=int)
    g.add_argument("--goal-mse", dest="goal_mse", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--factor", type=float, help="scale factor in MWh (default 5e5)")
    g.add_argument("--window", type=int)
    g.add_argument("--train-targets", dest="train_targets", type=int)
    g.add_argument("--hidden", type=_sizes, help="hidden layer sizes, e.g. 8,4")
    g.add_argument("--kind", choices=["mlp", "elman"])
    seasons = g.add_mutually_exclusive_group()
    seasons.add_argument("--with-seasons", dest="seasons", action="store_const", const=True)
    seasons.add_argument("--no-seasons", dest="seasons", action="store_const", const=False)


def _run_config(args) -> RunConfig:
    path = data_io.resolve_config_path(args.config)
    cfg = data_io.load_config(path) if path else RunConfig()
    for key in RunConfig.__dataclass_fields__:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    cfg.trainer_config()
    cfg.scaler()
    return cfg


def cmd_synth(args):
    start = MonthIndex.from_year_month(args.start_year, args.start_month)
    series = generate_synthetic(args.base, args.amplitude, args.trend, args.noise_sd,
                                args.months, args.seed, start)
    data_io.save_series(series, args.out)


def cmd_train(args):
    cfg = _run_config(args)
    series = data_io.load_series(args.series)
    res = fit(series, cfg)
    model = data_io.ModelFile(res.net, cfg.factor, cfg.membership, cfg.window, cfg.seasons,
                              {k: getattr(cfg.trainer_config(), k)
                               for k in ("lr", "mc", "epochs", "goal_mse", "seed")})
    if args.report:
        data_io.save_report(res.report, args.report)
    data_io.save_model(model, args.out)
    print(f"inputs={res.net.n_inputs} epochs={res.report.epochs_run} "
          f"train_mse={res.train_mse:.6g} test_mse={res.test_mse:.6g}")


def _load_for_prediction(args):
    model = data_io.load_model(args.model)
    series = data_io.load_series(args.series)
    if isinstance(model.net, ElmanNet):
        model.net.reset()
    return model, series


def cmd_predict(args):
    model, series = _load_for_prediction(args)
    scaler = ScalerConfig(model.scaler_factor)
    ds = build_windows(series, scaler, model.window, model.seasons, model.membership)
    data_io.save_forecast(predict_series(model.net, ds, scaler), args.out)


def cmd_multistep(args):
    if args.horizon < 1:
        raise UsageError(f"--horizon must be >= 1, got {args.horizon}")
    model, series = _load_for_prediction(args)
    if len(series) < model.window:
        raise ForecastError(f"series has {len(series)} months; the model needs "
                            f"{model.window} seed values")
    scaler = ScalerConfig(model.scaler_factor)
    seed = [scale(v, scaler) for v in series.values[:model.window]]
    result = predict_multistep(model.net, seed, series.start + model.window, args.horizon,
                               scaler, model.seasons, model.membership)
    data_io.save_forecast(result, args.out)


def cmd_sweep(args):
    cfg = _run_config(args)
    if len(args.hidden_sizes) < 2:
        raise UsageError("--hidden-sizes needs at least two topologies")
    series = data_io.load_series(args.series)
    rows = sweep(series, cfg, args.hidden_sizes, jobs=args.jobs)
    lines = ["topology,train_mse,test_mse"]
    lines += [f"{r.label},{data_io._fmt(r.train_mse)},{data_io._fmt(r.test_mse)}" for r in rows]
    data_io._write_text(args.out, "\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="season-forecast",
                                     description="Monthly energy forecasting with small neural nets.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic seasonal series CSV")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--base", type=float, default=250000.0)
    p.add_argument("--amplitude", type=float, default=60000.0)
    p.add_argument("--trend", type=float, default=0.0)
    p.add_argument("--noise-sd", dest="noise_sd", type=float, default=5000.0)
    p.add_argument("--months", type=int, default=22)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-year", dest="start_year", type=int, default=2002)
    p.add_argument("--start-month", dest="start_month", type=int, default=1)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train a net on a series and save the model")
    p.add_argument("series")
    p.add_argument("--out", "-o", required=True, help="model file to write")
    p.add_argument("--report", help="per-epoch training MSE CSV")
    _add_run_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="one-step predictions from measured lags")
    p.add_argument("model")
    p.add_argument("series")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("multistep", help="closed-loop forecast seeded by the first months")
    p.add_argument("model")
    p.add_argument("series")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_multistep)

    p = sub.add_parser("sweep", help="compare hidden-layer topologies")
    p.add_argument("series")
    p.add_argument("--hidden-sizes", dest="hidden_sizes", type=_size_list, required=True,
                   help='semicolon-separated list, e.g. "8,4;32,16;64,32"')
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_run_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (ForecastError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
