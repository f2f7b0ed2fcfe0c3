"""Command-line harness.

Subcommands: train, eval, cv, xor-demo, iris-sweep, gradient-check.
A key=value config file supplies defaults that explicit flags override.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, DataError, DimensionError, KarnetError, NumericalError
from .experiments import (
    PAPER_GRID,
    ExperimentConfig,
    run_cv,
    run_eval,
    run_iris_sweep,
    run_train,
    run_xor_demo,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _parse_grid(text: str) -> tuple[int, ...]:
    if text.strip() == "paper":
        return PAPER_GRID
    return _parse_int_list(text)


def read_config_file(path: str) -> dict:
    """Parse a key=value config file; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "data": str,
    "label-col": int,
    "header": lambda v: v.lower() in ("1", "true", "yes"),
    "layers": _parse_int_list,
    "pattern": str,
    "trainer": str,
    "seed": int,
    "trials": int,
    "folds": int,
    "grid": _parse_grid,
    "out": str,
    "scale-eps": float,
    "rcond": float,
    "learning-rate": float,
    "max-iters": int,
    "gradient-clip": float,
}


def build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge config-file values with flags; flags win."""
    merged: dict = {}
    if getattr(args, "config", None):
        raw = read_config_file(args.config)
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = _CONFIG_KEYS[key](value)

    def pick(flag_name: str, key: str, default):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        return merged.get(key, default)

    return ExperimentConfig(
        dataset=pick("data", "data", "iris"),
        label_col=pick("label_col", "label-col", -1),
        has_header=pick("header", "header", False),
        layers=pick("layers", "layers", ()),
        pattern=pick("pattern", "pattern", "fixed"),
        trainer=pick("trainer", "trainer", "kar"),
        seed=pick("seed", "seed", 0),
        trials=pick("trials", "trials", 10),
        folds=pick("folds", "folds", 10),
        grid=pick("grid", "grid", ()),
        out=pick("out", "out", "."),
        scale_eps=pick("scale_eps", "scale-eps", 0.01),
        rcond=pick("rcond", "rcond", None),
        learning_rate=pick("learning_rate", "learning-rate", 0.01),
        max_iters=pick("max_iters", "max-iters", 500),
        gradient_clip=pick("gradient_clip", "gradient-clip", None),
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--data", help="CSV path or builtin name (xor, xor-ideal, iris)")
    p.add_argument("--label-col", dest="label_col", type=int, help="label column index")
    p.add_argument("--header", action="store_const", const=True, default=None,
                   help="CSV has a header row")
    p.add_argument("--layers", type=_parse_int_list, help="hidden sizes, e.g. 90 or 3,3,3,3")
    p.add_argument("--pattern", choices=("fixed", "exp2", "exp3", "exp4"),
                   help="architecture pattern for grid values")
    p.add_argument("--trainer", choices=("kar", "gd"), help="training algorithm")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--trials", type=int, help="number of repeated trials")
    p.add_argument("--folds", type=int, help="cross-validation folds")
    p.add_argument("--grid", type=_parse_grid,
                   help="hidden-size sweep grid: comma list or 'paper'")
    p.add_argument("--out", help="output directory")
    p.add_argument("--scale-eps", dest="scale_eps", type=float,
                   help="feature scaling margin inside (0, 0.5)")
    p.add_argument("--rcond", type=float, help="pseudoinverse cutoff override")
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--gradient-clip", dest="gradient_clip", type=float)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="karnet",
        description="Analytic (gradient-free) feedforward network training harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("train", "fit one network on a dataset, write weights.json + report.json"),
        ("eval", "evaluate stored weights on a dataset"),
        ("cv", "stratified k-fold cross-validation"),
        ("xor-demo", "reproduce the exclusive-or decision surfaces"),
        ("iris-sweep", "hidden-size sweep on the 90/60 iris split"),
        ("gradient-check", "compare backprop with finite differences"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "eval":
            p.add_argument("--weights", required=True, help="weights.json path")

    return parser


def _cmd_gradient_check(cfg: ExperimentConfig) -> int:
    from .gradient_descent import check_gradient
    from .network import NetworkSpec, random_init

    hidden = cfg.layers or (4,)
    rng = np.random.default_rng(cfg.seed)
    spec = NetworkSpec(input_dim=3, hidden=hidden, output_dim=2, seed=cfg.seed)
    net = random_init(spec, rng)
    x = rng.uniform(0.05, 0.95, size=(6, 3))
    y = rng.uniform(0.1, 0.9, size=(6, 2))
    worst = check_gradient(net, x, y)
    print(json.dumps({"max_relative_error": worst, "tolerance": 1e-4}))
    return EXIT_OK if worst <= 1e-4 else EXIT_NUMERIC


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_experiment_config(args)
        if args.command == "train":
            report = run_train(cfg)
        elif args.command == "eval":
            report = run_eval(cfg, args.weights)
        elif args.command == "cv":
            report = run_cv(cfg)
        elif args.command == "xor-demo":
            report = run_xor_demo(cfg)
        elif args.command == "iris-sweep":
            report = run_iris_sweep(cfg)
        elif args.command == "gradient-check":
            return _cmd_gradient_check(cfg)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except KarnetError as exc:  # any remaining package error is numerical-ish
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(json.dumps({"command": args.command, "out": cfg.out,
                      "summary": _summarize(report)}))
    return EXIT_OK


def _summarize(report: dict) -> dict:
    keep = ("command", "aggregate", "surface_rows", "sse", "accuracy", "error_rate")
    return {k: report[k] for k in keep if k in report}


if __name__ == "__main__":
    sys.exit(main())
