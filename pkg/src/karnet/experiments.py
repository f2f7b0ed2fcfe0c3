"""Experiment harness: demo reproductions, sweeps, and cross-validation.

Every run is deterministic given (seed, config): each unit of work derives
its own generator stream from the master seed plus its indices, so results
do not depend on execution order.  Wall-time fields are the only
nondeterministic values in any emitted report.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .data import (
    Dataset,
    apply_scaling,
    load_csv,
    load_iris,
    make_xor,
    scale_minmax,
    split_rows,
    stratified_folds,
)
from .errors import ConfigError
from .gradient_descent import GdConfig, train_gd
from .network import Network, NetworkSpec, forward
from .training import (
    KarConfig,
    train_n_layer,
    train_random_hidden,
    train_single_layer,
)

__all__ = [
    "PAPER_GRID",
    "ExperimentConfig",
    "classify",
    "error_rate",
    "run_xor_demo",
    "run_iris_sweep",
    "run_cv",
    "run_train",
    "run_eval",
    "write_report",
]

PAPER_GRID = (1, 2, 3, 5, 10, 20, 30, 50, 80, 100, 200, 500)
IRIS_SWEEP_GRID = tuple(range(79, 94))


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed run parameters shared by the harness commands."""

    dataset: str = "iris"
    label_col: int = -1
    has_header: bool = False
    layers: tuple[int, ...] = ()
    pattern: str = "fixed"
    trainer: str = "kar"
    seed: int = 0
    trials: int = 10
    folds: int = 10
    grid: tuple[int, ...] = ()
    out: str = "."
    scale_eps: float = 0.01
    rcond: float | None = None
    learning_rate: float = 0.01
    max_iters: int = 500
    gradient_clip: float | None = None

    def __post_init__(self):
        if self.trainer not in ("kar", "gd"):
            raise ConfigError(f"trainer must be 'kar' or 'gd', got {self.trainer!r}")
        if self.pattern not in ("fixed", "exp2", "exp3", "exp4"):
            raise ConfigError(f"unknown architecture pattern {self.pattern!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")

    def hidden_for(self, h: int) -> tuple[int, ...]:
        """Hidden sizes for a grid value under the architecture pattern."""
        if self.pattern == "exp2":
            return (h,)
        if self.pattern == "exp3":
            return (2 * h, h)
        if self.pattern == "exp4":
            return (4 * h, 2 * h, h)
        return self.layers


def classify(outputs) -> np.ndarray:
    """Row-wise argmax decode of one-vs-all outputs; ties break low."""
    m = np.asarray(outputs, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] < 2:
        raise ConfigError("classify requires at least two output columns")
    return np.argmax(m, axis=1)


def error_rate(outputs, labels) -> float:
    """Fraction of rows whose decoded class differs from the given label."""
    return float(np.mean(classify(outputs) != np.asarray(labels)))


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    name = cfg.dataset
    if name == "xor":
        return make_xor(perturbed=True)
    if name == "xor-ideal":
        return make_xor(perturbed=False)
    if name == "iris":
        return load_iris()
    return load_csv(name, label_column=cfg.label_col, has_header=cfg.has_header)


def _train_once(
    cfg: ExperimentConfig, x: np.ndarray, y: np.ndarray, hidden: tuple[int, ...], seed: int
):
    spec = NetworkSpec(
        input_dim=x.shape[1], hidden=hidden, output_dim=y.shape[1], seed=seed
    )
    if cfg.trainer == "gd":
        gcfg = GdConfig(
            spec=spec,
            seed=seed,
            learning_rate=cfg.learning_rate,
            max_iters=cfg.max_iters,
            gradient_clip=cfg.gradient_clip,
        )
        return train_gd(x, y, gcfg)
    kcfg = KarConfig(spec=spec, seed=seed, rcond=cfg.rcond)
    if spec.n_layers == 1:
        return train_single_layer(x, y, kcfg)
    return train_n_layer(x, y, kcfg)


def _unit_seed(*parts: int) -> int:
    """Collapse (seed, indices...) into one deterministic integer seed."""
    ss = np.random.SeedSequence(list(parts))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def write_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_rows_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(header)
        out.writerows(rows)


def run_xor_demo(cfg: ExperimentConfig) -> dict:
    """Train the two reference nets on the perturbed exclusive-or points and
    export a 101 x 101 output-surface grid over the unit square."""
    ds = load_dataset(replace(cfg, dataset="xor"))
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)

    nets: dict[str, Network] = {}
    report: dict = {"command": "xor-demo", "seed": cfg.seed, "nets": {}}
    for tag, hidden in (("2layer", (2,)), ("5layer", (3, 3, 3, 3))):
        net, train_rep = _train_once(
            replace(cfg, trainer="kar"), ds.x, ds.y, hidden, cfg.seed
        )
        nets[tag] = net
        g = forward(net, ds.x)
        report["nets"][tag] = {
            "hidden": list(hidden),
            "trained_outputs": g[:, 0].tolist(),
            "max_abs_output_error": float(np.max(np.abs(g - ds.y))),
            "train_report": train_rep.to_dict(),
        }

    axis = np.linspace(0.0, 1.0, 101)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    surfaces = {tag: forward(net, grid)[:, 0] for tag, net in nets.items()}
    rows = [
        [repr(float(a)), repr(float(b)), repr(float(surfaces["2layer"][i])),
         repr(float(surfaces["5layer"][i]))]
        for i, (a, b) in enumerate(grid)
    ]
    _write_rows_csv(outdir / "surface.csv", ["x1", "x2", "out_2layer", "out_5layer"], rows)
    report["surface_file"] = "surface.csv"
    report["surface_rows"] = len(rows)
    write_report(report, outdir / "report.json")
    return report


def run_iris_sweep(cfg: ExperimentConfig) -> dict:
    """Hidden-size sweep on the deterministic 90/60 iris split.

    For each hidden size and trial seed a two-layer network with a random
    hidden layer is fit by a single output-layer solve, recording training
    SSE in both output and transformed space plus train/test error rates.
    """
    from .data import iris_train_test_split

    ds = load_iris()
    train, test = iris_train_test_split(ds)
    train = scale_minmax(train, cfg.scale_eps)
    test = apply_scaling(test, train.scaling, cfg.scale_eps)

    grid = cfg.grid or IRIS_SWEEP_GRID
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)

    rows = []
    per_h: dict[int, dict[str, list[float]]] = {}
    for h in grid:
        acc = per_h.setdefault(
            int(h),
            {"train_sse": [], "train_sse_transformed": [], "train_err": [], "test_err": []},
        )
        for trial in range(cfg.trials):
            seed = _unit_seed(cfg.seed, h, trial)
            spec = NetworkSpec(
                input_dim=train.n_features, hidden=(int(h),),
                output_dim=train.class_count, seed=seed,
            )
            net, rep = train_random_hidden(
                train.x, train.y, KarConfig(spec=spec, rcond=cfg.rcond)
            )
            test_err = error_rate(forward(net, test.x), test.labels)
            rows.append(
                [int(h), trial, repr(rep.train_sse), repr(rep.train_sse_transformed),
                 repr(rep.train_error_rate), repr(test_err)]
            )
            acc["train_sse"].append(rep.train_sse)
            acc["train_sse_transformed"].append(rep.train_sse_transformed)
            acc["train_err"].append(rep.train_error_rate)
            acc["test_err"].append(test_err)

    _write_rows_csv(
        outdir / "sweep.csv",
        ["h", "trial", "train_sse", "train_sse_transformed", "train_error_rate",
         "test_error_rate"],
        rows,
    )
    report = {
        "command": "iris-sweep",
        "seed": cfg.seed,
        "trials": cfg.trials,
        "grid": [int(h) for h in grid],
        "scale_eps": cfg.scale_eps,
        "sweep_file": "sweep.csv",
        "per_h": {
            str(h): {
                "mean_train_sse": float(np.mean(v["train_sse"])),
                "max_train_sse": float(np.max(v["train_sse"])),
                "mean_train_sse_transformed": float(np.mean(v["train_sse_transformed"])),
                "max_train_sse_transformed": float(np.max(v["train_sse_transformed"])),
                "mean_train_error_rate": float(np.mean(v["train_err"])),
                "mean_test_error_rate": float(np.mean(v["test_err"])),
            }
            for h, v in per_h.items()
        },
    }
    write_report(report, outdir / "report.json")
    return report


def _select_hidden(
    cfg: ExperimentConfig, train: Dataset, trial_seed: int
) -> tuple[int, ...]:
    """Inner cross-validation over the sweep grid on the training subset;
    ties in mean accuracy break toward the smaller hidden size."""
    inner_k = min(cfg.folds, train.n_samples)
    plan = stratified_folds(train.labels, inner_k, trial_seed)
    best_h, best_acc = None, -1.0
    for h in sorted(cfg.grid):
        accs = []
        for fold in range(inner_k):
            tr = split_rows(train, plan.train_indices(fold))
            va = split_rows(train, plan.test_indices(fold))
            tr_s = scale_minmax(tr, cfg.scale_eps)
            va_s = apply_scaling(va, tr_s.scaling, cfg.scale_eps)
            seed = _unit_seed(trial_seed, h, fold)
            net, _ = _train_once(cfg, tr_s.x, tr_s.y, cfg.hidden_for(int(h)), seed)
            accs.append(1.0 - error_rate(forward(net, va_s.x), va_s.labels))
        mean_acc = float(np.mean(accs))
        if mean_acc > best_acc:
            best_h, best_acc = int(h), mean_acc
    return cfg.hidden_for(best_h)


def run_cv(cfg: ExperimentConfig) -> dict:
    """Stratified k-fold cross-validation, repeated over trials.

    Fold plans depend only on (seed, trial), never on the trainer, so
    different trainers evaluated with the same seed see identical splits.
    When a sweep grid is configured, the hidden size is selected per fold
    by an inner cross-validation on the training subset only.
    """
    ds = load_dataset(cfg)
    if ds.labels is None or ds.class_count < 2:
        raise ConfigError("cross-validation requires a labelled dataset")
    if not cfg.grid and not cfg.layers and cfg.pattern == "fixed":
        raise ConfigError("cv needs --layers or a sweep --grid")
    if cfg.folds > ds.n_samples:
        raise ConfigError(f"folds={cfg.folds} exceed {ds.n_samples} samples")

    rows = []
    for trial in range(cfg.trials):
        plan_seed = _unit_seed(cfg.seed, trial)
        plan = stratified_folds(ds.labels, cfg.folds, plan_seed)
        for fold in range(cfg.folds):
            train = split_rows(ds, plan.train_indices(fold))
            test = split_rows(ds, plan.test_indices(fold))
            train_s = scale_minmax(train, cfg.scale_eps)
            test_s = apply_scaling(test, train_s.scaling, cfg.scale_eps)
            hidden = (
                _select_hidden(cfg, train, _unit_seed(cfg.seed, trial, fold))
                if cfg.grid
                else cfg.layers
            )
            seed = _unit_seed(cfg.seed, trial, fold, 1)
            t0 = time.perf_counter()
            net, rep = _train_once(cfg, train_s.x, train_s.y, hidden, seed)
            train_time = time.perf_counter() - t0
            acc = 1.0 - error_rate(forward(net, test_s.x), test_s.labels)
            rows.append(
                {
                    "trial": trial,
                    "fold": fold,
                    "trainer": cfg.trainer,
                    "hidden": list(hidden),
                    "accuracy": acc,
                    "train_sse": rep.train_sse,
                    "train_wall_time": train_time,
                }
            )

    accuracies = [r["accuracy"] for r in rows]
    times = [r["train_wall_time"] for r in rows]
    report = {
        "command": "cv",
        "trainer": cfg.trainer,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "folds": cfg.folds,
        "dataset": cfg.dataset,
        "rows": rows,
        "aggregate": {
            "mean_accuracy": float(np.mean(accuracies)),
            "mean_train_wall_time": float(np.mean(times)),
            "total_train_wall_time": float(np.sum(times)),
        },
    }
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_report(report, outdir / "report.json")
    return report


def run_train(cfg: ExperimentConfig) -> dict:
    """Fit one network on a full dataset; persist weights and a report."""
    ds = load_dataset(cfg)
    scaled = scale_minmax(ds, cfg.scale_eps)
    hidden = cfg.layers
    net, rep = _train_once(cfg, scaled.x, scaled.y, hidden, cfg.seed)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    from .network import save_network

    save_network(net, outdir / "weights.json")
    report = {
        "command": "train",
        "dataset": cfg.dataset,
        "trainer": cfg.trainer,
        "train_report": rep.to_dict(),
        "weights_file": "weights.json",
        "preprocessing": {"scale_eps": cfg.scale_eps, "scaling": scaled.scaling},
    }
    write_report(report, outdir / "report.json")
    return report


def run_eval(cfg: ExperimentConfig, weights_path) -> dict:
    """Evaluate stored weights on a dataset.

    Reuses the training-time scaling when a train report sits next to the
    weights file; otherwise fits scaling on the evaluation data itself.
    """
    from .network import load_network

    net = load_network(weights_path)
    ds = load_dataset(cfg)
    sidecar = Path(weights_path).parent / "report.json"
    scaling = None
    eps = cfg.scale_eps
    if sidecar.exists():
        with open(sidecar, "r", encoding="utf-8") as fh:
            side = json.load(fh)
        pre = side.get("preprocessing")
        if pre and pre.get("scaling"):
            scaling = [tuple(p) for p in pre["scaling"]]
            eps = float(pre.get("scale_eps", eps))
    scaled = (
        apply_scaling(ds, scaling, eps) if scaling else scale_minmax(ds, eps)
    )
    g = forward(net, scaled.x)
    report: dict = {
        "command": "eval",
        "dataset": cfg.dataset,
        "sse": float(np.sum((g - scaled.y) ** 2)),
        "n_samples": ds.n_samples,
        "scaling_reused": scaling is not None,
    }
    if ds.labels is not None and ds.class_count >= 2:
        report["error_rate"] = error_rate(g, ds.labels)
        report["accuracy"] = 1.0 - report["error_rate"]
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_report(report, outdir / "eval_report.json")
    return report
