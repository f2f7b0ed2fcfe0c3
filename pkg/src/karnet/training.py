"""Gradient-free network training by kernel-and-range (pseudoinverse) solves.

The single-pass trainer works on the transformed linear systems obtained by
inverting the activation around each layer.  With the inverse transform phi
and targets Y:

* single layer: ``W1 = pinv([1, X]) @ phi(Y)``.
* n layers: later layers are assigned random weights; peeling the bias
  row w_k and node block of each random layer off the transformed targets
  from the outside in yields a target matrix for every layer,

      B_n = phi(Y),   B_{k-1} = phi((B_k - 1 w_k^T) @ pinv(node_k)),

  the first layer is solved as ``W1 = pinv([1, X]) @ B_1``, and layers
  2..n are then re-solved front-to-back against their peeled targets using
  the already re-solved earlier layers:  ``W_k = pinv([1, f(...)]) @ B_k``.
  A layer's peeled target depends only on the layers behind it, which at
  that point in the sweep still hold their random initialization, so the
  peel values are computed once and reused.

Training therefore performs exactly n data-side pseudoinverse solves plus
one peeling chain, which the report records.

A separate representation-mode trainer keeps the hidden layers random and
solves only the output layer; it exists to study how network size relates
to the number of samples a network can fit exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .activations import ActivationPair, apply_f, apply_phi, get_pair
from .errors import ConfigError, DimensionError, NumericalError
from .linalg import as_matrix, pinv, require_rank
from .network import Network, NetworkSpec, add_bias_column, forward

__all__ = [
    "KarConfig",
    "TrainReport",
    "train_single_layer",
    "train_two_layer",
    "train_n_layer",
    "train_random_hidden",
    "transformed_sse",
]

GUARD_KAPPA = 10.0
GUARD_TRIES = 20


@dataclass(frozen=True)
class KarConfig:
    """Configuration for the analytic trainers.

    ``seed`` overrides the spec seed for the random layer initialization
    when given.  ``target_transform`` names the activation pair whose
    inverse is applied to the targets; it defaults to the spec's pair.
    Random layer draws whose node block has condition number above
    ``guard_kappa`` are redrawn (up to ``guard_tries`` times) to guard
    against degenerate initializations.
    """

    spec: NetworkSpec
    seed: int | None = None
    rcond: float | None = None
    target_transform: str | None = None
    guard_kappa: float = GUARD_KAPPA
    guard_tries: int = GUARD_TRIES

    @property
    def effective_seed(self) -> int:
        return self.spec.seed if self.seed is None else self.seed

    def transform_pair(self) -> ActivationPair:
        name = self.target_transform or self.spec.activation
        return get_pair(name)


@dataclass
class TrainReport:
    """Per-run training record; wall_time is the only nondeterministic field."""

    trainer: str
    train_sse: float
    train_sse_transformed: float
    train_error_rate: float
    wall_time: float
    seed: int
    spec: dict
    weight_norms: list[float] = field(default_factory=list)
    solve_count: int = 0
    peel_chains: int = 0
    iterations: int | None = None
    init_style: str = "uniform(0,1)"

    def to_dict(self) -> dict:
        d = {
            "trainer": self.trainer,
            "train_sse": self.train_sse,
            "train_sse_transformed": self.train_sse_transformed,
            "train_error_rate": self.train_error_rate,
            "wall_time": self.wall_time,
            "seed": self.seed,
            "spec": self.spec,
            "weight_norms": self.weight_norms,
            "solve_count": self.solve_count,
            "peel_chains": self.peel_chains,
            "init_style": self.init_style,
        }
        if self.iterations is not None:
            d["iterations"] = self.iterations
        return d


def classification_error_rate(outputs: np.ndarray, targets: np.ndarray) -> float:
    """Fraction of rows whose decoded class disagrees with the target's.

    Multi-column outputs decode by row argmax; single-column outputs by
    thresholding at 0.5.
    """
    if outputs.shape[1] >= 2:
        return float(np.mean(np.argmax(outputs, axis=1) != np.argmax(targets, axis=1)))
    return float(np.mean((outputs[:, 0] > 0.5) != (targets[:, 0] > 0.5)))


def transformed_sse(net: Network, x, y, transform: ActivationPair | None = None) -> float:
    """SSE of the final linear system against the transformed targets.

    Runs the forward pass up to the last layer's matrix product and
    compares it with ``phi(Y)`` (no final activation applied).
    """
    xm = as_matrix(x, "x")
    ym = as_matrix(y, "y")
    pair = net.spec.pair()
    transform = transform or pair
    a = add_bias_column(xm)
    for w in net.weights[:-1]:
        a = add_bias_column(apply_f(pair, a @ w))
    r = a @ net.weights[-1] - apply_phi(transform, ym)
    return float(np.sum(r * r))


def _check_xy(x, y) -> tuple[np.ndarray, np.ndarray]:
    xm = as_matrix(x, "x")
    ym = as_matrix(y, "y")
    if xm.shape[0] != ym.shape[0]:
        raise DimensionError(
            f"x has {xm.shape[0]} rows but y has {ym.shape[0]}"
        )
    return xm, ym


def _check_spec(cfg: KarConfig, x: np.ndarray, y: np.ndarray) -> None:
    spec = cfg.spec
    if spec.input_dim != x.shape[1]:
        raise DimensionError(
            f"spec input_dim {spec.input_dim} != data dim {x.shape[1]}"
        )
    if spec.output_dim != y.shape[1]:
        raise DimensionError(
            f"spec output_dim {spec.output_dim} != target dim {y.shape[1]}"
        )


def _guarded_uniform(
    rng: np.random.Generator, shape: tuple[int, int], kappa: float, tries: int
) -> np.ndarray:
    """Uniform(0,1) draw, redrawn while the node block is badly conditioned."""
    w = rng.uniform(0.0, 1.0, size=shape)
    for _ in range(max(0, tries)):
        s = np.linalg.svd(w[1:, :], compute_uv=False)
        if s[-1] > 0.0 and s[0] / s[-1] <= kappa:
            break
        w = rng.uniform(0.0, 1.0, size=shape)
    return w


def _finite_or_raise(m: np.ndarray, layer: int, what: str) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise NumericalError(f"non-finite {what} at layer {layer}")
    return m


class _Counter:
    def __init__(self):
        self.solves = 0
        self.chains = 0


def _solve(a: np.ndarray, b: np.ndarray, rcond, counter: _Counter, what: str) -> np.ndarray:
    res = require_rank(pinv(a, rcond=rcond), what)
    counter.solves += 1
    return res.pinv @ b


def _finish_report(
    trainer: str,
    net: Network,
    x: np.ndarray,
    y: np.ndarray,
    cfg: KarConfig,
    counter: _Counter,
    t0: float,
    init_style: str,
) -> TrainReport:
    g = forward(net, x)
    out_sse = float(np.sum((g - y) ** 2))
    t_sse = transformed_sse(net, x, y, cfg.transform_pair())
    return TrainReport(
        trainer=trainer,
        train_sse=out_sse,
        train_sse_transformed=t_sse,
        train_error_rate=classification_error_rate(g, y),
        wall_time=time.perf_counter() - t0,
        seed=cfg.effective_seed,
        spec=cfg.spec.to_dict(),
        weight_norms=[float(np.linalg.norm(w)) for w in net.weights],
        solve_count=counter.solves,
        peel_chains=counter.chains,
        init_style=init_style,
    )


def train_single_layer(x, y, cfg: KarConfig) -> tuple[Network, TrainReport]:
    """Solve a one-layer network directly: ``W1 = pinv([1, X]) @ phi(Y)``."""
    t0 = time.perf_counter()
    xm, ym = _check_xy(x, y)
    _check_spec(cfg, xm, ym)
    if cfg.spec.n_layers != 1:
        raise ConfigError("train_single_layer requires a spec with no hidden layer")
    counter = _Counter()
    target = apply_phi(cfg.transform_pair(), ym)
    w1 = _solve(add_bias_column(xm), target, cfg.rcond, counter, "input matrix")
    net = Network(spec=cfg.spec, weights=[w1])
    return net, _finish_report("kar", net, xm, ym, cfg, counter, t0, "n/a")


def _train_kar(x, y, cfg: KarConfig, trainer: str) -> tuple[Network, TrainReport]:
    t0 = time.perf_counter()
    xm, ym = _check_xy(x, y)
    _check_spec(cfg, xm, ym)
    spec = cfg.spec
    n = spec.n_layers
    pair = spec.pair()
    transform = cfg.transform_pair()
    counter = _Counter()
    rng = np.random.default_rng(cfg.effective_seed)
    shapes = spec.weight_shapes

    # random initialization of layers 2..n (bias rows and node blocks)
    weights: list[np.ndarray | None] = [None] * n
    for k in range(2, n + 1):
        weights[k - 1] = _guarded_uniform(
            rng, shapes[k - 1], cfg.guard_kappa, cfg.guard_tries
        )

    # peeling chain: invert the random layers off the transformed targets,
    # outermost first; records one target matrix per layer
    ones = np.ones((xm.shape[0], 1))
    peeled: list[np.ndarray | None] = [None] * (n + 1)
    peeled[n] = apply_phi(transform, ym)
    for k in range(n, 1, -1):
        wk = weights[k - 1]
        node_inv = require_rank(
            pinv(wk[1:, :], rcond=cfg.rcond), f"random node block of layer {k}"
        ).pinv
        raw = (peeled[k] - ones @ wk[0:1, :]) @ node_inv
        peeled[k - 1] = apply_phi(pair, _finite_or_raise(raw, k, "peeled target"))
    counter.chains += 1

    # first layer from the fully peeled target, then layers 2..n in order,
    # each against its peeled target with the layers behind it still random
    x_aug = add_bias_column(xm)
    weights[0] = _solve(x_aug, peeled[1], cfg.rcond, counter, "input matrix")
    a = x_aug
    for k in range(2, n + 1):
        z = _finite_or_raise(a @ weights[k - 2], k - 1, "pre-activation")
        a = add_bias_column(apply_f(pair, z))
        weights[k - 1] = _solve(
            a, peeled[k], cfg.rcond, counter, f"activation matrix of layer {k}"
        )

    net = Network(spec=spec, weights=list(weights))
    return net, _finish_report(trainer, net, xm, ym, cfg, counter, t0, "uniform(0,1)")


def train_two_layer(x, y, cfg: KarConfig) -> tuple[Network, TrainReport]:
    """Two-layer decoupled pass: peel the random output layer, solve the
    hidden layer, then re-solve the output layer."""
    if len(cfg.spec.hidden) != 1:
        raise ConfigError("train_two_layer requires exactly one hidden layer")
    return _train_kar(x, y, cfg, "kar")


def train_n_layer(x, y, cfg: KarConfig) -> tuple[Network, TrainReport]:
    """General single-pass trainer for n >= 2 layers; n = 2 matches
    train_two_layer bit for bit."""
    if cfg.spec.n_layers < 2:
        raise ConfigError("train_n_layer requires at least one hidden layer")
    return _train_kar(x, y, cfg, "kar")


def _convex_columns(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Uniform(0,1) columns normalized to sum to one.

    Pre-activations become convex combinations of the bias constant and the
    input features, so they stay strictly inside the activation domain for
    inputs already scaled into it.
    """
    w = rng.uniform(0.0, 1.0, size=(rows, cols))
    return w / w.sum(axis=0, keepdims=True)


def _centered_ridge(
    rng: np.random.Generator, a: np.ndarray, cols: int
) -> np.ndarray:
    """Random directions over an activation matrix, centered and scaled by
    its column statistics so pre-activations land around mid-domain."""
    p = a.shape[1]
    mu = a[:, 1:].mean(axis=0)
    sd = a[:, 1:].std(axis=0)
    sd[sd == 0.0] = 1.0
    u = rng.uniform(-1.0, 1.0, size=(p - 1, cols))
    b = rng.uniform(-1.0, 1.0, size=cols)
    scale = 1.0 / np.sqrt(p - 1)
    node = (u / sd[:, None]) * scale
    bias = 0.5 - (mu / sd) @ u * scale + 0.45 * b
    return np.vstack([bias, node])


def train_random_hidden(x, y, cfg: KarConfig) -> tuple[Network, TrainReport]:
    """Representation-mode trainer: hidden layers stay random, only the
    output layer is solved.

    The first hidden layer uses convex-combination columns so its
    pre-activations stay inside the activation domain; deeper hidden layers
    re-center on the incoming activation statistics.  For a two-layer
    network the output bias weight is pinned at zero, so the number of
    solved weights per output column equals the hidden size exactly; deeper
    networks solve the full output layer including its bias row.
    """
    t0 = time.perf_counter()
    xm, ym = _check_xy(x, y)
    _check_spec(cfg, xm, ym)
    spec = cfg.spec
    if spec.n_layers < 2:
        raise ConfigError("train_random_hidden requires at least one hidden layer")
    pair = spec.pair()
    transform = cfg.transform_pair()
    counter = _Counter()
    rng = np.random.default_rng(cfg.effective_seed)

    weights: list[np.ndarray] = []
    a = add_bias_column(xm)
    for k, h in enumerate(spec.hidden, start=1):
        if k == 1:
            w = _convex_columns(rng, a.shape[1], h)
        else:
            w = _centered_ridge(rng, a, h)
        weights.append(w)
        z = _finite_or_raise(a @ w, k, "pre-activation")
        a = add_bias_column(apply_f(pair, z))

    target = apply_phi(transform, ym)
    if spec.n_layers == 2:
        node = _solve(a[:, 1:], target, cfg.rcond, counter, "hidden activation matrix")
        w_out = np.vstack([np.zeros((1, spec.output_dim)), node])
    else:
        w_out = _solve(a, target, cfg.rcond, counter, "hidden activation matrix")
    weights.append(w_out)

    net = Network(spec=spec, weights=weights)
    return net, _finish_report(
        "kar-representation", net, xm, ym, cfg, counter, t0, "convex-combination"
    )
