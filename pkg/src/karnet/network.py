"""Fully-connected feedforward network model.

Every layer multiplies a bias-augmented input by its weight matrix and
applies the activation: the input to layer k is ``[1, G_{k-1}]`` with a
leading ones-column, so the first row of each weight matrix holds the bias
weights and the remaining rows the node weights.  A network with hidden
sizes ``(h1, ..., h_{n-1})`` on d inputs and q outputs stores

    W1: (d+1) x h1,  W2: (h1+1) x h2,  ...,  Wn: (h_{n-1}+1) x q.

Raw features are not rescaled here; mapping them into the activation
domain is the data pipeline's job.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .activations import ActivationPair, apply_f, get_pair
from .errors import ConfigError, DimensionError

__all__ = [
    "NetworkSpec",
    "Network",
    "add_bias_column",
    "forward",
    "random_init",
    "network_to_json",
    "network_from_json",
    "save_network",
    "load_network",
]


@dataclass(frozen=True)
class NetworkSpec:
    """Architecture description: layer sizes, activation pair, init seed."""

    input_dim: int
    hidden: tuple[int, ...]
    output_dim: int
    activation: str = "logit-sigmoid"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        sizes = (self.input_dim, *self.hidden, self.output_dim)
        if any(s < 1 for s in sizes):
            raise ConfigError(f"all layer sizes must be >= 1, got {sizes}")

    @property
    def n_layers(self) -> int:
        return len(self.hidden) + 1

    @property
    def weight_shapes(self) -> list[tuple[int, int]]:
        sizes = [self.input_dim, *self.hidden, self.output_dim]
        return [(sizes[k] + 1, sizes[k + 1]) for k in range(len(sizes) - 1)]

    def pair(self) -> ActivationPair:
        return get_pair(self.activation)

    def to_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "hidden": list(self.hidden),
            "output_dim": self.output_dim,
            "activation": self.activation,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkSpec":
        return cls(
            input_dim=int(d["input_dim"]),
            hidden=tuple(d["hidden"]),
            output_dim=int(d["output_dim"]),
            activation=d.get("activation", "logit-sigmoid"),
            seed=int(d.get("seed", 0)),
        )


@dataclass
class Network:
    """A materialized network: spec plus one weight matrix per layer."""

    spec: NetworkSpec
    weights: list = field(default_factory=list)

    def __post_init__(self):
        expected = self.spec.weight_shapes
        if len(self.weights) != len(expected):
            raise DimensionError(
                f"expected {len(expected)} weight matrices, got {len(self.weights)}"
            )
        for k, (w, shape) in enumerate(zip(self.weights, expected), start=1):
            if w.shape != shape:
                raise DimensionError(
                    f"layer {k} weight shape {w.shape} != expected {shape}"
                )

    def bias_row(self, k: int) -> np.ndarray:
        """Bias-weight row of layer k (1-indexed)."""
        return self.weights[k - 1][0, :]

    def node_block(self, k: int) -> np.ndarray:
        """Node-weight block of layer k (everything below the bias row)."""
        return self.weights[k - 1][1:, :]


def add_bias_column(x: np.ndarray) -> np.ndarray:
    """Prepend a ones-column: (m, p) -> (m, p + 1)."""
    return np.hstack([np.ones((x.shape[0], 1)), x])


def forward(net: Network, x) -> np.ndarray:
    """Forward pass: activation applied after every layer's matrix product."""
    xm = np.asarray(x, dtype=np.float64)
    if xm.ndim != 2 or xm.shape[1] != net.spec.input_dim:
        raise DimensionError(
            f"input must be (m, {net.spec.input_dim}), got {xm.shape}"
        )
    pair = net.spec.pair()
    a = add_bias_column(xm)
    g = None
    for w in net.weights:
        g = apply_f(pair, a @ w)
        a = add_bias_column(g)
    return g


def random_init(spec: NetworkSpec, rng: np.random.Generator | None = None) -> Network:
    """Fill every layer i.i.d. uniform on (0, 1) from a seeded generator."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    weights = [rng.uniform(0.0, 1.0, size=shape) for shape in spec.weight_shapes]
    return Network(spec=spec, weights=weights)


def network_to_json(net: Network) -> str:
    """Serialize to JSON, round-trippable bit-exactly at double precision."""
    payload = {
        "spec": net.spec.to_dict(),
        "weights": [
            {"rows": w.shape[0], "cols": w.shape[1], "data": w.ravel().tolist()}
            for w in net.weights
        ],
    }
    return json.dumps(payload, sort_keys=True)


def network_from_json(s: str) -> Network:
    payload = json.loads(s)
    spec = NetworkSpec.from_dict(payload["spec"])
    weights = [
        np.asarray(w["data"], dtype=np.float64).reshape(w["rows"], w["cols"])
        for w in payload["weights"]
    ]
    return Network(spec=spec, weights=weights)


def save_network(net: Network, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(network_to_json(net))


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return network_from_json(fh.read())
