"""Invertible activation pairs applied elementwise with domain clamping.

A pair couples a forward function f with its inverse phi.  The reference
pair is f = logit on (0, 1) with phi = sigmoid.  Inputs to f are clamped
into ``[lo + eps, hi - eps]`` so that every output stays finite even for
targets sitting exactly on the domain boundary (e.g. indicator targets of
0 and 1); outputs of phi are clamped into the same band so that a
subsequent f never sees a boundary value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError

__all__ = ["ActivationPair", "apply_f", "apply_phi", "get_pair", "LOGIT_SIGMOID"]

DEFAULT_CLAMP_EPS = 1e-7


@dataclass(frozen=True)
class ActivationPair:
    """Forward function, its inverse, and the open domain of the forward.

    ``forward_deriv`` is the derivative of the forward function, evaluated
    on already-clamped values; iterative trainers need it.
    """

    name: str
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float
    clamp_eps: float = DEFAULT_CLAMP_EPS
    forward_deriv: Callable[[np.ndarray], np.ndarray] | None = None

    def clamp(self, m: np.ndarray) -> np.ndarray:
        return np.clip(m, self.lo + self.clamp_eps, self.hi - self.clamp_eps)


def apply_f(pair: ActivationPair, m) -> np.ndarray:
    """Apply the forward function elementwise, clamping into the domain."""
    a = pair.clamp(np.asarray(m, dtype=np.float64))
    return pair.forward(a)


def apply_phi(pair: ActivationPair, m) -> np.ndarray:
    """Apply the inverse transform elementwise; outputs stay inside the domain."""
    a = pair.inverse(np.asarray(m, dtype=np.float64))
    return pair.clamp(a)


def _logit(a: np.ndarray) -> np.ndarray:
    return np.log(a / (1.0 - a))


def _sigmoid(a: np.ndarray) -> np.ndarray:
    # clip the argument so exp never overflows; the tails saturate anyway
    z = np.clip(a, -700.0, 700.0)
    return 1.0 / (1.0 + np.exp(-z))


def _logit_deriv(a: np.ndarray) -> np.ndarray:
    return 1.0 / (a * (1.0 - a))


LOGIT_SIGMOID = ActivationPair(
    name="logit-sigmoid",
    forward=_logit,
    inverse=_sigmoid,
    lo=0.0,
    hi=1.0,
    forward_deriv=_logit_deriv,
)

_REGISTRY = {LOGIT_SIGMOID.name: LOGIT_SIGMOID}


def get_pair(name: str) -> ActivationPair:
    """Look up an activation pair by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ConfigError(f"unknown activation pair {name!r} (known: {known})") from None
