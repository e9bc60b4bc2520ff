"""Seeded generator of finite-atomic test measures."""
from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .measures import CircleMeasure

#: fraction of each angular stratum kept free, so atoms never crowd together
GAP_FRACTION = 0.3


def _weights(rng, count, p, eps, complex_weights):
    X = rng.standard_normal((count, p, p))
    if complex_weights:
        X = X + 1j * rng.standard_normal((count, p, p))
    return X @ np.conj(np.swapaxes(X, 1, 2)) + eps * np.eye(p)


def random_circle_measure(seed: int, p: int, k: int, symmetric: bool = False,
                          eps: float = 0.1, complex_weights: bool = False) -> CircleMeasure:
    """`k` atoms with weights ``X X^* + eps I`` from a seeded Gaussian ``X``.

    Angles are uniform within equal strata of the circle (or of (0, pi)
    for symmetric measures, mirrored to (-pi, 0)), leaving a gap of
    ``GAP_FRACTION`` of each stratum so that the moment problem stays
    well conditioned.  With ``symmetric`` and odd `k` one atom sits at 0.
    The total mass is normalized to ``trace(Gamma_0) = p``.
    """
    if k < 1 or p < 1:
        raise InvalidInput("need at least one atom and p >= 1")
    rng = np.random.default_rng(seed)
    c = GAP_FRACTION
    if symmetric:
        pairs = k // 2
        width = np.pi / max(pairs, 1)
        half = width * (np.arange(pairs) + c / 2 + (1 - c) * rng.random(pairs))
        W = _weights(rng, pairs + k % 2, p, eps, complex_weights)
        thetas = np.concatenate([half, -half, [0.0] * (k % 2)])
        weights = np.concatenate([W[:pairs], W[:pairs], W[pairs:]])
    else:
        width = 2 * np.pi / k
        offset = rng.uniform(-np.pi, np.pi)
        thetas = offset + width * (np.arange(k) + (1 - c) * rng.random(k))
        weights = _weights(rng, k, p, eps, complex_weights)
    total = np.trace(weights.sum(axis=0)).real
    return CircleMeasure.from_atoms(thetas, weights * (p / total))


def discrete_uniform(N: int, p: int) -> CircleMeasure:
    """``N`` equally spaced atoms ``2 pi j / N - pi`` with weight ``I / N``."""
    thetas = 2 * np.pi * np.arange(N) / N - np.pi
    return CircleMeasure.from_atoms(thetas, np.repeat(np.eye(p)[None] / N, N, axis=0))
