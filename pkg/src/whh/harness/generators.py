"""Random test instances drawn from :class:`SplitMix64` streams.

Convex grid functions are built as the cumulative sum of a cumulative sum of
positive increments: second differences ``d_i = u_i^3 + 1e-3`` (u uniform),
slopes ``s_0 + cumsum(d) * h``, values ``cumsum(slopes) * h``. The result is
shifted to zero mean and scaled to max-abs 1, then a random affine term
``c0 + c1 x`` (c0, c1 uniform in [-1/2, 1/2]) moves the minimiser around.
"""
from __future__ import annotations

import numpy as np

from ..legendre import SampledFunction
from ..operator_means import SpdMatrix

X_MIN, X_MAX = -1.0, 1.0


def random_convex(rng, n, x_min=X_MIN, x_max=X_MAX) -> SampledFunction:
    h = (x_max - x_min) / (n - 1)
    d = rng.uniform(0.0, 1.0, n - 2) ** 3 + 1e-3
    s0 = rng.uniform(-1.0, 1.0)
    slopes = np.concatenate([[s0], s0 + np.cumsum(d) * h])
    v = np.concatenate([[0.0], np.cumsum(slopes) * h])
    v -= v.mean()
    v /= np.max(np.abs(v))
    x = np.linspace(x_min, x_max, n)
    v = v + rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * x
    return SampledFunction(x_min, x_max, v)


def random_orthogonal(rng, n) -> np.ndarray:
    """Gram-Schmidt (modified) on a Gaussian matrix."""
    g = rng.normal((n, n))
    q = np.zeros((n, n))
    for j in range(n):
        v = g[:, j].copy()
        for i in range(j):
            v -= (q[:, i] @ v) * q[:, i]
        q[:, j] = v / np.linalg.norm(v)
    return q


def random_spd(rng, n, lo=1e-2, hi=1e2) -> SpdMatrix:
    """``Q diag(w) Q^T`` with log-uniform spectrum in ``[lo, hi]``."""
    q = random_orthogonal(rng, n)
    w = rng.log_uniform(lo, hi, n)
    a = (q * w) @ q.T
    return SpdMatrix(0.5 * (a + a.T))
