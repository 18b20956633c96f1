"""Gaussian quadrature on [0, 1] against power-law endpoint weights.

Rules come from the Jacobi-matrix eigenproblem (Golub-Welsch) solved with the
in-house QL solver, so the integrable singularities of ``nu_lam`` and
``mu_lam`` are absorbed by the weight instead of being sampled.
"""
from __future__ import annotations

import math
import threading
from collections import OrderedDict
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .eigen import tridiagonal_ql
from .measures import SubInterval, _interior, _subinterval, nu_exponents

__all__ = [
    "QuadratureRule",
    "IntegralResult",
    "QuadratureError",
    "gauss_jacobi_rule",
    "nu_rule",
    "nu_rule_split",
    "graded_rule",
    "nu_rule_graded",
    "mu_rule",
    "mu_rule_graded",
    "integrate_nu",
    "integrate_mu",
    "integrate_lebesgue",
]

DEFAULT_NODES = 32
MAX_NODES = 256
DEFAULT_TOL = 1e-10
# dyadic breakpoints 2^-k and 1 - 2^-k, k = 1..GRADE_DEPTH, for integrands
# that are analytic on [0, 1] but have a pole just outside an endpoint
GRADE_DEPTH = 24


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``int_0^1 g(t) t^beta0 (1-t)^alpha1 dt``."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: tuple[float, float]
    order: int

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    nodes_used: int

    def __float__(self) -> float:
        return self.value


class QuadratureError(ArithmeticError):
    """Refinement exhausted before the error estimate met the tolerance."""

    def __init__(self, message, result: IntegralResult):
        super().__init__(message)
        self.result = result


def _log_beta(x: float, y: float) -> float:
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def _jacobi_matrix(n: int, alpha: float, beta: float):
    """Recurrence coefficients for the weight (1-x)^alpha (1+x)^beta on [-1, 1]."""
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    s = 2.0 * k + ab
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2.0)
    if n > 1:
        diag[1:] = (beta**2 - alpha**2) / (s[1:] * (s[1:] + 2.0))
    kk = k[1:]
    ss = s[1:]
    off = np.empty(n - 1)
    if n > 1:
        # k = 1 has a removable 0/0 when alpha + beta = -1
        off[0] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
        off[1:] = (
            4.0 * kk[1:] * (kk[1:] + alpha) * (kk[1:] + beta) * (kk[1:] + ab)
            / (ss[1:] ** 2 * (ss[1:] + 1.0) * (ss[1:] - 1.0))
        )
    return diag, np.sqrt(off)


def _build_rule(n: int, beta0: float, alpha1: float) -> QuadratureRule:
    diag, off = _jacobi_matrix(n, alpha1, beta0)
    x, z = tridiagonal_ql(diag, off, z=np.eye(1, n))
    mass = math.exp(_log_beta(beta0 + 1.0, alpha1 + 1.0))
    nodes = 0.5 * (1.0 + x)
    weights = z[0] ** 2 * mass
    if not (np.all(nodes > 0.0) and np.all(nodes < 1.0) and np.all(np.diff(nodes) > 0.0)):
        raise ArithmeticError(f"Gauss-Jacobi nodes not strictly interior/increasing (n={n})")
    if not np.all(weights > 0.0):
        raise ArithmeticError(f"Gauss-Jacobi weights not positive (n={n})")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, (beta0, alpha1), n)


_CACHE: "OrderedDict[tuple, QuadratureRule]" = OrderedDict()
_CACHE_SIZE = 1024
_LOCK = threading.Lock()


def gauss_jacobi_rule(n: int, beta0: float = 0.0, alpha1: float = 0.0) -> QuadratureRule:
    """n-point Gauss rule on [0, 1] for the weight ``t^beta0 (1-t)^alpha1``.

    Exact for polynomials of degree ``2n - 1``. Rules are cached on
    ``(n, beta0, alpha1)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (beta0 > -1.0 and alpha1 > -1.0):
        raise ValueError(f"weight exponents must exceed -1, got {beta0!r}, {alpha1!r}")
    key = (n, float(beta0), float(alpha1))
    with _LOCK:
        rule = _CACHE.get(key)
        if rule is not None:
            _CACHE.move_to_end(key)
            return rule
        rule = _build_rule(n, key[1], key[2])
        _CACHE[key] = rule
        if len(_CACHE) > _CACHE_SIZE:
            _CACHE.popitem(last=False)
    return rule


def _anchored(n, p, lo, hi):
    """Nodes ``u`` and weights for ``int_lo^hi g(u) u^p du`` with ``0 <= lo < hi``.

    The weight can only be singular at u = 0. All weights are nonnegative.
    """
    if lo == 0.0:
        rule = gauss_jacobi_rule(n, p, 0.0)
        return hi * rule.nodes, hi ** (p + 1.0) * rule.weights
    leg = gauss_jacobi_rule(n)
    if p == 0.0:
        return lo + (hi - lo) * leg.nodes, (hi - lo) * leg.weights
    # panels [c, 2c] keep the singularity at least one panel length away
    edges = [lo]
    while edges[-1] < hi:
        edges.append(min(2.0 * edges[-1], hi))
    if len(edges) > 2 and edges[-1] - edges[-2] < 0.5 * (edges[-2] - edges[-3]):
        del edges[-2]
    us, ws = [], []
    for c, d in zip(edges[:-1], edges[1:]):
        u = c + (d - c) * leg.nodes
        us.append(u)
        # in logs: u^p alone may overflow when lo is subnormal
        ws.append(np.exp(math.log(d - c) + np.log(leg.weights) + p * np.log(u)))
    return np.concatenate(us), np.concatenate(ws)


def _anchored_right(n, p, a, b):
    """Nodes/weights for ``int_a^b g(t) (1-t)^p dt``, built in u = 1 - t."""
    u, w = _anchored(n, p, 1.0 - b, 1.0 - a)
    return (1.0 - u)[::-1], w[::-1]


def _anchored_left(n, q, a, b):
    """Nodes/weights for ``int_a^b g(t) t^q dt``; no reflection, so tiny ``a``
    keeps its precision."""
    return _anchored(n, q, a, b)


def nu_rule(lam, n: int = DEFAULT_NODES, iv=(0.0, 1.0)):
    """Nodes and weights with ``sum(w * g(t)) ~ int_a^b g dnu_lam``.

    The two power-law terms of the density each get their own n-point rule.
    """
    lam = _interior(lam)
    iv = _subinterval(iv)
    p, q = nu_exponents(lam)
    t1, w1 = _anchored_right(n, p, iv.a, iv.b)
    t2, w2 = _anchored_left(n, q, iv.a, iv.b)
    return np.concatenate([t1, t2]), np.concatenate([(1.0 - lam) * w1, lam * w2])


def nu_rule_split(lam, n: int = DEFAULT_NODES, split=None):
    """:func:`nu_rule` on [0, 1] assembled from pieces cut at the ``split`` points.

    Integrands with a kink at a known point are then integrated piecewise.
    """
    if split is None:
        return nu_rule(lam, n)
    edges = [0.0] + sorted({float(b) for b in np.atleast_1d(split) if 0.0 < b < 1.0}) + [1.0]
    parts = [nu_rule(lam, n, (lo, hi)) for lo, hi in zip(edges[:-1], edges[1:])]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def mu_rule(lam, n: int = DEFAULT_NODES):
    """Nodes and weights with ``sum(w * g(t)) ~ int_0^1 g dmu_lam``."""
    lam = _interior(lam)
    rule = gauss_jacobi_rule(n, lam - 1.0, -lam)
    return rule.nodes, math.sin(math.pi * lam) / math.pi * rule.weights


def _piece(n, beta0, alpha1, a, b):
    """``int_a^b g(t) t^beta0 (1-t)^alpha1 dt`` on one piece of a graded mesh.

    End pieces absorb their singular factor exactly; interior pieces are
    assumed short relative to their distance from 0 and 1.
    """
    if a == 0.0 and b == 1.0:
        rule = gauss_jacobi_rule(n, beta0, alpha1)
        return rule.nodes, rule.weights
    if a == 0.0:
        rule = gauss_jacobi_rule(n, beta0, 0.0)
        t = b * rule.nodes
        return t, b ** (beta0 + 1.0) * rule.weights * (1.0 - t) ** alpha1
    if b == 1.0 or a >= 0.5:
        # work in 1 - t so that the distance to t = 1 keeps full precision
        s, w = _piece(n, alpha1, beta0, 1.0 - b, 1.0 - a)
        return (1.0 - s)[::-1], w[::-1]
    leg = gauss_jacobi_rule(n)
    t = a + (b - a) * leg.nodes
    return t, (b - a) * leg.weights * t**beta0 * (1.0 - t) ** alpha1


def _graded_edges(lo, hi, split, depth):
    pts = {0.5}
    for k in range(1, depth + 1):
        pts.update((2.0**-k, 1.0 - 2.0**-k))
    if split is not None:
        pts.update(float(x) for x in np.atleast_1d(split))
    return [lo] + sorted(x for x in pts if lo < x < hi) + [hi]


def graded_rule(n, beta0, alpha1, split=None, depth=GRADE_DEPTH, iv=(0.0, 1.0)):
    """Composite rule for ``int_a^b g(t) t^beta0 (1-t)^alpha1 dt`` on a mesh
    graded dyadically toward t = 0 and t = 1 (``split`` adds breakpoints).

    Resolves integrands with poles at distance down to about ``2^-depth``
    outside [0, 1]. All weights are nonnegative; results are cached.
    """
    iv = _subinterval(iv)
    key = () if split is None else tuple(sorted(float(x) for x in np.atleast_1d(split)))
    return _graded_cached(int(n), float(beta0), float(alpha1), key, int(depth), iv.a, iv.b)


@lru_cache(maxsize=512)
def _graded_cached(n, beta0, alpha1, split, depth, lo, hi):
    edges = np.array(_graded_edges(lo, hi, split, depth))
    a, b = edges[:-1], edges[1:]
    ts, ws = [], []
    inner = (a > 0.0) & (b < 1.0)
    for k in np.flatnonzero(~inner):
        t, w = _piece(n, beta0, alpha1, a[k], b[k])
        ts.append(t)
        ws.append(w)
    leg = gauss_jacobi_rule(n)
    left = inner & (a < 0.5)
    if left.any():
        h = (b - a)[left, None]
        t = a[left, None] + h * leg.nodes
        ts.append(t.ravel())
        ws.append((h * leg.weights * t**beta0 * (1.0 - t) ** alpha1).ravel())
    right = inner & (a >= 0.5)
    if right.any():
        # in 1 - t the distance to t = 1 keeps full precision
        h = (b - a)[right, None]
        tau = (1.0 - b)[right, None] + h * leg.nodes
        ts.append((1.0 - tau).ravel())
        ws.append((h * leg.weights * (1.0 - tau) ** beta0 * tau**alpha1).ravel())
    t, w = np.concatenate(ts), np.concatenate(ws)
    order = np.argsort(t, kind="stable")
    t, w = t[order], w[order]
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def nu_rule_graded(lam, n: int = 12, split=None, depth=GRADE_DEPTH, iv=(0.0, 1.0)):
    """Graded composite version of :func:`nu_rule`."""
    lam = _interior(lam)
    p, q = nu_exponents(lam)
    t1, w1 = graded_rule(n, 0.0, p, split, depth, iv)
    t2, w2 = graded_rule(n, q, 0.0, split, depth, iv)
    return np.concatenate([t1, t2]), np.concatenate([(1.0 - lam) * w1, lam * w2])


def mu_rule_graded(lam, n: int = 12, depth=GRADE_DEPTH):
    """Graded composite version of :func:`mu_rule`."""
    lam = _interior(lam)
    t, w = graded_rule(n, lam - 1.0, -lam, None, depth)
    return t, math.sin(math.pi * lam) / math.pi * w


def _evaluate(f, t):
    try:
        y = np.asarray(f(t), dtype=float)
        if y.shape == t.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([f(float(ti)) for ti in t], dtype=float)


def _doubling(make_rule, f, tol, n, n_max):
    t, w = make_rule(n)
    prev = float(np.dot(w, _evaluate(f, t)))
    while True:
        n2 = 2 * n
        t, w = make_rule(n2)
        value = float(np.dot(w, _evaluate(f, t)))
        est = abs(value - prev)
        result = IntegralResult(value, est, int(t.size))
        if not math.isfinite(value):
            raise QuadratureError("integrand produced a non-finite value", result)
        if est <= tol:
            return result
        if n2 >= n_max:
            raise QuadratureError(
                f"no convergence: error estimate {est:.3e} > tol {tol:.3e} at n={n2}", result
            )
        n, prev = n2, value


def integrate_nu(
    lam, f, iv=(0.0, 1.0), tol=DEFAULT_TOL, n=DEFAULT_NODES, n_max=MAX_NODES, graded=False, split=None
):
    """``int_a^b f dnu_lam`` with a node-doubling error estimate.

    ``graded=True`` switches to the endpoint-graded composite rule (``n`` is
    then the per-piece order); ``split`` adds breakpoints on [0, 1].
    """
    if graded:
        n = min(n, 12)
        return _doubling(lambda k: nu_rule_graded(lam, k, split, iv=iv), f, tol, n, max(n_max // 8, 2 * n))
    if split is not None:
        iv = _subinterval(iv)
        if (iv.a, iv.b) != (0.0, 1.0):
            raise ValueError("split rules are only available on [0, 1]")
        return _doubling(lambda k: nu_rule_split(lam, k, split), f, tol, n, n_max)
    return _doubling(lambda k: nu_rule(lam, k, iv), f, tol, n, n_max)


def integrate_mu(lam, f, tol=DEFAULT_TOL, n=DEFAULT_NODES, n_max=MAX_NODES, graded=False):
    """``int_0^1 f dmu_lam`` with a node-doubling error estimate."""
    if graded:
        n = min(n, 12)
        return _doubling(lambda k: mu_rule_graded(lam, k), f, tol, n, max(n_max // 8, 2 * n))
    return _doubling(lambda k: mu_rule(lam, k), f, tol, n, n_max)


def integrate_lebesgue(f, iv=(0.0, 1.0), tol=1e-12, max_panels=4096) -> IntegralResult:
    """Adaptive Gauss-Legendre (10/20-point panel pairs) on ``[a, b]``.

    Unlike the weighted integrators, ``iv`` may be any finite interval.
    """
    a, b = (iv.a, iv.b) if isinstance(iv, SubInterval) else map(float, iv)
    if not a < b:
        raise ValueError("need a < b")
    lo, hi = gauss_jacobi_rule(10), gauss_jacobi_rule(20)
    length = b - a
    total = 0.0
    err = 0.0
    used = 0
    stack = [(a, b)]
    panels = 0
    while stack:
        x0, x1 = stack.pop()
        h = x1 - x0
        coarse = h * lo.integrate(_evaluate(f, x0 + h * lo.nodes))
        fine = h * hi.integrate(_evaluate(f, x0 + h * hi.nodes))
        used += 30
        panels += 1
        est = abs(fine - coarse)
        if est <= tol * h / length or h < 1e-14 * length:
            total += fine
            err += est
            continue
        if panels >= max_panels:
            raise QuadratureError(
                "adaptive Gauss-Legendre exceeded its panel budget",
                IntegralResult(total + fine, err + est, used),
            )
        mid = 0.5 * (x0 + x1)
        stack.append((mid, x1))
        stack.append((x0, mid))
    return IntegralResult(total, err, used)
