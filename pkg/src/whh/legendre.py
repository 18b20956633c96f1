"""Discrete Legendre-Fenchel conjugation and the functional means built on it.

A :class:`SampledFunction` is a convex function of one real variable known on a
uniform grid and taken to be ``+inf`` off ``[x_min, x_max]``. Its conjugate is
sampled on a :class:`DualGrid`:

    f*(s_j) = max_i (s_j x_i - f(x_i)).

Every mean below is assembled from conjugations and nonnegative combinations,
so the discrete objects inherit the order relations of the continuous ones
(Jensen for positive quadrature weights, ``f** <= f``, order reversal).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .measures import _interior
from .quadrature import gauss_jacobi_rule, mu_rule, nu_rule, nu_rule_split

__all__ = [
    "SampledFunction",
    "DualGrid",
    "LeqResult",
    "conjugate",
    "conjugate_scan",
    "biconjugate",
    "default_dual",
    "func_arith",
    "func_harm",
    "func_geom",
    "func_weighted_log_bb",
    "func_weighted_log_frak",
    "m_lambda_conjugate",
    "j_phi_conjugate",
    "pointwise_leq",
    "quadratic",
    "quadratic_coefficient",
]

CONVEX_RTOL = 1e-12
N_NU = 24
N_MU = 24
N_LAMBDA = 16
# guard for the nested quadrature in func_weighted_log_frak
MAX_CONJUGATIONS = 20000
DUAL_OVERSAMPLE = 4


@dataclass(frozen=True)
class SampledFunction:
    """Values on the uniform grid ``linspace(x_min, x_max, N)``, ``N >= 3``."""

    x_min: float
    x_max: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 3:
            raise ValueError("need at least 3 samples")
        if not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite (+inf is implicit off the grid)")
        if not float(self.x_min) < float(self.x_max):
            raise ValueError("x_min must be < x_max")
        v.setflags(write=False)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, f, x_min, x_max, n):
        x = np.linspace(x_min, x_max, n)
        return cls(x_min, x_max, np.asarray(f(x), dtype=float))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.values)))

    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.step

    def convex(self, rtol=CONVEX_RTOL) -> bool:
        return bool(np.all(np.diff(self.values, 2) >= -rtol * self.scale))

    def same_grid(self, other: "SampledFunction") -> bool:
        return (self.x_min, self.x_max, self.n) == (other.x_min, other.x_max, other.n)

    def as_dual(self) -> "DualGrid":
        return DualGrid(self.x_min, self.x_max, self.n)

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.x_min, self.x_max, values)

    def to_csv(self, path, header=True):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if header:
                w.writerow(["x", "value"])
            for xi, vi in zip(self.grid, self.values):
                w.writerow([repr(float(xi)), repr(float(vi))])

    @classmethod
    def from_csv(cls, path, rtol=1e-9):
        """Load a two-column ``x,value`` CSV (header optional); x must be uniform."""
        xs, vs = [], []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row:
                    continue
                try:
                    x, v = float(row[0]), float(row[1])
                except ValueError:
                    if i == 0:
                        continue
                    raise
                xs.append(x)
                vs.append(v)
        xs = np.array(xs)
        if xs.size < 3:
            raise ValueError("need at least 3 samples")
        expected = np.linspace(xs[0], xs[-1], xs.size)
        span = xs[-1] - xs[0]
        if not np.allclose(xs, expected, rtol=0.0, atol=rtol * abs(span)):
            raise ValueError("x column is not a uniform grid")
        return cls(xs[0], xs[-1], vs)


@dataclass(frozen=True)
class DualGrid:
    s_min: float
    s_max: float
    m: int

    def __post_init__(self):
        if not float(self.s_min) < float(self.s_max):
            raise ValueError("s_min must be < s_max")
        if int(self.m) < 3:
            raise ValueError("need at least 3 dual points")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, self.m)


class LeqResult(NamedTuple):
    holds: bool
    worst_margin: float
    worst_index: int


def default_dual(*fs: SampledFunction, pad=0.1) -> DualGrid:
    """Slope range of the inputs, widened by ``pad`` of its length on each side.

    The dual step follows the primal step (at least ``N`` and at most
    ``DUAL_OVERSAMPLE * N`` points): a coarse dual grid, not the primal one,
    limits the accuracy of a double conjugation when curvatures differ a lot.
    """
    slopes = np.concatenate([f.slopes() for f in fs])
    lo, hi = float(slopes.min()), float(slopes.max())
    width = hi - lo
    if width == 0.0:
        width = max(1.0, abs(lo))
    n = fs[0].n
    span = (1.0 + 2.0 * pad) * width
    m = int(np.clip(np.ceil(span / fs[0].step) + 1, n, DUAL_OVERSAMPLE * n))
    return DualGrid(lo - pad * width, hi + pad * width, m)


def _scan(x, v, s, chunk=512):
    out = np.empty(s.size)
    for j in range(0, s.size, chunk):
        sj = s[j : j + chunk]
        out[j : j + chunk] = np.max(sj[:, None] * x[None, :] - v[None, :], axis=1)
    return out


def _sweep(x, v, s):
    # For convex samples the maximiser index is nondecreasing in s: it is the
    # number of forward slopes strictly below s (ties go to the smaller index).
    slopes = np.diff(v) / np.diff(x)
    k = np.searchsorted(slopes, s, side="left")
    n = x.size
    best = s * x[k] - v[k]
    # neighbours absorb rounding in the slope comparison
    for off in (-1, 1):
        kk = np.clip(k + off, 0, n - 1)
        best = np.maximum(best, s * x[kk] - v[kk])
    return best


def _conj_values(x, v, s, convex):
    return _sweep(x, v, s) if convex else _scan(x, v, s)


def _is_convex(v, rtol=CONVEX_RTOL):
    return bool(np.all(np.diff(v, 2) >= -rtol * np.max(np.abs(v))))


def conjugate(f: SampledFunction, dual: DualGrid | None = None, method="auto") -> SampledFunction:
    """Discrete Fenchel conjugate of ``f`` sampled on ``dual``.

    ``method`` is ``"sweep"`` (monotone argmax; convex inputs only), ``"scan"``
    (direct O(N M) maximisation) or ``"auto"``.
    """
    dual = default_dual(f) if dual is None else dual
    s = dual.points
    if method == "auto":
        method = "sweep" if f.convex() else "scan"
    if method == "sweep":
        if not f.convex():
            raise ValueError("the sweep needs a convex input")
        vals = _sweep(f.grid, f.values, s)
    elif method == "scan":
        vals = _scan(f.grid, f.values, s)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = SampledFunction(dual.s_min, dual.s_max, vals)
    assert out.convex(rtol=1e-10), "conjugate must be convex"
    return out


def conjugate_scan(f: SampledFunction, dual: DualGrid | None = None) -> SampledFunction:
    return conjugate(f, dual, method="scan")


def biconjugate(f: SampledFunction, dual: DualGrid | None = None) -> SampledFunction:
    """``f**`` on the primal grid: the discrete convex envelope of ``f``."""
    dual = default_dual(f) if dual is None else dual
    return conjugate(conjugate(f, dual), f.as_dual())


def _check_pair(f, g, convex=True):
    if not f.same_grid(g):
        raise ValueError("functions must share a grid")
    if convex and not (f.convex() and g.convex()):
        raise ValueError("functional means need convex inputs")


def _weight(t):
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {t!r}")
    return t


def func_arith(f, g, t) -> SampledFunction:
    _check_pair(f, g, convex=False)
    t = _weight(t)
    if t == 0.0:
        return f
    if t == 1.0:
        return g
    return f.with_values((1.0 - t) * f.values + t * g.values)


class _Pair:
    """A pair on a shared grid with both conjugates cached on one dual grid."""

    def __init__(self, f, g, dual):
        _check_pair(f, g)
        self.f, self.g = f, g
        self.x = f.grid
        self.dual = default_dual(f, g) if dual is None else dual
        self.s = self.dual.points
        self.fs = _sweep(self.x, f.values, self.s)
        self.gs = _sweep(self.x, g.values, self.s)
        self.count = 2

    def harm_values(self, t):
        """Primal-grid samples of ``((1-t) f* + t g*)*``."""
        h = (1.0 - t) * self.fs + t * self.gs
        self.count += 1
        return _conj_values(self.s, h, self.x, _is_convex(h))

    def arith_conj(self, t):
        """Dual-grid samples of ``((1-t) f + t g)*``."""
        self.count += 1
        return _sweep(self.x, (1.0 - t) * self.f.values + t * self.g.values, self.s)

    def geom_values(self, t, n_mu):
        if t == 0.0:
            return self.f.values.copy()
        if t == 1.0:
            return self.g.values.copy()
        nodes, weights = mu_rule(t, n_mu)
        acc = np.zeros_like(self.x)
        for u, w in zip(nodes, weights):
            acc += w * self.harm_values(u)
        return acc

    def m_lambda(self, lam, n_nu, split=None):
        acc = np.zeros_like(self.s)
        for t, w in zip(*nu_rule_split(lam, n_nu, split)):
            acc += w * self.arith_conj(t)
        return acc


def func_harm(f, g, lam, dual=None) -> SampledFunction:
    """``((1-lam) f* + lam g*)*``; ``f`` at lam = 0 and ``g`` at lam = 1."""
    lam = _weight(lam)
    _check_pair(f, g)
    if lam == 0.0:
        return f
    if lam == 1.0:
        return g
    return f.with_values(_Pair(f, g, dual).harm_values(lam))


def func_geom(f, g, lam, dual=None, n_mu=N_MU) -> SampledFunction:
    """Weighted geometric mean as the mu_lam-average of weighted harmonic means."""
    lam = _weight(lam)
    _check_pair(f, g)
    if lam == 0.0:
        return f
    if lam == 1.0:
        return g
    return f.with_values(_Pair(f, g, dual).geom_values(lam, n_mu))


def m_lambda_conjugate(f, g, lam, dual=None, n_nu=N_NU, split=None) -> SampledFunction:
    """``int_0^1 ((1-t) f + t g)* dnu_lam(t)`` on the dual grid.

    ``split`` adds breakpoints to the nu-rule (e.g. the point ``a`` of the
    refinement bands, where the integrand of the coefficient has a kink).
    """
    lam = _interior(lam)
    pair = _Pair(f, g, dual)
    return SampledFunction(pair.dual.s_min, pair.dual.s_max, pair.m_lambda(lam, n_nu, split))


def func_weighted_log_bb(f, g, lam, dual=None, n_nu=N_NU, split=None) -> SampledFunction:
    """Conjugate of the nu_lam-average of the conjugated arithmetic path."""
    lam = _interior(lam)
    pair = _Pair(f, g, dual)
    m = pair.m_lambda(lam, n_nu, split)
    return f.with_values(_conj_values(pair.s, m, pair.x, _is_convex(m)))


def func_weighted_log_frak(f, g, lam, dual=None, n_nu=N_NU, n_mu=N_MU) -> SampledFunction:
    """nu_lam-average of the geometric path ``t -> f #_t g`` (nested quadrature)."""
    lam = _interior(lam)
    pair = _Pair(f, g, dual)
    nodes, weights = nu_rule(lam, n_nu)
    if nodes.size * n_mu > MAX_CONJUGATIONS:
        raise ValueError(f"nested quadrature would need {nodes.size * n_mu} conjugations")
    acc = np.zeros_like(pair.x)
    # fixed node order keeps the reduction bit-stable
    for t, w in zip(nodes, weights):
        acc += w * pair.geom_values(t, n_mu)
    return f.with_values(acc)


def j_phi_conjugate(f, g, dual=None, n_lambda=N_LAMBDA, n_nu=N_NU) -> SampledFunction:
    """``int_0^1 m_lambda_conjugate(f, g, lam) dlam`` by Gauss-Legendre in lam."""
    pair = _Pair(f, g, dual)
    rule = gauss_jacobi_rule(n_lambda)
    acc = np.zeros_like(pair.s)
    for lam, w in zip(rule.nodes, rule.weights):
        acc += w * pair.m_lambda(lam, n_nu)
    return SampledFunction(pair.dual.s_min, pair.dual.s_max, acc)


def pointwise_leq(f, g, tol=1e-8) -> LeqResult:
    """Does ``f <= g`` hold at every grid point up to ``tol * scale``?"""
    if not f.same_grid(g):
        raise ValueError("functions must share a grid")
    diff = g.values - f.values
    scale = max(f.scale, g.scale)
    i = int(np.argmin(diff))
    worst = float(diff[i])
    return LeqResult(worst >= -tol * scale, worst, i)


def quadratic(c, x_min=-4.0, x_max=4.0, n=401) -> SampledFunction:
    """``c x^2 / 2`` sampled on a uniform grid."""
    return SampledFunction.from_callable(lambda x: 0.5 * c * x * x, x_min, x_max, n)


def quadratic_coefficient(f: SampledFunction, window: float) -> float:
    """Least-squares ``c`` in ``f(x) ~ c0 + c x^2 / 2`` over ``|x| <= window``."""
    x = f.grid
    mask = np.abs(x) <= window
    design = np.column_stack([np.ones(mask.sum()), 0.5 * x[mask] ** 2])
    coef, *_ = np.linalg.lstsq(design, f.values[mask], rcond=None)
    return float(coef[1])
