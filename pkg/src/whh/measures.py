"""Closed-form scalar functions attached to the weight measures on [0, 1].

``nu`` is the two-term power-law measure

    dnu_lam(t) = ((1-lam) (1-t)^((1-2 lam)/lam) + lam t^((2 lam-1)/(1-lam))) dt,

a probability measure with mean ``lam`` that reduces to Lebesgue measure at
``lam = 1/2``. ``mu`` is the Beta(lam, 1-lam) law used in the integral
representation of the weighted geometric mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Weight",
    "SubInterval",
    "CoefficientPair",
    "nu_exponents",
    "nu_density",
    "nu_moment_xi",
    "nu_mass_chi",
    "mu_density",
    "r_coeff",
    "R_coeff",
    "alpha_xy",
    "integral_r_closed",
    "integral_R_closed",
    "m_coeff",
    "M_coeff",
    "alpha_beta",
]


@dataclass(frozen=True)
class Weight:
    """A weight ``lam`` in [0, 1]."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not (0.0 <= lam <= 1.0):  # also rejects NaN
            raise ValueError(f"weight must lie in [0, 1], got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    def interior(self) -> bool:
        return 0.0 < self.lam < 1.0

    def complement(self) -> "Weight":
        return Weight(1.0 - self.lam)

    def __float__(self) -> float:
        return self.lam


@dataclass(frozen=True)
class SubInterval:
    """A sub-interval ``[a, b]`` of [0, 1] with ``a < b``."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (0.0 <= a < b <= 1.0):
            raise ValueError(f"need 0 <= a < b <= 1, got a={self.a!r}, b={self.b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


class CoefficientPair(NamedTuple):
    lower: float
    upper: float


def _interior(lam) -> float:
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise ValueError(f"an interior weight 0 < lam < 1 is required, got {lam!r}")
    return lam


def _unit(x, name="x") -> float:
    x = float(x)
    if not (0.0 < x < 1.0):
        raise ValueError(f"{name} must lie in (0, 1), got {x!r}")
    return x


def _subinterval(iv) -> SubInterval:
    if isinstance(iv, SubInterval):
        return iv
    a, b = iv
    return SubInterval(a, b)


def _pow01(base: float, p: float) -> float:
    """``base**p`` through log/exp for bases in [0, 1]."""
    assert 0.0 <= base <= 1.0, base
    if base == 0.0:
        if p > 0.0:
            return 0.0
        if p == 0.0:
            return 1.0
        return math.inf
    return math.exp(p * math.log(base))


def nu_exponents(lam) -> tuple[float, float]:
    """Exponents ``(p, q)`` of the factors ``(1-t)^p`` and ``t^q`` in the nu density."""
    lam = _interior(lam)
    return (1.0 - 2.0 * lam) / lam, (2.0 * lam - 1.0) / (1.0 - lam)


def nu_density(lam, t):
    """Density of ``nu_lam`` at ``t`` in (0, 1); accepts scalars or arrays."""
    lam = _interior(lam)
    p, q = nu_exponents(lam)
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise ValueError("t must lie in [0, 1]")
    if (p < 0 and np.any(t_arr == 1.0)) or (q < 0 and np.any(t_arr == 0.0)):
        raise ValueError("nu density is singular at this endpoint")
    with np.errstate(divide="ignore"):
        out = (1.0 - lam) * np.power(1.0 - t_arr, p) + lam * np.power(t_arr, q)
    return float(out) if out.ndim == 0 else out


def nu_mass_chi(lam, iv) -> float:
    """``nu_lam([a, b])`` in closed form."""
    lam = _interior(lam)
    iv = _subinterval(iv)
    a, b = iv.a, iv.b
    u = (1.0 - lam) / lam
    v = lam / (1.0 - lam)
    return lam * (_pow01(1.0 - a, u) - _pow01(1.0 - b, u)) + (1.0 - lam) * (
        _pow01(b, v) - _pow01(a, v)
    )


def nu_moment_xi(lam, iv) -> float:
    """First moment ``int_a^b t dnu_lam(t)`` in closed form."""
    lam = _interior(lam)
    iv = _subinterval(iv)
    a, b = iv.a, iv.b
    il, ilc = 1.0 / lam, 1.0 / (1.0 - lam)
    u = (1.0 - lam) / lam
    return lam * (1.0 - lam) * (
        _pow01(1.0 - b, il) + _pow01(b, ilc) - _pow01(1.0 - a, il) - _pow01(a, ilc)
    ) - lam * (_pow01(1.0 - b, u) - _pow01(1.0 - a, u))


def mu_density(lam, t):
    """Density ``sin(pi lam)/pi * t^(lam-1) (1-t)^(-lam)`` of the Beta(lam, 1-lam) law."""
    lam = _interior(lam)
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 0.0) | ~(t_arr < 1.0)):
        raise ValueError("mu density is singular at t = 0 and t = 1")
    out = math.sin(math.pi * lam) / math.pi * np.power(t_arr, lam - 1.0) * np.power(1.0 - t_arr, -lam)
    return float(out) if out.ndim == 0 else out


def r_coeff(a, b) -> float:
    a = _unit(a, "a")
    return min(b / a, (1.0 - b) / (1.0 - a))


def R_coeff(a, b) -> float:
    a = _unit(a, "a")
    return max(b / a, (1.0 - b) / (1.0 - a))


def alpha_xy(x, y, *, allow_limit=False) -> float:
    """``y^2 (1 - x^((1-y)/y)) / (1 - x)``.

    At ``x = 1`` the quotient is 0/0; its limit ``y (1 - y)`` is returned only
    when ``allow_limit`` is set.
    """
    x, y = float(x), float(y)
    if not (0.0 <= x <= 1.0) or not (0.0 < y < 1.0):
        raise ValueError(f"alpha_xy needs x in [0, 1] and y in (0, 1), got {x!r}, {y!r}")
    if x == 1.0:
        if allow_limit:
            return y * (1.0 - y)
        raise ValueError("alpha_xy is undefined at x = 1 (pass allow_limit=True for the limit)")
    return y * y * (1.0 - _pow01(x, (1.0 - y) / y)) / (1.0 - x)


def integral_r_closed(a, lam) -> float:
    """``int_0^1 r(a, b) dnu_lam(b)``."""
    a = _unit(a, "a")
    lam = _interior(lam)
    return alpha_xy(a, 1.0 - lam) + alpha_xy(1.0 - a, lam)


def integral_R_closed(a, lam) -> float:
    """``int_0^1 R(a, b) dnu_lam(b)``."""
    a = _unit(a, "a")
    lam = _interior(lam)
    return lam / a + (1.0 - lam) / (1.0 - a) - alpha_xy(a, 1.0 - lam) - alpha_xy(1.0 - a, lam)


def m_coeff(a, lam) -> float:
    """Lower refinement coefficient ``m(a, lam)``."""
    a = _unit(a, "a")
    lam = _interior(lam)
    return (1.0 - lam) ** 2 * (1.0 - _pow01(a, lam / (1.0 - lam))) / (1.0 - a) + lam**2 * (
        1.0 - _pow01(1.0 - a, (1.0 - lam) / lam)
    ) / a


def M_coeff(a, lam) -> float:
    """Upper refinement coefficient ``M(a, lam)``."""
    a = _unit(a, "a")
    lam = _interior(lam)
    return (1.0 - lam) / (1.0 - a) + lam / a - m_coeff(a, lam)


def alpha_beta(lam) -> CoefficientPair:
    """``(m(1/2, lam), M(1/2, lam))``; the two always sum to 2."""
    pair = CoefficientPair(m_coeff(0.5, lam), M_coeff(0.5, lam))
    assert 0.0 <= pair.lower <= pair.upper, pair
    return pair
