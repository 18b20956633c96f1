"""Randomised verification campaigns over the scalar, functional and operator
realizations of the weighted Hermite-Hadamard inequalities and the means.

Every check records a *margin* normalised by a check-specific scale; an
instance fails when ``margin < -tol``. Trials draw from per-trial SplitMix64
streams and are reduced in trial order, so a config fully determines the
report.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import legendre as lg
from .. import measures as ms
from .. import operator_means as om
from .. import scalar_means as sm
from ..quadrature import gauss_jacobi_rule, integrate_nu, nu_rule, nu_rule_split
from .generators import random_convex, random_spd
from .report import Tally, build_report
from .rng import SplitMix64

J_NODES = 16
QUAD_R = 4.0
QUAD_PAIRS = ((1.0, 2.0), (0.5, 3.0), (2.0, 2.5))
J_ADAPTIVE_EVERY = 50

DEFAULT_TOLERANCES = {
    "scalar": 1e-9,
    "loewner": 1e-9,
    "equality": 1e-9,
    "collapse_scalar": 1e-8,
    "collapse_operator": 1e-6,
    "geom_integral": 1e-8,
    "quadratic_reduction": 2e-3,
}


@dataclass
class SweepConfig:
    seed: int = 0
    trials: int = 100
    lambda_grid: list = field(default_factory=list)
    a_grid: list = field(default_factory=list)
    grid_size: int = 401
    dim: int = 6
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for lam in self.lambda_grid:
            if not 0.0 < lam < 1.0:
                raise ValueError(f"lambda grid entries must be interior, got {lam}")
        for a in self.a_grid:
            if not 0.0 < a < 1.0:
                raise ValueError(f"a grid entries must lie in (0, 1), got {a}")
        if self.grid_size < 3:
            raise ValueError("grid_size must be >= 3")
        if not 1 <= self.dim <= om.MAX_DIM:
            raise ValueError(f"dim must be in [1, {om.MAX_DIM}]")
        self.tolerances = {**DEFAULT_TOLERANCES, **self.tolerances}

    def tol(self, name) -> float:
        return float(self.tolerances[name])

    def draw_lambda(self, rng, lo=0.02, hi=0.98):
        return rng.choice(self.lambda_grid) if self.lambda_grid else rng.uniform(lo, hi)

    def draw_a(self, rng):
        return rng.choice(self.a_grid) if self.a_grid else rng.uniform(0.05, 0.95)


def _interval(rng):
    lo, hi = sorted((rng.uniform(), rng.uniform()))
    if hi - lo < 1e-3:
        hi = min(1.0, lo + 1e-3)
    return lo, hi


# ---------------------------------------------------------------- scalar


def _chain(tally, cid, terms, scale, tol, **inst):
    """Record ``terms[0] <= terms[1] <= ...`` as one margin."""
    margin = min(terms[k + 1] - terms[k] for k in range(len(terms) - 1)) / scale
    tally.add(cid, margin, tol, **inst)


def _equal(tally, cid, x, y, scale, tol, **inst):
    tally.add(cid, -abs(x - y) / scale, tol, **inst)


def scalar_trial(cfg: SweepConfig, tally: Tally, rng: SplitMix64, index: int):
    a = float(rng.log_uniform(1e-2, 1e2))
    b = float(rng.log_uniform(1e-2, 1e2))
    lam = float(cfg.draw_lambda(rng))
    aref = float(cfg.draw_a(rng))
    lo, hi = _interval(rng)
    inst = dict(trial=index, a=a, b=b, lam=lam)
    tol = cfg.tol("scalar")
    big = max(a, b)
    inv_scale = 1.0 / min(a, b)
    qtol = 1e-12 * big

    ar, hr, ge = sm.arith(a, b, lam), sm.harm(a, b, lam), sm.geom(a, b, lam)
    _chain(tally, "harm-geom-arith", [hr, ge, ar], big, tol, **inst)

    mlam = sm.m_lambda_inversion(a, b, lam, tol=1e-12 * inv_scale)
    _chain(tally, "hermite-hadamard-inversion", [1.0 / ar, mlam, (1.0 - lam) / a + lam / b], inv_scale, tol, **inst)

    # sub-interval version; the Jensen step yields the weight (chi - xi) on f
    chi, xi = ms.nu_mass_chi(lam, (lo, hi)), ms.nu_moment_xi(lam, (lo, hi))
    part = integrate_nu(
        lam, lambda t: 1.0 / ((1.0 - t) * a + t * b), (lo, hi), tol=1e-12 * inv_scale, graded=True
    ).value
    lower = chi * chi / ((chi - xi) * a + xi * b)
    upper = (chi - xi) / a + xi / b
    _chain(tally, "hermite-hadamard-subinterval-inversion", [lower, part, upper], inv_scale, tol, **inst, lo=lo, hi=hi)

    # chain with the lam-average: the Lebesgue term and J share one fixed
    # Gauss-Legendre rule in lam, so the chain holds node by node
    lam_rule = gauss_jacobi_rule(J_NODES)
    inv_path = np.array([1.0 / sm.arith(a, b, l) for l in lam_rule.nodes])
    m_path = np.array([sm.m_lambda_inversion(a, b, l, tol=1e-12 * inv_scale) for l in lam_rule.nodes])
    lebesgue, jphi = lam_rule.integrate(inv_path), lam_rule.integrate(m_path)
    _chain(tally, "lambda-average-chain-inversion", [2.0 / (a + b), lebesgue, jphi, 0.5 / a + 0.5 / b], inv_scale, tol, **inst)
    if index % J_ADAPTIVE_EVERY == 0:
        # adaptive library path against the exact Lebesgue term
        exact = math.log(b / a) / (b - a) if abs(b - a) > 1e-12 * big else 1.0 / a
        jad = sm.j_phi_inversion(a, b, tol=1e-11 * inv_scale)
        _chain(tally, "lambda-average-chain-inversion-adaptive", [2.0 / (a + b), exact, jad, 0.5 / a + 0.5 / b], inv_scale, tol, **inst)

    m_rev = sm.m_lambda_inversion(b, a, 1.0 - lam, tol=1e-12 * inv_scale)
    _equal(tally, "weight-swap-symmetry-inversion", mlam, m_rev, inv_scale, cfg.tol("equality"), **inst)

    d2 = abs(sm.m_lambda_inversion(a, b, 1e-2, tol=1e-12 * inv_scale) - 1.0 / a)
    d3 = abs(sm.m_lambda_inversion(a, b, 1e-3, tol=1e-12 * inv_scale) - 1.0 / a)
    e2 = abs(sm.m_lambda_inversion(a, b, 1 - 1e-2, tol=1e-12 * inv_scale) - 1.0 / b)
    e3 = abs(sm.m_lambda_inversion(a, b, 1 - 1e-3, tol=1e-12 * inv_scale) - 1.0 / b)
    tally.add("limit-lambda-0-1", min(d2 - d3, e2 - e3) / inv_scale, tol, **inst)

    # refinement bands; for scalars the harmonic-band and log-mean variants
    # coincide with the inversion one, each is evaluated through its own path
    rhs = (1.0 - lam) / a + lam / b
    bb = sm.weighted_log_bb(a, b, lam, tol=qtol).value
    fa, gb = 1.0 / a, 1.0 / b
    for tag, aa in (("at-a", aref), ("at-half", 0.5)):
        lo_c, hi_c = _band(aa, lam)
        d = (1.0 - aa) / a + aa / b - 1.0 / ((1.0 - aa) * a + aa * b)
        m_split = integrate_split(lam, lambda t: 1.0 / ((1.0 - t) * a + t * b), aa, 1e-12 * inv_scale)
        _chain(tally, f"refinement-{tag}-inversion", [lo_c * d, rhs - m_split, hi_c * d], inv_scale, tol, **inst, aref=aa)
        # F = 1/a, G = 1/b: F !_t G = 1 / ((1-t) a + t b)
        dh = sm.arith(fa, gb, aa) - sm.harm(fa, gb, aa)
        h_int = integrate_split(lam, lambda t: 1.0 / ((1.0 - t) / fa + t / gb), aa, 1e-12 * inv_scale)
        _chain(
            tally, f"refinement-{tag}-harmonic-inversion",
            [lo_c * dh, sm.arith(fa, gb, lam) - h_int, hi_c * dh], inv_scale, tol, **inst, aref=aa,
        )
        _chain(
            tally, f"refinement-{tag}-log-mean-inversion", [lo_c * d, rhs - 1.0 / bb, hi_c * d],
            inv_scale, tol, **inst, aref=aa,
        )

    frak = sm.weighted_log_frak(a, b, lam, tol=qtol).value
    closed = sm.weighted_log_closed(a, b, lam).value
    for cid, val in (("bounds-frak", frak), ("bounds-bb", bb), ("bounds-closed", closed)):
        _chain(tally, cid, [hr, val, ar], big, tol, **inst)
    harm_nu = integrate_nu(lam, lambda t: 1.0 / ((1.0 - t) / a + t / b), tol=qtol, graded=True).value
    _chain(tally, "log-mean-chain", [hr, harm_nu, frak, ar], big, tol, **inst)

    h = rng.log_uniform(0.1, 10.0)
    inst_h = dict(inst, c=float(h))
    _equal(tally, "homogeneity-frak", sm.weighted_log_frak(h * a, h * b, lam, tol=h * qtol).value, h * frak, h * big, tol, **inst_h)
    _equal(tally, "homogeneity-bb", sm.weighted_log_bb(h * a, h * b, lam, tol=h * qtol).value, h * bb, h * big, tol, **inst_h)
    _equal(tally, "homogeneity-closed", sm.weighted_log_closed(h * a, h * b, lam).value, h * closed, h * big, tol, **inst_h)

    ctol = cfg.tol("collapse_scalar")
    f12 = sm.weighted_log_frak(a, b, 0.5, tol=qtol).value
    b12 = sm.weighted_log_bb(a, b, 0.5, tol=qtol).value
    c12 = sm.weighted_log_closed(a, b, 0.5).value
    lm = sm.log_mean(a, b)
    sc = max(1.0, big)
    tally.add(
        "collapse-lambda-1/2",
        -max(abs(f12 - b12), abs(f12 - c12), abs(c12 - lm)) / sc, ctol, trial=index, a=a, b=b,
    )

    m_c, big_m = ms.m_coeff(aref, lam), ms.M_coeff(aref, lam)
    al, be = ms.alpha_beta(lam)
    tally.add("coefficients-m-le-M", min(m_c, big_m - m_c), 1e-15, **inst, aref=aref)
    _equal(tally, "coefficients-alpha-plus-beta", al + be, 2.0, 1.0, 1e-13, lam=lam)
    bb_ = rng.uniform()
    tally.add("coefficients-r-le-1-le-R", min(1.0 - ms.r_coeff(aref, bb_), ms.R_coeff(aref, bb_) - 1.0), 1e-15, aref=aref, b=bb_)


def _band(aa, lam):
    """Coefficients of the refinement band at reference point ``aa``."""
    if aa == 0.5:
        return tuple(ms.alpha_beta(lam))
    return ms.m_coeff(aa, lam), ms.M_coeff(aa, lam)


def integrate_split(lam, f, point, tol):
    """``int_0^1 f dnu_lam`` on the graded rule with a breakpoint at ``point``."""
    return integrate_nu(lam, f, tol=tol, graded=True, split=point).value


# ------------------------------------------------------------- functional


def _fleq(tally, cid, chain, tol, scale=None, **inst):
    """Pointwise chain of arrays on a common grid; margins are relative to
    ``scale`` (default: the largest magnitude in the chain)."""
    if scale is None:
        scale = max(float(np.max(np.abs(c))) for c in chain)
    margin = min(float(np.min(chain[k + 1] - chain[k])) for k in range(len(chain) - 1)) / max(scale, 1e-300)
    tally.add(cid, margin, tol, **inst)


def _conj(x, v, s):
    return lg._conj_values(x, v, s, lg._is_convex(v))


def pointwise_tol(cfg, step):
    """Pointwise tolerance of the functional suites (relative to the values)."""
    tol = cfg.tolerances.get("pointwise")
    return 5.0 * (step + 1e-9) if tol is None else float(tol)


def functional_pair_checks(cfg, tally, f, g, lam, aref, lo, hi, inst):
    tol = pointwise_tol(cfg, f.step)
    pair = lg._Pair(f, g, None)
    x, s = pair.x, pair.s
    fs, gs = pair.fs, pair.gs
    n_nu = lg.N_NU

    # weighted HH for conjugation (Jensen with the positive nu-rule)
    mlam = pair.m_lambda(lam, n_nu)
    _fleq(tally, "hermite-hadamard-conjugation", [pair.arith_conj(lam), mlam, (1 - lam) * fs + lam * gs], tol, **inst)

    chi, xi = ms.nu_mass_chi(lam, (lo, hi)), ms.nu_moment_xi(lam, (lo, hi))
    part = np.zeros_like(s)
    for t, w in zip(*nu_rule(lam, n_nu, (lo, hi))):
        part += w * pair.arith_conj(t)
    _fleq(
        tally, "hermite-hadamard-subinterval-conjugation",
        [chi * pair.arith_conj(xi / chi), part, (chi - xi) * fs + xi * gs], tol, **inst, lo=lo, hi=hi,
    )

    rule = gauss_jacobi_rule(lg.N_LAMBDA)
    leb = np.zeros_like(s)
    jphi = np.zeros_like(s)
    for u, w in zip(rule.nodes, rule.weights):
        leb += w * pair.arith_conj(u)
        jphi += w * pair.m_lambda(u, n_nu)
    _fleq(tally, "lambda-average-chain-conjugation", [pair.arith_conj(0.5), leb, jphi, 0.5 * (fs + gs)], tol, **inst)

    rev = lg._Pair(g, f, pair.dual).m_lambda(1.0 - lam, n_nu)
    sc = max(np.max(np.abs(mlam)), 1.0)
    tally.add("weight-swap-symmetry-conjugation", -float(np.max(np.abs(rev - mlam))) / sc, 1e-9, **inst)

    d2 = np.max(np.abs(pair.m_lambda(1e-2, n_nu) - fs))
    d3 = np.max(np.abs(pair.m_lambda(1e-3, n_nu) - fs))
    e2 = np.max(np.abs(pair.m_lambda(1 - 1e-2, n_nu) - gs))
    e3 = np.max(np.abs(pair.m_lambda(1 - 1e-3, n_nu) - gs))
    tally.add("limit-lambda-0-1-conjugation", float(min(d2 - d3, e2 - e3)) / sc, tol, **inst)

    # refinement bands (Phi = conjugation); the nu-rules are split at the
    # reference point, where the coefficient integrands have a kink
    rhs = (1 - lam) * fs + lam * gs
    rscale = max(float(np.max(np.abs(rhs))), float(np.max(np.abs(fs))), float(np.max(np.abs(gs))))
    ff, gg = _conj(s, fs, x), _conj(s, gs, x)  # f**, g** on the primal grid

    def harm_dual(t):
        # f* !_t g* on the dual grid
        return _conj(x, (1 - t) * ff + t * gg, s)

    for tag, aa in (("at-a", aref), ("at-half", 0.5)):
        lo_c, hi_c = _band(aa, lam)
        binst = dict(inst, aref=aa)
        d = (1 - aa) * fs + aa * gs - pair.arith_conj(aa)
        m_split = pair.m_lambda(lam, n_nu, split=aa)
        _fleq(tally, f"refinement-{tag}-conjugation", [lo_c * d, rhs - m_split, hi_c * d], tol, rscale, **binst)
        # (L_lam(f, g))* with L_lam(f, g) = (m_split)*
        bb_star = _conj(x, _conj(s, m_split, x), s)
        _fleq(tally, f"refinement-{tag}-log-mean-conjugation", [lo_c * d, rhs - bb_star, hi_c * d], tol, rscale, **binst)
        dh = (1 - aa) * fs + aa * gs - harm_dual(aa)
        h_int = np.zeros_like(s)
        for t, w in zip(*nu_rule_split(lam, n_nu, aa)):
            h_int += w * harm_dual(t)
        _fleq(tally, f"refinement-{tag}-harmonic-conjugation", [lo_c * dh, rhs - h_int, hi_c * dh], tol, rscale, **binst)

    # orderings of the functional means
    fv, gv = f.values, g.values
    arith_l = (1 - lam) * fv + lam * gv
    harm_l = pair.harm_values(lam)
    geom_l = pair.geom_values(lam, lg.N_MU)
    _fleq(tally, "harm-geom-arith-functional", [harm_l, geom_l, arith_l], tol, **inst)
    bb = _conj(s, mlam, x)
    _fleq(tally, "bounds-bb-functional", [harm_l, bb, arith_l], tol, **inst)
    frak = np.zeros_like(x)
    left = np.zeros_like(x)
    for t, w in zip(*nu_rule(lam, n_nu)):
        frak += w * pair.geom_values(t, lg.N_MU)
        # ((1-t) f** + t g**)* conjugated back: f !_t g on the primal grid
        left += w * pair.harm_values(t)
    _fleq(tally, "log-mean-chain-functional", [harm_l, left, frak, arith_l], tol, **inst)

    # orders and the conjugation engine
    sweep = lg._sweep(x, fv, s)
    scan = lg._scan(x, fv, s)
    tally.add("conjugate-sweep-equals-scan", -float(np.max(np.abs(sweep - scan))), 0.0, **inst)
    fss = _conj(s, fs, x)
    _fleq(tally, "biconjugate-le-f", [fss, fv], 1e-12, **inst)
    lip = float(np.max(np.abs(f.slopes())))
    tally.add("biconjugate-envelope-gap", (5 * f.step * lip - float(np.max(fv - fss))) / max(lip, 1.0), 0.0, **inst)
    bump = f.with_values(fv + np.abs(np.sin(7.0 * x)) * 0.1)
    _fleq(tally, "order-reversal", [lg._scan(x, bump.values, s), fs], 1e-12, **inst)

    # lam = 1/2: the nu-route and the Lebesgue-route to the logarithmic mean
    half = np.zeros_like(x)
    for t, w in zip(*nu_rule(0.5, n_nu)):
        half += w * pair.geom_values(t, lg.N_MU)
    leb_rule = gauss_jacobi_rule(n_nu)
    leb_l = np.zeros_like(x)
    for t, w in zip(leb_rule.nodes, leb_rule.weights):
        leb_l += w * pair.geom_values(t, lg.N_MU)
    sc = max(float(np.max(np.abs(leb_l))), 1.0)
    tally.add("collapse-lambda-1/2-functional", -float(np.max(np.abs(half - leb_l))) / sc, 1e-8, **inst)


def quadratic_reduction_checks(cfg, tally, ca, cb, lam, n, inst):
    tol = cfg.tol("quadratic_reduction")
    # on [-R, R] the conjugates are exact quadratics only for |s| <= R min(c),
    # so the means are quadratic on |x| <= R min(c) / max(c)
    f, g = lg.quadratic(ca, -QUAD_R, QUAD_R, n), lg.quadratic(cb, -QUAD_R, QUAD_R, n)
    window = 0.9 * QUAD_R * min(ca, cb) / max(ca, cb)
    coef = lambda h: lg.quadratic_coefficient(h, window)
    pairs = [
        ("harm", coef(lg.func_harm(f, g, lam)), sm.harm(ca, cb, lam)),
        ("geom", coef(lg.func_geom(f, g, lam)), sm.geom(ca, cb, lam)),
        ("bb", coef(lg.func_weighted_log_bb(f, g, lam)), sm.weighted_log_bb(ca, cb, lam).value),
        ("frak", coef(lg.func_weighted_log_frak(f, g, lam)), sm.weighted_log_frak(ca, cb, lam).value),
    ]
    for name, got, want in pairs:
        tally.add(f"quadratic-reduction-{name}", -abs(got - want), tol, **inst, ca=ca, cb=cb, got=got, want=want)
    mq = lg.m_lambda_conjugate(f, g, lam)
    swin = 0.9 * QUAD_R * min(ca, cb)
    got = lg.quadratic_coefficient(mq, swin)
    tally.add(
        "quadratic-reduction-m-lambda", -abs(got - sm.m_lambda_inversion(ca, cb, lam)), tol,
        **inst, ca=ca, cb=cb,
    )


def functional_trial(cfg, tally, rng, index):
    n = cfg.grid_size
    lam = float(cfg.draw_lambda(rng, 0.05, 0.95))
    aref = float(cfg.draw_a(rng))
    lo, hi = _interval(rng)
    f = random_convex(rng, n)
    g = f if index == 0 else random_convex(rng, n)
    inst = dict(trial=index, lam=lam, degenerate=index == 0)
    functional_pair_checks(cfg, tally, f, g, lam, aref, lo, hi, inst)
    if index == 0:
        # f = g: every mean returns f and the Hermite-Hadamard chain collapses
        pair = lg._Pair(f, f, None)
        m = pair.m_lambda(lam, lg.N_NU)
        tally.add("degenerate-f-eq-g", -float(np.max(np.abs(m - pair.fs))) / max(1.0, np.max(np.abs(m))), 1e-12, trial=index)
    if index == 1 or index % 10 == 5:
        ca, cb = float(rng.log_uniform(0.5, 5.0)), float(rng.log_uniform(0.5, 5.0))
        quadratic_reduction_checks(cfg, tally, ca, cb, lam, n, dict(trial=index, lam=lam))


# --------------------------------------------------------------- operator


def _lchain(tally, cid, mats, tol, scale=None, **inst):
    """Loewner chain; each link's min eigenvalue is divided by ``scale``
    (default: the spectral norms of the link, as in :func:`loewner_leq`)."""
    worst = math.inf
    for x, y in zip(mats[:-1], mats[1:]):
        chk = om.loewner_leq(x, y, tol)
        norm = scale if scale is not None else chk.tolerance_used / tol
        worst = min(worst, chk.min_eig_of_difference / max(norm, 1e-300))
    tally.add(cid, worst, tol, **inst)


def _fro(x, y):
    return float(np.linalg.norm(np.asarray(x) - np.asarray(y)))


def operator_trial(cfg, tally, rng, index):
    dim = cfg.dim
    lam = float(cfg.draw_lambda(rng, 0.05, 0.95))
    aref = float(cfg.draw_a(rng))
    if index == 0:
        a = random_spd(rng, dim)
        b = a
    elif index == 1:
        a = om.SpdMatrix(np.diag(rng.log_uniform(1e-2, 1e2, dim)))
        b = om.SpdMatrix(np.diag(rng.log_uniform(1e-2, 1e2, dim)))
    else:
        a, b = random_spd(rng, dim), random_spd(rng, dim)
    inst = dict(trial=index, lam=lam)
    tol = cfg.tol("loewner")

    for cid, l in (("hermite-hadamard-operator-midpoint", 0.5), ("hermite-hadamard-operator", lam)):
        rep = om.hh_operator_chain(a, b, l, tol)
        _lchain(tally, cid, list(rep["terms"]), tol, **inst)
    if index == 0:
        terms = om.hh_operator_chain(a, b, lam, tol)["terms"]
        sc = max(_fro(terms[0], 0), 1.0)
        tally.add("identity-pair-zero-margin", -max(_fro(terms[0], terms[1]), _fro(terms[1], terms[2])) / sc, 1e-12, **inst)

    harm_l, geom_l, arith_l = om.op_harm(a, b, lam), om.op_geom(a, b, lam), om.op_arith(a, b, lam)
    _lchain(tally, "harm-geom-arith-operator", [harm_l, geom_l, arith_l], tol, **inst)
    bb = om.op_weighted_log_bb(a, b, lam)
    frak = om.op_weighted_log_frak(a, b, lam)
    _lchain(tally, "bounds-bb-operator", [harm_l, bb, arith_l], tol, **inst)
    _lchain(tally, "log-mean-chain-operator", [harm_l, om.op_nu_harm_integral(a, b, lam), frak, arith_l], tol, **inst)

    ai, bi = a.inv().entries, b.inv().entries
    rhs = (1 - lam) * ai + lam * bi
    rscale = a.inv().norm() + b.inv().norm()
    for tag, aa in (("at-a", aref), ("at-half", 0.5)):
        lo_c, hi_c = _band(aa, lam)
        d = (1 - aa) * ai + aa * bi - om.op_arith(a, b, aa).inv().entries
        mid = rhs - om.op_m_lambda_inversion(a, b, lam, split=aa).entries
        _lchain(tally, f"refinement-{tag}-operator", [lo_c * d, mid, hi_c * d], tol, rscale, **inst, aref=aa)
        # harmonic band with F = A^-1, G = B^-1 evaluated through op_harm
        fa, gb = a.inv(), b.inv()
        dh = om.op_arith(fa, gb, aa).entries - om.op_harm(fa, gb, aa).entries
        h_int = om.op_nu_harm_integral(fa, gb, lam, split=aa).entries
        _lchain(
            tally, f"refinement-{tag}-harmonic-operator",
            [lo_c * dh, rhs - h_int, hi_c * dh], tol, rscale, **inst, aref=aa,
        )

    m1 = om.op_m_lambda_inversion(a, b, lam)
    m2 = om.op_m_lambda_inversion(b, a, 1.0 - lam)
    tally.add("weight-swap-symmetry-operator", -_fro(m1, m2) / max(m1.norm(), 1.0), cfg.tol("equality"), **inst)

    for l in (0.2, 0.5, 0.8):
        err = _fro(om.op_geom_integral(a, b, l), om.op_geom(a, b, l))
        tally.add("geom-integral-representation", -err, cfg.tol("geom_integral"), **inst, mu_lam=l)
    tally.add(
        "collapse-lambda-1/2-operator",
        -_fro(om.op_weighted_log_bb(a, b, 0.5), om.op_weighted_log_frak(a, b, 0.5)),
        cfg.tol("collapse_operator"), **inst,
    )

    g1, g2 = om.op_geom(a, b, lam), om.op_geom(b, a, 1.0 - lam)
    tally.add("geom-swap-symmetry", -_fro(g1, g2) / max(g1.norm(), 1.0), 1e-10, **inst)
    tdiag = np.diag(rng.log_uniform(0.5, 2.0, dim))
    ta = om.SpdMatrix(tdiag @ a.entries @ tdiag)
    tb = om.SpdMatrix(tdiag @ b.entries @ tdiag)
    cong = tdiag @ g1.entries @ tdiag
    tally.add("geom-congruence", -_fro(om.op_geom(ta, tb, lam), cong) / max(np.linalg.norm(cong), 1.0), 1e-9, **inst)

    if index == 1:
        da, db = np.diag(a.entries), np.diag(b.entries)
        want = np.array([sm.weighted_log_bb(x, y, lam).value for x, y in zip(da, db)])
        scale = max(1.0, float(np.max(want)))
        tally.add("commuting-matches-scalar", -float(np.max(np.abs(np.diag(bb.entries) - want))) / scale, 1e-8, **inst)
        want = np.array([sm.weighted_log_frak(x, y, lam).value for x, y in zip(da, db)])
        tally.add("commuting-matches-scalar", -float(np.max(np.abs(np.diag(frak.entries) - want))) / scale, 1e-8, **inst)


# ---------------------------------------------------------- open problem


def _log_mean_gap(f, g, window=None):
    """Relative sup-norm distance between the two lam = 1/2 functional
    logarithmic means, optionally restricted to ``|x| <= window``."""
    bb = lg.func_weighted_log_bb(f, g, 0.5).values
    frak = lg.func_weighted_log_frak(f, g, 0.5).values
    mask = np.ones(bb.size, bool) if window is None else np.abs(f.grid) <= window
    diff = np.abs(bb - frak)[mask]
    scale = max(float(np.max(np.abs(bb[mask]))), float(np.max(np.abs(frak[mask]))), 1e-300)
    k = int(np.argmax(diff))
    return float(diff[k]) / scale, int(np.flatnonzero(mask)[k])


def open_problem_search(cfg: SweepConfig) -> dict:
    """Largest observed gap between the two logarithmic functional means.

    Numerical evidence only: a gap below the discretisation tolerance proves
    nothing, and a gap above it may still be a discretisation artefact.
    """
    root = SplitMix64(cfg.seed)
    n = cfg.grid_size
    best = None
    for i in range(cfg.trials):
        rng = root.spawn(i)
        f, g = random_convex(rng, n), random_convex(rng, n)
        gap, k = _log_mean_gap(f, g)
        if best is None or gap > best[0]:
            best = (gap, i, k, f, g)
    gap, trial, k, f, g = best
    tol = cfg.tolerances.get("combined")
    tol = pointwise_tol(cfg, f.step) if tol is None else float(tol)
    quad = []
    for ca, cb in QUAD_PAIRS:
        qf, qg = lg.quadratic(ca, -QUAD_R, QUAD_R, n), lg.quadratic(cb, -QUAD_R, QUAD_R, n)
        qtol = pointwise_tol(cfg, qf.step) if cfg.tolerances.get("combined") is None else tol
        qgap, _ = _log_mean_gap(qf, qg, 0.9 * QUAD_R * min(ca, cb) / max(ca, cb))
        quad.append({"a": ca, "b": cb, "discrepancy": qgap, "tolerance": qtol, "within_tolerance": qgap <= qtol})
    af = lg.SampledFunction.from_callable(np.abs, -1.0, 1.0, n)
    ag = lg.quadratic(1.0, -1.0, 1.0, n)
    abs_gap, abs_k = _log_mean_gap(af, ag)
    return {
        "schema": 1,
        "command": "search-open-problem",
        "label": "numerical evidence only",
        "config": asdict(cfg),
        "max_discrepancy": gap,
        "argmax_pair": {
            "trial": trial,
            "grid_index": k,
            "x": float(f.grid[k]),
            "x_min": f.x_min,
            "x_max": f.x_max,
            "f": f.values.tolist(),
            "g": g.values.tolist(),
        },
        "tolerance": tol,
        "exceeds_tolerance": gap > tol,
        "quadratic_pairs": quad,
        "abs_vs_half_square": {"discrepancy": abs_gap, "x": float(af.grid[abs_k])},
    }


# ----------------------------------------------------------------- driver

TRIALS = {
    "verify-scalar": scalar_trial,
    "verify-functional": functional_trial,
    "verify-operator": operator_trial,
}


def run(command: str, cfg: SweepConfig) -> dict:
    trial = TRIALS[command]
    root = SplitMix64(cfg.seed)
    tally = Tally()
    for i in range(cfg.trials):
        trial(cfg, tally, root.spawn(i), i)
    return build_report(command, asdict(cfg), tally)
