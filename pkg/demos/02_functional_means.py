"""
Means of convex functions through conjugation
=============================================

Sampled convex functions, their discrete conjugates and the functional means
built from them. For quadratics f_c(x) = c x^2 / 2 every mean is again a
quadratic whose coefficient is the scalar mean of the coefficients.
"""

# %%
import numpy as np

from whh import legendre as lg
from whh import scalar_means as sm
from whh.harness.generators import random_convex
from whh.harness.rng import SplitMix64

# %%
# The conjugate of f_2 is f_{1/2}; on a grid the error is at most c h^2 / 8.
f2 = lg.quadratic(2.0, -4, 4, 401)
f2s = lg.conjugate(f2, lg.DualGrid(-6, 6, 401))
print("max |f2* - s^2/4| =", np.max(np.abs(f2s.values - f2s.grid**2 / 4)))

# %%
# The biconjugate is the convex envelope: the double well x^4 - x^2 gets a flat
# segment at level -1/4.
well = lg.SampledFunction.from_callable(lambda x: x**4 - x**2, -2, 2, 401)
env = lg.biconjugate(well, lg.DualGrid(-30, 30, 4001))
print("envelope at 0:", env.values[200])

# %%
# Quadratic reductions: the fitted coefficient of each mean against the
# scalar mean of (2, 4) at lam = 2/3.
f, g = lg.quadratic(2.0), lg.quadratic(4.0)
lam = 2 / 3
fit = lambda h: lg.quadratic_coefficient(h, 1.8)
print("harm", fit(lg.func_harm(f, g, lam)), sm.harm(2, 4, lam))
print("geom", fit(lg.func_geom(f, g, lam)), sm.geom(2, 4, lam))
print("bb  ", fit(lg.func_weighted_log_bb(f, g, lam)), sm.weighted_log_bb(2, 4, lam).value)
print("frak", fit(lg.func_weighted_log_frak(f, g, lam)), sm.weighted_log_frak(2, 4, lam).value)

# %%
# For a random convex pair the means are ordered pointwise:
# harm <= bb <= arith and harm <= frak <= arith.
rng = SplitMix64(4)
f, g = random_convex(rng, 401), random_convex(rng, 401)
harm, arith = lg.func_harm(f, g, lam), lg.func_arith(f, g, lam)
for mean in (lg.func_weighted_log_bb, lg.func_weighted_log_frak):
    m = mean(f, g, lam)
    print(mean.__name__, lg.pointwise_leq(harm, m).worst_margin, lg.pointwise_leq(m, arith).worst_margin)
