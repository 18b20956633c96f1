"""
Means of positive-definite matrices
===================================

Weighted arithmetic, harmonic and geometric means of SPD matrices, the
integral representation of the geometric mean, and Loewner-order checks.
"""

# %%
import numpy as np

from whh import operator_means as om
from whh.harness.generators import random_spd
from whh.harness.rng import SplitMix64

rng = SplitMix64(3)
a, b = random_spd(rng, 4), random_spd(rng, 4)
lam = 0.3

# %%
# harm <= geom <= arith in the Loewner order; the margin is the smallest
# eigenvalue of the difference.
h, g, ar = om.op_harm(a, b, lam), om.op_geom(a, b, lam), om.op_arith(a, b, lam)
print(om.loewner_leq(h, g))
print(om.loewner_leq(g, ar))

# %%
# The geometric mean as the mu_lam-average of harmonic means.
gi = om.op_geom_integral(a, b, lam)
print("Frobenius distance:", np.linalg.norm(gi.entries - g.entries))

# %%
# The operator Hermite-Hadamard chain for the inverse, at lam = 1/2 and 0.7.
for w in (0.5, 0.7):
    out = om.hh_operator_chain(a, b, w)
    print(w, out["holds"], out["lower"].min_eig_of_difference, out["upper"].min_eig_of_difference)

# %%
# At lam = 1/2 the two weighted logarithmic operator means coincide.
bb, fr = om.op_weighted_log_bb(a, b, 0.5), om.op_weighted_log_frak(a, b, 0.5)
print("bb vs frak:", np.linalg.norm(bb.entries - fr.entries))
