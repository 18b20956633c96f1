"""
Weighted logarithmic means of two numbers
=========================================

The weight measure nu_lam, the three weighted logarithmic means and the
reference table at lam = 2/3.
"""

# %%
# The measure nu_lam has a two-term power-law density. At lam = 1/2 it is
# Lebesgue measure; otherwise one endpoint carries an integrable singularity.
import numpy as np

from whh import measures as ms
from whh import scalar_means as sm
from whh.quadrature import integrate_nu

t = np.linspace(0.05, 0.95, 7)
for lam in (0.25, 0.5, 2 / 3):
    print(f"lam={lam:.3f}  density:", np.round(ms.nu_density(lam, t), 4))

# %%
# It is a probability measure with mean lam; the closed forms of its mass
# and first moment on [a, b] agree with quadrature.
lam = 2 / 3
print("mass  ", integrate_nu(lam, np.ones_like).value)
print("mean  ", integrate_nu(lam, lambda s: s).value)
print("chi   ", ms.nu_mass_chi(lam, (0.2, 0.7)), integrate_nu(lam, np.ones_like, (0.2, 0.7)).value)

# %%
# Three weighted logarithmic means: the nu-average of the geometric path
# ("frak"), the reciprocal of the nu-average of inverted arithmetic means
# ("bb") and the closed form. The table rows come with reference values.
for row in sm.table1():
    print(f"({row.a:5}, {row.b:5})", " ".join(f"{c:.9f}" for c in row.computed), f" max dev {max(row.deviations):.1e}")

# %%
# All three reduce to the classical logarithmic mean at lam = 1/2.
a, b = 0.3, 17.0
print(sm.log_mean(a, b))
for mean in (sm.weighted_log_frak, sm.weighted_log_bb, sm.weighted_log_closed):
    print(mean.__name__, mean(a, b, 0.5).value)

# %%
# The weighted Hermite-Hadamard chain for phi(x) = 1/x, and the refinement
# band with the coefficients m(a, lam) <= M(a, lam).
a, b, lam = 2.0, 9.0, 0.3
left = 1 / sm.arith(a, b, lam)
middle = sm.m_lambda_inversion(a, b, lam)
right = (1 - lam) / a + lam / b
print(f"{left:.6f} <= {middle:.6f} <= {right:.6f}")
print("m, M at a=0.4:", ms.m_coeff(0.4, lam), ms.M_coeff(0.4, lam))
