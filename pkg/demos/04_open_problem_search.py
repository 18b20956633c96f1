"""
Do the two logarithmic functional means agree?
==============================================

For quadratics (and for numbers and matrices) the two lam = 1/2 logarithmic
means coincide. For general convex functions nothing is known; this script
looks for a gap. The output is numerical evidence, not a proof of anything.
"""

# %%
import numpy as np

from whh import legendre as lg
from whh.harness.generators import random_convex
from whh.harness.rng import SplitMix64
from whh.harness.sweeps import SweepConfig, open_problem_search

report = open_problem_search(SweepConfig(seed=0, trials=20, grid_size=401))
print("largest relative gap:", report["max_discrepancy"], "tolerance:", report["tolerance"])
for q in report["quadratic_pairs"]:
    print("quadratic pair", q["a"], q["b"], q["discrepancy"])

# %%
# Refine the grid for the worst pair (linear interpolation keeps it convex).
# A gap that does not shrink is not a discretisation artefact.
trial = report["argmax_pair"]["trial"]
rng = SplitMix64(0).spawn(trial)
f, g = random_convex(rng, 401), random_convex(rng, 401)
for n in (401, 801, 1601):
    x = np.linspace(-1, 1, n)
    F = lg.SampledFunction(-1, 1, np.interp(x, f.grid, f.values))
    G = lg.SampledFunction(-1, 1, np.interp(x, g.grid, g.values))
    bb = lg.func_weighted_log_bb(F, G, 0.5).values
    frak = lg.func_weighted_log_frak(F, G, 0.5).values
    print(n, "sup |bb - frak| =", np.max(np.abs(bb - frak)))
