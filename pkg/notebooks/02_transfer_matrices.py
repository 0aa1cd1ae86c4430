# %% [markdown]
# # Lax operators and commuting transfer matrices
#
# Each R-operator acts on two Majorana modes.  An auxiliary pair of modes
# shares one extra qubit, and tracing it out of the monodromy gives the
# transfer matrix.

# %%
import numpy as np

from ising_lab import lax
from ising_lab.lax import Inhomogeneity, mode_rep

rng = np.random.default_rng(0)
worst = max(lax.ybe_check(*rng.uniform(-1, 1, 2)).residual for _ in range(100))
print(f"Yang-Baxter, worst of 100 random points: {worst:.2e}")

# %%
N = 3
eta = Inhomogeneity.staggered(N, 0.3)
print(lax.rtt_check(0.2, -0.5, eta).line())
print(lax.transfer_commute_check(0.2, -0.5, eta).line())

# random inhomogeneities work just as well
eta_r = Inhomogeneity.random(N, rng)
print(lax.transfer_commute_check(0.7, 0.1, eta_r).line())

# %% [markdown]
# At zero spectral parameter and no inhomogeneity the transfer matrix is a
# multiple of the twisted translation `U`, which shifts every Majorana
# index by one and flips the sign at the boundary.

# %%
for n in (2, 3, 4, 5):
    c = lax.calibrate_trace_convention(n)
    print(n, "tau(0|0) / U =", np.round(c, 12))
print(lax.twisted_translation_check(4).line())
