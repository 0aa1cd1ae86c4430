# %% [markdown]
# # Floquet drives
#
# Exponential Floquet steps equal the rational-gate circuit at
# ``Omega = tan t`` up to a global phase, as long as ``|t| <= pi/4``.

# %%
import numpy as np

from ising_lab import duality as D

for t in np.linspace(0.05, np.pi / 4, 5):
    res = max(r.residual for r in D.floquet_phase_link(t, 3))
    print(f"t = {t:.3f}  phase-link residual {res:.1e}")

# %% [markdown]
# Duality maps a first-order Floquet drive at coupling 2 to a symmetric
# second-order drive.  The map is exact when the duality operator is
# evaluated at ``tan t``; at ``t`` itself it is only correct to second
# order.

# %%
for rep in D.floquet_duality_suite(0.2, 0.7, 0.5, 3):
    extra = rep.metadata.get("untied_residual")
    print(rep.line(), "" if extra is None else f"(Omega = t: {extra:.1e})")
