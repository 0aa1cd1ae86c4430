# %% [markdown]
# # Non-invertible Kramers-Wannier operators
#
# The duality operators kill the odd-parity sector and exchange the two
# layers of the circuit.  They act by intertwining, ``A O = O' A``.

# %%
import numpy as np

from ising_lab import duality as D

N = 4
d = D.kw_continuous(N)
print("rank:", d.rank(), "of", 2 ** N)
for rep in D.continuous_algebra(N):
    print(rep.line())

# %%
for rep in D.layer_actions(0.4, N):
    print(rep.line())

# %% [markdown]
# The squares of the trotterized operators are translations dressed by
# one time step, forward or backward in time.

# %%
for rep in D.algebra_suite(0.5, N):
    print(rep.line())

# %%
# the same operators from transfer matrices (up to a known scalar)
for s in "+-":
    print(D.kw_transfer_route_check(0.3, s, 3).line())

# U^2 restricted to even parity is the ordinary translation up to a phase
for n in (2, 3, 4, 5):
    r = D.even_sector_translation_report(n)
    print(n, np.round(r["scalar"], 12), f"{r['operator_residual']:.1e}")
