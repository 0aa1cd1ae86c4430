# %% [markdown]
# # Conserved charges
#
# Logarithmic derivatives of the transfer matrix are conserved by the
# circuit.  We take them numerically and compare with closed-form
# Majorana bilinears.

# %%
import numpy as np

from ising_lab import charges as Ch

N, omega = 4, 0.3
for r, maker in ((1, Ch.closed_q1), (2, Ch.closed_q2)):
    for s in "+-":
        lam0 = omega / 2 if s == "+" else -omega / 2
        rep = Ch.compare_to_oracle(maker(s, omega, N), r, lam0, omega)
        print(rep.line(), "scalar", np.round(rep.metadata["scalar"], 6))

# %%
fails = [r for r in Ch.commutation_suite(omega, N) if not r.passed]
print("commutation failures:", len(fails))

# %% [markdown]
# ## Onsager algebra
#
# Two seeds generate the whole algebra.  All coefficients are integers, so
# the relations hold with zero residual.

# %%
for rep in Ch.dolan_grady_check(N):
    print(rep.line())
fam = Ch.onsager_recursion(3, N)
for rep in Ch.onsager_relations(fam, 3):
    print(rep.line())
print(fam.A[2])

# %%
a0, a1, reps = Ch.onsager_from_transfer(0.2, 3)
for rep in reps:
    print(rep.line())
