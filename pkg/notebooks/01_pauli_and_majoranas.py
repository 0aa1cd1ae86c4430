# %% [markdown]
# # Pauli strings and Majorana modes
#
# Operators on up to 64 qubits are stored as sums of bit-packed Pauli
# strings.  Site 1 is the least significant bit everywhere.

# %%
import numpy as np

from ising_lab.pauli import PauliSum, commutator, render
from ising_lab.fermion import jw_gamma, fermionic_parity, spin_parity, clifford_check, majorana_degrees

x, z = PauliSum.from_label("X1", 1), PauliSum.from_label("Z1", 1)
print("X Z =", render(x @ z))           # -i Y
print("[X1X2, Z1Z2] =", render(commutator(PauliSum.from_label("X1X2", 2), PauliSum.from_label("Z1Z2", 2))))

# %% [markdown]
# Jordan-Wigner modes carry a string of Z's to their left.  Neighbouring
# pairs give back the two kinds of Ising terms.

# %%
N = 4
for j in range(1, 2 * N + 1):
    print(f"Gamma_{j} =", render(jw_gamma(j, N)))

print("Gamma_1 Gamma_2 =", render(jw_gamma(1, N) @ jw_gamma(2, N)))
print("Gamma_2 Gamma_3 =", render(jw_gamma(2, N) @ jw_gamma(3, N)))

# %%
print(clifford_check(N).line())
# ordered product of all modes vs the spin parity: a factor i**N
print(fermionic_parity(N) == (1j ** N) * spin_parity(N))

# %% [markdown]
# Products of many modes get long in the spin language, but the Majorana
# degree is easy to read off from the bitmasks.

# %%
hop = jw_gamma(1, N) @ jw_gamma(6, N)
print(render(hop), "-> degree", majorana_degrees(hop))

# dense form only when asked; large operators stay sparse
big = PauliSum.from_label("X1Z30Y64", 64)
print(len(big @ big), "term(s) after squaring a 64-qubit string")
