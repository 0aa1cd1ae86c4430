"""Majorana modes on spins via the Jordan-Wigner string.

``gamma(2j-1) = Z_1...Z_{j-1} X_j`` and ``gamma(2j) = Z_1...Z_{j-1} Y_j``.
With this convention ``gamma(2j-1) gamma(2j) = i Z_j`` and
``gamma(2j) gamma(2j+1) = i X_j X_{j+1}``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import mutation
from .errors import ContractError
from .pauli import PauliSum, anticommutator
from .report import CheckReport


def _z_string(upto: int) -> int:
    return (1 << upto) - 1


def jw_gamma(j: int, N: int) -> PauliSum:
    """Majorana operator ``Gamma_j`` (``1 <= j <= 2N``) on ``N`` qubits."""
    if not 1 <= j <= 2 * N:
        raise ContractError(f"Majorana index {j} outside 1..{2 * N}")
    site = (j + 1) // 2
    bit = 1 << (site - 1)
    z = _z_string(site - 1)
    if j % 2:
        return PauliSum(N, {(bit, z): 1.0})
    if mutation.active("jw_phase"):
        # X Z instead of Y: drops the factor i
        return PauliSum(N, {(bit, z | bit): -1j})
    return PauliSum(N, {(bit, z | bit): 1.0})


def gamma_wrapped(k: int, N: int) -> PauliSum:
    """``Gamma_k`` with the index taken cyclically, ``Gamma_{2N+k} = Gamma_k``."""
    return jw_gamma((k - 1) % (2 * N) + 1, N)


def majoranas(N: int) -> list[PauliSum]:
    """All ``2N`` modes, index 0 holding ``Gamma_1``."""
    return [jw_gamma(j, N) for j in range(1, 2 * N + 1)]


@dataclass(frozen=True)
class MajoranaMode:
    index: int
    N: int

    @property
    def pauli(self) -> PauliSum:
        return jw_gamma(self.index, self.N)


def fermionic_parity(N: int) -> PauliSum:
    """Ordered product ``Gamma_1 Gamma_2 ... Gamma_2N``; equals ``i**N`` times the spin parity."""
    return reduce(lambda a, b: a @ b, majoranas(N))


def spin_parity(N: int) -> PauliSum:
    """``P = Z_1 Z_2 ... Z_N``."""
    return PauliSum(N, {(0, _z_string(N)): 1.0})


def projector_even(N: int) -> PauliSum:
    return 0.5 * (PauliSum.identity(N) + spin_parity(N))


def projector_odd(N: int) -> PauliSum:
    return 0.5 * (PauliSum.identity(N) - spin_parity(N))


def clifford_check(N: int, tol: float = 0.0) -> CheckReport:
    """All ``(2N)**2`` anticommutators against ``2 delta_jk``; residual is the max deviation."""
    start = time.perf_counter()
    gs = majoranas(N)
    one = PauliSum.identity(N)
    worst = 0.0
    for j, gj in enumerate(gs):
        for k, gk in enumerate(gs):
            target = 2.0 * one if j == k else PauliSum.zero(N)
            worst = max(worst, (anticommutator(gj, gk) - target).max_coeff())
    return CheckReport.make(
        "fermion.clifford", "{Gamma_j, Gamma_k} = 2 delta_jk", {"N": N}, worst, tol, start)


def majorana_bits(x: int, z: int, N: int) -> int:
    """Bitmask over ``Gamma_1..Gamma_2N`` of the monomial proportional to the string ``(x, z)``."""
    m = 0
    above = 0
    for j in range(N, 0, -1):
        b = 1 << (j - 1)
        xj = 1 if x & b else 0
        zj = 1 if z & b else 0
        m_even = zj ^ above
        m_odd = xj ^ m_even
        if m_odd:
            m |= 1 << (2 * j - 2)
        if m_even:
            m |= 1 << (2 * j - 1)
        above ^= xj
    return m


def majorana_degrees(op: PauliSum) -> set[int]:
    """Set of Majorana-monomial degrees appearing in ``op``."""
    return {majorana_bits(x, z, op.n).bit_count() for x, z, _ in op}


def parity_commutes(op: PauliSum, atol: float = 1e-12) -> bool:
    p = spin_parity(op.n)
    return (op @ p - p @ op).max_coeff() <= atol


def dense_modes(N: int) -> list[np.ndarray]:
    return [g.to_dense() for g in majoranas(N)]
