"""Trotterized, Floquet and second-order circuits for the transverse-field Ising chain.

Orderings are fixed: the ``A`` (``Z``) layer multiplies from the left of the
``B`` (``XX``) layer, and within a layer gates appear in ascending site
order.  ``H_A = -sum Z_j`` and ``H_B = -sum X_j X_{j+1}`` with periodic
boundary ``N + 1 = 1``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import ContractError
from .fermion import gamma_wrapped, jw_gamma, projector_even, spin_parity
from .lax import calibrate_trace_convention, tau_minus_closed, tau_plus_closed, tau_staggered, twisted_translation
from .linalg import mat_exp, mat_inv
from .pauli import PauliSum, _popcount, _I_POW
from .report import CheckReport, rel_residual

KINDS = ("first_order", "majorana_first_order", "floquet", "second_order_minus", "second_order_plus")


def _site(j: int, N: int) -> int:
    if not 1 <= j <= N:
        raise ContractError(f"site {j} outside 1..{N}")
    return j


def bond_label(j: int, N: int) -> str:
    k = j % N + 1
    return f"X{min(j, k)}X{max(j, k)}"


def h_a(N: int) -> PauliSum:
    return sum((PauliSum.from_label(f"Z{j}", N, -1.0) for j in range(1, N + 1)), PauliSum.zero(N))


def h_b(N: int) -> PauliSum:
    if N < 2:
        raise ContractError("the XX bond layer needs N >= 2")
    return sum((PauliSum.from_label(bond_label(j, N), N, -1.0) for j in range(1, N + 1)),
               PauliSum.zero(N))


def tfim(h: float, J: float, N: int) -> PauliSum:
    """``h H_A + J H_B``; ``h = J = 1`` is the critical chain."""
    return h * h_a(N) + J * h_b(N)


def gate_uz(j: int, omega: float, N: int) -> PauliSum:
    """``(1 + i Omega Z_j) / (1 + i Omega)``."""
    _site(j, N)
    return (PauliSum.identity(N) + PauliSum.from_label(f"Z{j}", N, 1j * omega)) / (1 + 1j * omega)


def gate_uxx(j: int, omega: float, N: int) -> PauliSum:
    """``(1 + i Omega X_j X_{j+1}) / (1 + i Omega)``, periodic in ``j``."""
    _site(j, N)
    return (PauliSum.identity(N) + PauliSum.from_label(bond_label(j, N), N, 1j * omega)) / (1 + 1j * omega)


def _dense_product(ops) -> np.ndarray:
    return reduce(np.matmul, [op.to_dense() for op in ops])


def layer_a(omega: float, N: int) -> np.ndarray:
    """``V_A(Omega)``: all ``Z`` gates, ascending site."""
    return _dense_product(gate_uz(j, omega, N) for j in range(1, N + 1))


def layer_b(omega: float, N: int) -> np.ndarray:
    """``V_B(Omega)``: all ``XX`` gates including the wrap bond."""
    return _dense_product(gate_uxx(j, omega, N) for j in range(1, N + 1))


def v_first_order(omega: float, h: float = 1.0, J: float = 1.0, N: int = 3) -> np.ndarray:
    """``V(Omega; h, J) = V_A(h Omega) V_B(J Omega)``."""
    return layer_a(h * omega, N) @ layer_b(J * omega, N)


def majorana_gate(j: int, omega: float, N: int) -> PauliSum:
    """``(1 + s Omega Gamma_j Gamma_{j+1}) / (1 + i Omega)`` with ``s = -1`` on the wrap bond ``j = 2N``."""
    s = -1.0 if j == 2 * N else 1.0
    pair = jw_gamma(j, N) @ gamma_wrapped(j + 1, N)
    return (PauliSum.identity(N) + s * omega * pair) / (1 + 1j * omega)


def v_majorana(omega: float, N: int) -> np.ndarray:
    """Brick-wall Majorana circuit: odd bonds ``(2j-1, 2j)`` then even bonds ``(2j, 2j+1)``."""
    odd = [majorana_gate(2 * j - 1, omega, N) for j in range(1, N + 1)]
    even = [majorana_gate(2 * j, omega, N) for j in range(1, N + 1)]
    return _dense_product(odd + even)


def v_majorana_spin(omega: float, N: int) -> np.ndarray:
    """Spin form of :func:`v_majorana`; the wrap bond carries the parity ``P X_N X_1``."""
    bond = PauliSum.from_label(bond_label(N, N), N) @ spin_parity(N)
    last = (PauliSum.identity(N) + 1j * omega * bond) / (1 + 1j * omega)
    gates = ([gate_uz(j, omega, N) for j in range(1, N + 1)]
             + [gate_uxx(j, omega, N) for j in range(1, N)] + [last])
    return _dense_product(gates)


def floquet(t: float, h: float = 1.0, J: float = 1.0, N: int = 3) -> np.ndarray:
    """``V^F(t; h, J) = exp(-i h t H_A) exp(-i J t H_B)``."""
    return mat_exp(-1j * h * t * h_a(N).to_dense()) @ mat_exp(-1j * J * t * h_b(N).to_dense())


def second_order(t: float, h: float = 1.0, J: float = 1.0, sign: str = "-", N: int = 3) -> np.ndarray:
    """Symmetric splittings.

    ``sign='-'``: ``exp(-i J t H_B/2) exp(-i h t H_A) exp(-i J t H_B/2)``;
    ``sign='+'``: ``exp(-i h t H_A/2) exp(-i J t H_B) exp(-i h t H_A/2)``.
    """
    ha, hb = h_a(N).to_dense(), h_b(N).to_dense()
    if sign == "-":
        half = mat_exp(-0.5j * J * t * hb)
        return half @ mat_exp(-1j * h * t * ha) @ half
    if sign == "+":
        half = mat_exp(-0.5j * h * t * ha)
        return half @ mat_exp(-1j * J * t * hb) @ half
    raise ContractError(f"sign must be '-' or '+', got {sign!r}")


def reference_evolution(t: float, h: float = 1.0, J: float = 1.0, N: int = 3) -> np.ndarray:
    """``exp(-i t (h H_A + J H_B))``."""
    return mat_exp(-1j * t * tfim(h, J, N).to_dense())


def first_order_phase(omega: float, h: float, J: float, N: int) -> complex:
    """Global phase of ``V(Omega; h, J)`` relative to ``exp(-i a H_A) exp(-i b H_B)``.

    Each rational gate equals ``exp(-i arctan(x)) exp(i arctan(x) P)``, so the
    circuit carries ``exp(-i N (arctan(h Omega) + arctan(J Omega)))``.
    """
    return np.exp(-1j * N * (np.arctan(h * omega) + np.arctan(J * omega)))


def trotter_error(t: float, n: int, h: float = 1.0, J: float = 1.0, order: int = 1,
                  N: int = 4, sign: str = "-") -> float:
    """Spectral-norm distance between ``n`` circuit steps of size ``t/n`` and ``exp(-i t H)``.

    First order uses the rational-gate circuit with its known global phase
    removed (see :func:`first_order_phase`); second order uses
    :func:`second_order` with the given ``sign``.
    """
    if n < 1:
        raise ContractError("n must be >= 1")
    omega = t / n
    if order == 1:
        step = v_first_order(omega, h, J, N) / first_order_phase(omega, h, J, N)
    elif order == 2:
        step = second_order(omega, h, J, sign, N)
    else:
        raise ContractError(f"order must be 1 or 2, got {order}")
    return float(np.linalg.norm(np.linalg.matrix_power(step, n) - reference_evolution(t, h, J, N), 2))


@dataclass(frozen=True)
class CircuitSpec:
    N: int
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown circuit kind {self.kind!r}")
        if self.kind == "first_order" and "inhomogeneity" in self.params:
            omega = float(np.tanh(self.params["inhomogeneity"]))
            if "omega" in self.params and not np.isclose(self.params["omega"], omega):
                raise ContractError("time step disagrees with tanh(inhomogeneity)")
            self.params["omega"] = omega

    @classmethod
    def tied(cls, N: int, inhomogeneity: float, **params) -> "CircuitSpec":
        """First-order circuit with ``Omega = tanh(omega)``, always inside (-1, 1)."""
        return cls(N, "first_order", {"inhomogeneity": inhomogeneity, **params})

    @property
    def integrable_window(self) -> bool:
        """Floquet drives are tied to the transfer matrix only for ``|t| <= pi/4``."""
        return self.kind != "floquet" or abs(self.params.get("t", 0.0)) <= np.pi / 4

    def build(self) -> np.ndarray:
        p = dict(self.params)
        if self.kind == "first_order":
            return v_first_order(p["omega"], p.get("h", 1.0), p.get("J", 1.0), self.N)
        if self.kind == "majorana_first_order":
            return v_majorana(p["omega"], self.N)
        if self.kind == "floquet":
            return floquet(p["t"], p.get("h", 1.0), p.get("J", 1.0), self.N)
        sign = "-" if self.kind == "second_order_minus" else "+"
        return second_order(p["t"], p.get("h", 1.0), p.get("J", 1.0), sign, self.N)


def transfer_identity_suite(omega: float, N: int, tol: float = 1e-10) -> list[CheckReport]:
    """Circuit identities from the staggered transfer matrices, ``Omega = tanh(omega)``.

    ``tau_+-`` stand for ``tau(+-omega/2 | omega)`` and ``c`` for the calibration
    scalar in ``tau(0|0) = c U``.
    """
    start = time.perf_counter()
    om = float(np.tanh(omega))
    c = calibrate_trace_convention(N)
    tp, tm = tau_staggered(omega / 2, omega, N), tau_staggered(-omega / 2, omega, N)
    u = twisted_translation(N)
    cal = mat_inv(tm) @ tp
    vm = v_majorana(om, N)
    proj = projector_even(N).to_dense()
    v = v_first_order(om, 1.0, 1.0, N)
    p = {"omega": omega, "Omega": om, "N": N}
    rows = [
        ("circuits.transfer_ratio", "V_maj(Omega) = tau_-^-1 tau_+", vm, cal),
        ("circuits.projection", "V_maj (1+P) = V (1+P)", vm @ proj, v @ proj),
        ("circuits.majorana_spin", "V_maj = V with P X_N X_1 on the wrap bond", vm, v_majorana_spin(om, N)),
        ("lax.tau_plus_closed", "tau_+ = c U prod (1 + s tanh(w) G_2j G_2j+1)/(1 + i tanh(w))", tp, c * tau_plus_closed(omega, N)),
        ("lax.tau_minus_closed", "tau_- = c U prod (1 - tanh(w) G_2j-1 G_2j)/(1 - i tanh(w))", tm, c * tau_minus_closed(omega, N)),
        ("lax.u_squared", "tau_+ tau_- = c^2 U^2", tp @ tm, c * c * u @ u),
        ("lax.tau_plus_squared", "tau_+^2 = c^2 U^2 V_maj", tp @ tp, c * c * u @ u @ vm),
    ]
    return [CheckReport.make(i, a, p, rel_residual(lhs, rhs), tol, start) for i, a, lhs, rhs in rows]


# -- sparse state application ----------------------------------------------------

def apply_sum(op: PauliSum, psi: np.ndarray) -> np.ndarray:
    """``op |psi>`` without forming the dense matrix."""
    psi = np.asarray(psi, dtype=complex)
    d = psi.shape[0]
    if d != 1 << op.n:
        raise ContractError(f"state of length {d} for {op.n} qubits")
    idx = np.arange(d, dtype=np.uint64)
    out = np.zeros_like(psi)
    for x, z, c in op:
        signs = 1 - 2 * (_popcount(idx & np.uint64(z)) & 1)
        out[(idx ^ np.uint64(x)).astype(np.intp)] += c * _I_POW[(x & z).bit_count() % 4] * signs * psi
    return out


def apply_first_order(psi: np.ndarray, omega: float, N: int, h: float = 1.0, J: float = 1.0,
                      steps: int = 1) -> np.ndarray:
    """Apply ``V(Omega; h, J)**steps`` gate by gate (rightmost gate first)."""
    gates = ([gate_uz(j, h * omega, N) for j in range(1, N + 1)]
             + [gate_uxx(j, J * omega, N) for j in range(1, N + 1)])
    for _ in range(steps):
        for g in reversed(gates):
            psi = apply_sum(g, psi)
    return psi
