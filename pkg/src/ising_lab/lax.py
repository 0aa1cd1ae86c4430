"""Majorana R-operator, monodromy and transfer matrices.

The two auxiliary Majorana modes ``a`` and ``b`` share one extra qubit placed
on the most significant bit (site ``N + 1``):

    phi(a) = X_aux,   phi(b) = Y_aux,   phi(j) = i phi(a) phi(b) Gamma_j = -Z_aux Gamma_j

so auxiliary modes act trivially on the physical sites, and the transfer
matrix is the sum of the two diagonal auxiliary blocks of the monodromy.

With this partial trace ``transfer(0, 0) = c_N U`` where ``U`` is the
twisted translation and ``c_N = (-1)**(N+1) sqrt(2)``; see
:func:`calibrate_trace_convention`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Hashable

import numpy as np

from .errors import ContractError, ConventionError
from .fermion import gamma_wrapped, jw_gamma, majoranas
from .linalg import fit_scalar, partial_trace_aux
from .pauli import PauliSum, anticommutator
from .report import CheckReport, rel_residual

Label = Hashable


def _embed(op: PauliSum, n: int) -> PauliSum:
    x, z, c = op.arrays
    return PauliSum._from_arrays(n, x, z, c)


@dataclass(frozen=True)
class ModeRep:
    """Factorized representation of ``{a, b, 1..2N}`` on ``N + 1`` qubits."""

    N: int
    modes: dict = field(repr=False)

    @classmethod
    def build(cls, N: int) -> "ModeRep":
        n = N + 1
        aux = N + 1
        phi_a = PauliSum.from_label(f"X{aux}", n)
        phi_b = PauliSum.from_label(f"Y{aux}", n)
        phi_ab = phi_a @ phi_b
        modes = {"a": phi_a, "b": phi_b}
        for j in range(1, 2 * N + 1):
            modes[j] = 1j * phi_ab @ _embed(jw_gamma(j, N), n)
        rep = cls(N, modes)
        object.__setattr__(rep, "_dense", {})
        return rep

    @property
    def n_qubits(self) -> int:
        return self.N + 1

    @property
    def labels(self) -> list:
        return list(self.modes)

    def dense(self, label: Label) -> np.ndarray:
        cache = self._dense
        if label not in cache:
            if label not in self.modes:
                raise ContractError(f"unknown mode label {label!r}")
            cache[label] = self.modes[label].to_dense()
        return cache[label]

    def clifford_residual(self) -> float:
        one = PauliSum.identity(self.n_qubits)
        worst = 0.0
        for u, gu in self.modes.items():
            for v, gv in self.modes.items():
                target = 2.0 * one if u == v else PauliSum.zero(self.n_qubits)
                worst = max(worst, (anticommutator(gu, gv) - target).max_coeff())
        return worst


_REPS: dict[int, ModeRep] = {}


def mode_rep(N: int) -> ModeRep:
    # mutations change jw_gamma, so cached reps are only reused when none are active
    from . import mutation
    if any(mutation.active(m) for m in mutation.KNOWN):
        return ModeRep.build(N)
    if N not in _REPS:
        _REPS[N] = ModeRep.build(N)
    return _REPS[N]


@dataclass(frozen=True)
class Inhomogeneity:
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) % 2 or not self.values:
            raise ContractError("need exactly 2N inhomogeneities")

    @property
    def N(self) -> int:
        return len(self.values) // 2

    def __getitem__(self, j: int) -> float:
        """1-based access, ``eta[j]`` for ``j`` in ``1..2N``."""
        return self.values[j - 1]

    @classmethod
    def staggered(cls, N: int, omega: float) -> "Inhomogeneity":
        """``eta_j = (-1)**j omega / 2``."""
        return cls(tuple((-1) ** j * omega / 2 for j in range(1, 2 * N + 1)))

    @classmethod
    def homogeneous(cls, N: int) -> "Inhomogeneity":
        return cls((0.0,) * (2 * N))

    @classmethod
    def random(cls, N: int, rng: np.random.Generator, scale: float = 0.5) -> "Inhomogeneity":
        return cls(tuple(rng.uniform(-scale, scale, size=2 * N)))


def r_operator(u: Label, v: Label, lam: float, rep: ModeRep) -> np.ndarray:
    """``R_uv(lam) = (g_u - g_v)/sqrt2 (1 + tanh(lam) g_u g_v) / (1 + i tanh(lam))``."""
    if u == v:
        raise ContractError(f"R-operator needs distinct modes, got {u!r} twice")
    gu, gv = rep.dense(u), rep.dense(v)
    t = np.tanh(lam)
    one = np.eye(gu.shape[0])
    return ((gu - gv) / np.sqrt(2)) @ ((one + t * (gu @ gv)) / (1 + 1j * t))


def permutation_operator(u: Label, v: Label, rep: ModeRep) -> np.ndarray:
    """``P^-_uv = (g_u - g_v)/sqrt2``, equal to ``R_uv(0)``."""
    return (rep.dense(u) - rep.dense(v)) / np.sqrt(2)


def r_check_operator(u: Label, v: Label, lam: float, rep: ModeRep) -> np.ndarray:
    """``R-check = P^- R``; unitary for real ``lam``."""
    return permutation_operator(u, v, rep) @ r_operator(u, v, lam, rep)


def ybe_check(lam: float, mu: float, rep: ModeRep | None = None,
              modes: tuple = ("a", 1, 2), tol: float = 1e-12) -> CheckReport:
    start = time.perf_counter()
    rep = rep or mode_rep(1)
    p, q, s = modes
    lhs = r_operator(p, q, lam - mu, rep) @ r_operator(p, s, lam, rep) @ r_operator(q, s, mu, rep)
    rhs = r_operator(q, s, mu, rep) @ r_operator(p, s, lam, rep) @ r_operator(p, q, lam - mu, rep)
    return CheckReport.make("lax.ybe", "R12(l-m) R13(l) R23(m) = R23(m) R13(l) R12(l-m)",
                            {"lambda": lam, "mu": mu, "modes": [str(m) for m in modes]},
                            rel_residual(lhs, rhs), tol, start)


def monodromy(aux: str, lam: float, eta: Inhomogeneity, rep: ModeRep) -> np.ndarray:
    """``T_aux = R_{aux,2N}(lam - eta_2N) ... R_{aux,1}(lam - eta_1)``."""
    if eta.N != rep.N:
        raise ContractError(f"inhomogeneity for N={eta.N} used with rep N={rep.N}")
    factors = [r_operator(aux, j, lam - eta[j], rep) for j in range(2 * rep.N, 0, -1)]
    return reduce(np.matmul, factors)


def transfer(lam: float, eta: Inhomogeneity, rep: ModeRep | None = None, aux: str = "a") -> np.ndarray:
    """Partial trace of the monodromy over the auxiliary qubit."""
    rep = rep or mode_rep(eta.N)
    return partial_trace_aux(monodromy(aux, lam, eta, rep))


def aux_components(op: np.ndarray) -> dict[str, np.ndarray]:
    """Split an ``(N+1)``-qubit operator as ``sum_s s_aux (x) op_s`` for ``s`` in I, X, Y, Z."""
    d = op.shape[0] // 2
    a, b, c, e = op[:d, :d], op[:d, d:], op[d:, :d], op[d:, d:]
    return {"I": (a + e) / 2, "Z": (a - e) / 2, "X": (b + c) / 2, "Y": 1j * (b - c) / 2}


def rtt_check(lam: float, mu: float, eta: Inhomogeneity, rep: ModeRep | None = None,
              tol: float = 1e-10) -> CheckReport:
    start = time.perf_counter()
    rep = rep or mode_rep(eta.N)
    r = r_operator("a", "b", lam - mu, rep)
    ta, tb = monodromy("a", lam, eta, rep), monodromy("b", mu, eta, rep)
    return CheckReport.make("lax.rtt", "R_ab(l-m) T_a(l) T_b(m) = T_b(m) T_a(l) R_ab(l-m)",
                            {"lambda": lam, "mu": mu, "N": rep.N, "eta": list(eta.values)},
                            rel_residual(r @ ta @ tb, tb @ ta @ r), tol, start)


def transfer_commute_check(lam: float, mu: float, eta: Inhomogeneity,
                           rep: ModeRep | None = None, tol: float = 1e-10) -> CheckReport:
    start = time.perf_counter()
    rep = rep or mode_rep(eta.N)
    tl, tm = transfer(lam, eta, rep), transfer(mu, eta, rep)
    return CheckReport.make("lax.transfer_commute", "[tau(l|eta), tau(m|eta)] = 0",
                            {"lambda": lam, "mu": mu, "N": rep.N, "eta": list(eta.values)},
                            rel_residual(tl @ tm, tm @ tl), tol, start)


# -- twisted translation -----------------------------------------------------

def twisted_translation_sum(N: int) -> PauliSum:
    """``U = 2**-(N-1/2) Gamma_1 (Gamma_1 - Gamma_2)(Gamma_2 - Gamma_3)...(Gamma_{2N-1} - Gamma_2N)``."""
    g = majoranas(N)
    factors = [g[k] - g[k + 1] for k in range(2 * N - 1)]
    return reduce(lambda a, b: a @ b, factors, g[0]) * 2.0 ** -(N - 0.5)


def twisted_translation(N: int) -> np.ndarray:
    return twisted_translation_sum(N).to_dense()


def twisted_translation_check(N: int, tol: float = 1e-12) -> CheckReport:
    """``U Gamma_j U^-1 = Gamma_{j+1}`` for ``j < 2N`` and ``U Gamma_2N U^-1 = -Gamma_1``."""
    start = time.perf_counter()
    u = twisted_translation_sum(N)
    ud = u.dagger()
    unit = (ud @ u - PauliSum.identity(N)).max_coeff()
    worst = unit
    for j in range(1, 2 * N + 1):
        target = jw_gamma(j + 1, N) if j < 2 * N else -jw_gamma(1, N)
        worst = max(worst, (u @ jw_gamma(j, N) @ ud - target).max_coeff())
    return CheckReport.make("lax.twisted_translation", "U Gamma_j U^-1 = Gamma_(j+1), U Gamma_2N U^-1 = -Gamma_1",
                            {"N": N}, worst, tol, start, unitarity=unit)


def calibrate_trace_convention(N: int, tol: float = 1e-12) -> complex:
    """Scalar ``c`` with ``transfer(0 | 0) = c U``.

    For the representation used here ``c = (-1)**(N+1) sqrt(2)``: the factor
    ``sqrt2`` is the auxiliary trace against the ``2**-(N-1/2)`` normalization
    of ``U`` and the sign alternates with ``N``.
    """
    tau0 = transfer(0.0, Inhomogeneity.homogeneous(N))
    u = twisted_translation(N)
    c, res = fit_scalar(tau0, u)
    if res > tol:
        raise ConventionError(f"transfer(0|0) is not proportional to U (residual {res:.3e})")
    return c


def expected_calibration(N: int) -> float:
    return (-1) ** (N + 1) * np.sqrt(2)


def tau_plus_closed(omega: float, N: int) -> np.ndarray:
    """``U prod_j (1 + s_j tanh(w) Gamma_2j Gamma_2j+1) / (1 + i tanh(w))``, ``s_N = -1``, calibrated units of U."""
    t = np.tanh(omega)
    one = PauliSum.identity(N)
    out = twisted_translation_sum(N)
    for j in range(1, N + 1):
        s = -1.0 if j == N else 1.0
        out = out @ ((one + s * t * jw_gamma(2 * j, N) @ gamma_wrapped(2 * j + 1, N)) / (1 + 1j * t))
    return out.to_dense()


def tau_minus_closed(omega: float, N: int) -> np.ndarray:
    """``U prod_j (1 - tanh(w) Gamma_2j-1 Gamma_2j) / (1 - i tanh(w))``."""
    t = np.tanh(omega)
    one = PauliSum.identity(N)
    out = twisted_translation_sum(N)
    for j in range(1, N + 1):
        out = out @ ((one - t * jw_gamma(2 * j - 1, N) @ jw_gamma(2 * j, N)) / (1 - 1j * t))
    return out.to_dense()


def tau_staggered(lam: float, omega: float, N: int) -> np.ndarray:
    """Transfer matrix with the staggered inhomogeneity ``eta_j = (-1)**j omega/2``."""
    return transfer(lam, Inhomogeneity.staggered(N, omega))
