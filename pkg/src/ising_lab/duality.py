"""Kramers-Wannier duality operators: continuous, trotterized and Floquet.

All operators here are non-invertible: they carry a factor ``(1 + P)/2`` and
annihilate the odd-parity sector.  They act on circuits by intertwining,
``A O = O' A``, never by conjugation.

The continuous operator is normalized so that ``D @ D = (1 + P) T / 2``
holds exactly, which fixes its global phase to ``exp(-i pi N / 4)`` times
the product of ``(1 + i Z)/sqrt2`` and ``(1 + i X X)/sqrt2`` gates.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import mutation
from .circuits import (bond_label, floquet, h_a, h_b, layer_a, layer_b, second_order,
                       v_first_order)
from .errors import ContractError, ConventionError
from .fermion import projector_even, projector_odd, spin_parity
from .lax import expected_calibration, tau_staggered, twisted_translation
from .linalg import dagger, fit_scalar, mat_exp, numerical_rank
from .pauli import PauliSum
from .report import CheckReport, rel_residual

KINDS = ("D", "D_minus", "D_plus", "DF_minus", "DF_plus")


@dataclass(frozen=True)
class DualityOperator:
    kind: str
    N: int
    params: dict
    matrix: np.ndarray
    sparse: PauliSum | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown duality kind {self.kind!r}")

    def rank(self, tol: float = 1e-10) -> int:
        return numerical_rank(self.matrix, tol)

    def odd_sector_residual(self) -> float:
        """``||A (1 - P)/2||``, zero for every operator in this module."""
        return float(np.linalg.norm(self.matrix @ projector_odd(self.N).to_dense()))

    def __matmul__(self, other):
        other = other.matrix if isinstance(other, DualityOperator) else other
        return self.matrix @ other


def kw_phase(N: int) -> complex:
    return np.exp(-1j * np.pi * N / 4)


def kw_product_sum(N: int) -> PauliSum:
    """Unnormalized product ``[prod_{j<N} (1+iZ_j)/sqrt2 (1+iX_jX_j+1)/sqrt2] (1+iZ_N)/sqrt2 (1+P)/2``."""
    one = PauliSum.identity(N)
    r2 = np.sqrt(2)
    out = one
    for j in range(1, N):
        out = out @ ((one + PauliSum.from_label(f"Z{j}", N, 1j)) / r2)
        out = out @ ((one + PauliSum.from_label(bond_label(j, N), N, 1j)) / r2)
    out = out @ ((one + PauliSum.from_label(f"Z{N}", N, 1j)) / r2)
    return out @ projector_even(N)


def twisted_form_phase(N: int) -> complex:
    """Unit scalar ``k`` with ``D = k U (1 + P)/2``."""
    return kw_phase(N) * (-1j) ** (N - 2)


def translation(N: int) -> np.ndarray:
    """``T = P_12 P_23 ... P_{N-1,N}`` with ``P_jk = (1 + XX + YY + ZZ)/2``; ``T Z_j T^-1 = Z_{j+1}``."""
    if N < 2:
        raise ContractError("translation needs N >= 2")
    one = PauliSum.identity(N)
    swaps = [(one + PauliSum.from_label(f"X{j}X{j + 1}", N) + PauliSum.from_label(f"Y{j}Y{j + 1}", N)
              + PauliSum.from_label(f"Z{j}Z{j + 1}", N)) / 2 for j in range(1, N)]
    return reduce(lambda a, b: a @ b, swaps).to_dense()


def kw_continuous(N: int, tol: float = 1e-12) -> DualityOperator:
    """Continuous-time duality ``D``; the product and twisted-translation forms are cross-checked."""
    sparse = kw_phase(N) * kw_product_sum(N)
    d = sparse.to_dense()
    other = twisted_form_phase(N) * 0.5 * twisted_translation(N) @ (np.eye(1 << N) + spin_parity(N).to_dense())
    res = rel_residual(d, other)
    if res > tol:
        raise ConventionError(f"product and twisted-translation forms of D differ (residual {res:.3e})")
    return DualityOperator("D", N, {}, d, sparse)


def _z_layer_minus(omega: float, N: int) -> PauliSum:
    one = PauliSum.identity(N)
    return reduce(lambda a, b: a @ b,
                  [(one - PauliSum.from_label(f"Z{j}", N, 1j * omega)) / (1 - 1j * omega)
                   for j in range(1, N + 1)])


def _xx_layer(omega: float, N: int) -> PauliSum:
    one = PauliSum.identity(N)
    return reduce(lambda a, b: a @ b,
                  [(one + PauliSum.from_label(bond_label(j, N), N, 1j * omega)) / (1 + 1j * omega)
                   for j in range(1, N + 1)])


def kw_trotterized(omega: float, sign: str, N: int) -> DualityOperator:
    """``D_-(Omega) = D prod (1 - i Omega Z)/(1 - i Omega)``, ``D_+(Omega) = D V_B(Omega)``."""
    d = kw_continuous(N)
    if sign == "-":
        layer = _z_layer_minus(omega, N)
    elif sign == "+":
        layer = _xx_layer(-omega if mutation.active("kw_plus_sign") else omega, N)
    else:
        raise ContractError(f"sign must be '-' or '+', got {sign!r}")
    sparse = d.sparse @ layer
    kind = "D_minus" if sign == "-" else "D_plus"
    return DualityOperator(kind, N, {"Omega": omega}, sparse.to_dense(), sparse)


def transfer_route_scalar(N: int) -> complex:
    """``s`` with ``(1/2) tau(+-w/2 | w) (1 + P) = s D_+-(tanh w)``."""
    return expected_calibration(N) / twisted_form_phase(N)


def kw_transfer_route_check(omega: float, sign: str, N: int, tol: float = 1e-10) -> CheckReport:
    """Compare the product construction of ``D_+-`` with ``(1/2) tau(+-w/2|w)(1 + P)``."""
    start = time.perf_counter()
    lam = omega / 2 if sign == "+" else -omega / 2
    via_tau = 0.5 * tau_staggered(lam, omega, N) @ (np.eye(1 << N) + spin_parity(N).to_dense())
    prod = kw_trotterized(np.tanh(omega), sign, N).matrix
    s = transfer_route_scalar(N)
    fitted, _ = fit_scalar(via_tau, prod)
    return CheckReport.make(f"duality.transfer_route.{'plus' if sign == '+' else 'minus'}",
                            "D_+-(Omega) = (1/2) tau(+-w/2|w)(1+P), Omega = tanh w",
                            {"omega": omega, "N": N}, rel_residual(via_tau, s * prod), tol, start,
                            scalar=s, fitted_scalar=fitted)


def kw_floquet(t: float, sign: str, N: int) -> DualityOperator:
    """``DF_-(t) = D exp(i t H_A)``, ``DF_+(t) = D exp(-i t H_B)``."""
    d = kw_continuous(N).matrix
    if sign == "-":
        m = d @ mat_exp(1j * t * h_a(N).to_dense())
    elif sign == "+":
        m = d @ mat_exp(-1j * t * h_b(N).to_dense())
    else:
        raise ContractError(f"sign must be '-' or '+', got {sign!r}")
    return DualityOperator("DF_minus" if sign == "-" else "DF_plus", N, {"t": t}, m)


def check_intertwine(a, o, o_prime, id: str = "duality.intertwine", anchor: str = "A O = O' A",
                     params: dict | None = None, tol: float = 1e-10) -> CheckReport:
    """Relative residual of ``A O - O' A``; the denominator is ``max(||AO||, ||O'A||, 1e-30)``."""
    start = time.perf_counter()
    a = a.matrix if isinstance(a, DualityOperator) else np.asarray(a)
    if a.shape != np.shape(o) or a.shape != np.shape(o_prime):
        raise ContractError("intertwining operands have different shapes")
    return CheckReport.make(id, anchor, params or {}, rel_residual(a @ o, o_prime @ a), tol, start)


def layer_actions(omega: float, N: int, tol: float = 1e-10) -> list[CheckReport]:
    """Action of ``D_+-(Omega)`` on ``V_A``, ``V_B`` and ``V_A V_B``."""
    va, vb = layer_a(omega, N), layer_b(omega, N)
    dm, dp = kw_trotterized(omega, "-", N), kw_trotterized(omega, "+", N)
    p = {"Omega": omega, "N": N}
    rows = [
        ("minus.VA", dm, va, vb, "D_- V_A = V_B D_-"),
        ("minus.VB", dm, vb, dagger(vb) @ va @ vb, "D_- V_B = (V_B^+ V_A V_B) D_-"),
        ("minus.VAVB", dm, va @ vb, va @ vb, "D_- V_A V_B = V_A V_B D_-"),
        ("plus.VA", dp, va, va @ vb @ dagger(va), "D_+ V_A = (V_A V_B V_A^+) D_+"),
        ("plus.VB", dp, vb, va, "D_+ V_B = V_A D_+"),
        ("plus.VAVB", dp, va @ vb, va @ vb, "D_+ V_A V_B = V_A V_B D_+"),
    ]
    return [check_intertwine(a, o, o2, f"duality.layers.{name}", anchor, p, tol)
            for name, a, o, o2, anchor in rows]


def duality_on_generic_circuit(omega: float, sign: str, coupling: float, N: int,
                               tol: float = 1e-10) -> CheckReport:
    """``D_- V(Omega;1,J) = V(Omega;J,1) D_-`` and ``D_+ V(Omega;h,1) = V(Omega;1,h) D_+``."""
    a = kw_trotterized(omega, sign, N)
    if sign == "-":
        o, o2 = v_first_order(omega, 1.0, coupling, N), v_first_order(omega, coupling, 1.0, N)
        anchor = "D_- V(W;1,J) = V(W;J,1) D_-"
    else:
        o, o2 = v_first_order(omega, coupling, 1.0, N), v_first_order(omega, 1.0, coupling, N)
        anchor = "D_+ V(W;h,1) = V(W;1,h) D_+"
    name = "minus" if sign == "-" else "plus"
    return check_intertwine(a, o, o2, f"duality.generic.{name}", anchor,
                            {"Omega": omega, "coupling": coupling, "N": N}, tol)


def algebra_suite(omega: float, N: int, tol: float = 1e-10) -> list[CheckReport]:
    """Products of the trotterized duality operators."""
    start = time.perf_counter()
    dp = kw_trotterized(omega, "+", N).matrix
    dm = kw_trotterized(omega, "-", N).matrix
    proj = projector_even(N).to_dense()
    t = translation(N)
    v = v_first_order(omega, 1.0, 1.0, N)
    p = {"Omega": omega, "N": N}
    checks = [
        ("plus_sq", dp @ dp, proj @ t @ v, "D_+^2 = (1+P)/2 T V"),
        ("minus_sq", dm @ dm, proj @ t @ dagger(v), "D_-^2 = (1+P)/2 T V^+"),
        ("plus_dag_plus", dagger(dp) @ dp, proj, "D_+^+ D_+ = (1+P)/2"),
        ("minus_dag_minus", dagger(dm) @ dm, proj, "D_-^+ D_- = (1+P)/2"),
        ("minus_dag_plus", dagger(dm) @ dp, proj @ v, "D_-^+ D_+ = (1+P)/2 V"),
        ("plus_minus", dp @ dm, proj @ t, "D_+ D_- = (1+P)/2 T"),
        ("minus_plus", dm @ dp, proj @ t, "D_- D_+ = (1+P)/2 T"),
        ("lightcone", dp @ dp @ dm @ dm, proj @ t @ t, "D_+^2 D_-^2 = (1+P)/2 T^2"),
    ]
    return [CheckReport.make(f"duality.algebra.{name}", anchor, p, rel_residual(lhs, rhs), tol, start)
            for name, lhs, rhs, anchor in checks]


def continuous_algebra(N: int, tol: float = 1e-10) -> list[CheckReport]:
    start = time.perf_counter()
    d = kw_continuous(N)
    m = d.matrix
    proj = projector_even(N).to_dense()
    t = translation(N)
    ha, hb = h_a(N).to_dense(), h_b(N).to_dense()
    p = {"N": N}
    out = [
        CheckReport.make("duality.D.square", "D^2 = (1+P)/2 T", p, rel_residual(m @ m, proj @ t), tol, start),
        CheckReport.make("duality.D.dag", "D^+ D = (1+P)/2", p, rel_residual(dagger(m) @ m, proj), tol, start),
        CheckReport.make("duality.D.HA", "D H_A = H_B D", p, rel_residual(m @ ha, hb @ m), tol, start),
        CheckReport.make("duality.D.HB", "D H_B = H_A D", p, rel_residual(m @ hb, ha @ m), tol, start),
        CheckReport.make("duality.D.rank", "rank D = 2^(N-1)", p,
                         abs(d.rank() - 2 ** (N - 1)), 0.0, start, rank=d.rank()),
    ]
    return out


def floquet_phase_link(t: float, N: int, tol: float = 1e-10) -> list[CheckReport]:
    """``V^F(t;1,1) = e^{2iNt} V(tan t)`` and ``DF_-+ = e^{-+iNt} D_-+(tan t)``."""
    start = time.perf_counter()
    om = np.tan(t)
    p = {"t": t, "N": N}
    vf = floquet(t, 1.0, 1.0, N)
    out = [CheckReport.make("floquet.phase_link.V", "V^F(t;1,1) = exp(2iNt) V(tan t)", p,
                            rel_residual(vf, np.exp(2j * N * t) * v_first_order(om, 1.0, 1.0, N)), tol, start)]
    for sign, ph, name in (("-", np.exp(-1j * N * t), "minus"), ("+", np.exp(1j * N * t), "plus")):
        lhs = kw_floquet(t, sign, N).matrix
        rhs = ph * kw_trotterized(om, sign, N).matrix
        out.append(CheckReport.make(f"floquet.phase_link.{name}", f"DF_{sign}(t) = exp({'-' if sign == '-' else ''}iNt) D_{sign}(tan t)",
                                    p, rel_residual(lhs, rhs), tol, start))
    return out


def floquet_duality_suite(t: float, h: float, J: float, N: int, tol: float = 1e-10) -> list[CheckReport]:
    """Floquet intertwining relations, including the first-to-second-order maps.

    The second-order maps use ``D_-+(Omega)`` with ``Omega = tan t``; with
    the bare identification ``Omega = t`` they only hold up to ``O(t**3)``,
    and that residual is recorded in the metadata.
    """
    if abs(t) >= np.pi / 4:
        raise ContractError("the tan-linked Floquet relations need |t| < pi/4")
    ha, hb = h_a(N).to_dense(), h_b(N).to_dense()
    ea = lambda s: mat_exp(-1j * s * ha)
    eb = lambda s: mat_exp(-1j * s * hb)
    dfm, dfp = kw_floquet(t, "-", N).matrix, kw_floquet(t, "+", N).matrix
    om = np.tan(t)
    dm, dp = kw_trotterized(om, "-", N).matrix, kw_trotterized(om, "+", N).matrix
    p = {"t": t, "h": h, "J": J, "N": N}
    vf = lambda a, b: floquet(t, a, b, N)
    out = [
        check_intertwine(dfm, vf(h, J), eb((h - 1) * t) @ vf(J, 1.0), "floquet.general.minus",
                         "DF_- V^F(t;h,J) = exp(-i(h-1)tH_B) V^F(t;J,1) DF_-", p, tol),
        check_intertwine(dfp, vf(h, J), vf(1.0, h) @ ea((J - 1) * t), "floquet.general.plus",
                         "DF_+ V^F(t;h,J) = V^F(t;1,h) exp(-i(J-1)tH_A) DF_+", p, tol),
        check_intertwine(dfm, vf(2.0, J), eb(t) @ ea(J * t) @ eb(t), "floquet.three_step.minus",
                         "DF_- V^F(t;2,J) = e^{-itH_B} e^{-iJtH_A} e^{-itH_B} DF_-", p, tol),
        check_intertwine(dfp, vf(h, 2.0), ea(t) @ eb(h * t) @ ea(t), "floquet.three_step.plus",
                         "DF_+ V^F(t;h,2) = e^{-itH_A} e^{-ihtH_B} e^{-itH_A} DF_+", p, tol),
    ]
    lit_m = kw_trotterized(t, "-", N).matrix
    lit_p = kw_trotterized(t, "+", N).matrix
    so_m = second_order(t, J, 2.0, "-", N)
    so_p = second_order(t, 2.0, h, "+", N)
    rep_m = check_intertwine(dm, vf(2.0, J), so_m, "floquet.second_order.minus",
                             "D_-(tan t) V^F(t;2,J) = V^F_-(t;J,2) D_-(tan t)", p, tol)
    rep_p = check_intertwine(dp, vf(h, 2.0), so_p, "floquet.second_order.plus",
                             "D_+(tan t) V^F(t;h,2) = V^F_+(t;2,h) D_+(tan t)", p, tol)
    rep_m.metadata["untied_residual"] = rel_residual(lit_m @ vf(2.0, J), so_m @ lit_m)
    rep_p.metadata["untied_residual"] = rel_residual(lit_p @ vf(h, 2.0), so_p @ lit_p)
    return out + [rep_m, rep_p]


def even_sector_translation_report(N: int) -> dict:
    """How ``(1+P) U^2`` relates to ``(1+P) T``: operator proportionality and adjoint action.

    Returns the fitted scalar, the operator residual after fitting, and the
    worst adjoint-action residual over ``Z_j`` and ``X_j X_{j+1}``.
    """
    u = twisted_translation(N)
    t = translation(N)
    proj = projector_even(N).to_dense()
    s, res = fit_scalar(proj @ u @ u, proj @ t)
    worst = 0.0
    gens = [PauliSum.from_label(f"Z{j}", N).to_dense() for j in range(1, N + 1)]
    gens += [PauliSum.from_label(bond_label(j, N), N).to_dense() for j in range(1, N + 1)]
    u2 = u @ u
    for g in gens:
        a = proj @ u2 @ g @ dagger(u2)
        b = proj @ t @ g @ dagger(t)
        worst = max(worst, rel_residual(a, b))
    return {"scalar": s, "operator_residual": res, "adjoint_residual": worst,
            "expected_scalar": (-1j) ** N}
