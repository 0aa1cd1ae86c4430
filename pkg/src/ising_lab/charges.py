"""Conserved charges: transfer-matrix log-derivatives, closed forms and the Onsager algebra.

The oracle differentiates the staggered transfer matrix numerically.  The
closed forms are Majorana bilinears and are compared with the oracle modulo
the identity component and one scalar per charge.

For real spectral parameter the transfer matrix is a multiple of a unitary,
so ``d^r/dlam^r ln tau`` is anti-Hermitian; ``i`` times it is the Hermitian
charge that gets compared.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .fermion import gamma_wrapped, jw_gamma, majorana_degrees, parity_commutes, projector_even, spin_parity
from .linalg import (dagger, fd_derivative, fit_scalar, mat_exp, mat_inv, mat_log, traceless)
from .pauli import PauliSum, commutator
from .report import CheckReport, rel_residual
from .lax import tau_staggered

FD_STEP = 1e-4
ORACLE_TOL = 1e-6


@dataclass(frozen=True)
class Charge:
    label: str
    params: dict
    operator: PauliSum
    projected: PauliSum | None = None

    @property
    def N(self) -> int:
        return self.operator.n

    def dense(self) -> np.ndarray:
        return (self.projected if self.projected is not None else self.operator).to_dense()

    def summary(self, residuals: dict | None = None) -> dict:
        """Row of the JSON charge table."""
        sites = [j for j in range(1, self.N + 1)
                 if any((x | z) >> (j - 1) & 1 for x, z, _ in self.operator)]
        return {"label": self.label, "params": dict(self.params), "term_count": len(self.operator),
                "support_range": [min(sites), max(sites)] if sites else [],
                "residuals": dict(residuals or {})}


def _g(k: int, N: int) -> PauliSum:
    return gamma_wrapped(k, N)


def _pair(j: int, k: int, N: int) -> PauliSum:
    return 1j * (_g(j, N) @ _g(k, N))


# -- oracle ----------------------------------------------------------------------

def oracle_log_derivative_charge(r: int, lam0: float, omega: float, N: int,
                                 h: float = FD_STEP) -> np.ndarray:
    """``d^r/dlam^r ln tau(lam | omega)`` at ``lam0``, by finite differences.

    Uses ``tau^-1 tau'`` and ``tau^-1 tau'' - (tau^-1 tau')**2``; both rely on the
    transfer matrices commuting among themselves.
    """
    if r not in (1, 2):
        raise ContractError(f"r must be 1 or 2, got {r}")
    if abs(omega) > 0.5 or N > 5:
        raise ContractError("oracle needs |omega| <= 0.5 and N <= 5")
    f = lambda lam: tau_staggered(lam, omega, N)
    ti = mat_inv(f(lam0))
    d1 = ti @ fd_derivative(f, lam0, 1, h).value
    if r == 1:
        return d1
    return ti @ fd_derivative(f, lam0, 2, h).value - d1 @ d1


def hermitian_oracle(r: int, lam0: float, omega: float, N: int) -> np.ndarray:
    return 1j * oracle_log_derivative_charge(r, lam0, omega, N)


def compare_to_oracle(charge: Charge, r: int, lam0: float, omega: float,
                      tol: float = ORACLE_TOL) -> CheckReport:
    """Traceless oracle against traceless closed form, one fitted scalar."""
    start = time.perf_counter()
    o = traceless(hermitian_oracle(r, lam0, omega, charge.N))
    c = traceless(charge.operator.to_dense())
    s, res = fit_scalar(o, c)
    return CheckReport.make(f"charges.oracle.{charge.label}", "i d^r ln tau / dlam^r ~ s Q (traceless parts)",
                            {"omega": omega, "lambda0": lam0, "N": charge.N, "r": r}, res, tol, start, scalar=s)


# -- closed forms ----------------------------------------------------------------

def closed_qr(r: int, N: int) -> Charge:
    """``Q_r = i sum_{j<=2N-r} G_j G_{j+r} - i sum_{k<=r} G_{2N-r+k} G_k``."""
    if not 1 <= r < 2 * N:
        raise ContractError(f"r must lie in 1..{2 * N - 1}")
    q = PauliSum.zero(N)
    for j in range(1, 2 * N - r + 1):
        q = q + _pair(j, j + r, N)
    for k in range(1, r + 1):
        q = q - _pair(2 * N - r + k, k, N)
    return Charge(f"Q{r}", {"r": r}, q)


def hamiltonian(N: int) -> PauliSum:
    """``i sum_j (-1)^{delta_{j,2N}} G_j G_{j+1}``, i.e. ``H_A + H_B`` with the parity-twisted wrap bond."""
    return closed_qr(1, N).operator


def _m1(sign: str, N: int) -> PauliSum:
    off = 0 if sign == "+" else -1
    m = PauliSum.zero(N)
    for j in range(1, N):
        m = m + _pair(2 * j + off, 2 * j + 2 + off, N)
    return m - _pair(2 * N + off, 2 + off, N)


def _m2(sign: str, N: int) -> PauliSum:
    off = 0 if sign == "+" else -1
    m = PauliSum.zero(N)
    for j in range(1, N - 1):
        m = m + _pair(2 * j + off, 2 * j + 4 + off, N)
    return m - _pair(2 * N - 2 + off, 2 + off, N) - _pair(2 * N + off, 4 + off, N)


def _check_sign(sign):
    if sign not in ("+", "-"):
        raise ContractError(f"sign must be '+' or '-', got {sign!r}")
    return "plus" if sign == "+" else "minus"


def closed_q1(sign: str, omega: float, N: int) -> Charge:
    """``sech^2(w) Q_1 -+ 2 tanh(w) M1_+-``."""
    name = _check_sign(sign)
    t = np.tanh(omega)
    s = -1.0 if sign == "+" else 1.0
    op = (1 - t * t) * closed_qr(1, N).operator + s * 2 * t * _m1(sign, N)
    return Charge(f"Q1_{name}", {"omega": omega}, op)


def closed_q2(sign: str, omega: float, N: int) -> Charge:
    """``+-sech(2w) tanh(2w) (Q_1 - Q_3) + sech^2(2w) Q_2 + tanh^2(2w) M2_+-``."""
    name = _check_sign(sign)
    t2 = np.tanh(2 * omega)
    sech2 = 1 / np.cosh(2 * omega)
    s = 1.0 if sign == "+" else -1.0
    op = (s * sech2 * t2 * (closed_qr(1, N).operator - closed_qr(3, N).operator)
          + sech2 ** 2 * closed_qr(2, N).operator + t2 ** 2 * _m2(sign, N))
    return Charge(f"Q2_{name}", {"omega": omega}, op)


def project_charge(q: Charge) -> Charge:
    """Attach ``(1+P)/2 Q``; parity-odd input is rejected."""
    if not parity_commutes(q.operator):
        raise ContractError(f"{q.label} does not commute with the spin parity")
    proj = projector_even(q.N) @ q.operator
    return Charge(q.label, q.params, q.operator, proj)


def is_quadratic(q: Charge) -> bool:
    return majorana_degrees(q.operator) <= {2}


# -- Onsager algebra ------------------------------------------------------------

def onsager_seeds(N: int) -> tuple[Charge, Charge]:
    """``A_0 = sum Z_j`` and ``A_1 = sum X_j X_{j+1}`` (periodic, no parity twist)."""
    a0 = sum((PauliSum.from_label(f"Z{j}", N) for j in range(1, N + 1)), PauliSum.zero(N))
    a1 = PauliSum.zero(N)
    for j in range(1, N + 1):
        k = j % N + 1
        a1 = a1 + PauliSum.from_label(f"X{min(j, k)}X{max(j, k)}", N)
    return Charge("A_0", {"m": 0}, a0), Charge("A_1", {"m": 1}, a1)


def dolan_grady_check(N: int) -> list[CheckReport]:
    """Both Dolan-Grady conditions; the residual is the largest coefficient left over."""
    start = time.perf_counter()
    a0, a1 = (c.operator for c in onsager_seeds(N))
    out = []
    for name, a, b in (("A0", a0, a1), ("A1", a1, a0)):
        c = commutator(a, b)
        lhs = commutator(a, commutator(a, c))
        out.append(CheckReport.make(f"onsager.dolan_grady.{name}", "[A,[A,[A,B]]] = 16 [A,B]",
                                    {"N": N}, (lhs - 16 * c).max_coeff(), 0.0, start))
    return out


@dataclass
class OnsagerFamily:
    N: int
    A: dict[int, PauliSum] = field(default_factory=dict)
    G: dict[int, PauliSum] = field(default_factory=dict)

    def charge(self, m: int, coupling: float) -> Charge:
        """``Q^(m)_J = A_m + A_-m + J (A_{1+m} + A_{1-m})``."""
        op = self.A[m] + self.A[-m] + coupling * (self.A[1 + m] + self.A[1 - m])
        return Charge(f"Q{m}_J", {"m": m, "J": coupling}, op)

    def hamiltonian(self, coupling: float) -> PauliSum:
        return self.A[0] + coupling * self.A[1]


def onsager_recursion(m_max: int, N: int) -> OnsagerFamily:
    """Generate ``A_m`` for ``|m| <= 3 m_max`` and ``G_m`` for ``|m| <= 2 m_max``.

    ``G_1 = [A_1, A_0]/4``, ``A_{m+1} = A_{m-1} + [G_1, A_m]/2`` upward and the
    same relation solved for ``A_{m-1}`` downward; ``G_m = [A_m, A_0]/4``.
    The extra range lets every defining relation with ``|l|, |m| <= m_max`` be
    checked without leaving the generated set.
    """
    if m_max < 1 or m_max > 4 or N > 5:
        raise ContractError("onsager_recursion needs 1 <= m_max <= 4 and N <= 5")
    a0, a1 = (c.operator for c in onsager_seeds(N))
    fam = OnsagerFamily(N, {0: a0, 1: a1})
    g1 = 0.25 * commutator(a1, a0)
    top = 3 * m_max
    for m in range(1, top):
        fam.A[m + 1] = fam.A[m - 1] + 0.5 * commutator(g1, fam.A[m])
    for m in range(1, -top, -1):
        fam.A[m - 1] = fam.A[m + 1] - 0.5 * commutator(g1, fam.A[m])
    for m in range(-2 * m_max, 2 * m_max + 1):
        fam.G[m] = 0.25 * commutator(fam.A[m], a0)
    return fam


def onsager_relations(fam: OnsagerFamily, m_max: int) -> list[CheckReport]:
    """Largest leftover coefficient of each defining relation over ``|l|, |m| <= m_max``."""
    start = time.perf_counter()
    rng = range(-m_max, m_max + 1)
    aa = gg = ga = 0.0
    for l in rng:
        for m in rng:
            aa = max(aa, (commutator(fam.A[l], fam.A[m]) - 4 * fam.G[l - m]).max_coeff())
            gg = max(gg, commutator(fam.G[l], fam.G[m]).max_coeff())
            ga = max(ga, (commutator(fam.G[l], fam.A[m]) - 2 * fam.A[m + l] + 2 * fam.A[m - l]).max_coeff())
    p = {"N": fam.N, "m_max": m_max}
    return [CheckReport.make("onsager.AA", "[A_l, A_m] = 4 G_(l-m)", p, aa, 0.0, start),
            CheckReport.make("onsager.GG", "[G_l, G_m] = 0", p, gg, 0.0, start),
            CheckReport.make("onsager.GA", "[G_l, A_m] = 2 A_(m+l) - 2 A_(m-l)", p, ga, 0.0, start)]


def onsager_commuting_family(fam: OnsagerFamily, m_max: int, couplings=(0.5, 1.0, 2.0),
                             tol: float = 1e-10) -> list[CheckReport]:
    start = time.perf_counter()
    out = []
    for J in couplings:
        h = fam.hamiltonian(J)
        for m in range(1, m_max + 1):
            q = fam.charge(m, J).operator
            res = commutator(q, h).norm() / max(q.norm() * h.norm(), 1e-30)
            out.append(CheckReport.make(f"onsager.family.m{m}.J{J:g}", "[A_m + A_-m + J(A_1+m + A_1-m), A_0 + J A_1] = 0",
                                        {"N": fam.N, "m": m, "J": J}, res, tol, start))
    return out


def onsager_from_transfer(omega: float, N: int, tol: float = 1e-9):
    """Recover ``A_0`` and ``A_1`` from two transfer-matrix ratios.

    With ``tan(b) = tanh(w)``:

    * ``tau(w/2 | -w)^-1 tau(-w/2 | w) = e^{2iNb} exp(-2b sum G_{2j-1} G_{2j})``
    * ``tau(-w/2 | -w)^-1 tau(w/2 | w) = e^{-2iNb} exp(2b (sum_{j<N} G_2j G_2j+1 - G_2N G_1))``

    The known phase is divided out before the logarithm, which keeps the
    principal branch valid while ``N |b| < pi/2``.  ``A_1`` comes back with
    the parity-twisted wrap bond ``P X_N X_1``, so it matches ``sum X X`` on
    the even sector only.

    Returns ``(A0_ext, A1_ext, reports)``.
    """
    beta = float(np.arctan(np.tanh(omega)))
    if omega == 0 or abs(omega) > 0.3 or N > 5 or N * abs(beta) >= np.pi / 2:
        raise ContractError("need 0 < |omega| <= 0.3, N <= 5 and N |beta| < pi/2")
    start = time.perf_counter()
    left = mat_inv(tau_staggered(omega / 2, -omega, N)) @ tau_staggered(-omega / 2, omega, N)
    right = mat_inv(tau_staggered(-omega / 2, -omega, N)) @ tau_staggered(omega / 2, omega, N)
    odd = sum((jw_gamma(2 * j - 1, N) @ jw_gamma(2 * j, N) for j in range(1, N + 1)), PauliSum.zero(N))
    even = sum((jw_gamma(2 * j, N) @ jw_gamma(2 * j + 1, N) for j in range(1, N)), PauliSum.zero(N))
    even = even - jw_gamma(2 * N, N) @ jw_gamma(1, N)
    ph = np.exp(2j * N * beta)
    left_exp = ph * mat_exp(-2 * beta * odd.to_dense())
    right_exp = mat_exp(2 * beta * even.to_dense()) / ph
    d = 1 << N
    a0_ext = N * np.eye(d) + 1j * (mat_log(left / ph) + 2j * N * beta * np.eye(d)) / (2 * beta)
    a1_ext = N * np.eye(d) - 1j * (mat_log(right * ph) - 2j * N * beta * np.eye(d)) / (2 * beta)
    a0, a1 = (c.operator.to_dense() for c in onsager_seeds(N))
    proj = projector_even(N).to_dense()
    p = {"omega": omega, "N": N}
    reports = [
        CheckReport.make("onsager.transfer.left", "tau(w/2|-w)^-1 tau(-w/2|w) = e^{2iNb} exp(-2b sum G_2j-1 G_2j)",
                         p, rel_residual(left, left_exp), tol, start),
        CheckReport.make("onsager.transfer.right", "tau(-w/2|-w)^-1 tau(w/2|w) = e^{-2iNb} exp(2b sum G_2j G_2j+1)",
                         p, rel_residual(right, right_exp), tol, start),
        CheckReport.make("onsager.transfer.A0", "traceless(A0_ext) = traceless(sum Z)", p,
                         rel_residual(traceless(a0_ext), traceless(a0)), 1e-8, start),
        CheckReport.make("onsager.transfer.A1", "(1+P)/2 traceless(A1_ext) = (1+P)/2 traceless(sum XX)", p,
                         rel_residual(proj @ traceless(a1_ext), proj @ traceless(a1)), 1e-8, start),
    ]
    return a0_ext, a1_ext, reports


# -- suites ---------------------------------------------------------------------

def commutation_suite(omega: float, N: int, tol: float = 1e-9) -> list[CheckReport]:
    """Projected ``Q1_+-``, ``Q2_+-`` and ``Q_r`` against each other, ``V``, ``D_+-`` and ``T``."""
    from .circuits import v_first_order
    from .duality import kw_trotterized, translation

    start = time.perf_counter()
    om = float(np.tanh(omega))
    qs = [project_charge(c) for c in (closed_q1("+", omega, N), closed_q1("-", omega, N),
                                      closed_q2("+", omega, N), closed_q2("-", omega, N))]
    others = {"V": v_first_order(om, 1.0, 1.0, N), "D_plus": kw_trotterized(om, "+", N).matrix,
              "D_minus": kw_trotterized(om, "-", N).matrix, "T": translation(N)}
    dense = [q.dense() for q in qs]
    p = {"omega": omega, "N": N}

    def res(a, b):
        return rel_residual(a @ b, b @ a)

    out = []
    for q, m in zip(qs, dense):
        for name, o in others.items():
            out.append(CheckReport.make(f"charges.commute.{q.label}.{name}", "[(1+P)/2 Q, O] = 0", p, res(m, o), tol, start))
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            out.append(CheckReport.make(f"charges.commute.{qs[i].label}.{qs[j].label}", "[(1+P)/2 Q, (1+P)/2 Q'] = 0",
                                        p, res(dense[i], dense[j]), tol, start))
    pe = projector_even(N).to_dense()
    out.append(CheckReport.make("charges.commute.V.projector", "[V, (1+P)/2] = 0", p, res(others["V"], pe), tol, start))
    return out


def charge_table(omegas=(0.0, 0.3), N: int = 4) -> list[dict]:
    """Rows of the charge table; failures are reported per row and do not abort the run."""
    from .circuits import v_first_order

    rows = []
    for w in omegas:
        v = v_first_order(float(np.tanh(w)), 1.0, 1.0, N)
        for r, maker in ((1, closed_q1), (2, closed_q2)):
            for sign in "+-":
                q = maker(sign, w, N)
                residuals = {}
                try:
                    qp = project_charge(q).dense()
                    residuals["commute_V"] = rel_residual(qp @ v, v @ qp)
                    lam0 = w / 2 if sign == "+" else -w / 2
                    rep = compare_to_oracle(q, r, lam0, w)
                    residuals["oracle_fit"] = rep.residual
                    residuals["scalar"] = rep.metadata["scalar"]
                    residuals["quadratic"] = is_quadratic(q)
                except Exception as exc:  # reported, run continues
                    residuals["error"] = f"{type(exc).__name__}: {exc}"
                rows.append(q.summary(residuals))
    return rows
