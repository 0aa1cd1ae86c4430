import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab import charges as Ch
from ising_lab.circuits import h_a, h_b, v_first_order
from ising_lab.errors import ContractError
from ising_lab.fermion import jw_gamma, spin_parity
from ising_lab.lax import tau_staggered
from ising_lab.linalg import traceless
from ising_lab.pauli import PauliSum, commutator
from ising_lab.report import rel_residual

# scalars s in  traceless(i d^r ln tau) = s traceless(Q), frozen from the finite-difference oracle at N = 4
Q1_SCALARS = {0.1: 0.9901640, 0.3: 0.9217753}
Q2_SCALAR = -2.0


def test_q1_is_hamiltonian_with_twisted_wrap():
    N = 4
    wrap = PauliSum.from_label("X1X4", N) @ spin_parity(N)
    expected = h_a(N) + h_b(N) + PauliSum.from_label("X1X4", N) - wrap
    assert Ch.hamiltonian(N) == expected


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_qr_hermitian_quadratic(r):
    q = Ch.closed_qr(r, 4)
    assert q.operator.is_hermitian()
    assert Ch.is_quadratic(q)


def test_qr_commute_pairwise():
    N = 4
    qs = [Ch.closed_qr(r, N).operator for r in range(1, 5)]
    for a in qs:
        for b in qs:
            assert commutator(a, b).max_coeff() < 1e-13


def test_qr_range():
    with pytest.raises(ContractError):
        Ch.closed_qr(8, 4)


@pytest.mark.parametrize("sign", ["+", "-"])
def test_zero_inhomogeneity_limits(sign):
    N = 4
    assert Ch.closed_q1(sign, 0.0, N).operator == Ch.closed_qr(1, N).operator
    assert Ch.closed_q2(sign, 0.0, N).operator == Ch.closed_qr(2, N).operator


def test_oracle_recovers_hamiltonian():
    N = 4
    o = Ch.hermitian_oracle(1, 0.0, 0.0, N)
    assert rel_residual(traceless(o), traceless(Ch.hamiltonian(N).to_dense())) < 1e-7


def test_oracle_second_derivative_at_zero():
    rep = Ch.compare_to_oracle(Ch.closed_qr(2, 4), 2, 0.0, 0.0)
    assert rep.passed
    assert abs(rep.metadata["scalar"] - Q2_SCALAR) < 1e-6


@pytest.mark.parametrize("omega", [0.1, 0.3])
@pytest.mark.parametrize("sign", ["+", "-"])
def test_oracle_proportionality(omega, sign):
    lam0 = omega / 2 if sign == "+" else -omega / 2
    r1 = Ch.compare_to_oracle(Ch.closed_q1(sign, omega, 4), 1, lam0, omega)
    r2 = Ch.compare_to_oracle(Ch.closed_q2(sign, omega, 4), 2, lam0, omega)
    assert r1.residual < 1e-6 and r2.residual < 1e-6
    assert abs(r1.metadata["scalar"] - Q1_SCALARS[omega]) < 1e-6
    assert abs(r2.metadata["scalar"] - Q2_SCALAR) < 1e-6


def test_oracle_scalars_real_and_smooth():
    # recorded, functional form not asserted: real, single-signed, slowly varying
    s = [Ch.compare_to_oracle(Ch.closed_q1("+", w, 4), 1, w / 2, w).metadata["scalar"] for w in (0.1, 0.2, 0.3)]
    assert all(abs(x.imag) < 1e-8 and x.real > 0 for x in s)
    assert s[0].real > s[1].real > s[2].real
    assert abs(s[0] - 2 * s[1] + s[2]) < 0.05


def test_oracle_commutes_with_family():
    N, w = 3, 0.3
    o = Ch.oracle_log_derivative_charge(1, w / 2, w, N)
    t = tau_staggered(0.37, w, N)
    assert rel_residual(o @ t, t @ o) < 1e-8


def test_oracle_contract():
    with pytest.raises(ContractError):
        Ch.oracle_log_derivative_charge(3, 0.0, 0.1, 3)
    with pytest.raises(ContractError):
        Ch.oracle_log_derivative_charge(1, 0.0, 0.8, 3)


@pytest.mark.parametrize("omega", [0.25, 0.3])
def test_commutation_suite(omega):
    for rep in Ch.commutation_suite(omega, 4):
        assert rep.passed, rep.line()


@settings(max_examples=10, deadline=None)
@given(st.floats(-0.6, 0.6, allow_nan=False))
def test_projected_charges_conserved(omega):
    N = 3
    v = v_first_order(float(np.tanh(omega)), 1.0, 1.0, N)
    for q in (Ch.closed_q1("+", omega, N), Ch.closed_q2("-", omega, N)):
        m = Ch.project_charge(q).dense()
        assert rel_residual(m @ v, v @ m) < 1e-10


def test_projection():
    N = 3
    q = Ch.project_charge(Ch.Charge("one", {}, PauliSum.identity(N)))
    assert q.projected == 0.5 * (PauliSum.identity(N) + spin_parity(N))
    q1 = Ch.closed_q1("+", 0.3, N).operator
    p = 0.5 * (PauliSum.identity(N) + spin_parity(N))
    assert (p @ q1).allclose(q1 @ p)
    with pytest.raises(ContractError):
        Ch.project_charge(Ch.Charge("odd", {}, jw_gamma(1, N)))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_dolan_grady_exact(N):
    for rep in Ch.dolan_grady_check(N):
        assert rep.residual == 0.0


def test_seeds_do_not_commute():
    a0, a1 = Ch.onsager_seeds(3)
    assert commutator(a0.operator, a1.operator).max_coeff() > 0


@pytest.mark.parametrize("N", [3, 4, 5])
def test_onsager_relations(N):
    fam = Ch.onsager_recursion(3, N)
    for rep in Ch.onsager_relations(fam, 3):
        assert rep.residual == 0.0, rep.line()
    assert commutator(fam.G[1], fam.G[2]) == PauliSum.zero(N)
    assert commutator(fam.A[2], fam.A[1]) == 4 * fam.G[1]


def test_commuting_family():
    fam = Ch.onsager_recursion(3, 4)
    for rep in Ch.onsager_commuting_family(fam, 3):
        assert rep.passed
    assert fam.hamiltonian(1.0) == -(h_a(4) + h_b(4))


def test_recursion_contract():
    with pytest.raises(ContractError):
        Ch.onsager_recursion(5, 3)


@pytest.mark.parametrize("omega,N", [(0.2, 3), (0.3, 4)])
def test_onsager_from_transfer(omega, N):
    _, _, reps = Ch.onsager_from_transfer(omega, N)
    for rep in reps:
        assert rep.passed, rep.line()


def test_onsager_from_transfer_contract():
    with pytest.raises(ContractError):
        Ch.onsager_from_transfer(0.0, 3)
    with pytest.raises(ContractError):
        Ch.onsager_from_transfer(0.5, 3)


def test_charge_table_rows():
    rows = Ch.charge_table((0.0,), 3)
    assert [r["label"] for r in rows] == ["Q1_plus", "Q1_minus", "Q2_plus", "Q2_minus"]
    for r in rows:
        assert r["term_count"] <= 4 * 3
        assert r["residuals"]["quadratic"] is True
        assert r["residuals"]["oracle_fit"] < 1e-6
