import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab import circuits as C
from ising_lab.errors import ContractError
from ising_lab.fermion import spin_parity
from ising_lab.linalg import unitarity_residual
from ising_lab.report import rel_residual


def test_hamiltonians():
    assert len(C.h_a(3)) == 3 and len(C.h_b(3)) == 3
    assert C.h_b(3).coeff("X1X3") == -1.0
    assert C.tfim(1.0, 1.0, 3) == C.h_a(3) + C.h_b(3)
    with pytest.raises(ContractError):
        C.h_b(1)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3, allow_nan=False), st.integers(1, 3))
def test_gates_unitary(omega, j):
    assert unitarity_residual(C.gate_uz(j, omega, 3).to_dense()) < 1e-12
    assert unitarity_residual(C.gate_uxx(j, omega, 3).to_dense()) < 1e-12


def test_rational_gate_is_exponential():
    # (1 + i W Z)/(1 + i W) = exp(-i a) exp(i a Z), a = arctan W
    w = 0.37
    a = np.arctan(w)
    z = np.diag([1.0, -1.0])
    assert np.allclose(C.gate_uz(1, w, 1).to_dense(), np.exp(-1j * a) * np.diag(np.exp(1j * a * np.diag(z))))


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("omega", [0.1, 0.3, 0.5])
def test_transfer_identity_suite(N, omega):
    for rep in C.transfer_identity_suite(omega, N):
        assert rep.passed, rep.line()


def test_circuit_conserves_parity():
    v = C.v_first_order(0.4, 0.8, 1.3, 3)
    p = spin_parity(3).to_dense()
    assert np.linalg.norm(v @ p - p @ v) < 1e-13


def test_floquet_phase_link():
    t, N = 0.3, 3
    lhs = C.floquet(t, 1.0, 1.0, N)
    assert rel_residual(lhs, np.exp(2j * N * t) * C.v_first_order(np.tan(t), 1.0, 1.0, N)) < 1e-12


def test_second_order_signs_differ():
    a, b = C.second_order(0.3, 1.0, 0.7, "-", 3), C.second_order(0.3, 1.0, 0.7, "+", 3)
    assert rel_residual(a, b) > 1e-3
    with pytest.raises(ContractError):
        C.second_order(0.3, sign="x")


def test_trotter_scaling_first_order():
    r = C.trotter_error(1.0, 16) / C.trotter_error(1.0, 32)
    assert r == pytest.approx(2.0068, abs=5e-4)


@pytest.mark.parametrize("sign", ["-", "+"])
def test_trotter_scaling_second_order(sign):
    r = C.trotter_error(1.0, 16, order=2, sign=sign) / C.trotter_error(1.0, 32, order=2, sign=sign)
    assert r == pytest.approx(4.0046, abs=5e-4)


def test_trotter_contract():
    with pytest.raises(ContractError):
        C.trotter_error(1.0, 0)
    with pytest.raises(ContractError):
        C.trotter_error(1.0, 4, order=3)


def test_sparse_application_matches_dense(rng):
    N = 3
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    dense = np.linalg.matrix_power(C.v_first_order(0.3, 0.9, 1.1, N), 2) @ psi
    assert np.allclose(C.apply_first_order(psi, 0.3, N, 0.9, 1.1, steps=2), dense)
    with pytest.raises(ContractError):
        C.apply_sum(C.h_a(3), np.ones(4))


def test_circuit_spec():
    spec = C.CircuitSpec.tied(3, 0.3)
    assert spec.params["omega"] == pytest.approx(np.tanh(0.3))
    assert np.allclose(spec.build(), C.v_first_order(np.tanh(0.3), 1.0, 1.0, 3))
    with pytest.raises(ContractError):
        C.CircuitSpec(3, "first_order", {"inhomogeneity": 0.3, "omega": 0.5})
    with pytest.raises(ContractError):
        C.CircuitSpec(3, "bogus")
    assert not C.CircuitSpec(3, "floquet", {"t": 0.9}).integrable_window
    assert C.CircuitSpec(3, "floquet", {"t": np.pi / 4}).integrable_window
    assert np.allclose(C.CircuitSpec(3, "majorana_first_order", {"omega": 0.2}).build(), C.v_majorana(0.2, 3))
    assert np.allclose(C.CircuitSpec(3, "second_order_plus", {"t": 0.2}).build(), C.second_order(0.2, sign="+"))
