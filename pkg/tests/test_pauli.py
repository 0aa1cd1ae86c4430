import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab import pauli as P
from ising_lab.errors import DimensionError, ResourceError
from ising_lab.pauli import PauliSum, PauliTerm, commutator, anticommutator, render

from conftest import kron_oracle, pauli_sums


def test_single_site_products():
    x, y, z = P.X(1, 1), P.Y(1, 1), P.Z(1, 1)
    assert x @ z == -1j * y
    assert z @ x == 1j * y
    assert x @ y == 1j * z
    assert y @ y == PauliSum.identity(1)


def test_two_site_product():
    xx = PauliSum.from_label("X1X2", 2)
    zz = PauliSum.from_label("Z1Z2", 2)
    assert xx @ zz == -PauliSum.from_label("Y1Y2", 2)
    assert commutator(xx, zz) == PauliSum.zero(2)


@pytest.mark.parametrize("label,ops", [("X1", {1: "X"}), ("Z2", {2: "Z"}), ("Y1Z3", {1: "Y", 3: "Z"}),
                                       ("X2Y3Z1", {1: "Z", 2: "X", 3: "Y"}), ("I", {})])
def test_dense_matches_kron(label, ops):
    assert np.array_equal(PauliSum.from_label(label, 3).to_dense(), kron_oracle(ops, 3))


def test_little_endian_basis_action():
    # X on site 1 flips bit 0 of the basis index
    m = P.X(1, 3).to_dense()
    assert m[1, 0] == 1 and m[0, 1] == 1 and m[2, 0] == 0


def test_label_roundtrip_and_term():
    t = PauliTerm.from_label("X1Y2Z4", 4, phase_exp=1)
    assert t.label == "X1Y2Z4"
    assert t.coefficient == 1j
    assert np.allclose(t.to_dense(), 1j * PauliSum.from_label("X1Y2Z4", 4).to_dense())
    assert (PauliTerm.from_label("X1", 1) * PauliTerm.from_label("Z1", 1)).coefficient == -1j


@pytest.mark.parametrize("bad", ["X0", "X5", "Q1", "X1X1", "X1 junk"])
def test_bad_labels(bad):
    with pytest.raises((ValueError, DimensionError)):
        PauliSum.from_label(bad, 4)


def test_qubit_count_limits():
    with pytest.raises(DimensionError):
        PauliSum.identity(0)
    with pytest.raises(DimensionError):
        PauliSum.identity(65)
    big = PauliSum.from_label("X64", 64)
    assert (big @ big) == PauliSum.identity(64)
    with pytest.raises(ResourceError):
        big.to_dense()


def test_dense_cap_env(monkeypatch):
    monkeypatch.setenv("ISING_LAB_MAX_QUBITS", "2")
    with pytest.raises(ResourceError):
        PauliSum.identity(3).to_dense()


def test_cancellation_prunes():
    a = PauliSum.from_label("X1", 2) + PauliSum.from_label("X1", 2, -1.0)
    assert len(a) == 0 and not a
    assert render(a) == "0"


def test_trace_and_norm():
    a = PauliSum.identity(3, 2.0) + PauliSum.from_label("Z1", 3, 5.0)
    assert a.trace() == 16.0
    assert np.isclose(a.norm(), np.linalg.norm(a.to_dense()))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n))))
def test_product_is_matrix_product(ab):
    a, b = ab
    assert np.allclose((a @ b).to_dense(), a.to_dense() @ b.to_dense(), atol=1e-10)
    assert np.allclose((a + b).to_dense(), a.to_dense() + b.to_dense())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n), pauli_sums(n))))
def test_associative(abc):
    a, b, c = abc
    assert ((a @ b) @ c).allclose(a @ (b @ c), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(pauli_sums())
def test_dagger_trace_dense(a):
    m = a.to_dense()
    assert np.allclose(a.dagger().to_dense(), m.conj().T)
    assert np.isclose(a.trace(), np.trace(m))
    assert PauliSum.from_dense(m).allclose(a, atol=1e-10)
    assert (a + a.dagger()).is_hermitian(atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n))))
def test_commutator_identities(ab):
    a, b = ab
    ma, mb = a.to_dense(), b.to_dense()
    assert np.allclose(commutator(a, b).to_dense(), ma @ mb - mb @ ma, atol=1e-9)
    assert np.allclose(anticommutator(a, b).to_dense(), ma @ mb + mb @ ma, atol=1e-9)


def test_power_and_scalar_ops():
    a = PauliSum.from_label("X1", 2) + PauliSum.from_label("Z1", 2)
    assert a ** 2 == PauliSum.identity(2, 2.0)
    assert (a / 2) * 2 == a
    assert (1 - a) == -(a - 1)


def test_random_sum_is_reproducible():
    r1 = P.random_sum(3, 5, np.random.default_rng(1))
    r2 = P.random_sum(3, 5, np.random.default_rng(1))
    assert r1 == r2
