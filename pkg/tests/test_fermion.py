import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab import mutation
from ising_lab.errors import ContractError
from ising_lab.fermion import (clifford_check, fermionic_parity, gamma_wrapped, jw_gamma, majorana_bits,
                               majorana_degrees, parity_commutes, projector_even, projector_odd, spin_parity)
from ising_lab.pauli import PauliSum


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_clifford_exact(N):
    rep = clifford_check(N)
    assert rep.residual == 0.0 and rep.passed


def test_modes_hermitian_and_strings():
    assert jw_gamma(1, 3) == PauliSum.from_label("X1", 3)
    assert jw_gamma(4, 3) == PauliSum.from_label("Z1Y2", 3)
    assert jw_gamma(5, 3) == PauliSum.from_label("Z1Z2X3", 3)
    assert all(jw_gamma(j, 3).is_hermitian() for j in range(1, 7))


@pytest.mark.parametrize("j", [1, 2, 3])
def test_bilinears(j):
    N = 4
    assert jw_gamma(2 * j - 1, N) @ jw_gamma(2 * j, N) == PauliSum.from_label(f"Z{j}", N, 1j)
    assert jw_gamma(2 * j, N) @ jw_gamma(2 * j + 1, N) == PauliSum.from_label(f"X{j}X{j + 1}", N, 1j)


def test_wrap_bond_carries_parity():
    N = 4
    wrap = -(jw_gamma(2 * N, N) @ jw_gamma(1, N))
    assert wrap == 1j * (PauliSum.from_label(f"X1X{N}", N) @ spin_parity(N))
    assert gamma_wrapped(2 * N + 1, N) == jw_gamma(1, N)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_parity_relation(N):
    # product of all modes is i**N times the spin parity
    assert fermionic_parity(N) == (1j ** N) * spin_parity(N)


def test_projectors():
    N = 3
    pe, po = projector_even(N), projector_odd(N)
    assert pe @ pe == pe and po @ po == po
    assert pe @ po == PauliSum.zero(N)
    assert pe + po == PauliSum.identity(N)


def test_index_range():
    with pytest.raises(ContractError):
        jw_gamma(0, 2)
    with pytest.raises(ContractError):
        jw_gamma(5, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, 2 * N), st.integers(1, 2 * N))))
def test_majorana_bits_of_bilinears(args):
    N, j, k = args
    op = jw_gamma(j, N) @ jw_gamma(k, N)
    expected = 0 if j == k else (1 << (j - 1)) | (1 << (k - 1))
    (x, z, _), = list(op)
    assert majorana_bits(x, z, N) == expected
    assert majorana_degrees(op) == ({0} if j == k else {2})
    assert parity_commutes(op)


def test_single_mode_is_parity_odd():
    assert not parity_commutes(jw_gamma(3, 3))
    assert majorana_degrees(jw_gamma(3, 3)) == {1}


def test_jw_phase_mutation_breaks_clifford():
    with mutation.inject("jw_phase"):
        rep = clifford_check(3)
    assert not rep.passed
    assert clifford_check(3).passed


def test_unknown_mutation():
    with pytest.raises(ValueError):
        with mutation.inject("no_such_thing"):
            pass
