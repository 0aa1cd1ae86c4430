import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab import lax
from ising_lab.errors import ContractError
from ising_lab.fermion import fermionic_parity
from ising_lab.lax import Inhomogeneity, mode_rep
from ising_lab.linalg import fit_scalar, unitarity_residual
from ising_lab.report import rel_residual

lam = st.floats(-1.0, 1.0, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(lam, lam)
def test_ybe(l, m):
    assert lax.ybe_check(l, m).residual < 1e-12


@settings(max_examples=10, deadline=None)
@given(lam, lam)
def test_ybe_physical_modes(l, m):
    rep = mode_rep(2)
    assert lax.ybe_check(l, m, rep, modes=(1, 2, 3)).residual < 1e-12
    assert lax.ybe_check(l, m, rep, modes=("a", "b", 4)).residual < 1e-12


def test_mode_rep_clifford():
    for N in (1, 2, 3):
        assert mode_rep(N).clifford_residual() == 0.0


def test_r_operator_at_zero_is_permutation():
    rep = mode_rep(1)
    assert np.allclose(lax.r_operator("a", 1, 0.0, rep), lax.permutation_operator("a", 1, rep))
    with pytest.raises(ContractError):
        lax.r_operator(1, 1, 0.3, rep)


@pytest.mark.parametrize("l", [-0.7, 0.0, 0.4])
def test_r_check_unitary(l):
    assert unitarity_residual(lax.r_check_operator("a", 2, l, mode_rep(1))) < 1e-12


@pytest.mark.parametrize("omega", [0.1, 0.3])
def test_rtt_and_commuting_staggered(omega):
    eta = Inhomogeneity.staggered(3, omega)
    assert lax.rtt_check(0.37, -0.52, eta).residual < 1e-10
    assert lax.transfer_commute_check(0.37, -0.52, eta).residual < 1e-10


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 1000), lam, lam)
def test_transfer_commute_random_inhomogeneity(seed, l, m):
    eta = Inhomogeneity.random(2, np.random.default_rng(seed))
    assert lax.transfer_commute_check(l, m, eta).residual < 1e-10


def test_inhomogeneity_indexing():
    eta = Inhomogeneity.staggered(2, 0.4)
    assert eta[1] == -0.2 and eta[2] == 0.2 and eta.N == 2
    with pytest.raises(ContractError):
        Inhomogeneity((0.1, 0.2, 0.3))
    with pytest.raises(ContractError):
        lax.monodromy("a", 0.1, eta, mode_rep(3))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_twisted_translation_table(N):
    rep = lax.twisted_translation_check(N)
    assert rep.residual < 1e-12
    assert rep.metadata["unitarity"] < 1e-12


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_calibration_scalar(N):
    c = lax.calibrate_trace_convention(N)
    assert abs(c - (-1) ** (N + 1) * np.sqrt(2)) < 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_u_power_is_fermionic_parity(N):
    u = lax.twisted_translation(N)
    s, res = fit_scalar(np.linalg.matrix_power(u, 2 * N), fermionic_parity(N).to_dense())
    assert res < 1e-12 and abs(abs(s) - 1) < 1e-12


def test_aux_components_roundtrip(rng):
    ops = {k: rng.normal(size=(4, 4)) for k in "IXYZ"}
    pauli = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]),
             "Z": np.diag([1, -1])}
    full = sum(np.kron(pauli[k], ops[k]) for k in "IXYZ")
    comps = lax.aux_components(full)
    assert all(np.allclose(comps[k], ops[k]) for k in "IXYZ")


@pytest.mark.parametrize("omega", [0.1, 0.5])
def test_closed_transfer_forms(omega):
    N = 3
    c = lax.expected_calibration(N)
    assert rel_residual(lax.tau_staggered(omega / 2, omega, N), c * lax.tau_plus_closed(omega, N)) < 1e-12
    assert rel_residual(lax.tau_staggered(-omega / 2, omega, N), c * lax.tau_minus_closed(omega, N)) < 1e-12


def test_ybe_timing():
    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    worst = max(lax.ybe_check(*rng.uniform(-1, 1, 2)).residual for _ in range(100))
    assert worst < 1e-12 and time.perf_counter() - t0 < 5.0
