"""Dense complex linear algebra on ``2**n`` square matrices.

Dense operators are plain ``numpy`` arrays of dtype ``complex128``.  The
auxiliary qubit of the lax construction sits on the most significant bit,
so tracing it out is a sum of the two diagonal blocks.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg

from .errors import BranchCutError, ContractError, DimensionError, NumericalError
from .report import rel_residual

DenseOperator = np.ndarray

COND_MAX_INV = 1e10
COND_MAX_EIG = 1e8
BRANCH_MARGIN = 1e-6


def as_dense(a) -> np.ndarray:
    """Validate a square ``2**n`` finite matrix and return it as complex."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected square matrix, got shape {a.shape}")
    d = a.shape[0]
    if d < 1 or d & (d - 1):
        raise DimensionError(f"dimension {d} is not a power of two")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    return a


def _same(a, b):
    a, b = as_dense(a), as_dense(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def eye(n: int) -> np.ndarray:
    return np.eye(1 << n, dtype=complex)


def mat_mul(a, b) -> np.ndarray:
    a, b = _same(a, b)
    return a @ b


def mat_add(a, b) -> np.ndarray:
    a, b = _same(a, b)
    return a + b


def mat_scale(a, s: complex) -> np.ndarray:
    return as_dense(a) * s


def dagger(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def mat_inv(a, cond_max: float = COND_MAX_INV) -> np.ndarray:
    a = as_dense(a)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > cond_max:
        raise NumericalError(f"matrix is singular or ill-conditioned (cond = {cond:.3e})")
    return np.linalg.inv(a)


def mat_exp(a) -> np.ndarray:
    return scipy.linalg.expm(as_dense(a))


def is_normal(a, atol: float = 1e-10) -> bool:
    a = np.asarray(a)
    ah = dagger(a)
    return np.linalg.norm(a @ ah - ah @ a) <= atol * max(1.0, np.linalg.norm(a) ** 2)


def _check_branch(w):
    bad = w[(np.abs(w) < 1e-300) | (np.abs(np.angle(w)) > np.pi - BRANCH_MARGIN)]
    if len(bad):
        raise BranchCutError(
            f"{len(bad)} eigenvalue(s) on or next to the closed negative real axis: "
            + ", ".join(f"{v:.6g}" for v in bad[:8]), bad)


def mat_log(a, cond_max: float = COND_MAX_EIG) -> np.ndarray:
    """Principal matrix logarithm via diagonalization.

    Normal matrices go through a complex Schur form (unitary eigenbasis);
    others through ``eig`` with a condition check on the eigenvector matrix.
    """
    a = as_dense(a)
    if is_normal(a):
        t, q = scipy.linalg.schur(a, output="complex")
        w = np.diag(t).copy()
        _check_branch(w)
        return (q * np.log(w)) @ dagger(q)
    w, v = np.linalg.eig(a)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > cond_max:
        raise NumericalError(f"eigenvector matrix ill-conditioned (cond = {cond:.3e})")
    _check_branch(w)
    return (v * np.log(w)) @ np.linalg.inv(v)


def partial_trace_aux(a, aux_dim: int = 2) -> np.ndarray:
    """Trace out the most significant ``aux_dim`` factor."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % aux_dim:
        raise DimensionError(f"cannot trace a {aux_dim}-dim factor from shape {a.shape}")
    d = a.shape[0] // aux_dim
    return sum(a[k * d:(k + 1) * d, k * d:(k + 1) * d] for k in range(aux_dim))


class FDResult(NamedTuple):
    value: np.ndarray
    error: float


def _central(f, x0, order, h):
    if order == 1:
        return (f(x0 + h) - f(x0 - h)) / (2 * h)
    return (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h)


def fd_derivative(f: Callable[[float], np.ndarray], x0: float, order: int = 1,
                  h: float = 1e-4, richardson: bool = True) -> FDResult:
    """Central finite difference of ``f`` at ``x0``.

    With ``richardson`` the step is halved once and the two estimates are
    combined to cancel the ``h**2`` term; ``error`` is the norm of the
    correction applied (without Richardson, the gap to the half-step value).
    """
    if order not in (1, 2):
        raise ContractError(f"order must be 1 or 2, got {order}")
    if not 1e-6 <= h <= 1e-2:
        raise ContractError(f"step h={h} outside [1e-6, 1e-2]")
    with np.errstate(invalid="ignore", over="ignore"):
        coarse = np.asarray(_central(f, x0, order, h))
        fine = np.asarray(_central(f, x0, order, h / 2))
    if not (np.all(np.isfinite(coarse)) and np.all(np.isfinite(fine))):
        raise NumericalError("function returned non-finite values")
    if not richardson:
        return FDResult(coarse, float(np.linalg.norm(fine - coarse)))
    value = (4 * fine - coarse) / 3
    return FDResult(value, float(np.linalg.norm(value - fine)))


# -- comparison helpers -------------------------------------------------------

def fit_scalar(a, b) -> tuple[complex, float]:
    """Least-squares ``s`` minimizing ``||a - s b||`` and the relative residual."""
    a, b = np.asarray(a), np.asarray(b)
    den = np.vdot(b, b)
    if abs(den) == 0:
        return 0j, rel_residual(a, 0 * a)
    s = complex(np.vdot(b, a) / den)
    return s, rel_residual(a, s * b)


def traceless(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return a - np.trace(a) / a.shape[0] * np.eye(a.shape[0])


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])))


def numerical_rank(a, tol: float = 1e-10) -> int:
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if len(s) else 0.0)))


def comm(a, b) -> np.ndarray:
    return a @ b - b @ a
