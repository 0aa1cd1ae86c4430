"""Bit-packed Pauli strings and their complex linear combinations.

A Pauli string on ``n`` qubits is stored as two integer masks ``(x, z)``.
Site ``j`` (1-based) lives in bit ``j - 1``, so site 1 is the least
significant bit of every basis-state index; the same little-endian order is
used by :meth:`PauliSum.to_dense` and everywhere else in the package.

The Hermitian string for a key ``(x, z)`` is ``i**popcount(x & z) X^x Z^z``,
i.e. a ``Y`` sits wherever both masks are set.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DimensionError, ResourceError

MAX_SITES = 64
PRUNE = 1e-14
DEFAULT_MAX_DENSE_QUBITS = 12

_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)
_LABEL = re.compile(r"([IXYZ])(\d+)")


def max_dense_qubits() -> int:
    """Qubit cap for dense materialization (``ISING_LAB_MAX_QUBITS``)."""
    return int(os.environ.get("ISING_LAB_MAX_QUBITS", DEFAULT_MAX_DENSE_QUBITS))


def _popcount(a):
    return np.bitwise_count(a).astype(np.int64)


def _check_n(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_SITES:
        raise DimensionError(f"qubit count must be in [1, {MAX_SITES}], got {n}")
    return n


def _parse_label(label: str, n: int) -> tuple[int, int]:
    x = z = 0
    stripped = label.replace(" ", "")
    if stripped in ("", "I"):
        return 0, 0
    pos = 0
    for m in _LABEL.finditer(stripped):
        if m.start() != pos:
            raise ValueError(f"cannot parse Pauli label {label!r}")
        pos = m.end()
        op, site = m.group(1), int(m.group(2))
        if not 1 <= site <= n:
            raise DimensionError(f"site {site} outside 1..{n} in {label!r}")
        bit = 1 << (site - 1)
        if (x | z) & bit:
            raise ValueError(f"site {site} repeated in {label!r}")
        if op in "XY":
            x |= bit
        if op in "ZY":
            z |= bit
    if pos != len(stripped):
        raise ValueError(f"cannot parse Pauli label {label!r}")
    return x, z


def _label(x: int, z: int, n: int) -> str:
    out = []
    for j in range(n):
        b = 1 << j
        if x & b and z & b:
            out.append(f"Y{j + 1}")
        elif x & b:
            out.append(f"X{j + 1}")
        elif z & b:
            out.append(f"Z{j + 1}")
    return "".join(out) or "I"


def _mul_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    # sigma(x1,z1) sigma(x2,z2) = i**k sigma(x1^x2, z1^z2)
    x, z = x1 ^ x2, z1 ^ z2
    k = (x1 & z1).bit_count() + (x2 & z2).bit_count() + 2 * (z1 & x2).bit_count()
    return (k - (x & z).bit_count()) % 4


@dataclass(frozen=True)
class PauliTerm:
    """A single Pauli string with an ``i**phase_exp`` prefactor."""

    n: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        _check_n(self.n)
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise DimensionError(f"mask bits beyond n={self.n}")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_label(cls, label: str, n: int, phase_exp: int = 0) -> "PauliTerm":
        x, z = _parse_label(label, _check_n(n))
        return cls(n, x, z, phase_exp)

    @classmethod
    def identity(cls, n: int) -> "PauliTerm":
        return cls(n)

    @property
    def coefficient(self) -> complex:
        return complex(_I_POW[self.phase_exp])

    @property
    def label(self) -> str:
        return _label(self.x_mask, self.z_mask, self.n)

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return term_mul(self, other)

    def to_sum(self) -> "PauliSum":
        return PauliSum(self.n, {(self.x_mask, self.z_mask): self.coefficient})

    def to_dense(self) -> np.ndarray:
        return self.to_sum().to_dense()

    def __str__(self):
        return ["", "i", "-", "-i"][self.phase_exp] + self.label


def term_mul(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product of two Pauli terms with exact integer phase bookkeeping."""
    if a.n != b.n:
        raise DimensionError(f"term_mul on {a.n} and {b.n} qubits")
    k = _mul_phase(a.x_mask, a.z_mask, b.x_mask, b.z_mask)
    return PauliTerm(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, a.phase_exp + b.phase_exp + k)


class PauliSum:
    """Immutable complex linear combination of Pauli strings on ``n`` qubits.

    ``terms`` maps ``(x_mask, z_mask)`` to the coefficient of the Hermitian
    string for that key.  Coefficients with magnitude below ``prune`` are
    dropped on construction, and keys are kept unique and sorted.
    """

    __slots__ = ("n", "_x", "_z", "_c", "prune")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None,
                 prune: float = PRUNE):
        n = _check_n(n)
        items = list((terms or {}).items())
        x = np.array([k[0] for k, _ in items], dtype=np.uint64)
        z = np.array([k[1] for k, _ in items], dtype=np.uint64)
        c = np.array([v for _, v in items], dtype=complex)
        if items and n < 64 and (int(x.max()) >> n or int(z.max()) >> n):
            raise DimensionError(f"mask bits beyond n={n}")
        self._init(n, x, z, c, prune)

    def _init(self, n, x, z, c, prune):
        self.n = n
        self.prune = prune
        if len(c):
            keys = np.stack([x, z], axis=1)
            uniq, inv = np.unique(keys, axis=0, return_inverse=True)
            inv = inv.ravel()
            acc = (np.bincount(inv, weights=c.real, minlength=len(uniq))
                   + 1j * np.bincount(inv, weights=c.imag, minlength=len(uniq)))
            keep = np.abs(acc) >= prune
            x, z, c = uniq[keep, 0], uniq[keep, 1], acc[keep]
        self._x = np.ascontiguousarray(x, dtype=np.uint64)
        self._z = np.ascontiguousarray(z, dtype=np.uint64)
        self._c = np.ascontiguousarray(c, dtype=complex)
        for arr in (self._x, self._z, self._c):
            arr.flags.writeable = False

    @classmethod
    def _from_arrays(cls, n, x, z, c, prune=PRUNE) -> "PauliSum":
        obj = cls.__new__(cls)
        obj._init(n, np.asarray(x, dtype=np.uint64), np.asarray(z, dtype=np.uint64),
                  np.asarray(c, dtype=complex), prune)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n, {(0, 0): coeff})

    @classmethod
    def from_label(cls, label: str, n: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n, {_parse_label(label, _check_n(n)): coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm], coeffs: Iterable[complex] | None = None) -> "PauliSum":
        terms = list(terms)
        if not terms:
            raise ValueError("from_terms needs at least one term to fix n")
        n = terms[0].n
        coeffs = [1.0] * len(terms) if coeffs is None else list(coeffs)
        if any(t.n != n for t in terms):
            raise DimensionError("terms act on different qubit counts")
        return cls._from_arrays(
            n, [t.x_mask for t in terms], [t.z_mask for t in terms],
            [c * t.coefficient for t, c in zip(terms, coeffs)])

    @classmethod
    def from_dense(cls, m: np.ndarray, prune: float = PRUNE) -> "PauliSum":
        """Pauli decomposition of a ``2**n`` square matrix."""
        m = np.asarray(m, dtype=complex)
        d = m.shape[0]
        n = d.bit_length() - 1
        if m.shape != (d, d) or d != 1 << n or n < 1:
            raise DimensionError(f"expected 2**n square matrix, got {m.shape}")
        if n > max_dense_qubits():
            raise ResourceError(f"{n} qubits exceeds dense cap {max_dense_qubits()}")
        idx = np.arange(d, dtype=np.uint64)
        xs = idx[:, None]
        # v[x, i] = m[i ^ x, i]; a Walsh-Hadamard transform over i gives the z spectrum
        v = m[(idx[None, :] ^ xs).astype(np.intp), idx[None, :].astype(np.intp)]
        w = _fwht(v) / d
        zs = idx[None, :]
        phase = _I_POW[(-_popcount(xs & zs)) % 4]
        coeffs = w * phase
        xx, zz = np.broadcast_arrays(xs, zs)
        return cls._from_arrays(n, xx.ravel(), zz.ravel(), coeffs.ravel(), prune)

    # -- container protocol -------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], complex]:
        return {(int(x), int(z)): complex(c) for x, z, c in zip(self._x, self._z, self._c)}

    def __len__(self):
        return len(self._c)

    def __iter__(self) -> Iterator[tuple[int, int, complex]]:
        for x, z, c in zip(self._x, self._z, self._c):
            yield int(x), int(z), complex(c)

    def __bool__(self):
        return bool(len(self._c))

    def coeff(self, label_or_key) -> complex:
        if isinstance(label_or_key, str):
            label_or_key = _parse_label(label_or_key, self.n)
        return self.terms.get(tuple(label_or_key), 0j)

    @property
    def arrays(self):
        return self._x, self._z, self._c

    # -- algebra ------------------------------------------------------------
    def _check(self, other: "PauliSum"):
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"operands on {self.n} and {other.n} qubits")
        return None

    def __add__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            other = PauliSum.identity(self.n, other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return PauliSum._from_arrays(
            self.n, np.concatenate([self._x, other._x]), np.concatenate([self._z, other._z]),
            np.concatenate([self._c, other._c]), self.prune)

    __radd__ = __add__

    def __neg__(self):
        return PauliSum._from_arrays(self.n, self._x, self._z, -self._c, self.prune)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return sum_mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum._from_arrays(self.n, self._x, self._z, self._c * other, self.prune)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (1.0 / other)

    def __matmul__(self, other):
        return sum_mul(self, other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = PauliSum.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out

    def dagger(self) -> "PauliSum":
        return dagger(self)

    def trace(self) -> complex:
        return trace(self)

    def to_dense(self) -> np.ndarray:
        return to_dense(self)

    def norm(self) -> float:
        """Frobenius norm of the represented matrix."""
        return float(np.sqrt(2.0 ** self.n * np.sum(np.abs(self._c) ** 2)))

    def max_coeff(self) -> float:
        return float(np.max(np.abs(self._c))) if len(self._c) else 0.0

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return (self - self.dagger()).max_coeff() <= atol

    def allclose(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        return (self - other).max_coeff() <= atol

    def traceless(self) -> "PauliSum":
        return self - PauliSum.identity(self.n, self.coeff((0, 0)))

    def support(self) -> int:
        """Bitmask of sites touched by any term."""
        return int(np.bitwise_or.reduce(self._x | self._z)) if len(self) else 0

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self._x, other._x)
                and np.array_equal(self._z, other._z) and np.array_equal(self._c, other._c))

    __hash__ = None

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"PauliSum(n={self.n}, {render(self)})"


def render(a: PauliSum, digits: int = 6) -> str:
    """Textual form such as ``(0.5+0i)·Z1 + (-0.5+0i)·X1X2``."""
    if not len(a):
        return "0"
    parts = []
    for x, z, c in a:
        re_, im = round(c.real, digits) + 0.0, round(c.imag, digits) + 0.0
        parts.append(f"({re_:g}{im:+g}i)·{_label(x, z, a.n)}")
    return " + ".join(parts)


def sum_mul(a: PauliSum, b: PauliSum) -> PauliSum:
    """Operator product of two Pauli sums (bilinear extension of ``term_mul``)."""
    if not isinstance(a, PauliSum) or not isinstance(b, PauliSum):
        raise TypeError("sum_mul expects two PauliSum operands")
    if a.n != b.n:
        raise DimensionError(f"sum_mul on {a.n} and {b.n} qubits")
    if not len(a) or not len(b):
        return PauliSum.zero(a.n)
    x1, z1 = a._x[:, None], a._z[:, None]
    x2, z2 = b._x[None, :], b._z[None, :]
    x, z = x1 ^ x2, z1 ^ z2
    k = _popcount(x1 & z1) + _popcount(x2 & z2) + 2 * _popcount(z1 & x2) - _popcount(x & z)
    c = a._c[:, None] * b._c[None, :] * _I_POW[k % 4]
    return PauliSum._from_arrays(a.n, x.ravel(), z.ravel(), c.ravel(), min(a.prune, b.prune))


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    return sum_mul(a, b) - sum_mul(b, a)


def anticommutator(a: PauliSum, b: PauliSum) -> PauliSum:
    return sum_mul(a, b) + sum_mul(b, a)


def dagger(a: PauliSum) -> PauliSum:
    # Every stored string is Hermitian, so only coefficients conjugate.
    return PauliSum._from_arrays(a.n, a._x, a._z, np.conj(a._c), a.prune)


def trace(a: PauliSum) -> complex:
    return 2.0 ** a.n * a.coeff((0, 0))


def to_dense(a: PauliSum) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix, site 1 on the least significant bit."""
    if a.n > max_dense_qubits():
        raise ResourceError(f"{a.n} qubits exceeds dense cap {max_dense_qubits()} "
                            "(set ISING_LAB_MAX_QUBITS to raise it)")
    d = 1 << a.n
    idx = np.arange(d, dtype=np.uint64)
    out = np.zeros((d, d), dtype=complex)
    cols = idx.astype(np.intp)
    for x, z, c in zip(a._x, a._z, a._c):
        rows = (idx ^ x).astype(np.intp)
        signs = 1 - 2 * (_popcount(idx & z) & 1)
        out[rows, cols] += c * _I_POW[int(_popcount(x & z)) % 4] * signs
    return out


def _fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    v = np.array(v, dtype=complex)
    d = v.shape[-1]
    h = 1
    lead = v.shape[:-1]
    while h < d:
        v = v.reshape(*lead, d // (2 * h), 2, h)
        a, b = v[..., 0, :].copy(), v[..., 1, :].copy()
        v[..., 0, :] = a + b
        v[..., 1, :] = a - b
        v = v.reshape(*lead, d)
        h *= 2
    return v


# -- single-site helpers ------------------------------------------------------

def pauli(label: str, n: int, coeff: complex = 1.0) -> PauliSum:
    return PauliSum.from_label(label, n, coeff)


def identity(n: int, coeff: complex = 1.0) -> PauliSum:
    return PauliSum.identity(n, coeff)


def X(j: int, n: int) -> PauliSum:
    return pauli(f"X{j}", n)


def Y(j: int, n: int) -> PauliSum:
    return pauli(f"Y{j}", n)


def Z(j: int, n: int) -> PauliSum:
    return pauli(f"Z{j}", n)


def random_sum(n: int, n_terms: int, rng: np.random.Generator) -> PauliSum:
    """Random PauliSum with Gaussian complex coefficients (test helper)."""
    lim = 1 << n
    x = rng.integers(0, lim, size=n_terms, dtype=np.uint64)
    z = rng.integers(0, lim, size=n_terms, dtype=np.uint64)
    c = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return PauliSum._from_arrays(n, x, z, c)
