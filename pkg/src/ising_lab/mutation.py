"""Deliberate defects for checking that the verification suites can fail.

Known mutation names:

``kw_plus_sign``
    flips the sign of the coupling inside the trotterized duality operator
    D_plus (uses ``1 - i Omega X X`` in place of ``1 + i Omega X X``).
``jw_phase``
    builds the even Majorana modes as ``Z..Z X Z`` (missing the factor i),
    so they are anti-Hermitian.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar

KNOWN = frozenset({"kw_plus_sign", "jw_phase"})

_active: ContextVar[frozenset] = ContextVar("ising_lab_mutations", default=frozenset())


def active(name: str) -> bool:
    return name in _active.get()


@contextmanager
def inject(*names: str):
    unknown = set(names) - KNOWN
    if unknown:
        raise ValueError(f"unknown mutations: {sorted(unknown)}")
    token = _active.set(_active.get() | frozenset(names))
    try:
        yield
    finally:
        _active.reset(token)
