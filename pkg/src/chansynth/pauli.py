"""Bit-packed n-qubit Paulis.

Qubit ``q`` occupies bits ``2q`` (x) and ``2q+1`` (z) of the code, so on one
qubit ``I, X, Z, Y = 0, 1, 2, 3``.  Text form puts qubit 0 first: ``"XZ"`` is
X on qubit 0 and Z on qubit 1, and the dense matrix is ``X ⊗ Z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_LETTERS = "IXZY"
_FROM_LETTER = {c: i for i, c in enumerate(_LETTERS)}

# i-exponent of the single-qubit product p*q (p, q in 0..3 with the packing above)
_PHASE1 = np.zeros((4, 4), dtype=np.int64)
for _p, _q, _e in [(1, 3, 1), (3, 2, 1), (2, 1, 1), (3, 1, 3), (2, 3, 3), (1, 2, 3)]:
    _PHASE1[_p, _q] = _e

_X_MASK_CACHE: dict[int, int] = {}


def _x_mask(n: int) -> int:
    m = _X_MASK_CACHE.get(n)
    if m is None:
        m = sum(1 << (2 * q) for q in range(n))
        _X_MASK_CACHE[n] = m
    return m


@dataclass(frozen=True)
class PauliProduct:
    result: int
    phase: int  # product == i**phase * Pauli(result)
    anticommute: bool


def enumerate_paulis(n: int) -> list[int]:
    """Global row/column order: identity first, then ascending code."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return list(range(4 ** n))


def _check(n: int, *codes: int) -> None:
    bound = 4 ** n
    for c in codes:
        if not 0 <= c < bound:
            raise ValueError(f"Pauli code {c} out of range for n={n}")


def symplectic(p: int, q: int) -> int:
    """Symplectic inner product of two codes (0 commute, 1 anticommute)."""
    # x-bits of p against z-bits of q and vice versa
    m = _x_mask((max(p, q).bit_length() + 1) // 2)
    xp, zp = p & m, (p >> 1) & m
    xq, zq = q & m, (q >> 1) & m
    return (bin(xp & zq).count("1") + bin(zp & xq).count("1")) & 1


def commutes(p: int, q: int, n: int | None = None) -> bool:
    if n is not None:
        _check(n, p, q)
    return symplectic(p, q) == 0


def product(p: int, q: int, n: int) -> PauliProduct:
    """Exact product ``Pauli(p) @ Pauli(q) = i**phase * Pauli(result)``."""
    _check(n, p, q)
    phase = 0
    for qb in range(n):
        phase += int(_PHASE1[(p >> 2 * qb) & 3, (q >> 2 * qb) & 3])
    return PauliProduct(p ^ q, phase % 4, symplectic(p, q) == 1)


def to_string(code: int, n: int) -> str:
    _check(n, code)
    return "".join(_LETTERS[(code >> 2 * q) & 3] for q in range(n))


def from_string(s: str) -> int:
    code = 0
    for q, c in enumerate(s.upper()):
        if c not in _FROM_LETTER:
            raise ValueError(f"bad Pauli letter {c!r} in {s!r}")
        code |= _FROM_LETTER[c] << (2 * q)
    return code


def weight(code: int) -> int:
    w = 0
    while code:
        w += (code & 3) != 0
        code >>= 2
    return w


_SINGLE = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[1, 0], [0, -1]], dtype=complex),
    3: np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def dense(code: int, n: int) -> np.ndarray:
    """Dense ``2**n x 2**n`` complex matrix, qubit 0 as the leftmost factor."""
    _check(n, code)
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        out = np.kron(out, _SINGLE[(code >> 2 * q) & 3])
    return out


@lru_cache(maxsize=None)
def tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(phase, anti)`` arrays of shape ``(4**n, 4**n)``; the product code is ``p ^ q``.

    Only materialized for small ``n``; the bitwise functions above cover the rest.
    """
    if n > 3:
        raise ValueError("Pauli product tables are only built for n <= 3")
    d = 4 ** n
    codes = np.arange(d, dtype=np.int64)
    phase = np.zeros((d, d), dtype=np.int64)
    anti = np.zeros((d, d), dtype=np.int64)
    for qb in range(n):
        sp = (codes >> 2 * qb) & 3
        phase += _PHASE1[sp[:, None], sp[None, :]]
        xp, zp = sp & 1, sp >> 1
        anti ^= (xp[:, None] & zp[None, :]) ^ (zp[:, None] & xp[None, :])
    phase %= 4
    phase.setflags(write=False)
    anti = anti.astype(bool)
    anti.setflags(write=False)
    return phase, anti


def anticommute_matrix(n: int) -> np.ndarray:
    """Boolean ``(4**n, 4**n)`` anticommutation matrix, computed bitwise."""
    d = 4 ** n
    codes = np.arange(d, dtype=np.int64)
    anti = np.zeros((d, d), dtype=bool)
    for qb in range(n):
        sp = (codes >> 2 * qb) & 3
        xp, zp = (sp & 1).astype(bool), (sp >> 1).astype(bool)
        anti ^= (xp[:, None] & zp[None, :]) ^ (zp[:, None] & xp[None, :])
    return anti
