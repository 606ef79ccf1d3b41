"""Exact dense unitaries over Q(sqrt2, i) and the trace-formula channel.

This is the slow reference path used by tests and fixtures.  Nothing in the
search code depends on it; it exists so that the fast integer row actions have
an independent oracle.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .ring import Dyadic, SqrtExt


class QSqrt2I:
    """Exact ``(p + q*sqrt2 + i*(r + s*sqrt2)) / 2**d`` with integer coefficients."""

    __slots__ = ("p", "q", "r", "s", "d")

    def __init__(self, p: int = 0, q: int = 0, r: int = 0, s: int = 0, d: int = 0) -> None:
        while d > 0 and not (p | q | r | s) & 1:
            p, q, r, s, d = p >> 1, q >> 1, r >> 1, s >> 1, d - 1
        if not (p or q or r or s):
            d = 0
        self.p, self.q, self.r, self.s, self.d = p, q, r, s, d

    def is_zero(self) -> bool:
        return not (self.p or self.q or self.r or self.s)

    def _lift(self, d: int) -> tuple[int, int, int, int]:
        sh = d - self.d
        return self.p << sh, self.q << sh, self.r << sh, self.s << sh

    def __add__(self, o: QSqrt2I) -> QSqrt2I:
        d = max(self.d, o.d)
        a, b = self._lift(d), o._lift(d)
        return QSqrt2I(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], d)

    def __sub__(self, o: QSqrt2I) -> QSqrt2I:
        return self + (-o)

    def __neg__(self) -> QSqrt2I:
        return QSqrt2I(-self.p, -self.q, -self.r, -self.s, self.d)

    def __mul__(self, o: QSqrt2I) -> QSqrt2I:
        # (x + iy)(u + iv) with x, y, u, v in Z[sqrt2]
        x1, x2, y1, y2 = self.p, self.q, self.r, self.s
        u1, u2, v1, v2 = o.p, o.q, o.r, o.s
        xu = (x1 * u1 + 2 * x2 * u2, x1 * u2 + x2 * u1)
        yv = (y1 * v1 + 2 * y2 * v2, y1 * v2 + y2 * v1)
        xv = (x1 * v1 + 2 * x2 * v2, x1 * v2 + x2 * v1)
        yu = (y1 * u1 + 2 * y2 * u2, y1 * u2 + y2 * u1)
        return QSqrt2I(xu[0] - yv[0], xu[1] - yv[1], xv[0] + yu[0], xv[1] + yu[1], self.d + o.d)

    def conj(self) -> QSqrt2I:
        return QSqrt2I(self.p, self.q, -self.r, -self.s, self.d)

    def times_i(self, e: int) -> QSqrt2I:
        p, q, r, s = self.p, self.q, self.r, self.s
        for _ in range(e % 4):
            p, q, r, s = -r, -s, p, q
        return QSqrt2I(p, q, r, s, self.d)

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, QSqrt2I):
            return NotImplemented
        return (self.p, self.q, self.r, self.s, self.d) == (o.p, o.q, o.r, o.s, o.d)

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.r, self.s, self.d))

    def __complex__(self) -> complex:
        rt = np.sqrt(2.0)
        return complex(self.p + self.q * rt, self.r + self.s * rt) / 2.0 ** self.d

    def real_sqrt2(self) -> SqrtExt:
        if self.r or self.s:
            raise ValueError(f"entry {complex(self)} is not real")
        return SqrtExt(self.p, self.q, 2 * self.d)

    def real_dyadic(self) -> Dyadic:
        if self.r or self.s or self.q:
            raise ValueError(f"entry {complex(self)} is not in Z[1/2]")
        return Dyadic(self.p, self.d)

    def __repr__(self) -> str:
        return f"QSqrt2I({self.p}, {self.q}, {self.r}, {self.s}, d={self.d})"

    @classmethod
    def from_sqrt2_power(cls, num: int, k: int) -> QSqrt2I:
        """Real value ``num / sqrt2**k``."""
        m, odd = divmod(k, 2)
        if odd:
            return cls(0, num, 0, 0, m + 1)
        return cls(num, 0, 0, 0, m)


ZERO = QSqrt2I()
ONE = QSqrt2I(1)
I_UNIT = QSqrt2I(0, 0, 1)
INV_SQRT2 = QSqrt2I(0, 1, 0, 0, 1)
OMEGA = QSqrt2I(0, 1, 0, 1, 1)  # e^{i pi/4}


def zeros(d: int) -> np.ndarray:
    out = np.empty((d, d), dtype=object)
    out.fill(ZERO)
    return out


def eye(d: int) -> np.ndarray:
    out = zeros(d)
    for i in range(d):
        out[i, i] = ONE
    return out


def matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Build an exact matrix from ints or ``QSqrt2I`` entries."""
    d = len(rows)
    out = zeros(d)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v if isinstance(v, QSqrt2I) else QSqrt2I(int(v))
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    out = zeros(d)
    for i in range(d):
        for k in range(d):
            x = a[i, k]
            if x.is_zero():
                continue
            for j in range(d):
                y = b[k, j]
                if not y.is_zero():
                    out[i, j] = out[i, j] + x * y
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    out = zeros(d)
    for i in range(d):
        for j in range(d):
            out[j, i] = a[i, j].conj()
    return out


def scale(c: QSqrt2I, a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    out = zeros(d)
    for i in range(d):
        for j in range(d):
            out[i, j] = c * a[i, j]
    return out


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    out = zeros(d)
    for i in range(d):
        for j in range(d):
            out[i, j] = a[i, j] + b[i, j]
    return out


def to_complex(a: np.ndarray) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in a])


def is_unitary(a: np.ndarray) -> bool:
    prod = matmul(a, dagger(a))
    return all(prod[i, j] == (ONE if i == j else ZERO)
               for i in range(a.shape[0]) for j in range(a.shape[0]))


# --- Paulis as monomial matrices -------------------------------------------------------

def pauli_monomial(code: int, n: int) -> tuple[np.ndarray, list[int]]:
    """Column ``j`` of Pauli(code) is ``i**phase[j]`` at row ``perm[j]``."""
    d = 2 ** n
    perm = np.zeros(d, dtype=np.int64)
    phase = [0] * d
    for j in range(d):
        row, e = j, 0
        for q in range(n):
            bit_pos = n - 1 - q
            b = (j >> bit_pos) & 1
            letter = (code >> 2 * q) & 3
            if letter & 1:  # X or Y flips the bit
                row ^= 1 << bit_pos
            if letter == 2 and b:
                e += 2
            elif letter == 3:
                e += 1 + 2 * b
        perm[j] = row
        phase[j] = e % 4
    return perm, phase


def pauli_matrix(code: int, n: int) -> np.ndarray:
    perm, phase = pauli_monomial(code, n)
    out = zeros(2 ** n)
    for j in range(2 ** n):
        out[perm[j], j] = ONE.times_i(phase[j])
    return out


# --- channel via the trace formula ---------------------------------------------------

def channel_entries(u: np.ndarray) -> list[list[QSqrt2I]]:
    """``(1/2**n) Tr(P_r U P_s U^dagger)`` for all Pauli codes ``r, s``."""
    d = u.shape[0]
    n = d.bit_length() - 1
    if 2 ** n != d:
        raise ValueError("dimension must be a power of two")
    ud = dagger(u)
    monos = [pauli_monomial(c, n) for c in range(4 ** n)]
    out = [[ZERO] * 4 ** n for _ in range(4 ** n)]
    for s, (perm_s, phase_s) in enumerate(monos):
        up = zeros(d)
        for j in range(d):
            for i in range(d):
                x = u[i, perm_s[j]]
                if not x.is_zero():
                    up[i, j] = x.times_i(phase_s[j])
        v = matmul(up, ud)
        for r, (perm_r, phase_r) in enumerate(monos):
            acc = ZERO
            for j in range(d):
                x = v[j, perm_r[j]]
                if not x.is_zero():
                    acc = acc + x.times_i(phase_r[j])
            out[r][s] = QSqrt2I(acc.p, acc.q, acc.r, acc.s, acc.d + n)
    return out


# --- gates ---------------------------------------------------------------------------

def embed(g: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of gate ``g`` acting on ``qubits`` (first listed = most significant)."""
    k = len(qubits)
    if g.shape[0] != 2 ** k or len(set(qubits)) != k or any(not 0 <= q < n for q in qubits):
        raise ValueError("bad gate placement")
    d = 2 ** n
    out = zeros(d)
    pos = [n - 1 - q for q in qubits]
    rest_mask = (d - 1) & ~sum(1 << p for p in pos)
    for j in range(d):
        sub_j = 0
        for p in pos:
            sub_j = (sub_j << 1) | ((j >> p) & 1)
        for sub_i in range(2 ** k):
            x = g[sub_i, sub_j]
            if x.is_zero():
                continue
            i = j & rest_mask
            for t, p in enumerate(pos):
                if (sub_i >> (k - 1 - t)) & 1:
                    i |= 1 << p
            out[i, j] = x
    return out


def _diag(vals: Iterable[QSqrt2I]) -> np.ndarray:
    vals = list(vals)
    out = zeros(len(vals))
    for i, v in enumerate(vals):
        out[i, i] = v
    return out


def _perm(images: Sequence[int]) -> np.ndarray:
    out = zeros(len(images))
    for j, i in enumerate(images):
        out[i, j] = ONE
    return out


H = scale(INV_SQRT2, matrix([[1, 1], [1, -1]]))
S = _diag([ONE, I_UNIT])
T = _diag([ONE, OMEGA])
X = matrix([[0, 1], [1, 0]])
Z = matrix([[1, 0], [0, -1]])
CNOT = _perm([0, 1, 3, 2])
CZ = _diag([ONE, ONE, ONE, -ONE])
CS = _diag([ONE, ONE, ONE, I_UNIT])
SWAP = _perm([0, 2, 1, 3])
TOFFOLI = _perm([0, 1, 2, 3, 4, 5, 7, 6])
FREDKIN = _perm([0, 1, 2, 3, 4, 6, 5, 7])
# (a, b, c) -> (a, a^b, ab^c)
PERES = _perm([((a << 2) | ((a ^ b) << 1) | ((a & b) ^ c))
               for a, b, c in itertools.product((0, 1), repeat=3)])

GATES = {"H": H, "S": S, "T": T, "X": X, "Z": Z, "CNOT": CNOT, "CZ": CZ, "CS": CS, "SWAP": SWAP}


def r_unitary(p: int, n: int) -> np.ndarray:
    """``R(P) = (1+w)/2 I + (1-w)/2 P`` with ``w = e^{i pi/4}``."""
    c0 = QSqrt2I(2, 1, 0, 1, 2)
    c1 = QSqrt2I(2, -1, 0, -1, 2)
    return add(scale(c0, eye(2 ** n)), scale(c1, pauli_matrix(p, n)))


def g_unitary(p1: int, p2: int, n: int) -> np.ndarray:
    """``G = (3+i)/4 I + (1-i)/4 (P1 + P2 - P1 P2)`` with the matrix product ``P1 P2``."""
    a = QSqrt2I(3, 0, 1, 0, 2)
    b = QSqrt2I(1, 0, -1, 0, 2)
    m1, m2 = pauli_matrix(p1, n), pauli_matrix(p2, n)
    s = add(add(m1, m2), scale(-ONE, matmul(m1, m2)))
    return add(scale(a, eye(2 ** n)), scale(b, s))


def circuit_unitary(gates: Iterable[tuple[str, Sequence[int]]], n: int) -> np.ndarray:
    """Product of gates applied left to right in time order."""
    u = eye(2 ** n)
    for name, qubits in gates:
        u = matmul(embed(GATES[name], list(qubits), n), u)
    return u


def parse_complex(entry: Sequence[int]) -> QSqrt2I:
    """``[re_num, re_pow, im_num, im_pow]`` meaning ``re_num/sqrt2**re_pow + i im_num/sqrt2**im_pow``."""
    re_num, re_pow, im_num, im_pow = (int(x) for x in entry)
    re = QSqrt2I.from_sqrt2_power(re_num, re_pow)
    im = QSqrt2I.from_sqrt2_power(im_num, im_pow)
    return re + im * I_UNIT


def from_json(rows: Sequence[Sequence[Sequence[int]]]) -> np.ndarray:
    return matrix([[parse_complex(e) for e in row] for row in rows])


def to_channel(u: np.ndarray, ring: str = "sqrt2"):
    """Exact channel of a dense unitary as a :class:`~chansynth.channel.ChannelMatrix`."""
    from .channel import ChannelMatrix

    d = u.shape[0]
    n = d.bit_length() - 1
    ent = channel_entries(u)
    conv = QSqrt2I.real_sqrt2 if ring == "sqrt2" else QSqrt2I.real_dyadic
    return ChannelMatrix.from_entries(n, ring, [[conv(x) for x in row] for row in ent])
