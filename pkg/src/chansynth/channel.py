"""Integer channel representation of exactly implementable unitaries.

A :class:`ChannelMatrix` holds the ``4**n x 4**n`` real matrix with rows and
columns indexed by Pauli codes (see :mod:`chansynth.pauli`).  Internally the
whole matrix shares one denominator:

* ``sqrt2`` ring: ``M = (A + B*sqrt2) / sqrt2**K``
* ``dyadic`` ring: ``M = A / 2**K``

``K`` is kept minimal, which makes it equal to the matrix sde, and makes the
representation unique.  Per-entry canonical triples are derived on demand.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import pauli
from .ring import Dyadic, SqrtExt

SQRT2 = "sqrt2"
DYADIC = "dyadic"
RINGS = (SQRT2, DYADIC)

# int64 arrays only ever hold |x| < 2**60, so sums of four terms cannot overflow
_INT_LIMIT = 1 << 60


def _fit(x: np.ndarray) -> np.ndarray:
    if x.dtype == object:
        if x.size == 0 or max(abs(int(v)) for v in x.flat) < _INT_LIMIT:
            return x.astype(np.int64)
        return x
    if x.size and int(np.abs(x).max()) >= _INT_LIMIT:
        return x.astype(object)
    return x


def _frozen(x: np.ndarray) -> np.ndarray:
    x.setflags(write=False)
    return x


class ChannelMatrix:
    """Exact channel matrix over ``Z[1/sqrt2]`` or ``Z[1/2]``.  Immutable."""

    __slots__ = ("n", "ring", "a", "b", "k", "_key")

    def __init__(self, n: int, ring: str, a: np.ndarray, b: np.ndarray | None, k: int) -> None:
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        d = 4 ** n
        a = np.asarray(a)
        if a.shape != (d, d):
            raise ValueError(f"expected shape {(d, d)}, got {a.shape}")
        if a.dtype != object:
            a = a.astype(np.int64, copy=False)
        if ring == SQRT2:
            b = np.asarray(b)
            if b.dtype != object:
                b = b.astype(np.int64, copy=False)
            if a.dtype != b.dtype:
                a, b = a.astype(object), b.astype(object)
            while k > 0 and not (a & 1).any():
                a, b = b, a // 2
                k -= 1
            if not a.any() and not b.any():
                k = 0
            a, b = _fit(np.array(a)), _fit(np.array(b))
            if a.dtype != b.dtype:
                a, b = a.astype(object), b.astype(object)
            self.b = _frozen(b)
        else:
            if b is not None:
                raise ValueError("dyadic channels carry no sqrt2 part")
            while k > 0 and not (a & 1).any():
                a = a // 2
                k -= 1
            if not a.any():
                k = 0
            a = _fit(np.array(a))
            self.b = None
        self.n = n
        self.ring = ring
        self.a = _frozen(a)
        self.k = int(k)
        self._key = None

    # --- construction -----------------------------------------------------------------

    @classmethod
    def identity(cls, n: int, ring: str = SQRT2) -> ChannelMatrix:
        if n < 1:
            raise ValueError("n must be >= 1")
        d = 4 ** n
        eye = np.eye(d, dtype=np.int64)
        return cls(n, ring, eye, np.zeros((d, d), dtype=np.int64) if ring == SQRT2 else None, 0)

    @classmethod
    def from_entries(cls, n: int, ring: str, rows: Sequence[Sequence]) -> ChannelMatrix:
        """Build from a grid of :class:`SqrtExt` / :class:`Dyadic` values."""
        d = 4 ** n
        if len(rows) != d or any(len(r) != d for r in rows):
            raise ValueError("wrong matrix shape")
        kmax = max(e.k for row in rows for e in row)
        a = np.empty((d, d), dtype=object)
        b = np.empty((d, d), dtype=object)
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if ring == SQRT2:
                    if not isinstance(e, SqrtExt):
                        raise TypeError("sqrt2 channel needs SqrtExt entries")
                    t = kmax - e.k
                    x, y = e.a << (t // 2), e.b << (t // 2)
                    if t % 2:
                        x, y = 2 * y, x
                    a[i, j], b[i, j] = x, y
                else:
                    if not isinstance(e, Dyadic):
                        raise TypeError("dyadic channel needs Dyadic entries")
                    a[i, j] = e.a << (kmax - e.k)
        return cls(n, ring, a, b if ring == SQRT2 else None, kmax)

    @classmethod
    def from_signed_permutation(cls, n: int, ring: str, perm: Sequence[int],
                                signs: Sequence[int]) -> ChannelMatrix:
        """Column ``j`` has ``signs[j]`` at row ``perm[j]``."""
        d = 4 ** n
        a = np.zeros((d, d), dtype=np.int64)
        a[np.asarray(perm), np.arange(d)] = np.asarray(signs)
        return cls(n, ring, a, np.zeros((d, d), dtype=np.int64) if ring == SQRT2 else None, 0)

    # --- accessors -------------------------------------------------------------------

    @property
    def dim(self) -> int:
        return 4 ** self.n

    def sde(self) -> int:
        return self.k

    def entry(self, r: int, c: int):
        if self.ring == SQRT2:
            return SqrtExt(int(self.a[r, c]), int(self.b[r, c]), self.k)
        return Dyadic(int(self.a[r, c]), self.k)

    def entries(self) -> list[list]:
        d = self.dim
        return [[self.entry(r, c) for c in range(d)] for r in range(d)]

    def entry_arrays(self) -> tuple[np.ndarray, ...]:
        """Per-entry canonical ``(a, b, k)`` (or ``(a, k)``) as integer arrays."""
        a = self.a.copy()
        nz = a != 0
        if self.ring == SQRT2:
            b = self.b.copy()
            nz |= b != 0
            k = np.where(nz, self.k, 0).astype(np.int64)
            while True:
                m = (k > 0) & ((a & 1) == 0) & nz
                if not m.any():
                    break
                a2 = np.where(m, b, a)
                b = np.where(m, a // 2, b)
                a = a2
                k = k - m
            return a, b, k
        k = np.where(nz, self.k, 0).astype(np.int64)
        while True:
            m = (k > 0) & ((a & 1) == 0) & nz
            if not m.any():
                break
            a = np.where(m, a // 2, a)
            k = k - m
        return a, k

    def entry_sde(self) -> np.ndarray:
        return self.entry_arrays()[-1]

    def to_float(self) -> np.ndarray:
        a = self.a.astype(float)
        if self.ring == SQRT2:
            return (a + self.b.astype(float) * np.sqrt(2.0)) / np.sqrt(2.0) ** self.k
        return a / 2.0 ** self.k

    def transpose(self) -> ChannelMatrix:
        return _raw(self.n, self.ring, self.a.T, None if self.b is None else self.b.T, self.k)

    @property
    def T(self) -> ChannelMatrix:
        return self.transpose()

    # --- identity / hashing ----------------------------------------------------------

    def key(self) -> bytes:
        if self._key is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(f"{self.n}:{self.ring}:{self.k}:".encode())
            for arr in (self.a, self.b):
                if arr is None:
                    continue
                if arr.dtype == object:
                    h.update(repr(arr.tolist()).encode())
                else:
                    h.update(np.ascontiguousarray(arr).tobytes())
            self._key = h.digest()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        if (self.n, self.ring, self.k) != (other.n, other.ring, other.k):
            return False
        if not np.array_equal(self.a, other.a):
            return False
        return self.b is None or np.array_equal(self.b, other.b)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ChannelMatrix(n={self.n}, ring={self.ring!r}, sde={self.k})"

    # --- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        if self.ring == SQRT2:
            a, b, k = self.entry_arrays()
            rows = [[[int(a[i, j]), int(b[i, j]), int(k[i, j])] for j in range(self.dim)]
                    for i in range(self.dim)]
        else:
            a, k = self.entry_arrays()
            rows = [[[int(a[i, j]), int(k[i, j])] for j in range(self.dim)] for i in range(self.dim)]
        return {"n": self.n, "ring": self.ring, "rows": rows}

    @classmethod
    def from_json(cls, obj: dict) -> ChannelMatrix:
        n, ring = int(obj["n"]), obj["ring"]
        parse = SqrtExt.from_json if ring == SQRT2 else Dyadic.from_json
        rows = [[parse(e) for e in row] for row in obj["rows"]]
        return cls.from_entries(n, ring, rows)


def _raw(n: int, ring: str, a: np.ndarray, b: np.ndarray | None, k: int) -> ChannelMatrix:
    # bypass reduction for values already known to be canonical
    m = ChannelMatrix.__new__(ChannelMatrix)
    m.n, m.ring, m.a, m.b, m.k, m._key = n, ring, a, b, k, None
    return m


def identity(n: int, ring: str = SQRT2) -> ChannelMatrix:
    return ChannelMatrix.identity(n, ring)


def transpose(m: ChannelMatrix) -> ChannelMatrix:
    return m.transpose()


# --- generator channels --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeneratorChannel:
    """Row-action form of the channel of ``R(P)`` or ``G_{P1,P2}``.

    Row ``r`` is either copied, or replaced by ``scale * sum(signs[r, t] * M[rows[t]])``
    where ``rows = (r, *partners[r])``.  ``scale`` is ``1/sqrt2`` for ``R(P)``
    (one partner) and ``1/2`` for ``G`` (three partners).
    """

    kind: str                  # "T" or "CS"
    id: tuple[int, ...]        # (P,) or (P1, P2)
    n: int
    mixed: np.ndarray          # bool[R]
    partners: np.ndarray       # int[R, t]; equals r on copied rows
    signs: np.ndarray          # int[R, t+1]; diagonal sign first, zeros on copied rows
    transposed: bool = False

    @property
    def ring(self) -> str:
        return SQRT2 if self.kind == "T" else DYADIC

    @property
    def mixed_rows(self) -> np.ndarray:
        return np.flatnonzero(self.mixed)

    @property
    def copy_rows(self) -> np.ndarray:
        return np.flatnonzero(~self.mixed)

    def row_action(self, r: int) -> tuple:
        """``("copy",)``, ``("mix2", s, sign)`` or ``("mix4", (s, s', s''), signs)``."""
        if not self.mixed[r]:
            return ("copy",)
        if self.kind == "T":
            return ("mix2", int(self.partners[r, 0]), int(self.signs[r, 1]) * int(self.signs[r, 0]))
        return ("mix4", tuple(int(x) for x in self.partners[r]),
                tuple(int(x) for x in self.signs[r]))

    def transpose(self) -> GeneratorChannel:
        return _transposed(self)

    def to_channel(self) -> ChannelMatrix:
        """Dense channel matrix of this generator."""
        d = 4 ** self.n
        a = np.zeros((d, d), dtype=np.int64)
        rows = np.arange(d)
        cr = ~self.mixed
        if self.kind == "T":
            b = np.zeros((d, d), dtype=np.int64)
            # 1 at level sqrt2^1 is (0 + 1*sqrt2)/sqrt2
            b[rows[cr], rows[cr]] = 1
            mr = rows[self.mixed]
            a[mr, mr] = self.signs[mr, 0]
            a[mr, self.partners[mr, 0]] = self.signs[mr, 1]
            return ChannelMatrix(self.n, SQRT2, a, b, 1)
        a[rows[cr], rows[cr]] = 2
        mr = rows[self.mixed]
        a[mr, mr] = self.signs[mr, 0]
        for t in range(3):
            a[mr, self.partners[mr, t]] = self.signs[mr, t + 1]
        return ChannelMatrix(self.n, DYADIC, a, None, 1)

    def label(self) -> str | list[str]:
        if self.kind == "T":
            return pauli.to_string(self.id[0], self.n)
        return [pauli.to_string(p, self.n) for p in self.id]


def _pauli_sum_channel(terms: list[tuple[int, "object"]], n: int) -> dict[tuple[int, int], "object"]:
    """Nonzero entries ``(r, s) -> value`` of the channel of ``sum_t c_t P_t``."""
    from .dense import QSqrt2I  # noqa: F401  (coefficients are QSqrt2I)

    d = 4 ** n
    if n <= 3:
        phase_tab, _ = pauli.tables(n)

        def ph(p, q):
            return int(phase_tab[p, q])
    else:
        def ph(p, q):
            return pauli.product(p, q, n).phase
    out = {}
    for s in range(d):
        acc = {}
        for t, ct in terms:
            e1 = ph(t, s)
            for u, cu in terms:
                mid = t ^ s
                e2 = ph(mid, u)
                c = (ct * cu.conj()).times_i(e1 + e2)
                code = mid ^ u
                acc[code] = acc[code] + c if code in acc else c
        for r, c in acc.items():
            if not c.is_zero():
                if c.r or c.s:
                    raise ArithmeticError("channel entry is not real")
                out[(r, s)] = c
    return out


def _from_entries(kind: str, ident: tuple[int, ...], n: int, entries: dict) -> GeneratorChannel:
    from .dense import QSqrt2I

    d = 4 ** n
    t = 1 if kind == "T" else 3
    mixed = np.zeros(d, dtype=bool)
    partners = np.tile(np.arange(d)[:, None], (1, t))
    signs = np.zeros((d, t + 1), dtype=np.int64)
    by_row: dict[int, list[tuple[int, QSqrt2I]]] = {}
    for (r, s), v in entries.items():
        by_row.setdefault(r, []).append((s, v))
    one = QSqrt2I(1)
    unit = QSqrt2I(0, 1, 0, 0, 1) if kind == "T" else QSqrt2I(1, 0, 0, 0, 1)
    for r in range(d):
        row = sorted(by_row.get(r, []))
        if len(row) == 1 and row[0][0] == r and row[0][1] == one:
            signs[r, 0] = 1
            continue
        if len(row) != t + 1:
            raise ArithmeticError(f"row {r} of generator {ident} has {len(row)} nonzeros")
        mixed[r] = True
        diag = dict(row)
        if r not in diag:
            raise ArithmeticError(f"row {r} of generator {ident} has zero diagonal")
        others = [s for s, _ in row if s != r]
        for col, s in enumerate([r] + others):
            v = diag[s]
            if v == unit:
                signs[r, col] = 1
            elif v == -unit:
                signs[r, col] = -1
            else:
                raise ArithmeticError(f"unexpected entry {v!r} in generator {ident}")
        partners[r] = others
    return GeneratorChannel(kind, ident, n, _frozen(mixed), _frozen(partners), _frozen(signs))


@lru_cache(maxsize=None)
def r_channel(p: int, n: int) -> GeneratorChannel:
    """Row-action form of ``<R(P)>``."""
    from .dense import QSqrt2I

    if not 0 < p < 4 ** n:
        raise ValueError(f"R(P) needs a non-identity Pauli, got code {p}")
    terms = [(0, QSqrt2I(2, 1, 0, 1, 2)), (p, QSqrt2I(2, -1, 0, -1, 2))]
    g = _from_entries("T", (p,), n, _pauli_sum_channel(terms, n))
    # reorder so partners are exactly P * Pauli(r)
    return g


def check_cs_pair(p1: int, p2: int, n: int) -> None:
    if not (0 < p1 < 4 ** n and 0 < p2 < 4 ** n):
        raise ValueError("G needs non-identity Paulis")
    if p1 == p2:
        raise ValueError("G needs two distinct Paulis")
    if not pauli.commutes(p1, p2):
        raise ValueError("G needs commuting Paulis")


@lru_cache(maxsize=None)
def g_channel(p1: int, p2: int, n: int) -> GeneratorChannel:
    """Row-action form of ``<G_{P1,P2}>`` for the ordered pair ``(P1, P2)``."""
    from .dense import QSqrt2I

    check_cs_pair(p1, p2, n)
    alpha, beta = QSqrt2I(3, 0, 1, 0, 2), QSqrt2I(1, 0, -1, 0, 2)
    e = pauli.product(p1, p2, n).phase
    terms = [(0, alpha), (p1, beta), (p2, beta), (p1 ^ p2, (-beta).times_i(e))]
    g = _from_entries("CS", (p1, p2), n, _pauli_sum_channel(terms, n))
    # keep partners in the fixed order (P1 Q, P2 Q, P1 P2 Q)
    rows = np.arange(4 ** n)
    want = np.stack([rows ^ p1, rows ^ p2, rows ^ p1 ^ p2], axis=1)
    partners = np.where(g.mixed[:, None], want, g.partners)
    signs = g.signs.copy()
    for r in np.flatnonzero(g.mixed):
        old = list(g.partners[r])
        signs[r, 1:] = [g.signs[r, 1 + old.index(s)] for s in want[r]]
    return GeneratorChannel("CS", (p1, p2), n, g.mixed, _frozen(partners), _frozen(signs))


def generator_channel(ident, n: int) -> GeneratorChannel:
    """``ident`` is a Pauli code (R(P)) or a pair of codes (G_{P1,P2})."""
    if isinstance(ident, (tuple, list)):
        if len(ident) == 1:
            return r_channel(int(ident[0]), n)
        return g_channel(int(ident[0]), int(ident[1]), n)
    return r_channel(int(ident), n)


def _transposed(g: GeneratorChannel) -> GeneratorChannel:
    d = 4 ** g.n
    signs = g.signs.copy()
    for r in np.flatnonzero(g.mixed):
        for t, s in enumerate(g.partners[r]):
            # sign of <g>[s, r]
            back = list(g.partners[s])
            signs[r, t + 1] = g.signs[s, 1 + back.index(r)]
    del d
    return GeneratorChannel(g.kind, g.id, g.n, g.mixed, g.partners, _frozen(signs),
                            not g.transposed)


# --- multiplication ------------------------------------------------------------------

def left_mul_fast(g: GeneratorChannel, m: ChannelMatrix) -> ChannelMatrix:
    """``<g> @ M`` using row copies and 2- or 4-row combinations only."""
    if g.ring != m.ring or g.n != m.n:
        raise ValueError(f"generator ({g.kind}, n={g.n}) does not act on {m!r}")
    mr = g.mixed_rows
    cr = g.copy_rows
    a = m.a
    s = g.signs[mr]
    p = g.partners[mr]
    new_a = np.empty_like(a)
    if m.ring == SQRT2:
        b = m.b
        new_b = np.empty_like(b)
        # copied rows move up one sqrt2 level: (a + b√2)·√2 = 2b + a√2
        new_a[cr] = 2 * b[cr]
        new_b[cr] = a[cr]
        new_a[mr] = s[:, :1] * a[mr] + s[:, 1:2] * a[p[:, 0]]
        new_b[mr] = s[:, :1] * b[mr] + s[:, 1:2] * b[p[:, 0]]
        return ChannelMatrix(m.n, SQRT2, new_a, new_b, m.k + 1)
    new_a[cr] = 2 * a[cr]
    new_a[mr] = (s[:, :1] * a[mr] + s[:, 1:2] * a[p[:, 0]]
                 + s[:, 2:3] * a[p[:, 1]] + s[:, 3:4] * a[p[:, 2]])
    return ChannelMatrix(m.n, DYADIC, new_a, None, m.k + 1)


def right_mul_fast(m: ChannelMatrix, g: GeneratorChannel) -> ChannelMatrix:
    """``M @ <g>``, computed as ``(<g>^T M^T)^T``."""
    return left_mul_fast(g.transpose(), m.transpose()).transpose()


def apply_action(m: ChannelMatrix, g: GeneratorChannel, side: str) -> ChannelMatrix:
    """``left``: ``M <- <g> M``; ``right``: ``M <- M <g>^T`` (i.e. ``X R(P)^dagger``)."""
    if side == "left":
        return left_mul_fast(g, m)
    if side == "right":
        return left_mul_fast(g, m.transpose()).transpose()
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def naive_mul(x: ChannelMatrix, y: ChannelMatrix) -> ChannelMatrix:
    """Plain exact matrix product on Python integers; the oracle for the fast path."""
    if x.ring != y.ring or x.n != y.n:
        raise ValueError("ring/shape mismatch")
    xa, ya = x.a.astype(object), y.a.astype(object)
    if x.ring == SQRT2:
        xb, yb = x.b.astype(object), y.b.astype(object)
        a = xa.dot(ya) + 2 * xb.dot(yb)
        b = xa.dot(yb) + xb.dot(ya)
        return ChannelMatrix(x.n, SQRT2, a, b, x.k + y.k)
    return ChannelMatrix(x.n, DYADIC, xa.dot(ya), None, x.k + y.k)


# --- sde profile ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SdeProfile:
    """Where the top two sde levels sit, column by column.

    ``s_col[j]`` lists rows whose entry in column ``j`` has sde ``k_max``;
    ``s_col1`` lists columns with exactly one such row.  The primed versions
    do the same for sde ``k_max - 1`` with an odd canonical numerator (so
    zeros never count, even at level 0).  At ``k_max == 0`` the "max" positions
    are the entries with odd numerator, which is what the row-mixing parity
    rules need.
    """

    k_max: int
    max_mask: np.ndarray       # bool[R, C]
    second_mask: np.ndarray    # bool[R, C]
    s_col: tuple[np.ndarray, ...]
    s_col1: np.ndarray
    s_col_second: tuple[np.ndarray, ...]
    s_col1_second: np.ndarray


def sde_profile(m: ChannelMatrix) -> SdeProfile:
    odd = (m.a & 1).astype(bool)
    if m.k == 0:
        second = np.zeros_like(odd)
    elif m.ring == SQRT2:
        second = ~odd & (m.b & 1).astype(bool)
    else:
        second = (m.a & 3) == 2
    second = np.asarray(second, dtype=bool)
    d = m.dim
    s_col = tuple(np.flatnonzero(odd[:, j]) for j in range(d))
    s_col2 = tuple(np.flatnonzero(second[:, j]) for j in range(d))
    cnt = odd.sum(axis=0)
    cnt2 = second.sum(axis=0)
    return SdeProfile(m.k, _frozen(odd), _frozen(second), s_col, _frozen(np.flatnonzero(cnt == 1)),
                      s_col2, _frozen(np.flatnonzero(cnt2 == 1)))


# --- Clifford detection and residues --------------------------------------------------

@dataclass(frozen=True)
class CliffordResidue:
    """Signed column permutation: column ``j`` is ``signs[j]`` at row ``perm[j]``."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def to_channel(self, n: int, ring: str) -> ChannelMatrix:
        return ChannelMatrix.from_signed_permutation(n, ring, self.perm, self.signs)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "signs": list(self.signs)}

    @classmethod
    def from_json(cls, obj: dict) -> CliffordResidue:
        return cls(tuple(int(x) for x in obj["perm"]), tuple(int(x) for x in obj["signs"]))


def is_clifford(m: ChannelMatrix) -> bool:
    if m.k != 0:
        return False
    if m.b is not None and m.b.any():
        return False
    a = m.a
    if not np.isin(a, (-1, 0, 1)).all():
        return False
    nz = a != 0
    return bool((nz.sum(axis=0) == 1).all() and (nz.sum(axis=1) == 1).all())


def extract_residue(m: ChannelMatrix) -> CliffordResidue:
    if not is_clifford(m):
        raise ValueError("matrix is not a signed permutation")
    rows = np.argmax(m.a != 0, axis=0)
    signs = m.a[rows, np.arange(m.dim)]
    return CliffordResidue(tuple(int(x) for x in rows), tuple(int(x) for x in signs))


# --- coset label ---------------------------------------------------------------------

def _column_signs(a: np.ndarray, b: np.ndarray | None) -> np.ndarray:
    nz = a != 0
    if b is not None:
        nz = nz | (b != 0)
    first = np.argmax(nz, axis=0)
    cols = np.arange(a.shape[1])
    fa = a[first, cols]
    neg = fa < 0
    if b is not None:
        fb = b[first, cols]
        neg = neg | ((fa == 0) & (fb < 0))
    return np.where(neg, -1, 1)


def _column_order(a: np.ndarray, b: np.ndarray | None) -> np.ndarray:
    if b is None:
        keys = a
    else:
        keys = np.empty((2 * a.shape[0], a.shape[1]), dtype=a.dtype)
        keys[0::2], keys[1::2] = a, b
    if keys.dtype == object:
        cols = [tuple(keys[:, j]) for j in range(keys.shape[1])]
        return np.array(sorted(range(len(cols)), key=cols.__getitem__), dtype=np.int64)
    return np.lexsort(keys[::-1])


def coset_label(m: ChannelMatrix) -> ChannelMatrix:
    """Canonical representative of ``{M C : C Clifford}``.

    All entries already share the denominator ``sqrt2**K`` (or ``2**K``);
    each column is negated if its first nonzero numerator is negative (``a``
    first, then ``b``), and columns are sorted lexicographically top to bottom.
    """
    sgn = _column_signs(m.a, m.b)
    a = m.a * sgn[None, :]
    b = None if m.b is None else m.b * sgn[None, :]
    order = _column_order(a, b)
    a = np.ascontiguousarray(a[:, order])
    b = None if b is None else np.ascontiguousarray(b[:, order])
    return _raw(m.n, m.ring, _frozen(a), None if b is None else _frozen(b), m.k)


def permute_columns(m: ChannelMatrix, rows: np.ndarray, signs: np.ndarray) -> ChannelMatrix:
    """``M Q`` for the signed permutation ``Q`` whose column ``j`` is ``signs[j] e_{rows[j]}``.

    A Clifford channel is such a ``Q``, so this is the cheap right action of a Clifford.
    """
    rows = np.asarray(rows, dtype=np.int64)
    sgn = np.asarray(signs, dtype=np.int64)
    a = np.ascontiguousarray(m.a[:, rows] * sgn[None, :])
    b = None if m.b is None else np.ascontiguousarray(m.b[:, rows] * sgn[None, :])
    return _raw(m.n, m.ring, _frozen(a), None if b is None else _frozen(b), m.k)


def random_clifford_action(m: ChannelMatrix, rng: np.random.Generator | int | None = None) -> ChannelMatrix:
    """Uniformly permute columns and negate each with probability 1/2.

    Most such signed permutations are not Clifford channels; this is a
    stress input for coset labels, which are invariant under all of them.
    """
    rng = np.random.default_rng(rng)
    perm = rng.permutation(m.dim)
    sgn = np.where(rng.integers(0, 2, size=m.dim) == 1, -1, 1)
    return permute_columns(m, perm, sgn)


def kron_identity(m: ChannelMatrix, qubits: Sequence[int], n: int) -> ChannelMatrix:
    """Channel of ``U`` acting on ``qubits`` of an ``n``-qubit register.

    Uses ``<U (x) I> = <U> (x) <I>``: the entry is nonzero only when row and
    column Paulis agree (both identity) off the support.
    """
    if len(qubits) != m.n:
        raise ValueError("qubit list must match the channel size")
    d = 4 ** n
    full = np.arange(d)
    sub = np.zeros(d, dtype=np.int64)
    for t, q in enumerate(qubits):
        sub |= ((full >> (2 * q)) & 3) << (2 * t)
    support = sum(3 << (2 * q) for q in qubits)
    rest = full & ~support
    same = rest[:, None] == rest[None, :]
    # entries share one denominator, so the copied blocks need no rescaling
    a = np.where(same, m.a[sub[:, None], sub[None, :]], 0)
    b = None
    if m.ring == SQRT2:
        b = np.where(same, m.b[sub[:, None], sub[None, :]], 0)
    return ChannelMatrix(n, m.ring, a, b, m.k)
