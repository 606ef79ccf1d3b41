"""Gate-level circuits for generators and synthesis results.

``R(P) = C^dag T_q C`` whenever the Clifford ``C`` maps ``P`` to ``+Z_q`` under
conjugation, and likewise ``G_{P1,P2} = C^dag CS_{a,b} C`` when ``C`` maps the
pair to ``(+Z_a, +Z_b)``.  The conjugators come from a sweep over a small
stabilizer tableau with gates ``H``, ``S`` and ``CNOT``.

Circuits are gate lists in time order (first gate acts first).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import pauli
from .channel import CliffordResidue
from .genset import CLIFFORD_T, ActionSpace, action_space

CLIFFORD_GATES = ("H", "S", "CNOT")
NON_CLIFFORD = ("T", "CS")

# conjugator gate-count ceiling per generator: at most c * n**2 with this c
GATE_CEILING_C = 6


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    def to_json(self) -> dict:
        return {"g": self.name, "q": list(self.qubits)}

    @classmethod
    def from_json(cls, obj: dict) -> Gate:
        return cls(obj["g"], tuple(int(q) for q in obj["q"]))


@dataclass
class GateCircuit:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self) -> None:
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if g.name not in CLIFFORD_GATES + NON_CLIFFORD:
            raise ValueError(f"unknown gate {g.name!r}")
        want = 2 if g.name in ("CNOT", "CS") else 1
        if len(g.qubits) != want or len(set(g.qubits)) != want:
            raise ValueError(f"gate {g.name} needs {want} distinct qubits, got {g.qubits}")
        if any(not 0 <= q < self.n for q in g.qubits):
            raise ValueError(f"qubit index out of range in {g}")

    def append(self, name: str, *qubits: int) -> None:
        g = Gate(name, tuple(qubits))
        self._check(g)
        self.gates.append(g)

    def extend(self, other: Iterable[Gate]) -> None:
        for g in other:
            self._check(g)
            self.gates.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def non_clifford_count(self) -> int:
        return sum(g.name in NON_CLIFFORD for g in self.gates)

    def to_json(self) -> dict:
        return {"n": self.n, "gates": [g.to_json() for g in self.gates]}

    @classmethod
    def from_json(cls, obj: dict) -> GateCircuit:
        return cls(int(obj["n"]), [Gate.from_json(g) for g in obj["gates"]])

    def to_qasm(self) -> str:
        """Plain-text export, one gate per line.

        Grammar::

            header  := "OPENQASM-LIKE 1;" NL "qreg q[" n "];" NL
            gate    := name " " arg ("," arg)* ";" NL
            name    := "h" | "s" | "cx" | "t" | "cs"
            arg     := "q[" index "]"

        ``cx q[c],q[t]`` has control first.
        """
        names = {"H": "h", "S": "s", "CNOT": "cx", "T": "t", "CS": "cs"}
        lines = ["OPENQASM-LIKE 1;", f"qreg q[{self.n}];"]
        for g in self.gates:
            lines.append(f"{names[g.name]} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
        return "\n".join(lines) + "\n"

    def as_pairs(self) -> list[tuple[str, tuple[int, ...]]]:
        return [(g.name, g.qubits) for g in self.gates]


# --- tableau ------------------------------------------------------------------------

class PauliFrame:
    """A signed Pauli ``(-1)**sign * Pauli(code)`` tracked through Clifford conjugation."""

    __slots__ = ("n", "x", "z", "sign")

    def __init__(self, code: int, n: int, sign: int = 0) -> None:
        self.n = n
        self.x = [(code >> 2 * q) & 1 for q in range(n)]
        self.z = [(code >> (2 * q + 1)) & 1 for q in range(n)]
        self.sign = sign

    @property
    def code(self) -> int:
        return sum((self.x[q] | self.z[q] << 1) << 2 * q for q in range(self.n))

    def apply(self, g: Gate) -> None:
        """Replace ``P`` by ``g P g^dag``."""
        x, z = self.x, self.z
        if g.name == "H":
            (q,) = g.qubits
            self.sign ^= x[q] & z[q]
            x[q], z[q] = z[q], x[q]
        elif g.name == "S":
            (q,) = g.qubits
            self.sign ^= x[q] & z[q]
            z[q] ^= x[q]
        elif g.name == "CNOT":
            c, t = g.qubits
            self.sign ^= x[c] & z[t] & (x[t] ^ z[c] ^ 1)
            x[t] ^= x[c]
            z[c] ^= z[t]
        else:
            raise ValueError(f"{g.name} is not a tableau gate")

    def support(self) -> list[int]:
        return [q for q in range(self.n) if self.x[q] or self.z[q]]


@dataclass
class CliffordTableau:
    """Images of ``X_q`` and ``Z_q`` under conjugation by the accumulated gates."""

    n: int
    gates: list[Gate] = field(default_factory=list)

    def apply(self, name: str, *qubits: int) -> None:
        self.gates.append(Gate(name, tuple(qubits)))

    def conjugate(self, code: int, sign: int = 0) -> tuple[int, int]:
        """``C (-1)**sign Pauli(code) C^dag`` as ``(code, sign)``."""
        f = PauliFrame(code, self.n, sign)
        for g in self.gates:
            f.apply(g)
        return f.code, f.sign

    def images(self) -> dict[str, tuple[str, int]]:
        out = {}
        for q in range(self.n):
            for letter, bit in (("X", 1), ("Z", 2)):
                code, sign = self.conjugate(bit << 2 * q)
                out[f"{letter}{q}"] = (pauli.to_string(code, self.n), -1 if sign else 1)
        return out

    def inverse_gates(self) -> list[Gate]:
        out = []
        for g in reversed(self.gates):
            out.extend([g] * 3 if g.name == "S" else [g])
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "gates": [g.to_json() for g in self.gates],
                "images": {k: [p, s] for k, (p, s) in self.images().items()}}


def random_clifford(n: int, rng, length: int | None = None) -> CliffordTableau:
    """A random word of ``H``, ``S`` and ``CNOT`` gates (``5n + 5`` of them by default).

    Not uniform over the Clifford group, but every Clifford has positive
    probability once the word is long enough.
    """
    tab = CliffordTableau(n)
    kinds = 3 if n > 1 else 2
    for _ in range(5 * n + 5 if length is None else length):
        kind = int(rng.integers(kinds))
        if kind == 2:
            c, t = rng.choice(n, 2, replace=False)
            tab.apply("CNOT", int(c), int(t))
        else:
            tab.apply("HS"[kind], int(rng.integers(n)))
    return tab


def clifford_columns(tab: CliffordTableau) -> tuple[np.ndarray, np.ndarray]:
    """The channel of ``tab`` as a signed permutation: column ``j`` is ``signs[j] e_{rows[j]}``."""
    d = 4 ** tab.n
    rows = np.empty(d, dtype=np.int64)
    signs = np.empty(d, dtype=np.int64)
    for j in range(d):
        code, sign = tab.conjugate(j)
        rows[j], signs[j] = code, -1 if sign else 1
    return rows, signs


def _push(tab: CliffordTableau, frame: PauliFrame, name: str, *qubits: int) -> None:
    tab.apply(name, *qubits)
    frame.apply(tab.gates[-1])


def _flip_sign(tab: CliffordTableau, frames: Sequence[PauliFrame], q: int) -> None:
    # X_q = H S S H; conjugating Z_q by it gives -Z_q
    for name in ("H", "S", "S", "H"):
        tab.apply(name, q)
        for f in frames:
            f.apply(tab.gates[-1])


def _sweep(tab: CliffordTableau, frame: PauliFrame, others: Sequence[PauliFrame],
           allowed: Sequence[int], target: int | None = None) -> int:
    """Turn ``frame`` into ``+-Z_q`` touching only ``allowed`` qubits; returns ``q``.

    The Z support is fanned in toward ``target`` if given (it must be in the
    support), otherwise toward the highest-index support qubit.
    """
    everyone = [frame, *others]

    def push(name, *qubits):
        tab.apply(name, *qubits)
        for f in everyone:
            f.apply(tab.gates[-1])

    for q in allowed:
        if frame.x[q] and frame.z[q]:
            push("S", q)
        if frame.x[q]:
            push("H", q)
    support = [q for q in allowed if frame.z[q]]
    if not support:
        raise ValueError("nothing to diagonalize on the allowed qubits")
    if target is None:
        target = support[-1]
    elif target not in support:
        raise ValueError(f"qubit {target} is not in the support")
    for q in support:
        if q != target:
            push("CNOT", q, target)
    return target


def diagonalize_single(p: int, n: int) -> tuple[CliffordTableau, int]:
    """Clifford ``C`` and qubit ``q`` with ``C P C^dag = +Z_q``."""
    if not 0 < p < 4 ** n:
        raise ValueError("cannot diagonalize the identity")
    tab = CliffordTableau(n)
    f = PauliFrame(p, n)
    q = _sweep(tab, f, [], range(n))
    if f.sign:
        _flip_sign(tab, [f], q)
    return tab, q


def _pair_attempt(p1: int, p2: int, n: int, first_target: int | None) -> tuple[CliffordTableau, int, int]:
    tab = CliffordTableau(n)
    f1, f2 = PauliFrame(p1, n), PauliFrame(p2, n)
    a = _sweep(tab, f1, [f2], range(n), first_target)
    if f1.sign:
        _flip_sign(tab, [f1, f2], a)
    # f2 commutes with Z_a, so it has no X part on qubit a
    b = _sweep(tab, f2, [f1], [q for q in range(n) if q != a])
    if f2.z[a]:
        tab.apply("CNOT", a, b)
        f1.apply(tab.gates[-1])
        f2.apply(tab.gates[-1])
    if f2.sign:
        _flip_sign(tab, [f1, f2], b)
    assert (f1.code, f1.sign) == (2 << 2 * a, 0) and (f2.code, f2.sign) == (2 << 2 * b, 0)
    return tab, a, b


def diagonalize_pair(p1: int, p2: int, n: int) -> tuple[CliffordTableau, int, int]:
    """Clifford ``C`` and qubits ``a != b`` with ``C P1 C^dag = +Z_a`` and ``C P2 C^dag = +Z_b``.

    Every fan-in target of the first sweep is tried, with either Pauli
    going first, and the shortest circuit wins (ties keep the first found).
    """
    if not (0 < p1 < 4 ** n and 0 < p2 < 4 ** n) or p1 == p2:
        raise ValueError("need two distinct non-identity Paulis")
    if not pauli.commutes(p1, p2):
        raise ValueError("Paulis must commute")
    best = None
    for swap in (False, True):
        first = p2 if swap else p1
        for q in PauliFrame(first, n).support():
            try:
                tab, a, b = _pair_attempt(p2, p1, n, q) if swap else _pair_attempt(p1, p2, n, q)
            except ValueError:
                continue
            if swap:
                a, b = b, a
            if best is None or len(tab.gates) < len(best[0].gates):
                best = (tab, a, b)
    return best


def emit_generator_circuit(ident: Sequence[int], n: int, *, dagger: bool = False) -> GateCircuit:
    """``C^dag (T_q | CS_{a,b}) C`` in time order (``C`` first).

    With ``dagger`` the inverse generator is emitted; its single non-Clifford
    gate is followed by the Clifford correction ``S^3`` (``T^dag = T S^3``)
    or ``CZ`` (``CS^dag = CS CZ``).
    """
    circ = GateCircuit(n)
    if len(ident) == 1:
        tab, q = diagonalize_single(ident[0], n)
        circ.extend(tab.gates)
        circ.append("T", q)
        if dagger:
            for _ in range(3):
                circ.append("S", q)
    else:
        tab, a, b = diagonalize_pair(ident[0], ident[1], n)
        circ.extend(tab.gates)
        a, b = sorted((a, b))
        circ.append("CS", a, b)
        if dagger:
            circ.append("H", b)
            circ.append("CNOT", a, b)
            circ.append("H", b)
    circ.extend(tab.inverse_gates())
    return circ


@dataclass
class ExpandedCircuit:
    """``U = post . C_residue . pre`` up to global phase, each part in time order."""

    pre: GateCircuit
    residue: CliffordResidue
    post: GateCircuit

    @property
    def n(self) -> int:
        return self.pre.n

    def non_clifford_count(self) -> int:
        return self.pre.non_clifford_count() + self.post.non_clifford_count()

    def residue_tableau(self) -> dict[str, tuple[str, int]]:
        """Images of ``X_q`` and ``Z_q`` under the residue Clifford."""
        n = self.n
        out = {}
        for q in range(n):
            for letter, bit in (("X", 1), ("Z", 2)):
                col = bit << 2 * q
                out[f"{letter}{q}"] = (pauli.to_string(self.residue.perm[col], n), self.residue.signs[col])
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "pre": self.pre.to_json()["gates"], "residue": self.residue.to_json(),
                "residue_tableau": {k: [p, s] for k, (p, s) in self.residue_tableau().items()},
                "post": self.post.to_json()["gates"],
                "non_clifford_count": self.non_clifford_count()}


def expand_result(result, space: ActionSpace | None = None) -> ExpandedCircuit:
    """Gate circuits around the Clifford residue of a successful synthesis.

    Right actions ``h_1..h_k`` run first (in that order), then the residue,
    then the inverses of the left generators in reverse order.
    """
    if not result.success or result.residue is None:
        raise ValueError("only successful results can be expanded")
    space = space or action_space(result.n, result.flavor)
    pre, post = GateCircuit(result.n), GateCircuit(result.n)
    for a in result.actions:
        if a.side == "right":
            pre.extend(emit_generator_circuit(space.generators[a.gen], result.n))
    for a in reversed([a for a in result.actions if a.side == "left"]):
        post.extend(emit_generator_circuit(space.generators[a.gen], result.n, dagger=True))
    return ExpandedCircuit(pre, result.residue, post)


__all__ = ["CLIFFORD_T", "CliffordTableau", "ExpandedCircuit", "Gate", "GateCircuit", "PauliFrame",
           "diagonalize_pair", "diagonalize_single", "emit_generator_circuit", "expand_result"]
