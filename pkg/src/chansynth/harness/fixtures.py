"""Named benchmark unitaries as exact channels."""
from __future__ import annotations

from functools import lru_cache

from .. import dense
from ..channel import DYADIC, SQRT2, ChannelMatrix



def _tof_sandwich():
    # (TOF x I)(I x TOF)(TOF x I) on four qubits
    outer = dense.embed(dense.TOFFOLI, [0, 1, 2], 4)
    inner = dense.embed(dense.TOFFOLI, [1, 2, 3], 4)
    return dense.matmul(dense.matmul(outer, inner), outer)


# name -> (dense unitary or a builder for one, qubit count)
_DENSE = {
    "toffoli": (dense.TOFFOLI, 3),
    "fredkin": (dense.FREDKIN, 3),
    "peres": (dense.PERES, 3),
    "cs": (dense.CS, 2),
    "cz": (dense.CZ, 2),
    "u": (_tof_sandwich, 4),
}

T_COUNTS = {"toffoli": 7, "fredkin": 7, "peres": 7, "u": 7}


def names() -> list[str]:
    return sorted(_DENSE)


def unitary(name: str):
    try:
        u = _DENSE[name.lower()][0]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {names()}") from None
    return u() if callable(u) else u


@lru_cache(maxsize=None)
def fixture(name: str, ring: str = SQRT2) -> ChannelMatrix:
    """Exact channel of a named unitary, computed with the trace formula."""
    return dense.to_channel(unitary(name), ring)


def fixtures(ring: str = SQRT2) -> dict[str, ChannelMatrix]:
    out = {}
    for name in names():
        try:
            out[name] = fixture(name, ring)
        except ValueError:
            # entries outside the requested ring are skipped
            continue
    return out


__all__ = ["DYADIC", "SQRT2", "T_COUNTS", "fixture", "fixtures", "names", "unitary"]
