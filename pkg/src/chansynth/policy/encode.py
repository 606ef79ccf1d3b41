"""Binary observation of a channel state.

Two views are stacked along the last axis.  The first is the coset label of
the state.  The second transposes that label and takes the coset label again.
Both only depend on the right-Clifford coset of the state.  Every entry
contributes its canonical ``(a, b, k)`` (or ``(a, k)``), each as a ``B``-bit
two's-complement word, most significant bit first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import SQRT2, ChannelMatrix, coset_label
from .config import EncoderConfig


@dataclass
class EncodeStats:
    """Running count of integers that did not fit in ``B`` bits."""

    clipped: int = 0
    encoded: int = 0


STATS = EncodeStats()


def fields_per_entry(ring: str) -> int:
    return 3 if ring == SQRT2 else 2


def channels(ring: str, cfg: EncoderConfig) -> int:
    return 2 * fields_per_entry(ring) * cfg.B


def twos_complement_bits(x: np.ndarray, B: int) -> tuple[np.ndarray, int]:
    """``x[..., None]`` as ``B`` bits, MSB first; saturates out-of-range values.

    Returns the bits (uint8) and the number of clipped entries.
    """
    lo, hi = -(1 << (B - 1)), (1 << (B - 1)) - 1
    if x.dtype == object:
        clipped = int(sum(1 for v in x.flat if v < lo or v > hi))
        x = np.array([min(max(int(v), lo), hi) for v in x.flat], dtype=np.int64).reshape(x.shape)
    else:
        clipped = int(((x < lo) | (x > hi)).sum())
        x = np.clip(x, lo, hi)
    u = (x.astype(np.int64) & ((1 << B) - 1)).astype(np.uint64)
    shifts = np.arange(B - 1, -1, -1, dtype=np.uint64)
    bits = ((u[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return bits, clipped


def _view_bits(m: ChannelMatrix, B: int) -> tuple[np.ndarray, int]:
    parts = m.entry_arrays()
    out, clipped = [], 0
    for arr in parts:
        bits, c = twos_complement_bits(arr, B)
        out.append(bits)
        clipped += c
    return np.concatenate(out, axis=-1), clipped


def views(state: ChannelMatrix) -> tuple[ChannelMatrix, ChannelMatrix]:
    first = coset_label(state)
    return first, coset_label(first.transpose())


def encode(state: ChannelMatrix, cfg: EncoderConfig | None = None) -> np.ndarray:
    """Observation tensor of shape ``(4**n, 4**n, 2 * fields * B)`` with 0/1 entries."""
    cfg = cfg or EncoderConfig()
    v1, v2 = views(state)
    b1, c1 = _view_bits(v1, cfg.B)
    b2, c2 = _view_bits(v2, cfg.B)
    STATS.clipped += c1 + c2
    STATS.encoded += 2 * v1.a.size * fields_per_entry(state.ring)
    return np.concatenate([b1, b2], axis=-1)


def encode_entry(values, B: int) -> str:
    """Bit string of one entry, fields separated by spaces (for docs and tests)."""
    words = []
    for v in values:
        bits, _ = twos_complement_bits(np.array([v], dtype=np.int64), B)
        words.append("".join(str(int(b)) for b in bits[0]))
    return " ".join(words)
