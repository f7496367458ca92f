"""Fixed-point words and the affine maps that tie codes to physical values.

Python ints are unbounded, so widths are enforced by validation instead of
masking; every word knows its own bit width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_BITS = 32


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (not banker's)."""
    return math.floor(x + 0.5) if x >= 0 else math.ceil(x - 0.5)


@dataclass(frozen=True)
class FixedWord:
    """Unsigned integer constrained to fit in `bits`."""

    value: int
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.bits <= MAX_BITS:
            raise ValueError(f"word width must be 1..{MAX_BITS}, got {self.bits}")
        if not 0 <= self.value < (1 << self.bits):
            raise ValueError(f"value {self.value} does not fit in {self.bits} bits")


@dataclass(frozen=True)
class DomainMap:
    """Affine correspondence between reals in [lo, hi] and codes 0 .. 2^bits - 1.

    Code 0 maps to lo, the top code to hi.
    """

    lo: float
    hi: float
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.bits <= MAX_BITS:
            raise ValueError(f"map width must be 1..{MAX_BITS}, got {self.bits}")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def top(self) -> int:
        return (1 << self.bits) - 1

    @property
    def lsb(self) -> float:
        """Real-value step between adjacent codes."""
        return (self.hi - self.lo) / self.top


def quantize(x: float, dmap: DomainMap) -> FixedWord:
    """Nearest code for x; values outside [lo, hi] clamp to the end codes."""
    t = (x - dmap.lo) / (dmap.hi - dmap.lo) * dmap.top
    code = round_half_away(t)
    return FixedWord(min(max(code, 0), dmap.top), dmap.bits)


def dequantize(w: FixedWord, dmap: DomainMap) -> float:
    """Code back to its real value; exact at both endpoints."""
    if w.bits != dmap.bits:
        raise ValueError(f"word is {w.bits}-bit but map expects {dmap.bits}-bit")
    return dmap.lo + (w.value / dmap.top) * (dmap.hi - dmap.lo)


def rescale(w: FixedWord, to_bits: int) -> FixedWord:
    """Widen a word by a left shift (exact). Shrinking would lose bits: error."""
    if to_bits < w.bits:
        raise ValueError(f"cannot shrink a {w.bits}-bit word to {to_bits} bits")
    return FixedWord(w.value << (to_bits - w.bits), to_bits)
