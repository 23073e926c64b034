"""Exact evaluation of fractional parts {n x} for seeded random x.

x is a dyadic rational X / 2^B whose bit budget B always exceeds the largest
dilation exponent by a wide margin: for n ~ 2^1000 a double-precision
product n*x mod 1 carries no information, while here {2^e x} is literally a
bit window of X.  Windows are gathered with numpy from the big-endian byte
expansion, so whole sample batches reduce to fancy indexing.

Randomness is counter-based: sample r draws its bytes from a Philox stream
keyed by the experiment seed with block offset r * 2^64, so results do not
depend on evaluation order or chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

MIN_FRACTIONAL_BITS = 128
_WINDOW_GUARD_BITS = 128  # headroom past the largest exponent


def required_bits(max_exponent: int) -> int:
    """Fractional bit budget for exponents up to max_exponent, byte-aligned."""
    bits = max(MIN_FRACTIONAL_BITS, int(max_exponent) + _WINDOW_GUARD_BITS)
    return (bits + 7) & ~7


@dataclass(frozen=True)
class DyadicPoint:
    """x = X / 2^bits in (0, 1), stored exactly."""

    X: int
    bits: int

    def __post_init__(self):
        if not 0 < self.X < (1 << self.bits):
            raise ValueError("need 0 < X < 2^bits")

    @classmethod
    def from_float(cls, x: float, bits: int = MIN_FRACTIONAL_BITS) -> "DyadicPoint":
        if not 0.0 < x < 1.0:
            raise ValueError("x must be in (0, 1)")
        num, den = x.as_integer_ratio()  # den is a power of two
        k = den.bit_length() - 1
        if k > bits:
            bits = (k + 7) & ~7
        return cls(num << (bits - k), bits)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "DyadicPoint":
        x = int.from_bytes(raw, "big")
        return cls(x if x else 1, 8 * len(raw))

    @property
    def value(self) -> float:
        return self.X / (1 << self.bits)

    def frac_pow2(self, e: int) -> float:
        """{2^e x} correctly rounded to double precision."""
        if e >= self.bits:
            return 0.0
        rem = self.X & ((1 << (self.bits - e)) - 1)
        return rem / (1 << (self.bits - e))

    def frac_times(self, n: int) -> float:
        """{n x} via exact integer arithmetic before any rounding."""
        rem = (n * self.X) & ((1 << self.bits) - 1)
        return rem / (1 << self.bits)

    def to_byte_row(self) -> np.ndarray:
        return np.frombuffer(
            self.X.to_bytes(self.bits // 8, "big"), dtype=np.uint8)


def _philox_key(seed: int) -> np.ndarray:
    return np.array([seed & (2**64 - 1), (seed >> 64) & (2**64 - 1)],
                    dtype=np.uint64)


def sample_stream(seed: int, index: int) -> Generator:
    """The private stream of sample `index` under `seed`."""
    counter = np.array([0, index, 0, 0], dtype=np.uint64)
    return Generator(Philox(counter=counter, key=_philox_key(seed)))


def draw_byte_batch(seed: int, start: int, count: int, nbytes: int) -> np.ndarray:
    """(count, nbytes) uint8 matrix; row i comes from stream start + i."""
    out = np.empty((count, nbytes), dtype=np.uint8)
    for i in range(count):
        out[i] = np.frombuffer(sample_stream(seed, start + i).bytes(nbytes),
                               dtype=np.uint8)
    # X = 0 would leave x outside (0, 1); force the lowest bit instead
    zero = ~out.any(axis=1)
    if zero.any():
        out[zero, -1] = 1
    return out


def pow2_fracs(byte_rows: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """{2^e x} for every sample row and exponent: (rows, len(exponents)).

    Gathers the 72 bits starting at fractional offset e and rounds the
    leading 64 of them; the neglected tail is below 2^-64.
    """
    if byte_rows.ndim == 1:
        byte_rows = byte_rows[None, :]
    exponents = np.asarray(exponents, dtype=np.int64)
    nbytes = byte_rows.shape[1]
    if exponents.min() < 0:
        raise ValueError("exponents must be >= 0")
    if int(exponents.max()) + 72 > 8 * nbytes:
        raise ValueError("byte rows too short for the largest exponent")
    byte_off = (exponents >> 3).astype(np.int64)
    sh = (exponents & 7).astype(np.uint64)
    cols = byte_off[:, None] + np.arange(9, dtype=np.int64)[None, :]
    w = byte_rows[:, cols]  # (rows, n_exp, 9)
    u = np.zeros(w.shape[:2], dtype=np.uint64)
    for i in range(8):
        u = (u << np.uint64(8)) | w[:, :, i].astype(np.uint64)
    v = w[:, :, 8].astype(np.uint64)
    win = np.where(sh == 0, u, (u << sh) | (v >> (np.uint64(8) - sh)))
    return win.astype(np.float64) * 2.0**-64


def general_fracs(point: DyadicPoint, terms) -> np.ndarray:
    """{n x} for arbitrary integer dilations, exact big-int route."""
    return np.array([point.frac_times(int(n)) for n in terms])


def uniform_batch(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """(count, n) i.i.d. uniforms, one private stream per row."""
    out = np.empty((count, n))
    for i in range(count):
        out[i] = sample_stream(seed, start + i).random(n)
    return out


def loglog(x: float) -> float:
    return math.log(math.log(x))
