"""Bit-level coding primitives: Elias-delta integers and enumerative subset codes.

Every multi-bit field is written most-significant-bit first, and bytes are
filled from bit 7 downward; the final byte is zero-padded. Subset ranks use
the colexicographic order on k-subsets of {0, ..., n-1}, 0-based.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import (
    DomainError,
    MalformedCodeword,
    RankOutOfRange,
    TruncatedStream,
    WidthOverflow,
)

# A codeword whose length prefix claims more than 2^57 payload bits is not a
# plausible message; treat it as corruption instead of allocating for it.
_MAX_ELIAS_WIDTH_BITS = 57


class BitWriter:
    """Append-only bit buffer, packed MSB-first."""

    def __init__(self) -> None:
        self._bytes = bytearray()
        self._nbits = 0

    @property
    def bit_length(self) -> int:
        return self._nbits

    def write_bit(self, bit: int) -> None:
        if bit not in (0, 1):
            raise DomainError(f"bit must be 0 or 1, got {bit!r}")
        pos = self._nbits & 7
        if pos == 0:
            self._bytes.append(0)
        if bit:
            self._bytes[-1] |= 0x80 >> pos
        self._nbits += 1

    def write_bits(self, value: int, width: int) -> None:
        """Write `value` in exactly `width` bits, big-endian."""
        if width < 0:
            raise DomainError(f"width must be >= 0, got {width}")
        if value < 0 or value >> width:
            raise WidthOverflow(f"value {value} does not fit in {width} bits")
        for shift in range(width - 1, -1, -1):
            self.write_bit((value >> shift) & 1)

    def write_elias_delta(self, n: int) -> None:
        for bit in elias_delta_encode(n):
            self.write_bit(bit)

    def extend(self, other: "BitWriter") -> None:
        for i in range(other._nbits):
            self.write_bit((other._bytes[i >> 3] >> (7 - (i & 7))) & 1)

    def to_bytes(self) -> bytes:
        return bytes(self._bytes)


class BitReader:
    """Sequential reader over bytes produced by :class:`BitWriter`."""

    def __init__(self, data: bytes, bit_offset: int = 0) -> None:
        self._data = data
        self._pos = bit_offset
        self._end = 8 * len(data)
        if bit_offset < 0 or bit_offset > self._end:
            raise DomainError(f"bit_offset {bit_offset} outside stream")

    @property
    def bits_read(self) -> int:
        return self._pos

    def read_bit(self) -> int:
        if self._pos >= self._end:
            raise TruncatedStream("bit stream exhausted")
        byte = self._data[self._pos >> 3]
        bit = (byte >> (7 - (self._pos & 7))) & 1
        self._pos += 1
        return bit

    def read_bits(self, width: int) -> int:
        if width < 0:
            raise DomainError(f"width must be >= 0, got {width}")
        value = 0
        for _ in range(width):
            value = (value << 1) | self.read_bit()
        return value

    def read_elias_delta(self) -> int:
        zeros = 0
        while True:
            if self.read_bit():
                break
            zeros += 1
            if zeros > _MAX_ELIAS_WIDTH_BITS:
                raise MalformedCodeword("Elias-delta length prefix out of range")
        # `zeros + 1` bits encode L = 1 + floor(log2 n); leading 1 already read.
        length = (1 << zeros) | self.read_bits(zeros)
        return (1 << (length - 1)) | self.read_bits(length - 1)


def elias_delta_encode(n: int) -> list[int]:
    """Elias-delta codeword of a positive integer, as a list of bits."""
    if n <= 0:
        raise DomainError(f"Elias-delta encodes positive integers, got {n}")
    nbits = n.bit_length()
    lbits = nbits.bit_length()
    bits = [0] * (lbits - 1)
    bits.extend((nbits >> s) & 1 for s in range(lbits - 1, -1, -1))
    bits.extend((n >> s) & 1 for s in range(nbits - 2, -1, -1))
    return bits


def elias_delta_decode(bits: Sequence[int]) -> tuple[int, int]:
    """Decode one codeword from a bit sequence; returns (value, bits consumed)."""
    packed = BitWriter()
    for b in bits:
        packed.write_bit(b)
    reader = BitReader(packed.to_bytes())
    try:
        value = reader.read_elias_delta()
    except TruncatedStream:
        raise TruncatedStream("incomplete Elias-delta codeword") from None
    used = reader.bits_read
    if used > len(bits):
        raise TruncatedStream("incomplete Elias-delta codeword")
    return value, used


def elias_delta_length(n: int) -> int:
    """Codeword length in bits: floor(log2 n) + 2*floor(log2(1 + floor(log2 n))) + 1."""
    if n <= 0:
        raise DomainError(f"Elias-delta encodes positive integers, got {n}")
    lg = n.bit_length() - 1
    return lg + 2 * ((1 + lg).bit_length() - 1) + 1


def binom(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError(f"binomial arguments must be nonnegative, got ({n}, {k})")
    if k > n:
        return 0
    return math.comb(n, k)


def rank_width(n: int, k: int) -> int:
    """Bits needed for a 0-based rank among binom(n, k) subsets; 0 when only one."""
    return (binom(n, k) - 1).bit_length()


def subset_rank(n: int, subset: Iterable[int]) -> int:
    """Colex rank of a subset of {0..n-1}: sum of binom(v_i, i+1) over sorted members.

    Binomials are maintained incrementally along a single walk over positions,
    so the cost stays linear in max(subset) with small-factor bignum updates.
    """
    members = sorted(subset)
    if members:
        if members[0] < 0 or members[-1] >= n:
            raise DomainError(f"subset members must lie in 0..{n - 1}")
        for a, b in zip(members, members[1:]):
            if a == b:
                raise DomainError(f"duplicate subset member {a}")
    rank = 0
    take = 0  # index into members
    j = 1  # next term uses binom(v, j)
    coeff = 0  # binom(v, j) for the current v
    for v in range(members[-1] + 1 if members else 0):
        if take < len(members) and members[take] == v:
            rank += coeff
            take += 1
            # move j -> j + 1 at fixed v: binom(v, j+1) = binom(v, j) * (v-j) / (j+1)
            coeff = coeff * (v - j) // (j + 1) if v > j else 0
            j += 1
        # advance v -> v + 1 at fixed j
        nxt = v + 1
        if nxt < j:
            coeff = 0
        elif nxt == j:
            coeff = 1
        else:
            coeff = coeff * nxt // (nxt - j)
    return rank


def subset_unrank(n: int, k: int, rank: int) -> tuple[int, ...]:
    """Inverse of :func:`subset_rank` for k-subsets of {0..n-1}."""
    if k < 0 or k > n:
        raise DomainError(f"k must lie in 0..{n}, got {k}")
    total = binom(n, k)
    if rank < 0 or rank >= total:
        raise RankOutOfRange(f"rank {rank} outside 0..{total - 1}")
    out: list[int] = []
    v = n - 1
    coeff = binom(n - 1, k) if k > 0 else 1  # binom(v, t) for current t
    for t in range(k, 0, -1):
        # find the largest v with binom(v, t) <= rank
        while coeff > rank:
            # binom(v-1, t) = binom(v, t) * (v - t) / v
            coeff = coeff * (v - t) // v
            v -= 1
        out.append(v)
        rank -= coeff
        # move t -> t - 1 at fixed v: binom(v, t-1) = binom(v, t) * t / (v - t + 1)
        if t > 1:
            coeff = 1 if v == t - 1 else coeff * t // (v - t + 1)
    return tuple(reversed(out))
