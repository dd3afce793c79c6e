"""Algebraic sets: the common zeros of a PolySet, and the converse map.

Points are assignment indices (bit i-1 of the index is the value of x_i).
Membership for all 2^m points is held in one Python integer, and the
polynomial <-> truth-table conversions run through the subset-XOR (Moebius)
transform, which is an involution over GF(2) and costs O(m * 2^m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError, UniverseTooLarge
from .poly import Poly, PolySet

M_MAX = 24


def _check_m(m: int) -> None:
    if m < 0:
        raise DomainError(f"variable count must be >= 0, got {m}")
    if m > M_MAX:
        raise UniverseTooLarge(f"2^{m} assignments exceed the supported 2^{M_MAX}")


@dataclass(frozen=True)
class AlgSet:
    """A subset of the 2^m assignments, packed into the bits of one integer."""

    m: int
    bits: int

    def __post_init__(self):
        _check_m(self.m)
        if self.bits < 0 or self.bits >> (1 << self.m):
            raise DomainError("membership bits outside the assignment space")

    @classmethod
    def empty(cls, m: int) -> "AlgSet":
        return cls(m, 0)

    @classmethod
    def full(cls, m: int) -> "AlgSet":
        return cls(m, (1 << (1 << m)) - 1)

    @classmethod
    def from_points(cls, m: int, points: Iterable[int]) -> "AlgSet":
        _check_m(m)
        bits = 0
        for pt in points:
            if pt < 0 or pt >> m:
                raise DomainError(f"point {pt} outside the {m}-variable space")
            bits |= 1 << pt
        return cls(m, bits)

    @classmethod
    def from_bool_array(cls, m: int, arr: np.ndarray) -> "AlgSet":
        packed = np.packbits(arr.astype(bool), bitorder="little")
        return cls(m, int.from_bytes(packed.tobytes(), "little"))

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, point: int) -> bool:
        return 0 <= point < (1 << self.m) and (self.bits >> point) & 1 == 1

    def points(self) -> Iterator[int]:
        """Member points in ascending order."""
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def points_list(self) -> list[int]:
        return list(self.points())

    def to_bool_array(self) -> np.ndarray:
        n = 1 << self.m
        raw = self.bits.to_bytes((n + 7) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=n, bitorder="little").astype(bool)

    def complement(self) -> "AlgSet":
        return AlgSet(self.m, self.bits ^ ((1 << (1 << self.m)) - 1))

    def issubset(self, other: "AlgSet") -> bool:
        self._check_peer(other)
        return self.bits & ~other.bits == 0

    def __and__(self, other: "AlgSet") -> "AlgSet":
        self._check_peer(other)
        return AlgSet(self.m, self.bits & other.bits)

    def __or__(self, other: "AlgSet") -> "AlgSet":
        self._check_peer(other)
        return AlgSet(self.m, self.bits | other.bits)

    def _check_peer(self, other: "AlgSet") -> None:
        if self.m != other.m:
            raise DomainError(f"mixed assignment spaces: m={self.m} vs m={other.m}")


def _xor_subset_transform(values: np.ndarray, m: int) -> np.ndarray:
    """In-place GF(2) zeta/Moebius transform over the subset lattice."""
    for i in range(m):
        values = values.reshape(-1, 2, 1 << i)
        values[:, 1, :] ^= values[:, 0, :]
    return values.reshape(-1)


def _poly_value_table(q: Poly, m: int) -> np.ndarray:
    coeffs = np.zeros(1 << m, dtype=np.uint8)
    if q.masks:
        coeffs[np.fromiter(q.masks, dtype=np.int64, count=len(q.masks))] = 1
    return _xor_subset_transform(coeffs, m)


def zeros(ps: PolySet) -> AlgSet:
    """The points where every polynomial of the set vanishes."""
    _check_m(ps.m)
    if ps.m > M_MAX:
        raise UniverseTooLarge(f"2^{ps.m} assignments exceed the supported 2^{M_MAX}")
    violated = np.zeros(1 << ps.m, dtype=np.uint8)
    for q in ps.polys:
        violated |= _poly_value_table(q, ps.m)
    return AlgSet.from_bool_array(ps.m, violated == 0)


def entails(s: PolySet, t: PolySet) -> bool:
    """True iff every model of s is a model of t (zero-set inclusion)."""
    if s.m != t.m:
        raise DomainError(f"mixed assignment spaces: m={s.m} vs m={t.m}")
    return zeros(s).issubset(zeros(t))


def reconstruct(a: AlgSet) -> PolySet:
    """The canonical single-polynomial set whose zeros are exactly `a`.

    The polynomial is the multilinear indicator of the complement of `a`
    (equivalently 1 plus the sum of the point indicators of `a`), so it also
    generates the largest ideal vanishing on `a`.
    """
    table = np.ones(1 << a.m, dtype=np.uint8)
    members = np.fromiter(a.points(), dtype=np.int64, count=a.size)
    if members.size:
        table[members] = 0
    coeffs = _xor_subset_transform(table, a.m)
    q = Poly()
    q.masks = frozenset(int(t) for t in np.nonzero(coeffs)[0])
    return PolySet(a.m, frozenset({q}))
