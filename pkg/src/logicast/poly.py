"""Multilinear polynomials over GF(2) and the propositional formulas they encode.

A monomial is a bitmask over variable indices: bit i-1 set means the variable
x_i occurs. The empty mask is the constant 1. A polynomial is a set of
monomials combined by XOR, i.e. arithmetic lives in GF(2)[x1..xm] modulo the
relations x_i^2 = x_i, so squaring is the identity and every polynomial is a
function {0,1}^m -> GF(2). Assignments are packed into a point index whose
bit i-1 is the value of x_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import VariableOutOfRange


def monomial_from_vars(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 1:
            raise VariableOutOfRange(f"variable index must be >= 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def monomial_vars(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def monomial_degree(mask: int) -> int:
    return mask.bit_count()


class Poly:
    """Multilinear GF(2) polynomial as a frozenset of monomial masks."""

    __slots__ = ("masks",)

    def __init__(self, terms: Iterable[int] = ()):
        acc: set[int] = set()
        for t in terms:
            if t < 0:
                raise VariableOutOfRange(f"monomial mask must be >= 0, got {t}")
            if t in acc:
                acc.remove(t)
            else:
                acc.add(t)
        self.masks: frozenset[int] = frozenset(acc)

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls((0,))

    @classmethod
    def variable(cls, index: int) -> "Poly":
        return cls((monomial_from_vars((index,)),))

    @property
    def is_zero(self) -> bool:
        return not self.masks

    def max_var(self) -> int:
        return max((t.bit_length() for t in self.masks), default=0)

    def degree(self) -> int:
        return max((t.bit_count() for t in self.masks), default=0)

    def eval(self, point: int) -> int:
        """Value at the assignment packed into `point` (bit i-1 = x_i)."""
        acc = 0
        for t in self.masks:
            if t & point == t:
                acc ^= 1
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        out = Poly()
        out.masks = self.masks ^ other.masks
        return out

    def __mul__(self, other: "Poly") -> "Poly":
        acc: set[int] = set()
        for a in self.masks:
            for b in other.masks:
                t = a | b
                if t in acc:
                    acc.remove(t)
                else:
                    acc.add(t)
        out = Poly()
        out.masks = frozenset(acc)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.masks == other.masks

    def __hash__(self) -> int:
        return hash(self.masks)

    def __repr__(self) -> str:
        return f"Poly({sorted(self.masks)})"


# ----------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise VariableOutOfRange(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Xor:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


Formula = Union[Var, Not, And, Or, Xor, Implies]


def formula_to_poly(f: Formula) -> Poly:
    """Polynomial whose value equals the truth value of `f` at every assignment."""
    if isinstance(f, Var):
        return Poly.variable(f.index)
    if isinstance(f, Not):
        return formula_to_poly(f.arg) + Poly.one()
    a = formula_to_poly(f.lhs)
    b = formula_to_poly(f.rhs)
    if isinstance(f, And):
        return a * b
    if isinstance(f, Or):
        return a + b + a * b
    if isinstance(f, Xor):
        return a + b
    if isinstance(f, Implies):
        return a * b + a + Poly.one()
    raise TypeError(f"not a formula: {f!r}")


def statement_poly(f: Formula, asserted: bool) -> Poly:
    """Member polynomial of a statement: vanishes exactly where the claim holds.

    `asserted` True is the claim "f holds", so the member is truth(f) + 1;
    False is the claim "f fails", so the member is truth(f) itself.
    """
    q = formula_to_poly(f)
    return q + Poly.one() if asserted else q


def formula_vars(f: Formula) -> int:
    if isinstance(f, Var):
        return f.index
    if isinstance(f, Not):
        return formula_vars(f.arg)
    return max(formula_vars(f.lhs), formula_vars(f.rhs))


# ------------------------------------------------------------------ PolySet

@dataclass(frozen=True)
class PolySet:
    """A knowledge state: finitely many polynomials over x1..xm, read as
    simultaneous equations `p = 0`."""

    m: int
    polys: frozenset[Poly]

    def __post_init__(self):
        if self.m < 0:
            raise VariableOutOfRange(f"variable count must be >= 0, got {self.m}")
        for q in self.polys:
            if q.max_var() > self.m:
                raise VariableOutOfRange(
                    f"polynomial uses x{q.max_var()} but the set declares m={self.m}"
                )

    @classmethod
    def of(cls, m: int, polys: Iterable[Poly]) -> "PolySet":
        return cls(m, frozenset(polys))

    def normalize(self) -> "PolySet":
        """Drop zero polynomials; they constrain nothing."""
        return PolySet(self.m, frozenset(q for q in self.polys if not q.is_zero))

    def union(self, other: "PolySet") -> "PolySet":
        if other.m != self.m:
            raise VariableOutOfRange(
                f"cannot combine sets over m={self.m} and m={other.m}"
            )
        return PolySet(self.m, self.polys | other.polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)
