"""Structure expressions with computable orders: Z_n, GL(2,m), products, ...

The registry maps each of the 36 catalog types to the published closed-form
structure of its automorphism group; only the order (product of atom orders)
is used for verdicts, the rendered expression is for reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class UnknownTypeError(ValueError):
    """Type id outside 1..36."""


class StructureExpr:
    def order(self) -> int:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def _atom(self) -> bool:
        return True

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Cyclic(StructureExpr):
    n: int

    def order(self) -> int:
        return self.n

    def render(self) -> str:
        return f"Z{self.n}"


@dataclass(frozen=True)
class GL2(StructureExpr):
    m: int

    def order(self) -> int:
        return (self.m**2 - 1) * (self.m**2 - self.m)

    def render(self) -> str:
        return f"GL(2,{self.m})"


@dataclass(frozen=True)
class Sym(StructureExpr):
    n: int

    def order(self) -> int:
        return math.factorial(self.n)

    def render(self) -> str:
        return f"S{self.n}"


@dataclass(frozen=True)
class Dihedral(StructureExpr):
    """Dihedral group of the given (even) order."""

    group_order: int

    def order(self) -> int:
        return self.group_order

    def render(self) -> str:
        return f"D{self.group_order}"


@dataclass(frozen=True)
class Quaternion8(StructureExpr):
    def order(self) -> int:
        return 8

    def render(self) -> str:
        return "Q8"


@dataclass(frozen=True)
class Units(StructureExpr):
    """Multiplicative group of integers mod n."""

    n: int

    def order(self) -> int:
        out = 1
        left = self.n
        d = 2
        while d * d <= left:
            if left % d == 0:
                e = 0
                while left % d == 0:
                    left //= d
                    e += 1
                out *= d ** (e - 1) * (d - 1)
            d += 1
        if left > 1:
            out *= left - 1
        return out

    def render(self) -> str:
        return f"U{self.n}"


class _Node(StructureExpr):
    symbol = "?"

    def __init__(self, *parts: StructureExpr):
        if len(parts) < 2:
            raise ValueError("products need at least two factors")
        self.parts = tuple(parts)

    def order(self) -> int:
        out = 1
        for p in self.parts:
            out *= p.order()
        return out

    def _atom(self) -> bool:
        return False

    def render(self) -> str:
        bits = []
        for p in self.parts:
            s = p.render()
            bits.append(s if p._atom() else f"({s})")
        return f" {self.symbol} ".join(bits)

    def __eq__(self, other):
        return type(self) is type(other) and self.parts == other.parts

    def __hash__(self):
        return hash((type(self).__name__, self.parts))


class Direct(_Node):
    symbol = "x"


class Semi(_Node):
    """Semidirect product; order-only semantics (the action is unspecified)."""

    symbol = ":"

    def __init__(self, left: StructureExpr, right: StructureExpr):
        super().__init__(left, right)


def _Z(n: int) -> Cyclic:
    return Cyclic(n)


# Aut(G) structures for the fourteen order-36 types.
_ORDER36_AUT = {
    1: Direct(_Z(6), _Z(2)),
    2: Direct(_Z(6), Sym(3)),
    3: Direct(Sym(3), GL2(3)),
    4: Direct(_Z(2), GL2(3)),
    5: Direct(_Z(2), _Z(2), Sym(3)),
    6: Semi(Direct(Sym(3), Sym(3)), _Z(2)),
    7: Direct(_Z(2), Semi(_Z(9), _Z(6))),
    8: Direct(Sym(4), Sym(3)),
    9: Direct(_Z(2), Semi(_Z(9), _Z(6))),
    10: Direct(_Z(2), _Z(3), Sym(3)),
    11: Direct(_Z(2), Semi(Semi(Semi(Direct(_Z(3), _Z(3)), Quaternion8()), _Z(3)), _Z(2))),
    12: Semi(Direct(_Z(3), _Z(3)), Semi(_Z(8), _Z(2))),
    13: Direct(_Z(3), Sym(4)),
    14: Semi(Direct(_Z(3), _Z(3)), Direct(GL2(3), _Z(2))),
}


def predicted_structure(type_id: int, p: int, q: int) -> StructureExpr:
    """Published Aut(G) structure for the given type at primes (p, q)."""
    if type_id in _ORDER36_AUT:
        return _ORDER36_AUT[type_id]
    zp2 = Direct(_Z(p), _Z(p))
    if type_id == 15:
        return Direct(_Z(p * (p - 1)), _Z(q * (q - 1)))
    if type_id == 16:
        return Direct(GL2(q), _Z(p * (p - 1)))
    if type_id == 17:
        return Direct(_Z(q * (q - 1)), GL2(p))
    if type_id == 18:
        return Direct(GL2(q), GL2(p))
    if type_id == 19:
        return Semi(_Z(p * p), Direct(_Z(p * (p - 1)), _Z(q)))
    if type_id == 20:
        return Semi(_Z(p * p), _Z(p * (p - 1)))
    if type_id == 21:
        return Semi(_Z(p * p), Direct(_Z(p * (p - 1)), Semi(_Z(q), _Z(q - 1))))
    if type_id == 22:
        return Semi(zp2, Direct(GL2(p), _Z(q)))
    if type_id == 23:
        return Semi(_Z(p), Direct(_Z(p - 1), _Z(p - 1), _Z(2)))
    if type_id == 24:
        return Semi(_Z(p), Direct(_Z(p - 1), _Z(p - 1), _Z(q)))
    if type_id == 25:
        return Semi(zp2, Semi(Direct(_Z(p - 1), _Z(p - 1), _Z(q)), _Z(2)))
    if type_id == 26:
        return Semi(zp2, Semi(Direct(_Z(p - 1), _Z(p - 1)), _Z(2)))
    if type_id == 27:
        return Semi(zp2, Semi(Direct(_Z(p - 1), _Z(p - 1)), _Z(q)))
    if type_id == 28:
        return Semi(zp2, Direct(_Z(p - 1), _Z(p - 1)))
    if type_id == 29:
        return Semi(zp2, GL2(p))
    if type_id == 30:
        return Semi(zp2, Semi(Direct(_Z(p * p - 1), _Z(q)), _Z(2)))
    if type_id in (31, 32):
        return Semi(zp2, Semi(_Z(p * p - 1), _Z(2)))
    if type_id == 33:
        return Semi(zp2, Direct(GL2(p), Semi(_Z(q), _Z(q - 1))))
    if type_id == 34:
        return Semi(_Z(p), Direct(_Z(p - 1), _Z(p - 1), _Z(2)))
    if type_id == 35:
        return Semi(zp2, Semi(Direct(_Z(p - 1), _Z(p - 1)), _Z(2)))
    if type_id == 36:
        return Semi(zp2, Direct(Direct(_Z(2), _Z(p * p - 1)), Semi(_Z(q - 1), _Z(q))))
    raise UnknownTypeError(f"no type {type_id}")
