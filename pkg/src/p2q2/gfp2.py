"""GF(p^2) arithmetic in the form a + b*sqrt(D), D a quadratic non-residue mod p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .numtheory import _factorize, is_prime, smallest_nonresidue


class ParamMismatchError(ValueError):
    """Operands live over different (p, D) parameters."""


class ZeroElementError(ValueError):
    """The zero element has no multiplicative order."""


class NotDivisorError(ValueError):
    """Requested index does not divide p**2 - 1."""


@dataclass(frozen=True)
class GfParams:
    p: int
    d: int

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if not 1 <= self.d < self.p:
            raise ValueError("D must be a nonzero residue mod p")
        if pow(self.d, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"D={self.d} is a square mod {self.p}")

    @classmethod
    def canonical(cls, p: int) -> "GfParams":
        return cls(p, smallest_nonresidue(p))


@dataclass(frozen=True)
class GfElement:
    a: int
    b: int
    params: GfParams

    def __post_init__(self):
        p = self.params.p
        if not (0 <= self.a < p and 0 <= self.b < p):
            raise ValueError("components must be reduced mod p")

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"{self.a}+{self.b}*sqrt({self.params.d})"


def gf_element(params: GfParams, a: int, b: int) -> GfElement:
    return GfElement(a % params.p, b % params.p, params)


def gf_one(params: GfParams) -> GfElement:
    return GfElement(1, 0, params)


def gf_add(x: GfElement, y: GfElement) -> GfElement:
    if x.params != y.params:
        raise ParamMismatchError("mismatched field parameters")
    p = x.params.p
    return GfElement((x.a + y.a) % p, (x.b + y.b) % p, x.params)


def gf_mul(x: GfElement, y: GfElement) -> GfElement:
    """(a1 + b1*sqrt(D))(a2 + b2*sqrt(D)) with sqrt(D)^2 = D."""
    if x.params != y.params:
        raise ParamMismatchError("mismatched field parameters")
    p, d = x.params.p, x.params.d
    a = (x.a * y.a + d * x.b * y.b) % p
    b = (x.a * y.b + x.b * y.a) % p
    return GfElement(a, b, x.params)


def gf_pow(x: GfElement, e: int) -> GfElement:
    """x**e by square-and-multiply; x**0 == 1."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    acc = gf_one(x.params)
    base = x
    while e:
        if e & 1:
            acc = gf_mul(acc, base)
        base = gf_mul(base, base)
        e >>= 1
    return acc


def gf_order(x: GfElement) -> int:
    """Least d >= 1 with x**d == 1; divides p**2 - 1."""
    if x.is_zero():
        raise ZeroElementError("zero has no multiplicative order")
    n = x.params.p**2 - 1
    one = gf_one(x.params)
    d = n
    for q, _ in _factorize(n):
        while d % q == 0 and gf_pow(x, d // q) == one:
            d //= q
    return d


@lru_cache(maxsize=None)
def primitive_root(params: GfParams) -> GfElement:
    """First element of order p**2 - 1 in the (a, b) lexicographic scan."""
    target = params.p**2 - 1
    for a in range(params.p):
        for b in range(params.p):
            x = GfElement(a, b, params)
            if x.is_zero():
                continue
            if gf_order(x) == target:
                return x
    raise AssertionError("GF(p^2)* is cyclic; a generator always exists")


def subgroup_parameter(params: GfParams, k: int) -> GfElement:
    """sigma**((p**2 - 1)/k) for the canonical primitive root sigma."""
    n = params.p**2 - 1
    if k < 1 or n % k != 0:
        raise NotDivisorError(f"{k} does not divide {n}")
    return gf_pow(primitive_root(params), n // k)
