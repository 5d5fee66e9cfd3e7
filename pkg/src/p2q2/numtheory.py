"""Modular arithmetic substrate: primality, unit orders, quadratic residues."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


class NoSuchElementError(ValueError):
    """No unit of the requested multiplicative order exists modulo m."""


# Witness set making Miller-Rabin deterministic for all n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Primality test, deterministic for n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization; inputs here are desk-scale."""
    if n < 2:
        raise ValueError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class Modulus:
    """A modulus that carries its own factorization."""

    value: int
    factorization: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 2:
            raise ValueError("modulus must be >= 2")
        prod = 1
        for p, e in self.factorization:
            if not is_prime(p) or e < 1:
                raise ValueError(f"bad factor {p}^{e}")
            prod *= p**e
        if prod != self.value:
            raise ValueError("factorization does not multiply out to the value")

    @classmethod
    def of(cls, n: int) -> "Modulus":
        return cls(n, _factorize(n))

    @classmethod
    def prime(cls, p: int) -> "Modulus":
        return cls(p, ((p, 1),))

    @classmethod
    def prime_power(cls, p: int, k: int) -> "Modulus":
        return cls(p**k, ((p, k),))

    def phi(self) -> int:
        """Euler totient, from the stored factorization."""
        out = 1
        for p, e in self.factorization:
            out *= p ** (e - 1) * (p - 1)
        return out

    def __int__(self) -> int:
        return self.value


def _as_modulus(m: int | Modulus) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus.of(m)


@dataclass(frozen=True)
class UnitElement:
    """A residue coprime to its modulus."""

    residue: int
    modulus: Modulus

    def __post_init__(self):
        if not 1 <= self.residue < self.modulus.value:
            raise ValueError("residue out of range")
        if math.gcd(self.residue, self.modulus.value) != 1:
            raise ValueError("residue is not a unit")

    def __int__(self) -> int:
        return self.residue


def pow_mod(base: int, exp: int, m: int | Modulus) -> int:
    """base**exp mod m (square-and-multiply via the builtin)."""
    mv = int(m)
    if mv < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base % mv, exp, mv)


def multiplicative_order(u: int | UnitElement, m: int | Modulus | None = None) -> int:
    """Least d >= 1 with u**d == 1 mod m."""
    if isinstance(u, UnitElement):
        m = u.modulus
        u = u.residue
    if m is None:
        raise TypeError("modulus required for a bare residue")
    mod = _as_modulus(m)
    mv = mod.value
    u %= mv
    if math.gcd(u, mv) != 1:
        raise ValueError(f"{u} is not a unit mod {mv}")
    d = mod.phi()
    for p, _ in _factorize(d):
        while d % p == 0 and pow(u, d // p, mv) == 1:
            d //= p
    return d


def element_of_order(d: int, m: int | Modulus) -> UnitElement:
    """Smallest residue r > 1 of multiplicative order exactly d mod m.

    For d == 1 the answer is 1. Intended for moduli with cyclic unit
    groups (p and p**2 here); raises NoSuchElementError when d does
    not divide phi(m) or no such unit turns up.
    """
    if d < 1:
        raise ValueError("order must be positive")
    mod = _as_modulus(m)
    if mod.phi() % d != 0:
        raise NoSuchElementError(f"{d} does not divide phi({mod.value})")
    if d == 1:
        return UnitElement(1, mod)
    mv = mod.value
    prime_divs = [p for p, _ in _factorize(d)]
    for r in range(2, mv):
        if math.gcd(r, mv) != 1:
            continue
        if pow(r, d, mv) != 1:
            continue
        if all(pow(r, d // p, mv) != 1 for p in prime_divs):
            return UnitElement(r, mod)
    raise NoSuchElementError(f"no unit of order {d} mod {mv}")


def smallest_nonresidue(p: int) -> int:
    """Smallest D >= 2 that is not a square mod the odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    for d in range(2, p):
        if pow(d, (p - 1) // 2, p) == p - 1:
            return d
    raise AssertionError("every odd prime has a quadratic non-residue")
