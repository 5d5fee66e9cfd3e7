import math

import pytest
from hypothesis import given, strategies as st

from p2q2 import numtheory as nt


def trial_division_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def test_is_prime_small_values():
    assert nt.is_prime(2)
    assert not nt.is_prime(1)
    assert not nt.is_prime(91)  # 7 * 13
    assert 91 == 7 * 13


def test_is_prime_matches_trial_division_exhaustively():
    for n in range(10_000):
        assert nt.is_prime(n) == trial_division_prime(n), n


def test_is_prime_large_values():
    assert nt.is_prime(2**61 - 1)  # Mersenne prime
    n = 10670053 * 32010157  # strong-pseudoprime trap, composite by construction
    assert not nt.is_prime(n)


def test_pow_mod_examples():
    assert nt.pow_mod(2, 10, 1000) == 24
    assert nt.pow_mod(12345, 0, 97) == 1
    assert 18**3 == 119 * 49 + 1
    assert nt.pow_mod(18, 3, 49) == 1


def test_pow_mod_matches_naive_multiplication():
    for m in range(2, 51):
        for base in range(m):
            acc = 1
            for exp in range(21):
                assert nt.pow_mod(base, exp, m) == acc
                acc = acc * base % m


@given(st.integers(0, 10**9), st.integers(0, 50), st.integers(0, 50), st.integers(2, 10**6))
def test_pow_mod_adds_exponents(base, e1, e2, m):
    lhs = nt.pow_mod(base, e1 + e2, m)
    rhs = nt.pow_mod(base, e1, m) * nt.pow_mod(base, e2, m) % m
    assert lhs == rhs


def test_modulus_phi_and_validation():
    assert nt.Modulus.prime_power(5, 2).phi() == 20
    assert nt.Modulus.of(36).phi() == 12
    with pytest.raises(ValueError):
        nt.Modulus(10, ((2, 1),))
    with pytest.raises(ValueError):
        nt.Modulus(9, ((9, 1),))


def test_element_of_order_examples():
    assert nt.element_of_order(2, 25).residue == 24
    # oracle: scan residues mod 49 for the first of exact order 3
    first = next(
        r
        for r in range(2, 49)
        if pow(r, 3, 49) == 1 and pow(r, 1, 49) != 1
    )
    assert first == 18
    assert nt.element_of_order(3, nt.Modulus.prime_power(7, 2)).residue == 18
    with pytest.raises(nt.NoSuchElementError):
        nt.element_of_order(5, 7)


def test_element_of_order_unit_order_round_trip():
    for m in (5, 7, 11, 13, 25, 49, 121, 9, 27):
        mod = nt.Modulus.of(m)
        phi = mod.phi()
        for d in range(1, phi + 1):
            if phi % d:
                continue
            u = nt.element_of_order(d, mod)
            assert nt.multiplicative_order(u) == d
            # determinism
            assert nt.element_of_order(d, mod).residue == u.residue


def test_multiplicative_order_examples():
    assert nt.multiplicative_order(24, 25) == 2
    assert nt.multiplicative_order(18, 49) == 3
    assert pow(18, 2, 49) == 30  # not 1, so the order is exactly 3
    assert nt.multiplicative_order(1, 25) == 1
    with pytest.raises(ValueError):
        nt.multiplicative_order(5, 25)


@given(st.sampled_from([3, 5, 7, 11, 13, 9, 25, 49]))
def test_order_divides_phi(m):
    mod = nt.Modulus.of(m)
    for u in range(1, m):
        if math.gcd(u, m) == 1:
            assert mod.phi() % nt.multiplicative_order(u, mod) == 0


def test_smallest_nonresidue_frozen_values():
    # oracles: the square sets mod 3, 5, 7
    assert {x * x % 3 for x in range(3)} == {0, 1}
    assert {x * x % 5 for x in range(5)} == {0, 1, 4}
    assert {x * x % 7 for x in range(7)} == {0, 1, 2, 4}
    assert nt.smallest_nonresidue(3) == 2
    assert nt.smallest_nonresidue(5) == 2
    assert nt.smallest_nonresidue(7) == 3


def test_smallest_nonresidue_euler_criterion():
    for p in range(3, 200):
        if not nt.is_prime(p):
            continue
        d = nt.smallest_nonresidue(p)
        assert pow(d, (p - 1) // 2, p) == p - 1
        squares = {x * x % p for x in range(1, p)}
        assert d not in squares
        assert all(x in squares for x in range(2, d))
