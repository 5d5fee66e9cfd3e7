import numpy as np
import pytest

from p2q2 import catalog
from p2q2.catalog import (
    ParameterError,
    UnknownTypeError,
    admissible,
    build,
    derive_params,
    enumerate_admissible,
    format_spec,
    make_spec,
    parse_spec,
)


def test_admissible_examples():
    assert admissible(19, 5, 2) == (True, "")
    ok, reason = admissible(24, 5, 2)
    assert not ok and "q != 2" in reason
    assert admissible(30, 5, 3) == (True, "")
    assert admissible(31, 3, 2)[0]
    assert not admissible(31, 5, 2)[0]  # 5 = 1 mod 4
    assert not admissible(27, 7, 3)[0]  # empty exponent range at q = 3
    assert not admissible(36, 5, 2)[0]  # q must be odd
    assert admissible(36, 5, 3)[0]
    assert not admissible(36, 7, 3)[0]  # 3 does not divide 8
    assert not admissible(30, 2, 3)[0]  # no quadratic non-residue mod 2
    assert admissible(1, 2, 3)[0] and admissible(14, 3, 2)[0]
    assert not admissible(1, 5, 2)[0]
    with pytest.raises(UnknownTypeError):
        admissible(37, 5, 2)
    with pytest.raises(ValueError):
        admissible(19, 4, 2)
    with pytest.raises(ValueError):
        admissible(19, 5, 5)


def test_derive_params_examples():
    assert derive_params(19, 5, 2).r == 24
    assert derive_params(22, 7, 3).r == 2  # 2^3 = 8 = 1 mod 7
    # oracle: first unit of order 4 mod 25 is 7 (7^2 = 49 = -1)
    assert next(r for r in range(2, 25) if pow(r, 2, 25) not in (1,) and pow(r, 4, 25) == 1) == 7
    assert derive_params(20, 5, 2).r == 7
    par31 = derive_params(31, 3, 2)
    assert par31.gf == (2, (1, 1), 0, 2)  # D=2, sigma=1+s, m=0, n=2; n^2 D = 8 = -1 mod 3
    assert derive_params(27, 11, 5).n_exp == 2
    with pytest.raises(ParameterError):
        derive_params(27, 11, 5, n=3)  # range for q=5 is {2}
    with pytest.raises(ParameterError):
        derive_params(19, 5, 3)


def test_build_abelian_types():
    G = build(parse_spec("t15:p=5,q=3"))
    assert G.order == 225 and G.is_abelian()
    assert G.abelian_invariants() == (9, 25)
    # oracle: a cyclic group has phi(d) elements of each order d | n
    from p2q2.numtheory import Modulus

    expected = {d: (1 if d == 1 else Modulus.of(d).phi()) for d in range(1, 226) if 225 % d == 0}
    assert G.order_histogram() == expected


def test_build_semidirect_types():
    G19 = build(parse_spec("t19:p=5,q=2"))
    assert G19.order == 100 and not G19.is_abelian()
    assert G19.center().order == 2
    G36 = build(parse_spec("t36:p=5,q=3"))
    der = G36.derived_subgroup()
    assert der.order == 25
    # the derived subgroup is exactly the Sylow-5 part: trailing generators
    for x in der.members:
        assert G36.exponents(x)[:2] == (0, 0)


def test_build_order36_types():
    for t in range(1, 15):
        G = build(make_spec(t, 3, 2))
        assert G.order == 36
    G34 = build(parse_spec("t34:p=3,q=2"))
    assert [m for _, m in G34.presentation.generators] == [2, 2, 3, 3]
    # types 12 and 14 are non-isomorphic: their order statistics differ
    h12 = build(make_spec(12, 3, 2)).order_histogram()
    h14 = build(make_spec(14, 3, 2)).order_histogram()
    assert h12 != h14


def test_action_matrices_have_stated_order():
    # type 30 at (5,3): the 2x2 action matrix over GF(5) has order q = 3
    spec = parse_spec("t30:p=5,q=3")
    d, _, m, n = spec.params.gf
    p = 5
    M = np.array([[m, n], [n * d % p, m]])
    Mk = np.eye(2, dtype=int)
    orders = []
    for k in range(1, 10):
        Mk = Mk @ M % p
        if np.array_equal(Mk, np.eye(2, dtype=int)):
            orders.append(k)
            break
    assert orders == [3]
    # type 21: a acts with order q, b trivially
    spec21 = parse_spec("t21:p=5,q=2")
    r = spec21.params.r
    assert pow(r, 2, 25) == 1 and r != 1


def test_action_is_a_homomorphism_for_two_generator_acting_factor():
    # conjugation matrices of a and b commute and have order dividing q
    for s in ("t33:p=7,q=3", "t35:p=7,q=3", "t36:p=5,q=3"):
        spec = parse_spec(s)
        G = build(spec)
        p, q = spec.p, spec.q
        a, b = G.gen_indices[0], G.gen_indices[1]
        c, d = G.gen_indices[2], G.gen_indices[3]

        def action(k):
            cols = []
            for h in (c, d):
                img = G.conjugate(h, k)
                e = G.exponents(img)
                cols.append([e[2], e[3]])
            return np.array(cols).T

        Ma, Mb = action(a), action(b)
        assert np.array_equal(Ma @ Mb % p, Mb @ Ma % p)
        assert np.array_equal(np.linalg.matrix_power(Ma, q).astype(int) % p, np.eye(2, dtype=int))
        assert np.array_equal(np.linalg.matrix_power(Mb, q).astype(int) % p, np.eye(2, dtype=int))


def test_every_sweep_spec_builds_consistently():
    for spec in enumerate_admissible(7, 3):
        G = build(spec)
        assert G.order == spec.p**2 * spec.q**2
        for idx, (_, m) in zip(G.gen_indices, G.presentation.generators):
            assert G.element_order(idx) == m


def test_enumerate_admissible():
    specs = enumerate_admissible(3, 2)
    ids = [s.type_id for s in specs]
    assert ids.count(1) == 1 and all(ids.count(t) == 1 for t in range(1, 15))
    specs53 = enumerate_admissible(5, 3)
    assert any(s.type_id == 30 and (s.p, s.q) == (5, 3) for s in specs53)
    assert enumerate_admissible(2, 2) == []
    assert specs == sorted(specs, key=lambda s: (s.type_id, s.p, s.q))
    # type 28 first materializes at (19, 3), order 3249; a tighter cap drops it
    big = enumerate_admissible(19, 3)
    assert any(s.type_id == 28 and (s.p, s.q) == (19, 3) for s in big)
    assert not any(s.type_id == 28 for s in enumerate_admissible(19, 3, cap=3000))


def test_spec_string_round_trip():
    for s in ("t19:p=5,q=2", "t1:p=2,q=3", "t27:p=11,q=5,n=2"):
        assert format_spec(parse_spec(s)) == s
    with pytest.raises(ValueError):
        parse_spec("t19:p=5")
    with pytest.raises(ValueError):
        parse_spec("t99:p=5,q=2")
    with pytest.raises(ParameterError):
        parse_spec("t19:p=5,q=3")  # 3 does not divide 4


def test_generator_split():
    assert catalog.generator_split(parse_spec("t19:p=5,q=2")) == ((0,), (1,))
    assert catalog.generator_split(parse_spec("t33:p=3,q=2")) == ((0, 1), (2, 3))
    with pytest.raises(UnknownTypeError):
        catalog.acting_generator_count(15)
