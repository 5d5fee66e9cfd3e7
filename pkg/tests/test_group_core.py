import numpy as np
import pytest

from p2q2.group_core import (
    InconsistentPresentationError,
    CayleyCapError,
    collect,
    presentation,
)


def cyclic(n):
    return collect(presentation([("a", n)]))


def type19_like():
    # a of order 4 acting on b of order 25 by b -> b^24
    return collect(presentation([("a", 4), ("b", 25)], conj={(0, 1): {1: 24}}))


def test_cyclic_group_basics():
    G = cyclic(4)
    assert G.order == 4
    assert G.order_histogram() == {1: 1, 2: 1, 4: 2}
    a = G.gen_indices[0]
    a2, a3 = G.power(a, 2), G.power(a, 3)
    assert G.mul(0, a) == a
    assert G.mul(a, G.inverse_of(a)) == 0
    assert G.mul(a2, a3) == a


def test_collector_moves_letters_past_the_action():
    G = type19_like()
    a, b = G.gen_indices
    assert G.mul(b, a) == G.mul(a, G.power(b, 24))
    assert G.element_order(a) == 4
    assert G.element_order(b) == 25
    assert G.element_order(0) == 1


def test_center_of_type19_like_group():
    # r = -1 mod 25 has order 2, so exactly <a^2> is central
    G = type19_like()
    assert G.center().order == 2
    assert G.power(G.gen_indices[0], 2) in G.center()


def test_subgroup_closure():
    G = type19_like()
    a = G.gen_indices[0]
    assert G.subgroup_closure([]).order == 1
    assert G.subgroup_closure(G.gen_indices).order == G.order
    assert G.subgroup_closure([G.power(a, 2)]).order == 2
    sub = G.subgroup_closure([G.gen_indices[1]])
    resub = G.subgroup_closure(sorted(sub.members))
    assert resub.members == sub.members


def test_abelian_invariants():
    assert collect(presentation([("u", 2), ("v", 3)])).abelian_invariants() == (2, 3)
    assert collect(presentation([("u", 2), ("v", 2)])).abelian_invariants() == (2, 2)
    assert cyclic(8).abelian_invariants() == (8,)
    G = collect(presentation([("a", 2), ("b", 4), ("c", 3)]))
    assert G.abelian_invariants() == (2, 3, 4)


def test_abelian_and_derived():
    Z6 = collect(presentation([("u", 2), ("v", 3)]))
    assert Z6.is_abelian()
    assert Z6.center().order == 6
    assert Z6.derived_subgroup().order == 1
    S3 = collect(presentation([("s", 2), ("r", 3)], conj={(0, 1): {1: 2}}))
    assert not S3.is_abelian()
    assert S3.derived_subgroup().order == 3
    assert S3.abelian_invariants() == (2,)


def test_order_histograms():
    V4 = collect(presentation([("u", 2), ("v", 2)]))
    assert V4.order_histogram() == {1: 1, 2: 3}
    hist = type19_like().order_histogram()
    assert sum(hist.values()) == 100
    assert hist[1] == 1


def test_latin_square_and_conjugation_round_trip():
    G = type19_like()
    n = G.order
    assert np.array_equal(np.sort(G.table, axis=1), np.tile(np.arange(n), (n, 1)))
    a, b = G.gen_indices
    assert G.conjugate(b, a) == G.power(b, 24)


def test_class_equation():
    G = collect(presentation([("s", 2), ("r", 3)], conj={(0, 1): {1: 2}}))
    seen = set()
    classes = []
    for x in range(G.order):
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in G.gen_indices:
                z = G.conjugate(y, g)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        classes.append(orbit)
    assert sum(len(c) for c in classes) == G.order
    singletons = sum(1 for c in classes if len(c) == 1)
    assert singletons == G.center().order


def test_inconsistent_presentation_rejected():
    # an order-4 action declared on a generator of order 2 collapses
    with pytest.raises(InconsistentPresentationError):
        collect(presentation([("a", 2), ("b", 5)], conj={(0, 1): {1: 2}}))


def test_cap_enforced():
    with pytest.raises(CayleyCapError):
        collect(presentation([("a", 251), ("b", 251)]))


def test_rule_validation():
    with pytest.raises(ValueError):
        # right-hand side touches the acting generator itself
        presentation([("a", 2), ("b", 3)], conj={(0, 1): {0: 1, 1: 1}})
    with pytest.raises(ValueError):
        presentation([("a", 1)])
