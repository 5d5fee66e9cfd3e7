import numpy as np
import pytest

from p2q2 import autom, catalog, gfp2
from p2q2.autom import (
    AutMatrix,
    BudgetExceededError,
    brute_aut,
    check_qr_decomposition,
    construct_qr,
    expansion_sums_match,
    predicted,
    preserves_normal_factor,
    verify,
    verify_aut_matrix,
)
from p2q2.group_core import collect, presentation


@pytest.fixture(scope="module")
def g19():
    spec = catalog.parse_spec("t19:p=5,q=2")
    return spec, catalog.build(spec)


def test_brute_cyclic():
    Z4 = collect(presentation([("a", 4)]))
    assert brute_aut(Z4).order == 2


def test_brute_type1_and_type19(g19):
    G1 = catalog.build(catalog.parse_spec("t1:p=2,q=3"))
    assert brute_aut(G1).order == 12
    spec, G = g19
    aut = brute_aut(G)
    # counting oracle: theta(b) = b^i (20 units), theta(a) = a^j b^w
    # with j in {1,3} and w free mod 25
    assert aut.order == 20 * 2 * 25 == 1000


def test_brute_budget():
    spec = catalog.parse_spec("t22:p=5,q=2")
    with pytest.raises(BudgetExceededError):
        brute_aut(catalog.build(spec), budget=100)


def test_oracle_is_a_group(g19):
    _, G = g19
    aut = brute_aut(G)
    assert tuple(aut.identity_images()) in aut
    rng = np.random.default_rng(7)
    rows = rng.integers(0, aut.order, size=40)
    for i, j in zip(rows[::2], rows[1::2]):
        comp = aut.compose(aut.images[i], aut.images[j])
        assert comp in aut
    for i in rows[:10]:
        assert aut.inverse_images(aut.images[i]) in aut


def test_automorphisms_preserve_element_orders(g19):
    _, G = g19
    aut = brute_aut(G)
    full = autom._full_maps(G, aut.images[:50])
    for row in full:
        assert (G.element_orders[row] == G.element_orders).all()


def test_verify_aut_matrix_examples(g19):
    _, G = g19
    identity = AutMatrix.from_components(G, 1)
    assert verify_aut_matrix(G, identity) == (True, None)

    a, b = G.gen_indices
    # delta: a -> a^2 drops the order of a; compatibility (iv) breaks first,
    # and the induced map is not a bijection either
    squashed = AutMatrix.from_components(G, 1, delta={0: G.power(a, 2)})
    ok, cond = verify_aut_matrix(G, squashed)
    assert not ok and cond in ("iv", "v")
    beta_only = AutMatrix.from_components(G, 1, beta={0: G.power(b, 5)}, delta={0: G.power(a, 2)})
    assert not verify_aut_matrix(G, beta_only)[0]

    # alpha: b -> b^2, delta: a -> a^3, beta: a -> b^7 is a genuine automorphism
    good = AutMatrix.from_components(
        G, 1, alpha={1: G.power(b, 2)}, delta={0: G.power(a, 3)}, beta={0: G.power(b, 7)}
    )
    assert verify_aut_matrix(G, good) == (True, None)


def test_verify_aut_matrix_brute_members_pass(g19):
    _, G = g19
    aut = brute_aut(G)
    ok, labels = autom.matrix_conditions_batch(G, 1, aut.images)
    assert ok.all()


def test_non_automorphism_tuples_fail_with_named_condition():
    # need a case whose action genuinely constrains order-matched images;
    # t26 at (5,2) acts by an order-4 scalar, so half the candidates violate
    spec = catalog.parse_spec("t26:p=5,q=2")
    G = catalog.build(spec)
    rng = np.random.default_rng(3)
    cands = {
        j: np.flatnonzero(G.element_orders == m)
        for j, (_, m) in enumerate(G.presentation.generators)
    }
    tuples = np.stack(
        [rng.choice(cands[j], size=300) for j in range(len(cands))], axis=1
    ).astype(np.int32)
    bad = tuples[~autom.relations_hold(G, tuples)]
    assert len(bad) > 0
    ok, labels = autom.matrix_conditions_batch(G, 1, bad)
    assert not ok.any()
    assert all(lbl in ("i", "ii", "iii", "iv", "v") for lbl in labels)


def test_construct_qr_counts(g19):
    spec, G = g19
    Q, R, QR = construct_qr(spec, G)
    assert (Q.order, R.order, QR.order) == (25, 40, 1000)
    spec23 = catalog.parse_spec("t23:p=5,q=2")
    Q, R, QR = construct_qr(spec23)
    assert (Q.order, R.order, QR.order) == (5, 32, 160)
    spec29 = catalog.parse_spec("t29:p=5,q=2")
    Q, R, QR = construct_qr(spec29)
    assert (Q.order, R.order, QR.order) == (25, 480, 12000)
    assert check_qr_decomposition(Q, R, QR)


def test_construct_matches_brute(g19):
    for s in ("t19:p=5,q=2", "t23:p=5,q=2", "t31:p=3,q=2", "t34:p=3,q=2", "t36:p=5,q=3"):
        spec = catalog.parse_spec(s)
        G = catalog.build(spec)
        Q, R, QR = construct_qr(spec, G)
        aut = brute_aut(G)
        assert QR.order == aut.order
        assert np.array_equal(QR.images, aut.images)
        assert check_qr_decomposition(Q, R, QR)


def test_check_qr_decomposition_degenerate(g19):
    _, G = g19
    ident = autom.AutGroup(G, np.array([G.gen_indices], dtype=np.int32))
    assert check_qr_decomposition(ident, ident, ident)


def test_gamma_triviality(g19):
    spec, G = g19
    aut = brute_aut(G)
    assert preserves_normal_factor(G, 1, aut)
    spec30 = catalog.parse_spec("t30:p=5,q=3")
    G30 = catalog.build(spec30)
    assert preserves_normal_factor(G30, 1, brute_aut(G30))


def test_predicted(g19):
    spec, _ = g19
    expr, order = predicted(spec)
    assert order == 1000
    expr18, order18 = predicted(catalog.parse_spec("t18:p=5,q=3"))
    assert order18 == 23040
    assert "GL(2,5)" in expr18.render()


def test_expansion_sums():
    p5 = gfp2.GfParams.canonical(5)
    sigma = gfp2.primitive_root(p5)
    assert expansion_sums_match(p5, sigma, 0)
    # s = 2 by hand: (m + n s)^2 = m^2 + n^2 D + 2 m n s
    x = gfp2.GfElement(2, 3, p5)
    sq = gfp2.gf_mul(x, x)
    assert sq == gfp2.GfElement((4 + 9 * p5.d) % 5, 12 % 5, p5)
    assert expansion_sums_match(p5, x, 2)
    assert expansion_sums_match(p5, sigma, 7)


def test_verify_reports(g19):
    spec, _ = g19
    rep = verify(spec)
    assert rep.verdict == "Match"
    assert rep.brute_order == rep.predicted_order == rep.qr_order == 1000
    assert rep.main_theorem_ok and rep.sets_equal
    assert rep.fingerprints["aut_center_order"] == 2
    d = rep.to_dict()
    assert d["constructed"]["q_order"] == 25
    assert d["brute"]["order"] == 1000

    skipped = verify(spec, budget=10)
    assert skipped.verdict == "Skipped"
    assert skipped.brute_order is None
    assert skipped.qr_order == 1000  # construction still reported

    rep1 = verify(catalog.parse_spec("t1:p=2,q=3"))
    assert rep1.verdict == "Match" and rep1.qr_order is None


def test_verify_many_parallel():
    specs = [catalog.parse_spec(s) for s in ("t19:p=5,q=2", "t23:p=5,q=2")]
    reports = autom.verify_many(specs, threads=2, with_fingerprints=False)
    assert [r["verdict"] for r in reports] == ["Match", "Match"]
    assert reports[0]["spec"] == "t19:p=5,q=2"


def test_aut_group_fingerprints(g19):
    _, G = g19
    aut = brute_aut(G)
    hist = aut.order_histogram()
    assert sum(hist.values()) == 1000
    assert hist[1] == 1
    assert aut.center_order() >= 1
    inv = aut.abelian_invariants()
    ab_order = int(np.prod(inv)) if inv else 1
    assert 1000 % ab_order == 0
    assert all(k > 1 for k in inv)
