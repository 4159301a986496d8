import random

import pytest

from biinterp.chevalley import (
    WIDTH_BOUND,
    RootA2,
    SL3Interpretation,
    alternating_product,
    commutator,
    k_subgroup,
    phi,
    sl3,
    verify_centralizer_identity,
    verify_klemma,
    width_decompose,
    x_root,
)
from biinterp.errors import TooLargeError
from biinterp.groups import MatrixGroup, scalars_with_power_one
from biinterp.ring import ProductRing


@pytest.fixture(scope="module")
def S5(F5):
    return sl3(F5)


@pytest.fixture(scope="module")
def T5(F5):
    return SL3Interpretation(F5)


def test_root_elements(S5, F5):
    assert x_root(S5, RootA2.A1, 0) == S5.identity
    g = x_root(S5, RootA2.A1, 2)
    assert g.codes == (1, 2, 0, 0, 1, 0, 0, 0, 1)
    for a in F5.elements():
        for b in F5.elements():
            assert x_root(S5, RootA2.A1, a) * x_root(S5, RootA2.A1, b) == x_root(S5, RootA2.A1, a + b)


def test_commutator_relation(S5, F5):
    for a in F5.elements():
        for b in F5.elements():
            c = commutator(x_root(S5, RootA2.A1, a), x_root(S5, RootA2.A2, b))
            assert c == x_root(S5, RootA2.A1A2, a * b)


def test_phi(S5, G5, F5):
    assert phi(S5, RootA2.A1, G5.identity) == S5.identity
    for r in F5.elements():
        assert phi(S5, RootA2.A1, G5.make_u(r)) == x_root(S5, RootA2.A1, r)
    assert phi(S5, RootA2.A1, G5.w).codes == (0, 1, 0, 4, 0, 0, 0, 0, 1)


def test_phi_homomorphism(S5, G5):
    rng = random.Random(11)
    elems = G5.enumerate()
    for alpha in (RootA2.A1, RootA2.A2, RootA2.A1A2):
        for _ in range(2000):
            m1, m2 = rng.choice(elems), rng.choice(elems)
            assert phi(S5, alpha, m1 * m2) == phi(S5, alpha, m1) * phi(S5, alpha, m2)


def test_k_subgroup(S5, G5):
    K = k_subgroup(S5, RootA2.A1)
    assert len(K) == 120 and S5.identity in K and phi(S5, RootA2.A1, G5.w) in K


def test_alternating_product(S5, G5, F5):
    image = alternating_product(S5, RootA2.A1)
    assert set(image) == k_subgroup(S5, RootA2.A1)
    assert image[S5.identity] == (F5(0),) * 8
    params = image[phi(S5, RootA2.A1, G5.w)]
    rebuilt = S5.product(
        x_root(S5, RootA2.A1.negative if k % 2 == 0 else RootA2.A1, r) for k, r in enumerate(params)
    )
    assert rebuilt == phi(S5, RootA2.A1, G5.w)


def test_klemma_all_roots(S5):
    for alpha in (RootA2.A1, RootA2.A2, RootA2.A1A2):
        rep = verify_klemma(S5, alpha)
        assert rep.equal and rep.computed_set_size == 120


def test_klemma_guard():
    with pytest.raises(TooLargeError):
        verify_klemma(sl3(ProductRing.parse("5,7")), RootA2.A1)


def test_centralizer_identity(S5):
    rep = verify_centralizer_identity(S5, RootA2.A1)
    assert rep.equal and rep.computed_set_size == 5
    assert len(S5.enumerate_array()) == 372000


def test_sl3_centre(S5, F5):
    assert S5.centre() == [S5.identity]
    # cube roots of unity exist mod 7, so there the centre has three scalars
    assert len(scalars_with_power_one(ProductRing.parse("7"), 3)) == 3
    with pytest.raises(TooLargeError):
        MatrixGroup(ProductRing.parse("7"), 3).enumerate()


def test_width_examples(S5):
    assert len(width_decompose(S5.identity)) == 0
    dec = width_decompose(x_root(S5, RootA2.A2, 3))
    assert len(dec) == 1 and dec.factors[0][0] is RootA2.A2


def test_width_random(S5):
    rng = random.Random(5)
    elems = S5.enumerate()
    worst = 0
    for _ in range(1500):
        g = rng.choice(elems)
        dec = width_decompose(g)
        assert dec.product(S5) == g
        worst = max(worst, len(dec))
    assert worst <= WIDTH_BOUND


def test_width_product_ring():
    G = sl3(ProductRing.parse("5,7"))
    rng = random.Random(2)
    R = G.ring
    for _ in range(200):
        g = G.identity
        for _ in range(12):
            root = rng.choice(list(RootA2))
            g = g * x_root(G, root, rng.choice(R.elements()))
        assert width_decompose(g).product(G) == g


def test_theta3_examples(T5, S5):
    one, zero = T5.encode(1), S5.identity
    ident = (one, zero, zero, zero, one, zero, zero, zero, one)
    assert T5.theta3_definable(S5.identity) == ident == T5.theta3_direct(S5.identity)
    g = x_root(S5, RootA2.A1, 2)
    assert T5.theta3_definable(g) == (one, T5.encode(2), zero, zero, one, zero, zero, zero, one)


def test_theta3_sample(T5, S5):
    rng = random.Random(8)
    elems = S5.enumerate()
    for _ in range(200):
        g = rng.choice(elems)
        assert T5.theta3_definable(g) == T5.theta3_direct(g)


def test_interpreted_3x3_product_associative(T5, S5):
    rng = random.Random(9)
    elems = S5.enumerate()
    for _ in range(30):
        A, B, C = (T5.theta3_direct(rng.choice(elems)) for _ in range(3))
        assert T5.matmul(T5.matmul(A, B), C) == T5.matmul(A, T5.matmul(B, C))


def test_weyl_movers(T5, S5):
    target = T5.encode(1)
    for beta, n in T5.weyl_movers.items():
        assert x_root(S5, beta, 1) ^ n == target
