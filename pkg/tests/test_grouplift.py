import random
from fractions import Fraction

import pytest

from cssets import grouplift as gl
from cssets import syndetic
from cssets.errors import BudgetExceeded, NotSurjective
from cssets.setcore import AllOfN, BlockEncoded, BlockStream, Construction42, Periodic

EVENS = Periodic(2, {0})
Z2 = gl.FreeAbelian(2)
H = gl.Heisenberg()
SUM = gl.GroupHom.parse(Z2, "x=1,y=1")


def _random_word(G, rng, length):
    letters = [(rng.randrange(len(G.generators)), rng.choice((-1, 1))) for _ in range(length)]
    return G.word(letters)


def test_ball_sizes():
    assert len(gl.ball(Z2, 1)) == 5
    assert len(gl.ball(H, 1)) == 5
    assert len(gl.ball(gl.FreeAbelian(1), 10)) == 21
    assert len(gl.ball(H, 0)) == 1
    for d in (1, 2, 3):
        G = gl.FreeAbelian(d)
        for r in range(6):
            assert len(gl.ball(G, r)) == G.ball_size(r)


def test_ball_nesting():
    prev = set()
    for r in range(7):
        cur = set(gl.ball(H, r).elements)
        assert prev <= cur
        prev = cur


def test_ball_budget():
    with pytest.raises(BudgetExceeded):
        gl.ball(H, 10, budget=100)


@pytest.mark.parametrize("G", [Z2, gl.FreeAbelian(3), H])
def test_group_axioms(G):
    rng = random.Random(5)
    e = G.identity
    for _ in range(200):
        a, b, c = (_random_word(G, rng, 6) for _ in range(3))
        assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))
        assert G.multiply(a, e) == a == G.multiply(e, a)
        assert G.multiply(a, G.invert(a)) == e
        assert G.power(a, 3) == G.multiply(a, G.multiply(a, a))
        assert G.power(a, -2) == G.invert(G.multiply(a, a))


def test_heisenberg_commutator_is_central():
    x, y = H.generators
    comm = H.multiply(H.multiply(x, y), H.multiply(H.invert(x), H.invert(y)))
    assert comm == (0, 0, 1)


@pytest.mark.parametrize("G,images", [(Z2, [1, 1]), (Z2, [2, -3]), (H, [1, 0]), (H, [4, 7])])
def test_homomorphism_property(G, images):
    phi = gl.GroupHom(G, images)
    rng = random.Random(17)
    for _ in range(1000):
        g, h = _random_word(G, rng, 8), _random_word(G, rng, 8)
        assert phi(G.multiply(g, h)) == phi(g) + phi(h)


def test_surjectivity():
    assert SUM.is_surjective()
    assert not gl.GroupHom(Z2, [2, 4]).is_surjective()
    with pytest.raises(NotSurjective):
        gl.preimage_set(gl.GroupHom(H, [0, 3]), EVENS)
    for G, images in ((Z2, [2, 3]), (H, [6, -5]), (gl.FreeAbelian(3), [6, 10, 15])):
        phi = gl.GroupHom(G, images)
        assert phi(phi.unit_preimage()) == 1


def test_lift_witness():
    assert gl.lift_witness(SUM, [0, 1]) == [(0, 0), (1, 0)]
    phi = gl.GroupHom(H, [3, 5])
    for f in range(-20, 21):
        assert phi(gl.lift_witness(phi, [f])[0]) == f


def test_preimage_examples():
    cb = gl.preimage_set(SUM, EVENS)
    assert cb.member((1, 1)) and not cb.member((1, 0))
    hx = gl.preimage_set(gl.GroupHom.parse(H, "x=1,y=0"), EVENS)
    for g in gl.ball(H, 4).elements:
        assert hx.member(g) == (g[0] % 2 == 0)
    whole = gl.preimage_set(SUM, BlockEncoded(BlockStream.from_lists([1], [1]), AllOfN()) | ~EVENS | EVENS)
    assert all(whole.member(g) for g in gl.ball(Z2, 5).elements)


def test_lift_soundness_b20():
    inner = Construction42(1, 2)
    for G, phi in ((Z2, SUM), (H, gl.GroupHom(H, [1, 2]))):
        pre = gl.preimage_set(phi, inner)
        elems = gl.ball(G, 20).elements
        mask = pre.members_mask(elems)
        assert [bool(m) for m in mask] == [inner.member(phi(g)) for g in elems]


def test_lipschitz():
    for G, phi in ((Z2, gl.GroupHom(Z2, [2, -3])), (H, gl.GroupHom(H, [4, 1]))):
        L = phi.lipschitz_constant()
        B = gl.ball(G, 15)
        assert all(abs(phi(g)) <= L * d for g, d in zip(B.elements, B.lengths))


def test_group_witness_checks():
    cb = gl.preimage_set(SUM, EVENS)
    assert gl.check_witness_group(cb, 1, [(0, 0), (1, 0)], 20).verified
    res = gl.check_witness_group(cb, 2, [(0, 0)], 20)
    assert res.status == "counterexample"
    assert all(not cb.member(gl.FreeAbelian(2).multiply(gl.FreeAbelian(2).invert(f), s)) for f, s in res.evidence)
    F2 = syndetic.synthesize_witnesses(syndetic.empirical_certificate(Construction42(1, 2), 1004), 2)[1]
    pre = gl.preimage_set(SUM, Construction42(1, 2))
    assert gl.check_witness_group(pre, 2, gl.lift_witness(SUM, F2), 30).verified


def test_group_check_generic_path_matches():
    class Wrapped(gl.GroupSetDescriptor):
        def __init__(self, inner):
            self.inner = inner
            self.group = inner.group

        def member(self, g):
            return self.inner.member(g)

    pre = gl.preimage_set(gl.GroupHom(H, [1, 1]), Construction42(1, 2))
    F = gl.lift_witness(pre.hom, range(-3, 4))
    for n in (1, 2, 3):
        a = gl.check_witness_group(pre, n, F, 4)
        b = gl.check_witness_group(Wrapped(pre), n, F, 4)
        assert a.to_json() == b.to_json()


def test_group_density_examples():
    cb = gl.preimage_set(SUM, EVENS)
    assert abs(gl.group_density(Z2, cb, 20) - Fraction(1, 2)) <= Fraction(1, 20)
    assert gl.group_density(H, gl.WholeGroup(H), 5) == 1
    pre = gl.preimage_set(SUM, Construction42(3, 2))
    assert gl.group_density(Z2, pre, 100) <= Fraction(1, 2)


def test_finite_index_lift():
    B = gl.finite_index_lift(EVENS, 2)
    assert list(B.window(-8, 8).members()) == [-8, -7, -4, -3, 0, 1, 4, 5, 8]
    assert gl.finite_index_lift(EVENS, 1) is EVENS
    A = Construction42(1, 2)
    for k in (2, 3, 5):
        L = gl.finite_index_lift(A, k)
        r = 3000
        assert int(L.window(0, k * r + k - 1).bits.sum()) == k * int(A.window(0, r).bits.sum())
    from cssets.setcore import descriptor_from_json

    back = descriptor_from_json(gl.finite_index_lift(A, 3).to_json())
    assert (back.window(-50, 50).bits == gl.finite_index_lift(A, 3).window(-50, 50).bits).all()


def test_group_set_json():
    cb = gl.preimage_set(gl.GroupHom(H, [1, 0]), EVENS)
    back = gl.group_set_from_json(cb.to_json())
    assert back.to_json() == cb.to_json()
