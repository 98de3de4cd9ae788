import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covercat.cn import (
    Autoequivalence,
    BasicMorphismCn,
    MonomialLift,
    NaturalIso,
    apply_functor,
    check_skew_continuity,
    commutes,
    compose_basic,
    conjugate_pair,
    continuity_factor,
    is_anti_compatible,
    lift_to_monomial,
    natural_iso,
    project_lift,
)
from covercat.scalars import (
    CYC_ONE,
    MINUS_ONE,
    ONE,
    Cyclotomic,
    RootOfUnity,
)


def swap2(coeff=None):
    return Autoequivalence(2, [2, 1], coeff)


def id2(coeff=None):
    return Autoequivalence(2, [1, 2], coeff)


# the three hand-checked anti-compatible shapes on two objects
SIGMA_CASE1 = id2([ONE, MINUS_ONE])      # identity on objects, a12 = -1
TAU_CASE1 = swap2()
SIGMA_CASE2 = swap2()
TAU_CASE2 = id2([ONE, MINUS_ONE])        # identity on objects, b12 = -1
SIGMA_CASE3 = swap2()
TAU_CASE3 = swap2([ONE, MINUS_ONE])      # swap with b12 = -1


def rand_auto(rng, n):
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    coeff = [RootOfUnity(Fraction(rng.randrange(12), 12)) for _ in range(n)]
    return Autoequivalence(n, perm, coeff)


def test_compose_basic():
    x23 = BasicMorphismCn(3, 2)
    x12 = BasicMorphismCn(2, 1)
    assert compose_basic(x12, x23) == BasicMorphismCn(3, 1)
    with pytest.raises(ValueError):
        compose_basic(x23, x12)
    ident = BasicMorphismCn(1, 1)
    a = BasicMorphismCn(1, 1, Cyclotomic.from_rational(3))
    assert compose_basic(a, ident) == a
    z4 = RootOfUnity.primitive(4)
    m = compose_basic(
        BasicMorphismCn(2, 1, Cyclotomic.from_rational(2)),
        BasicMorphismCn(1, 2, Cyclotomic.from_root(z4)),
    )
    assert m == BasicMorphismCn(1, 1, Cyclotomic.from_root(z4, 2))


def test_apply_functor_examples():
    x12 = BasicMorphismCn(2, 1)
    assert apply_functor(Autoequivalence.identity(2), x12) == x12
    assert apply_functor(swap2(), x12) == BasicMorphismCn(1, 2)
    # identity object map with sign -1 negates the cross morphism
    assert apply_functor(TAU_CASE2, x12) == BasicMorphismCn(2, 1, -CYC_ONE)


def test_functor_is_faithful():
    rng = random.Random(5)
    for _ in range(50):
        F = rand_auto(rng, 4)
        m = BasicMorphismCn(rng.randrange(1, 5), rng.randrange(1, 5))
        assert not apply_functor(F, m).is_zero()


def test_functoriality_random():
    rng = random.Random(7)
    for _ in range(50):
        F = rand_auto(rng, 3)
        i, j, k = (rng.randrange(1, 4) for _ in range(3))
        f = BasicMorphismCn(k, j)
        g = BasicMorphismCn(j, i)
        assert apply_functor(F, compose_basic(g, f)) == compose_basic(
            apply_functor(F, g), apply_functor(F, f)
        )


def test_compose_and_inverse():
    rng = random.Random(11)
    for _ in range(50):
        f = rand_auto(rng, 3)
        g = rand_auto(rng, 3)
        assert f.compose(f.inverse()) == Autoequivalence.identity(3)
        assert f.inverse().compose(f) == Autoequivalence.identity(3)
        m = BasicMorphismCn(rng.randrange(1, 4), rng.randrange(1, 4))
        assert apply_functor(f.compose(g), m) == apply_functor(
            f, apply_functor(g, m)
        )


def test_coefficient_normalization():
    z5 = RootOfUnity.primitive(5)
    F = Autoequivalence(2, [2, 1], [z5, z5 * MINUS_ONE])
    assert F.coeff[0] == ONE
    assert F.a(1, 2) == MINUS_ONE
    assert F == Autoequivalence(2, [2, 1], [ONE, MINUS_ONE])


def test_commutes():
    assert commutes(SIGMA_CASE1, SIGMA_CASE1)
    assert commutes(SIGMA_CASE2, TAU_CASE3)
    # an identity-on-objects twist by a third root of unity does not
    # commute with the flip
    z3 = RootOfUnity.primitive(3)
    twist = id2([ONE, z3])
    assert not commutes(twist, swap2())
    assert commutes(twist, Autoequivalence.identity(2))


def test_natural_iso_cases():
    phi = natural_iso(SIGMA_CASE1, TAU_CASE1)
    assert phi.c == (ONE, MINUS_ONE)
    assert phi.is_natural()
    phi2 = natural_iso(SIGMA_CASE2, TAU_CASE2)
    assert phi2.c == (ONE, MINUS_ONE)
    F = swap2([ONE, RootOfUnity.primitive(3)])
    same = natural_iso(F, F)
    assert all(c == ONE for c in same.c)


def test_naturality_square_random():
    rng = random.Random(13)
    for _ in range(30):
        s = rand_auto(rng, 3)
        t = rand_auto(rng, 3)
        phi = natural_iso(s, t)
        for i in range(1, 4):
            for j in range(1, 4):
                x = BasicMorphismCn(j, i)
                lhs = compose_basic(apply_functor(t, x), phi.component(j))
                rhs = compose_basic(phi.component(i), apply_functor(s, x))
                assert lhs == rhs


def test_continuity_factor_examples():
    assert continuity_factor(SIGMA_CASE1, SIGMA_CASE1) == ONE
    assert continuity_factor(SIGMA_CASE2, Autoequivalence.identity(2)) == ONE
    assert continuity_factor(SIGMA_CASE2, TAU_CASE2) == MINUS_ONE
    assert continuity_factor(SIGMA_CASE1, TAU_CASE1) == MINUS_ONE
    assert continuity_factor(SIGMA_CASE3, TAU_CASE3) == MINUS_ONE


def test_continuity_factor_preconditions():
    z3 = RootOfUnity.primitive(3)
    with pytest.raises(ValueError):
        continuity_factor(id2([ONE, z3]), swap2())
    non_auto = Autoequivalence(2, [1, 1])
    with pytest.raises(ValueError):
        continuity_factor(non_auto, id2())


def test_anti_symmetry_of_the_pairing():
    rng = random.Random(17)
    seen = 0
    for _ in range(200):
        s = rand_auto(rng, 3)
        t = rand_auto(rng, 3)
        if not commutes(s, t):
            continue
        seen += 1
        assert continuity_factor(s, t) * continuity_factor(t, s) == ONE
    assert seen > 10


def test_is_anti_compatible():
    assert not is_anti_compatible(SIGMA_CASE1, SIGMA_CASE1)
    assert is_anti_compatible(SIGMA_CASE1, TAU_CASE1)
    assert is_anti_compatible(SIGMA_CASE3, TAU_CASE3)


def test_check_skew_continuity():
    assert check_skew_continuity(natural_iso(SIGMA_CASE1, TAU_CASE1))
    assert check_skew_continuity(natural_iso(SIGMA_CASE2, TAU_CASE2))
    F = swap2([ONE, RootOfUnity.primitive(5)])
    assert not check_skew_continuity(natural_iso(F, F))
    # compatible pairs are never skew
    assert not check_skew_continuity(
        natural_iso(SIGMA_CASE2, Autoequivalence.identity(2))
    )


def test_conjugation_preserves_continuity_factor():
    rng = random.Random(19)
    for _ in range(100):
        rho = rand_auto(rng, 2)
        s2, t2 = conjugate_pair(rho, SIGMA_CASE1, TAU_CASE1)
        assert commutes(s2, t2)
        assert continuity_factor(s2, t2) == MINUS_ONE
    ident = Autoequivalence.identity(2)
    assert conjugate_pair(ident, SIGMA_CASE1, TAU_CASE1) == (
        SIGMA_CASE1,
        TAU_CASE1,
    )
    with pytest.raises(ValueError):
        conjugate_pair(Autoequivalence(2, [1, 1]), SIGMA_CASE1, TAU_CASE1)


def test_monomial_lift_and_projection():
    ident = Autoequivalence.identity(3)
    L = lift_to_monomial(ident)
    assert L.perm == (1, 2, 3)
    assert all(d == ONE for d in L.diag)
    assert project_lift(L) == ident

    F = project_lift(MonomialLift([2, 1], [ONE, MINUS_ONE]))
    assert F.object_map == (2, 1)
    assert F.a(1, 2) == MINUS_ONE

    z5 = RootOfUnity.primitive(5)
    scaled = MonomialLift([2, 1], [z5, z5 * MINUS_ONE])
    assert project_lift(scaled) == F

    rng = random.Random(23)
    for _ in range(25):
        G = rand_auto(rng, 4)
        assert project_lift(lift_to_monomial(G)) == G


def test_json_roundtrip():
    F = swap2([ONE, RootOfUnity(Fraction(1, 3))])
    data = F.to_json()
    assert data["object_map"] == [2, 1]
    assert data["coeff"] == ["0/1", "1/3"]
    assert Autoequivalence.from_json(data) == F


perms3 = st.permutations([1, 2, 3])
coeffs3 = st.lists(
    st.fractions(min_value=0, max_value=1, max_denominator=6).map(RootOfUnity),
    min_size=3,
    max_size=3,
)


@given(perms3, coeffs3, perms3, coeffs3)
@settings(max_examples=80, deadline=None)
def test_continuity_factor_well_defined(p1, c1, p2, c2):
    s = Autoequivalence(3, p1, c1)
    t = Autoequivalence(3, p2, c2)
    if not commutes(s, t):
        return
    value = continuity_factor(s, t)
    # rescaling the natural isomorphism must not change the value
    phi = natural_iso(s, t)
    r = RootOfUnity(Fraction(1, 7))
    rescaled = NaturalIso(s, t, [c * r for c in phi.c])
    assert rescaled.is_natural()
    alt = {
        s.a(t(i), s(i)) * rescaled.c[i - 1] / rescaled.c[s(i) - 1]
        for i in range(1, 4)
    }
    assert alt == {value}
