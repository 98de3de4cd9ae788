import cmath
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from covercat.scalars import (
    CYC_ONE,
    CYC_ZERO,
    MINUS_ONE,
    ONE,
    Cyclotomic,
    MonomialCoefficient,
    RootOfUnity,
    cyclotomic_polynomial,
    geometric_mean,
    principal_root,
    root_multiply,
)

roots = st.builds(
    RootOfUnity,
    st.fractions(
        min_value=0, max_value=10, max_denominator=24
    ),
)


def test_root_normalization():
    assert RootOfUnity(Fraction(5, 2)) == RootOfUnity(Fraction(1, 2))
    assert RootOfUnity(Fraction(-1, 3)) == RootOfUnity(Fraction(2, 3))
    assert RootOfUnity(3) == ONE
    assert RootOfUnity.from_string("2/3").order == 3
    assert str(RootOfUnity(Fraction(1, 4))) == "1/4"
    assert str(ONE) == "0/1"


def test_root_group_examples():
    z3 = RootOfUnity.primitive(3)
    z6 = RootOfUnity.primitive(6)
    assert root_multiply(z3, z3) == RootOfUnity(Fraction(2, 3))
    assert z3 * z3 * z3 == ONE
    assert z6 ** 3 == MINUS_ONE
    assert -z3 == z6 ** 5
    assert MINUS_ONE * MINUS_ONE == ONE
    assert z3.inverse() == z3 ** 2
    assert (z3 / z6) == z6


@given(roots, roots, roots)
def test_root_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * a.inverse() == ONE
    assert a * ONE == a


@given(roots, st.integers(min_value=1, max_value=24))
def test_principal_root_power(a, n):
    r = principal_root(a, n)
    assert r ** n == a
    # the principal branch has the smallest exponent among n-th roots
    assert 0 <= r.exponent < Fraction(1)
    assert r.exponent * n == a.exponent


@given(st.lists(roots, min_size=1, max_size=8))
def test_geometric_mean_power(cs):
    g = geometric_mean(cs)
    prod = ONE
    for c in cs:
        prod = prod * c
    assert g ** len(cs) == prod


def test_geometric_mean_examples():
    assert geometric_mean([ONE, ONE]) == ONE
    assert geometric_mean([ONE, MINUS_ONE]) == RootOfUnity(Fraction(1, 4))
    assert principal_root(RootOfUnity(Fraction(1, 2)), 2) == RootOfUnity(
        Fraction(1, 4)
    )


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(105)[7] == -2  # first non-unit coefficient


def test_exact_zero_detection():
    z3 = RootOfUnity.primitive(3)
    z5 = RootOfUnity.primitive(5)
    s = CYC_ONE + Cyclotomic.from_root(z3) + Cyclotomic.from_root(z3 ** 2)
    assert s.is_zero()
    assert (Cyclotomic.from_root(z5) - Cyclotomic.from_root(z5)).is_zero()
    full = sum(
        (Cyclotomic.from_root(z5 ** k) for k in range(1, 5)),
        CYC_ONE,
    )
    assert full.is_zero()
    assert not (CYC_ONE + Cyclotomic.from_root(z5)).is_zero()


def test_monomial_canonical_form():
    z3 = RootOfUnity.primitive(3)
    z6 = RootOfUnity.primitive(6)
    a = -Cyclotomic.from_root(z3)
    assert a.is_monomial()
    assert a.as_root() == z6 ** 5
    assert a.terms == Cyclotomic.from_root(z6 ** 5).terms
    # a sum that collapses to a single root is recognized
    b = CYC_ONE + Cyclotomic.from_root(z3)
    assert b.as_root() == z6
    # and one that does not stays multi-term
    c = CYC_ONE + Cyclotomic.from_root(RootOfUnity.primitive(4))
    assert not c.is_monomial()
    assert len(c.terms) == 2


# keep the common root order small so reductions stay cheap
small_roots = st.builds(
    RootOfUnity,
    st.fractions(min_value=0, max_value=2, max_denominator=8),
)
cycs = st.lists(
    st.tuples(
        small_roots,
        st.fractions(min_value=-3, max_value=3, max_denominator=6),
    ),
    max_size=4,
).map(lambda ts: Cyclotomic(dict(ts)))


@given(cycs, cycs, cycs)
@settings(max_examples=60, deadline=None)
def test_cyclotomic_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x - x).is_zero()
    assert x + CYC_ZERO == x
    assert x * CYC_ONE == x


@given(cycs)
@settings(max_examples=60, deadline=None)
def test_cyclotomic_float_crosscheck(x):
    approx = sum(
        (float(c) * r.complex_value() for r, c in x.terms.items()), 0j
    )
    assert cmath.isclose(
        approx, x.complex_value(), abs_tol=1e-9
    )
    if x.is_zero():
        assert abs(approx) < 1e-9


def test_cyclotomic_inverse():
    z3 = RootOfUnity.primitive(3)
    x = Cyclotomic.from_root(z3, Fraction(2, 5))
    assert x * x.inverse() == CYC_ONE
    # 1 + zeta_3 collapses to the primitive sixth root, so it is invertible
    assert (CYC_ONE + Cyclotomic.from_root(z3)).inverse() == Cyclotomic.from_root(
        RootOfUnity.primitive(6).inverse()
    )
    try:
        (CYC_ONE + Cyclotomic.from_root(RootOfUnity.primitive(4))).inverse()
    except ValueError:
        pass
    else:  # pragma: no cover
        raise AssertionError("expected ValueError")


def test_cyclotomic_serialization_roundtrip():
    z3 = RootOfUnity.primitive(3)
    z4 = RootOfUnity.primitive(4)
    x = Cyclotomic({z3: Fraction(1), z4: Fraction(-2, 3)})
    data = x.serialize()
    assert all(isinstance(row[0], str) for row in data)
    assert Cyclotomic.deserialize(data) == x
    assert Cyclotomic.deserialize([]) == CYC_ZERO


def test_monomial_coefficient_arithmetic():
    z3 = RootOfUnity.primitive(3)
    m = MonomialCoefficient.from_root(z3, 2)
    t = MonomialCoefficient.t()
    assert t.upower == 2
    assert (m * t) == MonomialCoefficient.from_root(z3, 4)
    assert (m - m).is_zero()
    assert (m - m).upower == 0
    assert MonomialCoefficient.zero() + m == m
    assert m.is_unit() is False
    assert MonomialCoefficient.one().is_unit()
    assert MonomialCoefficient.from_root(z3).inverse_unit() == (
        MonomialCoefficient.from_root(z3 ** 2)
    )
    try:
        m + MonomialCoefficient.one()
    except ValueError:
        pass
    else:  # pragma: no cover
        raise AssertionError("expected ValueError")
    try:
        m.inverse_unit()
    except ValueError:
        pass
    else:  # pragma: no cover
        raise AssertionError("expected ValueError")
