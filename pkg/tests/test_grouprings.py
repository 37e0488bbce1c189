import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from novikov.errors import InexactDivisionError, StructuralError, UndefinedError
from novikov.grouprings import GF, QQ, ZZ, LaurentPoly, character, poly

t = LaurentPoly.monomial(ZZ, (1,))
x = LaurentPoly.monomial(ZZ, (1, 0))
y = LaurentPoly.monomial(ZZ, (0, 1))


def naive_product(p, q):
    """Dense convolution over explicit exponent pairs, independent of LaurentPoly.__mul__."""
    acc = {}
    for e1, c1 in p.terms:
        for e2, c2 in q.terms:
            e = tuple(a + b for a, b in zip(e1, e2))
            acc[e] = acc.get(e, 0) + c1 * c2
    return LaurentPoly(p.domain, p.rank, acc)


def rand_poly(rng, dom, r, n=5):
    return LaurentPoly(dom, r, {tuple(rng.randint(-3, 3) for _ in range(r)): rng.randint(-3, 3)
                                for _ in range(rng.randint(1, n))})


# --- domains ---------------------------------------------------------------

def test_gf_requires_prime():
    with pytest.raises(StructuralError, match="prime"):
        GF(4)


@pytest.mark.parametrize("dom, a, unit", [
    (ZZ, 1, True), (ZZ, -1, True), (ZZ, 2, False), (ZZ, 0, False),
    (QQ, Fraction(2, 3), True), (QQ, 0, False),
    (GF(5), 3, True), (GF(5), 0, False),
])
def test_unit_test(dom, a, unit):
    assert dom.is_unit(dom.coerce(a)) is unit


def test_gf_reduces_coefficients():
    p = poly(GF(2), 1, {0: 2, 1: 3})
    assert p == LaurentPoly.monomial(GF(2), (1,))


# --- ring operations -------------------------------------------------------

def test_difference_of_squares():
    assert (1 + t) * (1 - t) == 1 - t ** 2


def test_times_zero():
    p = 3 + t - t ** -2
    assert (p * 0).is_zero()
    assert (p * LaurentPoly.zero(ZZ, 1)).is_zero()


def test_no_zero_terms_stored():
    p = (1 + t) - (1 + t)
    assert p.is_zero() and p.terms == ()


def test_canonical_term_order():
    p = LaurentPoly(ZZ, 2, {(1, 0): 1, (0, 5): 2, (-1, 3): 4})
    assert [e for e, _ in p.terms] == [(-1, 3), (0, 5), (1, 0)]


def test_rank_mismatch():
    with pytest.raises(StructuralError):
        t + x


def test_domain_mismatch():
    with pytest.raises(StructuralError):
        t + LaurentPoly.monomial(QQ, (1,))


def test_associativity_against_naive_convolution():
    rng = random.Random(11)
    for _ in range(40):
        p, q, s = (rand_poly(rng, ZZ, 3) for _ in range(3))
        assert (p * q) * s == p * (q * s)
        assert p * q == naive_product(p, q)
        assert naive_product(naive_product(p, q), s) == (p * q) * s


def test_multiplication_has_no_zero_divisors():
    rng = random.Random(3)
    for dom in (ZZ, QQ, GF(2), GF(3)):
        for _ in range(30):
            p, q = rand_poly(rng, dom, 2), rand_poly(rng, dom, 2)
            if p and q:
                assert p * q


def test_negative_power_of_monomial():
    q2t = LaurentPoly.monomial(QQ, (1,), 2)
    assert q2t ** -1 == LaurentPoly(QQ, 1, {(-1,): Fraction(1, 2)})
    assert t ** -2 * t ** 2 == 1
    with pytest.raises(UndefinedError):
        (1 + t) ** -1


# --- exact division ----------------------------------------------------------

def test_exact_divide_examples():
    assert (1 - t ** 2).exact_divide(1 - t) == 1 + t
    p = 2 - 3 * t + 2 * t ** 2
    assert p.exact_divide(p) == 1


def test_exact_divide_multiply_back():
    rng = random.Random(5)
    for dom in (ZZ, QQ, GF(3)):
        for _ in range(40):
            p, q = rand_poly(rng, dom, 2), rand_poly(rng, dom, 2)
            if not q:
                continue
            d = (p * q).exact_divide(q)
            assert d == p
            assert d * q == p * q


@pytest.mark.parametrize("num, den", [
    (1 + t ** 2, 1 + t),
    (t, 2 * t),
    (1 + x, 1 + y),
    (x * y + 1, x + 1),
])
def test_inexact_division_raises(num, den):
    with pytest.raises(InexactDivisionError):
        num.exact_divide(den)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        t.exact_divide(LaurentPoly.zero(ZZ, 1))


# --- leading-term calculus ---------------------------------------------------

def test_leading_value_examples():
    xi = character(1, -1)
    assert (x + y).leading_value(xi) == 1
    assert LaurentPoly.constant(ZZ, 2, 5).leading_value(xi) == 0
    assert (x ** 2 * y).leading_value(xi) == 1


def test_leading_part_examples():
    assert (x + y).leading_part(character(1, -1)) == x
    assert (2 * x + 3 * y).leading_part(character(1, 1)) == 2 * x + 3 * y
    assert (1 + t).leading_part(character(0)) == 1 + t


def test_zero_has_no_leading_data():
    z = LaurentPoly.zero(ZZ, 1)
    with pytest.raises(UndefinedError):
        z.leading_value(character(1))
    with pytest.raises(UndefinedError):
        z.leading_part(character(1))


@pytest.mark.parametrize("dom, coeffs, xi, expected", [
    (ZZ, {0: 1, 1: 1}, 1, True),     # 1 + t: leading term t
    (ZZ, {0: 2, 1: 1}, -1, False),   # 2 + t: leading term 2 is not a unit of Z
    (QQ, {0: 2, 1: 1}, -1, True),    # 2 is a unit of Q
    (ZZ, {0: 1, 1: 1}, 0, False),    # zero character keeps both terms
])
def test_in_novikov_units_examples(dom, coeffs, xi, expected):
    assert poly(dom, 1, coeffs).in_novikov_units(character(xi)) is expected


def test_zero_is_never_a_unit():
    assert not LaurentPoly.zero(ZZ, 1).in_novikov_units(character(3))


def test_rational_character():
    p = x + y ** 2
    assert p.leading_part(character("1/2", "1/3")) == y ** 2
    assert p.leading_value(character("1/2", "1/3")) == Fraction(2, 3)


# --- properties --------------------------------------------------------------

exps = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polys = st.dictionaries(exps, st.integers(-2, 2), min_size=1, max_size=5)
chars = st.tuples(st.fractions(-4, 4, max_denominator=5), st.fractions(-4, 4, max_denominator=5))
domains = st.sampled_from([ZZ, QQ, GF(2), GF(3)])


@settings(max_examples=200, deadline=None)
@given(domains, polys, polys, chars)
def test_leading_part_is_multiplicative(dom, a, b, xi):
    p, q = LaurentPoly(dom, 2, a), LaurentPoly(dom, 2, b)
    if not p or not q:
        return
    assert (p * q).leading_part(xi) == p.leading_part(xi) * q.leading_part(xi)
    assert (p * q).leading_value(xi) == p.leading_value(xi) + q.leading_value(xi)


@settings(max_examples=200, deadline=None)
@given(domains, polys, polys, chars)
def test_units_closed_under_products(dom, a, b, xi):
    p, q = LaurentPoly(dom, 2, a), LaurentPoly(dom, 2, b)
    if p.in_novikov_units(xi) and q.in_novikov_units(xi):
        assert (p * q).in_novikov_units(xi)


@settings(max_examples=200, deadline=None)
@given(domains, polys, chars, st.fractions(min_value=Fraction(1, 7), max_value=9))
def test_positive_scaling_invariance(dom, a, xi, lam):
    p = LaurentPoly(dom, 2, a)
    if not p:
        return
    scaled = tuple(lam * c for c in xi)
    assert p.leading_part(scaled) == p.leading_part(xi)
    assert p.in_novikov_units(scaled) == p.in_novikov_units(xi)
