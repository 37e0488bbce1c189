import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from novikov.conegeometry import (HalfSpace, IntegralCone, IntegralSubset, cone_is_empty, cone_point,
                                  contains_point, lattice_point, positive_cone, subset_complement,
                                  subset_difference, subset_equal, subset_intersect, subset_is_empty,
                                  subset_union)
from novikov.errors import StructuralError

from generators import random_cone, random_rational_point, random_subset


def H(*form, strict=True):
    return HalfSpace(tuple(form), strict)


def cone(*hs):
    return IntegralCone.make(len(hs[0].form) if hs else 1, hs)


def subset(*cones):
    return IntegralSubset.from_cones(cones[0].rank, cones, prune=False)


def grid(r, n=4):
    return itertools.product(range(-n, n + 1), repeat=r)


def grid_has_point(c, n=4):
    return any(c.contains(p) for p in grid(c.rank, n))


# --- membership and emptiness ------------------------------------------------

def test_contains_examples():
    U = IntegralSubset.half_space((1,), True)
    assert contains_point(U, (1,))
    assert not contains_point(U, (0,))
    origin = subset(cone(H(1, strict=False), H(-1, strict=False)))
    assert contains_point(origin, (0,))
    assert not contains_point(origin, (1,))


def test_contains_rejects_wrong_length():
    with pytest.raises(StructuralError):
        contains_point(IntegralSubset.whole(2), (1,))


def test_forms_are_gcd_normalized_with_sign_kept():
    assert H(4, -6).form == (2, -3)
    assert H(-2, 0).form == (-1, 0)


@pytest.mark.parametrize("c, empty", [
    (cone(H(1), H(-1)), True),
    (cone(H(1), H(1, strict=False)), False),
    (cone(H(1, 0), H(-1, 1, strict=False), H(0, -1, strict=False)), True),
    (cone(H(1, 0), H(-1, 1)), False),
    (cone(H(0, 0)), True),
    (cone(H(0, 0, strict=False)), False),
])
def test_cone_emptiness_examples(c, empty):
    assert cone_is_empty(c) is empty
    assert grid_has_point(c) is (not empty)


def test_emptiness_agrees_with_grid_and_every_elimination_order():
    rng = random.Random(7)
    for _ in range(300):
        r = rng.randint(1, 3)
        c = random_cone(rng, r, max_constraints=4)
        verdicts = {cone_is_empty(c, order) for order in itertools.permutations(range(r))}
        assert len(verdicts) == 1
        empty = verdicts.pop()
        if grid_has_point(c):
            assert not empty
        if empty:
            assert cone_point(c) is None
        else:
            for order in itertools.permutations(range(r)):
                p = cone_point(c, order)
                assert p is not None and all(isinstance(v, int) for v in p) and c.contains(p)


def test_chained_strict_implication_is_empty():
    # x > y > z > x
    c = cone(H(1, -1, 0), H(0, 1, -1), H(-1, 0, 1))
    assert cone_is_empty(c)
    c2 = cone(H(1, -1, 0), H(0, 1, -1, strict=False), H(-1, 0, 1, strict=False))
    assert cone_is_empty(c2)
    c3 = cone(H(1, -1, 0, strict=False), H(0, 1, -1, strict=False), H(-1, 0, 1, strict=False))
    assert not cone_is_empty(c3)


# --- set algebra -------------------------------------------------------------

def test_complement_examples():
    U = IntegralSubset.half_space((1,), True)
    assert subset_equal(subset_complement(U), IntegralSubset.half_space((-1,), False))
    assert subset_equal(subset_complement(IntegralSubset.empty(2)), IntegralSubset.whole(2))
    assert subset_is_empty(subset_complement(IntegralSubset.whole(3)))


def test_intersect_and_union_examples():
    pos = IntegralSubset.half_space((1,), True)
    neg = IntegralSubset.half_space((-1,), True)
    assert subset_is_empty(subset_intersect(pos, neg))
    assert subset_equal(subset_intersect(pos, IntegralSubset.whole(1)), pos)
    assert subset_equal(subset_union(pos, IntegralSubset.empty(1)), pos)
    assert subset_equal(subset_union(pos, IntegralSubset.half_space((-1,), False)), IntegralSubset.whole(1))


def test_operators_match_functions():
    rng = random.Random(2)
    U, V = random_subset(rng, 2), random_subset(rng, 2)
    assert (U | V) == subset_union(U, V)
    assert (U & V) == subset_intersect(U, V)
    assert (~U) == subset_complement(U)


def test_rank_mismatch_is_structural():
    with pytest.raises(StructuralError):
        subset_union(IntegralSubset.whole(1), IntegralSubset.whole(2))


def test_emptiness_of_union_of_empty_cones():
    U = subset(cone(H(1), H(-1)), cone(H(1), H(-1, strict=False)))
    assert subset_is_empty(U)
    assert lattice_point(U) is None


def test_set_algebra_matches_boolean_semantics():
    rng = random.Random(19)
    for _ in range(40):
        r = rng.randint(1, 3)
        U, V = random_subset(rng, r), random_subset(rng, r)
        comp, inter, union = subset_complement(U), subset_intersect(U, V), subset_union(U, V)
        diff, dbl = subset_difference(U, V), subset_complement(subset_complement(U))
        for _ in range(100):
            p = random_rational_point(rng, r)
            u, v = U.contains(p), V.contains(p)
            assert comp.contains(p) is (not u)
            assert inter.contains(p) is (u and v)
            assert union.contains(p) is (u or v)
            assert diff.contains(p) is (u and not v)
            assert dbl.contains(p) is u


def test_double_complement_is_semantically_equal():
    rng = random.Random(23)
    for _ in range(30):
        U = random_subset(rng, rng.randint(1, 3))
        assert subset_equal(subset_complement(subset_complement(U)), U)


def test_subset_equal_detects_difference():
    assert not subset_equal(IntegralSubset.half_space((1,), True), IntegralSubset.half_space((1,), False))


# --- lattice points ----------------------------------------------------------

def test_lattice_point_examples():
    U = subset(cone(H(1, 0), H(-1, 1)))
    p = lattice_point(U)
    assert p is not None and U.contains(p)
    assert lattice_point(IntegralSubset.whole(3)) is not None
    assert lattice_point(subset(cone(H(1), H(-1, strict=False)))) is None


def test_lattice_point_iff_nonempty():
    rng = random.Random(31)
    for _ in range(200):
        U = random_subset(rng, rng.randint(1, 4), max_constraints=4)
        p = lattice_point(U)
        assert (p is None) is subset_is_empty(U)
        if p is not None:
            assert all(isinstance(v, int) for v in p) and U.contains(p)


def test_positive_cone():
    P = positive_cone([(1, 0), (0, 1)])
    assert P.contains((1, 1)) and not P.contains((1, 0)) and not P.contains((-1, 5))
    with pytest.raises(StructuralError):
        positive_cone([])


def test_canonical_order_is_by_size_then_constraints():
    U = subset(cone(H(1, 0), H(0, 1)), cone(H(0, -1)), cone(H(-1, 0)))
    sizes = [len(c.constraints) for c in U.canonical().cones]
    assert sizes == sorted(sizes)
    assert U.canonical().cones[0].constraints < U.canonical().cones[1].constraints


# --- properties --------------------------------------------------------------

forms = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
cones_st = st.lists(st.tuples(forms, st.booleans()), max_size=4).map(
    lambda hs: IntegralCone.make(3, [HalfSpace(f, s) for f, s in hs]))
points = st.tuples(*[st.fractions(-5, 5, max_denominator=6)] * 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(cones_st, max_size=3), points, st.fractions(min_value=Fraction(1, 9), max_value=20))
def test_membership_is_homogeneous(cs, p, lam):
    U = IntegralSubset.from_cones(3, cs, prune=False)
    assert U.contains(p) == U.contains(tuple(lam * x for x in p))


@settings(max_examples=100, deadline=None)
@given(st.lists(cones_st, max_size=3), points)
def test_pruning_preserves_membership(cs, p):
    raw = IntegralSubset.from_cones(3, cs, prune=False)
    assert IntegralSubset.from_cones(3, cs).contains(p) == raw.contains(p)
