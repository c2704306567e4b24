import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from genjac.algebra import Poly, field, ptrim
from genjac.errors import (
    HypothesisViolated, InvalidClass, InvalidInput, NoCanonicalMap, NotCoprime,
)
from genjac.genus0 import (
    INF, ClosedPoint, EffectiveDivisor, JmClass, automorphisms_fixing_data, class_of_divisor,
    class_of_point, enumerate_order, function_with_orders, genus0_spec, group_structure,
    jm_class, jm_identity, jm_inv, jm_mul, jm_pow, level, order_formula, orders_of, points_of_U,
    reduction_map,
)

REFERENCE = [(3, "x^3"), (3, "x*(x^2+1)"), (2, "x^3")]


def spec(q, m, check=True):
    return genus0_spec(q, m, check_dimension=check)


def test_spec_dimension_check():
    s = spec(3, "x^3")
    assert s.pi == 2 and s.degree == 3
    with pytest.raises(HypothesisViolated):
        genus0_spec(3, "x^2")
    assert spec(3, "x^2", False).pi == 1
    with pytest.raises(InvalidInput):
        genus0_spec(6, "x^3")


def test_mul_inv_examples():
    s = spec(3, "x^3")
    a = JmClass(1, (1, 1))
    assert jm_mul(s, 1, a, a) == JmClass(1, (1, 2, 1))
    assert jm_inv(s, 1, a) == JmClass(1, (1, 2, 1))
    assert jm_mul(s, 1, a, jm_identity(s, 1)) == a
    with pytest.raises(InvalidClass):
        jm_mul(s, 1, JmClass(1, (0, 1)), a)


def test_class_of_divisor_examples():
    s = spec(3, "x^3")
    assert class_of_divisor(s, 1, ClosedPoint(1, (2, 1))) == JmClass(1, (1, 2))  # point x = 1
    assert class_of_divisor(s, 1, ClosedPoint(1, (1, 1))) == JmClass(1, (1, 1))  # point x = 2
    assert class_of_divisor(s, 1, ClosedPoint(1, None)) == jm_identity(s, 1)
    with pytest.raises(NotCoprime):
        class_of_divisor(s, 1, ClosedPoint(1, (0, 1)))


def test_class_of_divisor_formal_difference():
    s = spec(3, "x^3")
    p1, p2 = ClosedPoint(1, (2, 1)), ClosedPoint(1, (1, 1))
    diff = class_of_divisor(s, 1, {p1: 1, p2: -1})
    assert jm_mul(s, 1, diff, class_of_divisor(s, 1, p2)) == class_of_divisor(s, 1, p1)


@pytest.mark.parametrize("q,m,order,factors", [
    (3, "x^3", 9, (3, 3)),
    (3, "x*(x^2+1)", 8, (8,)),
    (2, "x^3", 4, (4,)),
])
def test_group_structure_examples(q, m, order, factors):
    st_ = group_structure(spec(q, m), 1)
    assert st_.order == order and st_.factors == factors
    s = spec(q, m)
    for g, n in zip(st_.generators, st_.factors):
        assert jm_pow(s, 1, g, n) == jm_identity(s, 1)
        for ell in (2, 3, 5, 7):
            if n % ell == 0:
                assert jm_pow(s, 1, g, n // ell) != jm_identity(s, 1)


def test_order_formula_examples():
    assert order_formula(spec(3, "x^3"), 1) == 9
    assert order_formula(spec(3, "x", False), 1) == 1
    assert order_formula(spec(3, "x^2", False), 2) == 9
    assert enumerate_order(spec(3, "x^2", False), 2) == 9


def test_order_formula_uses_level_factorization():
    # x^2 + 1 splits over F_9, so the level-2 count is (9-1)^3 / 8 = 64
    s = spec(3, "x*(x^2+1)")
    assert order_formula(s, 2) == 64 == level(s, 2).order


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.lists(st.integers(0, 100), min_size=1, max_size=3),
       st.integers(1, 2))
def test_order_formula_matches_enumeration(q, lower, r):
    F = field(*{2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}[q])
    m = tuple(c % F.q for c in lower) + (1,)
    s = genus0_spec(q, m, check_dimension=False)
    if F.q ** (r * s.degree) > 10 ** 5:
        return
    assert order_formula(s, r) == enumerate_order(s, r) == level(s, r).order


def test_points_examples():
    s = spec(3, "x^3")
    pts = points_of_U(s, 1)
    assert [(a, c.rep) for a, c in pts] == [(INF, (1,)), (1, (1, 2)), (2, (1, 1))]
    assert len(points_of_U(s, 2)) == 9
    assert [a for a, _ in points_of_U(spec(3, "x*(x^2+1)"), 1)] == [INF, 1, 2]


@pytest.mark.parametrize("q,m", REFERENCE)
def test_abel_jacobi_injective(q, m):
    s = spec(q, m)
    for r in range(1, 5):
        if (q ** r) ** s.degree > 10 ** 6:
            break
        classes = [c for _, c in points_of_U(s, r)]
        assert len(set(classes)) == len(classes)


def test_reduction_map_examples():
    big, small = spec(3, "x^3"), spec(3, "x^2", False)
    assert reduction_map(big, small, JmClass(1, (1, 1, 1))) == JmClass(1, (1, 1))
    a = class_of_point(big, 1, 2)
    assert reduction_map(big, big, a) == a
    assert reduction_map(big, small, a) == class_of_point(small, 1, 2) == JmClass(1, (1, 1))
    with pytest.raises(NoCanonicalMap):
        reduction_map(small, big, JmClass(1, (1, 1)))


def test_reduction_map_is_surjective_homomorphism():
    big, small = spec(3, "x^3"), spec(3, "x^2", False)
    L = level(big, 1)
    classes = [L.class_at(i) for i in range(L.order)]
    images = [reduction_map(big, small, c) for c in classes]
    assert len(set(images)) == level(small, 1).order
    kernel = [c for c, img in zip(classes, images) if img == jm_identity(small, 1)]
    assert len(kernel) == L.order // level(small, 1).order == 3
    rng = random.Random(0)
    for _ in range(30):
        a, b = rng.choice(classes), rng.choice(classes)
        assert reduction_map(big, small, jm_mul(big, 1, a, b)) == jm_mul(
            small, 1, reduction_map(big, small, a), reduction_map(big, small, b))


def test_function_with_orders():
    s = spec(3, "x^3")
    num, den = function_with_orders(s, {(0, 1): 3})
    assert num.coeffs == (0, 0, 0, 1) and den.coeffs == (1,)
    s2 = spec(3, "(x+1)^2*x")
    num, _ = function_with_orders(s2, {(1, 1): 2})
    assert num.coeffs == (1, 2, 1)
    s3 = spec(3, "x*(x^2+1)")
    num, _ = function_with_orders(s3, {(0, 1): 1, (1, 0, 1): 1})
    assert num.coeffs == (0, 1, 0, 1)
    assert orders_of(s3, num) == {(0, 1): 1, (1, 0, 1): 1}
    with pytest.raises(InvalidInput):
        function_with_orders(s3, {(1, 1): 1})


def test_automorphisms():
    assert automorphisms_fixing_data(spec(3, "x^3")) == [((1, 0), (0, 1)), ((2, 0), (0, 1))]
    assert len(automorphisms_fixing_data(spec(3, "x*(x+1)*(x+2)"))) == 6
    assert automorphisms_fixing_data(spec(2, "x^3")) == [((1, 0), (0, 1))]


@pytest.mark.parametrize("q,m", REFERENCE)
def test_group_axioms(q, m):
    s = spec(q, m)
    for r in (1, 2):
        L = level(s, r)
        classes = [L.class_at(i) for i in range(L.order)]
        rng = random.Random(r)
        for _ in range(40):
            a, b, c = (rng.choice(classes) for _ in range(3))
            assert jm_mul(s, r, jm_mul(s, r, a, b), c) == jm_mul(s, r, a, jm_mul(s, r, b, c))
            assert jm_mul(s, r, a, b) == jm_mul(s, r, b, a)
            assert jm_mul(s, r, a, jm_inv(s, r, a)) == jm_identity(s, r)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([(1, 1), (2, 1), (1, 0, 1), (2, 1, 1), (2, 2, 1)]), max_size=4),
       st.lists(st.sampled_from([(1, 1), (2, 1), (1, 0, 1), (2, 1, 1), (2, 2, 1)]), max_size=4))
def test_class_of_divisor_multiplicative(d1, d2):
    s = spec(3, "x^3")

    def divisor(polys):
        terms = {}
        for p in polys:
            pt = ClosedPoint(1, p)
            terms[pt] = terms.get(pt, 0) + 1
        return terms

    D1, D2 = divisor(d1), divisor(d2)
    both = dict(D1)
    for k, v in D2.items():
        both[k] = both.get(k, 0) + v
    lhs = class_of_divisor(s, 1, EffectiveDivisor(tuple(both.items())))
    rhs = jm_mul(s, 1, class_of_divisor(s, 1, D1), class_of_divisor(s, 1, D2))
    assert lhs == rhs
    # same class from the product polynomial
    F = field(3)
    prod = Poly(F, (1,))
    for p in list(d1) + list(d2):
        prod = prod * Poly(F, p)
    assert class_of_divisor(s, 1, prod) == lhs


def test_normalization_is_canonical():
    s = spec(3, "x^3")
    for u in itertools.product(range(3), repeat=3):
        rep = ptrim(u)
        if not rep or rep[0] == 0:
            continue
        c = jm_class(s, 1, rep)
        assert next(x for x in c.rep if x) == 1
        assert jm_class(s, 1, tuple((2 * x) % 3 for x in rep)) == c
