import itertools
import math

from hypothesis import given, settings, strategies as st

from genjac.abelian import decompose


def _product_group(moduli):
    elements = list(itertools.product(*(range(n) for n in moduli)))

    def mul(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, moduli))

    return elements, mul, tuple(0 for _ in moduli)


def _canonical_invariants(moduli):
    # invariant factors via prime-power parts
    primes = {}
    for n in moduli:
        m, d = n, 2
        while m > 1:
            while m % d == 0:
                e = 0
                while m % d == 0:
                    m //= d
                    e += 1
                primes.setdefault(d, []).append(d ** e)
            d += 1
    width = max((len(v) for v in primes.values()), default=0)
    cols = [sorted(v, reverse=True) + [1] * (width - len(v)) for v in primes.values()]
    factors = [math.prod(c[i] for c in cols) for i in range(width)]
    return tuple(sorted(f for f in factors if f > 1))


def test_known_decompositions():
    assert decompose(*_product_group((2, 3)))[0] == (6,)
    assert decompose(*_product_group((3, 3)))[0] == (3, 3)
    assert decompose(*_product_group((4, 2, 6)))[0] == (2, 2, 12)
    assert decompose(*_product_group(()))[0] == ()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=3))
def test_invariant_factors_property(moduli):
    elements, mul, e = _product_group(moduli)
    factors, gens, coords = decompose(elements, mul, e)
    assert math.prod(factors) == len(elements)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
    assert factors == _canonical_invariants(moduli)
    # coordinates are additive
    for a in elements[:10]:
        for b in elements[:10]:
            ca, cb, cab = coords[a], coords[b], coords[mul(a, b)]
            assert cab == tuple((x + y) % n for x, y, n in zip(ca, cb, factors))
