"""Invariant-factor decomposition of an explicitly enumerated finite abelian group."""

from .algebra import prime_factors
from .errors import BudgetExceeded

MAX_GROUP_ORDER = 10 ** 6


def group_pow(mul, identity, g, e):
    result = identity
    while e:
        if e & 1:
            result = mul(result, g)
        g = mul(g, g)
        e >>= 1
    return result


def _primary_basis(elements, mul, identity, ell, size):
    """Basis of the ell-Sylow subgroup, orders descending.

    Greedy: repeatedly take an element of maximal order modulo the span H
    built so far, then correct it by an element of H so that its order
    equals its order modulo H.  The correction exists because every basis
    element was itself chosen with maximal order in an earlier quotient.
    """
    sylow = [g for g in elements if group_pow(mul, identity, g, size) == identity]
    span = {identity: ()}
    basis = []
    while len(span) < len(sylow):
        best = None
        for x in sylow:
            if x in span:
                continue
            e, y = 0, x
            while y not in span:
                y = group_pow(mul, identity, y, ell)
                e += 1
            if best is None or e > best[1]:
                best = (x, e, y)
        x, e, y = best
        step = ell ** e
        b = x
        for (bi, oi), vi in zip(basis, span[y]):
            if vi % step:
                raise AssertionError("basis correction failed; group law inconsistent")
            b = mul(b, group_pow(mul, identity, bi, (-(vi // step)) % oi))
        grown = {}
        for h, c in span.items():
            cur = h
            for j in range(step):
                grown[cur] = c + (j,)
                cur = mul(cur, b)
        basis.append((b, step))
        span = grown
    return basis


def decompose(elements, mul, identity):
    """Invariant factors of a finite abelian group.

    ``elements`` lists the whole group (in a fixed order, which makes the
    output deterministic).  Returns ``(factors, generators, coords)`` with
    ``factors`` ascending, n_1 | n_2 | ..., ``generators[i]`` of exact order
    ``factors[i]`` and ``coords`` mapping every element to its exponent
    vector.  The product map is checked to be a bijection by enumeration.
    """
    n = len(elements)
    if n > MAX_GROUP_ORDER:
        raise BudgetExceeded(f"group order {n} exceeds {MAX_GROUP_ORDER}")
    primary = []
    for ell in prime_factors(n):
        a = 0
        while n % ell ** (a + 1) == 0:
            a += 1
        primary.append(_primary_basis(elements, mul, identity, ell, ell ** a))
    width = max((len(b) for b in primary), default=0)
    factors, gens = [], []
    for i in range(width):
        order, g = 1, identity
        for basis in primary:
            if i < len(basis):
                order *= basis[i][1]
                g = mul(g, basis[i][0])
        factors.append(order)
        gens.append(g)
    factors.reverse()
    gens.reverse()
    coords = {identity: ()}
    for g, order in zip(gens, factors):
        grown = {}
        for h, c in coords.items():
            cur = h
            for j in range(order):
                grown[cur] = c + (j,)
                cur = mul(cur, g)
        coords = grown
    if len(coords) != n or any(x not in coords for x in elements):
        raise AssertionError("generator map is not a bijection onto the group")
    for g, order in zip(gens, factors):
        if any(group_pow(mul, identity, g, order // ell) == identity for ell in prime_factors(order)):
            raise AssertionError("generator order is not exact")
    return tuple(factors), tuple(gens), coords
