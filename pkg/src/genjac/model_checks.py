"""Finite-level checks on how U sits inside J_m.

* how often a translate of j(U) meets j(U) again (stabilizer counts),
* how many classes have a unique effective divisor of degree pi = dim J_m,
* how many steps of +-j(U) it takes to reach the whole group,
* fixed points of automorphisms of (P^1, m, infinity) on U.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded
from .genus0 import INF, apply_affine, automorphisms_fixing_data, level

MAX_ORDER = 10 ** 6


def _level(spec, r):
    L = level(spec, r)
    if L.Q ** L.n > MAX_ORDER * L.Q:
        raise BudgetExceeded(f"J_m(F_{L.Q}) is too large to enumerate")
    return L


@dataclass
class StabReport:
    r: int
    counts: dict
    identity_count: int
    maximum: int
    bound: int
    within_bound: bool = dc_field(init=False)

    def __post_init__(self):
        self.within_bound = self.maximum <= self.bound


def stab_counts(spec, r):
    """For every class a != 1: #{u in U(F_{q^r}) : j(u) * a in j(U)}.

    Every pair of points (u, w) contributes to exactly one a = j(w) / j(u),
    so the table is a tally of quotients.
    """
    L = _level(spec, r)
    pts = [code for _, code in L.points]
    inverses = [L.inv_code(c) for c in pts]
    counts = {int(c): 0 for c in L.classes if int(c) != 1}
    for w in pts:
        for u_inv in inverses:
            a = L.mul_codes(w, u_inv)
            if a != 1:
                counts[a] += 1
    maximum = max(counts.values(), default=0)
    return StabReport(r, counts, len(pts), maximum, spec.degree + 2)


def divisor_counts_by_class(spec, r, d):
    """N_d(E) for every class: divisors k * inf + div(f), deg f = d - k."""
    L = _level(spec, r)
    total = np.zeros(L.order, dtype=np.int64)
    total[L.index(1)] += 1
    for j in range(1, d + 1):
        total += L.monic_class_counts(j)
    return total


def unique_sum_fraction(spec, r):
    """Fraction of classes with exactly one effective divisor of degree pi on U."""
    counts = divisor_counts_by_class(spec, r, spec.pi)
    return Fraction(int(np.count_nonzero(counts == 1)), len(counts))


def generation_cover(spec, r):
    """Least t such that t-fold products from j(U) and its inverses cover J_m(F_{q^r})."""
    L = _level(spec, r)
    step = set()
    for _, code in L.points:
        step.add(code)
        step.add(L.inv_code(code))
    step = sorted(step)
    reached = {1}
    frontier = {1}
    t = 0
    while len(reached) < L.order:
        t += 1
        nxt = set()
        for g in frontier:
            for s in step:
                h = L.mul_codes(g, s)
                if h not in reached:
                    nxt.add(h)
        if not nxt:
            raise AssertionError("points do not generate the group")
        reached |= nxt
        frontier = nxt
    return t


@dataclass
class FixedPointReport:
    r: int
    identity_count: int
    counts: dict

    @property
    def maximum(self):
        return max(self.counts.values(), default=0)


def fixed_point_counts(spec, r):
    """Fixed points on U(F_{q^r}) of each non-identity automorphism of (P^1, m, infinity)."""
    L = level(spec, r)
    from .algebra import embedding

    emb = embedding(spec.field, L.F)
    pts = [a for a, _ in L.points]
    counts = {}
    for alpha in automorphisms_fixing_data(spec):
        if alpha == ((1, 0), (0, 1)):
            continue
        (u, v), row = alpha
        lifted = ((emb[u], emb[v]), row)
        counts[alpha] = sum(1 for a in pts if apply_affine(L.F, lifted, a) == a)
    return FixedPointReport(r, len(pts), counts)


def infinity_fixed(alpha):
    """Affine automorphisms always fix the base point."""
    return apply_affine(None, alpha, INF) == INF
