"""Generalized Jacobians of the projective line.

C = P^1 over F_q, base point at infinity, modulus m(x) a monic polynomial.
At level r the group J_m(F_{q^r}) is (F_{q^r}[x]/(m))^* / F_{q^r}^*; a class
is stored by its representative u(x) of degree < deg m whose lowest-degree
nonzero coefficient is 1.  The Abel-Jacobi map sends an affine point a to
the class of x - a and infinity to the identity; a closed point given by a
monic irreducible p(x) goes to the class of p.

Per-level data (the field F_{q^r}, the table of all residues mod m and the
sorted list of class codes) lives in :class:`Genus0Level`, built once per
(spec, r) and shared read-only.
"""

import functools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import abelian
from .algebra import (
    FieldElem, Poly, codes_to_digits, format_coeff, digits_to_codes, embedding, factor_coeffs, field,
    format_poly, irreducible_codes, pcompose_linear, pdivmod, pfrobenius, pinvmod, pmod,
    pmonic, pmul, poly_eval, poly_from_code, poly_sort_key, prime_factors, ptrim,
)
from .errors import (
    BudgetExceeded, HypothesisViolated, InvalidClass, InvalidInput, NoCanonicalMap,
    NotCoprime,
)

INF = "inf"
RESIDUE_BUDGET = 4 * 10 ** 6


@dataclass(frozen=True)
class CurveSpec:
    """A curve with modulus over F_q.

    ``modulus`` is the monic coefficient tuple of m(x) for genus0 specs.  The
    elliptic fields (``a``, ``b``, ``modulus_points``) are unused for genus 0.
    """

    p: int
    k: int
    kind: str
    modulus: tuple = ()
    basepoint: str = INF
    a: int = None
    b: int = None
    modulus_points: tuple = ()

    @property
    def field(self):
        return field(self.p, self.k)

    @property
    def q(self):
        return self.p ** self.k

    @property
    def degree(self):
        if self.kind == "elliptic":
            return len(self.modulus_points)
        return len(self.modulus) - 1

    @property
    def pi(self):
        """Arithmetic genus of U, i.e. dim J_m."""
        if self.kind == "genus0":
            return max(self.degree - 1, 0)
        return len(self.modulus_points)

    @functools.cached_property
    def factorization(self):
        unit, items = factor_coeffs(self.field, self.modulus)
        return tuple((Poly._raw(self.field, g), e) for g, e in items)

    def modulus_poly(self):
        return Poly._raw(self.field, self.modulus)

    def tag(self):
        if self.kind == "genus0":
            return f"genus0:q={self.q}:m={format_poly(self.field, self.modulus)}"
        pts = ";".join(f"({x},{y})" for x, y in self.modulus_points)
        return f"elliptic:q={self.q}:a={self.a}:b={self.b}:m={pts}"


def split_prime_power(q):
    ells = prime_factors(q)
    if len(ells) != 1:
        raise InvalidInput(f"q={q} is not a prime power")
    p = ells[0]
    k = round(math.log(q, p))
    while p ** k < q:
        k += 1
    if p ** k != q:
        raise InvalidInput(f"q={q} is not a prime power")
    return p, k


def genus0_spec(q, modulus, check_dimension=True):
    """Build a genus-0 spec; ``modulus`` is a Poly, coefficient tuple or text.

    Without ``check_dimension`` small moduli (deg m < 3) are allowed; they
    are needed as comparison targets but violate the dim J_m >= 2 hypothesis
    of the reconstruction theorem.
    """
    from .algebra import parse_poly

    p, k = split_prime_power(q)
    F = field(p, k)
    if isinstance(modulus, str):
        coeffs = parse_poly(modulus, F)
    elif isinstance(modulus, Poly):
        coeffs = modulus.coeffs
    else:
        coeffs = ptrim(FieldElem(F, c).value for c in modulus)
    if len(coeffs) < 2:
        raise InvalidInput("modulus must have degree >= 1")
    coeffs = pmonic(F, coeffs)
    if check_dimension and len(coeffs) - 1 < 3:
        raise HypothesisViolated(
            f"deg m = {len(coeffs) - 1} gives dim J_m = {len(coeffs) - 2} < 2; "
            "the reconstruction theorem needs dim J_m >= 2 (deg m >= 3)")
    return CurveSpec(p, k, "genus0", coeffs)


@dataclass(frozen=True)
class JmClass:
    """Element of J_m(F_{q^r}): normalized unit representative mod m."""

    r: int
    rep: tuple

    def __str__(self):
        return format_class(self.rep, self.r)


def format_class(rep, r=None, F=None):
    if not rep:
        return "0"
    terms = []
    for i, c in enumerate(rep):
        if not c:
            continue
        coef = format_coeff(F, c) if F is not None else str(c)
        if i == 0:
            terms.append(coef)
        else:
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{coef}*{mono}")
    return " + ".join(terms)


@dataclass(frozen=True)
class ClosedPoint:
    """Infinity (``poly is None``) or a monic irreducible over F_{q^r}."""

    r: int
    poly: tuple = None

    @property
    def degree(self):
        return 1 if self.poly is None else len(self.poly) - 1

    @property
    def is_infinity(self):
        return self.poly is None


@dataclass(frozen=True)
class EffectiveDivisor:
    """Multiset of closed points, stored as sorted (ClosedPoint, multiplicity) pairs."""

    terms: tuple = ()

    @property
    def degree(self):
        return sum(pt.degree * e for pt, e in self.terms)


@dataclass
class GroupStructure:
    """Invariant factors n_1 | ... | n_k with generators and coordinates."""

    factors: tuple
    generators: tuple
    exponent: int
    order: int
    coords: dict = dc_field(repr=False)
    elements: dict = dc_field(repr=False)
    coord_array: np.ndarray = dc_field(default=None, repr=False)

    def coordinates(self, element):
        return self.coords[element]


class Genus0Level:
    """J_m(F_{q^r}) for a genus-0 spec, with vectorized residue tables."""

    def __init__(self, spec, r):
        if spec.kind != "genus0":
            raise InvalidInput("genus0 level requires a genus0 spec")
        if r < 1:
            raise InvalidInput("level r must be >= 1")
        self.spec = spec
        self.r = r
        self.base = spec.field
        self.F = field(spec.p, spec.k * r)
        emb = embedding(self.base, self.F)
        self.m = tuple(emb[c] for c in spec.modulus)
        self.n = len(self.m) - 1
        self.Q = self.F.q
        self._xpow = {}

    # representatives ------------------------------------------------------
    def code(self, rep):
        code = 0
        for c in reversed(rep):
            code = code * self.Q + c
        return code

    def rep(self, code):
        out = []
        for _ in range(self.n):
            out.append(code % self.Q)
            code //= self.Q
        return ptrim(out)

    def normalize(self, rep):
        rep = pmod(self.F, ptrim(rep), self.m)
        lead = next((c for c in rep if c), 0)
        if lead == 0:
            raise InvalidClass("zero is not a unit")
        inv = self.F.inv(lead)
        return tuple(self.F.mul(c, inv) for c in rep)

    def is_unit(self, rep):
        g = rep
        h = self.m
        F = self.F
        while h:
            g, h = h, pmod(F, g, h)
        return len(g) == 1

    def make_class(self, rep):
        rep = pmod(self.F, ptrim(rep), self.m)
        if not rep or not self.is_unit(rep):
            raise InvalidClass(f"representative {rep} is not coprime to m")
        return JmClass(self.r, self.normalize(rep))

    def mul_codes(self, a, b):
        ra, rb = self.rep(a), self.rep(b)
        return self.code(self.normalize(pmod(self.F, pmul(self.F, ra, rb), self.m)))

    def inv_code(self, a):
        return self.code(self.normalize(pinvmod(self.F, self.rep(a), self.m)))

    @property
    def identity_code(self):
        return 1

    # residue tables -------------------------------------------------------
    def xpow(self, i):
        """Coefficient vector (length n) of x^i mod m."""
        if i not in self._xpow:
            v = pmod(self.F, (0,) * i + (1,), self.m)
            self._xpow[i] = tuple(v) + (0,) * (self.n - len(v))
        return self._xpow[i]

    def _normalize_digits(self, digits):
        F = self.F
        nz = digits != 0
        first = np.argmax(nz, axis=1)
        lead = digits[np.arange(len(digits)), first]
        lead = np.where(lead == 0, 1, lead)
        inv = F.vinv(lead)
        return F.vmul(digits, inv[:, None])

    @functools.cached_property
    def _tables(self):
        total = self.Q ** self.n
        if total > RESIDUE_BUDGET:
            raise BudgetExceeded(f"{total} residues mod m exceed budget {RESIDUE_BUDGET}")
        F = self.F
        digits = codes_to_digits(np.arange(total), self.Q, self.n)
        unit = np.ones(total, dtype=bool)
        _, factors = factor_coeffs(F, self.m)
        for g, _ in factors:
            dg = len(g) - 1
            acc = np.zeros((total, dg), dtype=np.int64)
            for t in range(self.n):
                red = pmod(F, (0,) * t + (1,), g)
                red = tuple(red) + (0,) * (dg - len(red))
                for s, c in enumerate(red):
                    if c:
                        acc[:, s] = F.vadd(acc[:, s], F.vmul(digits[:, t], c))
            unit &= np.any(acc != 0, axis=1)
        norm = digits_to_codes(self._normalize_digits(digits), self.Q)
        classes = np.unique(norm[unit])
        index = np.full(total, -1, dtype=np.int64)
        index[unit] = np.searchsorted(classes, norm[unit])
        return classes, index

    @property
    def classes(self):
        return self._tables[0]

    @property
    def class_index(self):
        return self._tables[1]

    @property
    def order(self):
        return len(self.classes)

    def index(self, cls):
        code = cls if isinstance(cls, (int, np.integer)) else self.code(cls.rep)
        return int(self.class_index[code])

    def class_at(self, i):
        return JmClass(self.r, self.rep(int(self.classes[i])))

    def reduce_monic(self, degree, codes):
        """Residue codes of the monic polynomials of ``degree`` with the given lower codes."""
        F = self.F
        codes = np.asarray(codes, dtype=np.int64)
        coeffs = codes_to_digits(codes, self.Q, degree)
        res = np.zeros((len(codes), self.n), dtype=np.int64)
        res += np.array(self.xpow(degree), dtype=np.int64)[None, :]
        for i in range(degree):
            vec = self.xpow(i)
            for t, c in enumerate(vec):
                if c:
                    term = coeffs[:, i] if c == 1 else F.vmul(coeffs[:, i], c)
                    res[:, t] = F.vadd(res[:, t], term)
        return digits_to_codes(res, self.Q)

    def monic_class_counts(self, degree, chunk=1 << 20):
        """Per class, the number of monic f of this degree coprime to m."""
        counts = np.zeros(self.order, dtype=np.int64)
        total = self.Q ** degree
        for start in range(0, total, chunk):
            codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
            idx = self.class_index[self.reduce_monic(degree, codes)]
            counts += np.bincount(idx[idx >= 0], minlength=self.order)
        return counts

    def irreducible_class_counts(self, degree):
        """Per class, the number of closed points of this degree on U (affine part)."""
        codes = irreducible_codes(self.F, degree)
        idx = self.class_index[self.reduce_monic(degree, codes)]
        return np.bincount(idx[idx >= 0], minlength=self.order)

    # points -----------------------------------------------------------------
    def point_class_code(self, a):
        if a == INF:
            return self.identity_code
        rep = pmod(self.F, (self.F.neg(a), 1), self.m)
        if not rep or not self.is_unit(rep):
            raise NotCoprime(f"point {a} lies in the support of m")
        return self.code(self.normalize(rep))

    @functools.cached_property
    def points(self):
        """[(point, class code)] for U(F_{q^r}): infinity first, then affine codes."""
        out = [(INF, self.identity_code)]
        for a in range(self.Q):
            if poly_eval(self.F, self.m, a) != 0:
                out.append((a, self.point_class_code(a)))
        return out

    @functools.cached_property
    def structure(self):
        elements = [int(c) for c in self.classes]
        factors, gens, coords = abelian.decompose(elements, self.mul_codes, self.identity_code)
        arr = np.array([coords[c] for c in elements], dtype=np.int64).reshape(len(elements),
                                                                              len(factors))
        exponent = factors[-1] if factors else 1
        return GroupStructure(
            factors=factors,
            generators=tuple(JmClass(self.r, self.rep(g)) for g in gens),
            exponent=exponent,
            order=len(elements),
            coords=coords,
            elements={v: k for k, v in coords.items()},
            coord_array=arr,
        )


@functools.lru_cache(maxsize=64)
def level(spec, r):
    return Genus0Level(spec, r)


# ---------------------------------------------------------------------------
# Group operations

def _check_level(a, r):
    if a.r != r:
        raise InvalidClass(f"class at level {a.r} used at level {r}")


def jm_mul(spec, r, a, b):
    _check_level(a, r)
    _check_level(b, r)
    L = level(spec, r)
    return L.make_class(pmul(L.F, a.rep, b.rep))


def jm_inv(spec, r, a):
    _check_level(a, r)
    L = level(spec, r)
    if not L.is_unit(a.rep):
        raise InvalidClass(f"representative {a.rep} is not coprime to m")
    return JmClass(r, L.normalize(pinvmod(L.F, a.rep, L.m)))


def jm_identity(spec, r):
    return JmClass(r, (1,))


def jm_pow(spec, r, a, e):
    if e < 0:
        a, e = jm_inv(spec, r, a), -e
    L = level(spec, r)
    result = (1,)
    base = a.rep
    while e:
        if e & 1:
            result = pmod(L.F, pmul(L.F, result, base), L.m)
        base = pmod(L.F, pmul(L.F, base, base), L.m)
        e >>= 1
    return L.make_class(result)


def jm_class(spec, r, rep):
    """Class of an arbitrary representative (Poly, tuple of codes)."""
    L = level(spec, r)
    if isinstance(rep, Poly):
        rep = rep.coeffs
    return L.make_class(ptrim(rep))


def class_of_point(spec, r, a):
    """Abel-Jacobi image of a point of U(F_{q^r}) (field code or INF)."""
    L = level(spec, r)
    if isinstance(a, FieldElem):
        a = a.value
    return JmClass(r, L.rep(L.point_class_code(a)))


def class_of_divisor(spec, r, D):
    """Class of D - deg(D)*inf for an effective divisor, a formal difference or a monic poly.

    Accepts an :class:`EffectiveDivisor`, a mapping ClosedPoint -> integer,
    a :class:`ClosedPoint`, or a monic polynomial (the affine divisor of its
    zeros).
    """
    L = level(spec, r)
    F = L.F
    if isinstance(D, ClosedPoint):
        D = {D: 1}
    elif isinstance(D, EffectiveDivisor):
        D = dict(D.terms)
    elif isinstance(D, (Poly, tuple)):
        coeffs = D.coeffs if isinstance(D, Poly) else ptrim(D)
        if not coeffs or coeffs[-1] != 1:
            raise InvalidInput("affine divisor must be given by a monic polynomial")
        rep = pmod(F, coeffs, L.m)
        if not rep or not L.is_unit(rep):
            raise NotCoprime("divisor meets the support of m")
        return JmClass(r, L.normalize(rep))
    num, den = (1,), (1,)
    for pt, e in D.items():
        if pt.r != r:
            raise InvalidInput(f"closed point of level {pt.r} at level {r}")
        if pt.is_infinity:
            continue
        rep = pmod(F, pt.poly, L.m)
        if not rep or not L.is_unit(rep):
            raise NotCoprime(f"closed point {pt.poly} meets the support of m")
        if e > 0:
            num = pmod(F, pmul(F, num, pmod(F, _poly_pow(F, rep, e, L.m), L.m)), L.m)
        elif e < 0:
            den = pmod(F, pmul(F, den, pmod(F, _poly_pow(F, rep, -e, L.m), L.m)), L.m)
    rep = pmod(F, pmul(F, num, pinvmod(F, den, L.m)), L.m)
    return JmClass(r, L.normalize(rep))


def _poly_pow(F, a, e, m):
    out = (1,)
    while e:
        if e & 1:
            out = pmod(F, pmul(F, out, a), m)
        a = pmod(F, pmul(F, a, a), m)
        e >>= 1
    return out


def group_structure(spec, r):
    return level(spec, r).structure


def order_formula(spec, r=1):
    """prod (Q^{d_i} - 1) Q^{d_i (e_i - 1)} / (Q - 1), Q = q^r, over the factorization of m at level r."""
    F = field(spec.p, spec.k * r)
    emb = embedding(spec.field, F)
    m = tuple(emb[c] for c in spec.modulus)
    Q = F.q
    _, items = factor_coeffs(F, m)
    total = 1
    for g, e in items:
        d = len(g) - 1
        total *= (Q ** d - 1) * Q ** (d * (e - 1))
    return total // (Q - 1)


def enumerate_order(spec, r=1):
    """#J_m(F_{q^r}) by brute force: count units mod m and divide by #F^*."""
    L = level(spec, r)
    F = L.F
    units = 0
    for code in range(L.Q ** L.n):
        rep = L.rep(code)
        if rep and L.is_unit(rep):
            units += 1
    return units // (F.q - 1)


def points_of_U(spec, r):
    """[(point, JmClass)] for U(F_{q^r}); point is INF or a field code."""
    L = level(spec, r)
    return [(a, JmClass(r, L.rep(code))) for a, code in L.points]


def modulus_divides(small, big):
    if small.p != big.p or small.k != big.k:
        return False
    return not pdivmod(small.field, big.modulus, small.modulus)[1]


def reduction_map(spec_mprime, spec_m, a):
    """Canonical surjection J_{m'} -> J_m (requires m | m')."""
    if spec_mprime.kind != "genus0" or spec_m.kind != "genus0":
        raise InvalidInput("reduction_map is defined for genus0 specs")
    if not modulus_divides(spec_m, spec_mprime):
        raise NoCanonicalMap(
            f"m = {format_poly(spec_m.field, spec_m.modulus)} does not divide "
            f"m' = {format_poly(spec_mprime.field, spec_mprime.modulus)}")
    Lp = level(spec_mprime, a.r)
    if not Lp.is_unit(a.rep):
        raise InvalidClass("class is not a unit modulo m'")
    return level(spec_m, a.r).make_class(a.rep)


def function_with_orders(spec, target):
    """Rational function (num, den) with prescribed orders at support points of m.

    ``target`` maps monic irreducible polynomials (Poly or tuple) dividing m
    to integers.  On P^1 the product of prime powers has exactly these orders
    and no other affine zeros or poles.
    """
    F = spec.field
    support = {g.coeffs for g, _ in spec.factorization}
    num, den = (1,), (1,)
    for g, e in target.items():
        coeffs = g.coeffs if isinstance(g, Poly) else ptrim(g)
        if coeffs not in support:
            raise InvalidInput(f"{format_poly(F, coeffs)} is not in the support of m")
        for _ in range(abs(e)):
            if e > 0:
                num = pmul(F, num, coeffs)
            else:
                den = pmul(F, den, coeffs)
    return Poly._raw(F, num), Poly._raw(F, den)


def orders_of(spec, f):
    """Divisor of a polynomial restricted to the support of m: {irreducible: order}."""
    F = spec.field
    coeffs = f.coeffs if isinstance(f, Poly) else f
    _, items = factor_coeffs(F, coeffs)
    support = {g.coeffs for g, _ in spec.factorization}
    return {g: e for g, e in items if g in support}


def automorphisms_fixing_data(spec):
    """Affine maps x -> u x + v over F_q with m(u x + v) proportional to m.

    Returned as 2x2 matrices ((u, v), (0, 1)); they fix infinity, so they
    are exactly the automorphisms of (P^1, m, infinity).
    """
    F = spec.field
    m = spec.modulus
    out = []
    for u in range(1, F.q):
        for v in range(F.q):
            if pmonic(F, pcompose_linear(F, m, u, v)) == m:
                out.append(((u, v), (0, 1)))
    return sorted(out)


def apply_affine(F, alpha, a):
    (u, v), _ = alpha
    if a == INF:
        return INF
    return F.add(F.mul(u, a), v)


def pushforward_class(L_src, L_dst, alpha, rep, frobenius=0):
    """Image of a class under the Frobenius twist followed by x -> u x + v.

    A representative u(x) is first twisted coefficientwise (p^l power), then
    transported along alpha: the point a goes to u a + v, so the polynomial
    f(x) goes to f((x - v)/u).
    """
    F = L_dst.F
    (u, v), _ = alpha
    rep = pfrobenius(F, rep, frobenius)
    uinv = F.inv(u)
    moved = pcompose_linear(F, rep, uinv, F.neg(F.mul(v, uinv)))
    return L_dst.normalize(pmod(F, moved, L_dst.m))


def twist_modulus(spec, l):
    """Coefficientwise p^l-power of the modulus."""
    return pfrobenius(spec.field, spec.modulus, l)


def enumerate_closed_points(spec, r, max_degree):
    """Closed points of U over F_{q^r} of degree <= max_degree, infinity first."""
    L = level(spec, r)
    out = [ClosedPoint(r, None)]
    for d in range(1, max_degree + 1):
        for code in irreducible_codes(L.F, d):
            g = poly_from_code(L.F, int(code), d)
            if pmod(L.F, L.m, g):
                out.append(ClosedPoint(r, g))
    return out


def sort_points(F, pts):
    return sorted(pts, key=lambda pt: (-1, 0) if pt.is_infinity else poly_sort_key(F, pt.poly))
