"""Generalized Jacobians of elliptic curves with a reduced rational modulus.

For E: y^2 = x^3 + a x + b and m = S_1 + ... + S_s (distinct rational
points, none equal to O) a class of Div^0(U)/P_m is stored as (P, t): P is
its image in E and t lists the values at S_1..S_s of the function f with
D = D_P + div(f), taken modulo constants and scaled so that t_1 = 1.

The reference divisor D_P is (P) - (O) unless P lies in Supp(m).  In that
case it is (P) - (O) - div(phi_P), where phi_P is a fixed F_q-rational line
through P whose other zeros avoid the modulus.  Products then pick up the
cocycle h(S) from the Miller function g_{P,Q} and the phi corrections, all
evaluated through local power series so that zeros and poles that cancel
are handled exactly.
"""

import functools
import random
from dataclasses import dataclass

import numpy as np

from . import abelian
from .algebra import FieldElem, embedding, field, format_coeff
from .errors import EvaluationAtSupport, InvalidCurve, InvalidInput, NotCoprime
from .genus0 import CurveSpec, GroupStructure, split_prime_power

O = None  # the point at infinity
SERIES_TERMS = 6
REFERENCE_MODULUS = ((0, 0), (2, 0))  # on y^2 = x^3 + x over F_5


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a x + b over ``F``; coefficients are field codes."""

    F: object
    a: int
    b: int

    def __post_init__(self):
        F = self.F
        if F.p <= 3:
            raise InvalidCurve("short Weierstrass form needs characteristic > 3")
        disc = F.add(F.mul(4, F.pow(self.a, 3)), F.mul(27 % F.p, F.mul(self.b, self.b)))
        if disc == 0:
            raise InvalidCurve("singular curve: 4a^3 + 27b^2 = 0")

    def rhs(self, x):
        F = self.F
        return F.add(F.add(F.pow(x, 3), F.mul(self.a, x)), self.b)

    def contains(self, P):
        if P is O:
            return True
        x, y = P
        return self.F.mul(y, y) == self.rhs(x)

    def over(self, ext):
        """The same curve with coefficients embedded in ``ext``."""
        emb = embedding(self.F, ext)
        return WeierstrassCurve(ext, emb[self.a], emb[self.b])

    def neg(self, P):
        if P is O:
            return O
        return (P[0], self.F.neg(P[1]))

    def slope(self, P, Q):
        """Slope of the chord (tangent if P == Q); None for a vertical line."""
        F = self.F
        (x1, y1), (x2, y2) = P, Q
        if x1 != x2:
            return F.div(F.sub(y2, y1), F.sub(x2, x1))
        if y1 != y2 or y1 == 0:
            return None
        return F.div(F.add(F.mul(3, F.mul(x1, x1)), self.a), F.mul(2, y1))

    def add(self, P, Q):
        if P is O:
            return Q
        if Q is O:
            return P
        lam = self.slope(P, Q)
        if lam is None:
            return O
        F = self.F
        x3 = F.sub(F.sub(F.mul(lam, lam), P[0]), Q[0])
        y3 = F.sub(F.mul(lam, F.sub(P[0], x3)), P[1])
        return (x3, y3)

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = O
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    @functools.cached_property
    def points(self):
        F = self.F
        roots = {}
        for y in F.elements():
            roots.setdefault(F.mul(y, y), []).append(y)
        pts = [O]
        for x in F.elements():
            pts.extend((x, y) for y in sorted(roots.get(self.rhs(x), ())))
        return pts


def ec_points(curve, r=1):
    """All points of E(F_{q^r}), O first."""
    if r == 1:
        return list(curve.points)
    return list(curve.over(field(curve.F.p, curve.F.k * r)).points)


# ---------------------------------------------------------------------------
# functions c0 + c1 x + c2 y and their local behaviour

def _smul(F, u, v, n):
    out = [0] * n
    for i, a in enumerate(u[:n]):
        if a:
            for j in range(n - i):
                if v[j]:
                    out[i + j] = F.add(out[i + j], F.mul(a, v[j]))
    return out


class LocalExpansion:
    """x and y as power series in a uniformizer at an affine point."""

    def __init__(self, curve, S, terms=SERIES_TERMS):
        F = curve.F
        x0, y0 = S
        n = terms
        if y0 != 0:
            # t = x - x0; solve y^2 = f(x0 + t) term by term
            f = [curve.rhs(x0), F.add(F.mul(3, F.mul(x0, x0)), curve.a), F.mul(3, x0), 1] + [0] * n
            y = [y0] + [0] * (n - 1)
            inv2y = F.inv(F.mul(2, y0))
            for k in range(1, n):
                acc = f[k]
                for i in range(1, k):
                    acc = F.sub(acc, F.mul(y[i], y[k - i]))
                y[k] = F.mul(acc, inv2y)
            x = [x0, 1] + [0] * (n - 2)
        else:
            # t = y; solve c1 u + c2 u^2 + u^3 = t^2 for u = x - x0
            c1 = F.add(F.mul(3, F.mul(x0, x0)), curve.a)
            c2 = F.mul(3, x0)
            inv = F.inv(c1)
            t2 = [0, 0, 1] + [0] * (n - 3)
            u = [0] * n
            for _ in range(n):
                u2 = _smul(F, u, u, n)
                u3 = _smul(F, u2, u, n)
                u = [F.mul(F.sub(F.sub(t2[i], F.mul(c2, u2[i])), u3[i]), inv) for i in range(n)]
            x = [F.add(x0, u[0])] + u[1:]
            y = [0, 1] + [0] * (n - 2)
        self.F, self.x, self.y, self.n = F, x, y, n
        self._xpow = [[1] + [0] * (n - 1), x]

    def xpow(self, i):
        while len(self._xpow) <= i:
            self._xpow.append(_smul(self.F, self._xpow[-1], self.x, self.n))
        return self._xpow[i]

    def series(self, func):
        """Series of sum c_{ij} x^i y^j (j in {0, 1}) given as {(i, j): c}."""
        F, n = self.F, self.n
        out = [0] * n
        for (i, j), c in func.items():
            if not c:
                continue
            s = self.xpow(i)
            if j:
                s = _smul(F, s, self.y, n)
            out = [F.add(o, F.mul(c, v)) for o, v in zip(out, s)]
        return out

    def order_lead(self, func):
        s = self.series(func)
        for k, c in enumerate(s):
            if c:
                return k, c
        raise EvaluationAtSupport("function vanishes beyond the series precision")


def linear_form(c0, c1, c2):
    return {(0, 0): c0, (1, 0): c1, (0, 1): c2}


def miller_factors(curve, P, Q):
    """Linear forms (numerator, denominator) of g_{P,Q}.

    div g_{P,Q} = (P) + (Q) - (P+Q) - (O), normalized so that g_{P,O} = 1.
    """
    F = curve.F
    if P is O or Q is O:
        return [], []
    if curve.add(P, Q) is O:
        return [linear_form(F.neg(P[0]), 1, 0)], []
    lam = curve.slope(P, Q)
    R = curve.add(P, Q)
    # y - y_P - lam (x - x_P) over x - x_R
    line = linear_form(F.sub(F.mul(lam, P[0]), P[1]), F.neg(lam), 1)
    vert = linear_form(F.neg(R[0]), 1, 0)
    return [line], [vert]


def _evaluate(expansion, num, den):
    F = expansion.F
    order, value = 0, 1
    for f in num:
        k, c = expansion.order_lead(f)
        order, value = order + k, F.mul(value, c)
    for f in den:
        k, c = expansion.order_lead(f)
        order, value = order - k, F.div(value, c)
    if order:
        raise EvaluationAtSupport(f"function has order {order} at the evaluation point")
    return value


def miller_line_eval(curve, P, Q, at):
    """Value of g_{P,Q} at the affine point ``at``."""
    if at is O:
        raise InvalidInput("evaluation point must be affine")
    if not curve.contains(at):
        raise InvalidInput(f"{at} is not on the curve")
    num, den = miller_factors(curve, P, Q)
    return _evaluate(LocalExpansion(curve, at), num, den)


# ---------------------------------------------------------------------------
# specs and levels

def elliptic_spec(q, a, b, modulus_points):
    p, k = split_prime_power(q)
    F = field(p, k)
    a, b = FieldElem(F, a).value, FieldElem(F, b).value
    curve = WeierstrassCurve(F, a, b)
    pts = tuple(tuple(FieldElem(F, c).value for c in pt) for pt in modulus_points)
    if len(pts) < 2:
        raise InvalidInput("the modulus needs at least two points")
    if len(set(pts)) != len(pts):
        raise InvalidInput("modulus points must be distinct")
    for pt in pts:
        if len(pt) != 2 or not curve.contains(pt):
            raise InvalidInput(f"modulus point {pt} is not on the curve")
    return CurveSpec(p, k, "elliptic", a=a, b=b, modulus_points=pts)


def curve_of(spec):
    return WeierstrassCurve(spec.field, spec.a, spec.b)


@functools.lru_cache(maxsize=None)
def correction_lines(spec):
    """phi_S for each modulus point S: a rational line with a simple zero at S
    and no zero at the other modulus points."""
    curve = curve_of(spec)
    F = curve.F
    expansions = [LocalExpansion(curve, S) for S in spec.modulus_points]
    out = []
    for S in spec.modulus_points:
        x0, y0 = S
        candidates = [linear_form(F.sub(F.mul(mu, x0), y0), F.neg(mu), 1) for mu in F.elements()]
        candidates.append(linear_form(F.neg(x0), 1, 0))
        for phi in candidates:
            orders = [e.order_lead(phi)[0] for e in expansions]
            if orders == [int(T == S) for T in spec.modulus_points]:
                out.append(phi)
                break
        else:
            raise InvalidInput(f"no rational line separates {S} from the rest of the modulus")
    return tuple(out)


@dataclass(frozen=True)
class RayClass:
    """Element of J_m(F_{q^r}) for an elliptic spec; t[0] == 1."""

    r: int
    P: object
    t: tuple


class RayLevel:
    """J_m(F_{q^r}) with the cocycle group law."""

    def __init__(self, spec, r):
        if spec.kind != "elliptic":
            raise InvalidInput("ray_level requires an elliptic spec")
        if r < 1:
            raise InvalidInput("level r must be >= 1")
        self.spec, self.r = spec, r
        base = curve_of(spec)
        self.F = field(spec.p, spec.k * r)
        self.Q = self.F.q
        self.curve = base.over(self.F)
        emb = embedding(base.F, self.F)
        self.support = tuple((emb[x], emb[y]) for x, y in spec.modulus_points)
        self.phi = {S: {mono: emb[c] for mono, c in f.items()}
                    for S, f in zip(self.support, correction_lines(spec))}
        self.expansions = [LocalExpansion(self.curve, S) for S in self.support]
        self._cocycle = {}

    @property
    def s(self):
        return len(self.support)

    def normalize(self, t):
        F = self.F
        inv = F.inv(t[0])
        return tuple(F.mul(c, inv) for c in t)

    def identity(self):
        return RayClass(self.r, O, (1,) * self.s)

    def cocycle(self, P, Q):
        """h_{P,Q}(S_i) with D_P + D_Q = D_{P+Q} + div h_{P,Q}."""
        key = (P, Q)
        if key in self._cocycle:
            return self._cocycle[key]
        num, den = miller_factors(self.curve, P, Q)
        num, den = list(num), list(den)
        if P in self.phi:
            den.append(self.phi[P])
        if Q in self.phi:
            den.append(self.phi[Q])
        R = self.curve.add(P, Q)
        if R in self.phi:
            num.append(self.phi[R])
        value = tuple(_evaluate(e, num, den) for e in self.expansions)
        self._cocycle[key] = value
        return value

    def mul(self, A, B):
        F = self.F
        h = self.cocycle(A.P, B.P)
        t = tuple(F.mul(F.mul(a, b), c) for a, b, c in zip(A.t, B.t, h))
        return RayClass(self.r, self.curve.add(A.P, B.P), self.normalize(t))

    def inv(self, A):
        F = self.F
        negP = self.curve.neg(A.P)
        h = self.cocycle(A.P, negP)
        t = tuple(F.inv(F.mul(a, c)) for a, c in zip(A.t, h))
        return RayClass(self.r, negP, self.normalize(t))

    def pow(self, A, e):
        if e < 0:
            A, e = self.inv(A), -e
        return abelian.group_pow(self.mul, self.identity(), A, e)

    def abel_jacobi(self, u):
        if u in self.support:
            raise NotCoprime(f"{u} lies in the support of the modulus")
        if not self.curve.contains(u):
            raise InvalidInput(f"{u} is not on the curve")
        return RayClass(self.r, u, (1,) * self.s)

    def forget(self, A):
        """The surjection to E = J_0: drop the torus part."""
        return A.P

    @functools.cached_property
    def elements(self):
        units = list(range(1, self.Q))
        tails = [()]
        for _ in range(self.s - 1):
            tails = [t + (u,) for t in tails for u in units]
        return [RayClass(self.r, P, (1,) + tail) for P in self.curve.points for tail in tails]

    @property
    def order(self):
        return len(self.elements)

    @functools.cached_property
    def structure(self):
        elements = self.elements
        factors, gens, coords = abelian.decompose(elements, self.mul, self.identity())
        arr = np.array([coords[c] for c in elements], dtype=np.int64).reshape(len(elements), len(factors))
        return GroupStructure(
            factors=factors, generators=tuple(gens), exponent=factors[-1] if factors else 1,
            order=len(elements), coords=coords, elements={v: k for k, v in coords.items()},
            coord_array=arr,
        )

    def points_of_U(self):
        return [u for u in self.curve.points if u not in self.support]


@functools.lru_cache(maxsize=16)
def ray_level(spec, r):
    return RayLevel(spec, r)


def rayclass_mul(spec, A, B):
    if A.r != B.r:
        raise InvalidInput("classes from different levels")
    return ray_level(spec, A.r).mul(A, B)


def ec_abel_jacobi(spec, u, r=1):
    """Class of (u) - (O)."""
    return ray_level(spec, r).abel_jacobi(u)


def closed_point_class(spec, r, P, d=1):
    """Class of (sum of the conjugates of P) - d(O), P defined over F_{q^{rd}}."""
    if P is O:
        return ray_level(spec, r).identity()
    big = ray_level(spec, r * d)
    acc = big.identity()
    step = spec.k * r
    Q = P
    for _ in range(d):
        acc = big.mul(acc, big.abel_jacobi(Q))
        Q = (big.F.frobenius(Q[0], step), big.F.frobenius(Q[1], step))
    if d == 1:
        return acc
    small = ray_level(spec, r)
    back = {v: i for i, v in enumerate(embedding(small.F, big.F))}
    try:
        point = acc.P if acc.P is O else (back[acc.P[0]], back[acc.P[1]])
        return RayClass(r, point, tuple(back[c] for c in acc.t))
    except KeyError:
        raise AssertionError("norm of a closed point is not rational") from None


def format_point(F, P):
    if P is O:
        return "O"
    return f"({format_coeff(F, P[0])},{format_coeff(F, P[1])})"


def format_rayclass(F, A):
    return f"{format_point(F, A.P)}|" + ",".join(format_coeff(F, c) for c in A.t)


def ray_points(spec, r):
    """Abel-Jacobi images of U(F_{q^r}) as JSON rows, plus an injectivity flag."""
    L = ray_level(spec, r)
    rows, seen = [], set()
    for u in L.points_of_U():
        A = L.abel_jacobi(u)
        seen.add(A)
        rows.append({"point": format_point(L.F, u), "class": format_rayclass(L.F, A)})
    return rows, len(seen) == len(rows)


def associativity_failures(spec, r=1, trials=100, seed=0):
    L = ray_level(spec, r)
    rng = random.Random(seed)
    elements = L.elements
    bad = 0
    for _ in range(trials):
        a, b, c = (rng.choice(elements) for _ in range(3))
        bad += L.mul(L.mul(a, b), c) != L.mul(a, L.mul(b, c))
    return bad


# ---------------------------------------------------------------------------
# brute-force oracle: degree-0 divisor classes mod P_m without the cocycle

def _pole_order(func):
    return max((2 * i + 3 * j for (i, j), c in func.items() if c), default=0)


def closed_points(spec, r, d):
    """Closed points of exact degree d of U over F_{q^r}.

    Each entry is (representative over F_{q^{rd}}, sum of its conjugates
    as a point over F_{q^r}).
    """
    L = ray_level(spec, r)
    if d == 1:
        return [(P, P) for P in L.points_of_U()]
    ext = field(spec.p, spec.k * r * d)
    curve = L.curve.over(ext)
    back = {v: i for i, v in enumerate(embedding(L.F, ext))}
    step = spec.k * r
    out, seen = [], set()
    for P in curve.points:
        if P is O or P in seen:
            continue
        orbit = [P]
        while True:
            nxt = (ext.frobenius(orbit[-1][0], step), ext.frobenius(orbit[-1][1], step))
            if nxt == P:
                break
            orbit.append(nxt)
        seen.update(orbit)
        if len(orbit) != d:
            continue
        total = O
        for Q in orbit:
            total = curve.add(total, Q)
        total = total if total is O else (back[total[0]], back[total[1]])
        out.append((min(orbit), total))
    return out


def _line_through(spec, r, divisor, n):
    """The unique-up-to-scalar g in L((n+1)O) with div g >= divisor - (n+1)(O),
    found by exhaustive search over coefficient vectors."""
    L = ray_level(spec, r)
    F = L.F
    basis = [(i, j) for j in (0, 1) for i in range(n + 2) if 2 * i + 3 * j <= n + 1]
    o_mult = sum(e for (P, _, _), e in divisor if P is O)
    checks = []
    for (P, _, d), e in divisor:
        if P is O:
            continue
        ext = field(spec.p, spec.k * r * d)
        emb = embedding(F, ext)
        checks.append((LocalExpansion(L.curve.over(ext), P), emb, e))
    found = []
    for code in range(1, F.q ** len(basis)):
        coeffs, c = [], code
        for _ in basis:
            coeffs.append(c % F.q)
            c //= F.q
        if next(x for x in coeffs if x) != 1:
            continue
        func = dict(zip(basis, coeffs))
        if _pole_order(func) > n + 1 - o_mult:
            continue
        ok = True
        for expansion, emb, e in checks:
            series = expansion.series({m: emb[v] for m, v in func.items()})
            if any(series[:e]):
                ok = False
                break
        if ok:
            found.append(func)
    if len(found) != 1:
        raise AssertionError(f"expected one function through {divisor}, found {len(found)}")
    return found[0]


def brute_force_classes(spec, r=1, n=3):
    """Partition of {A - n(O) : A effective of degree n on U} into classes mod P_m.

    Two such divisors with the same sum in E differ by div(g_A / g_B), where
    g_A is found by search in L((n+1)O); they are equivalent exactly when
    g_A / g_B takes equal values at the modulus points.  Returns a dict
    mapping each divisor (a sorted tuple of ((point, sum, degree), mult))
    to its class label (sum, normalized value vector).
    """
    import itertools

    L = ray_level(spec, r)
    F = L.F
    pts = [(P, total, d) for d in range(1, n + 1) for P, total in closed_points(spec, r, d)]
    divisors = []
    for size in range(1, n + 1):
        for combo in itertools.combinations_with_replacement(range(len(pts)), size):
            if sum(pts[i][2] for i in combo) != n:
                continue
            counts = {}
            for i in combo:
                counts[i] = counts.get(i, 0) + 1
            divisors.append(tuple((pts[i], e) for i, e in sorted(counts.items())))
    reference = {}
    labels = {}
    for D in divisors:
        total = O
        for (_, s, _), e in D:
            total = L.curve.add(total, L.curve.mul(e, s))
        g = _line_through(spec, r, D, n)
        leads = [e.order_lead(g) for e in L.expansions]
        if total not in reference:
            reference[total] = leads
        ref = reference[total]
        if any(a[0] != b[0] for a, b in zip(leads, ref)):
            raise AssertionError("orders at the modulus differ within one fiber")
        ratio = tuple(F.div(a[1], b[1]) for a, b in zip(leads, ref))
        labels[D] = (total, L.normalize(ratio))
    return labels


def brute_force_order(spec, r=1, n=3):
    """Number of distinct classes reached by degree-n divisors."""
    return len(set(brute_force_classes(spec, r, n).values()))


# ---------------------------------------------------------------------------
# class counts feeding the L-series routes

@functools.lru_cache(maxsize=64)
def _closed_point_classes(spec, r, d):
    return tuple(closed_point_class(spec, r, P, d) for P, _ in closed_points(spec, r, d))


def _index(spec, r):
    L = ray_level(spec, r)
    return {c: i for i, c in enumerate(L.elements)}


def irreducible_class_counts(spec, r, d):
    """Closed points of U of degree d tallied by class."""
    idx = _index(spec, r)
    out = np.zeros(len(idx), dtype=np.int64)
    for c in _closed_point_classes(spec, r, d):
        out[idx[c]] += 1
    return out


def effective_class_counts(spec, r, d):
    """Effective divisors of degree d on U tallied by class, one divisor at a time."""
    L = ray_level(spec, r)
    idx = _index(spec, r)
    out = np.zeros(len(idx), dtype=np.int64)
    pool = [(e, c) for e in range(1, d + 1) for c in _closed_point_classes(spec, r, e)]

    def extend(start, remaining, acc):
        if remaining == 0:
            out[idx[acc]] += 1
            return
        for i in range(start, len(pool)):
            e, c = pool[i]
            if e <= remaining:
                extend(i, remaining - e, L.mul(acc, c))

    extend(0, d, L.identity())
    return out
