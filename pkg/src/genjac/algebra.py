"""Exact arithmetic over prime-power finite fields.

Elements of F_q (q = p^k) are encoded as integers 0 <= a < q: the element
c_0 + c_1 y + ... + c_{k-1} y^{k-1} of F_p[y]/(g) is stored as the integer
c_0 + c_1 p + ... + c_{k-1} p^{k-1}.  The prime subfield is therefore the
range 0..p-1 in every extension.  Polynomials over a field are tuples of
element codes, lowest degree first, with no trailing zeros; the zero
polynomial is the empty tuple.

Every field is built independently from the lexicographically smallest
monic irreducible of its degree (smallest integer encoding of the lower
coefficients).  Multiplication goes through log/exp tables, so both scalar
and numpy-vectorized arithmetic are cheap at desk scale (q <= 2^16).

The module also hosts the exact root-of-unity carrier used for character
sums: a prime field F_P with an element of exact order N.
"""

import functools
import math
import random
import re
from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, InvalidInput, ParseError

MAX_FIELD_SIZE = 2 ** 16


def is_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n):
    """Sorted list of the distinct primes dividing n (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n):
    if n == 1:
        return 1
    result = 1
    for ell in prime_factors(n):
        if n % (ell * ell) == 0:
            return 0
        result = -result
    return result


def necklace_count(q, d):
    """Number of monic irreducibles of degree d over F_q."""
    return sum(mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


# ---------------------------------------------------------------------------
# Fields

class FieldCtx:
    """The finite field F_q, q = p^k, with element codes 0..q-1.

    Instances are immutable; use :func:`field` to get the cached instance.
    """

    def __init__(self, p, k=1):
        if not is_prime(p):
            raise InvalidInput(f"characteristic {p} is not prime")
        if k < 1:
            raise InvalidInput("extension degree must be >= 1")
        q = p ** k
        if q > MAX_FIELD_SIZE:
            raise InvalidInput(f"field size {q} exceeds desk scale 2^16")
        self.p, self.k, self.q = p, k, q
        if k == 1:
            self.defining_poly = (0, 1)
        else:
            self.defining_poly = smallest_irreducible(field(p), k)
        self._build_tables()

    def _slow_mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return a * b % p
        da = [(a // p ** i) % p for i in range(k)]
        db = [(b // p ** i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        g = self.defining_poly
        for t in range(2 * k - 2, k - 1, -1):
            c = prod[t]
            if c:
                for i in range(k + 1):
                    prod[t - k + i] = (prod[t - k + i] - c * g[i]) % p
        return sum(prod[i] * p ** i for i in range(k))

    def _build_tables(self):
        q, p = self.q, self.p
        order = q - 1
        ells = prime_factors(order) if order > 1 else []
        gen = None
        for g in range(1, q):
            if all(self._slow_pow(g, order // ell) != 1 for ell in ells):
                gen = g
                break
        self.generator = gen
        exp = [0] * order
        log = [-1] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        self._exp, self._log = exp, log
        self._np_exp = np.array(exp, dtype=np.int64)
        nl = np.array(log, dtype=np.int64)
        nl[0] = 0
        self._np_log = nl
        k = self.k
        self._np_digits = np.array([[(a // p ** i) % p for i in range(k)] for a in range(q)],
                                   dtype=np.int64).reshape(q, k)
        self._pw = np.array([p ** i for i in range(k)], dtype=np.int64)
        neg = (-self._np_digits) % p
        self._np_neg = neg @ self._pw
        self._neg = [int(v) for v in self._np_neg]
        self._np_add = None
        self._add_rows = None
        if k > 1 and q <= 1024:
            tab = ((self._np_digits[:, None, :] + self._np_digits[None, :, :]) % p) @ self._pw
            self._np_add = tab
            self._add_rows = [[int(v) for v in row] for row in tab]

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # scalar arithmetic on codes
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self._add_rows is not None:
            return self._add_rows[a][b]
        p = self.p
        r, w = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return r

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise DivisionByZero("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a, times=1):
        """a -> a^(p^times)."""
        if self.k == 1:
            return a
        return self.pow(a, self.p ** (times % self.k))

    def log(self, a):
        return self._log[a]

    def exp(self, i):
        return self._exp[i % (self.q - 1)]

    def elements(self):
        return range(self.q)

    def in_prime_field(self, a):
        return a < self.p

    # vectorized arithmetic on int64 arrays of codes
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self._np_add is not None:
            return self._np_add[a, b]
        d = (self._np_digits[a] + self._np_digits[b]) % self.p
        return d @ self._pw

    def vneg(self, a):
        return self._np_neg[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        r = self._np_exp[(self._np_log[a] + self._np_log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._np_exp[(-self._np_log[a]) % (self.q - 1)]

    def __call__(self, value):
        return FieldElem(self, value)

    def element_from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise InvalidInput(f"too many coefficients for F_{self.q}")
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def coeffs_of(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k})"


@functools.lru_cache(maxsize=None)
def field(p, k=1):
    """Cached constructor for F_{p^k}."""
    return FieldCtx(p, k)


@functools.lru_cache(maxsize=None)
def embedding(base, ext):
    """Tuple mapping each code of ``base`` to its image in ``ext``.

    Prime fields embed as the constants.  Otherwise the generator y of
    ``base`` is sent to the smallest root of its defining polynomial in
    ``ext``.
    """
    if base.p != ext.p or ext.k % base.k:
        raise InvalidInput(f"F_{base.q} does not embed in F_{ext.q}")
    if base.k == 1:
        return tuple(range(base.q))
    g = base.defining_poly
    root = next(a for a in range(ext.q) if poly_eval(ext, g, a) == 0)
    images = []
    for c in range(base.q):
        value = 0
        for i, digit in enumerate(base.coeffs_of(c)):
            value = ext.add(value, ext.mul(digit, ext.pow(root, i)))
        images.append(value)
    return tuple(images)


class FieldElem:
    """An element of a :class:`FieldCtx` with operator overloading."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx, value):
        if isinstance(value, FieldElem):
            value = value.value
        if isinstance(value, (list, tuple)):
            value = ctx.element_from_coeffs(value)
        elif ctx.k == 1:
            value = int(value) % ctx.p
        elif not 0 <= value < ctx.q:
            raise InvalidInput(f"code {value} out of range for F_{ctx.q}")
        self.ctx = ctx
        self.value = int(value)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise InvalidInput("elements of different fields")
            return other.value
        return FieldElem(self.ctx, other).value

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.value, self._coerce(other)))

    def __pow__(self, e):
        return FieldElem(self.ctx, self.ctx.pow(self.value, e))

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def frobenius(self):
        return FieldElem(self.ctx, self.ctx.pow(self.value, self.ctx.p))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == FieldElem(self.ctx, other).value
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.ctx.k == 1:
            return f"{self.value}"
        return "[" + ",".join(map(str, self.ctx.coeffs_of(self.value))) + "]"


# ---------------------------------------------------------------------------
# Polynomials as coefficient tuples

def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return ptrim(out)


def pneg(F, a):
    return tuple(F.neg(c) for c in a)


def psub(F, a, b):
    return padd(F, a, pneg(F, b))


def pscale(F, a, c):
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in a)


def pmul(F, a, b):
    if not a or not b:
        return ()
    if F.k == 1:
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return ptrim(c % p for c in out)
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return ptrim(out)


def pdivmod(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    if len(a) - 1 < db:
        return (), ptrim(a)
    quot = [0] * (len(a) - db)
    for t in range(len(a) - 1, db - 1, -1):
        c = a[t]
        if c:
            c = F.mul(c, inv_lead)
            quot[t - db] = c
            for i in range(db + 1):
                a[t - db + i] = F.sub(a[t - db + i], F.mul(c, b[i]))
    return ptrim(quot), ptrim(a[:db])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pxgcd(F, a, b):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if not r0:
        return (), (), ()
    c = F.inv(r0[-1])
    return pscale(F, r0, c), pscale(F, s0, c), pscale(F, t0, c)


def pinvmod(F, a, m):
    g, s, _ = pxgcd(F, a, m)
    if g != (1,):
        raise DivisionByZero("polynomial not invertible modulo m")
    return pmod(F, s, m)


def ppowmod(F, a, e, m):
    result = pmod(F, (1,), m)
    a = pmod(F, a, m)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, a), m)
        a = pmod(F, pmul(F, a, a), m)
        e >>= 1
    return result


def pderiv(F, a):
    return ptrim(F.mul(c, i % F.p) for i, c in enumerate(a) if i > 0)


def poly_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def pcompose_linear(F, a, u, v):
    """a(u*x + v)."""
    lin = ptrim((v, u))
    acc = ()
    for c in reversed(a):
        acc = padd(F, pmul(F, acc, lin), (c,) if c else ())
    return acc


def pfrobenius(F, a, times=1):
    """Apply a -> a^(p^times) to every coefficient."""
    if F.k == 1:
        return tuple(a)
    e = F.p ** (times % F.k)
    return tuple(F.pow(c, e) for c in a)


def poly_code(F, a):
    """Integer code sum c_i q^i (monic polynomials of equal degree sort like their lower parts)."""
    code = 0
    for c in reversed(a):
        code = code * F.q + c
    return code


def poly_from_code(F, code, degree, monic=True):
    """Inverse of the lower-coefficient encoding of a monic polynomial."""
    coeffs = []
    for _ in range(degree):
        coeffs.append(code % F.q)
        code //= F.q
    if monic:
        coeffs.append(1)
    return ptrim(coeffs)


def poly_sort_key(F, a):
    return (len(a) - 1, poly_code(F, a))


class Poly:
    """A univariate polynomial over a :class:`FieldCtx`."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs=()):
        vals = []
        for c in coeffs:
            vals.append(FieldElem(ctx, c).value)
        self.ctx = ctx
        self.coeffs = ptrim(vals)

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def parse(cls, ctx, text):
        return cls(ctx, parse_poly(text, ctx))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _other(self, other):
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise InvalidInput("polynomials over different fields")
            return other.coeffs
        return ptrim((FieldElem(self.ctx, other).value,))

    def __add__(self, other):
        return Poly._raw(self.ctx, padd(self.ctx, self.coeffs, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly._raw(self.ctx, psub(self.ctx, self.coeffs, self._other(other)))

    def __rsub__(self, other):
        return Poly._raw(self.ctx, psub(self.ctx, self._other(other), self.coeffs))

    def __neg__(self):
        return Poly._raw(self.ctx, pneg(self.ctx, self.coeffs))

    def __mul__(self, other):
        return Poly._raw(self.ctx, pmul(self.ctx, self.coeffs, self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = (1,)
        base = self.coeffs
        while e:
            if e & 1:
                result = pmul(self.ctx, result, base)
            base = pmul(self.ctx, base, base)
            e >>= 1
        return Poly._raw(self.ctx, result)

    def __divmod__(self, other):
        q, r = pdivmod(self.ctx, self.coeffs, self._other(other))
        return Poly._raw(self.ctx, q), Poly._raw(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return FieldElem(self.ctx, poly_eval(self.ctx, self.coeffs, FieldElem(self.ctx, x).value))

    def monic(self):
        return Poly._raw(self.ctx, pmonic(self.ctx, self.coeffs))

    def gcd(self, other):
        return Poly._raw(self.ctx, pgcd(self.ctx, self.coeffs, self._other(other)))

    def derivative(self):
        return Poly._raw(self.ctx, pderiv(self.ctx, self.coeffs))

    def sort_key(self):
        return poly_sort_key(self.ctx, self.coeffs)

    @classmethod
    def _raw(cls, ctx, coeffs):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.coeffs = coeffs
        return obj

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ptrim((FieldElem(self.ctx, other).value,))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_poly(self.ctx, self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self.ctx, self.coeffs)!r} over F_{self.ctx.q})"


# ---------------------------------------------------------------------------
# Factorization

@dataclass(frozen=True)
class Factorization:
    """unit * prod(f**e for f, e in factors), factors monic irreducible and sorted."""

    unit: int
    factors: tuple

    def expand(self, ctx):
        acc = (self.unit,)
        for f, e in self.factors:
            for _ in range(e):
                acc = pmul(ctx, acc, f.coeffs)
        return Poly._raw(ctx, acc)


def _pth_root(F, a):
    # coefficients at multiples of p, each mapped by the inverse Frobenius
    e = F.q // F.p
    return ptrim(F.pow(a[i], e) if F.k > 1 else a[i] for i in range(0, len(a), F.p))


def squarefree_decomposition(F, f):
    """List of (squarefree monic g, multiplicity) for monic f."""
    out = []
    if len(f) <= 1:
        return out
    g = pgcd(F, f, pderiv(F, f))
    w = pdivmod(F, f, g)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(F, w, g)
        z = pdivmod(F, w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        g = pdivmod(F, g, y)[0]
    if len(g) > 1:
        for h, j in squarefree_decomposition(F, _pth_root(F, g)):
            out.append((h, j * F.p))
    return out


def distinct_degree(F, f):
    out = []
    i = 1
    x = (0, 1)
    h = pmod(F, x, f)
    while len(f) - 1 >= 2 * i:
        h = ppowmod(F, h, F.q, f)
        g = pgcd(F, f, psub(F, h, x))
        if len(g) > 1:
            out.append((g, i))
            f = pdivmod(F, f, g)[0]
            h = pmod(F, h, f)
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(F, f, d, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = ptrim(rng.randrange(F.q) for _ in range(n))
        if len(a) < 2:
            continue
        if F.q % 2:
            b = psub(F, ppowmod(F, a, (F.q ** d - 1) // 2, f), (1,))
        else:
            t = a
            b = a
            for _ in range(F.k * d - 1):
                t = pmod(F, pmul(F, t, t), f)
                b = padd(F, b, t)
        g = pgcd(F, f, b)
        if 0 < len(g) - 1 < n:
            return equal_degree(F, g, d, rng) + equal_degree(F, pdivmod(F, f, g)[0], d, rng)


def factor_coeffs(F, f):
    """Factor a coefficient tuple; returns (unit, [(irreducible tuple, mult)])."""
    if not f:
        raise InvalidInput("cannot factor the zero polynomial")
    unit = f[-1]
    f = pmonic(F, f)
    rng = random.Random(0)
    acc = {}
    for g, mult in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                acc[irr] = acc.get(irr, 0) + mult
    items = sorted(acc.items(), key=lambda it: poly_sort_key(F, it[0]))
    return unit, items


def poly_factor(f):
    """Factor a nonzero :class:`Poly` into monic irreducibles."""
    if not f.coeffs:
        raise InvalidInput("cannot factor the zero polynomial")
    unit, items = factor_coeffs(f.ctx, f.coeffs)
    return Factorization(unit, tuple((Poly._raw(f.ctx, g), e) for g, e in items))


def factor_by_trial_division(f):
    """Reference factorization: divide by all monic irreducibles in order."""
    F = f.ctx
    if not f.coeffs:
        raise InvalidInput("cannot factor the zero polynomial")
    unit = f.coeffs[-1]
    rest = pmonic(F, f.coeffs)
    out = []
    d = 1
    while len(rest) > 1:
        if 2 * d > len(rest) - 1:
            out.append((rest, 1))
            break
        for code in irreducible_codes(F, d):
            g = poly_from_code(F, int(code), d)
            e = 0
            while True:
                quot, rem = pdivmod(F, rest, g)
                if rem:
                    break
                rest = quot
                e += 1
            if e:
                out.append((g, e))
        d += 1
    merged = {}
    for g, e in out:
        merged[g] = merged.get(g, 0) + e
    items = sorted(merged.items(), key=lambda it: poly_sort_key(F, it[0]))
    return Factorization(unit, tuple((Poly._raw(F, g), e) for g, e in items))


def is_irreducible(F, f):
    if len(f) < 2:
        return False
    _, items = factor_coeffs(F, f)
    return len(items) == 1 and items[0][1] == 1


def smallest_irreducible(F, degree):
    """Monic irreducible of the given degree with the smallest lower-coefficient code."""
    for code in range(F.q ** degree):
        f = poly_from_code(F, code, degree)
        if is_irreducible(F, f):
            return f
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# Vectorized enumeration of monic polynomials

def codes_to_digits(codes, base, width):
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (width,), dtype=np.int64)
    c = codes.copy()
    for i in range(width):
        out[..., i] = c % base
        c //= base
    return out


def digits_to_codes(digits, base):
    digits = np.asarray(digits, dtype=np.int64)
    width = digits.shape[-1]
    code = np.zeros(digits.shape[:-1], dtype=np.int64)
    for i in range(width - 1, -1, -1):
        code = code * base + digits[..., i]
    return code


def irreducible_codes(F, degree):
    """Sorted lower-coefficient codes of the monic irreducibles of a degree.

    Sieve: every reducible monic of degree d is a product g*h with g monic of
    degree i <= d/2; all such products are formed with vectorized arithmetic
    and struck out.
    """
    Q = F.q
    total = Q ** degree
    if degree == 1:
        return np.arange(Q, dtype=np.int64)
    reducible = np.zeros(total, dtype=bool)
    for i in range(1, degree // 2 + 1):
        j = degree - i
        gs = codes_to_digits(np.arange(Q ** i), Q, i)
        hs = codes_to_digits(np.arange(Q ** j), Q, j)
        gfull = np.concatenate([gs, np.ones((len(gs), 1), dtype=np.int64)], axis=1)
        hfull = np.concatenate([hs, np.ones((len(hs), 1), dtype=np.int64)], axis=1)
        chunk = max(1, (1 << 20) // len(hs))
        for start in range(0, len(gs), chunk):
            gblock = gfull[start:start + chunk]
            code = np.zeros((len(gblock), len(hs)), dtype=np.int64)
            for t in range(degree - 1, -1, -1):
                acc = np.zeros((len(gblock), len(hs)), dtype=np.int64)
                for s in range(max(0, t - j), min(i, t) + 1):
                    term = F.vmul(gblock[:, s][:, None], hfull[:, t - s][None, :])
                    acc = F.vadd(acc, term)
                code = code * Q + acc
            reducible[code.ravel()] = True
    return np.flatnonzero(~reducible).astype(np.int64)


def irreducibles_up_to(ctx, d):
    """All monic irreducibles of degree <= d, sorted by (degree, lexicographic)."""
    if d < 1:
        raise InvalidInput("degree bound must be >= 1")
    out = []
    for deg in range(1, d + 1):
        for code in irreducible_codes(ctx, deg):
            out.append(Poly._raw(ctx, poly_from_code(ctx, int(code), deg)))
    return out


# ---------------------------------------------------------------------------
# Exact roots of unity

@dataclass(frozen=True)
class FourierCarrier:
    """Prime field F_P holding an element ``zeta`` of exact multiplicative order N."""

    P: int
    N: int
    zeta: int

    def root(self, k):
        """zeta^k."""
        return pow(self.zeta, k % self.N, self.P)

    def powers(self):
        return np.array([pow(self.zeta, k, self.P) for k in range(self.N)], dtype=np.int64)

    def check(self):
        if self.P % self.N != 1 % self.N or not is_prime(self.P):
            return False
        if pow(self.zeta, self.N, self.P) != 1:
            return False
        return all(pow(self.zeta, self.N // ell, self.P) != 1 for ell in prime_factors(self.N))


def find_fourier_carrier(N, bound):
    """Smallest prime P > bound with P = 1 mod N, plus its smallest element of order N."""
    if N < 1 or bound < 1:
        raise InvalidInput("N and bound must be positive")
    P = bound + 1
    P += (1 - P) % N
    while not is_prime(P):
        P += N
    ells = prime_factors(P - 1)
    g = next(a for a in range(2, P) if all(pow(a, (P - 1) // ell, P) != 1 for ell in ells)) \
        if P > 2 else 1
    base = pow(g, (P - 1) // N, P)
    zeta = min(pow(base, t, P) for t in range(1, N + 1) if math.gcd(t, N) == 1)
    return FourierCarrier(P, N, zeta)


# ---------------------------------------------------------------------------
# Text syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(.))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2)))
        elif m.group(3) is not None and not m.group(3).isspace():
            tokens.append(("op", m.group(3)))
    return tokens


def parse_poly(text, F, var="x"):
    """Parse ``x^3 + 2*x + 1`` (or ``[c0,c1]*x + (x+1)^2``) into a coefficient tuple."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected token {tok[1]!r} in {text!r}")
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        acc = term()
        if sign < 0:
            acc = pneg(F, acc)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = padd(F, acc, t) if op == "+" else psub(F, acc, t)
        return acc

    def starts_factor(tok):
        return tok[0] in ("num", "var") or tok in (("op", "("), ("op", "["))

    def term():
        acc = factor()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                acc = pmul(F, acc, factor())
            elif starts_factor(tok):
                acc = pmul(F, acc, factor())
            else:
                return acc

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            e = take("num")[1]
            out = (1,)
            for _ in range(e):
                out = pmul(F, out, base)
            return out
        return base

    def atom():
        tok = peek()
        if tok[0] == "num":
            take()
            return ptrim((FieldElem(F, tok[1] % F.p).value,))
        if tok[0] == "var":
            if tok[1] != var:
                raise ParseError(f"unknown variable {tok[1]!r}")
            take()
            return (0, 1)
        if tok == ("op", "("):
            take()
            inner = expr()
            take("op", ")")
            return inner
        if tok == ("op", "["):
            take()
            digits = []
            while True:
                digits.append(take("num")[1])
                if peek() == ("op", ","):
                    take()
                    continue
                break
            take("op", "]")
            return ptrim((F.element_from_coeffs(digits),))
        raise ParseError(f"unexpected token {tok[1]!r} in {text!r}")

    if not tokens:
        raise ParseError("empty polynomial")
    result = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return result


def format_coeff(F, c):
    if F.k == 1:
        return str(c)
    digits = ptrim(F.coeffs_of(c)) or (0,)
    return "[" + ",".join(map(str, digits)) + "]"


def format_poly(F, coeffs, var="x"):
    if not coeffs:
        return "0"
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(format_coeff(F, c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{format_coeff(F, c)}*{mono}")
    return " + ".join(terms)
