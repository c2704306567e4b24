"""Characters of J_m(F_{q^r}) and their L-functions.

Character values live in a prime field F_P containing an element zeta of
order N = exponent of the group, so every identity between character sums
is checked exactly.  L-series are power series truncated at T^B and are
computed two ways: as an Euler product over closed points of U (infinity
included, with factor (1 - T)^-1) and as a sum over effective divisors.
"""

import cmath
import functools
from dataclasses import dataclass

import numpy as np

from .algebra import find_fourier_carrier
from .errors import DegreeBoundViolation, InvalidInput, NumericalFailure, TrivialCharacter
from .genus0 import INF, ClosedPoint, class_of_divisor, level

BUDGET = 4 * 10 ** 6


def count_bound(q, r, B):
    """2 * sum_{d <= B} (d + 1) q^{r d}: a carrier above this lifts every divisor count."""
    return 2 * sum((d + 1) * q ** (r * d) for d in range(B + 1))


def default_bound(spec):
    if spec.kind == "elliptic":
        return spec.degree + 1
    return spec.degree + 3


@functools.lru_cache(maxsize=64)
def carrier_for(spec, r, B=None):
    """The F_P carrier used for all characters of (spec, r) up to truncation B."""
    if B is None:
        B = default_bound(spec)
    N = group_of(spec, r).exponent
    return find_fourier_carrier(N, count_bound(spec.q, r, B))


def group_of(spec, r):
    if spec.kind == "genus0":
        return level(spec, r).structure
    from .elliptic import ray_level
    return ray_level(spec, r).structure


# ---------------------------------------------------------------------------
# modular helpers: int64 while products fit, Python ints otherwise

def _dtype(P):
    return np.int64 if P < 3 * 10 ** 9 else object


@dataclass(frozen=True)
class Character:
    """chi(g_i) = zeta^{(N / n_i) e_i} against the invariant-factor basis."""

    r: int
    exponents: tuple
    factors: tuple
    carrier: object

    @property
    def is_trivial(self):
        return not any(self.exponents)

    @property
    def weights(self):
        N = self.carrier.N
        return tuple((N // n) * e for n, e in zip(self.factors, self.exponents))

    def phase(self, coords):
        """Exponent k with chi = zeta^k at the element with these coordinates."""
        return sum(w * c for w, c in zip(self.weights, coords)) % self.carrier.N

    def value_at_coords(self, coords):
        return self.carrier.root(self.phase(coords))

    def complex_value_at_coords(self, coords):
        return cmath.exp(2j * cmath.pi * self.phase(coords) / self.carrier.N)


def character_group(structure, carrier):
    """All characters in lexicographic exponent order."""
    if carrier.N % structure.exponent:
        raise InvalidInput("carrier order must be a multiple of the group exponent")
    out = []
    for flat in range(structure.order):
        exps = []
        for n in reversed(structure.factors):
            exps.append(flat % n)
            flat //= n
        out.append(Character(_level_of(structure), tuple(reversed(exps)), structure.factors, carrier))
    return out


def _level_of(structure):
    return structure.generators[0].r if structure.generators else 1


def characters(spec, r, B=None):
    st = group_of(spec, r)
    chars = character_group(st, carrier_for(spec, r, B))
    return [Character(r, c.exponents, c.factors, c.carrier) for c in chars]


def phase_matrix(chars, structure):
    """phases[i, j] = exponent of zeta for chars[i] at group element j (class order)."""
    if not chars:
        return np.zeros((0, structure.order), dtype=np.int64)
    N = chars[0].carrier.N
    W = np.array([c.weights for c in chars], dtype=np.int64).reshape(len(chars), len(structure.factors))
    return (W @ structure.coord_array.T) % N


def character_from_values(spec, r, values, B=None):
    """The unique character with chi(class) = zeta^k for the given {JmClass: k}.

    Raises InvalidInput if no character or several characters match.
    """
    L = level(spec, r)
    st = L.structure
    chars = characters(spec, r, B)
    phases = phase_matrix(chars, st)
    mask = np.ones(len(chars), dtype=bool)
    for cls, k in values.items():
        mask &= phases[:, L.index(cls)] == k % chars[0].carrier.N
    hits = np.flatnonzero(mask)
    if len(hits) != 1:
        raise InvalidInput(f"{len(hits)} characters match the prescribed values")
    return chars[int(hits[0])]


def character_value(chi, spec, cls):
    st = group_of(spec, chi.r)
    code = level(spec, chi.r).code(cls.rep) if spec.kind == "genus0" else cls
    return chi.value_at_coords(st.coords[code])


def frobenius_value(chi, y, spec, r):
    """chi of the class of [y] - deg(y)[inf]; infinity gives 1."""
    if isinstance(y, ClosedPoint) and y.is_infinity or y == INF:
        return 1
    return character_value(chi, spec, class_of_divisor(spec, r, y))


# ---------------------------------------------------------------------------
# L-series

@dataclass
class LSeries:
    r: int
    chi: Character
    B: int
    coeffs: tuple
    source: str
    affine_cyclotomic: object = None

    @property
    def P(self):
        return self.chi.carrier.P

    def to_json(self):
        return {"chi": list(self.chi.exponents), "P": self.P, "N": self.chi.carrier.N,
                "coeffs": [int(a) for a in self.coeffs]}

    def __eq__(self, other):
        return (isinstance(other, LSeries) and self.chi.exponents == other.chi.exponents
                and self.P == other.P and tuple(self.coeffs) == tuple(other.coeffs))


def _class_counts_monic(spec, r, j):
    """M_j(E): monic f of degree j coprime to m, tallied by class."""
    L = level(spec, r)
    if j == 0:
        out = np.zeros(L.order, dtype=np.int64)
        out[L.index(1)] = 1
        return out
    if L.Q ** j <= BUDGET:
        return L.monic_class_counts(j)
    if j < L.n:
        raise InvalidInput(f"{L.Q ** j} monic polynomials of degree {j} exceed the budget")
    # for j >= deg m the remainders mod m of monic f of degree j are equidistributed
    return np.full(L.order, (L.Q - 1) * L.Q ** (j - L.n), dtype=np.int64)


def _cyclotomic_sums(phases, counts, N):
    """out[i, k] = sum of counts over elements where character i has phase k."""
    out = np.zeros((phases.shape[0], N), dtype=object if counts.max(initial=0) > 2 ** 40 else np.int64)
    for k in range(N):
        out[:, k] = ((phases == k) * counts[None, :].astype(out.dtype)).sum(axis=1)
    return out


def _eval_cyclotomic(cyc, carrier):
    powers = [carrier.root(k) for k in range(carrier.N)]
    return [sum(int(c) * pw for c, pw in zip(row, powers)) % carrier.P for row in cyc]


def lfun_divisor_sum_all(spec, r, B, chars=None):
    """Divisor-sum L-series for every character of level r (shared enumeration)."""
    if B < 1:
        raise InvalidInput("truncation bound must be >= 1")
    st = group_of(spec, r)
    if chars is None:
        chars = characters(spec, r, B)
    carrier = chars[0].carrier
    phases = phase_matrix(chars, st)
    if spec.kind == "elliptic":
        from .elliptic import effective_class_counts
        counts = [effective_class_counts(spec, r, j) for j in range(B + 1)]
    else:
        counts = [_class_counts_monic(spec, r, j) for j in range(B + 1)]
    affine = [_cyclotomic_sums(phases, c, carrier.N) for c in counts]
    affine_fp = [_eval_cyclotomic(cyc, carrier) for cyc in affine]
    out = []
    for i, chi in enumerate(chars):
        coeffs, acc = [], 0
        for d in range(B + 1):
            if spec.kind == "elliptic":
                # infinity is a point of U there, already among the divisors
                coeffs.append(affine_fp[d][i])
                continue
            # the divisor k*inf + div(f) with deg f = d - k; summing over k accumulates
            acc = (acc + affine_fp[d][i]) % carrier.P
            coeffs.append(acc)
        cyc = np.array([affine[j][i] for j in range(B + 1)])
        out.append(LSeries(r, chi, B, tuple(coeffs), "divisor_sum", cyc))
    return out


def lfun_divisor_sum(chi, spec, r, B):
    return _single(lfun_divisor_sum_all, chi, spec, r, B)


def _single(fn, chi, spec, r, B):
    series = fn(spec, r, B, [chi])
    return series[0]


def lfun_euler_all(spec, r, B, chars=None):
    """Euler-product L-series for every character: prod over |U| of (1 - chi(y) T^deg y)^-1."""
    if B < 1:
        raise InvalidInput("truncation bound must be >= 1")
    st = group_of(spec, r)
    if chars is None:
        chars = characters(spec, r, B)
    carrier = chars[0].carrier
    P, N = carrier.P, carrier.N
    phases = phase_matrix(chars, st)
    nchar = len(chars)
    dtype = _dtype(P)
    series = np.zeros((nchar, B + 1), dtype=dtype)
    series[:, 0] = 1
    roots = np.array([carrier.root(k) for k in range(N)], dtype=dtype)

    def multiply_factor(d, value, mult):
        # series *= (1 - value T^d)^(-mult), value and mult are per-character vectors
        terms = B // d
        coef = np.ones(nchar, dtype=dtype)
        power = np.ones(nchar, dtype=dtype)
        expansion = [coef]
        for j in range(1, terms + 1):
            # C(mult + j - 1, j) via the ratio (mult + j - 1) / j
            coef = coef * ((mult + j - 1) % P) % P * pow(j, P - 2, P) % P
            power = power * value % P
            expansion.append(coef * power % P)
        new = np.zeros_like(series)
        for j, e in enumerate(expansion):
            new[:, d * j:] = (new[:, d * j:] + series[:, :B + 1 - d * j] * e[:, None]) % P
        return new

    Q = spec.q ** r
    if spec.kind == "genus0":
        # infinity: Frobenius at the base point maps to the identity class
        series = multiply_factor(1, np.ones(nchar, dtype=dtype), np.ones(nchar, dtype=dtype))
    for d in range(1, B + 1):
        if Q ** d > BUDGET:
            raise InvalidInput(f"closed points of degree {d} over F_{Q} exceed the budget")
        if spec.kind == "elliptic":
            from .elliptic import irreducible_class_counts
            counts = irreducible_class_counts(spec, r, d)
        else:
            counts = level(spec, r).irreducible_class_counts(d)
        for k in range(N):
            mult = ((phases == k) * counts[None, :]).sum(axis=1).astype(dtype)
            if not np.any(mult):
                continue
            series = multiply_factor(d, np.full(nchar, roots[k], dtype=dtype), mult)
    return [LSeries(r, chi, B, tuple(int(a) for a in series[i]), "euler") for i, chi in enumerate(chars)]


def lfun_euler(chi, spec, r, B):
    return _single(lfun_euler_all, chi, spec, r, B)


@dataclass
class LPolynomial:
    """(1 - T) L(T, chi) for a genus-0 spec: exact F_P coefficients and their complex lift."""

    coeffs: tuple
    complex_coeffs: tuple
    P: int
    q_level: int

    @property
    def degree(self):
        return len(self.coeffs) - 1


def polynomial_part(series, spec):
    """(1 - T) L truncated at deg m - 1, with the tail checked to vanish up to B."""
    if spec.kind != "genus0":
        raise InvalidInput("polynomial_part is defined for genus0 specs")
    chi = series.chi
    if chi.is_trivial:
        raise TrivialCharacter("the trivial character has no polynomial L-function")
    n = spec.degree
    if series.B < n:
        raise InvalidInput(f"need B >= deg m = {n}, got {series.B}")
    P = series.P
    a = list(series.coeffs)
    prod = [a[0]] + [(a[d] - a[d - 1]) % P for d in range(1, len(a))]
    if any(prod[n:]):
        raise DegreeBoundViolation(f"(1 - T) L has nonzero coefficients beyond degree {n - 1}")
    cyc = series.affine_cyclotomic
    if cyc is None:
        cyc = lfun_divisor_sum(chi, spec, series.r, n - 1).affine_cyclotomic
    N = chi.carrier.N
    omega = [cmath.exp(2j * cmath.pi * k / N) for k in range(N)]
    complex_coeffs = []
    for j in range(n):
        row = cyc[j]
        if sum(int(c) * chi.carrier.root(k) for k, c in enumerate(row)) % P != prod[j]:
            raise DegreeBoundViolation("complex lift disagrees with the exact coefficient")
        complex_coeffs.append(sum(int(c) * w for c, w in zip(row, omega)))
    coeffs = list(prod[:n])
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        complex_coeffs.pop()
    return LPolynomial(tuple(coeffs), tuple(complex_coeffs), P, spec.q ** series.r)


def weil_magnitudes(lpoly):
    """Absolute values of the inverse roots of the lifted polynomial."""
    cs = list(lpoly.complex_coeffs)
    if len(cs) <= 1:
        return []
    # inverse roots of a_0 + a_1 T + ... + a_n T^n are the roots of a_0 z^n + ... + a_n
    roots = np.roots(np.array(cs, dtype=complex))
    if len(roots) != len(cs) - 1 or not np.all(np.isfinite(roots)):
        raise NumericalFailure("root finding failed")
    return sorted(float(abs(z)) for z in roots)


def weil_ok(magnitudes, q_level, tol=1e-6):
    targets = (1.0, q_level ** 0.5)
    return all(min(abs(m - t) for t in targets) <= tol for m in magnitudes)


def orthogonality_defect(chars, structure):
    """Pairs (i, j) where sum_g chi_i(g) chi_j(g)^-1 != |G| [i == j] in F_P."""
    carrier = chars[0].carrier
    P, N = carrier.P, carrier.N
    phases = phase_matrix(chars, structure)
    roots = [carrier.root(k) for k in range(N)]
    bad = []
    for i in range(len(chars)):
        for j in range(len(chars)):
            diff = (phases[i] - phases[j]) % N
            s = sum(roots[int(k)] for k in diff) % P
            if s != (structure.order % P if i == j else 0):
                bad.append((i, j))
    return bad
