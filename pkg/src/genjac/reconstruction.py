"""Recovering a curve with modulus from the L-functions of its characters.

Pipeline:

1. :func:`invert_counts` turns the L-series of all characters at a level
   into divisor counts N_d(E) by exact Fourier inversion over F_P.
2. :func:`detect_points` reads off the image of U(F_{q^r}) as the classes
   with exactly one effective divisor of degree 1.
3. :func:`search_twist` looks for x -> u x + v and a Frobenius power l that
   explain a given group correspondence psi between two curves.

An :class:`LBundle` is the input data: per level the invariant factors of
the abstract group, the exponents and L-series of every character, and
optionally psi as an explicit coordinate table.
"""

import json
import math
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    FourierCarrier, embedding, format_poly, pcompose_linear, pdivmod, pfrobenius, pmod,
    poly_from_code, ppowmod, prime_factors, psub,
)
from .errors import (
    CarrierMismatch, CarrierTooSmall, IncompleteBundle, InjectivityViolation, InvalidComparison,
    InvalidInput, NoTwistFound,
)
from .genus0 import (
    INF, genus0_spec, level, modulus_divides, order_formula, pushforward_class,
)
from .lfunctions import carrier_for, characters, default_bound, lfun_divisor_sum_all


# ---------------------------------------------------------------------------
# Bundles

@dataclass
class BundleLevel:
    r: int
    factors: tuple
    carrier: FourierCarrier
    B: int
    exponents: list
    coeffs: list

    @property
    def order(self):
        return math.prod(self.factors)


@dataclass
class LBundle:
    """L-data of one curve with modulus, levels 1..R, plus an optional psi table.

    ``psi[r]`` maps coordinates in the source group (``psi_source``) to
    coordinates in this bundle's group.
    """

    spec: object
    levels: dict
    psi: dict = dc_field(default_factory=dict)
    psi_source: object = None

    @property
    def tag(self):
        return self.spec.tag()

    @property
    def R(self):
        return max(self.levels)

    def level(self, r):
        if r not in self.levels:
            raise IncompleteBundle(f"bundle has no data at level {r}")
        return self.levels[r]


def build_bundle(spec, R, B=None):
    """L-series of all characters at levels 1..R (divisor-sum route)."""
    if B is None:
        B = default_bound(spec)
    levels = {}
    for r in range(1, R + 1):
        st = level(spec, r).structure
        chars = characters(spec, r, B)
        series = lfun_divisor_sum_all(spec, r, B, chars)
        levels[r] = BundleLevel(r, st.factors, chars[0].carrier, B,
                                [c.exponents for c in chars], [list(s.coeffs) for s in series])
    return LBundle(spec, levels)


def psi_table(specA, specB, r, class_map):
    """Coordinate table of a map J_mA -> J_mB given on class codes."""
    LA, LB = level(specA, r), level(specB, r)
    stA, stB = LA.structure, LB.structure
    return {stA.coords[int(c)]: stB.coords[class_map(int(c))] for c in LA.classes}


def plant_twist(bundleB, specA, alpha=((1, 0), (0, 1)), frobenius=0):
    """Attach psi = (push along x -> u x + v) o (coefficientwise p^l power) to bundleB.

    ``alpha`` is given over F_q as ((u, v), (0, 1)).
    """
    specB = bundleB.spec
    if specA.field != specB.field:
        raise InvalidInput("both curves must be over the same field")
    (u, v), (c, d) = alpha
    if c != 0 or d != 1:
        raise InvalidInput("planted maps must fix infinity: alpha = ((u, v), (0, 1))")
    for r in bundleB.levels:
        LA, LB = level(specA, r), level(specB, r)
        if LA.order != LB.order:
            raise InvalidInput(f"group orders differ at level {r}")
        emb = embedding(specA.field, LB.F)
        a_r = ((emb[u], emb[v]), (0, 1))
        mapping = {}
        for code in LA.classes:
            rep = LA.rep(int(code))
            mapping[int(code)] = LB.code(pushforward_class(LA, LB, a_r, rep, frobenius))
        if len(set(mapping.values())) != len(mapping):
            raise InvalidInput(f"planted map is not injective at level {r}")
        bundleB.psi[r] = psi_table(specA, specB, r, mapping.__getitem__)
    bundleB.psi_source = specA
    return bundleB


def plant_identity(bundle):
    return plant_twist(bundle, bundle.spec)


# ---------------------------------------------------------------------------
# JSON I/O

def bundle_to_json(bundle):
    spec = bundle.spec
    out = {
        "tag": bundle.tag,
        "q": spec.q,
        "modulus": format_poly(spec.field, spec.modulus),
        "levels": [],
    }
    for r in sorted(bundle.levels):
        lv = bundle.levels[r]
        out["levels"].append({
            "r": r, "factors": list(lv.factors), "P": lv.carrier.P, "N": lv.carrier.N,
            "zeta": lv.carrier.zeta, "B": lv.B,
            "series": [{"chi": list(e), "coeffs": [int(a) for a in c]}
                       for e, c in zip(lv.exponents, lv.coeffs)],
        })
    if bundle.psi:
        src = bundle.psi_source
        out["psi"] = {
            "source": {"q": src.q, "modulus": format_poly(src.field, src.modulus)},
            "levels": [{"r": r, "map": [[list(a), list(b)] for a, b in sorted(bundle.psi[r].items())]}
                       for r in sorted(bundle.psi)],
        }
    return out


def _spec_from_json(obj):
    return genus0_spec(obj["q"], obj["modulus"], check_dimension=False)


def bundle_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        spec = _spec_from_json(obj)
        levels = {}
        for lv in obj["levels"]:
            carrier = FourierCarrier(lv["P"], lv["N"], lv["zeta"])
            if not carrier.check():
                raise InvalidInput(f"level {lv['r']}: carrier fields are inconsistent")
            levels[lv["r"]] = BundleLevel(
                lv["r"], tuple(lv["factors"]), carrier, lv["B"],
                [tuple(s["chi"]) for s in lv["series"]], [list(s["coeffs"]) for s in lv["series"]])
        bundle = LBundle(spec, levels)
        if "psi" in obj:
            bundle.psi_source = _spec_from_json(obj["psi"]["source"])
            for lv in obj["psi"]["levels"]:
                bundle.psi[lv["r"]] = {tuple(a): tuple(b) for a, b in lv["map"]}
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed bundle: {exc}") from None
    return bundle


# ---------------------------------------------------------------------------
# Fourier inversion

@dataclass
class CountTable:
    """N_d(E) for d = 0..B, rows indexed by group coordinates."""

    r: int
    factors: tuple
    counts: dict

    @property
    def B(self):
        return len(next(iter(self.counts.values()))) - 1

    def column(self, d):
        return {e: row[d] for e, row in self.counts.items()}


def all_coords(factors):
    """Coordinate tuples of Z/n_1 x ... x Z/n_k in lexicographic order."""
    return [tuple(int(x) for x in idx) for idx in np.ndindex(*factors)] if factors else [()]


def _phases(exponents, factors, elements, N):
    W = np.array([[(N // n) * e for n, e in zip(factors, ex)] for ex in exponents], dtype=np.int64)
    X = np.array(elements, dtype=np.int64).reshape(len(elements), len(factors))
    return (W.reshape(len(exponents), len(factors)) @ X.T) % N


def invert_counts(bundle, r, B=None):
    """N_d(E) = |G|^-1 sum_chi chi(E)^-1 a_d(chi) in F_P, lifted to integers."""
    lv = bundle.level(r)
    G = lv.order
    if len(set(lv.exponents)) != G:
        raise IncompleteBundle(f"level {r}: {len(set(lv.exponents))} of {G} characters present")
    if B is None:
        B = lv.B
    if B > lv.B:
        raise IncompleteBundle(f"level {r}: series truncated at {lv.B} < {B}")
    P, N = lv.carrier.P, lv.carrier.N
    elements = all_coords(lv.factors)
    phases = _phases(lv.exponents, lv.factors, elements, N)
    roots = [lv.carrier.root(-k) for k in range(N)]
    safe = P * P * G < 2 ** 62
    dtype = np.int64 if safe else object
    Z = np.array(roots, dtype=dtype)[phases.T]
    A = np.array([c[:B + 1] for c in lv.coeffs], dtype=dtype)
    S = (Z @ A) % P if safe else np.array(
        [[sum(int(z) * int(a) for z, a in zip(Z[i], A[:, d])) % P for d in range(B + 1)]
         for i in range(len(elements))], dtype=object)
    ginv = pow(G, P - 2, P)
    out = {}
    for i, e in enumerate(elements):
        row = []
        for d in range(B + 1):
            v = int(S[i, d]) * ginv % P
            if v >= P // 2:
                raise CarrierTooSmall(f"level {r}: count {v} does not lift below P/2 = {P // 2}")
            row.append(v)
        out[e] = row
    return CountTable(r, lv.factors, out)


def _rabin_irreducible(F, f):
    d = len(f) - 1
    if d == 1:
        return True
    x = (0, 1)
    if pmod(F, psub(F, ppowmod(F, x, F.q ** d, f), x), f):
        return False
    for ell in prime_factors(d):
        h = pmod(F, psub(F, ppowmod(F, x, F.q ** (d // ell), f), x), f)
        g, t = f, h
        while t:
            g, t = t, pmod(F, g, t)
        if len(g) > 1:
            return False
    return True


def brute_force_count_table(spec, r, B):
    """Independent oracle: enumerate effective divisors of U of degree <= B by class.

    Closed points are found by a Rabin irreducibility test on every monic
    polynomial and classes are multiplied with a table built from plain
    polynomial arithmetic.  Counts are then accumulated as multisets of
    closed points, one point at a time.
    """
    L = level(spec, r)
    F = L.F
    st = L.structure
    elems = [int(c) for c in L.classes]
    index = {c: i for i, c in enumerate(elems)}
    G = len(elems)
    mul = np.empty((G, G), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems[: i + 1]):
            mul[i, j] = mul[j, i] = index[L.mul_codes(a, b)]
    table = np.zeros((B + 1, G), dtype=object)
    table[0, index[1]] = 1

    def add_point(cls, deg):
        nonlocal table
        new = table.copy()
        power = index[1]
        for k in range(1, B // deg + 1):
            power = mul[power, cls]
            perm = mul[:, power]
            for d in range(B + 1 - k * deg):
                np.add.at(new[d + k * deg], perm, table[d])
        table = new

    add_point(index[1], 1)  # infinity
    for deg in range(1, B + 1):
        for code in range(F.q ** deg):
            g = poly_from_code(F, code, deg)
            if not _rabin_irreducible(F, g):
                continue
            if not pdivmod(F, L.m, g)[1]:
                continue
            add_point(index[L.code(L.normalize(pmod(F, g, L.m)))], deg)
    counts = {st.coords[c]: [int(table[d, i]) for d in range(B + 1)] for i, c in enumerate(elems)}
    return CountTable(r, st.factors, counts)


def detect_points(counts):
    """Group elements E with exactly one effective divisor of degree 1 in their class."""
    found = set()
    for e, row in counts.counts.items():
        if row[1] >= 2:
            raise InjectivityViolation(f"element {e} carries {row[1]} divisors of degree 1")
        if row[1] == 1:
            found.add(e)
    if not found:
        warnings.warn("NoPoints: no element has exactly one degree-1 divisor", stacklevel=2)
    return found


# ---------------------------------------------------------------------------
# L-function matching

def _reconcile(bundleA, bundleB, r):
    la, lb = bundleA.level(r), bundleB.level(r)
    if la.carrier == lb.carrier:
        return la, lb
    B = min(la.B, lb.B)
    fixed = []
    for bundle in (bundleA, bundleB):
        carrier = carrier_for(bundle.spec, r, B)
        chars = characters(bundle.spec, r, B)
        series = lfun_divisor_sum_all(bundle.spec, r, B, chars)
        fixed.append(BundleLevel(r, bundle.levels[r].factors, carrier, B,
                                 [c.exponents for c in chars], [list(s.coeffs) for s in series]))
    if fixed[0].carrier != fixed[1].carrier:
        raise CarrierMismatch(f"level {r}: carriers {fixed[0].carrier} and {fixed[1].carrier}")
    return fixed


def check_psi_isomorphism(psi_r, factors_src, factors_dst):
    """None if psi_r is a bijective homomorphism, else a reason string."""
    src = all_coords(factors_src)
    if set(psi_r) != set(src):
        return "psi is not defined on the whole source group"
    dst = set(psi_r.values())
    if len(dst) != len(src) or dst != set(all_coords(factors_dst)):
        return "psi is not a bijection"

    def add(a, b, factors):
        return tuple((x + y) % n for x, y, n in zip(a, b, factors))

    gens = [tuple(int(i == j) for j in range(len(factors_src))) for i in range(len(factors_src))]
    for g in gens:
        for a in src:
            if psi_r[add(a, g, factors_src)] != add(psi_r[a], psi_r[g], factors_dst):
                return "psi is not a homomorphism"
    return None


@dataclass
class MatchReport:
    ok: bool
    reason: str = ""
    levels: dict = dc_field(default_factory=dict)


def check_lfun_matching(bundleA, bundleB, psi=None):
    """Compare L(chi) on A with L(chi o psi^-1) on B for all characters and levels.

    ``psi`` defaults to the table stored on bundleB.
    """
    psi = bundleB.psi if psi is None else psi
    report = MatchReport(True)
    for r in sorted(set(bundleA.levels) & set(bundleB.levels)):
        fa, fb = bundleA.levels[r].factors, bundleB.levels[r].factors
        if math.prod(fa) != math.prod(fb):
            return MatchReport(False, f"group orders {math.prod(fa)} != {math.prod(fb)} at level {r}")
        if r not in psi:
            raise IncompleteBundle(f"no correspondence at level {r}")
        bad = check_psi_isomorphism(psi[r], fa, fb)
        if bad:
            return MatchReport(False, f"level {r}: {bad}")
        la, lb = _reconcile(bundleA, bundleB, r)
        N = la.carrier.N
        inv = {b: a for a, b in psi[r].items()}
        gensB = [tuple(int(i == j) for j in range(len(fb))) for i in range(len(fb))]
        seriesB = dict(zip(lb.exponents, lb.coeffs))
        B = min(la.B, lb.B)
        mismatches = 0
        for ex, coeffs in zip(la.exponents, la.coeffs):
            weights = [(N // n) * e for n, e in zip(fa, ex)]
            exB = []
            for g, n in zip(gensB, fb):
                phase = sum(w * c for w, c in zip(weights, inv[g])) % N
                exB.append(phase // (N // n))
            if list(seriesB[tuple(exB)][:B + 1]) != list(coeffs[:B + 1]):
                mismatches += 1
        report.levels[r] = mismatches
        if mismatches:
            report.ok = False
            report.reason = f"{mismatches} characters disagree at level {r}"
    return report


# ---------------------------------------------------------------------------
# Twist search

@dataclass
class TwistWitness:
    """x -> (u x + v), Frobenius exponent l (a p^l power), verified on levels 1..R."""

    alpha: tuple
    frobenius_exponent: int
    verified_levels: int
    status: str = "verified"
    all_verified: list = dc_field(default_factory=list)
    rejected: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "alpha": [list(row) for row in self.alpha],
            "l": self.frobenius_exponent,
            "verified_levels": self.verified_levels,
            "status": self.status,
            "all_verified": [{"alpha": [list(row) for row in a], "l": l} for a, l in self.all_verified],
        }


def _hom(F, pt):
    return (1, 0) if pt == INF else (pt, 1)


def _frame(F, p1, p2, p3):
    """Matrix sending infinity, 0, 1 to the three given points."""
    (a1, c1), (a2, c2), (a3, c3) = _hom(F, p1), _hom(F, p2), _hom(F, p3)
    det = F.sub(F.mul(a1, c2), F.mul(a2, c1))
    if det == 0:
        raise InvalidInput("points are not distinct")
    lam = F.div(F.sub(F.mul(a3, c2), F.mul(a2, c3)), det)
    mu = F.div(F.sub(F.mul(a1, c3), F.mul(a3, c1)), det)
    return ((F.mul(lam, a1), F.mul(mu, a2)), (F.mul(lam, c1), F.mul(mu, c2)))


def _mat_mul(F, X, Y):
    return tuple(tuple(F.add(F.mul(X[i][0], Y[0][j]), F.mul(X[i][1], Y[1][j])) for j in range(2))
                 for i in range(2))


def _mat_inv(F, X):
    (a, b), (c, d) = X
    return ((d, F.neg(b)), (F.neg(c), a))


def mobius_from_triples(F, src, dst):
    """The fractional-linear map sending src[i] to dst[i], normalized so d = 1 when c = 0."""
    M = _mat_mul(F, _frame(F, *dst), _mat_inv(F, _frame(F, *src)))
    (a, b), (c, d) = M
    last = next(x for x in (d, c, b, a) if x)
    s = F.inv(last)
    return tuple(tuple(F.mul(x, s) for x in row) for row in M)


def _points_by_class(L):
    return {code: a for a, code in L.points}


def _pull_back_to_base(base, ext, x):
    emb = embedding(base, ext)
    try:
        return emb.index(x)
    except ValueError:
        return None


def search_twist(specA, bundleB, R=None):
    """Find (alpha, l) with psi = alpha_* o Frob^l on every level <= R, or raise NoTwistFound."""
    specB = bundleB.spec
    R = bundleB.R if R is None else R
    if specA.kind != "genus0" or specB.kind != "genus0":
        raise InvalidInput("twist search is implemented for genus0 curves")
    if specA.field != specB.field:
        raise NoTwistFound(f"base fields F_{specA.q} and F_{specB.q} differ")
    for r in range(1, R + 1):
        nA, nB = level(specA, r).order, bundleB.level(r).order
        if nA != nB:
            raise NoTwistFound(f"no group isomorphism: orders {nA} != {nB} at level {r}")
    for r in range(1, R + 1):
        if r not in bundleB.psi:
            raise IncompleteBundle(f"bundle carries no correspondence at level {r}")
        bad = check_psi_isomorphism(bundleB.psi[r], level(specA, r).structure.factors,
                                    bundleB.level(r).factors)
        if bad:
            raise NoTwistFound(f"level {r}: {bad}")

    # points of B from the L-data alone, decoded through B's group
    detected = {}
    for r in range(1, R + 1):
        LB = level(specB, r)
        stB = LB.structure
        if tuple(stB.factors) != tuple(bundleB.level(r).factors):
            raise NoTwistFound(f"level {r}: bundle group does not match its curve")
        coords = detect_points(invert_counts(bundleB, r, 1))
        by_class = _points_by_class(LB)
        pts = {}
        for e in coords:
            code = stB.elements[e]
            if code not in by_class:
                raise NoTwistFound(f"level {r}: detected element {e} is not a point class of B")
            pts[e] = by_class[code]
        if len(pts) != len(LB.points):
            raise NoTwistFound(f"level {r}: detected {len(pts)} points, curve has {len(LB.points)}")
        detected[r] = pts

    # psi must send points of A to points of B
    for r in range(1, R + 1):
        LA = level(specA, r)
        psi_r = bundleB.psi[r]
        for a, code in LA.points:
            if psi_r[LA.structure.coords[code]] not in detected[r]:
                raise NoTwistFound(f"level {r}: psi does not send the point {a} of A to a point of B")

    r0 = next((r for r in range(1, R + 1) if len(level(specA, r).points) >= 3), None)
    if r0 is None:
        raise NoTwistFound(f"fewer than three points on U up to level {R}")
    LA0 = level(specA, r0)
    F0 = LA0.F
    triple = [a for a, _ in LA0.points[:3]]
    images = [detected[r0][bundleB.psi[r0][LA0.structure.coords[code]]] for _, code in LA0.points[:3]]

    span = specA.k * math.lcm(*range(1, R + 1))
    verified, rejected = [], []
    for l in range(span):
        src = [a if a == INF else F0.frobenius(a, l) for a in triple]
        alpha = mobius_from_triples(F0, src, images)
        reason = _verify_candidate(specA, specB, bundleB, alpha, l, r0, R)
        if reason is None:
            (u, v), _ = alpha
            base = (_pull_back_to_base(specA.field, F0, u), _pull_back_to_base(specA.field, F0, v))
            verified.append((((base[0], base[1]), (0, 1)), l))
        else:
            rejected.append((l, reason))
    if not verified:
        raise NoTwistFound("no candidate map verifies", rejected)
    verified.sort(key=lambda w: (w[1], w[0]))
    alpha, l = verified[0]
    return TwistWitness(alpha, l, R, "verified", verified, rejected)


def _verify_candidate(specA, specB, bundleB, alpha, l, r0, R):
    F0 = level(specA, r0).F
    base = specA.field
    (a, b), (c, d) = alpha
    if c != 0:
        return "alpha moves the base point at infinity"
    u, v = a, b
    # descent: alpha must be defined over F_q
    bu, bv = _pull_back_to_base(base, F0, u), _pull_back_to_base(base, F0, v)
    if bu is None or bv is None:
        return "alpha is not defined over F_q"
    # (iii) commutes with the q-power Frobenius on points at every level
    for r in range(1, R + 1):
        LA = level(specA, r)
        F = LA.F
        emb = embedding(base, F)
        ur, vr = emb[bu], emb[bv]
        for pt, _ in LA.points:
            if pt == INF:
                continue
            lhs = F.add(F.mul(ur, F.frobenius(pt, specA.k)), vr)
            rhs = F.frobenius(F.add(F.mul(ur, pt), vr), specA.k)
            if lhs != rhs:
                return f"alpha does not commute with Frobenius at level {r}"
    # (i) pullback of m_B equals the Frobenius twist of m_A
    n = specB.degree
    pulled = pcompose_linear(base, specB.modulus, bu, bv)
    scale = base.inv(base.pow(bu, n))
    pulled = tuple(base.mul(x, scale) for x in pulled)
    if pulled != pfrobenius(base, specA.modulus, l):
        return "alpha does not carry the twisted modulus of A to the modulus of B"
    # (ii) psi agrees with alpha_* o Frob^l on every class at every level
    for r in range(1, R + 1):
        LA, LB = level(specA, r), level(specB, r)
        emb = embedding(base, LB.F)
        a_r = ((emb[bu], emb[bv]), (0, 1))
        stA, stB = LA.structure, LB.structure
        psi_r = bundleB.psi[r]
        for code in LA.classes:
            code = int(code)
            image = LB.code(pushforward_class(LA, LB, a_r, LA.rep(code), l))
            if psi_r[stA.coords[code]] != stB.coords[image]:
                return f"induced map disagrees with psi at level {r}"
    return None


# ---------------------------------------------------------------------------
# Maps between moduli with the same support

def _support(spec):
    return {g.coeffs for g, _ in spec.factorization}


def _triangle_map(src, dst, r):
    """Whether a homomorphism J_src -> J_dst commuting with the Abel-Jacobi maps exists.

    Walk the Cayley graph of J_src generated by point classes, assigning
    phi(g * j(u)) = phi(g) * j'(u); a conflict means no such map exists.
    Returns (exists, injective).
    """
    LS, LD = level(src, r), level(dst, r)
    gens = [(LS.point_class_code(a), LD.point_class_code(a)) for a, _ in LS.points]
    phi = {1: 1}
    frontier = [1]
    while frontier:
        nxt = []
        for g in frontier:
            for gs, gd in gens:
                h = LS.mul_codes(g, gs)
                img = LD.mul_codes(phi[g], gd)
                if h in phi:
                    if phi[h] != img:
                        return False, False
                else:
                    phi[h] = img
                    nxt.append(h)
        frontier = nxt
    if len(phi) != LS.order:
        return False, False
    return True, len(set(phi.values())) == len(phi)


def verify_af13(specA, specB, levels=2):
    """Compare two moduli with the same support on the same curve, levels 1..levels.

    A commuting isomorphism has to exist at every level; a coincidence at
    a single small level is reported but does not count.
    """
    if specA.kind != "genus0" or specB.kind != "genus0":
        raise InvalidComparison("only genus0 moduli are compared")
    if specA.field != specB.field:
        raise InvalidComparison("curves are over different fields")
    if _support(specA) != _support(specB):
        raise InvalidComparison("moduli have different supports")
    per_level = []
    iso_everywhere = True
    for r in range(1, levels + 1):
        a_to_b, a_to_b_inj = _triangle_map(specA, specB, r)
        b_to_a, b_to_a_inj = _triangle_map(specB, specA, r)
        oA, oB = order_formula(specA, r), order_formula(specB, r)
        iso = oA == oB and ((a_to_b and a_to_b_inj) or (b_to_a and b_to_a_inj))
        iso_everywhere &= iso
        per_level.append({
            "r": r, "order_A": oA, "order_B": oB,
            "commuting_map_A_to_B": a_to_b, "commuting_map_B_to_A": b_to_a,
            "isomorphism": bool(iso),
        })
    same = specA.modulus == specB.modulus
    return {
        "mA": format_poly(specA.field, specA.modulus),
        "mB": format_poly(specB.field, specB.modulus),
        "order_A": per_level[0]["order_A"],
        "order_B": per_level[0]["order_B"],
        "surjection_B_to_A": modulus_divides(specA, specB),
        "surjection_A_to_B": modulus_divides(specB, specA),
        "levels": per_level,
        "isomorphism": bool(iso_everywhere),
        "verdict": "identity" if same and iso_everywhere else "no isomorphism",
    }
