"""Acceptance suite: one test per criterion, summarized by conftest.py."""

import time

import pytest

from genjac.genus0 import JmClass, enumerate_order, genus0_spec, level, order_formula, points_of_U
from genjac.lfunctions import (
    character_from_values, lfun_divisor_sum, lfun_divisor_sum_all, lfun_euler_all, polynomial_part,
    weil_magnitudes,
)
from genjac.model_checks import fixed_point_counts, generation_cover, stab_counts, unique_sum_fraction
from genjac.reconstruction import (
    brute_force_count_table, build_bundle, detect_points, invert_counts, plant_twist, search_twist,
    verify_af13,
)
from genjac.errors import NoTwistFound

REFERENCE = [(3, "x^3"), (3, "x*(x^2+1)"), (2, "x^3")]


def ref_specs():
    return [genus0_spec(q, m) for q, m in REFERENCE]


@pytest.mark.criterion(1, "group order: formula == enumeration for x^3 over F_3, r = 1, 2")
def test_group_realization():
    s = genus0_spec(3, "x^3")
    start = time.perf_counter()
    assert order_formula(s, 1) == enumerate_order(s, 1) == 9
    r2_formula, r2_enum = order_formula(s, 2), enumerate_order(s, 2)
    elapsed = time.perf_counter() - start
    print(f"#J(F_3) = 9, #J(F_9): formula {r2_formula}, enumeration {r2_enum}, {elapsed:.3f}s")
    assert r2_formula == r2_enum
    assert elapsed < 1.0


@pytest.mark.criterion(2, "Abel-Jacobi injective on all reference specs, r <= 3")
def test_abel_jacobi_injectivity():
    for s in ref_specs():
        for r in (1, 2, 3):
            classes = [c for _, c in points_of_U(s, r)]
            assert len(set(classes)) == len(classes)


@pytest.mark.criterion(3, "Euler product == divisor sum for every character, B = deg m + 3, r <= 2")
def test_lfunction_double_computation():
    start = time.perf_counter()
    for s in ref_specs():
        B = s.degree + 3
        for r in (1, 2):
            euler = lfun_euler_all(s, r, B)
            divsum = lfun_divisor_sum_all(s, r, B)
            assert len(euler) == level(s, r).order
            assert [e.coeffs for e in euler] == [d.coeffs for d in divsum]
    elapsed = time.perf_counter() - start
    print(f"double computation took {elapsed:.2f}s")
    assert elapsed < 30


@pytest.mark.criterion(4, "trivial character L-series is the zeta function of U")
def test_zeta_specialization():
    s = genus0_spec(3, "x^3")
    B = s.degree + 3
    triv = lfun_euler_all(s, 1, B)[0]
    assert triv.chi.is_trivial
    assert triv.coeffs == tuple(3 ** d for d in range(B + 1))
    assert triv.coeffs[1] == len(points_of_U(s, 1)) == 3


@pytest.mark.criterion(5, "(1 - T) L has degree <= deg m - 1; the special character gives 1 - T")
def test_degree_bound():
    for s in ref_specs():
        for r in (1, 2):
            for series in lfun_divisor_sum_all(s, r, s.degree + 3):
                if not series.chi.is_trivial:
                    assert polynomial_part(series, s).degree <= s.degree - 1
    s = genus0_spec(3, "x^3")
    chi = character_from_values(s, 1, {JmClass(1, (1, 1)): 1, JmClass(1, (1, 0, 1)): 0})
    poly = polynomial_part(lfun_divisor_sum(chi, s, 1, 6), s)
    assert poly.coeffs == (1, chi.carrier.P - 1)


@pytest.mark.criterion(6, "inverse roots have |alpha| within 1e-6 of 1 or sqrt(q^r)")
def test_weil_magnitudes():
    worst = 0.0
    for s in ref_specs():
        for r in (1, 2):
            targets = (1.0, (s.q ** r) ** 0.5)
            for series in lfun_divisor_sum_all(s, r, s.degree + 3):
                if series.chi.is_trivial:
                    continue
                for m in weil_magnitudes(polynomial_part(series, s)):
                    worst = max(worst, min(abs(m - t) for t in targets))
    print(f"largest deviation {worst:.2e}")
    assert worst < 1e-6


@pytest.mark.criterion(7, "Fourier inversion reproduces the brute-force count table, d <= 4, r <= 2")
def test_fourier_round_trip():
    for s in ref_specs():
        bundle = build_bundle(s, 2)
        for r in (1, 2):
            assert invert_counts(bundle, r, 4).counts == brute_force_count_table(s, r, 4).counts


@pytest.mark.criterion(8, "detected points == image of points_of_U, r <= 3")
def test_point_detection():
    for s in ref_specs():
        bundle = build_bundle(s, 3, B=1)
        for r in (1, 2, 3):
            st = level(s, r).structure
            truth = {st.coords[code] for _, code in level(s, r).points}
            assert detect_points(invert_counts(bundle, r, 1)) == truth


@pytest.mark.criterion(9, "planted shift and Frobenius twists are recovered, R = 2, < 60 s each")
def test_reconstruction_positive():
    a = genus0_spec(3, "x^3")
    start = time.perf_counter()
    shifted = plant_twist(build_bundle(genus0_spec(3, "(x+2)^3"), 2), a, ((1, 1), (0, 1)))
    w = search_twist(a, shifted, 2)
    t_shift = time.perf_counter() - start
    assert (w.alpha, w.frobenius_exponent, w.verified_levels) == (((1, 1), (0, 1)), 0, 2)
    start = time.perf_counter()
    frob = plant_twist(build_bundle(a, 2), a, ((1, 0), (0, 1)), frobenius=1)
    w = search_twist(a, frob, 2)
    t_frob = time.perf_counter() - start
    assert (w.alpha, w.frobenius_exponent, w.verified_levels) == (((1, 0), (0, 1)), 1, 2)
    print(f"shift {t_shift:.2f}s, Frobenius {t_frob:.2f}s")
    assert t_shift < 60 and t_frob < 60


@pytest.mark.criterion(10, "x^3 vs x(x^2+1) over F_3: NoTwistFound at the group-order check")
def test_reconstruction_negative():
    a = genus0_spec(3, "x^3")
    b = build_bundle(genus0_spec(3, "x*(x^2+1)"), 2)
    with pytest.raises(NoTwistFound) as info:
        search_twist(a, b, 2)
    assert "orders 9 != 8" in info.value.reason


@pytest.mark.criterion(11, "x^2 vs x^3: surjection one way, orders 3 < 9; equal moduli: identity")
def test_af12_af13_shadow():
    x2, x3 = genus0_spec(3, "x^2", check_dimension=False), genus0_spec(3, "x^3")
    rep = verify_af13(x2, x3)
    assert rep["surjection_B_to_A"] and not rep["surjection_A_to_B"]
    assert rep["order_A"] == 3 < rep["order_B"] == 9
    assert not rep["isomorphism"]
    rep = verify_af13(x3, x3)
    assert rep["isomorphism"] and rep["verdict"] == "identity"


@pytest.mark.criterion(12, "model checks on (3, x^3): stab, generation, fixed points, unique sums")
def test_model_checks():
    s = genus0_spec(3, "x^3")
    start = time.perf_counter()
    for r in range(1, 5):
        rep = stab_counts(s, r)
        assert rep.maximum <= s.degree + 2
    for r in (1, 2, 3):
        assert generation_cover(s, r) <= 2 * s.pi
        assert fixed_point_counts(s, r).maximum <= 2
    fractions = [unique_sum_fraction(s, r) for r in (1, 2, 3)]
    assert fractions == sorted(fractions)
    elapsed = time.perf_counter() - start
    print(f"model checks took {elapsed:.2f}s, unique-sum fractions {[str(f) for f in fractions]}")
    assert elapsed < 300


@pytest.mark.criterion(13, "elliptic tier: #J_m(F_5) = #E(F_5) * 4 by enumeration; associativity")
def test_elliptic_tier():
    elliptic = pytest.importorskip("genjac.elliptic")
    spec = elliptic.elliptic_spec(5, 1, 0, elliptic.REFERENCE_MODULUS)
    E = elliptic.ec_points(elliptic.curve_of(spec), 1)
    ray = elliptic.ray_level(spec, 1)
    assert ray.order == len(E) * (5 - 1) ** (len(spec.modulus_points) - 1)
    assert ray.order == elliptic.brute_force_order(spec, 1)
    assert elliptic.associativity_failures(spec, 1, trials=100, seed=0) == 0
