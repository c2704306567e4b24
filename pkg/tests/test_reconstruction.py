import json

import pytest

from genjac.algebra import field, find_fourier_carrier
from genjac.errors import (
    CarrierTooSmall, IncompleteBundle, InjectivityViolation, InvalidComparison, NoTwistFound,
)
from genjac.genus0 import INF, genus0_spec, level
from genjac.reconstruction import (
    CountTable, brute_force_count_table, build_bundle, bundle_from_json, bundle_to_json,
    check_lfun_matching, detect_points, invert_counts, mobius_from_triples, plant_identity,
    plant_twist, search_twist, verify_af13,
)

REFERENCE = [(3, "x^3"), (3, "x*(x^2+1)"), (2, "x^3")]


@pytest.fixture(scope="module")
def x3_bundle():
    return build_bundle(genus0_spec(3, "x^3"), 2)


def test_invert_counts_examples(x3_bundle):
    s = x3_bundle.spec
    ct = invert_counts(x3_bundle, 1, 4)
    st = level(s, 1).structure
    identity = st.coords[1]
    assert ct.counts[identity][0] == 1
    assert all(row[0] == 0 for e, row in ct.counts.items() if e != identity)
    ones = {e for e, row in ct.counts.items() if row[1] == 1}
    assert ones == {st.coords[c] for c in (1, level(s, 1).code((1, 2)), level(s, 1).code((1, 1)))}
    # 6 pairs of rational points and 3 quadratic points
    assert sum(row[2] for row in ct.counts.values()) == 9


@pytest.mark.parametrize("q,m", REFERENCE)
def test_inversion_matches_brute_force(q, m):
    s = genus0_spec(q, m)
    bundle = build_bundle(s, 2)
    for r in (1, 2):
        assert invert_counts(bundle, r, 4).counts == brute_force_count_table(s, r, 4).counts


def test_count_table_totals():
    s = genus0_spec(3, "x^3")
    ct = brute_force_count_table(s, 1, 4)
    # effective divisors of degree d on U: trivial-character coefficient 3^d
    assert [sum(row[d] for row in ct.counts.values()) for d in range(5)] == [1, 3, 9, 27, 81]


@pytest.mark.parametrize("q,m", REFERENCE)
def test_detection_equals_points(q, m):
    s = genus0_spec(q, m)
    bundle = build_bundle(s, 3, B=1)
    for r in (1, 2, 3):
        st = level(s, r).structure
        truth = {st.coords[code] for _, code in level(s, r).points}
        assert detect_points(invert_counts(bundle, r, 1)) == truth


def test_detect_errors():
    with pytest.warns(UserWarning, match="NoPoints"):
        assert detect_points(CountTable(1, (2,), {(0,): [1, 0], (1,): [0, 0]})) == set()
    with pytest.raises(InjectivityViolation):
        detect_points(CountTable(1, (2,), {(0,): [1, 2], (1,): [0, 0]}))


def test_incomplete_bundle(x3_bundle):
    data = bundle_to_json(x3_bundle)
    data["levels"][0]["series"] = data["levels"][0]["series"][:-1]
    with pytest.raises(IncompleteBundle):
        invert_counts(bundle_from_json(data), 1)
    with pytest.raises(IncompleteBundle):
        invert_counts(x3_bundle, 5)


def test_carrier_too_small():
    s = genus0_spec(3, "x^3")
    bundle = build_bundle(s, 1, B=3)
    lv = bundle.levels[1]
    # same counts pushed through a carrier that cannot hold them
    small = find_fourier_carrier(3, 6)
    big = lv.carrier
    lifted = invert_counts(bundle, 1).counts
    lv.carrier = small
    lv.coeffs = []
    for ex in lv.exponents:
        row = []
        for d in range(4):
            acc = 0
            for e, counts in lifted.items():
                phase = sum(3 // n * a * b for n, a, b in zip(lv.factors, ex, e)) % 3
                acc += counts[d] * small.root(phase)
            row.append(acc % small.P)
        lv.coeffs.append(row)
    assert big != small
    with pytest.raises(CarrierTooSmall):
        invert_counts(bundle, 1)


def test_json_round_trip(x3_bundle):
    plant_identity(x3_bundle)
    text = json.dumps(bundle_to_json(x3_bundle))
    back = bundle_from_json(text)
    assert bundle_to_json(back) == bundle_to_json(x3_bundle)
    assert back.psi == x3_bundle.psi


def test_matching_self_and_shift(x3_bundle):
    s = x3_bundle.spec
    plant_identity(x3_bundle)
    assert check_lfun_matching(x3_bundle, x3_bundle).ok
    shifted = plant_twist(build_bundle(genus0_spec(3, "(x+2)^3"), 2), s, ((1, 1), (0, 1)))
    assert check_lfun_matching(x3_bundle, shifted).ok


def test_matching_detects_wrong_psi(x3_bundle):
    s = x3_bundle.spec
    wrong = build_bundle(s, 2)
    plant_twist(wrong, s, ((2, 0), (0, 1)))
    # scrambling psi at level 2 by a non-homomorphic swap is rejected
    table = dict(wrong.psi[2])
    keys = sorted(table)
    table[keys[1]], table[keys[2]] = table[keys[2]], table[keys[1]]
    wrong.psi[2] = table
    report = check_lfun_matching(x3_bundle, wrong)
    assert not report.ok


def test_matching_order_mismatch(x3_bundle):
    other = build_bundle(genus0_spec(3, "x*(x^2+1)"), 1)
    report = check_lfun_matching(x3_bundle, other, {1: {}})
    assert not report.ok and "9 != 8" in report.reason


def test_mobius_from_triples():
    F = field(3)
    assert mobius_from_triples(F, [INF, 0, 1], [INF, 1, 2]) == ((1, 1), (0, 1))
    M = mobius_from_triples(F, [0, 1, 2], [1, 2, 0])
    assert M == ((1, 1), (0, 1))


def test_search_twist_shift():
    a = genus0_spec(3, "x^3")
    b = plant_twist(build_bundle(genus0_spec(3, "(x+2)^3"), 2), a, ((1, 1), (0, 1)))
    w = search_twist(a, b, 2)
    assert (w.alpha, w.frobenius_exponent, w.verified_levels) == (((1, 1), (0, 1)), 0, 2)


def test_search_twist_frobenius():
    a = genus0_spec(3, "x^3")
    b = plant_twist(build_bundle(a, 2), a, ((1, 0), (0, 1)), frobenius=1)
    w = search_twist(a, b, 2)
    assert (w.alpha, w.frobenius_exponent) == (((1, 0), (0, 1)), 1)
    assert [l for l, _ in w.rejected] == [0]


def test_search_twist_self_and_automorphism():
    a = genus0_spec(3, "x^3")
    w = search_twist(a, plant_identity(build_bundle(a, 2)), 2)
    assert (w.alpha, w.frobenius_exponent) == (((1, 0), (0, 1)), 0)
    w = search_twist(a, plant_twist(build_bundle(a, 2), a, ((2, 0), (0, 1))), 2)
    assert (w.alpha, w.frobenius_exponent) == (((2, 0), (0, 1)), 0)


def test_search_twist_extension_field():
    # q = 4: the Frobenius x -> x^2 is a genuine twist already at level 1
    a = genus0_spec(4, "x^3 + [0,1]")
    b_spec = genus0_spec(4, "x^3 + [1,1]")
    b = plant_twist(build_bundle(b_spec, 1), a, ((1, 0), (0, 1)), frobenius=1)
    w = search_twist(a, b, 1)
    assert w.frobenius_exponent == 1 and w.alpha == ((1, 0), (0, 1))


def test_search_twist_negative():
    a = genus0_spec(3, "x^3")
    b = build_bundle(genus0_spec(3, "x*(x^2+1)"), 2)
    with pytest.raises(NoTwistFound, match="9 != 8"):
        search_twist(a, b, 2)


def test_search_twist_rejects_non_geometric_psi():
    a = genus0_spec(3, "x^3")
    b = build_bundle(a, 2)
    plant_identity(b)
    # compose psi with inversion: still an isomorphism, but it moves points off U
    for r, table in b.psi.items():
        factors = level(a, r).structure.factors
        b.psi[r] = {k: tuple((-x) % n for x, n in zip(v, factors)) for k, v in table.items()}
    with pytest.raises(NoTwistFound):
        search_twist(a, b, 2)


def test_verify_af13_examples():
    x2 = genus0_spec(3, "x^2", check_dimension=False)
    x3 = genus0_spec(3, "x^3")
    rep = verify_af13(x2, x3)
    assert rep["surjection_B_to_A"] and not rep["surjection_A_to_B"]
    assert (rep["order_A"], rep["order_B"]) == (3, 9)
    assert rep["verdict"] == "no isomorphism"
    assert verify_af13(x3, x3)["verdict"] == "identity"
    rep = verify_af13(genus0_spec(3, "x^2*(x+1)"), genus0_spec(3, "x*(x+1)^2"))
    assert not rep["surjection_A_to_B"] and not rep["surjection_B_to_A"]
    assert not rep["isomorphism"]
    with pytest.raises(InvalidComparison):
        verify_af13(x3, genus0_spec(3, "x*(x^2+1)"))
