import pytest

from genjac.genus0 import genus0_spec, level
from genjac.model_checks import (
    divisor_counts_by_class, fixed_point_counts, generation_cover, stab_counts,
    unique_sum_fraction,
)
from genjac.reconstruction import brute_force_count_table

REFERENCE = [(3, "x^3"), (3, "x*(x^2+1)"), (2, "x^3")]


def test_stab_examples():
    s = genus0_spec(3, "x^3")
    rep = stab_counts(s, 1)
    assert rep.counts[level(s, 1).code((1, 1))] == 1
    assert len(rep.counts) == 8
    assert rep.maximum <= 5 and rep.within_bound
    assert rep.identity_count == 3


def test_stab_counts_match_direct_definition():
    s = genus0_spec(3, "x*(x^2+1)")
    L = level(s, 2)
    pts = {code for _, code in L.points}
    rep = stab_counts(s, 2)
    for a in list(rep.counts)[:20]:
        direct = sum(1 for u in pts if L.mul_codes(u, a) in pts)
        assert rep.counts[a] == direct


@pytest.mark.parametrize("q,m", REFERENCE)
def test_stab_bound_all_levels(q, m):
    s = genus0_spec(q, m)
    for r in range(1, 4):
        assert stab_counts(s, r).within_bound


def test_divisor_counts_agree_with_oracle():
    s = genus0_spec(3, "x^3")
    for r in (1, 2):
        oracle = brute_force_count_table(s, r, 2)
        ours = divisor_counts_by_class(s, r, 2)
        st = level(s, r).structure
        for i, code in enumerate(level(s, r).classes):
            assert oracle.counts[st.coords[int(code)]][2] == ours[i]


def test_unique_sum_fraction():
    s = genus0_spec(3, "x^3")
    assert int(divisor_counts_by_class(s, 1, 2).sum()) == 9
    fr = [unique_sum_fraction(s, r) for r in (1, 2, 3)]
    assert all(0 <= f <= 1 for f in fr)
    assert fr == sorted(fr)


@pytest.mark.parametrize("q,m", REFERENCE)
def test_generation_cover(q, m):
    s = genus0_spec(q, m)
    for r in (1, 2, 3):
        t = generation_cover(s, r)
        assert 1 <= t <= 2 * s.pi


def test_generation_trivial_group():
    assert generation_cover(genus0_spec(3, "x", check_dimension=False), 1) == 0


def test_fixed_points():
    rep = fixed_point_counts(genus0_spec(3, "x^3"), 1)
    assert rep.counts == {((2, 0), (0, 1)): 1}
    assert rep.identity_count == 3
    rep = fixed_point_counts(genus0_spec(3, "x*(x+1)*(x+2)"), 1)
    assert rep.counts[((1, 1), (0, 1))] == 1
    assert rep.maximum <= 2


@pytest.mark.parametrize("q,m", REFERENCE + [(5, "x^3"), (4, "x^3")])
def test_fixed_points_at_most_two(q, m):
    s = genus0_spec(q, m)
    for r in (1, 2, 3):
        assert fixed_point_counts(s, r).maximum <= 2
