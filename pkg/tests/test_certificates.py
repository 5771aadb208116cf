import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborlab import certificates as cert
from gaborlab import families
from gaborlab.lattice import ProductForm, same_coset, sublattice_embedding


def brute_compositions(n, d):
    return [c for c in itertools.product(range(1, n + 1), repeat=d) if sum(c) == n]


def test_find_splittings_examples():
    assert [s.l for s in cert.find_splittings([F(6, 5), F(6, 5)], 2)] == [(1, 1)]
    assert cert.find_splittings([F(4, 5), F(4, 5)], 2) == []
    assert [s.l for s in cert.find_splittings([F(3, 2), F(9, 2)], 5)] == [(1, 4)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 12), st.data())
def test_find_splittings_is_brute_force(d, n, data):
    dets = data.draw(st.lists(st.fractions(F(1, 2), F(13), max_denominator=7), min_size=d, max_size=d))
    got = [s.l for s in cert.find_splittings(dets, n)]
    expected = sorted(c for c in brute_compositions(n, d) if all(l < x for l, x in zip(c, dets)))
    assert got == expected
    for s in cert.find_splittings(dets, n):
        assert s.n == n


def test_relevant_splittings_examples():
    assert [s.l for s in cert.characterize_relevant_splittings(2, 2)] == [(1, 1)]
    assert [s.l for s in cert.characterize_relevant_splittings(2, 5)] == [(1, 4), (4, 1)]
    assert sorted(s.l for s in cert.characterize_relevant_splittings(3, 4)) == \
        [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def test_skew_certificate():
    L = families.skew(F(7, 10), F(7, 10))
    c = cert.search_incompleteness_certificate(L)
    assert c.index == 2
    assert c.splitting.l == (1, 1)
    assert c.per_grouping_density == (F(5, 7), F(5, 7))
    assert c.product_form.block_dets == (F(7, 5), F(7, 5))
    js = c.to_json()
    assert js["cosets"] == [["0", "0", "0", "0"], ["0", "0", "7/10", "7/10"]]
    assert js["per_grouping_density"] == ["5/7", "5/7"]
    assert set(js) >= {"sublattice_generator", "index", "splitting", "cosets", "per_grouping_density"}


def test_build_with_given_sublattice():
    a = b = F(7, 10)
    L = families.skew(a, b)
    pf = ProductForm((((1, 0), (0, 2 * a)), ((1, 0), (0, 2 * b))), (0, 1))
    c = cert.build_incompleteness_certificate(L, pf)
    assert c.index == 2 and c.splitting.l == (1, 1)


def test_cor6_certificate():
    c = cert.search_incompleteness_certificate(families.cor6(3, F(2, 5), F(7, 10)))
    assert c.splitting.l == (1, 2)
    assert c.index == 3
    assert c.groupings == ((0,), (1, 2))


def test_separable_index_one_has_none():
    L = families.separable(F(9, 10), F(9, 10))
    pf = ProductForm((((1, 0), (0, F(9, 10))), ((1, 0), (0, F(9, 10)))), (0, 1))
    assert cert.build_incompleteness_certificate(L, pf) is None


@settings(max_examples=40, deadline=None)
@given(st.fractions(F(1, 10), F(2), max_denominator=10), st.fractions(F(1, 10), F(2), max_denominator=10))
def test_certificate_invariants(a, b):
    L = families.skew(a, b)
    c = cert.search_incompleteness_certificate(L)
    if c is None:
        return
    flat = sorted(i for g in c.groupings for i in g)
    assert flat == list(range(c.index))
    assert all(x < 1 for x in c.per_grouping_density)
    dets = c.product_form.block_dets
    assert all(l < dt for l, dt in zip(c.splitting.l, dets))
    emb = sublattice_embedding(c.product_form.lattice(), L)
    assert emb.index == c.index
    for u, v in itertools.combinations(c.cosets, 2):
        assert not same_coset(u, v, emb.sub)


def test_certificate_found_when_density_already_decides():
    # D(L) < 1 with a coset splitting: still reported, for consistency
    L = families.skew(F(3, 2), F(3, 2))
    assert L.density < 1
    c = cert.search_incompleteness_certificate(L)
    assert c is not None
    prod = 1
    for dt in c.product_form.block_dets:
        prod *= dt
    assert prod > c.index


def test_frame_certificate_skew():
    c = cert.certify_frame_by_sublattice(families.skew(F(2, 5), F(2, 5)))
    assert c.product_form.block_dets == (F(4, 5), F(4, 5))
    assert c.index == 2
    assert all(x > 1 for x in c.factor_densities)


def test_frame_certificate_separable_itself():
    c = cert.certify_frame_by_sublattice(families.separable(F(4, 5), F(4, 5)))
    assert c.index == 1


@pytest.mark.parametrize("bound", [1, 2, 4, 8])
def test_no_frame_certificate_when_a_factor_is_too_sparse(bound):
    assert cert.certify_frame_by_sublattice(families.separable(F(6, 5), F(1, 2)), bound) is None


def test_candidates_are_sublattices_in_order():
    L = families.skew(F(1, 3), F(1, 4))
    seen = []
    for pf, emb in cert.candidate_product_sublattices(L, 8):
        assert sublattice_embedding(pf.lattice(), L).index == emb.index
        seen.append(emb.index)
    assert seen == sorted(seen)
    assert seen[0] == 2


def test_critical_cosets_skew_half():
    c = cert.certify_complete_not_frame(families.skew(F(1, 2), F(1, 2)))
    assert c is not None
    assert c.product_form.block_dets == (1, 1)
    assert c.assignment == (0, 1)


def test_critical_cosets_threed():
    assert cert.certify_complete_not_frame(families.threed(F(1, 2), F(1, 2), 1)) is not None
    assert cert.certify_complete_not_frame(families.threed(F(2, 5), F(2, 5), 1)) is not None
    assert cert.certify_complete_not_frame(families.threed(F(2, 5), F(2, 5), F(9, 10))) is None


def test_critical_cosets_need_a_critical_factor():
    assert cert.certify_complete_not_frame(families.skew(F(2, 5), F(2, 5))) is None
    assert cert.certify_complete_not_frame(families.skew(F(1, 2), F(3, 10))) is None


def test_coset_only_region_k5():
    grid = [F(1, 40) + F(j, 20) for j in range(40)]
    region = cert.coset_only_region(5, grid, grid)
    assert {l for l, cells in region.items() if cells} == {1, 4}
    for a, b in region[1]:
        assert a * b * 5 <= 1 and a > F(1, 5) and b > F(4, 5)


@pytest.mark.parametrize("d, n", [(d, n) for d in range(2, 6) for n in range(d, 11)])
def test_relevant_splittings_are_product_sum_solutions(d, n):
    got = [s.l for s in cert.characterize_relevant_splittings(d, n)]
    expected = []
    for c in brute_compositions(n, d):
        prod = 1
        for x in c:
            prod *= x
        if prod < n:
            expected.append(c)
    assert sorted(got) == sorted(expected)


def test_relevant_splitting_beyond_all_but_one_pattern():
    # (2, 2, 1) satisfies the product-sum inequality and is realised by
    # blocks whose determinants multiply to at most n = 5
    dets = [F(21, 10), F(21, 10), F(11, 10)]
    assert dets[0] * dets[1] * dets[2] <= 5
    assert [s.l for s in cert.find_splittings(dets, 5)] == [(2, 2, 1)]
    assert (2, 2, 1) in [s.l for s in cert.characterize_relevant_splittings(3, 5)]
