"""Classification pipeline tests.

Candidate sets for the worked dimensions were recomputed by hand from the
offset products before the implementation; classification outcomes were
frozen only after cross-checking each degree against the recurrence
streams and the direct decision procedure.
"""
import math

import pytest

from mstiff.diophantine import dims_for_degree4, dims_for_degree5
from mstiff.search import (
    classify_degree,
    classify_dimension,
    divisor_candidates,
    resolve_theorem_tag,
    theorem_tags,
    verify_theorem,
)
from mstiff.stiffness import (
    bound_if_exceeded,
    n_upper_bound,
    top_coefficient_screen,
)


# --- divisor-product candidate sets --------------------------------------

def test_even_deg_candidates_dim10():
    c = divisor_candidates(10, False)
    assert c.thetas == (2, 3)
    assert c.products == (3, 15)
    # divisors of 15 shifted by 3: 5 -> 2, 15 -> 12; nothing from 3
    assert c.candidates == (2, 12)
    assert c.divisor_count == 6


def test_even_deg_candidates_dim12_dim14():
    c = divisor_candidates(12, False)
    assert c.thetas == (3, 4)
    assert c.products == (15, 35)
    assert c.candidates == (2, 3, 12, 31)
    c = divisor_candidates(14, False)
    assert c.products == (-15, -105)
    assert c.candidates == (2, 3, 11, 12, 17, 31, 101)


def test_odd_deg_candidates_dim26():
    c = divisor_candidates(26, True)
    assert c.thetas == (7, 8, 9, 10)
    assert c.products == (-10395, -45045, -135135, -328185)
    # n = 2 survives through 9 | 135135 being irrelevant (gcd(11, 6) = 1
    # and 11 | 45045): the degree-5 configuration lives here
    assert 2 in c.candidates
    assert len(c.candidates) == 23
    assert c.candidates[:6] == (2, 3, 4, 5, 7, 26)


def test_candidates_not_applicable():
    assert divisor_candidates(9, False) is None  # odd dimension
    assert divisor_candidates(8, False) is None  # below the even-deg range
    assert divisor_candidates(14, True) is None  # below the odd-deg range


def test_candidates_budget_refusal():
    assert divisor_candidates(10, False, divisor_budget=3) is None


def test_candidate_necessity_for_integral_top_coefficients():
    # whenever the top coefficients are integral the shifted divisor must
    # appear, so a pass of the cheap screen forces membership
    for dim, odd_deg in ((10, False), (12, False), (14, False),
                        (16, True), (20, True), (26, True)):
        cand = set(divisor_candidates(dim, odd_deg).candidates)
        for n in range(2, 80):
            m = 2 * n + 1 if odd_deg else 2 * n
            if top_coefficient_screen(m, dim) is None:
                assert n in cand, (dim, odd_deg, n)


# --- threshold comparison shortcut ---------------------------------------

def test_bound_if_exceeded_matches_thresholds():
    probes = (2, 3, 5, 17, 300, 10**4)
    for dim in (3, 4, 5, 6, 8, 9, 10, 12, 14, 16, 18, 23, 100):
        for odd_deg in (False, True):
            full = n_upper_bound(dim, odd_deg)
            for n in probes + (full.threshold - 1, full.threshold,
                               full.threshold + 50):
                hit = bound_if_exceeded(dim, odd_deg, n)
                if n >= full.threshold:
                    assert hit is not None and hit.threshold == full.threshold
                    assert hit.tag == full.tag
                    assert hit.conservative == full.conservative
                else:
                    assert hit is None


def test_bound_if_exceeded_dim2_and_huge():
    assert n_upper_bound(2, False) is None
    assert bound_if_exceeded(2, True, 10**30) is None
    # generic even dimension, degree parameter far beyond the product
    hit = bound_if_exceeded(40, False, 10**40)
    assert hit is not None
    assert hit.threshold == n_upper_bound(40, False).threshold


# --- dimension classification --------------------------------------------

def test_classify_dimension_2():
    c = classify_dimension(2)
    assert c.all_degrees and c.complete
    assert c.degrees == ()
    assert c.branches[0].method == "all-degrees"


def test_classify_dimension_rejects_bad_input():
    with pytest.raises(ValueError):
        classify_dimension(1)


def test_classify_dimension_small_odd():
    for dim, degrees in ((3, (1, 2, 3)), (5, (1, 2, 3)), (23, (1, 2, 3, 4))):
        c = classify_dimension(dim)
        assert not c.all_degrees
        assert c.degrees == degrees
        assert c.complete
        assert all(b.method == "bounded-scan" for b in c.branches)
        assert all(b.bound.conservative for b in c.branches)


def test_classify_dimension_4():
    c = classify_dimension(4)
    assert c.degrees == (1, 2, 3, 5)
    assert c.complete
    even, odd = c.branches
    assert [r.status for r in even.candidates] == ["root-certification"] * 4
    assert [(r.n, r.m, r.status) for r in odd.candidates] == [(2, 5, "exists")]


def test_classify_dimension_6_8():
    for dim in (6, 8):
        c = classify_dimension(dim)
        assert c.degrees == (1, 2, 3)
        assert c.complete


def test_classify_dimension_10():
    c = classify_dimension(10)
    assert c.degrees == (1, 2, 3)
    assert c.complete
    even, odd = c.branches
    assert even.method == "divisor-product"
    assert even.raw_candidates == (2, 12)
    assert [(r.m, r.status) for r in even.candidates] == [
        (4, "newton-screen"), (24, "coefficient-screen"),
    ]
    assert odd.method == "bounded-scan"
    assert odd.raw_candidates == ()  # threshold 2 leaves nothing to scan


def test_classify_dimension_26():
    c = classify_dimension(26)
    assert c.degrees == (1, 2, 3, 5)
    assert c.complete
    even, odd = c.branches
    assert even.method == "divisor-product" and odd.method == "divisor-product"
    assert even.existing == ()
    assert odd.existing == (5,)
    by_n = {r.n: r.status for r in odd.candidates}
    assert by_n[2] == "exists"


def test_classify_dimension_241_has_both_streams():
    c = classify_dimension(241)
    assert c.degrees == (1, 2, 3, 4, 5)
    assert c.complete


def test_classify_dimension_124_over_budget_still_finds_degree5():
    # the offset products for dimension 124 have tens of millions of
    # divisors; the branch must stay open yet still decide degrees 4/5
    c = classify_dimension(124)
    assert c.degrees == (1, 2, 3, 5)
    assert not c.complete
    for branch in c.branches:
        assert branch.method == "stream-check"
        assert "exceeds budget" in branch.detail
    assert c.branches[1].existing == (5,)


def test_classified_degrees_match_streams():
    deg4 = set(dims_for_degree4(700))
    deg5 = set(dims_for_degree5(700))
    for dim in (3, 4, 23, 26, 124, 241):
        got = set(classify_dimension(dim).degrees)
        assert (4 in got) == (dim in deg4), dim
        assert (5 in got) == (dim in deg5), dim


# --- degree classification -----------------------------------------------

def test_classify_degree_low():
    for m in (1, 2, 3):
        c = classify_degree(m)
        assert c.all_dims and c.complete
        assert c.method == "closed-form"
    with pytest.raises(ValueError):
        classify_degree(0)


def test_classify_degree_4():
    c = classify_degree(4)
    assert c.complete and c.method == "pell-stream"
    assert c.dims == (2, 23, 241, 2399, 23761, 235223, 2328481, 23049599)
    assert classify_degree(4, dim_limit=300).dims == (2, 23, 241)


def test_classify_degree_5():
    c = classify_degree(5)
    assert c.complete
    assert c.dims == (
        2, 4, 26, 124, 241, 1079, 4801, 9244, 41066, 182404,
        351121, 1559519, 6926641, 13333444, 59220746,
    )


def test_classify_degree_6_is_bounded():
    c = classify_degree(6, scan_cap=200, cubic_x_bound=100)
    assert c.dims == (2,)
    assert not c.complete
    assert c.method == "bounded-search"
    assert c.evidence[-1] == "search bounded; larger dimensions unexplored"
    assert any("dimensions 3..200" in line for line in c.evidence)
    assert any("cubic points" in line for line in c.evidence)


# --- theorem recomputation -----------------------------------------------

def test_theorem_tag_resolution():
    tags = theorem_tags()
    assert len(tags) == 13
    assert "dim10-even-deg" in tags and "odd-dim-valuation" in tags
    assert resolve_theorem_tag("dim4-even-deg") == "dim4-even-deg"
    assert resolve_theorem_tag("thm-4.4") == "dim4-even-deg"
    assert resolve_theorem_tag("thm-3.10") == "odd-deg-divisor-product"
    with pytest.raises(KeyError):
        resolve_theorem_tag("thm-9.9")


def test_verify_small_dimension_branches():
    for tag, alias in (
        ("dim4-even-deg", "thm-4.4"),
        ("dim4-odd-deg", "thm-4.5"),
        ("dim6-even-deg", "thm-6.2"),
        ("dim6-odd-deg", "thm-4.7"),
        ("dim10-odd-deg", "thm-4.10"),
    ):
        report = verify_theorem(tag)
        assert report.passed, report.checks
        assert report.alias == alias
        assert report.tag == tag


def test_verify_dim8_and_truncation():
    report = verify_theorem("dim8-even-deg")
    assert report.passed
    truncated = verify_theorem("dim8-even-deg", below_cap=10)
    assert not truncated.passed
    assert any("truncated" in line for line in truncated.checks)


def test_verify_divisor_product_branches():
    report = verify_theorem("thm-3.6")  # alias of dim10-even-deg
    assert report.tag == "dim10-even-deg"
    assert report.passed
    for tag in ("dim12-odd-deg", "dim14-odd-deg"):
        report = verify_theorem(tag, window=10)
        assert report.passed, report.checks


def test_verify_families():
    for tag in ("odd-deg-divisor-product", "even-dim-divisor-product",
                "odd-dim-valuation"):
        report = verify_theorem(tag, window=10)
        assert report.passed, report.checks
    # the degree-5 dimension shows up as the lone positive in the odd
    # family sample
    report = verify_theorem("thm-3.10", window=0)
    assert any("m=5 exists" in line for line in report.checks)
