"""Core arithmetic tests.

Expected values here were computed by independent oracles (brute-force
divisor scans, the quadratic formula, hand valuation counts) before the
implementation and are frozen.
"""
import math
import random
from fractions import Fraction

import pytest

from mstiff.exact_core import (
    FactoredInteger,
    FactoredRational,
    NewtonPolygon,
    RatPoly,
    divisors_from_factors,
    factorize,
    is_probable_prime,
    isolate_real_roots,
    newton_polygon,
    ord_p,
    rational_roots,
    refine_root,
    sturm_chain,
)


# --- factorization -------------------------------------------------------

def brute_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def test_factorize_matches_brute_divisors():
    for n in [1, 2, 12, 135, 5040, 2 * 3 * 5 * 7 * 11, 97, 1024]:
        assert divisors_from_factors(factorize(n)) == brute_divisors(n)


def test_factorize_large_semiprime():
    p, q = 1000003, 1000033
    assert factorize(p * q) == {p: 1, q: 1}


def test_factorize_negative_and_zero():
    assert factorize(-360) == {2: 3, 3: 2, 5: 1}
    with pytest.raises(ValueError):
        factorize(0)


def test_is_probable_prime_small():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 45):
        if sieve[i]:
            for j in range(i * i, 2000, i):
                sieve[j] = False
    for n in range(2000):
        assert is_probable_prime(n) == sieve[n], n


def test_ord_p():
    assert ord_p(120, 2) == 3
    assert ord_p(120, 5) == 1
    assert ord_p(7, 7) == 1
    assert ord_p(Fraction(14080, 7), 7) == -1
    assert ord_p(Fraction(14080, 7), 2) == 8  # 14080 = 2^8 * 55
    assert ord_p(0, 3) == math.inf
    with pytest.raises(ValueError):
        ord_p(10, 4)


def test_factored_integer():
    f = FactoredInteger.from_product([12, -35, 9])
    assert f.value() == 12 * -35 * 9
    assert f.sign == -1
    g = FactoredInteger.from_int(60)
    assert g.divisors() == brute_divisors(60)
    assert FactoredInteger.from_int(240).odd_part().value() == 15
    assert (FactoredInteger.from_int(6) * FactoredInteger.from_int(-10)).value() == -60


def test_factored_rational_running_product():
    acc = FactoredRational()
    acc.mul_int(50).div_int(4).mul_int(9).div_int(25)
    assert acc.to_fraction() == Fraction(9, 2)
    assert acc.denominator_primes() == [2]
    assert acc.denominator_primes(allowed=(2,)) == []

    acc2 = FactoredRational()
    acc2.mul_int(14080).div_int(7 * 16)
    assert acc2.to_fraction() == Fraction(14080, 112)
    assert 7 in acc2.denominator_primes()


# --- polynomials ---------------------------------------------------------

def test_ratpoly_arith_and_eval():
    p = RatPoly.from_coeffs([6, -5, 1])  # (x-2)(x-3)
    assert p(2) == 0 and p(3) == 0 and p(0) == 6
    q = RatPoly.from_coeffs([-1, 1])
    prod = p * q
    assert prod(2) == 0 and prod(1) == 0
    quot, rem = prod.divmod(q)
    assert rem.coeffs == () and quot.coeffs == p.coeffs
    assert p.derivative().coeffs == (Fraction(-5), Fraction(2))
    assert p.divide_linear(Fraction(2)).coeffs == (Fraction(-3), Fraction(1))
    with pytest.raises(ValueError):
        p.divide_linear(Fraction(5))


def test_ratpoly_gcd_squarefree():
    x = RatPoly.x()
    one = RatPoly.one()
    p = (x - one.scale(2)) * (x - one.scale(2)) * (x + one)
    sf = p.squarefree_part()
    assert sf.degree == 2
    assert sf(2) == 0 and sf(-1) == 0


# --- Sturm isolation -----------------------------------------------------

def poly_from_roots(roots):
    p = RatPoly.one()
    for r in roots:
        p = p * RatPoly.from_coeffs([-Fraction(r), 1])
    return p


def test_sturm_chain_sign_preserved():
    # scaled polynomial must give the same chain signs as the original
    p = poly_from_roots([1, 3, -2])
    chain = sturm_chain(p)
    chain2 = sturm_chain(p.scale(Fraction(7, 5)))
    assert chain == chain2


def test_isolation_simple_cubic():
    p = poly_from_roots([1, 3, -2])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 3
    for iv, root in zip(ivs, [-2, 1, 3]):
        assert iv.lo <= root <= iv.hi


def test_isolation_exact_midpoint_hits():
    p = poly_from_roots([-1, 0, 1])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 3
    found = []
    for iv in ivs:
        r = refine_root(p, iv, Fraction(1, 10**6))
        found.append(r)
    for r, expect in zip(found, [-1, 0, 1]):
        assert r.lo <= expect <= r.hi


def test_isolation_dense_integer_roots():
    roots = list(range(1, 11))
    p = poly_from_roots(roots)
    ivs = isolate_real_roots(p)
    assert len(ivs) == 10
    for iv, root in zip(ivs, roots):
        assert iv.lo <= root <= iv.hi
        for other in roots:
            if other != root:
                assert not (iv.lo < other < iv.hi)


def test_refine_sqrt2():
    p = RatPoly.from_coeffs([-2, 0, 1])
    (iv_neg, iv_pos) = isolate_real_roots(p)
    r = refine_root(p, iv_pos, Fraction(1, 10**30))
    assert r.lo**2 < 2 < r.hi**2
    assert r.width() <= Fraction(1, 10**30)
    rn = refine_root(p, iv_neg, Fraction(1, 10**30))
    assert rn.hi < 0 and rn.lo**2 > 2 > rn.hi**2


def test_random_planted_roots_isolated():
    rng = random.Random(20260822)
    for _ in range(20):
        roots = sorted(rng.sample(range(-30, 30), rng.randint(1, 6)))
        p = poly_from_roots(roots)
        ivs = isolate_real_roots(p)
        assert len(ivs) == len(roots)
        for iv, root in zip(ivs, roots):
            assert iv.lo <= root <= iv.hi


# --- rational root certification ----------------------------------------

def test_rational_roots_quadratic_yes():
    # oracle: quadratic formula, disc 144-80=64, roots 2 and 10
    p = RatPoly.from_coeffs([20, -12, 1])
    rep = rational_roots(p)
    assert rep.all_rational
    assert rep.roots == (Fraction(2), Fraction(10))


def test_rational_roots_quadratic_no():
    # oracle: disc 144-64=80 not a square, roots 6 +/- 2*sqrt(5)
    p = RatPoly.from_coeffs([16, -12, 1])
    rep = rational_roots(p)
    assert not rep.all_rational
    assert rep.witness is not None
    assert rep.witness.kind == "isolated-interval"
    lo, hi = rep.witness.interval
    assert p(lo) * p(hi) < 0  # genuinely brackets a root
    assert math.floor(hi) < math.ceil(lo) or all(
        p(Fraction(k)) != 0 for k in range(math.ceil(lo), math.floor(hi) + 1)
    )


def test_rational_roots_multiplicity():
    p = poly_from_roots([4, 4, 4, -1])
    rep = rational_roots(p)
    assert rep.all_rational
    assert rep.roots == (Fraction(-1), Fraction(4), Fraction(4), Fraction(4))


def test_rational_roots_zero_roots_stripped():
    p = RatPoly.from_coeffs([0, 0, -6, 1]) * RatPoly.one()
    rep = rational_roots(p)
    assert rep.all_rational
    assert rep.roots == (Fraction(0), Fraction(0), Fraction(6))


def test_rational_roots_denominator_three():
    # (x - 1/3)(x - 2) = x^2 - 7/3 x + 2/3
    p = RatPoly.from_coeffs([Fraction(2, 3), Fraction(-7, 3), 1])
    rep = rational_roots(p, {1, 3})
    assert rep.all_rational
    assert rep.roots == (Fraction(1, 3), Fraction(2))
    # same polynomial under integer-only rules must fail fast
    rep1 = rational_roots(p, {1})
    assert not rep1.all_rational
    assert rep1.witness.kind == "non-integral-coefficient"


def test_rational_roots_denominator_two_rejected():
    p = RatPoly.from_coeffs([Fraction(-1, 2), 1])  # root 1/2
    rep = rational_roots(p, {1, 3})
    assert not rep.all_rational
    assert rep.witness.kind == "non-integral-coefficient"


def test_rational_roots_complex_pair():
    p = RatPoly.from_coeffs([1, 0, 1])  # x^2 + 1
    rep = rational_roots(p)
    assert not rep.all_rational
    assert rep.witness.kind == "complex-roots"


def test_rational_roots_golden_ratio():
    p = RatPoly.from_coeffs([-1, -1, 1])
    rep = rational_roots(p)
    assert not rep.all_rational
    assert rep.witness.kind == "isolated-interval"


def test_rational_roots_large_degree_exhaustion():
    # x^65 + x + 1 times (x - 2): constant -2, so divisor candidates are
    # exhausted, the found root is stripped, and a big factor remains
    big = [0] * 66
    big[0] = 1
    big[1] = 1
    big[65] = 1
    p = RatPoly.from_coeffs(big) * RatPoly.from_coeffs([-2, 1])
    rep = rational_roots(p)
    assert not rep.all_rational
    assert rep.witness.kind == "divisor-exhaustion"
    assert Fraction(2) in rep.witness.candidates_checked


def test_rational_roots_random_planted():
    rng = random.Random(77)
    for _ in range(15):
        roots = [rng.randint(-12, 12) for _ in range(rng.randint(1, 5))]
        p = poly_from_roots(roots)
        rep = rational_roots(p)
        assert rep.all_rational
        assert list(rep.roots) == sorted(Fraction(r) for r in roots)
        # planting an irrational pair must flip the verdict
        p2 = p * RatPoly.from_coeffs([-2, 0, 1])
        rep2 = rational_roots(p2)
        assert not rep2.all_rational


def test_rational_roots_requires_monic():
    with pytest.raises(ValueError):
        rational_roots(RatPoly.from_coeffs([1, 2]))
    with pytest.raises(ValueError):
        rational_roots(RatPoly.from_coeffs([1, 0, 1]), {1, 2})


# --- Newton polygons -----------------------------------------------------

def test_newton_polygon_squared_difference():
    np_ = newton_polygon([-1, 0, 1], 2)  # x^2 - 1
    assert np_.slopes == (Fraction(0),)
    assert np_.all_slopes_integer


def test_newton_polygon_linear():
    np_ = newton_polygon([-2, 1], 2)  # x - 2
    assert np_.slopes == (Fraction(1),)
    assert np_.all_slopes_integer


def test_newton_polygon_fractional_slope():
    # x^3 - 30x^2 + 120x - 112 at p=2: valuations 0,1,3,4
    np_ = newton_polygon([-112, 120, -30, 1], 2)
    assert np_.vertices == ((0, 0), (1, 0), (2, 1), (4, 4))
    assert np_.slopes == (Fraction(1), Fraction(3, 2))
    assert not np_.all_slopes_integer


def test_newton_polygon_sqrt2():
    np_ = newton_polygon([-2, 0, 1], 2)  # x^2 - 2
    assert np_.slopes == (Fraction(1, 2),)
    assert not np_.all_slopes_integer


def test_newton_polygon_integer_roots_integer_slopes():
    rng = random.Random(5)
    for _ in range(25):
        roots = [rng.randint(-40, 40) for _ in range(rng.randint(1, 6))]
        p = poly_from_roots(roots)
        coeffs = [int(c) for c in p.coeffs]
        for prime in (2, 3, 5):
            assert newton_polygon(coeffs, prime).all_slopes_integer, (
                roots,
                prime,
            )


def test_newton_polygon_rejects_bad_input():
    with pytest.raises(ValueError):
        newton_polygon([1, 2], 4)
    with pytest.raises(ValueError):
        newton_polygon([0], 2)
