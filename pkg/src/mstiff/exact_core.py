"""Exact arithmetic foundations.

Factored integers, dense univariate polynomials over the rationals,
Sturm-based real root isolation with interval refinement, rational root
certification, and Newton polygons.  No floating point anywhere; every
function is pure, so the module is safe to use from worker processes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "is_probable_prime",
    "factorize",
    "ord_p",
    "perfect_square_root",
    "fraction_square_root",
    "divisors_from_factors",
    "FactoredInteger",
    "FactoredRational",
    "RatPoly",
    "RootInterval",
    "RootWitness",
    "RootReport",
    "sturm_chain",
    "isolate_real_roots",
    "refine_root",
    "rational_roots",
    "NewtonPolygon",
    "newton_polygon",
    "newton_polygon_from_valuations",
]


# ---------------------------------------------------------------------------
# primality and factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIME_LIMIT = 1 << 16
_small_prime_sieve = bytearray([1]) * _SMALL_PRIME_LIMIT
_small_prime_sieve[0:2] = b"\x00\x00"
for _i in range(2, int(_SMALL_PRIME_LIMIT**0.5) + 1):
    if _small_prime_sieve[_i]:
        _small_prime_sieve[_i * _i :: _i] = bytearray(
            len(_small_prime_sieve[_i * _i :: _i])
        )
SMALL_PRIMES = tuple(i for i in range(_SMALL_PRIME_LIMIT) if _small_prime_sieve[i])


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n must be odd composite, not a prime power issue here.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as an exponent map.  factorize(1) == {}."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        # trial division first: inputs in this package are mostly smooth
        root = math.isqrt(m)
        found = False
        for p in SMALL_PRIMES:
            if p > root:
                break
            if m % p == 0:
                cnt = 0
                while m % p == 0:
                    m //= p
                    cnt += 1
                out[p] = out.get(p, 0) + cnt
                stack.append(m)
                found = True
                break
        if not found:
            if is_probable_prime(m):
                out[m] = out.get(m, 0) + 1
            else:
                d = _pollard_rho(m)
                stack.append(d)
                stack.append(m // d)
    return out


def ord_p(x: int | Fraction, p: int) -> int | float:
    """p-adic valuation.  ord_p(0) is +infinity.

    >>> ord_p(120, 2)
    3
    >>> ord_p(Fraction(14080, 7), 7)
    -1
    """
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if x == 0:
        return math.inf
    if isinstance(x, Fraction):
        return ord_p(x.numerator, p) - ord_p(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def perfect_square_root(n: int) -> Optional[int]:
    """Integer square root if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def fraction_square_root(f: Fraction) -> Optional[Fraction]:
    """Exact rational square root of f if one exists, else None."""
    rn = perfect_square_root(f.numerator)
    if rn is None:
        return None
    rd = perfect_square_root(f.denominator)
    if rd is None:
        return None
    return Fraction(rn, rd)


def divisors_from_factors(factors: dict[int, int]) -> list[int]:
    """All positive divisors, sorted ascending, each exactly once."""
    divs = [1]
    for p, e in sorted(factors.items()):
        pk = 1
        block = []
        for _ in range(e):
            pk *= p
            block.extend(d * pk for d in divs)
        divs.extend(block)
    return sorted(divs)


@dataclass(frozen=True)
class FactoredInteger:
    """A nonzero integer carried as sign * product(p^e).

    The factor map is never re-derived from the expanded value; products of
    known factorizations stay factored.
    """

    sign: int
    factors: tuple[tuple[int, int], ...]  # sorted (prime, exponent>0) pairs

    @staticmethod
    def from_int(n: int) -> "FactoredInteger":
        if n == 0:
            raise ValueError("FactoredInteger is nonzero by contract")
        return FactoredInteger(
            1 if n > 0 else -1, tuple(sorted(factorize(n).items()))
        )

    @staticmethod
    def from_product(parts: Iterable[int]) -> "FactoredInteger":
        acc: dict[int, int] = {}
        sign = 1
        for n in parts:
            if n == 0:
                raise ValueError("zero factor")
            if n < 0:
                sign = -sign
            for p, e in factorize(n).items():
                acc[p] = acc.get(p, 0) + e
        return FactoredInteger(sign, tuple(sorted(acc.items())))

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def ord_p(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def odd_part(self) -> "FactoredInteger":
        return FactoredInteger(
            self.sign, tuple((p, e) for p, e in self.factors if p != 2)
        )

    def divisors(self) -> list[int]:
        return divisors_from_factors(dict(self.factors))

    def __mul__(self, other: "FactoredInteger") -> "FactoredInteger":
        acc = dict(self.factors)
        for p, e in other.factors:
            acc[p] = acc.get(p, 0) + e
        return FactoredInteger(self.sign * other.sign, tuple(sorted(acc.items())))


class FactoredRational:
    """Mutable sign * product(p^e) with exponents in Z, for running products.

    Used by coefficient screens that multiply and divide many small integers;
    a negative exponent is exactly "prime p survives in the denominator".
    """

    __slots__ = ("sign", "exps")

    def __init__(self, sign: int = 1, exps: Optional[dict[int, int]] = None):
        self.sign = sign
        self.exps = dict(exps) if exps else {}

    def copy(self) -> "FactoredRational":
        return FactoredRational(self.sign, self.exps)

    def mul_int(self, n: int) -> "FactoredRational":
        if n == 0:
            raise ValueError("zero multiplier")
        if n < 0:
            self.sign = -self.sign
            n = -n
        for p, e in factorize(n).items():
            new = self.exps.get(p, 0) + e
            if new:
                self.exps[p] = new
            else:
                del self.exps[p]
        return self

    def div_int(self, n: int) -> "FactoredRational":
        if n == 0:
            raise ZeroDivisionError
        if n < 0:
            self.sign = -self.sign
            n = -n
        for p, e in factorize(n).items():
            new = self.exps.get(p, 0) - e
            if new:
                self.exps[p] = new
            else:
                del self.exps[p]
        return self

    def denominator_primes(self, allowed: Sequence[int] = ()) -> list[int]:
        """Primes with negative exponent, excluding `allowed`, sorted."""
        return sorted(
            p for p, e in self.exps.items() if e < 0 and p not in allowed
        )

    def bit_size(self) -> int:
        """Upper estimate of the bit length of the expanded value."""
        return sum(abs(e) * p.bit_length() for p, e in self.exps.items())

    def maybe_fraction(self, bit_cap: int = 2048) -> Optional[Fraction]:
        """Expanded value, or None when it would be unreasonably large."""
        if self.bit_size() > bit_cap:
            return None
        return self.to_fraction()

    def to_fraction(self) -> Fraction:
        num = self.sign
        den = 1
        for p, e in self.exps.items():
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(num, den)


# ---------------------------------------------------------------------------
# polynomials

def _trim(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return coeffs[:i]


@dataclass(frozen=True)
class RatPoly:
    """Dense univariate polynomial, coefficients ascending by degree."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_coeffs(cs: Sequence[Fraction | int]) -> "RatPoly":
        return RatPoly(_trim(tuple(Fraction(c) for c in cs)))

    @staticmethod
    def zero() -> "RatPoly":
        return RatPoly(())

    @staticmethod
    def one() -> "RatPoly":
        return RatPoly((Fraction(1),))

    @staticmethod
    def x() -> "RatPoly":
        return RatPoly((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(_trim(tuple(out)))

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if not self.coeffs or not other.coeffs:
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(_trim(tuple(out)))

    def scale(self, k: Fraction | int) -> "RatPoly":
        k = Fraction(k)
        if k == 0:
            return RatPoly(())
        return RatPoly(tuple(c * k for c in self.coeffs))

    def derivative(self) -> "RatPoly":
        return RatPoly(
            _trim(tuple(self.coeffs[i] * i for i in range(1, len(self.coeffs))))
        )

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return RatPoly(()), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            if c:
                quot[i] = c
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return RatPoly(_trim(tuple(quot))), RatPoly(_trim(tuple(rem)))

    def divide_linear(self, root: Fraction) -> "RatPoly":
        """Exact synthetic division by (x - root); raises if not a root."""
        acc = Fraction(0)
        out = [Fraction(0)] * max(len(self.coeffs) - 1, 0)
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * root + self.coeffs[i]
            out[i - 1] = acc
        if acc * root + self.coeffs[0] != 0:
            raise ValueError(f"{root} is not a root")
        return RatPoly(_trim(tuple(out)))

    def gcd(self, other: "RatPoly") -> "RatPoly":
        a, b = self, other
        while b.coeffs:
            a, b = b, a.divmod(b)[1]
        if a.coeffs:
            a = a.scale(1 / a.leading)
        return a

    def squarefree_part(self) -> "RatPoly":
        if self.degree <= 1:
            return self
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self
        return self.divmod(g)[0]

    def integer_cleared(self) -> tuple[list[int], int]:
        """(integer coefficient list ascending, common denominator used)."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs], den


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation

def _primitive_int(coeffs: Sequence[Fraction]) -> list[int]:
    # positive scaling only, so sign data survives
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _int_poly_eval(coeffs: Sequence[int], x: Fraction) -> Fraction:
    num, den = x.numerator, x.denominator
    acc = 0
    scale = 1
    # evaluate den^deg * p(num/den) to stay in integers
    for c in reversed(coeffs):
        acc = acc * num + c * scale
        scale *= den
    return Fraction(acc)  # only the sign and zero-ness matter to callers


def _int_poly_derivative(coeffs: Sequence[int]) -> list[int]:
    return [coeffs[i] * i for i in range(1, len(coeffs))]


def _frac_rem(a: Sequence[int], b: Sequence[int]) -> list[Fraction]:
    rem = [Fraction(c) for c in a]
    lead = Fraction(b[-1])
    while len(rem) >= len(b):
        c = rem[-1] / lead
        if c:
            off = len(rem) - len(b)
            for j in range(len(b)):
                rem[off + j] -= c * b[j]
        rem.pop()
        while rem and rem[-1] == 0 and len(rem) >= len(b):
            rem.pop()
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def sturm_chain(p: RatPoly) -> list[list[int]]:
    """Sturm sequence of p as primitive integer polynomials.

    Positive rescaling at every step preserves all sign variations.
    """
    f0 = _primitive_int(p.coeffs)
    if len(f0) <= 1:
        return [f0] if f0 else [[0]]
    chain = [f0, _primitive_int([Fraction(c) for c in _int_poly_derivative(f0)])]
    while len(chain[-1]) > 1:
        rem = _frac_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(_primitive_int([-c for c in rem]))
    return chain


def _variations(signs: Sequence[int]) -> int:
    out = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            out += 1
        prev = s
    return out


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _chain_variations_at(chain: Sequence[Sequence[int]], x: Fraction) -> int:
    return _variations([_sign(_int_poly_eval(f, x)) for f in chain])


@dataclass(frozen=True)
class RootInterval:
    """Open interval (lo, hi) holding exactly one real root; lo == hi means
    the root is known exactly."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _root_bound(coeffs: Sequence[int]) -> int:
    lead = abs(coeffs[-1])
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else 0
    return 1 + (m + lead - 1) // lead


def isolate_real_roots(p: RatPoly, region: Optional[tuple[Fraction, Fraction]] = None) -> list[RootInterval]:
    """Disjoint isolating intervals for the distinct real roots of p.

    p must be squarefree (callers take the squarefree part first).  Output is
    sorted ascending and exhaustive over the region (default: all reals).
    """
    if p.degree <= 0:
        return []
    chain = sturm_chain(p)
    f0 = chain[0]
    bound = _root_bound(f0)
    lo = Fraction(-bound) if region is None else region[0]
    hi = Fraction(bound) if region is None else region[1]
    out: list[RootInterval] = []

    def visit(a: Fraction, b: Fraction, va: int, vb: int) -> None:
        count = va - vb  # roots in (a, b]
        if count == 0:
            return
        if count == 1:
            if _int_poly_eval(f0, b) == 0:
                out.append(RootInterval(b, b))
                return
            if _int_poly_eval(f0, a) != 0:
                out.append(RootInterval(a, b))
                return
            # a is itself a root (reported by the neighbouring call); shrink
            # until the left endpoint clears it
        mid = (a + b) / 2
        vm = _chain_variations_at(chain, mid)
        visit(a, mid, va, vm)
        visit(mid, b, vm, vb)

    if _int_poly_eval(f0, lo) == 0:
        # V(a) - V(b) counts roots in the half-open (a, b], so the root at
        # the left boundary needs its own report
        out.append(RootInterval(lo, lo))
    visit(lo, hi, _chain_variations_at(chain, lo), _chain_variations_at(chain, hi))
    return sorted(out, key=lambda iv: (iv.lo, iv.hi))


def refine_root(p: RatPoly, interval: RootInterval, max_width: Fraction) -> RootInterval:
    """Bisect an isolating interval until its width is <= max_width."""
    if interval.exact:
        return interval
    lo, hi = interval.lo, interval.hi
    flo = p(lo)
    if flo == 0:
        return RootInterval(lo, lo)
    fhi = p(hi)
    if fhi == 0:
        return RootInterval(hi, hi)
    slo = _sign(flo)
    assert slo != _sign(fhi), "interval must bracket a sign change"
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            return RootInterval(mid, mid)
        if _sign(fm) == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


# ---------------------------------------------------------------------------
# rational root certification

@dataclass(frozen=True)
class RootWitness:
    """Evidence that some root is not rational with an allowed denominator.

    kind is one of:
      "non-integral-coefficient": clearing denominators left a fractional
          coefficient, impossible when all roots have allowed denominators;
      "isolated-interval": `interval` brackets a real root and every allowed
          candidate inside was checked and rejected;
      "divisor-exhaustion": all divisor candidates of the constant term were
          rejected, yet unexplained roots remain;
      "complex-roots": fewer real roots than the degree after accounting for
          the rational ones found.
    """

    kind: str
    detail: str
    interval: Optional[tuple[Fraction, Fraction]] = None
    candidates_checked: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class RootReport:
    all_rational: bool
    roots: tuple[Fraction, ...]  # sorted, with multiplicity
    witness: Optional[RootWitness]


_DIVISOR_ENUM_CAP = 1 << 14
# once divisor enumeration has ruled out every allowed candidate, isolating
# intervals add nothing for big factors, so cap the pretty-witness effort
_ISOLATE_DEGREE_CAP = 8
_CANDIDATE_BATCH = 8


def _integer_roots_by_divisors(
    coeffs: Sequence[int],
) -> Optional[tuple[list[int], list[int]]]:
    """(roots found, candidates checked) via divisor enumeration, or None if
    the constant term is too hard to factor or has too many divisors."""
    const = coeffs[0]
    if abs(const).bit_length() > 512:
        return None
    fac = factorize(const)
    ndiv = 1
    for e in fac.values():
        ndiv *= e + 1
        if ndiv > _DIVISOR_ENUM_CAP:
            return None
    bound = _root_bound(coeffs)
    checked: list[int] = []
    roots: list[int] = []
    for d in divisors_from_factors(fac):
        if d > bound:
            break
        for cand in (d, -d):
            checked.append(cand)
            if _int_poly_eval(coeffs, Fraction(cand)) == 0:
                roots.append(cand)
    return roots, checked


def rational_roots(p: RatPoly, allowed_denominators: frozenset[int] | set[int] = frozenset({1})) -> RootReport:
    """Decide whether every root of monic p is rational with denominator in
    the allowed set; otherwise produce a checkable witness.

    allowed_denominators must be {1} or {1, 3}.
    """
    allowed = frozenset(allowed_denominators)
    if allowed not in (frozenset({1}), frozenset({1, 3})):
        raise ValueError("allowed_denominators must be {1} or {1,3}")
    if not p.is_monic():
        raise ValueError("p must be monic")
    q = max(allowed)

    # substitute x = y/q and clear: roots y of T are q * (roots of p)
    n = p.degree
    t_coeffs: list[Fraction] = [
        p.coeffs[i] * Fraction(q) ** (n - i) for i in range(n + 1)
    ]
    for i, c in enumerate(t_coeffs):
        if c.denominator != 1:
            return RootReport(
                False,
                (),
                RootWitness(
                    "non-integral-coefficient",
                    f"coefficient of degree {i} is {c} after clearing "
                    f"denominator {q}",
                ),
            )
    T = [int(c) for c in t_coeffs]

    roots: list[Fraction] = []
    # strip roots at zero
    k0 = 0
    while k0 <= n and T[k0] == 0:
        k0 += 1
    roots.extend([Fraction(0)] * k0)
    work = T[k0:]

    def strip_root(poly: list[int], r: int) -> list[int]:
        # exact synthetic division of the integer polynomial by (y - r),
        # repeated while r stays a root
        while True:
            acc = 0
            for c in reversed(poly):
                acc = acc * r + c
            if acc != 0:
                return poly
            new = [0] * (len(poly) - 1)
            carry = 0
            for i in range(len(poly) - 1, 0, -1):
                carry = carry * r + poly[i]
                new[i - 1] = carry
            poly = new
            roots.append(Fraction(r, q))

    checked: list[Fraction] = []
    enum_done = False
    if len(work) > 1:
        enum = _integer_roots_by_divisors(work)
        if enum is not None:
            enum_done = True
            int_roots, cand = enum
            checked.extend(Fraction(c, q) for c in cand)
            for r in sorted(int_roots):
                work = strip_root(work, r)

    # a monic integer polynomial in y only admits integer rational roots, so
    # after the divisor pass (or isolation-driven stripping below) whatever
    # factor is left certifies failure
    while len(work) > 1:
        if enum_done and len(work) - 1 > _ISOLATE_DEGREE_CAP:
            return RootReport(
                False,
                (),
                RootWitness(
                    "divisor-exhaustion",
                    "every divisor candidate of the constant term was "
                    f"rejected but a degree-{len(work) - 1} factor remains",
                    candidates_checked=tuple(checked),
                ),
            )
        sf = RatPoly.from_coeffs(work).squarefree_part()
        intervals = isolate_real_roots(sf)
        if not intervals:
            return RootReport(
                False,
                (),
                RootWitness(
                    "complex-roots",
                    f"remaining factor of degree {len(work) - 1} has no "
                    "real roots",
                    candidates_checked=tuple(checked),
                ),
            )
        stripped = False
        for iv in intervals:
            while True:
                if iv.exact:
                    r = iv.lo
                    assert r.denominator == 1
                    work = strip_root(work, int(r))
                    stripped = True
                    break
                first = math.ceil(iv.lo)
                last = math.floor(iv.hi)
                if last < first:
                    return RootReport(
                        False,
                        (),
                        RootWitness(
                            "isolated-interval",
                            "bracketed real root admits no candidate with "
                            f"denominator in {sorted(allowed)}",
                            interval=(iv.lo / q, iv.hi / q),
                            candidates_checked=tuple(checked),
                        ),
                    )
                if last - first >= _CANDIDATE_BATCH:
                    # wide bracket: narrow it before looking at integers,
                    # never materialize the integers of a huge interval
                    iv = refine_root(sf, iv, iv.width() / 4)
                    continue
                cands = [Fraction(k) for k in range(first, last + 1)]
                hits = [c for c in cands if sf(c) == 0]
                if hits:
                    work = strip_root(work, int(hits[0]))
                    stripped = True
                    break
                checked.extend(Fraction(int(c), q) for c in cands)
                iv = refine_root(sf, iv, iv.width() / 4)
            if stripped:
                break  # work changed; re-isolate what is left
        assert stripped

    report_roots = tuple(sorted(roots))
    # verification pass: every reported root really is a root, count matches
    assert len(report_roots) == n
    for r in report_roots:
        assert p(r) == 0
        assert r.denominator in allowed
    return RootReport(True, report_roots, None)


# ---------------------------------------------------------------------------
# Newton polygons

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of p-adic coefficient valuations.

    Points are (0, 0) and (i+1, v_p(a_i)) for a_i the coefficient of
    x^(deg-i); zero coefficients contribute no point.  `slopes` lists hull
    edge slopes left to right, omitting the degenerate unit edge out of the
    origin that every polynomial has in these coordinates.
    """

    prime: int
    points: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]
    slopes: tuple[Fraction, ...]

    @property
    def all_slopes_integer(self) -> bool:
        return all(s.denominator == 1 for s in self.slopes)


def newton_polygon_from_valuations(
    valuations: Sequence[Optional[int]], p: int
) -> NewtonPolygon:
    """Newton polygon built from per-coefficient valuations.

    valuations[i] is ord_p of the coefficient of x^i (ascending), or None
    for a zero coefficient; the leading entry must not be None.  This lets
    screens that track valuations in factored form skip materializing the
    coefficients.
    """
    if not is_probable_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    vals = list(valuations)
    if not vals or vals[-1] is None:
        raise ValueError("leading coefficient must be nonzero")
    deg = len(vals) - 1
    pts: list[tuple[int, int]] = [(0, 0)]
    for i in range(deg + 1):
        v = vals[deg - i]  # descending: position 1 is the leading coefficient
        if v is not None:
            pts.append((i + 1, v))

    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)

    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if (x1, y1) == (0, 0) and x2 == 1:
            continue  # leading-coefficient edge carries no root information
        slopes.append(Fraction(y2 - y1, x2 - x1))
    return NewtonPolygon(p, tuple(pts), tuple(hull), tuple(slopes))


def newton_polygon(coeffs_ascending: Sequence[int], p: int) -> NewtonPolygon:
    """Newton polygon of an integer polynomial at the prime p.

    If every root of the polynomial is an integer then every slope is an
    integer, so a fractional slope certifies a non-integral root.
    """
    cs = list(coeffs_ascending)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial")
    vals = [None if c == 0 else int(ord_p(c, p)) for c in cs]
    return newton_polygon_from_valuations(vals, p)
