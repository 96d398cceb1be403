"""Existence decision for stiff sphere configurations.

A degree-m stiff configuration lives on m parallel hyperplane sections of
the unit sphere in R^dim and averages every polynomial of degree at most
2m-1 exactly.  Such a configuration exists precisely when the section
polynomial S (monic, one variable X = 1/x^2 per nonzero section height x)
has only rational roots with small denominators: denominator 1 when m is
even, denominator 1 or 3 when m is odd.  Weights are then forced and
automatically positive, so a full certificate can always be produced on
the Exists side.

The decision pipeline is: cheap integrality screens on the coefficients of
S (which also power the large-scale searches), Newton polygon screens at
small primes, exact root certification, then certificate construction and
verification.  Every verdict carries either a verified quadrature or a
finite, checkable witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact_core import (
    FactoredRational,
    NewtonPolygon,
    RatPoly,
    RootWitness,
    newton_polygon_from_valuations,
    rational_roots,
)
from .gegenbauer import (
    SymmetricQuadrature,
    moment,
    node_square_poly,
    quadrature_from_node_squares,
)

__all__ = [
    "StiffParams",
    "stiff_params",
    "s_coefficients",
    "s_poly",
    "NonIntegerCoefficient",
    "ScreenReport",
    "screen_coefficients",
    "top_coefficient_screen",
    "newton_screen",
    "IrrationalRoot",
    "BoundExceeded",
    "BoundResult",
    "n_upper_bound",
    "bound_if_exceeded",
    "StiffCertificate",
    "verify_certificate",
    "StiffVerdict",
    "UndecidedError",
    "stiff_exists",
]


# ---------------------------------------------------------------------------
# parameters and coefficients

@dataclass(frozen=True)
class StiffParams:
    """Derived parameters of the degree-m problem in dimension dim.

    n is the number of +- section pairs (the degree of S); shift seeds the
    rising product in the coefficient formula; odd degrees allow section
    heights with squares of denominator 3 and get an extra section at 0.
    """

    m: int
    dim: int

    @property
    def n(self) -> int:
        return self.m // 2

    @property
    def odd(self) -> bool:
        return self.m % 2 == 1

    @property
    def shift(self) -> int:
        return self.dim - 2 + 2 * self.n + (2 if self.odd else 0)

    @property
    def denominator_step(self) -> int:
        # r-th denominator factor is 2r - 2 + this
        return 3 if self.odd else 1

    @property
    def allowed_denominators(self) -> frozenset[int]:
        return frozenset({1, 3}) if self.odd else frozenset({1})


def stiff_params(m: int, dim: int) -> StiffParams:
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    return StiffParams(m, dim)


def s_coefficients(m: int, dim: int) -> list[Fraction]:
    """Coefficients u_1..u_n of the section polynomial, exact.

    u_r = C(n, r) * shift (shift+2) ... (shift+2r-2) divided by the product
    of the first r odd numbers starting at denominator_step.
    """
    p = stiff_params(m, dim)
    out: list[Fraction] = []
    u = Fraction(1)
    for r in range(1, p.n + 1):
        u *= Fraction(
            (p.n - r + 1) * (p.shift + 2 * r - 2),
            r * (2 * r - 2 + p.denominator_step),
        )
        out.append(u)
    return out


def s_poly(m: int, dim: int) -> RatPoly:
    """Monic section polynomial S(X) = X^n - u_1 X^(n-1) + u_2 X^(n-2) - ...

    Its roots are the reciprocals of the squared nonzero section heights.
    """
    us = s_coefficients(m, dim)
    n = len(us)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    for r, u in enumerate(us, start=1):
        coeffs[n - r] = u if r % 2 == 0 else -u
    return RatPoly.from_coeffs(coeffs)


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class NonIntegerCoefficient:
    """Coefficient u_index has a denominator the degree parity forbids.

    For huge indices the screen certifies non-integrality modularly without
    factoring, in which case prime/valuation/value may be None.
    """

    index: int
    prime: Optional[int]
    valuation: Optional[int]
    value: Optional[Fraction]
    detail: str = ""


@dataclass(frozen=True)
class IrrationalRoot:
    """Some root of the section polynomial is irrational.

    Exactly one of `newton` (a polygon with a fractional slope) and
    `root_witness` (from exact root certification) is set.
    """

    newton: Optional[NewtonPolygon] = None
    root_witness: Optional[RootWitness] = None


@dataclass(frozen=True)
class BoundExceeded:
    """n is at or past a proven nonexistence threshold for this dimension."""

    tag: str
    threshold: int
    n: int
    conservative: bool


Witness = Union[NonIntegerCoefficient, IrrationalRoot, BoundExceeded]


# ---------------------------------------------------------------------------
# coefficient screens

@dataclass(frozen=True)
class ScreenReport:
    witness: Optional[NonIntegerCoefficient]
    # prime -> (ord_p(u_1), ..., ord_p(u_n)), only on success
    valuations: Optional[dict[int, tuple[int, ...]]]


_VALUE_BIT_CAP = 2048


def screen_coefficients(
    m: int, dim: int, track_primes: Sequence[int] = (2, 3, 5)
) -> ScreenReport:
    """Walk u_1..u_n in factored form; stop at the first coefficient with a
    forbidden denominator.  On success, return the tracked valuations so a
    Newton screen can run without expanding any coefficient."""
    p = stiff_params(m, dim)
    acc = FactoredRational()
    tracks: dict[int, list[int]] = {q: [] for q in track_primes}
    denom_allowed = (3,) if p.odd else ()
    for r in range(1, p.n + 1):
        acc.mul_int((p.n - r + 1) * (p.shift + 2 * r - 2))
        acc.div_int(r * (2 * r - 2 + p.denominator_step))
        bad = acc.denominator_primes(allowed=denom_allowed)
        if not bad and p.odd and acc.exps.get(3, 0) < -r:
            bad = [3]
        if bad:
            prime = bad[0]
            return ScreenReport(
                NonIntegerCoefficient(
                    index=r,
                    prime=prime,
                    valuation=acc.exps[prime],
                    value=acc.maybe_fraction(_VALUE_BIT_CAP),
                    detail=f"prime {prime} survives in the denominator of u_{r}",
                ),
                None,
            )
        for q in track_primes:
            tracks[q].append(acc.exps.get(q, 0))
    return ScreenReport(None, {q: tuple(v) for q, v in tracks.items()})


def _closed_top_parts(
    n: int, dim: int, odd_deg: bool
) -> tuple[int, list[int], list[int]]:
    """u_n = 2^a * prod(nums) / prod(dens) for even dim, all O(dim) many
    factors of size O(n).  Valid for dim >= 4 even, n >= 1."""
    if dim % 2 != 0 or dim < 4:
        raise ValueError("closed top form needs even dim >= 4")
    if odd_deg:
        kp = dim // 2
        w = (kp - 1) // 2
        nums = [2 * n + 2 * s + 1 for s in range(1, kp // 2)]
        dens = [n + i for i in range(w + 1, kp)]
        return 2 * n + w, nums, dens
    k = (dim - 2) // 2
    w = (k - 1) // 2
    nums = [2 * n + 2 * i - 1 for i in range(1, k // 2 + 1)]
    dens = [n + w + i for i in range(1, k // 2 + 1)]
    return 2 * n + w, nums, dens


def _ord2(x: int) -> int:
    return (x & -x).bit_length() - 1


def _strip6(x: int) -> tuple[int, int]:
    """(part coprime to 6, ord_3)."""
    x >>= _ord2(x)
    t = 0
    while x % 3 == 0:
        x //= 3
        t += 1
    return x, t


def _product_integrality(
    two_exp: int, nums: list[int], dens: list[int], three_budget: int
) -> bool:
    """Whether 2^two_exp * prod(nums) / prod(dens) has no denominator prime
    other than 3, and 3 to order at most three_budget.  Modular, never
    factors the n-sized inputs."""
    two_need = sum(_ord2(d) for d in dens) - sum(_ord2(x) for x in nums)
    if two_need > two_exp:
        return False
    three = 0
    mod = 1
    for d in dens:
        core, t3 = _strip6(d)
        three += t3
        mod *= core
    num_prod = 1
    for x in nums:
        core, t3 = _strip6(x)
        three -= t3
        num_prod = num_prod * core % mod
    if three > three_budget:
        return False
    return num_prod % mod == 0


def top_coefficient_screen(m: int, dim: int) -> Optional[NonIntegerCoefficient]:
    """Integrality screen of u_n, u_{n-1}, u_{n-2} in O(dim) arithmetic.

    Necessary conditions only: passing says nothing, failing certifies
    nonexistence.  Even dimensions >= 4; this is what makes the searches
    over huge candidate degrees affordable.
    """
    p = stiff_params(m, dim)
    n = p.n
    if n < 1:
        return None
    two_exp, nums, dens = _closed_top_parts(n, dim, p.odd)
    checks: list[tuple[int, list[int], list[int]]] = [(n, [], [])]
    if n >= 2:
        # one ratio step down from u_n
        if p.odd:
            extra = ([n, 2 * n + 1], [dim + 4 * n - 2])
        else:
            extra = ([n, 2 * n - 1], [dim + 4 * n - 4])
        checks.append((n - 1, *extra))
    if n >= 3:
        if p.odd:
            extra2 = (
                [n, 2 * n + 1, n - 1, 2 * n - 1],
                [dim + 4 * n - 2, 2, dim + 4 * n - 4],
            )
        else:
            extra2 = (
                [n, 2 * n - 1, n - 1, 2 * n - 3],
                [dim + 4 * n - 4, 2, dim + 4 * n - 6],
            )
        checks.append((n - 2, *extra2))
    for index, extra_num, extra_den in checks:
        budget = index if p.odd else 0
        ok = _product_integrality(
            two_exp, nums + extra_num, dens + extra_den, budget
        )
        if not ok:
            return NonIntegerCoefficient(
                index=index,
                prime=None,
                valuation=None,
                value=None,
                detail=(
                    f"u_{index} fails the modular integrality certificate "
                    f"(denominator does not divide numerator)"
                ),
            )
    return None


def newton_screen(
    m: int,
    dim: int,
    primes: Sequence[int] = (2, 3, 5),
    report: Optional[ScreenReport] = None,
) -> Optional[NewtonPolygon]:
    """First Newton polygon with a fractional slope among the given primes,
    or None.  Works on the integer-cleared polynomial (odd degrees fold the
    3-power denominators in), using only tracked valuations."""
    p = stiff_params(m, dim)
    if report is None:
        report = screen_coefficients(m, dim, track_primes=primes)
    if report.witness is not None:
        raise ValueError("coefficient screen must pass before a Newton screen")
    assert report.valuations is not None
    for q in primes:
        ords = report.valuations[q]
        vals: list[Optional[int]] = []
        for i in range(p.n):  # ascending by degree of X
            r = p.n - i
            v = ords[r - 1]
            if p.odd and q == 3:
                v += r  # clearing multiplies u_r by 3^r
            vals.append(v)
        vals.append(0)  # monic leading coefficient
        polygon = newton_polygon_from_valuations(vals, q)
        if not polygon.all_slopes_integer:
            return polygon
    return None


# ---------------------------------------------------------------------------
# nonexistence thresholds

@dataclass(frozen=True)
class BoundResult:
    """Least n from which nonexistence is guaranteed in this dimension and
    parity.  `conservative` marks thresholds known not to be tight."""

    threshold: int
    tag: str
    conservative: bool


def _balanced_prod(terms: Sequence[int]) -> int:
    """Product by recursive halving; math.prod is quadratic in the total
    bit size when the factor list is long."""
    if not terms:
        return 1
    if len(terms) <= 8:
        return math.prod(terms)
    mid = len(terms) // 2
    return _balanced_prod(terms[:mid]) * _balanced_prod(terms[mid:])


def _divisor_product_params(dim: int, odd_deg: bool) -> Optional[tuple[int, int]]:
    """(theta, count) for the generic even-dimension threshold, whose
    value is one plus the product of 2*theta - 2*i + 1 over i = 1..count;
    None when a dedicated table entry applies instead."""
    k = (dim - 2) // 2
    if not odd_deg:
        if dim in (4, 6, 8):
            return None
        return (k - 1) // 2 + 2, k // 2
    if dim in (4, 6, 8, 10, 12, 14):
        return None
    return k // 2 + 4, (k + 1) // 2


def n_upper_bound(dim: int, odd_deg: bool) -> Optional[BoundResult]:
    """Proven nonexistence threshold on n = m // 2, or None (dim 2, where
    every degree is realizable)."""
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    if dim == 2:
        return None
    if dim % 2 == 1:
        if odd_deg:
            return BoundResult(2 * dim + 9, "odd-dim-valuation", True)
        return BoundResult(2 * dim + 5, "odd-dim-valuation", True)
    if not odd_deg:
        if dim == 4:
            return BoundResult(6, "power-of-two-roots", False)
        if dim == 6:
            return BoundResult(2, "half-integer-slope", False)
        if dim == 8:
            return BoundResult(31, "dim8-even-deg", False)
        theta, count = _divisor_product_params(dim, False)
        terms = [2 * theta - 2 * i + 1 for i in range(1, count + 1)]
        return BoundResult(
            _balanced_prod(terms) + 1, "even-dim-divisor-product", False
        )
    if dim == 4:
        return BoundResult(3, "dim4-odd-deg", False)
    if dim == 6:
        return BoundResult(2, "dim6-odd-deg", False)
    if dim == 8:
        return BoundResult(2, "dim8-odd-deg", False)
    if dim == 10:
        return BoundResult(2, "dim10-odd-deg", False)
    if dim == 12:
        return BoundResult(10391, "dim12-odd-deg", False)
    if dim == 14:
        return BoundResult(4153, "dim14-odd-deg", False)
    theta, count = _divisor_product_params(dim, True)
    terms = [2 * theta - 2 * i + 1 for i in range(1, count + 1)]
    return BoundResult(
        _balanced_prod(terms) + 1, "odd-deg-divisor-product", True
    )


def bound_if_exceeded(dim: int, odd_deg: bool, n: int) -> Optional[BoundResult]:
    """n_upper_bound when n sits at or past it, else None.

    Unlike calling n_upper_bound directly, this never materializes the
    generic divisor-product thresholds (astronomical in large dimensions):
    the running product stops as soon as it clears n.
    """
    if dim == 2:
        return None
    params = None if dim % 2 else _divisor_product_params(dim, odd_deg)
    if params is None:
        bound = n_upper_bound(dim, odd_deg)
        return bound if n >= bound.threshold else None
    theta, count = params
    partial = 1
    for i in range(1, count + 1):
        partial *= 2 * theta - 2 * i + 1
        if partial > n:
            return None
    tag = "odd-deg-divisor-product" if odd_deg else "even-dim-divisor-product"
    return BoundResult(partial + 1, tag, odd_deg) if n > partial else None


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class StiffCertificate:
    """Verified evidence that the configuration exists.

    kind "quadrature": explicit rational section data in `quadrature`, with
    the section polynomial roots in `s_roots` (ascending).
    kind "equal-weight": dimension 2, where every weight is 1/m and the
    sections sit at the zeros of the m-th orthogonal polynomial; exactness
    is checked through power sums of `node_poly` without needing the
    (typically irrational) sections themselves.
    """

    kind: str
    m: int
    dim: int
    quadrature: Optional[SymmetricQuadrature] = None
    s_roots: tuple[Fraction, ...] = ()
    equal_weight: Optional[Fraction] = None
    node_poly: Optional[RatPoly] = None


def _root_power_sums(p: RatPoly, count: int) -> list[Fraction]:
    """Power sums s_1..s_count of the roots of monic p, by the standard
    recurrence on elementary symmetric functions."""
    n = p.degree
    e = [Fraction(0)] * (n + 1)  # e[i] = i-th elementary symmetric function
    e[0] = Fraction(1)
    for i in range(1, n + 1):
        e[i] = p.coeffs[n - i] * (-1) ** i
    sums: list[Fraction] = []
    for j in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(j - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i] * sums[j - i - 1]
        if j <= n:
            acc += (-1) ** (j - 1) * j * e[j]
        sums.append(acc)
    return sums


def verify_certificate(cert: StiffCertificate) -> None:
    """Exact re-check of a certificate; raises ValueError if anything is
    off.  Decision code always calls this before reporting Exists."""
    strength = 2 * cert.m - 1
    if cert.kind == "quadrature":
        if cert.quadrature is None:
            raise ValueError("quadrature certificate without quadrature")
        if cert.quadrature.total_points != cert.m:
            raise ValueError(
                f"expected {cert.m} sections, got {cert.quadrature.total_points}"
            )
        cert.quadrature.verify(strength)
        for root, (square, _) in zip(
            sorted(cert.s_roots, reverse=True), cert.quadrature.pairs
        ):
            if root * square != 1:
                raise ValueError(f"root {root} does not match square {square}")
        return
    if cert.kind == "equal-weight":
        if cert.dim != 2 or cert.equal_weight is None or cert.node_poly is None:
            raise ValueError("malformed equal-weight certificate")
        if cert.equal_weight * cert.m != 1:
            raise ValueError("equal weight must be 1/m")
        n = cert.m // 2
        if cert.node_poly.degree != n:
            raise ValueError("node polynomial degree mismatch")
        sums = _root_power_sums(cert.node_poly, cert.m - 1)
        for j in range(1, cert.m):
            total = 2 * cert.equal_weight * sums[j - 1]
            if total != moment(j, 2):
                raise ValueError(
                    f"power-sum moment {j} is {total}, expected {moment(j, 2)}"
                )
        return
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


# ---------------------------------------------------------------------------
# decision

@dataclass(frozen=True)
class StiffVerdict:
    m: int
    dim: int
    exists: bool
    certificate: Optional[StiffCertificate]
    witness: Optional[Witness]

    @property
    def decision(self) -> str:
        return "Exists" if self.exists else "NotExists"


class UndecidedError(RuntimeError):
    """All affordable screens passed but the exact root step is out of
    budget for this degree; no verdict can be given honestly."""

    def __init__(self, m: int, dim: int, reason: str):
        super().__init__(f"degree {m} in dimension {dim} undecided: {reason}")
        self.m = m
        self.dim = dim
        self.reason = reason


_FULL_SCREEN_CAP = 200_000
_TOP_SCREEN_MIN_N = 64


def _exists_verdict(m: int, dim: int, roots: Sequence[Fraction]) -> StiffVerdict:
    squares = sorted(1 / x for x in roots)
    quad = quadrature_from_node_squares(m, dim, squares)
    cert = StiffCertificate(
        kind="quadrature",
        m=m,
        dim=dim,
        quadrature=quad,
        s_roots=tuple(sorted(roots)),
    )
    verify_certificate(cert)
    return StiffVerdict(m, dim, True, cert, None)


def stiff_exists(
    m: int,
    dim: int,
    use_bounds: bool = True,
    newton_primes: Sequence[int] = (2, 3, 5),
) -> StiffVerdict:
    """Decide whether a degree-m stiff configuration exists on the unit
    sphere in R^dim, with a verified certificate or a checkable witness.

    use_bounds=False disables the proven nonexistence shortcuts, forcing
    the explicit pipeline (used to validate those very thresholds).
    """
    p = stiff_params(m, dim)
    if m == 1:
        quad = SymmetricQuadrature(dim, (), Fraction(1))
        cert = StiffCertificate(
            kind="quadrature", m=1, dim=dim, quadrature=quad, s_roots=()
        )
        verify_certificate(cert)
        return StiffVerdict(m, dim, True, cert, None)
    if dim == 2:
        cert = StiffCertificate(
            kind="equal-weight",
            m=m,
            dim=2,
            equal_weight=Fraction(1, m),
            node_poly=node_square_poly(m, 2),
        )
        verify_certificate(cert)
        return StiffVerdict(m, dim, True, cert, None)

    n = p.n
    if use_bounds:
        bound = bound_if_exceeded(dim, p.odd, n)
        if bound is not None:
            return StiffVerdict(
                m,
                dim,
                False,
                None,
                BoundExceeded(bound.tag, bound.threshold, n, bound.conservative),
            )

    if dim % 2 == 0 and n > _TOP_SCREEN_MIN_N:
        top = top_coefficient_screen(m, dim)
        if top is not None:
            return StiffVerdict(m, dim, False, None, top)

    if n > _FULL_SCREEN_CAP:
        raise UndecidedError(
            m, dim, f"degree parameter {n} exceeds the full-screen budget"
        )

    report = screen_coefficients(m, dim, track_primes=tuple(newton_primes))
    if report.witness is not None:
        return StiffVerdict(m, dim, False, None, report.witness)

    polygon = newton_screen(m, dim, primes=newton_primes, report=report)
    if polygon is not None:
        return StiffVerdict(m, dim, False, None, IrrationalRoot(newton=polygon))

    rep = rational_roots(s_poly(m, dim), p.allowed_denominators)
    if not rep.all_rational:
        return StiffVerdict(
            m, dim, False, None, IrrationalRoot(root_witness=rep.witness)
        )
    if len(set(rep.roots)) != len(rep.roots):
        raise AssertionError(
            f"section polynomial for m={m}, dim={dim} has repeated roots"
        )
    return _exists_verdict(m, dim, rep.roots)
