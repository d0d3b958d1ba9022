"""Exact reference values for binomial tail quantities.

Everything in this module is an *oracle*: results are either exact rationals
or carry an explicit absolute error bound that the caller can rely on.  The
closed-form bounds elsewhere in the package are tested against these values,
so nothing here may depend on the bound formulas themselves (in particular no
Stirling-type approximations and no incomplete-beta shortcuts).

Notation used throughout the docstrings, for n trials with success
probability p and q = 1 - p:

    b(n, k, p)  = C(n, k) p^k q^(n-k)                 point mass
    B(n, k, p)  = sum_{j<=k} b(n, j, p)               lower tail
    Bbar(n,k,p) = sum_{j>=k} b(n, j, p)               upper tail
    D(f || p)   = f ln(f/p) + (1-f) ln((1-f)/(1-p))   relative entropy

Two backends are available.  With rational p the default backend works in
integer arithmetic and is exact (err = 0).  For very large n a high-precision
floating backend (mpmath) is used instead; it accumulates the tail through
the pmf ratio recurrence b(n,j-1)/b(n,j) = q j / (p (n-j+1)) with a geometric
truncation bound and per-operation rounding slack, and reports the total as
``err``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
import mpmath
from gmpy2 import mpz

__all__ = [
    "ExactReal",
    "BinomialParams",
    "TailTable",
    "RATIONAL_N_LIMIT",
    "pmf_exact",
    "lower_tail_exact",
    "upper_tail_exact",
    "tail_ratio_exact",
    "partial_mean_exact",
    "entropy_factor_exact",
    "ramanujan_theta",
    "median_deficit",
    "gaussian_upper_tail",
    "mills_ratio",
]

RationalLike = Union[int, float, str, Fraction]

# The rational backend is exact at any n, but its integers grow like n log n
# bits; beyond this point the mpf backend is the default.
RATIONAL_N_LIMIT = 50_000

_ZERO = Fraction(0)


def _as_fraction(p: RationalLike) -> Fraction:
    # Fraction(float) is the exact binary value, so float inputs stay
    # exact; mpf inputs convert exactly from their mantissa and exponent.
    if isinstance(p, Fraction):
        return p
    if isinstance(p, mpmath.mpf):
        return _mpf_to_fraction(p)
    return Fraction(p)


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise ValueError(f"cannot convert non-finite value {x!r}")
    val = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -val if sign else val


# ---------------------------------------------------------------------------
# value-with-error container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactReal:
    """A real number known to lie in [value - err, value + err].

    err == 0 means the value is exact (the rational backend).  Results from
    the floating backend keep value as the exact binary rational of the
    computed mpf together with the accumulated error bound.
    """

    value: Fraction
    err: Fraction = _ZERO

    def __post_init__(self) -> None:
        if self.err < 0:
            raise ValueError("err must be nonnegative")

    @classmethod
    def exact(cls, x: RationalLike) -> "ExactReal":
        return cls(_as_fraction(x), _ZERO)

    @classmethod
    def from_bracket(cls, lo: Fraction, hi: Fraction) -> "ExactReal":
        if hi < lo:
            raise ValueError("empty bracket")
        mid = (lo + hi) / 2
        return cls(mid, hi - mid)

    @property
    def is_exact(self) -> bool:
        return self.err == 0

    @property
    def lower(self) -> Fraction:
        return self.value - self.err

    @property
    def upper(self) -> Fraction:
        return self.value + self.err

    def __float__(self) -> float:
        return float(self.value)

    def to_mpf(self, dps: int = 30) -> mpmath.mpf:
        with mpmath.workdps(dps):
            return mpmath.mpf(self.value.numerator) / self.value.denominator

    # Directed comparisons: true only when the orderings hold for every pair
    # of admissible values, i.e. with the error bounds spent against us.
    def definitely_lt(self, other: "ExactReal | RationalLike") -> bool:
        o = other if isinstance(other, ExactReal) else ExactReal.exact(other)
        return self.upper < o.lower

    def definitely_gt(self, other: "ExactReal | RationalLike") -> bool:
        o = other if isinstance(other, ExactReal) else ExactReal.exact(other)
        return self.lower > o.upper

    def __add__(self, other: "ExactReal | RationalLike") -> "ExactReal":
        o = other if isinstance(other, ExactReal) else ExactReal.exact(other)
        return ExactReal(self.value + o.value, self.err + o.err)

    def __sub__(self, other: "ExactReal | RationalLike") -> "ExactReal":
        o = other if isinstance(other, ExactReal) else ExactReal.exact(other)
        return ExactReal(self.value - o.value, self.err + o.err)

    def __mul__(self, other: "ExactReal | RationalLike") -> "ExactReal":
        o = other if isinstance(other, ExactReal) else ExactReal.exact(other)
        err = (
            abs(self.value) * o.err
            + abs(o.value) * self.err
            + self.err * o.err
        )
        return ExactReal(self.value * o.value, err)

    __radd__ = __add__
    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# parameter container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinomialParams:
    """Validated (n, k, p) triple with 1 <= n, 0 <= k <= n, 0 < p < 1."""

    n: int
    k: int
    p: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _as_fraction(self.p))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k must be in [0, {self.n}], got {self.k}")
        if not 0 < self.p < 1:
            raise ValueError(f"p must be in (0, 1), got {self.p}")

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def f(self) -> Fraction:
        return Fraction(self.k, self.n)

    def reflected(self) -> "BinomialParams":
        """The substitution (k, p) -> (n - k, 1 - p) that swaps the tails."""
        return BinomialParams(self.n, self.n - self.k, 1 - self.p)


# ---------------------------------------------------------------------------
# rational backend
# ---------------------------------------------------------------------------


class TailTable:
    """All pmf numerators for one (n, p) over the common denominator c^n.

    With p = a/c in lowest terms, t_j = C(n, j) a^j (c-a)^(n-j) is an integer
    and b(n, j, p) = t_j / c^n.  The table stores t_j, the prefix sums
    T_j = sum_{i<=j} t_i, and the weighted sums W_j = sum_{i<=j} i * t_i, so
    that tails, tail ratios and partial means are integer-pair lookups.  This
    is the workhorse behind the grid sweeps.
    """

    def __init__(self, n: int, p: RationalLike):
        p = _as_fraction(p)
        if not 0 < p < 1:
            raise ValueError(f"p must be in (0, 1), got {p}")
        self.n = n
        self.p = p
        a, c = p.numerator, p.denominator
        b = c - a
        t = mpz(b) ** n
        pmf = [t]
        cdf = [t]
        wsum = [mpz(0)]
        acc = t
        wacc = mpz(0)
        for j in range(n):
            # exact: t_{j+1} = t_j * (n-j) a / ((j+1) (c-a))
            t = t * ((n - j) * a) // ((j + 1) * b)
            acc += t
            wacc += (j + 1) * t
            pmf.append(t)
            cdf.append(acc)
            wsum.append(wacc)
        self.den = mpz(c) ** n
        self.pmf_num = pmf
        self.cdf_num = cdf
        self.wsum_num = wsum

    def pmf(self, k: int) -> Fraction:
        return Fraction(int(self.pmf_num[k]), int(self.den))

    def cdf(self, k: int) -> Fraction:
        return Fraction(int(self.cdf_num[k]), int(self.den))

    def sf(self, k: int) -> Fraction:
        """Upper tail Bbar(n, k, p) = 1 - B(n, k-1, p)."""
        if k == 0:
            return Fraction(1)
        return Fraction(int(self.den - self.cdf_num[k - 1]), int(self.den))

    def ratio(self, k: int) -> Fraction:
        """B(n, k, p) / b(n, k, p)."""
        return Fraction(int(self.cdf_num[k]), int(self.pmf_num[k]))

    def partial_mean(self, k: int) -> Fraction:
        """mu(n, k) = sum_{j<=k} j b(n, j, p) / B(n, k, p)."""
        return Fraction(int(self.wsum_num[k]), int(self.cdf_num[k]))


def _pmf_fraction(n: int, k: int, p: Fraction) -> Fraction:
    a, c = p.numerator, p.denominator
    num = gmpy2.bincoef(n, k) * mpz(a) ** k * mpz(c - a) ** (n - k)
    return Fraction(int(num), int(mpz(c) ** n))


def _lower_tail_fraction(n: int, k: int, p: Fraction) -> Fraction:
    a, c = p.numerator, p.denominator
    b = c - a
    t = mpz(b) ** n
    acc = t
    for j in range(k):
        t = t * ((n - j) * a) // ((j + 1) * b)
        acc += t
    return Fraction(int(acc), int(mpz(c) ** n))


def _partial_mean_fraction(n: int, k: int, p: Fraction) -> Fraction:
    a, c = p.numerator, p.denominator
    b = c - a
    t = mpz(b) ** n
    acc = t
    wacc = mpz(0)
    for j in range(k):
        t = t * ((n - j) * a) // ((j + 1) * b)
        acc += t
        wacc += (j + 1) * t
    return Fraction(int(wacc), int(acc))


# ---------------------------------------------------------------------------
# high-precision floating backend
# ---------------------------------------------------------------------------


def _ulp_rel(extra_ops: int = 0) -> mpmath.mpf:
    # one-rounding relative slack at the current working precision
    return mpmath.mpf(2) ** (-mpmath.mp.prec + 2) * (1 + extra_ops)


def _log_pmf_mpf(n: int, k: int, p: Fraction) -> tuple[mpmath.mpf, mpmath.mpf]:
    """ln b(n, k, p) and an absolute error bound, at current precision.

    The binomial coefficient is exact (GMP); only the final log/multiplies
    round, so the error is a few ulp scaled by the coefficient sizes.
    """
    a, c = p.numerator, p.denominator
    comb = gmpy2.bincoef(n, k)
    ln_b = (
        mpmath.log(mpmath.mpf(int(comb)))
        + k * mpmath.log(mpmath.mpf(a))
        + (n - k) * mpmath.log(mpmath.mpf(c - a))
        - n * mpmath.log(mpmath.mpf(c))
    )
    # each log is correct to ~1 ulp of its own magnitude; the k,(n-k),n
    # multipliers scale that slack before the final additions
    scale = abs(ln_b) + 3 * n * (abs(math.log(c)) + 2) + 10
    return ln_b, _ulp_rel(8) * scale


def _tail_mpf_below_mean(
    n: int, k: int, p: Fraction, want_mean: bool
) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """(B, err, mu-ish) for k <= pn at the current working precision.

    Sums S = B/b through the decreasing ratio recurrence and bounds the
    truncated remainder by a geometric series; also accumulates the weighted
    sum needed for the partial mean when requested.
    """
    a, c = p.numerator, p.denominator
    b_den = c - a
    if Fraction(k, n) > p:
        raise ValueError("ratio recurrence requires k <= pn")
    ln_b, ln_b_err = _log_pmf_mpf(n, k, p)
    bval = mpmath.exp(ln_b)
    one = mpmath.mpf(1)
    S = one
    W = mpmath.mpf(0)  # sum of (k - j) * term, for the partial mean
    term = one
    ops = 0
    j = k
    stop = mpmath.mpf(2) ** (-mpmath.mp.prec - 8)
    rho = mpmath.mpf(0)
    while j >= 1:
        rho = mpmath.mpf(b_den * j) / (a * (n - j + 1))
        term *= rho
        S += term
        if want_mean:
            W += (k - j + 1) * term
        ops += 3
        j -= 1
        if rho < 1 and term < stop * S:
            break
    # remaining terms are dominated by term * (rho' + rho'^2 + ...) with
    # rho' = rho at the next (smaller) j, which is <= the last rho used
    if j >= 1 and rho < 1:
        trunc = term * rho / (1 - rho)
        if want_mean:
            trunc_w = term * rho * ((k - j) / (1 - rho) + 1 / (1 - rho) ** 2)
        else:
            trunc_w = mpmath.mpf(0)
    else:
        trunc = mpmath.mpf(0)
        trunc_w = mpmath.mpf(0)
    round_err = _ulp_rel(ops) * (S + W)
    B = bval * S
    errB = bval * (trunc + round_err) + bval * ln_b_err * S
    if want_mean:
        # mu = k - W/S with W's truncation and rounding spent pessimistically
        mu = k - W / S
        errmu = (trunc_w + round_err + (W / S) * (trunc + round_err)) / S
        return B, errB, (mu, errmu)
    return B, errB, (mpmath.mpf(0), mpmath.mpf(0))


def _lower_tail_mpf(n: int, k: int, p: Fraction, dps: int) -> ExactReal:
    with mpmath.workdps(dps + 10):
        if Fraction(k, n) <= p:
            B, err, _ = _tail_mpf_below_mean(n, k, p, want_mean=False)
            return ExactReal(_mpf_to_fraction(B), _mpf_to_fraction(err))
        # complement through the opposite tail, which is below its own mean
        Bc, errc, _ = _tail_mpf_below_mean(n, n - k - 1, 1 - p, want_mean=False)
        return ExactReal(1 - _mpf_to_fraction(Bc), _mpf_to_fraction(errc))


def _partial_mean_mpf(n: int, k: int, p: Fraction, dps: int) -> ExactReal:
    with mpmath.workdps(dps + 10):
        if Fraction(k, n) > p:
            # above the mean the ratio recurrence is not summable this way;
            # fall back to the exact rational path (slow but safe)
            return ExactReal.exact(_partial_mean_fraction(n, k, p))
        _, _, (mu, errmu) = _tail_mpf_below_mean(n, k, p, want_mean=True)
        return ExactReal(_mpf_to_fraction(mu), _mpf_to_fraction(errmu))


def _select_method(n: int, method: str) -> str:
    if method == "auto":
        return "rational" if n <= RATIONAL_N_LIMIT else "decimal"
    if method not in ("rational", "decimal"):
        raise ValueError(f"unknown method {method!r}")
    return method


# ---------------------------------------------------------------------------
# public oracle operations
# ---------------------------------------------------------------------------


def pmf_exact(
    n: int, k: int, p: RationalLike, *, method: str = "auto", dps: int = 60
) -> ExactReal:
    """Point mass b(n, k, p) = C(n, k) p^k (1-p)^(n-k)."""
    par = BinomialParams(n, k, p)
    if _select_method(n, method) == "rational":
        return ExactReal.exact(_pmf_fraction(par.n, par.k, par.p))
    with mpmath.workdps(dps + 10):
        ln_b, err = _log_pmf_mpf(par.n, par.k, par.p)
        val = mpmath.exp(ln_b)
        return ExactReal(_mpf_to_fraction(val), _mpf_to_fraction(val * err * 2))


def lower_tail_exact(
    n: int, k: int, p: RationalLike, *, method: str = "auto", dps: int = 60
) -> ExactReal:
    """Lower tail B(n, k, p) = sum_{j<=k} b(n, j, p)."""
    par = BinomialParams(n, k, p)
    if par.k == par.n:
        return ExactReal.exact(1)
    if _select_method(n, method) == "rational":
        return ExactReal.exact(_lower_tail_fraction(par.n, par.k, par.p))
    return _lower_tail_mpf(par.n, par.k, par.p, dps)


def upper_tail_exact(
    n: int, k: int, p: RationalLike, *, method: str = "auto", dps: int = 60
) -> ExactReal:
    """Upper tail Bbar(n, k, p) = B(n, n-k, 1-p), via that reflection."""
    par = BinomialParams(n, k, p).reflected()
    return lower_tail_exact(par.n, par.k, par.p, method=method, dps=dps)


def tail_ratio_exact(
    n: int, k: int, p: RationalLike, *, method: str = "auto", dps: int = 60
) -> ExactReal:
    """Tail-to-pmf ratio B(n, k, p) / b(n, k, p) >= 1."""
    par = BinomialParams(n, k, p)
    if _select_method(n, method) == "rational":
        a, c = par.p.numerator, par.p.denominator
        b = c - a
        t = mpz(b) ** n
        acc = t
        for j in range(par.k):
            t = t * ((n - j) * a) // ((j + 1) * b)
            acc += t
        return ExactReal.exact(Fraction(int(acc), int(t)))
    B = lower_tail_exact(n, k, p, method="decimal", dps=dps)
    bm = pmf_exact(n, k, p, method="decimal", dps=dps)
    val = B.value / bm.value
    err = (B.err + val * bm.err) / (bm.value - bm.err)
    return ExactReal(val, err)


def partial_mean_exact(
    n: int, k: int, p: RationalLike, *, method: str = "auto", dps: int = 60
) -> ExactReal:
    """Conditional mean mu(n, k) = E[X | X <= k] for X ~ Binomial(n, p)."""
    par = BinomialParams(n, k, p)
    if par.k == 0:
        return ExactReal.exact(0)
    if _select_method(n, method) == "rational":
        return ExactReal.exact(_partial_mean_fraction(par.n, par.k, par.p))
    return _partial_mean_mpf(par.n, par.k, par.p, dps)


def entropy_factor_exact(n: int, k: int, p: RationalLike) -> Fraction:
    """e^{n D(k/n || p)} as an exact rational.

    With f = k/n the factor is (k/(pn))^k ((n-k)/(qn))^(n-k), which is
    rational for rational p; the conventions 0^0 = 1 at k = 0 and k = n are
    built in.  Exact-only: this is the scale factor used by the entropy-
    normalized checks and it must not round.
    """
    par = BinomialParams(n, k, p)
    a, c = par.p.numerator, par.p.denominator
    m = n - k
    num = mpz(k) ** k * mpz(m) ** m * mpz(c) ** n
    den = mpz(a) ** k * mpz(c - a) ** m * mpz(n) ** n
    return Fraction(int(num), int(den))


# ---------------------------------------------------------------------------
# Ramanujan-type split of e^k and the half-point deficit
# ---------------------------------------------------------------------------


def ramanujan_theta(k: int, *, digits: int = 40) -> ExactReal:
    """theta(k) defined by e^k / 2 = sum_{i<k} k^i/i! + theta(k) k^k/k!.

    Computed from an exact rational enclosure of e^k: the series partial sum
    sum_{i<=N} k^i/i! in integer arithmetic plus the geometric remainder
    bound k^(N+1)/(N+1)! * (N+2)/(N+2-k) for N + 2 > k.  N is chosen so the
    enclosure pins ``digits`` significant digits of theta(k); the reported
    err is the enclosure half-width, so the defining equation's residual is
    below err by construction.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    # choose N so the remainder is ~10^-(digits+5) relative to e^k
    lk = math.log(k)
    budget = k / math.log(10) - digits - 6
    N = max(2 * k + 2, 8)
    while (N + 1) * lk - math.lgamma(N + 2) > budget * math.log(10):
        N = int(N * 1.3) + 8
    fN = mpz(math.factorial(N))
    t = fN
    acc = t
    kz = mpz(k)
    for i in range(1, N + 1):
        t = t * kz // i  # exact: t_i = k^i N!/i!
        acc += t
    ek_lo = Fraction(int(acc), int(fN))
    tail = Fraction(int(t * kz), int(fN * (N + 1))) * Fraction(N + 2, N + 2 - k)
    # partial sum below k, over the common denominator (k-1)!
    fk1 = mpz(math.factorial(k - 1))
    t = fk1
    sacc = t
    for i in range(1, k):
        t = t * kz // i
        sacc += t
    S = Fraction(int(sacc), int(fk1))
    scale = Fraction(int(fk1) * k, int(kz**k))  # k!/k^k
    lo = (ek_lo / 2 - S) * scale
    hi = (ek_lo / 2 + tail / 2 - S) * scale
    return ExactReal.from_bracket(lo, hi)


def median_deficit(n: int, k: int) -> ExactReal:
    """zeta(n, k) = (1/2 - B(n, k-1, k/n)) / b(n, k, k/n), exactly.

    Measures how far below one half the tail just under the mean sits, in
    units of the pmf at the mean, for the self-centered case p = k/n.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    a, b = k, n - k
    t = mpz(b) ** n
    acc_prev = mpz(0)
    for j in range(k):
        acc_prev += t
        t = t * ((n - j) * a) // ((j + 1) * b)
    # now t = t_k and acc_prev = sum_{j <= k-1}
    den = mpz(n) ** n
    num = Fraction(int(den), 2) - int(acc_prev)
    return ExactReal.exact(num / int(t))


# ---------------------------------------------------------------------------
# certified standard normal upper tail
# ---------------------------------------------------------------------------

_TOL_FLOOR = Fraction(1, 10**600)


def _tol_digits(tol: Fraction) -> int:
    """ceil(-log10(tol)) clamped to >= 1, in exact integer arithmetic.

    float(tol) underflows to 0 for tol below about 1e-324, so the digit
    count must not round-trip through a double.
    """
    if tol >= 1:
        return 1
    d = len(str(tol.denominator // tol.numerator))
    while Fraction(1, 10**d) > tol:
        d += 1
    while d > 1 and Fraction(1, 10 ** (d - 1)) <= tol:
        d -= 1
    return d


def _phi_taylor(x: Fraction, tol: Fraction) -> ExactReal:
    """Phi(-x) by the alternating entire series, remainder <= first omitted.

    Phi(-x) = 1/2 - (1/sqrt(2 pi)) sum_{j>=0} (-1)^j x^(2j+1) / (2^j j! (2j+1)).
    Terms peak near j = x^2/2 at about e^(x^2/2), so the working precision
    adds that growth to the requested tolerance before trusting the
    alternating-series bound.
    """
    xf = float(x)
    growth_digits = int(xf * xf / (2 * math.log(10))) + 4
    tol_digits = _tol_digits(tol) + 1
    dps = tol_digits + growth_digits + 20
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x.numerator) / x.denominator
        x2h = xm * xm / 2
        term = xm  # j = 0 term of sum x^(2j+1)/(2^j j! (2j+1))
        total = xm
        j = 0
        tol_m = mpmath.mpf(tol.numerator) / tol.denominator
        maxterm = term
        while True:
            j += 1
            term = term * x2h / j * (2 * j - 1) / (2 * j + 1)
            if term > maxterm:
                maxterm = term
            if j % 2 == 1:
                total -= term
            else:
                total += term
            if 2 * j >= float(x2h) * 2 and term < tol_m / 8:
                break
        inv = 1 / mpmath.sqrt(2 * mpmath.pi)
        val = mpmath.mpf(1) / 2 - inv * total
        rem = inv * term  # alternating, eventually decreasing: next term bounds
        rounding = _ulp_rel(4 * j + 16) * (maxterm + 1)
        return ExactReal(
            _mpf_to_fraction(val), _mpf_to_fraction(rem + rounding)
        )


def _phi_cf(x: Fraction, tol: Fraction) -> ExactReal | None:
    """Phi(-x) by the Stieltjes continued fraction for the Mills ratio.

    integral_x^inf e^(-t^2/2) dt = e^(-x^2/2) K(x) with
    K(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))); successive convergents
    alternate around K(x), so a consecutive pair gives a bracket.  Returns
    None when the bracket cannot reach ``tol`` (small x); the caller then
    falls back to the series.
    """
    tol_digits = _tol_digits(tol) + 1
    with mpmath.workdps(tol_digits + 25):
        xm = mpmath.mpf(x.numerator) / x.denominator
        scale = mpmath.exp(-xm * xm / 2) / mpmath.sqrt(2 * mpmath.pi)
        if scale == 0:
            # far past any representable tail; should not occur at sane tol
            return None
        tol_m = mpmath.mpf(tol.numerator) / tol.denominator
        p_prev, q_prev = mpmath.mpf(1), mpmath.mpf(0)
        p_cur, q_cur = mpmath.mpf(0), mpmath.mpf(1)
        conv_prev = None
        i = 0
        imax = int(float(xm) ** 2) + 2
        while i < imax:
            a = mpmath.mpf(1) if i == 0 else mpmath.mpf(i)
            p_cur, p_prev = xm * p_cur + a * p_prev, p_cur
            q_cur, q_prev = xm * q_cur + a * q_prev, q_cur
            conv = p_cur / q_cur
            i += 1
            if conv_prev is not None:
                lo, hi = min(conv, conv_prev), max(conv, conv_prev)
                if (hi - lo) * scale < tol_m / 2:
                    mid = (lo + hi) / 2
                    half = (hi - lo) / 2
                    val = scale * mid
                    err = scale * half + _ulp_rel(6 * i) * (val + 1)
                    return ExactReal(
                        _mpf_to_fraction(val), _mpf_to_fraction(err)
                    )
            conv_prev = conv
        return None


def gaussian_upper_tail(x: RationalLike, tol: RationalLike = Fraction(1, 10**30)) -> ExactReal:
    """Phi(-x) = P(Z >= x) for Z standard normal, certified to within tol.

    Uses the alternating series for moderate x and the Mills-ratio continued
    fraction (whose convergents bracket the value) for large x.  The reported
    err is at most tol.  Raises if x < 0, tol <= 0, or tol is below the
    supported precision floor.
    """
    xq = _as_fraction(x)
    if xq < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    tq = _as_fraction(tol)
    if tq <= 0:
        raise ValueError("tol must be positive")
    if tq < _TOL_FLOOR:
        raise ValueError(f"tol below achievable precision ({float(_TOL_FLOOR)})")
    if xq == 0:
        return ExactReal.exact(Fraction(1, 2))
    if xq <= 8:
        res = _phi_taylor(xq, tq)
    else:
        res = _phi_cf(xq, tq)
        if res is None:
            res = _phi_taylor(xq, tq)
    if res.err > tq:
        # one escalation with doubled precision via a tighter request
        res = _phi_taylor(xq, tq / 2**10)
        if res.err > tq:
            raise ArithmeticError("could not certify requested tolerance")
    return res


def _mills_cf(x: Fraction, tol: Fraction) -> ExactReal | None:
    """Mills ratio by the Stieltjes continued fraction, bracketed directly.

    Y(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))); consecutive convergents
    alternate around the value, so a close pair certifies a bracket.  The
    exponential scaling that the tail probability carries cancels here, so
    the bracket works at any x without over/underflow.  Returns None when
    the bracket cannot reach ``tol`` within the iteration budget (x too
    small for the requested tolerance).
    """
    tol_digits = _tol_digits(tol) + 1
    with mpmath.workdps(tol_digits + 25):
        xm = mpmath.mpf(x.numerator) / x.denominator
        tol_m = mpmath.mpf(tol.numerator) / tol.denominator
        p_prev, q_prev = mpmath.mpf(1), mpmath.mpf(0)
        p_cur, q_cur = mpmath.mpf(0), mpmath.mpf(1)
        conv_prev = None
        i = 0
        imax = int(float(xm) ** 2) + 40 * tol_digits + 50
        while i < imax:
            a = mpmath.mpf(1) if i == 0 else mpmath.mpf(i)
            p_cur, p_prev = xm * p_cur + a * p_prev, p_cur
            q_cur, q_prev = xm * q_cur + a * q_prev, q_cur
            conv = p_cur / q_cur
            i += 1
            if conv_prev is not None:
                lo, hi = min(conv, conv_prev), max(conv, conv_prev)
                if hi - lo < tol_m / 2:
                    mid = (lo + hi) / 2
                    err = (hi - lo) / 2 + _ulp_rel(6 * i) * (mid + 1)
                    return ExactReal(_mpf_to_fraction(mid), _mpf_to_fraction(err))
            conv_prev = conv
        return None


def mills_ratio(x: RationalLike, tol: RationalLike = Fraction(1, 10**30)) -> ExactReal:
    """Y(x) = e^{x^2/2} sqrt(2 pi) Phi(-x), certified to within tol.

    Y is the Mills ratio of the standard normal; it also equals the
    Stieltjes continued fraction 1/(x + 1/(x + 2/(x + ...))).  The large-x
    branch brackets that fraction directly (the exponential rescaling of
    the tail cancels algebraically, so no huge factors ever appear); for
    small x the fraction converges too slowly and the value is assembled
    from the series-based tail oracle via the defining identity instead.
    Raises if x < 0, tol is out of range, or the tolerance cannot be
    certified for this x.
    """
    xq = _as_fraction(x)
    if xq < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    tq = _as_fraction(tol)
    if tq <= 0:
        raise ValueError("tol must be positive")
    if tq < _TOL_FLOOR:
        raise ValueError(f"tol below achievable precision ({float(_TOL_FLOOR)})")
    if xq > 8:
        res = _mills_cf(xq, tq)
        if res is not None:
            return res
    # Identity route: Y = scale * Phi(-x) with scale = sqrt(2 pi) e^{x^2/2}.
    tol_digits = _tol_digits(tq) + 1
    growth_digits = int(float(xq) * float(xq) / (2 * math.log(10))) + 4
    with mpmath.workdps(tol_digits + growth_digits + 30):
        xm = mpmath.mpf(xq.numerator) / xq.denominator
        scale_m = mpmath.sqrt(2 * mpmath.pi) * mpmath.exp(xm * xm / 2)
        scale = ExactReal(
            _mpf_to_fraction(scale_m),
            _mpf_to_fraction(scale_m * _ulp_rel(8)),
        )
    phi_tol = tq / (4 * scale.upper)
    if phi_tol < _TOL_FLOOR:
        raise ValueError(
            f"tol ~1e-{_tol_digits(tq)} not certifiable at x = {float(xq)}: "
            "the continued-fraction bracket stalled and the identity route "
            "would need the tail oracle below its precision floor"
        )
    res = scale * gaussian_upper_tail(xq, tol=phi_tol)
    if res.err > tq:
        raise ArithmeticError("could not certify requested tolerance")
    return res
