"""Closed-form bounds on binomial tail probabilities and tail ratios.

The exact reference values live in :mod:`binotail.exact`; this module holds
the closed forms that get certified against them.  Notation follows the
package docstring: b and B are the boundary pmf term and the lower tail,
D(f||p) the relative entropy, q = 1 - p, m = n - k, f = k/n.

Contents:

* ratio bounds L and U on B/b, together with the branch threshold kappa_1
  and the one-parameter family V(n, k, p, a) that U minimizes over,
* the normalized pmf prefactors phi(n, k) and varphi(n, k) and the
  Stirling-type band (varphi_-, varphi_+) enclosing varphi,
* the tilde family bounding sqrt(n) B e^{nD} and the tail bounds
  b_down/b_up derived from it,
* classical baselines: the Chernoff upper bound, two reverse-Chernoff
  lower bounds on the pmf, and the n-free large-deviation upper bound,
* upper-tail analogs obtained through the reflection
  (k, p) -> (n - k, 1 - p),
* partial-mean lower bounds, bounds on the successive ratio B_n/B_{n+1},
  and the large/moderate-deviation limit constants.

Scalar helpers take real-valued arguments (several monotonicity statements
treat n and k as continuous) plus an optional ``dps``: ``None`` evaluates
in binary64, an integer selects mpmath arithmetic at that many decimal
digits.  Composite helpers take :class:`~binotail.exact.BinomialParams`,
enforce their preconditions in exact rational arithmetic, and report
probability-scale results as (log, linear) pairs so that values below the
binary64 underflow threshold remain usable through their logs.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import mpmath

from .exact import BinomialParams

__all__ = [
    "Interval",
    "LogLinear",
    "RatioBoundSet",
    "TailBoundSet",
    "ScaledTailBounds",
    "PartialMeanBounds",
    "ReverseChernoffPair",
    "relative_entropy",
    "odds_ratio",
    "ratio_lower",
    "branch_threshold",
    "ratio_upper_candidate",
    "ratio_upper",
    "entropy_scaled_pmf",
    "stirling_prefactor",
    "stirling_band",
    "scaled_tail_bounds",
    "large_dev_limit",
    "moderate_dev_limit",
    "partial_mean_bounds",
    "successive_ratio_bounds",
    "ratio_bounds",
    "upper_tail_ratio_bounds",
    "chernoff_upper",
    "reverse_chernoff_pair",
    "ferrante_upper",
    "tail_bounds",
    "upper_tail_bounds",
]


# ---------------------------------------------------------------------------
# result containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x, strict: bool = False) -> bool:
        if strict:
            return self.lo < x < self.hi
        return self.lo <= x <= self.hi


class LogLinear(NamedTuple):
    """A probability-scale value carried as (natural log, linear)."""

    log: float
    value: float


class ScaledTailBounds(NamedTuple):
    """The tilde family: lower_minus < lower <= sqrt(n) B e^{nD} <= upper < upper_plus."""

    lower_minus: float
    lower: float
    upper: float
    upper_plus: float


class PartialMeanBounds(NamedTuple):
    """Lower bounds on the partial mean mu_{n,k}(p); see partial_mean_bounds."""

    general: float
    simple: Optional[float]
    crude: Optional[float]


class ReverseChernoffPair(NamedTuple):
    """Two reverse-Chernoff lower bounds on the boundary pmf term b(n, k, p)."""

    type_bound: LogLinear
    ash_bound: LogLinear


@dataclass(frozen=True)
class RatioBoundSet:
    """Two-sided bounds on a tail ratio, 1 <= lower <= ratio <= upper < 2 lower.

    ``branch_a`` is the minimizing integer in the U formula (0 on the
    zero branch k < kappa_1) and ``kappa1`` the branch threshold itself.
    For the upper tail the fields describe the reflected parameters.
    """

    lower: float
    upper: float
    branch_a: int
    kappa1: float


@dataclass(frozen=True)
class TailBoundSet:
    """Bounds on one tail probability, each as a (log, linear) pair.

    b_down/b_up satisfy b_down < B < b_up < (89/44) b_down on their whole
    validity range; chernoff is e^{-nD}; reverse_type and reverse_ash are
    lower bounds on the boundary pmf term; ferrante is the n-free
    large-deviation upper bound on B, or None at k = pn where its
    prefactor diverges.
    """

    b_down: LogLinear
    b_up: LogLinear
    chernoff: LogLinear
    reverse_type: LogLinear
    reverse_ash: LogLinear
    ferrante: Optional[LogLinear]


# ---------------------------------------------------------------------------
# precision backends
# ---------------------------------------------------------------------------


class _FloatOps:
    """binary64 backend."""

    @staticmethod
    def convert(x):
        return float(x)

    sqrt = staticmethod(math.sqrt)
    log = staticmethod(math.log)
    exp = staticmethod(math.exp)
    lgamma = staticmethod(math.lgamma)
    floor = staticmethod(math.floor)

    @staticmethod
    def pi():
        return math.pi


class _MpOps:
    """mpmath backend; precision comes from the ambient mp context."""

    @staticmethod
    def convert(x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)

    sqrt = staticmethod(mpmath.sqrt)
    log = staticmethod(mpmath.log)
    exp = staticmethod(mpmath.exp)

    @staticmethod
    def lgamma(x):
        return mpmath.loggamma(x)

    @staticmethod
    def floor(x):
        return int(mpmath.floor(x))

    @staticmethod
    def pi():
        return +mpmath.pi


def _backend(dps: Optional[int]):
    """Return (ops namespace, precision context) for the requested digits."""
    if dps is None:
        return _FloatOps, contextlib.nullcontext()
    return _MpOps, mpmath.workdps(dps)


def _probability(ops, p):
    p = ops.convert(p)
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0, 1), got {p}")
    return p


# ---------------------------------------------------------------------------
# raw kernels (arguments already converted and validated)
# ---------------------------------------------------------------------------


def _ratio_lower_raw(ops, n, k, p):
    if k == 0:
        return ops.convert(1)
    t = p * n - k + 1
    return (2 - t + ops.sqrt(t * t + 4 * (1 - p) * k)) / 2


def _kappa1_raw(ops, n, p):
    return p * (n + 1) - ops.sqrt(p * (1 - p) * (n + 1))


def _candidate_raw(ops, n, k, p, a):
    # Grouped as p(n+1) - k + a so that k = a = 0 gives exactly 1.
    den = p * (n + 1) - k + a
    if den == 0:
        raise ValueError("V(n, k, p, a) has a pole at p*n + p - k + a = 0")
    return a + p * (n - k + a + 1) / den


def _ratio_upper_raw(ops, n, k, p):
    # Assumes k <= pn (checked by the caller, exactly when possible); every
    # a >= 0 then sits to the right of the pole, so the candidates are safe.
    kappa = _kappa1_raw(ops, n, p)
    if k < kappa:
        return _candidate_raw(ops, n, k, p, 0), 0
    a_lo = ops.floor(k - kappa)
    v_lo = _candidate_raw(ops, n, k, p, a_lo)
    v_hi = _candidate_raw(ops, n, k, p, a_lo + 1)
    if v_hi < v_lo:
        return v_hi, a_lo + 1
    return v_lo, a_lo


def _log_phi_raw(ops, n, k):
    m = n - k
    t = ops.lgamma(n + 1) - ops.lgamma(k + 1) - ops.lgamma(m + 1) - n * ops.log(n)
    if k > 0:
        t += k * ops.log(k)
    if m > 0:
        t += m * ops.log(m)
    return t


def _neg_n_entropy_raw(ops, n, k, p):
    """-n D(k/n || p) without forming k/n, clamped to (-inf, 0]."""
    m = n - k
    total = ops.convert(0)
    if k > 0:
        total += k * ops.log(p * n / k)
    if m > 0:
        total += m * ops.log((1 - p) * n / m)
    if total > 0:
        total *= 0
    return total


def _stirling_exponents_raw(n, k, m):
    eps_lo = 1 / (12 * n) - 1 / (12 * k) - 1 / (12 * m)
    eps_hi = 1 / (12 * n + 1) - 1 / (12 * k + 1) - 1 / (12 * m + 1)
    return eps_lo, eps_hi


def _scaled_raw(ops, n, k, p):
    # Assumes 1 <= k <= pn and k <= n - 1 (checked by the caller).
    m = n - k
    lower_ratio = _ratio_lower_raw(ops, n, k, p)
    upper_ratio, _ = _ratio_upper_raw(ops, n, k, p)
    mid = ops.sqrt(n) * ops.exp(_log_phi_raw(ops, n, k))
    outer = n / ops.sqrt(2 * ops.pi() * k * m)
    eps_lo, eps_hi = _stirling_exponents_raw(n, k, m)
    return ScaledTailBounds(
        lower_minus=outer * ops.exp(eps_lo) * lower_ratio,
        lower=mid * lower_ratio,
        upper=mid * upper_ratio,
        upper_plus=outer * ops.exp(eps_hi) * upper_ratio,
    )


# ---------------------------------------------------------------------------
# scalar helpers (real-valued arguments, optional mpmath precision)
# ---------------------------------------------------------------------------


def relative_entropy(f, p, dps: Optional[int] = None):
    """D(f||p) = f ln(f/p) + (1-f) ln((1-f)/(1-p)) in nats, with 0 ln 0 = 0.

    Nonnegative, zero iff f = p; tiny negative rounding residue is clamped.
    """
    ops, ctx = _backend(dps)
    with ctx:
        f = ops.convert(f)
        p = _probability(ops, p)
        if not 0 <= f <= 1:
            raise ValueError(f"f must be in [0, 1], got {f}")
        total = ops.convert(0)
        if f > 0:
            total += f * ops.log(f / p)
        if f < 1:
            total += (1 - f) * ops.log((1 - f) / (1 - p))
        if total < 0:
            total *= 0
        return total


def odds_ratio(f, p, dps: Optional[int] = None):
    """r = f(1-p)/((1-f)p), the decay rate of successive pmf terms below f."""
    ops, ctx = _backend(dps)
    with ctx:
        f = ops.convert(f)
        p = _probability(ops, p)
        if not 0 <= f < 1:
            raise ValueError(f"f must be in [0, 1), got {f}")
        return f * (1 - p) / ((1 - f) * p)


def ratio_lower(n, k, p, dps: Optional[int] = None):
    """Lower bound L(n, k, p) = (k+1-pn + sqrt((pn-k+1)^2 + 4qk))/2 on B/b.

    Accepts real n, k >= 0.  Always >= 1, with equality iff k = 0 (that
    case is returned exactly).
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        if n < 0 or k < 0:
            raise ValueError("L(n, k, p) requires n >= 0 and k >= 0")
        return _ratio_lower_raw(ops, n, k, p)


def branch_threshold(n, p, dps: Optional[int] = None):
    """kappa_1(n, p) = p(n+1) - sqrt(pq(n+1)); U switches branch at k = kappa_1.

    Defined for n >= -1 (shifted arguments appear in the partial-mean
    bounds); satisfies kappa_1 >= -q/4.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        p = _probability(ops, p)
        if n < -1:
            raise ValueError("kappa_1(n, p) requires n >= -1")
        return _kappa1_raw(ops, n, p)


def ratio_upper_candidate(n, k, p, a, dps: Optional[int] = None):
    """V(n, k, p, a) = a + p(n-k+a+1)/(pn+p-k+a); raises at the pole."""
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        a = ops.convert(a)
        return _candidate_raw(ops, n, k, p, a)


def ratio_upper(n, k, p, dps: Optional[int] = None):
    """Upper bound U(n, k, p) on B/b for k <= pn, as (value, branch_a).

    U = V(n, k, p, 0) when k < kappa_1(n, p); otherwise the better of the
    two integer neighbours of a~ = k - kappa_1 (ties resolved to the
    smaller a).  ``branch_a`` records the minimizing a.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        if n < 0 or k < 0:
            raise ValueError("U(n, k, p) requires n >= 0 and k >= 0")
        if k > p * n:
            raise ValueError("U(n, k, p) requires k <= p*n")
        return _ratio_upper_raw(ops, n, k, p)


def entropy_scaled_pmf(n, k, dps: Optional[int] = None):
    """phi(n, k) = Gamma(n+1)/(Gamma(k+1)Gamma(m+1)) * k^k m^m / n^n.

    The p-free part of the pmf: b(n, k, p) e^{n D(k/n||p)} = phi(n, k) for
    every p.  The endpoint convention 0^0 = 1 gives phi(n, 0) = phi(n, n)
    = 1 (exactly, by cancellation).  Real n > 0 and 0 <= k <= n accepted.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        if not (n > 0 and 0 <= k <= n):
            raise ValueError("phi(n, k) requires n > 0 and 0 <= k <= n")
        return ops.exp(_log_phi_raw(ops, n, k))


def stirling_prefactor(n, k, dps: Optional[int] = None):
    """varphi(n, k) = phi(n, k) sqrt(km/n), for 0 < k < n.

    Strictly increasing in n at fixed k/n, always below 1/sqrt(2 pi), and
    at least 1/sqrt(8) whenever j <= k <= n - j for some integer j >= 1.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        if not 0 < k < n:
            raise ValueError("varphi(n, k) requires 0 < k < n")
        return ops.exp(_log_phi_raw(ops, n, k) + ops.log(k * (n - k) / n) / 2)


def stirling_band(n, k, dps: Optional[int] = None) -> Interval:
    """Two-sided band (varphi_-, varphi_+) around varphi(n, k), 0 < k < n.

    varphi_- = e^{1/(12n) - 1/(12k) - 1/(12m)} / sqrt(2 pi) and varphi_+
    the same with every 12x replaced by 12x + 1; the enclosure is widest
    at (n, k) = (2, 1) where varphi_+/varphi_- = e^{29/2600}.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        if not 0 < k < n:
            raise ValueError("varphi band requires 0 < k < n")
        eps_lo, eps_hi = _stirling_exponents_raw(n, k, n - k)
        root = ops.sqrt(2 * ops.pi())
        return Interval(ops.exp(eps_lo) / root, ops.exp(eps_hi) / root)


def scaled_tail_bounds(n, k, p, dps: Optional[int] = None) -> ScaledTailBounds:
    """The tilde family bracketing sqrt(n) B e^{nD} for 1 <= k <= pn, k <= n-1.

    lower = sqrt(n) phi L and upper = sqrt(n) phi U; the outer pair
    replaces phi with its Stirling band, lower_minus/upper_plus =
    n {L,U} e^{eps -/+} / sqrt(2 pi k m).  The full chain is

        lower_minus < lower < sqrt(n) B e^{nD} < upper < upper_plus
                                                < (89/44) lower_minus.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        if not (1 <= k <= p * n and k <= n - 1):
            raise ValueError(
                "scaled tail bounds require 1 <= k <= p*n and k <= n - 1")
        return _scaled_raw(ops, n, k, p)


def large_dev_limit(f, p, dps: Optional[int] = None):
    """sqrt((1-f)/(2 pi f)) p/(p-f): the limit of sqrt(n) B e^{nD} at fixed f < p."""
    ops, ctx = _backend(dps)
    with ctx:
        f = ops.convert(f)
        p = _probability(ops, p)
        if not 0 < f < p:
            raise ValueError("large-deviation limit requires 0 < f < p")
        return ops.sqrt((1 - f) / (2 * ops.pi() * f)) * p / (p - f)


def moderate_dev_limit(p, dps: Optional[int] = None):
    """sqrt(pq/(2 pi)): the limit of B (alpha_n/sqrt(n)) e^{nD} for k_n = pn - alpha_n.

    Holds whenever alpha_n/sqrt(n) -> infinity and alpha_n/n -> 0;
    symmetric under p -> 1 - p.
    """
    ops, ctx = _backend(dps)
    with ctx:
        p = _probability(ops, p)
        return ops.sqrt(p * (1 - p) / (2 * ops.pi()))


def partial_mean_bounds(n, k, p, dps: Optional[int] = None) -> PartialMeanBounds:
    """Three lower bounds on the partial mean mu_{n,k}(p).

    general = k + 1 - L(n-1, k, p) holds for all 0 <= k <= n; simple =
    k + q/2 - sqrt(q(4k+q))/2 and crude = k - sqrt(qk) additionally need
    k <= pn and come back as None outside that range.  On the common
    range general >= simple >= crude.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        if n < 1 or k < 0 or k > n:
            raise ValueError("partial-mean bounds require n >= 1, 0 <= k <= n")
        general = k + 1 - _ratio_lower_raw(ops, n - 1, k, p)
        if k > p * n:
            return PartialMeanBounds(general, None, None)
        q = 1 - p
        simple = k + q / 2 - ops.sqrt(q * (4 * k + q)) / 2
        crude = k - ops.sqrt(q * k)
        return PartialMeanBounds(general, simple, crude)


def successive_ratio_bounds(n, k, p, dps: Optional[int] = None) -> Interval:
    """Bounds on B_{n,k}(p)/B_{n+1,k}(p): [(n-k+1)/((n+1)q), (n-k+L)/((n+1)q)].

    Saturated at k = 0 where both ends collapse to 1/q.
    """
    ops, ctx = _backend(dps)
    with ctx:
        n = ops.convert(n)
        k = ops.convert(k)
        p = _probability(ops, p)
        if n < 1 or k < 0 or k > n:
            raise ValueError("successive-ratio bounds require n >= 1, 0 <= k <= n")
        q = 1 - p
        lo = (n - k + 1) / ((n + 1) * q)
        hi = (n - k + _ratio_lower_raw(ops, n, k, p)) / ((n + 1) * q)
        return Interval(lo, hi)


# ---------------------------------------------------------------------------
# composite helpers on validated parameters (binary64 surface)
# ---------------------------------------------------------------------------


def _require_lower_tail(params: BinomialParams) -> None:
    # Exact rational check, so k = pn passes even when float(p)*n rounds down.
    if params.k > params.p * params.n:
        raise ValueError(
            f"theorem precondition violated: k <= p*n needed, "
            f"got k={params.k}, p*n={float(params.p * params.n):g}")


def _loglinear(logv: float) -> LogLinear:
    return LogLinear(logv, math.exp(logv))


def ratio_bounds(params: BinomialParams) -> RatioBoundSet:
    """L and U around the lower-tail ratio B/b, for k <= pn.

    1 <= L <= B/b <= U < 2L, all strict when k >= 1.
    """
    _require_lower_tail(params)
    ops = _FloatOps
    n, k, p = float(params.n), float(params.k), float(params.p)
    upper, branch_a = _ratio_upper_raw(ops, n, k, p)
    return RatioBoundSet(
        lower=_ratio_lower_raw(ops, n, k, p),
        upper=upper,
        branch_a=branch_a,
        kappa1=_kappa1_raw(ops, n, p),
    )


def upper_tail_ratio_bounds(params: BinomialParams) -> RatioBoundSet:
    """Bounds on the upper-tail ratio Bbar/b for k >= pn, by reflection.

    Evaluates ratio_bounds at (n, n-k, 1-p), so the upper-tail values are
    bit-for-bit the reflected lower-tail ones.
    """
    if params.k < params.p * params.n:
        raise ValueError(
            f"theorem precondition violated: k >= p*n needed, "
            f"got k={params.k}, p*n={float(params.p * params.n):g}")
    return ratio_bounds(params.reflected())


def chernoff_upper(params: BinomialParams) -> LogLinear:
    """The Chernoff upper bound e^{-n D(k/n||p)} on B, for k <= pn."""
    _require_lower_tail(params)
    ops = _FloatOps
    return _loglinear(
        _neg_n_entropy_raw(ops, float(params.n), float(params.k), float(params.p)))


def reverse_chernoff_pair(params: BinomialParams) -> ReverseChernoffPair:
    """Two lower bounds on the boundary pmf term b(n, k, p), 1 <= k <= n-1.

    type_bound = e^{-nD}/(n+1) (the method-of-types floor) and ash_bound =
    sqrt(n/(8km)) e^{-nD}; the latter saturates at (n, k) = (2, 1), p=1/2,
    and stays below the sharp ceiling sqrt(n/(2 pi k m)) e^{-nD}.
    """
    if not 1 <= params.k <= params.n - 1:
        raise ValueError("degenerate endpoint; exact pmf available")
    ops = _FloatOps
    n, k = float(params.n), float(params.k)
    log_e = _neg_n_entropy_raw(ops, n, k, float(params.p))
    return ReverseChernoffPair(
        type_bound=_loglinear(log_e - math.log(n + 1)),
        ash_bound=_loglinear(log_e + math.log(n / (8 * k * (n - k))) / 2),
    )


def ferrante_upper(params: BinomialParams) -> LogLinear:
    """The n-free large-deviation upper bound on B, for 1 <= k < pn.

    sqrt((1-f)/(2 pi f)) (p/(p-f)) e^{-nD} with f = k/n; tighter than
    Chernoff once the prefactor drops below 1, looser than b_up at small
    n.  Diverges as f -> 0 and f -> p, hence k = 0 and k = pn are errors.
    """
    if params.k >= params.p * params.n:
        raise ValueError(
            "theorem precondition violated: k < p*n needed "
            "(the bound has a pole at f = p)")
    if params.k == 0:
        raise ValueError("k = 0: prefactor diverges, use the exact tail q^n")
    ops = _FloatOps
    n, k, p = float(params.n), float(params.k), float(params.p)
    m = n - k
    pn_minus_k = float(params.p * params.n - params.k)
    logv = (
        math.log(m / (2 * math.pi * k)) / 2
        + math.log(float(params.p * params.n)) - math.log(pn_minus_k)
        + _neg_n_entropy_raw(ops, n, k, p)
    )
    return _loglinear(logv)


def tail_bounds(params: BinomialParams) -> TailBoundSet:
    """Refined two-sided tail bounds plus baselines, for 1 <= k <= pn, k <= n-1.

    b_down = L~_-/sqrt(n) e^{-nD} and b_up = U~_+/sqrt(n) e^{-nD} satisfy
    b_down < B < b_up < (89/44) b_down.  Assembled in the log domain, so
    the (finite) logs stay meaningful even when the linear values
    underflow binary64.
    """
    if params.k == 0 or params.k == params.n:
        raise ValueError("degenerate endpoint; exact tail available")
    _require_lower_tail(params)
    ops = _FloatOps
    n, k, p = float(params.n), float(params.k), float(params.p)
    m = n - k
    log_e = _neg_n_entropy_raw(ops, n, k, p)
    lower_ratio = _ratio_lower_raw(ops, n, k, p)
    upper_ratio, _ = _ratio_upper_raw(ops, n, k, p)
    eps_lo, eps_hi = _stirling_exponents_raw(n, k, m)
    half_log = math.log(2 * math.pi * k * m / n) / 2
    reverse = reverse_chernoff_pair(params)
    if params.k == params.p * params.n:
        ferrante = None
    else:
        ferrante = ferrante_upper(params)
    return TailBoundSet(
        b_down=_loglinear(math.log(lower_ratio) + eps_lo - half_log + log_e),
        b_up=_loglinear(math.log(upper_ratio) + eps_hi - half_log + log_e),
        chernoff=_loglinear(log_e),
        reverse_type=reverse.type_bound,
        reverse_ash=reverse.ash_bound,
        ferrante=ferrante,
    )


def upper_tail_bounds(params: BinomialParams) -> TailBoundSet:
    """Upper-tail analog of tail_bounds, for pn <= k <= n-1, k >= 1.

    Literally tail_bounds on the reflected parameters, so every field is
    bit-for-bit the reflected lower-tail value; in particular chernoff is
    the upper-tail Chernoff bound e^{-n D(k/n||p)} by the symmetry of D
    under the reflection.
    """
    if params.k < params.p * params.n:
        raise ValueError(
            f"theorem precondition violated: k >= p*n needed, "
            f"got k={params.k}, p*n={float(params.p * params.n):g}")
    return tail_bounds(params.reflected())
