"""Grid certification sweeps for every bound family in the package.

Each suite replays one inequality chain over a parameter grid and decides
every comparison with the strongest arithmetic the chain admits.  Tail
sums, tail ratios, and the entropy factor e^{n D} are exact rationals for
rational p, and the ratio bounds L and U reduce to integer sign tests on
quadratic surds, so those chains are certified with no rounding at all.
Chains that carry transcendental factors (sqrt(2 pi), e^{eps}, Mills
ratios) are screened in binary64 with a per-point error budget; any
comparison whose margin falls inside the budget is re-evaluated with
mpmath at 60 and then 200 significant digits, and a violation is emitted
only when the high-precision pass confirms the reversed ordering.  A
nonzero violation count is therefore a genuine counterexample to the
implemented chain, never float noise.

Suites walk the grid in a fixed (n, p, k) order and reduce results with
an order-independent merge, so repeated runs produce identical output.
Set BINOTAIL_THREADS > 1 to fan the per-(n, p) screening work across a
thread pool; escalations and merges always run on the calling thread
because mpmath precision is process-global state.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import mpmath
import numpy as np
from gmpy2 import mpz
from scipy.special import erfcx

from .exact import (
    ExactReal,
    RATIONAL_N_LIMIT,
    _as_fraction,
    _mpf_to_fraction,
    gaussian_upper_tail,
    lower_tail_exact,
)
from .gauss import tail_coeff_lower

__all__ = [
    "SUITE_IDS",
    "K_RULES",
    "GridSpec",
    "ViolationReport",
    "CheckSummary",
    "run_suite",
    "conjecture_scan",
    "conjecture_slice",
    "monotonicity_suite",
    "convergence_suite",
    "RATIO_CAP_GLOBAL",
    "RATIO_CAP_INTERIOR",
    "WIDTH_CAP",
]

SUITE_IDS = (
    "theorem1",
    "theorem2",
    "theorem5_2",
    "upper_tail",
    "partial_mean",
    "successive_ratio",
    "phi_band",
    "baselines",
    "mckay",
    "gaussian",
)

K_RULES = ("all-k", "lower-tail-k", "upper-tail-k")

# Scanned global ceiling for B/(b L) over k <= pn: the limit value of the
# k = 12 slice p = 12/n, which dominates every other integer k.
RATIO_CAP_GLOBAL = Fraction(180451625, 143327232)
# Interior ceiling, k <= pn - 1: sqrt(pi/2).
RATIO_CAP_INTERIOR = math.sqrt(math.pi / 2)

# Bracket width cap for the two-sided pmf-scaled tail bounds.
WIDTH_CAP = Fraction(89, 44)

_EPS64 = 2.220446049250313e-16

with mpmath.workdps(80):
    _PI_FRACTION = _mpf_to_fraction(+mpmath.pi)
_PI_SLACK = Fraction(1, 10**70)
_PI_LO = _PI_FRACTION - _PI_SLACK
_PI_HI = _PI_FRACTION + _PI_SLACK


def _mpf_frac(fr: Fraction):
    return mpmath.mpf(fr.numerator) / fr.denominator


def _thread_count() -> int:
    raw = os.environ.get("BINOTAIL_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(worker: Callable, items: Sequence) -> list:
    """Map preserving item order; threaded only when BINOTAIL_THREADS > 1."""
    threads = _thread_count()
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, items))
    return [worker(item) for item in items]


# ---------------------------------------------------------------------------
# grid and result types
# ---------------------------------------------------------------------------


def _floor_pn(n: int, p: Fraction) -> int:
    return (p.numerator * n) // p.denominator


def _ceil_pn(n: int, p: Fraction) -> int:
    return -((-p.numerator * n) // p.denominator)


def _compress_ints(values: Sequence[int]) -> str:
    if len(values) > 2 and list(values) == list(range(values[0], values[-1] + 1)):
        return f"{values[0]}..{values[-1]}"
    if len(values) <= 8:
        return ",".join(str(v) for v in values)
    return f"{values[0]}..{values[-1]} ({len(values)} values, non-contiguous)"


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid for the sweep suites.

    ``k_rule`` selects which k accompany each (n, p): the whole range,
    the lower tail k <= pn, or the upper tail k >= pn, with both
    boundaries decided in exact rational arithmetic.  ``limits`` is an
    optional strictly increasing n-schedule consumed by the convergence
    tracks.  Values are normalized to sorted, deduplicated tuples so a
    grid prints and hashes the same way no matter how it was built.
    """

    n_values: tuple = ()
    p_values: tuple = ()
    k_rule: str = "all-k"
    limits: Optional[tuple] = None

    def __post_init__(self):
        ns = tuple(sorted(set(int(n) for n in self.n_values)))
        if not ns or ns[0] < 1:
            raise ValueError("grid needs a nonempty list of n >= 1")
        ps = tuple(sorted(set(_as_fraction(p) for p in self.p_values)))
        if not ps or ps[0] <= 0 or ps[-1] >= 1:
            raise ValueError("grid needs a nonempty list of rational p in (0, 1)")
        if self.k_rule not in K_RULES:
            raise ValueError(f"k_rule must be one of {K_RULES}")
        lim = self.limits
        if lim is not None:
            lim = tuple(int(n) for n in lim)
            if not lim or lim[0] < 1 or any(b <= a for a, b in zip(lim, lim[1:])):
                raise ValueError("limits must be a strictly increasing n-schedule")
        object.__setattr__(self, "n_values", ns)
        object.__setattr__(self, "p_values", ps)
        object.__setattr__(self, "limits", lim)

    @classmethod
    def default(cls, n_max: int = 300, p_step: int = 20,
                k_rule: str = "all-k") -> "GridSpec":
        """The published default: n in 1..n_max, p in {j/p_step, 0 < j < p_step}."""
        return cls(
            n_values=tuple(range(1, n_max + 1)),
            p_values=tuple(Fraction(j, p_step) for j in range(1, p_step)),
            k_rule=k_rule,
        )

    def k_range(self, n: int, p: Fraction) -> range:
        if self.k_rule == "lower-tail-k":
            return range(0, _floor_pn(n, p) + 1)
        if self.k_rule == "upper-tail-k":
            return range(_ceil_pn(n, p), n + 1)
        return range(0, n + 1)

    def points(self) -> Iterator[tuple]:
        for n in self.n_values:
            for p in self.p_values:
                for k in self.k_range(n, p):
                    yield n, k, p

    def describe(self) -> str:
        return (f"n: {_compress_ints(self.n_values)}; "
                f"p: {','.join(str(p) for p in self.p_values)}; "
                f"k_rule: {self.k_rule}")


@dataclass(frozen=True)
class ViolationReport:
    """One confirmed ordering violation.

    ``check`` names the failed link inside the suite's chain; it rides
    along in JSON output but is not one of the fixed CSV columns.
    ``precision_escalated`` records that the verdict came from exact
    rational or >= 60-digit arithmetic rather than bare binary64; every
    emitted report has it True by construction.  Negative ``margin``
    (rhs - lhs for a violated "lhs < rhs") quantifies the overshoot.
    """

    suite: str
    point: tuple
    lhs: float
    rhs: float
    margin: float
    precision_escalated: bool = True
    check: str = ""

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "point": [str(c) if isinstance(c, Fraction) else c for c in self.point],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "precision_escalated": self.precision_escalated,
            "check": self.check,
        }

    def csv_fields(self) -> tuple:
        """Map the point onto the (n, k, p) CSV columns.

        Abscissa-only points (the gaussian suite) place x in the p slot;
        (n, k) points from p-free suites leave p blank.
        """
        pt = self.point
        if len(pt) == 3:
            return pt[0], pt[1], pt[2]
        if len(pt) == 2:
            return pt[0], pt[1], ""
        return "", "", pt[0]


@dataclass(frozen=True)
class CheckSummary:
    """Outcome of one suite run: counts, violations, and the extreme point."""

    suite: str
    points_checked: int
    violations: tuple
    extremal_witness: dict

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "points_checked": self.points_checked,
            "violations": [v.as_dict() for v in self.violations],
            "extremal_witness": self.extremal_witness,
            "passed": self.passed,
        }


class _Extremum:
    """Running min or max that keeps the first witness on ties, so the
    reported extremal point is independent of evaluation interleaving."""

    def __init__(self, mode: str):
        self.mode = mode
        self.value: Optional[float] = None
        self.info: dict = {}

    def offer(self, value: float, **info) -> None:
        if self.value is None or (value < self.value if self.mode == "min"
                                  else value > self.value):
            self.value = value
            self.info = info

    def as_witness(self, quantity: str, **extra) -> dict:
        out = {"quantity": quantity, "value": self.value}
        out.update({key: (str(v) if isinstance(v, Fraction) else v)
                    for key, v in self.info.items()})
        out.update(extra)
        return out


def _point_json(n, k, p) -> list:
    return [n, k, str(p)]


class _SuiteRun:
    """Accumulates one suite's counts, violations, and witness."""

    def __init__(self, suite: str, witness_mode: str):
        self.suite = suite
        self.points = 0
        self.violations: list = []
        self.extremum = _Extremum(witness_mode)

    def violate(self, point: tuple, check: str, lhs: float, rhs: float,
                margin: float) -> None:
        self.violations.append(ViolationReport(
            suite=self.suite, point=point, lhs=lhs, rhs=rhs, margin=margin,
            precision_escalated=True, check=check))

    def summary(self, witness: dict) -> CheckSummary:
        return CheckSummary(
            suite=self.suite,
            points_checked=self.points,
            violations=tuple(self.violations),
            extremal_witness=witness,
        )


# ---------------------------------------------------------------------------
# exact building blocks: weight tables, surd signs, U minimization
# ---------------------------------------------------------------------------


class _WeightTable:
    """Integer pmf weights w_i = C(n,i) a^i b^(n-i) with prefix sums.

    b(n, i, a/c) = w_i / c^n and B(n, k, a/c) = S_k / c^n, so tail
    ratios, partial means, and successive-n ratios are ratios of these
    integers; iS_k = sum_{i <= k} i w_i feeds the partial mean.
    """

    __slots__ = ("n", "a", "c", "b", "ws", "Ss", "iSs")

    def __init__(self, n: int, a: int, c: int, kmax: int):
        self.n = n
        self.a = a
        self.c = c
        self.b = c - a
        w = mpz(self.b) ** n
        S = w
        iS = mpz(0)
        ws, Ss, iSs = [w], [S], [iS]
        for i in range(min(kmax, n)):
            w = w * ((n - i) * a) // ((i + 1) * self.b)
            S += w
            iS += (i + 1) * w
            ws.append(w)
            Ss.append(S)
            iSs.append(iS)
        self.ws, self.Ss, self.iSs = ws, Ss, iSs

    def ratio(self, k: int) -> tuple:
        """B/b at k as the integer pair (S_k, w_k)."""
        return self.Ss[k], self.ws[k]


def _tail_sum(n: int, a: int, c: int, k: int) -> tuple:
    """(S_k, w_k) as integers, streamed without storing the table."""
    b = c - a
    w = mpz(b) ** n
    S = w
    for i in range(k):
        w = w * ((n - i) * a) // ((i + 1) * b)
        S += w
    return S, w


def _L_parts(n: int, k: int, a: int, c: int) -> tuple:
    """L = (c1n + sqrt(dn)) / (2c) as the integer pair (c1n, dn)."""
    c1n = (k + 1) * c - a * n
    dn = (2 * c - c1n) ** 2 + 4 * (c - a) * c * k
    return c1n, dn


def _L_float(c1n: int, dn, c: int) -> float:
    return (c1n + math.sqrt(dn)) / (2 * c)


def _V_pair(alpha: int, n: int, k: int, a: int, c: int) -> tuple:
    """V(alpha) as the integer pair (num, den); den > 0 on alpha in [0, k]
    for lower-tail k."""
    den = a * (n + 1) + c * (alpha - k)
    return alpha * den + a * (n - k + alpha + 1), den


def _exact_U(n: int, k: int, a: int, c: int) -> tuple:
    """Minimize V over integer alpha in [0, k]; returns (num, den, alpha).

    V's forward difference is strictly increasing in alpha, so a
    float-guided start plus an exact downhill walk certifies the global
    integer minimum; ties resolve to the smaller alpha.
    """
    b = c - a
    g = a * (n + 1) - k * c
    if k == 0 or (g > 0 and g * g > a * b * (n + 1)):
        alpha = 0
    else:
        guide = k - (a * (n + 1) - math.sqrt(a * b * (n + 1))) / c
        alpha = min(k, max(0, int(round(guide))))
    nu, de = _V_pair(alpha, n, k, a, c)
    while alpha > 0:
        nu2, de2 = _V_pair(alpha - 1, n, k, a, c)
        if nu2 * de <= nu * de2:
            alpha, nu, de = alpha - 1, nu2, de2
        else:
            break
    while alpha < k:
        nu2, de2 = _V_pair(alpha + 1, n, k, a, c)
        if nu2 * de < nu * de2:
            alpha, nu, de = alpha + 1, nu2, de2
        else:
            break
    return nu, de, alpha


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_surd(A, B, d) -> int:
    """Sign of A + B sqrt(d) for rational A, B and rational d >= 0."""
    if d < 0:
        raise ValueError("negative discriminant")
    s = B * B * d
    if B >= 0:
        if A >= 0:
            return 1 if (A > 0 or s > 0) else 0
        return _sign(s - A * A)
    if A <= 0:
        return -1 if (A < 0 or s > 0) else 0
    return _sign(A * A - s)


def _sign_two_surds(A, B, d1, C, d2) -> int:
    """Sign of A + B sqrt(d1) + C sqrt(d2); rationals, d1, d2 >= 0."""
    sp = _sign_surd(A, B, d1)
    sq = _sign(C) if C * C * d2 > 0 else 0
    if sq == 0:
        return sp
    if sp == 0:
        return sq
    if sp == sq:
        return sp
    # Opposite signs: |P|^2 - |Q|^2 = A^2 + B^2 d1 - C^2 d2 + 2AB sqrt(d1).
    s2 = _sign_surd(A * A + B * B * d1 - C * C * d2, 2 * A * B, d1)
    return s2 if sp > 0 else -s2


def _cmp_surd_pair(a1, b1, d1, a2, b2, d2) -> int:
    """Sign of (a1 + b1 sqrt(d1)) - (a2 + b2 sqrt(d2)); any-sign weights."""
    return _sign_two_surds(a1 - a2, b1, d1, -b2, d2)


def _sat_ratio(num: int, den: int) -> float:
    """num / den as a float, saturating when the quotient exceeds range."""
    try:
        return num / den
    except OverflowError:
        return math.inf


def _eps_minus(n: int, k: int, m: int) -> Fraction:
    return Fraction(1, 12 * n) - Fraction(1, 12 * k) - Fraction(1, 12 * m)


def _eps_plus(n: int, k: int, m: int) -> Fraction:
    return (Fraction(1, 12 * n + 1) - Fraction(1, 12 * k + 1)
            - Fraction(1, 12 * m + 1))


# Enveloping partial sums of the alternating Binet tail: the excess of
# eps(j) over 1/(12j) - 1/(12j+1)-style terms satisfies
# S_lo(j) < S(j) < S_hi(j) with a gap of one series term.
def _binet_tail_lo(j):
    return 1.0 / (360.0 * j**3) - 1.0 / (1260.0 * j**5)


def _binet_tail_hi(j):
    return _binet_tail_lo(j) + 1.0 / (1680.0 * j**7)


def _binet_tail_lo_exact(j: int) -> Fraction:
    return Fraction(1, 360 * j**3) - Fraction(1, 1260 * j**5)


def _binet_tail_hi_exact(j: int) -> Fraction:
    return _binet_tail_lo_exact(j) + Fraction(1, 1680 * j**7)


def _phi_band_gaps_exact(n: int, k: int) -> tuple:
    """Exact rational positivity certificates for eps_- < eps(n,k) < eps_+.

    Both gaps are combinations of Binet tails; replacing each tail by the
    enveloping partial sum of its alternating series bounds the gap from
    below by an exact rational.
    """
    m = n - k
    lo = (_binet_tail_lo_exact(k) + _binet_tail_lo_exact(m)
          - _binet_tail_hi_exact(n))
    hi = ((Fraction(1, 12 * k * (12 * k + 1)) - _binet_tail_hi_exact(k))
          + (Fraction(1, 12 * m * (12 * m + 1)) - _binet_tail_hi_exact(m))
          - (Fraction(1, 12 * n * (12 * n + 1)) - _binet_tail_lo_exact(n)))
    return lo, hi


# ---------------------------------------------------------------------------
# binary64 screening with high-precision escalation
# ---------------------------------------------------------------------------


def _ln_big(x) -> float:
    # math.log accepts arbitrary-size Python ints, but not gmpy2 mpz.
    return math.log(int(x))


def _float_trust(scale: float) -> float:
    """Absolute error budget for a binary64 log-domain combination whose
    intermediate terms sum to about ``scale`` in magnitude."""
    return max(1e-13, 64.0 * _EPS64 * scale)


def _escalate(side_eval: Callable[[int], tuple]) -> tuple:
    """Re-decide a screened comparison at 60 and then 200 digits.

    ``side_eval(dps)`` returns (lhs, rhs) as mpf under the active
    precision.  Returns (ok, lhs, rhs, margin) as floats once the margin
    clears the precision's resolution, and raises if 200 digits cannot
    separate the sides; no screened link here admits an exact tie, so an
    unresolved comparison means the evaluator itself is wrong.
    """
    for dps, res in ((60, 1e-45), (200, 1e-180)):
        with mpmath.workdps(dps):
            lhs, rhs = side_eval(dps)
            margin = rhs - lhs
            scale = max(1.0, abs(float(lhs)), abs(float(rhs)))
            if abs(margin) > res * scale:
                return margin > 0, float(lhs), float(rhs), float(margin)
    raise ArithmeticError(
        "comparison unresolved at 200 significant digits; screened links "
        "admit no exact ties, so this indicates an evaluator defect")


# ---------------------------------------------------------------------------
# suite: theorem1 -- the exact ratio chain 1 <= L <= B/b <= U < 2L
# ---------------------------------------------------------------------------


def _theorem1_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    kmax = _floor_pn(n, p)
    table = _WeightTable(n, a, c, kmax)
    fails, best = [], None
    for k in range(kmax + 1):
        Sk, wk = table.ratio(k)
        c1n, dn = _L_parts(n, k, a, c)
        nu, de, _ = _exact_U(n, k, a, c)
        strict = k >= 1

        s = 2 * c - c1n
        ok_1L = (s < 0) or (dn > s * s if strict else dn >= s * s)
        r2 = 2 * Sk * c - c1n * wk
        ok_Lt = r2 >= 0 and (dn * wk * wk < r2 * r2 if strict
                             else dn * wk * wk <= r2 * r2)
        ok_tU = Sk * de < wk * nu if strict else Sk * de <= wk * nu
        lhs2 = nu * c - c1n * de
        ok_U2L = lhs2 < 0 or lhs2 * lhs2 < dn * de * de

        if ok_1L and ok_Lt and ok_tU and ok_U2L:
            if strict:
                Lf = _L_float(c1n, dn, c)
                tf = float(Fraction(int(Sk), int(wk)))
                Uf = nu / de
                margin = min((Lf - 1.0) / Lf, (tf - Lf) / tf,
                             (Uf - tf) / Uf, (2 * Lf - Uf) / (2 * Lf))
                if best is None or margin < best[0]:
                    best = (margin, k)
            continue
        Lf = _L_float(c1n, dn, c)
        tf = float(Fraction(int(Sk), int(wk)))
        Uf = nu / de
        for ok, check, lhs, rhs in ((ok_1L, "1<=L", 1.0, Lf),
                                    (ok_Lt, "L<=B/b", Lf, tf),
                                    (ok_tU, "B/b<=U", tf, Uf),
                                    (ok_U2L, "U<2L", Uf, 2 * Lf)):
            if not ok:
                fails.append((k, check, lhs, rhs))
    return n, p, kmax + 1, fails, best


def _suite_theorem1(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("theorem1", "min")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, fails, best in _ordered_map(_theorem1_worker, tasks):
        run.points += count
        for k, check, lhs, rhs in fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        if best is not None:
            run.extremum.offer(best[0], point=_point_json(n, best[1], p))
    return run.summary(run.extremum.as_witness(
        "min relative slack across the strict ratio-chain links (k >= 1)"))


# ---------------------------------------------------------------------------
# suite: theorem2 -- two-sided tail bounds b_down < B < b_up, width < 89/44
# ---------------------------------------------------------------------------


def _chain_context(n, k, p, table) -> dict:
    a, c = p.numerator, p.denominator
    Sk, wk = table.ratio(k)
    c1n, dn = _L_parts(n, k, a, c)
    nu, de, _ = _exact_U(n, k, a, c)
    return {"n": n, "k": k, "m": n - k, "a": a, "b": c - a, "c": c,
            "Sk": int(Sk), "wk": int(wk), "c1n": c1n, "dn": dn,
            "nu": nu, "de": de}


def _chain_logs(ctx) -> dict:
    """Binary64 log-domain values for the scaled-tail chain at one point."""
    n, k, m = ctx["n"], ctx["k"], ctx["m"]
    a, b = ctx["a"], ctx["b"]
    ln_Sk, ln_wk = _ln_big(ctx["Sk"]), _ln_big(ctx["wk"])
    ln_phi = (ln_wk + k * math.log(k) + m * math.log(m)
              - k * math.log(a) - m * math.log(b) - n * math.log(n))
    ln_t = ln_Sk - ln_wk
    ln_L = math.log(_L_float(ctx["c1n"], ctx["dn"], ctx["c"]))
    ln_U = math.log(ctx["nu"]) - math.log(ctx["de"])
    half_ln = 0.5 * math.log(2 * math.pi * k * m)
    ln_T = 0.5 * math.log(n) + ln_phi + ln_t
    ln_lm = math.log(n) + ln_L + float(_eps_minus(n, k, m)) - half_ln
    ln_up = math.log(n) + ln_U + float(_eps_plus(n, k, m)) - half_ln
    scale = (abs(ln_Sk) + abs(ln_wk) + k * abs(math.log(k))
             + m * abs(math.log(m)) + n * math.log(max(n, 2)) + 40.0)
    return {"ln_phi": ln_phi, "ln_t": ln_t, "ln_L": ln_L, "ln_U": ln_U,
            "ln_T": ln_T, "ln_lm": ln_lm, "ln_up": ln_up, "scale": scale}


def _chain_logs_mp(ctx) -> dict:
    """The same chain values under the active mpmath precision."""
    ln = mpmath.log
    n, k, m, c = ctx["n"], ctx["k"], ctx["m"], ctx["c"]
    ln_phi = (ln(mpmath.mpf(ctx["wk"])) + k * ln(k) + m * ln(m)
              - k * ln(ctx["a"]) - m * ln(ctx["b"]) - n * ln(n))
    ln_t = ln(mpmath.mpf(ctx["Sk"])) - ln(mpmath.mpf(ctx["wk"]))
    ln_L = ln((ctx["c1n"] + mpmath.sqrt(mpmath.mpf(ctx["dn"]))) / (2 * c))
    ln_U = ln(mpmath.mpf(ctx["nu"])) - ln(mpmath.mpf(ctx["de"]))
    half_ln = mpmath.log(2 * mpmath.pi * k * m) / 2
    ln_T = ln(n) / 2 + ln_phi + ln_t
    ln_lm = ln(n) + ln_L + _mpf_frac(_eps_minus(n, k, m)) - half_ln
    ln_up = ln(n) + ln_U + _mpf_frac(_eps_plus(n, k, m)) - half_ln
    return {"ln_phi": ln_phi, "ln_t": ln_t, "ln_L": ln_L, "ln_U": ln_U,
            "ln_T": ln_T, "ln_lm": ln_lm, "ln_up": ln_up}


def _t2_sides_mp(ctx, link: str, dps: int) -> tuple:
    logs = _chain_logs_mp(ctx)
    if link == "b_down<B" or link == "b_down<Bbar":
        return logs["ln_lm"], logs["ln_T"]
    if link == "B<b_up" or link == "Bbar<b_up":
        return logs["ln_T"], logs["ln_up"]
    if link == "width<89/44":
        return logs["ln_up"] - logs["ln_lm"], mpmath.log(mpmath.mpf(89) / 44)
    raise ValueError(link)


def _theorem2_worker(task):
    n, p = task
    kmax = min(_floor_pn(n, p), n - 1)
    if kmax < 1:
        return n, p, 0, None, []
    table = _WeightTable(n, p.numerator, p.denominator, kmax)
    widest, pending = None, []
    ln_cap = math.log(89 / 44)
    for k in range(1, kmax + 1):
        ctx = _chain_context(n, k, p, table)
        logs = _chain_logs(ctx)
        trust = _float_trust(logs["scale"])
        width = logs["ln_up"] - logs["ln_lm"]
        for check, margin in (("b_down<B", logs["ln_T"] - logs["ln_lm"]),
                              ("B<b_up", logs["ln_up"] - logs["ln_T"]),
                              ("width<89/44", ln_cap - width)):
            if margin < trust:
                pending.append((k, check, ctx))
        if widest is None or width > widest[0]:
            widest = (width, k)
    return n, p, kmax, widest, pending


def _suite_theorem2(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("theorem2", "max")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, widest, pending in _ordered_map(_theorem2_worker, tasks):
        run.points += count
        if widest is not None:
            run.extremum.offer(math.exp(widest[0]),
                               point=_point_json(n, widest[1], p))
        for k, check, ctx in pending:
            ok, lhs, rhs, margin = _escalate(
                lambda dps, c=ctx, l=check: _t2_sides_mp(c, l, dps))
            if not ok:
                run.violate((n, k, p), check, lhs, rhs, margin)
    return run.summary(run.extremum.as_witness(
        "max bracket width b_up/b_down", cap=float(WIDTH_CAP)))


# ---------------------------------------------------------------------------
# suite: theorem5_2 -- entropy-normalized chains around the scaled tail
# ---------------------------------------------------------------------------


def _t52_sides_mp(ctx, link: str, dps: int) -> tuple:
    ln = mpmath.log
    logs = _chain_logs_mp(ctx)
    n, k, m = ctx["n"], ctx["k"], ctx["m"]
    a, c = ctx["a"], ctx["c"]
    ln_A = logs["ln_phi"] + logs["ln_t"]
    ln_L, ln_U = logs["ln_L"], logs["ln_U"]
    ln_kfact = mpmath.loggamma(k + 1)
    if link == "lub1:factorial-step":
        return -1 - ln(k) / 2, k * ln(k) - k - ln_kfact
    if link == "lub1:lower":
        return k * ln(k) + ln_L - k - ln_kfact, ln_A
    if link == "lub1:upper":
        return ln_A, (ln(n) - ln(m)) / 2 + k * ln(k) + ln_U - k - ln_kfact
    if link == "lub2:lower":
        return ln_L - ln(8) / 2, (ln(k) + ln(m) - ln(n)) / 2 + ln_A
    if link == "lub2:upper":
        return (ln(k) + ln(m) - ln(n)) / 2 + ln_A, ln_U - ln(2 * mpmath.pi) / 2
    if link == "lub4:coefficient":
        ln_cf = ((ln(m) - ln(k) - ln(2 * mpmath.pi)) / 2
                 + ln(mpmath.mpf(a * n)) - ln(mpmath.mpf(a * n - k * c)))
        return logs["ln_up"], ln_cf
    raise ValueError(link)


def _theorem5_2_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    kmax = _floor_pn(n, p)
    if kmax < 1:
        return n, p, 0, None, [], []
    table = _WeightTable(n, a, c, kmax)
    best, pending, exact_fails = None, [], []
    for k in range(1, kmax + 1):
        m = n - k
        ctx = _chain_context(n, k, p, table)
        Sk, wk = ctx["Sk"], ctx["wk"]
        c1n, dn, nu, de = ctx["c1n"], ctx["dn"], ctx["nu"], ctx["de"]

        # Exact surd links shared with the ratio chain: L < B/b < U gives
        # L-tilde < T < U-tilde after the common positive scaling.
        r2 = 2 * Sk * c - c1n * wk
        if not (r2 >= 0 and dn * wk * wk < r2 * r2):
            exact_fails.append((k, "lub3:L<scaled-tail",
                                _L_float(c1n, dn, c), float(Fraction(Sk, wk))))
        if not (Sk * de < wk * nu):
            exact_fails.append((k, "lub3:scaled-tail<U",
                                float(Fraction(Sk, wk)), nu / de))

        # Exact rational certificates for the eps band entering lub3.
        lo_gap, hi_gap = _phi_band_gaps_exact(n, k)
        if lo_gap <= 0:
            exact_fails.append((k, "lub3:eps-floor", float(-lo_gap), 0.0))
        if hi_gap <= 0:
            exact_fails.append((k, "lub3:eps-ceiling", float(-hi_gap), 0.0))

        logs = _chain_logs(ctx)
        ln_A = logs["ln_phi"] + logs["ln_t"]
        ln_L, ln_U = logs["ln_L"], logs["ln_U"]
        ln_kfact = math.lgamma(k + 1)
        half_km = 0.5 * (math.log(k) + math.log(m) - math.log(n))
        trust = _float_trust(logs["scale"])

        links = []
        if k >= 2:
            # k^k/(e^k k!) > 1/(e sqrt(k)), with equality exactly at k = 1.
            links.append(("lub1:factorial-step",
                          (k * math.log(k) - k - ln_kfact)
                          - (-1 - 0.5 * math.log(k))))
        links.append(("lub1:lower",
                      ln_A - (k * math.log(k) + ln_L - k - ln_kfact)))
        links.append(("lub1:upper",
                      (0.5 * (math.log(n) - math.log(m)) + k * math.log(k)
                       + ln_U - k - ln_kfact) - ln_A))
        links.append(("lub2:lower",
                      (half_km + ln_A) - (ln_L - 0.5 * math.log(8))))
        links.append(("lub2:upper",
                      (ln_U - 0.5 * math.log(2 * math.pi)) - (half_km + ln_A)))
        if k * c < a * n:
            # Strict lower-tail point: the n-free ceiling applies.
            ln_cf = (0.5 * (math.log(m) - math.log(k) - math.log(2 * math.pi))
                     + math.log(a * n) - math.log(a * n - k * c))
            links.append(("lub4:coefficient", ln_cf - logs["ln_up"]))
        for check, margin in links:
            if margin < trust:
                pending.append((k, check, ctx))
            elif best is None or margin < best[0]:
                best = (margin, k, check)
    return n, p, kmax, best, pending, exact_fails


def _suite_theorem5_2(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("theorem5_2", "min")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, best, pending, exact_fails in _ordered_map(
            _theorem5_2_worker, tasks):
        run.points += count
        if best is not None:
            run.extremum.offer(best[0], point=_point_json(n, best[1], p),
                               link=best[2])
        for k, check, lhs, rhs in exact_fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        for k, check, ctx in pending:
            ok, lhs, rhs, margin = _escalate(
                lambda dps, c=ctx, l=check: _t52_sides_mp(c, l, dps))
            if not ok:
                run.violate((n, k, p), check, lhs, rhs, margin)
            else:
                run.extremum.offer(margin, point=_point_json(n, k, p),
                                   link=check)
    return run.summary(run.extremum.as_witness(
        "min log-domain slack across the entropy-normalized chain links"))


# ---------------------------------------------------------------------------
# suite: upper_tail -- the reflected ratio chain and tail bracket
# ---------------------------------------------------------------------------


def _upper_tail_worker(task):
    """Drive the exact ratio chain and the pmf-scaled bracket on the
    reflection (n, n - k, 1 - p) of each upper-tail point."""
    n, p = task
    a, c = p.numerator, p.denominator
    k_lo = _ceil_pn(n, p)
    if k_lo > n:
        return n, p, 0, None, [], []
    # Reflected weights in the same denominator c: success weight c - a.
    table = _WeightTable(n, c - a, c, n - k_lo)
    exact_fails, pending, widest = [], [], None
    for k in range(k_lo, n + 1):
        kr = n - k
        Sk, wk = table.ratio(kr)
        c1n, dn = _L_parts(n, kr, c - a, c)
        nu, de, _ = _exact_U(n, kr, c - a, c)
        strict = kr >= 1
        tf = float(Fraction(int(Sk), int(wk)))
        Lf = _L_float(c1n, dn, c)

        s = 2 * c - c1n
        if not ((s < 0) or (dn > s * s if strict else dn >= s * s)):
            exact_fails.append((k, "1<=L", 1.0, Lf))
        r2 = 2 * Sk * c - c1n * wk
        ok = r2 >= 0 and (dn * wk * wk < r2 * r2 if strict
                          else dn * wk * wk <= r2 * r2)
        if not ok:
            exact_fails.append((k, "L<=Bbar/b", Lf, tf))
        if not (Sk * de < wk * nu if strict else Sk * de <= wk * nu):
            exact_fails.append((k, "Bbar/b<=U", tf, nu / de))
        lhs2 = nu * c - c1n * de
        if not (lhs2 < 0 or lhs2 * lhs2 < dn * de * de):
            exact_fails.append((k, "U<2L", nu / de, 2 * Lf))

        if 1 <= kr <= n - 1:
            ctx = {"n": n, "k": kr, "m": n - kr, "a": c - a, "b": a, "c": c,
                   "Sk": int(Sk), "wk": int(wk), "c1n": c1n, "dn": dn,
                   "nu": nu, "de": de}
            logs = _chain_logs(ctx)
            trust = _float_trust(logs["scale"])
            width = logs["ln_up"] - logs["ln_lm"]
            for check, margin in (
                    ("b_down<Bbar", logs["ln_T"] - logs["ln_lm"]),
                    ("Bbar<b_up", logs["ln_up"] - logs["ln_T"]),
                    ("width<89/44", math.log(89 / 44) - width)):
                if margin < trust:
                    pending.append((k, check, ctx))
            if widest is None or width > widest[0]:
                widest = (width, k)
    return n, p, n - k_lo + 1, widest, pending, exact_fails


def _suite_upper_tail(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("upper_tail", "max")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, widest, pending, exact_fails in _ordered_map(
            _upper_tail_worker, tasks):
        run.points += count
        if widest is not None:
            run.extremum.offer(math.exp(widest[0]),
                               point=_point_json(n, widest[1], p))
        for k, check, lhs, rhs in exact_fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        for k, check, ctx in pending:
            ok, lhs, rhs, margin = _escalate(
                lambda dps, c=ctx, l=check: _t2_sides_mp(c, l, dps))
            if not ok:
                run.violate((n, k, p), check, lhs, rhs, margin)
    return run.summary(run.extremum.as_witness(
        "max reflected bracket width b_up/b_down", cap=float(WIDTH_CAP)))


# ---------------------------------------------------------------------------
# suite: partial_mean -- conditional-mean bounds, exact rationals and surds
# ---------------------------------------------------------------------------


def _partial_mean_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    table = _WeightTable(n, a, c, n)
    kfloor = _floor_pn(n, p)
    q = 1 - p
    fails, best = [], None
    for k in range(n + 1):
        S, w, iS = int(table.Ss[k]), int(table.ws[k]), int(table.iSs[k])
        mu_f = iS / S
        tf = _sat_ratio(S, w)

        # k + 1 - B/b <= mu, equality exactly at k = 0.
        cross = S * ((k + 1) * w - S)
        if not (cross < w * iS if k >= 1 else cross <= w * iS):
            fails.append((k, "k+1-B/b<=mu", k + 1 - tf, mu_f))
        # mu <= pn, equality exactly at k = n.
        if not (c * iS < a * n * S if k <= n - 1 else c * iS <= a * n * S):
            fails.append((k, "mu<=pn", mu_f, float(p) * n))

        if n >= 2 and k <= n - 1:
            # General lower bound k + 1 - L(n-1, k, p) <= mu, any k here.
            c1n_, dn_ = _L_parts(n - 1, k, a, c)
            lhs = 2 * c * ((k + 1) * S - iS) - c1n_ * S
            if not (lhs <= 0 or lhs * lhs <= dn_ * S * S):
                fails.append((k, "general<=mu",
                              k + 1 - _L_float(c1n_, dn_, c), mu_f))
            if k <= kfloor:
                # Ordering crude <= simple <= general on the lower tail:
                # crude = k - sqrt(qk), simple = k + q/2 - sqrt(q(4k+q))/2.
                if _cmp_surd_pair(Fraction(0), Fraction(1), q * (4 * k + q),
                                  q, Fraction(2), q * k) > 0:
                    fails.append((k, "crude<=simple",
                                  k - math.sqrt(float(q) * k),
                                  k + float(q) / 2
                                  - math.sqrt(float(q) * (4 * k + float(q))) / 2))
                if _cmp_surd_pair(Fraction(c1n_, 2 * c), Fraction(1, 2 * c),
                                  Fraction(dn_), Fraction(2 - q, 2),
                                  Fraction(1, 2), q * (4 * k + q)) > 0:
                    fails.append((k, "simple<=general",
                                  k + float(q) / 2
                                  - math.sqrt(float(q) * (4 * k + float(q))) / 2,
                                  k + 1 - _L_float(c1n_, dn_, c)))
        if k >= 1:
            margin = (mu_f - (k + 1 - tf)) / max(mu_f, 1e-300)
            if best is None or margin < best[0]:
                best = (margin, k)
    return n, p, n + 1, fails, best


def _suite_partial_mean(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("partial_mean", "min")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, fails, best in _ordered_map(_partial_mean_worker, tasks):
        run.points += count
        for k, check, lhs, rhs in fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        if best is not None:
            run.extremum.offer(best[0], point=_point_json(n, best[1], p))
    return run.summary(run.extremum.as_witness(
        "min relative slack of k+1-B/b <= mu (k >= 1)"))


# ---------------------------------------------------------------------------
# suite: successive_ratio -- B(n,k,p)/B(n+1,k,p) bracket, exact
# ---------------------------------------------------------------------------


def _successive_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    b = c - a
    kmax = _floor_pn(n, p)
    t_n = _WeightTable(n, a, c, kmax)
    t_n1 = _WeightTable(n + 1, a, c, kmax)
    fails, best = [], None
    for k in range(kmax + 1):
        S, S1 = int(t_n.Ss[k]), int(t_n1.Ss[k])
        strict = k >= 1
        ratio_f = float(Fraction(c * S, S1))
        lo_f = (n - k + 1) * c / ((n + 1) * b)

        # (n - k + 1)/((n + 1) q) <= c S / S1, equality exactly at k = 0.
        lo_ok = ((n - k + 1) * S1 < (n + 1) * b * S if strict
                 else (n - k + 1) * S1 <= (n + 1) * b * S)
        if not lo_ok:
            fails.append((k, "lower<=ratio", lo_f, ratio_f))
        # c S / S1 <= (n - k + L)/((n + 1) q): isolate L and square.
        c1n, dn = _L_parts(n, k, a, c)
        lhs2c = 2 * c * ((n + 1) * b * S - (n - k) * S1) - c1n * S1
        hi_ok = lhs2c < 0 or (lhs2c * lhs2c < dn * S1 * S1 if strict
                              else lhs2c * lhs2c <= dn * S1 * S1)
        if not hi_ok:
            hi_f = ((n - k) + _L_float(c1n, dn, c)) * c / ((n + 1) * b)
            fails.append((k, "ratio<=upper", ratio_f, hi_f))
        if strict and lo_ok and hi_ok:
            margin = (ratio_f - lo_f) / ratio_f
            if best is None or margin < best[0]:
                best = (margin, k)
    return n, p, kmax + 1, fails, best


def _suite_successive_ratio(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("successive_ratio", "min")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, fails, best in _ordered_map(_successive_worker, tasks):
        run.points += count
        for k, check, lhs, rhs in fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        if best is not None:
            run.extremum.offer(best[0], point=_point_json(n, best[1], p))
    return run.summary(run.extremum.as_witness(
        "min relative slack of the lower successive-ratio bound (k >= 1)"))


# ---------------------------------------------------------------------------
# suite: phi_band -- the eps bracket on the Stirling prefactor, vectorized
# ---------------------------------------------------------------------------


def _suite_phi_band(grid: GridSpec) -> CheckSummary:
    """Certify eps_- < eps(n, k) < eps_+ on 1 <= k <= n - 1 and locate the
    widest band e^{eps_+ - eps_-}.

    The band is p-free, so only the grid's n_values matter.  Both strict
    gaps are combinations of Binet tails whose enveloping partial sums
    certify positivity in plain float arithmetic: every term IS the
    margin scale, so no cancellation against large quantities occurs.
    Points landing inside the float slack are re-proved with exact
    rationals before any verdict.
    """
    run = _SuiteRun("phi_band", "max")

    def worker(n):
        if n < 2:
            return n, 0, [], None
        k = np.arange(1, n, dtype=np.float64)
        m = n - k
        lo = _binet_tail_lo(k) + _binet_tail_lo(m) - _binet_tail_hi(float(n))
        hi = ((1.0 / (12.0 * k * (12.0 * k + 1.0)) - _binet_tail_hi(k))
              + (1.0 / (12.0 * m * (12.0 * m + 1.0)) - _binet_tail_hi(m))
              - (1.0 / (12.0 * n * (12.0 * n + 1.0))
                 - _binet_tail_lo(float(n))))
        slack = 1e-13 * (np.abs(lo) + np.abs(hi)) + 1e-280
        fails = []
        for idx in np.nonzero((lo < slack) | (hi < slack))[0]:
            kk = int(k[idx])
            lo_x, hi_x = _phi_band_gaps_exact(n, kk)
            if lo_x <= 0:
                fails.append((kk, "eps_minus<eps", float(lo_x)))
            if hi_x <= 0:
                fails.append((kk, "eps<eps_plus", float(hi_x)))
        gap = (1.0 / (12.0 * k * (12.0 * k + 1.0))
               + 1.0 / (12.0 * m * (12.0 * m + 1.0))
               - 1.0 / (12.0 * n * (12.0 * n + 1.0)))
        i = int(np.argmax(gap))
        return n, n - 1, fails, (float(gap[i]), int(k[i]))

    best = None  # (gap, n, k)
    for n, count, fails, top in _ordered_map(worker, list(grid.n_values)):
        run.points += count
        for k, check, gap in fails:
            run.violate((n, k), check, float(-gap), 0.0, float(gap))
        if top is not None and (best is None or top[0] > best[0]):
            best = (top[0], n, top[1])
    witness = {"quantity": "max phi_plus/phi_minus", "value": None}
    if best is not None:
        _, n0, k0 = best
        exact_gap = _eps_plus(n0, k0, n0 - k0) - _eps_minus(n0, k0, n0 - k0)
        witness = {
            "quantity": "max phi_plus/phi_minus",
            "value": math.exp(float(exact_gap)),
            "point": [n0, k0],
            "log_gap_exact": f"{exact_gap.numerator}/{exact_gap.denominator}",
        }
    return run.summary(witness)


# ---------------------------------------------------------------------------
# suite: baselines -- Chernoff, the reverse pair, and the sharp ceilings
# ---------------------------------------------------------------------------


def _baselines_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    b = c - a
    kmax = _floor_pn(n, p)
    table = _WeightTable(n, a, c, kmax)
    nn = mpz(n) ** n
    fails, best = [], None
    for k in range(kmax + 1):
        m = n - k
        Sk, wk = table.ratio(k)
        kk_mm = mpz(k) ** k * mpz(m) ** m
        scale = mpz(a) ** k * mpz(b) ** m * nn
        lhs_A = Sk * kk_mm  # A = B e^{nD} = lhs_A / scale

        # Chernoff: B <= e^{-nD}, equality exactly at k = 0.
        if not (lhs_A < scale if k >= 1 else lhs_A <= scale):
            fails.append((k, "chernoff",
                          float(Fraction(int(lhs_A), int(scale))), 1.0))
        phi_num = wk * kk_mm  # phi = b e^{nD} = phi_num / scale
        # Counting reverse bound: e^{-nD}/(n + 1) <= b.
        if (n + 1) * phi_num < scale:
            fails.append((k, "reverse-type", 1.0 / (n + 1),
                          float(Fraction(int(phi_num), int(scale)))))
        if 1 <= k <= n - 1:
            phi_f = float(Fraction(int(phi_num), int(scale)))
            # Square-root reverse bound phi >= sqrt(n/(8 k m)).
            if 8 * k * m * phi_num * phi_num < n * scale * scale:
                fails.append((k, "reverse-sqrt",
                              math.sqrt(n / (8 * k * m)), phi_f))
            # Sharp ceiling phi < sqrt(n/(2 pi k m)); directed pi decides.
            lhs_pi = 2 * Fraction(int(k * m * phi_num * phi_num))
            rhs_pi = Fraction(int(n * scale * scale))
            if not (_PI_HI * lhs_pi < rhs_pi):
                if _PI_LO * lhs_pi >= rhs_pi:
                    fails.append((k, "pmf-ceiling", phi_f,
                                  math.sqrt(n / (2 * math.pi * k * m))))
                else:
                    raise ArithmeticError(
                        "pi enclosure too coarse for the pmf ceiling check")
            Af = float(Fraction(int(lhs_A), int(scale)))
            margin = 1.0 - Af
            if best is None or margin < best[0]:
                best = (margin, k)
        if 1 <= k and k * c < a * n:
            # n-free tail ceiling A < sqrt((1-f)/(2 pi f)) p/(p-f); its log
            # margin exceeds about (ln n)/2, so the screen is decisive,
            # with a directed-pi exact fallback for completeness.
            ln_A = _ln_big(lhs_A) - _ln_big(scale)
            ln_cf = (0.5 * (math.log(m) - math.log(k) - math.log(2 * math.pi))
                     + math.log(a * n) - math.log(a * n - k * c))
            if ln_cf - ln_A < _float_trust(2.0 * n * math.log(max(n, 2)) + 40.0):
                lhs2 = (Fraction(int(lhs_A), int(scale)) ** 2 * 2 * k
                        * Fraction(a * n - k * c, c * n) ** 2)
                rhs2 = Fraction(m, n) * Fraction(a, c) ** 2
                if not (_PI_HI * lhs2 < rhs2):
                    if _PI_LO * lhs2 >= rhs2:
                        fails.append((k, "n-free-ceiling",
                                      math.exp(ln_A), math.exp(ln_cf)))
                    else:
                        raise ArithmeticError(
                            "pi enclosure too coarse for the n-free ceiling")
    return n, p, kmax + 1, fails, best


def _suite_baselines(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("baselines", "min")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, fails, best in _ordered_map(_baselines_worker, tasks):
        run.points += count
        for k, check, lhs, rhs in fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        if best is not None:
            run.extremum.offer(best[0], point=_point_json(n, best[1], p))
    return run.summary(run.extremum.as_witness(
        "min slack 1 - B e^{nD} of the Chernoff bound (1 <= k <= n-1)"))


# ---------------------------------------------------------------------------
# suite: mckay -- mean-deviation ratio bracket and integral-free enclosure
# ---------------------------------------------------------------------------


_SQRT_HALF_PI = math.sqrt(math.pi / 2)


def _mckay_sides_mp(ctx, link: str, dps: int) -> tuple:
    ln = mpmath.log
    n, k, c = ctx["n"], ctx["k"], ctx["c"]
    a, b = ctx["a"], ctx["b"]
    x = mpmath.sqrt(mpmath.mpf((k * c - a * n) ** 2) / (n * a * b))
    Y = (mpmath.sqrt(mpmath.pi / 2) * mpmath.erfc(x / mpmath.sqrt(2))
         * mpmath.exp(x * x / 2))
    E = min(mpmath.sqrt(mpmath.pi * c * c / (8 * n * a * b)),
            mpmath.mpf(c) / abs(k * c - a * n))
    ln_t = ln(mpmath.mpf(ctx["Sk"])) - ln(mpmath.mpf(ctx["wk"]))
    ln_pref = ln(k) + (ln(b) - ln(a) - ln(n)) / 2
    if link == "ratio-lower":
        return ln_pref + ln(Y), ln_t
    if link == "ratio-upper":
        return ln_t, ln_pref + ln(Y) + E
    ln_A = ln(mpmath.mpf(ctx["SA"])) - ln(mpmath.mpf(ctx["scaleA"]))
    pref2 = (ln(b) + ln(k) - ln(a) - ln(n - k)) / 2
    ml = 2 / (mpmath.sqrt(4 + x * x) + x)
    mu_ = 2 - x if x <= 1 else 1 / x
    half_2pi = mpmath.log(2 * mpmath.pi) / 2
    if link == "tail-lower":
        return (pref2 + _mpf_frac(_eps_minus(n, k, n - k)) - half_2pi
                + ln(ml)), ln_A
    if link == "tail-upper":
        return ln_A, (pref2 + _mpf_frac(_eps_plus(n, k, n - k)) - half_2pi
                      + ln(mu_) + E)
    raise ValueError(link)


def _mckay_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    b = c - a
    k_lo = _floor_pn(n, p) + 1
    if k_lo > n:
        return n, p, 0, [], [], None
    # Reflected table: Bbar(n, k, p)/b(n, k, p) = S'_{n-k}/w'_{n-k} with
    # success weight b = c - a.
    table = _WeightTable(n, b, c, n - k_lo)
    nn = mpz(n) ** n
    fails, pending, worst = [], [], None
    for k in range(k_lo, n + 1):
        kr, mr = n - k, k
        Sk, wk = table.ratio(kr)
        delta_n = k * c - a * n  # (k - pn) c, strictly positive here
        x2 = delta_n * delta_n / (n * a * b)
        x = math.sqrt(x2)
        Y = _SQRT_HALF_PI * float(erfcx(x / math.sqrt(2.0)))
        E = min(math.sqrt(math.pi * c * c / (8 * n * a * b)), c / delta_n)
        ln_t = _ln_big(Sk) - _ln_big(wk)
        ln_pref = math.log(k) + 0.5 * (math.log(b) - math.log(a) - math.log(n))
        trust = _float_trust(abs(_ln_big(Sk)) + abs(_ln_big(wk))
                             + n * math.log(max(n, 2)) + 40.0)

        # E <= 3/2 on pn < k <= n - 1, decided exactly: either
        # 3(kc - an) >= 2c or pi c^2 <= 18 n a b.
        if k <= n - 1 and not (3 * delta_n >= 2 * c
                               or _PI_HI * c * c <= 18 * n * a * b):
            if _PI_LO * c * c > 18 * n * a * b and 3 * delta_n < 2 * c:
                fails.append((k, "E<=3/2", E, 1.5))
            else:
                raise ArithmeticError("pi enclosure too coarse for the E cap")

        ctx = {"n": n, "k": k, "a": a, "b": b, "c": c,
               "Sk": int(Sk), "wk": int(wk), "SA": 1, "scaleA": 1}
        sides = [("ratio-lower", ln_t - (ln_pref + math.log(Y))),
                 ("ratio-upper", (ln_pref + math.log(Y) + E) - ln_t)]
        if k <= n - 1:
            kk_mm = mpz(kr) ** kr * mpz(mr) ** mr
            ctx["SA"] = int(Sk * kk_mm)
            ctx["scaleA"] = int(mpz(b) ** kr * mpz(a) ** mr * nn)
            ln_A = _ln_big(ctx["SA"]) - _ln_big(ctx["scaleA"])
            pref2 = 0.5 * (math.log(b) + math.log(k) - math.log(a)
                           - math.log(n - k))
            ml = 2.0 / (math.sqrt(4.0 + x2) + x)
            mu_ = 2.0 - x if x <= 1.0 else 1.0 / x
            em = float(_eps_minus(n, k, n - k))
            ep = float(_eps_plus(n, k, n - k))
            half_2pi = 0.5 * math.log(2 * math.pi)
            sides.append(("tail-lower",
                          ln_A - (pref2 + em - half_2pi + math.log(ml))))
            sides.append(("tail-upper",
                          (pref2 + ep - half_2pi + math.log(mu_) + E) - ln_A))
            width = (ep - em) + math.log(mu_ / ml) + E
            if worst is None or width > worst[0]:
                worst = (width, k)
        for check, margin in sides:
            if margin < trust:
                pending.append((k, check, ctx))
    return n, p, n - k_lo + 1, fails, pending, worst


def _suite_mckay(grid: GridSpec) -> CheckSummary:
    run = _SuiteRun("mckay", "max")
    tasks = [(n, p) for n in grid.n_values for p in grid.p_values]
    for n, p, count, fails, pending, worst in _ordered_map(_mckay_worker, tasks):
        run.points += count
        for k, check, lhs, rhs in fails:
            run.violate((n, k, p), check, lhs, rhs, rhs - lhs)
        for k, check, ctx in pending:
            ok, lhs, rhs, margin = _escalate(
                lambda dps, c=ctx, l=check: _mckay_sides_mp(c, l, dps))
            if not ok:
                run.violate((n, k, p), check, lhs, rhs, margin)
        if worst is not None:
            run.extremum.offer(math.exp(worst[0]),
                               point=_point_json(n, worst[1], p))
    # Width ceiling: (phi_+/phi_-)(upsilon/ell) e^E <= 2 e^{3929/2600},
    # from E <= 3/2, upsilon <= 2 ell, and the peak band ratio e^{29/2600}.
    cap = 2.0 * math.exp(3929 / 2600)
    return run.summary(run.extremum.as_witness(
        "max integral-free bracket width", cap=cap))


# ---------------------------------------------------------------------------
# suite: gaussian -- certified normal-tail bracket on an x grid
# ---------------------------------------------------------------------------


def _gaussian_point(xq: Fraction, level: int = 0) -> dict:
    """Certified brackets for Phi(-x), e^{x^2/2}, ell(x), upsilon(x), and
    sqrt(pi/2) at one abscissa; ``level`` 1 tightens every bracket."""
    dps = 40 if level == 0 else 120
    rel = Fraction(1, 10 ** (dps - 6))
    phi_guess = 0.5 * math.erfc(float(xq) / math.sqrt(2.0))
    tol = Fraction(1, 10 ** (18 if level == 0 else 60))
    if phi_guess > 0:
        tol = min(tol, _as_fraction(phi_guess)
                  * Fraction(1, 10 ** (14 if level == 0 else 50)))
    phi = gaussian_upper_tail(xq, tol=tol)

    def env(value, extra=1):
        f = _mpf_to_fraction(value)
        return ExactReal(f, abs(f) * rel * extra)

    with mpmath.workdps(dps):
        x = _mpf_frac(xq)
        exp_half = env(mpmath.exp(x * x / 2), extra=1 + int(float(xq * xq)))
        ell = env(2 / ((mpmath.sqrt(4 + x * x) + x)
                       * mpmath.sqrt(2 * mpmath.pi)))
        ups_coeff = (2 - x) if xq <= 1 else 1 / x
        ups = env(ups_coeff / mpmath.sqrt(2 * mpmath.pi))
        half_pi = env(mpmath.sqrt(mpmath.pi / 2))
    return {"x": xq, "phi": phi, "exp_half": exp_half, "ell": ell,
            "ups": ups, "half_pi": half_pi}


def _gaussian_links(pt, pt_prev) -> list:
    """(check, lhs, rhs, kind) at one grid point; kind 'lt' means strict
    lhs < rhs, 'eq' means equality within bracket error."""
    scaled = pt["phi"] * pt["exp_half"]  # Phi(-x) e^{x^2/2}, bracketed
    cap = pt["half_pi"] * pt["ell"]
    two_ell = pt["ell"] + pt["ell"]
    links = [
        ("ell-lower", pt["ell"], scaled, "lt"),
        ("upsilon-upper", scaled, pt["ups"], "lt"),
    ]
    if pt["x"] == 0:
        links.append(("companion-cap-at-0", scaled, cap, "eq"))
        links.append(("upsilon=2ell-at-0", pt["ups"], two_ell, "eq"))
    else:
        links.append(("companion-cap", scaled, cap, "lt"))
        links.append(("upsilon<2ell", pt["ups"], two_ell, "lt"))
    if pt_prev is not None:
        # R = Phi e^{x^2/2} / ell strictly decreasing: cross-multiply the
        # positive brackets instead of dividing.
        prev_scaled = pt_prev["phi"] * pt_prev["exp_half"]
        links.append(("ratio-decreasing", scaled * pt_prev["ell"],
                      prev_scaled * pt["ell"], "lt"))
    return links


def _suite_gaussian(grid: GridSpec, x_max, x_step) -> CheckSummary:
    """Certify ell e^{-x^2/2} < Phi(-x) < upsilon e^{-x^2/2}, the
    sqrt(pi/2) ell companion cap (equality exactly at x = 0, where both
    sides are 1/2), the upsilon <= 2 ell coefficient relation, and the
    strict decrease of R(x) = Phi(-x) e^{x^2/2} / ell(x) across the grid.

    Every comparison runs on certified brackets: the Phi oracle carries
    its own error bound and the coefficients take directed 40-digit
    envelopes, rebuilt at 120 digits when a bracket is too coarse to
    decide.  The grid's n and p values play no role here.
    """
    run = _SuiteRun("gaussian", "min")
    xq_step = _as_fraction(x_step)
    xq_max = _as_fraction(x_max)
    if xq_step <= 0 or xq_max < 0:
        raise ValueError("x_max >= 0 and x_step > 0 required")
    count = int(xq_max / xq_step) + 1
    prev: Optional[dict] = None
    for i in range(count):
        xq = i * xq_step
        run.points += 1
        pt = _gaussian_point(xq)
        for check, lhs, rhs, kind in _gaussian_links(pt, prev):
            if kind == "eq":
                ok = abs(lhs.value - rhs.value) <= lhs.err + rhs.err
            else:
                ok = lhs.definitely_lt(rhs)
            if ok:
                if check == "ratio-decreasing":
                    rel = (float(rhs.value - lhs.value)
                           / max(float(rhs.value), 1e-300))
                    run.extremum.offer(rel, x=str(xq))
                continue
            # Rebuild both points with tighter brackets and re-test.
            pt_hi = _gaussian_point(xq, level=1)
            prev_hi = (None if prev is None
                       else _gaussian_point(prev["x"], level=1))
            redo = {c_: (l_, r_, kd_)
                    for c_, l_, r_, kd_ in _gaussian_links(pt_hi, prev_hi)}
            lhs2, rhs2, kind2 = redo[check]
            if kind2 == "eq":
                if abs(lhs2.value - rhs2.value) <= lhs2.err + rhs2.err:
                    continue
            elif lhs2.definitely_lt(rhs2):
                continue
            elif not rhs2.definitely_lt(lhs2):
                raise ArithmeticError(
                    f"gaussian link {check} unresolved at 120 digits")
            run.violate((xq,), check, float(lhs2.value), float(rhs2.value),
                        float(rhs2.value - lhs2.value))
        prev = pt
    return run.summary(run.extremum.as_witness(
        "min relative decrease of Phi(-x) e^{x^2/2} / ell between grid steps"))


# ---------------------------------------------------------------------------
# suite dispatch
# ---------------------------------------------------------------------------


_SUITES = {
    "theorem1": _suite_theorem1,
    "theorem2": _suite_theorem2,
    "theorem5_2": _suite_theorem5_2,
    "upper_tail": _suite_upper_tail,
    "partial_mean": _suite_partial_mean,
    "successive_ratio": _suite_successive_ratio,
    "phi_band": _suite_phi_band,
    "baselines": _suite_baselines,
    "mckay": _suite_mckay,
}


def run_suite(suite: str, grid: Optional[GridSpec] = None, *,
              x_max=10.0, x_step=Fraction(1, 100)) -> CheckSummary:
    """Run one certification suite over the grid.

    ``x_max`` and ``x_step`` configure the gaussian suite's abscissa grid
    and are ignored elsewhere.  Unknown suite ids raise ValueError.
    """
    if suite not in SUITE_IDS:
        raise ValueError(
            f"unknown suite {suite!r}; valid ids: {', '.join(SUITE_IDS)}")
    if grid is None:
        grid = GridSpec.default()
    if suite == "gaussian":
        return _suite_gaussian(grid, x_max, x_step)
    return _SUITES[suite](grid)


# ---------------------------------------------------------------------------
# conjecture scan: r = B/(bL) against its scanned caps, with monotonicity
# ---------------------------------------------------------------------------


def _r_cmp(data1, data2) -> int:
    """Exact sign of r(data1) - r(data2) for r = B/(bL), all-integer.

    r = S (sqrt(dn) - c1n) / (2 a m w) after rationalizing 1/L, so the
    difference clears to a two-surd integer sign test;
    data = (Sk, wk, c1n, dn, am).
    """
    Sk1, wk1, c1n1, dn1, am1 = data1
    Sk2, wk2, c1n2, dn2, am2 = data2
    M2 = 2 * am2 * wk2
    M1 = 2 * am1 * wk1
    return _cmp_surd_pair(-Sk1 * c1n1 * M2, Sk1 * M2, dn1,
                          -Sk2 * c1n2 * M1, Sk2 * M1, dn2)


def _r_float(data) -> float:
    Sk, wk, c1n, dn, am = data
    return float(Fraction(Sk, wk)) * (math.sqrt(dn) - c1n) / (2 * am)


def _conjecture_worker(task):
    n, p = task
    a, c = p.numerator, p.denominator
    kmax = _floor_pn(n, p)
    table = _WeightTable(n, a, c, kmax)
    p1, q1 = RATIO_CAP_GLOBAL.numerator, RATIO_CAP_GLOBAL.denominator
    rows, global_fail, interior_pending = [], [], []
    for k in range(kmax + 1):
        Sk, wk = table.ratio(k)
        c1n, dn = _L_parts(n, k, a, c)
        data = (int(Sk), int(wk), c1n, dn, a * (n - k))
        # Exact strict cap: 2 c q1 S < p1 w (c1n + sqrt(dn)).
        X = 2 * c * Sk * q1 - p1 * c1n * wk
        if not (X < 0 or X * X < p1 * p1 * wk * wk * dn):
            global_fail.append(k)
        rf = _r_float(data)
        interior = (k + 1) * c <= a * n  # k <= pn - 1
        if interior and rf > RATIO_CAP_INTERIOR - 1e-6:
            interior_pending.append(k)
        rows.append((k, rf, interior, data))
    return n, p, kmax + 1, rows, global_fail, interior_pending


def _interior_cap_check(data) -> bool:
    """Certify r < sqrt(pi/2) by directed high-precision evaluation."""
    Sk, wk, c1n, dn, am = data

    def sides(dps):
        r = (mpmath.mpf(Sk) / wk
             * (mpmath.sqrt(mpmath.mpf(dn)) - c1n) / (2 * am))
        return r, mpmath.sqrt(mpmath.pi / 2)

    ok, _, _, _ = _escalate(sides)
    return ok


def conjecture_scan(grid: Optional[GridSpec] = None, *,
                    refine_step: int = 100,
                    refine_span: int = 3) -> CheckSummary:
    """Scan r = B/(bL) over the lower tail: strict caps plus monotonicity.

    Certifies r < 180451625/143327232 at every k <= pn with exact surd
    arithmetic, and r < sqrt(pi/2) on the interior k <= pn - 1 with
    directed high-precision evaluation of any point the float prepass
    cannot clear.  Exact finite differences then test the scanned trends
    (nondecreasing in k, nonincreasing in n and in p); the p direction is
    re-sampled on a 1/refine_step lattice just above p = k/n, where the
    supremum concentrates.  All of this is grid evidence, not proof, and
    the witness says so.
    """
    if grid is None:
        grid = GridSpec.default()
    run = _SuiteRun("conjecture", "max")
    interior_max = _Extremum("max")
    mono_checks = {"k": 0, "n": 0, "p": 0, "p-refined": 0}
    prev_by_p: dict = {}
    prev_n: Optional[int] = None
    p_list = list(grid.p_values)

    for n in grid.n_values:
        results = _ordered_map(
            lambda p, n=n: _conjecture_worker((n, p)), p_list)
        cur_by_p: dict = {}
        for _n, p, count, rows, global_fail, interior_pending in results:
            run.points += count
            data_by_k: dict = {}
            prev_row = None
            for k, rf, interior, data in rows:
                run.extremum.offer(rf, point=_point_json(n, k, p))
                if interior:
                    interior_max.offer(rf, point=_point_json(n, k, p))
                data_by_k[k] = (rf, data)
                if prev_row is not None:
                    mono_checks["k"] += 1
                    if _r_cmp(prev_row[1], data) > 0:
                        run.violate((n, k, p), "nondecreasing-in-k",
                                    prev_row[0], rf, rf - prev_row[0])
                prev_row = (rf, data)
            for k in global_fail:
                run.violate((n, k, p), "r<cap-global",
                            data_by_k[k][0], float(RATIO_CAP_GLOBAL),
                            float(RATIO_CAP_GLOBAL) - data_by_k[k][0])
            for k in interior_pending:
                if not _interior_cap_check(data_by_k[k][1]):
                    run.violate((n, k, p), "r<cap-interior",
                                data_by_k[k][0], RATIO_CAP_INTERIOR,
                                RATIO_CAP_INTERIOR - data_by_k[k][0])
            cur_by_p[p] = data_by_k
        # Nonincreasing in p at fixed (n, k), across adjacent grid p.
        for pa, pb in zip(p_list, p_list[1:]):
            da, db = cur_by_p[pa], cur_by_p[pb]
            for k, (rf_a, data_a) in da.items():
                if k in db:
                    mono_checks["p"] += 1
                    if _r_cmp(data_a, db[k][1]) < 0:
                        run.violate((n, k, pb), "nonincreasing-in-p",
                                    rf_a, db[k][0], rf_a - db[k][0])
        # Nonincreasing in n at fixed (k, p), for contiguous n.
        if prev_n == n - 1:
            for p in p_list:
                da, db = prev_by_p[p], cur_by_p[p]
                for k, (rf_a, data_a) in da.items():
                    if k in db:
                        mono_checks["n"] += 1
                        if _r_cmp(data_a, db[k][1]) < 0:
                            run.violate((n, k, p), "nonincreasing-in-n",
                                        rf_a, db[k][0], rf_a - db[k][0])
        prev_by_p, prev_n = cur_by_p, n

    # p-refinement: for each (n, k) sample p on the 1/refine_step lattice
    # from just above k/n, where r approaches its supremum in p.
    for n in grid.n_values:
        tables: dict = {}
        for k in range(1, n):
            j0 = -((-refine_step * k) // n)  # ceil(refine_step * k / n)
            datas = []
            for j in range(j0, j0 + refine_span + 1):
                if not 1 <= j <= refine_step - 1:
                    continue
                pj = Fraction(j, refine_step)
                aj, cj = pj.numerator, pj.denominator
                table = tables.get(pj)
                if table is None:
                    table = _WeightTable(n, aj, cj, _floor_pn(n, pj))
                    tables[pj] = table
                if k >= len(table.Ss):
                    continue
                Sk, wk = table.ratio(k)
                c1n, dn = _L_parts(n, k, aj, cj)
                datas.append((pj, (int(Sk), int(wk), c1n, dn, aj * (n - k))))
            for (pj, d1), (pj2, d2) in zip(datas, datas[1:]):
                mono_checks["p-refined"] += 1
                if _r_cmp(d1, d2) < 0:
                    run.violate((n, k, pj2), "nonincreasing-in-p-refined",
                                _r_float(d1), _r_float(d2),
                                _r_float(d1) - _r_float(d2))

    witness = {
        "quantity": "max B/(bL), grid evidence only",
        "value": run.extremum.value,
        "argmax": run.extremum.info.get("point"),
        "cap": float(RATIO_CAP_GLOBAL),
        "cap_exact": (f"{RATIO_CAP_GLOBAL.numerator}"
                      f"/{RATIO_CAP_GLOBAL.denominator}"),
        "interior_max": interior_max.value,
        "interior_argmax": interior_max.info.get("point"),
        "interior_cap": RATIO_CAP_INTERIOR,
        "monotonicity_checks": mono_checks,
    }
    return run.summary(witness)


def conjecture_slice(k: int = 12,
                     n_values: Optional[Sequence[int]] = None) -> dict:
    """Trace r = B/(bL) along p = k/n at fixed k.

    Returns per-n rows plus exact verdicts that the sequence increases
    strictly and stays below the scanned cap; the k = 12 slice is the one
    whose limit attains the cap.
    """
    if n_values is None:
        n_values = (25, 50, 100, 200, 400, 800, 1600)
    n_values = tuple(sorted(set(int(n) for n in n_values)))
    if k < 1 or n_values[0] <= k:
        raise ValueError("slice needs k >= 1 and n > k throughout")
    p1, q1 = RATIO_CAP_GLOBAL.numerator, RATIO_CAP_GLOBAL.denominator
    rows, datas, below_cap = [], [], True
    for n in n_values:
        p = Fraction(k, n)
        a, c = p.numerator, p.denominator
        table = _WeightTable(n, a, c, _floor_pn(n, p))
        Sk, wk = table.ratio(k)
        c1n, dn = _L_parts(n, k, a, c)
        data = (int(Sk), int(wk), c1n, dn, a * (n - k))
        X = 2 * c * Sk * q1 - p1 * c1n * wk
        if not (X < 0 or X * X < p1 * p1 * wk * wk * dn):
            below_cap = False
        rf = _r_float(data)
        rows.append({"n": n, "ratio": rf,
                     "gap": float(RATIO_CAP_GLOBAL) - rf})
        datas.append(data)
    increasing = all(_r_cmp(d1, d2) < 0 for d1, d2 in zip(datas, datas[1:]))
    return {
        "k": k,
        "cap": float(RATIO_CAP_GLOBAL),
        "cap_exact": f"{p1}/{q1}",
        "rows": rows,
        "strictly_increasing": increasing,
        "below_cap": below_cap,
    }


# ---------------------------------------------------------------------------
# monotonicity suite: exact finite differences of the stated strict trends
# ---------------------------------------------------------------------------


_F_SLICES = (Fraction(1, 10), Fraction(1, 5), Fraction(3, 10),
             Fraction(2, 5), Fraction(1, 2), Fraction(3, 5), Fraction(7, 10))


def _scaled_tail_sq(n, k, Sk, a, b, c) -> Fraction:
    """(sqrt(n) B e^{nD})^2 = n A^2 as an exact rational."""
    m = n - k
    A = Fraction(int(Sk * mpz(k) ** k * mpz(m) ** m),
                 int(mpz(a) ** k * mpz(b) ** m * mpz(n) ** n))
    return n * A * A


def monotonicity_suite(grid: Optional[GridSpec] = None,
                       f_values: Sequence = _F_SLICES) -> CheckSummary:
    """Exact finite-difference checks of the strict monotonicity claims.

    Families: the tail B in k (up), in n (down), and in p (down, k < n);
    the partial mean mu in k, n, and p (up, k >= 1) plus the complement
    k - mu in k (up); along slices k = fn with fn integral, the ratio B/b
    in n (up, any f in (0,1)) and, for f <= p, the scaled tail
    sqrt(n) B e^{nD} (up, exact squares), the pmf-scaled ratio bounds
    L-tilde and U-tilde in n (up, surd pairs and exact rationals), and
    their closed-form e^{eps} companions (up, screened logs with
    escalation); and for f < p the ratio ceiling (1-f)p/(p-f) with the
    sharp n-free tail ceiling, decided through a directed pi enclosure.
    """
    if grid is None:
        grid = GridSpec.default()
    run = _SuiteRun("monotonicity", "min")
    f_values = tuple(sorted(set(_as_fraction(f) for f in f_values)))
    if any(f <= 0 or f >= 1 for f in f_values):
        raise ValueError("f slices must lie in (0, 1)")

    # --- B and mu trends in k and n at fixed p ------------------------------
    for p in grid.p_values:
        a, c = p.numerator, p.denominator
        prev_table: Optional[_WeightTable] = None
        prev_n = None
        for n in grid.n_values:
            table = _WeightTable(n, a, c, n)
            for k in range(n):
                run.points += 1
                if not table.Ss[k] < table.Ss[k + 1]:
                    run.violate((n, k + 1, p), "B-increasing-in-k",
                                float(Fraction(int(table.Ss[k]), c ** n)),
                                float(Fraction(int(table.Ss[k + 1]), c ** n)),
                                0.0)
            for k in range(1, n):
                run.points += 2
                S0, iS0 = int(table.Ss[k]), int(table.iSs[k])
                S1, iS1 = int(table.Ss[k + 1]), int(table.iSs[k + 1])
                if not iS0 * S1 < iS1 * S0:
                    run.violate((n, k + 1, p), "mu-increasing-in-k",
                                float(Fraction(iS0, S0)),
                                float(Fraction(iS1, S1)), 0.0)
                if not (k * S0 - iS0) * S1 < ((k + 1) * S1 - iS1) * S0:
                    run.violate((n, k + 1, p), "k-mu-increasing-in-k",
                                k - float(Fraction(iS0, S0)),
                                k + 1 - float(Fraction(iS1, S1)), 0.0)
            if prev_table is not None and prev_n == n - 1:
                for k in range(n):
                    run.points += 1
                    # B(n-1, k) > B(n, k): scale the n-1 sum by c.
                    if not int(prev_table.Ss[k]) * c > int(table.Ss[k]):
                        run.violate((n, k, p), "B-decreasing-in-n",
                                    math.nan, math.nan, 0.0)
                for k in range(1, n):
                    run.points += 1
                    S0, iS0 = int(prev_table.Ss[k]), int(prev_table.iSs[k])
                    S1, iS1 = int(table.Ss[k]), int(table.iSs[k])
                    if not iS0 * S1 < iS1 * S0:
                        run.violate((n, k, p), "mu-increasing-in-n",
                                    float(Fraction(iS0, S0)),
                                    float(Fraction(iS1, S1)), 0.0)
            prev_table, prev_n = table, n

    # --- B and mu trends in p (adjacent grid p at fixed n) ------------------
    for n in grid.n_values:
        tables = [_WeightTable(n, p.numerator, p.denominator, n)
                  for p in grid.p_values]
        pairs = list(zip(grid.p_values, tables))
        for (pa, ta), (pb, tb) in zip(pairs, pairs[1:]):
            ca_n = ta.c ** n
            cb_n = tb.c ** n
            for k in range(n):
                run.points += 1
                # B(n, k, pa) > B(n, k, pb): cross-multiply denominators.
                if not int(ta.Ss[k]) * cb_n > int(tb.Ss[k]) * ca_n:
                    run.violate((n, k, pb), "B-decreasing-in-p",
                                float(Fraction(int(ta.Ss[k]), ca_n)),
                                float(Fraction(int(tb.Ss[k]), cb_n)), 0.0)
            for k in range(1, n + 1):
                run.points += 1
                S0, iS0 = int(ta.Ss[k]), int(ta.iSs[k])
                S1, iS1 = int(tb.Ss[k]), int(tb.iSs[k])
                if not iS0 * S1 < iS1 * S0:
                    run.violate((n, k, pb), "mu-increasing-in-p",
                                float(Fraction(iS0, S0)),
                                float(Fraction(iS1, S1)), 0.0)

    # --- slice families along n with k = fn integral -------------------------
    for f in f_values:
        den = f.denominator
        ns = [n for n in grid.n_values if n % den == 0]
        for p in grid.p_values:
            a, c = p.numerator, p.denominator
            b = c - a
            prev_d: Optional[dict] = None
            for n in ns:
                k = int(f * n)
                if k < 1 or k > n - 1:
                    continue
                table = _WeightTable(n, a, c, k)
                Sk, wk = int(table.Ss[k]), int(table.ws[k])
                d = {"n": n, "k": k, "Sk": Sk, "wk": wk}
                if f <= p:
                    m = n - k
                    d["sq"] = _scaled_tail_sq(n, k, Sk, a, b, c)
                    d["c1n"], d["dn"] = _L_parts(n, k, a, c)
                    d["nu"], d["de"], _ = _exact_U(n, k, a, c)
                    d["phi2"] = Fraction(
                        int((mpz(wk) * mpz(k) ** k * mpz(m) ** m) ** 2),
                        int((mpz(a) ** k * mpz(b) ** m * mpz(n) ** n) ** 2))
                if prev_d is not None:
                    _mono_slice_step(run, prev_d, d, n, k, p, c, f)
                if f < p:
                    run.points += 2
                    ceiling = (1 - f) * p / (p - f)
                    t_now = Fraction(Sk, wk)
                    if not t_now < ceiling:
                        run.violate((n, k, p), "ratio-ceiling",
                                    float(t_now), float(ceiling),
                                    float(ceiling - t_now))
                    # sqrt(n) B e^{nD} < sqrt((1-f)/(2 pi f)) p/(p-f):
                    # squared and rearranged for the directed pi enclosure.
                    sq = d.get("sq", None)
                    if sq is None:
                        sq = _scaled_tail_sq(n, k, Sk, a, b, c)
                    lhs_pi = 2 * f * (p - f) ** 2 * sq
                    rhs_pi = (1 - f) * p * p
                    if not (_PI_HI * lhs_pi < rhs_pi):
                        if _PI_LO * lhs_pi >= rhs_pi:
                            ceil_f = math.sqrt(float(
                                rhs_pi / (2 * _PI_FRACTION * f * (p - f) ** 2)))
                            run.violate((n, k, p), "scaled-tail-ceiling",
                                        math.sqrt(float(sq)), ceil_f,
                                        ceil_f - math.sqrt(float(sq)))
                        else:
                            raise ArithmeticError(
                                "pi enclosure too coarse for the tail ceiling")
                prev_d = d
    return run.summary(run.extremum.as_witness(
        "min relative strict-increase margin of the scaled tail along fn slices"))


def _mono_slice_step(run, d0, d1, n, k, p, c, f) -> None:
    """One n-step of the slice-family comparisons (d0 at the smaller n)."""
    run.points += 1
    if not Fraction(d0["Sk"], d0["wk"]) < Fraction(d1["Sk"], d1["wk"]):
        run.violate((n, k, p), "ratio-increasing-in-n",
                    float(Fraction(d0["Sk"], d0["wk"])),
                    float(Fraction(d1["Sk"], d1["wk"])), 0.0)
    if f > p:
        return
    run.points += 1
    if not d0["sq"] < d1["sq"]:
        run.violate((n, k, p), "scaled-tail-increasing-in-n",
                    math.sqrt(float(d0["sq"])), math.sqrt(float(d1["sq"])),
                    0.0)
    else:
        rel = float((d1["sq"] - d0["sq"]) / d1["sq"])
        run.extremum.offer(rel, point=_point_json(n, k, p), f=str(f))

    # L-tilde^2 = n phi^2 L^2 as alpha + beta sqrt(dn); beta's sign follows
    # c1n, which the general surd comparator accepts.
    def lt_parts(d):
        coef = d["n"] * d["phi2"] / (4 * c * c)
        return (coef * (d["c1n"] ** 2 + d["dn"]), coef * 2 * d["c1n"],
                Fraction(d["dn"]))

    run.points += 2
    a1, b1, dd1 = lt_parts(d0)
    a2, b2, dd2 = lt_parts(d1)
    if not _cmp_surd_pair(a1, b1, dd1, a2, b2, dd2) < 0:
        run.violate((n, k, p), "L-tilde-increasing-in-n",
                    math.nan, math.nan, 0.0)
    lhs_u = d0["n"] * d0["phi2"] * Fraction(d0["nu"] ** 2, d0["de"] ** 2)
    rhs_u = d1["n"] * d1["phi2"] * Fraction(d1["nu"] ** 2, d1["de"] ** 2)
    if not lhs_u < rhs_u:
        run.violate((n, k, p), "U-tilde-increasing-in-n",
                    math.nan, math.nan, 0.0)

    run.points += 2
    for eps_fn, label in ((_eps_minus, "lower"), (_eps_plus, "upper")):
        if not _eps_slice_increases(d0, d1, c, eps_fn, label):
            run.violate((n, k, p), f"{label}-envelope-increasing-in-n",
                        math.nan, math.nan, 0.0)


def _eps_slice_increases(d0, d1, c, eps_fn, label: str) -> bool:
    """Strict increase across an fn slice of n L e^{eps}/sqrt(2 pi k m)
    (label 'lower') or its U counterpart (label 'upper')."""

    def one_float(d):
        n, k = d["n"], d["k"]
        if label == "lower":
            ln_base = math.log(_L_float(d["c1n"], d["dn"], c))
        else:
            ln_base = math.log(d["nu"]) - math.log(d["de"])
        return (math.log(n) + ln_base + float(eps_fn(n, k, n - k))
                - 0.5 * math.log(2 * math.pi * k * (n - k)))

    # The terms here are O(ln n), so binary64 slack 1e-11 is generous.
    if one_float(d1) - one_float(d0) > 1e-11:
        return True

    def one_mp(d):
        n, k = d["n"], d["k"]
        if label == "lower":
            ln_base = mpmath.log(
                (d["c1n"] + mpmath.sqrt(mpmath.mpf(d["dn"]))) / (2 * c))
        else:
            ln_base = (mpmath.log(mpmath.mpf(d["nu"]))
                       - mpmath.log(mpmath.mpf(d["de"])))
        return (mpmath.log(n) + ln_base + _mpf_frac(eps_fn(n, k, n - k))
                - mpmath.log(2 * mpmath.pi * k * (n - k)) / 2)

    ok, _, _, _ = _escalate(lambda dps: (one_mp(d0), one_mp(d1)))
    return ok


# ---------------------------------------------------------------------------
# convergence suite: large-deviation, moderate, and central-limit tracks
# ---------------------------------------------------------------------------


def _moderate_k(n: int, p: Fraction) -> int:
    """floor(pn - n^(2/3)), decided with exact integer cube comparisons."""
    a, c = p.numerator, p.denominator
    j = int(math.floor(float(p) * n - n ** (2.0 / 3.0)))

    def below(j):  # j <= pn - n^(2/3)  <=>  (an - jc)^3 >= n^2 c^3
        d = a * n - j * c
        return d >= 0 and d ** 3 >= n * n * c ** 3

    while not below(j):
        j -= 1
    while below(j + 1):
        j += 1
    return j


def _clt_k(n: int, p: Fraction, x: Fraction) -> int:
    """Nearest integer to pn - x sqrt(pqn), exact surd tie-break (ties
    resolve to the smaller k)."""
    s2 = p * (1 - p) * n  # pqn, exact
    j = int(math.floor(float(p) * n - float(x) * math.sqrt(float(s2))))
    # The offset d_j = pn - j - x sqrt(pqn) lies in [0, 1); j is nearest
    # when d_j < 1/2, i.e. when pn - j - 1/2 - x sqrt(pqn) < 0.
    mid = p * n - j - Fraction(1, 2)
    return j + 1 if _sign_surd(mid, -x, s2) > 0 else j


def _entropy_log_mp(n: int, k: int, a: int, c: int):
    """n D(k/n || a/c) under the active mpmath precision."""
    m = n - k
    return (k * mpmath.log(mpmath.mpf(c * k) / (a * n))
            + m * mpmath.log(mpmath.mpf(c * m) / ((c - a) * n)))


def _clt_lower_value(n: int, k: int, p: Fraction, dps: int = 50) -> float:
    """The certified lower tail bound
    sqrt(n) L e^{eps_-} e^{-nD} / sqrt(2 pi k m) at high precision."""
    a, c = p.numerator, p.denominator
    m = n - k
    c1n, dn = _L_parts(n, k, a, c)
    em = _eps_minus(n, k, m)
    with mpmath.workdps(dps):
        ln_L = mpmath.log((c1n + mpmath.sqrt(mpmath.mpf(dn))) / (2 * c))
        val = mpmath.exp(mpmath.log(n) / 2 + ln_L + _mpf_frac(em)
                         - mpmath.log(2 * mpmath.pi * k * m) / 2
                         - _entropy_log_mp(n, k, a, c))
        return float(val)


def _mp_bracket(fn: Callable, dps: int, slack_scale: int = 64) -> ExactReal:
    """Directed envelope for one mpmath evaluation at ``dps`` digits."""
    with mpmath.workdps(dps):
        f = _mpf_to_fraction(fn())
    return ExactReal(f, abs(f) * Fraction(slack_scale, 10 ** (dps - 2)))


def convergence_suite(f, p, schedule: Sequence[int], *, clt_x=1,
                      large_dev_tol: float = 0.005,
                      moderate_tol: float = 0.05,
                      clt_tol: float = 0.05) -> CheckSummary:
    """Tabulate the three scaled-tail limit tracks along an n-schedule.

    Large deviation: at k = fn (0 < f < p, fn integral) the scaled tail
    sqrt(n) B e^{nD} increases strictly -- certified exactly on squares --
    toward sqrt((1-f)/(2 pi f)) p/(p-f), never crossing it (directed pi),
    and the final point must land within ``large_dev_tol`` relative.

    Moderate: at k = floor(pn - n^(2/3)) with the exact rational offset
    alpha = pn - k, the quantity B e^{nD} alpha / sqrt(n) approaches
    sqrt(pq/(2 pi)); the gap must shrink along the schedule.

    Central limit: at k = round(pn - x sqrt(pqn)) the certified lower
    tail bound approaches ell(x) e^{-x^2/2}; each point is compared
    against its own exact offset x_eff = (pn - k)/sqrt(pqn), so integer
    rounding does not pollute the trend.
    """
    f = _as_fraction(f)
    p = _as_fraction(p)
    schedule = tuple(int(n) for n in schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    run = _SuiteRun("convergence", "min")
    tracks: dict = {}
    a, c = p.numerator, p.denominator
    b = c - a

    # --- large-deviation track ----------------------------------------------
    if 0 < f < p:
        ns = [n for n in schedule if (f * n).denominator == 1]
        limit = (math.sqrt(float((1 - f) / (2 * _PI_FRACTION * f)))
                 * float(p / (p - f)))
        rows, prev_sq = [], None
        for n in ns:
            run.points += 1
            k = int(f * n)
            if n <= RATIONAL_N_LIMIT:
                S, _w = _tail_sum(n, a, c, k)
                sq = ExactReal(_scaled_tail_sq(n, k, S, a, b, c))
            else:
                # Certified bracket: decimal tail oracle times directed
                # entropy and sqrt(n) envelopes, then squared.
                T = (lower_tail_exact(n, k, p, method="auto", dps=60)
                     * _mp_bracket(lambda n=n, k=k: mpmath.exp(
                         _entropy_log_mp(n, k, a, c)), dps=60)
                     * _mp_bracket(lambda n=n: mpmath.sqrt(n), dps=60))
                sq = T * T
            value = math.sqrt(float(sq.value))
            rows.append({"n": n, "value": value, "limit": limit,
                         "gap": limit - value})
            if prev_sq is not None and not prev_sq.definitely_lt(sq):
                run.violate((n, k, p), "large-dev-increasing",
                            math.sqrt(float(prev_sq.value)), value, 0.0)
            rhs_pi = (1 - f) * p * p
            coef = 2 * f * (p - f) ** 2
            if not (_PI_HI * coef * (sq.value + sq.err) < rhs_pi):
                if _PI_LO * coef * (sq.value - sq.err) >= rhs_pi:
                    run.violate((n, k, p), "large-dev-below-limit",
                                value, limit, limit - value)
                else:
                    raise ArithmeticError(
                        "enclosure too coarse for the limit comparison")
            prev_sq = sq
        if rows:
            final_gap = abs(rows[-1]["gap"]) / limit
            if final_gap > large_dev_tol:
                run.violate((ns[-1], int(f * ns[-1]), p),
                            "large-dev-final-gap", rows[-1]["value"], limit,
                            large_dev_tol - final_gap)
            tracks["large_dev"] = {
                "f": str(f), "p": str(p), "limit": limit, "rows": rows,
                "final_relative_gap": final_gap, "tolerance": large_dev_tol,
            }

    # --- moderate-deviation track --------------------------------------------
    target_mod = math.sqrt(float(p * (1 - p)) / (2 * math.pi))
    rows, prev_gap = [], None
    for n in schedule:
        k = _moderate_k(n, p)
        if k < 1:
            continue
        run.points += 1
        alpha = p * n - k  # exact rational offset, n^(2/3) up to flooring
        B = lower_tail_exact(n, k, p, method="auto", dps=60)
        exp_nd = _mp_bracket(
            lambda n=n, k=k: mpmath.exp(_entropy_log_mp(n, k, a, c)),
            dps=60)
        scale = _mp_bracket(
            lambda alpha=alpha, n=n: _mpf_frac(alpha) / mpmath.sqrt(n),
            dps=60)
        value = float((B * exp_nd * scale).value)
        gap = abs(value - target_mod)
        rows.append({"n": n, "k": k, "value": value, "limit": target_mod,
                     "gap": gap})
        if prev_gap is not None and not gap < prev_gap:
            run.violate((n, k, p), "moderate-gap-shrinking", gap, prev_gap,
                        prev_gap - gap)
        prev_gap = gap
    if rows:
        final_rel = rows[-1]["gap"] / target_mod
        if final_rel > moderate_tol:
            run.violate((rows[-1]["n"], rows[-1]["k"], p),
                        "moderate-final-gap", rows[-1]["value"], target_mod,
                        moderate_tol - final_rel)
        tracks["moderate"] = {
            "p": str(p), "limit": target_mod, "rows": rows,
            "final_relative_gap": final_rel, "tolerance": moderate_tol,
        }

    # --- central-limit track --------------------------------------------------
    xq = _as_fraction(clt_x)
    rows, prev_gap = [], None
    for n in schedule:
        k = _clt_k(n, p, xq)
        if not 1 <= k <= n - 1:
            continue
        run.points += 1
        value = _clt_lower_value(n, k, p)
        x_eff = (float(p) * n - k) / math.sqrt(float(p * (1 - p)) * n)
        target = tail_coeff_lower(x_eff) * math.exp(-x_eff * x_eff / 2)
        gap = abs(value - target)
        rows.append({"n": n, "k": k, "value": value, "target": target,
                     "x_eff": x_eff, "gap": gap})
        if prev_gap is not None and not gap < prev_gap:
            run.violate((n, k, p), "clt-gap-shrinking", gap, prev_gap,
                        prev_gap - gap)
        prev_gap = gap
    if rows:
        final_rel = rows[-1]["gap"] / rows[-1]["target"]
        if final_rel > clt_tol:
            run.violate((rows[-1]["n"], rows[-1]["k"], p), "clt-final-gap",
                        rows[-1]["value"], rows[-1]["target"],
                        clt_tol - final_rel)
        tracks["clt"] = {
            "p": str(p), "x": str(xq), "rows": rows,
            "final_relative_gap": final_rel, "tolerance": clt_tol,
        }

    return run.summary({"quantity": "convergence tracks", "tracks": tracks})
