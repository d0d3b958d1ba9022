"""Normal-comparison brackets for the binomial tail-to-term ratio.

With sigma = sqrt(npq) and x = |k - pn| / sigma, the scaled normal tail

    Y(x) = e^{x^2/2} integral_x^oo e^{-t^2/2} dt = e^{x^2/2} sqrt(2 pi) Phi(-x)

controls the upper tail Bbar(n,k,p) = P[X >= k] through

    k sqrt(q/(pn)) Y(x)  <=  Bbar/b  <=  k sqrt(q/(pn)) Y(x) e^E,
    E = min{ sqrt(pi/(8npq)), 1/|k - pn| },

valid for pn < k <= n, where b = b(n,k,p) is the probability mass at k.
E <= 3/2 whenever pn < k <= n - 1, so the bracket width never exceeds
e^{3/2}.  Replacing Y by its elementary envelope (the Mills coefficient
pair of :mod:`binotail.gauss`) and the mass by its Stirling band yields a
fully integral-free enclosure of the tail probability itself:

    sqrt(qk/(pm)) phi_-(n,k) ltilde(x) e^{-nD}
        < Bbar < sqrt(qk/(pm)) phi_+(n,k) utilde(x) e^{E} e^{-nD},

for pn < k <= n - 1, with m = n - k and D = D(k/n || p); the lower-tail
analog for 1 <= k < pn swaps the prefactor to sqrt(pm/(qk)).  The hi/lo
width of that enclosure is at most 2 e^{3929/2600} ~ 9.06391 everywhere.

The width of the ratio bracket above behaves like 1 + gamma_1/n along
k = fn, while the algebraic ratio bracket (ratio_bounds applied to the
reflected parameters) behaves like 1 + gamma_2/n; gamma_2/gamma_1
decreases in f and crosses 1 at f* = p(q + sqrt(4 + q^2))/2, so the
normal-comparison bracket wins for f just above p and the algebraic one
wins for f above f*.  crossover_f_star exposes f* and both rate
evaluators.

Y is evaluated through the certified Mills-ratio oracle, so every bracket
endpoint here is a genuine bound up to the stated tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bounds import Interval, _backend, _neg_n_entropy_raw, stirling_band
from .exact import BinomialParams, mills_ratio
from .gauss import mills_coeff_lower, mills_coeff_upper

__all__ = [
    "McKayContext",
    "CrossoverRates",
    "mckay_context",
    "mckay_Y",
    "mckay_E",
    "mckay_ratio_bounds",
    "mckay_tail_bounds",
    "crossover_f_star",
]


@dataclass(frozen=True)
class McKayContext:
    """The four scalars the normal-comparison bracket is built from."""

    sigma: float
    x: float
    Y: float
    E: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and self.x >= 0 and self.Y > 0 and self.E > 0):
            raise ValueError(
                f"invalid context: sigma={self.sigma!r} x={self.x!r} "
                f"Y={self.Y!r} E={self.E!r}"
            )


def _deviation(params: BinomialParams) -> Fraction:
    """k - pn as an exact rational."""
    return Fraction(params.k) - params.p * params.n


def mckay_Y(x, tol=1e-12, dps: Optional[int] = None):
    """Scaled normal tail Y(x) = e^{x^2/2} sqrt(2 pi) Phi(-x), x >= 0.

    Certified through the Mills-ratio oracle to absolute error tol (which
    must stay above what the output format can represent).  With dps the
    result is an mpf at that precision instead of a double.
    """
    tq = Fraction(tol)
    if tq <= 0:
        raise ValueError("tol must be positive")
    floor = Fraction(1, 10**15) if dps is None else Fraction(1, 10 ** (dps + 2))
    if tq < floor:
        raise ValueError(
            f"tol {tol} unachievable for the requested output precision"
        )
    res = mills_ratio(x, tol=tq / 2)
    ops, ctx = _backend(dps)
    with ctx:
        return ops.convert(res.value)


def mckay_E(params: BinomialParams, dps: Optional[int] = None):
    """Correction exponent E = min{ sqrt(pi/(8npq)), 1/|k - pn| }.

    At k = pn the second term has a pole and the bracket degenerates, so
    that point is rejected.  E <= 3/2 whenever pn < k <= n - 1.
    """
    delta = _deviation(params)
    if delta == 0:
        raise ValueError(
            "k = p n: the 1/|k - p n| term has a pole at the mean"
        )
    ops, ctx = _backend(dps)
    with ctx:
        npq = ops.convert(params.n * params.p * params.q)
        first = ops.sqrt(ops.pi() / (8 * npq))
        second = 1 / ops.convert(abs(delta))
        return min(first, second)


def mckay_context(params: BinomialParams, tol=1e-12,
                  dps: Optional[int] = None) -> McKayContext:
    """sigma, x, Y(x), E for the given parameters (k = pn rejected)."""
    delta = _deviation(params)
    if delta == 0:
        raise ValueError(
            "k = p n: the 1/|k - p n| term has a pole at the mean"
        )
    ops, ctx = _backend(dps)
    with ctx:
        sigma = ops.sqrt(ops.convert(params.n * params.p * params.q))
        x = ops.convert(abs(delta)) / sigma
    return McKayContext(
        sigma=sigma,
        x=x,
        Y=mckay_Y(x, tol=tol, dps=dps),
        E=mckay_E(params, dps=dps),
    )


def mckay_ratio_bounds(params: BinomialParams, tol=1e-12,
                       dps: Optional[int] = None) -> Interval:
    """Bracket of Bbar(n,k,p)/b(n,k,p): [k sqrt(q/(pn)) Y, same x e^E].

    Requires pn < k <= n; below the mean the bracket does not apply.
    """
    if Fraction(params.k) <= params.p * params.n:
        raise ValueError(
            "ratio bracket needs k > p*n (upper-tail parameters); got "
            f"k={params.k}, p*n={float(params.p * params.n)}"
        )
    context = mckay_context(params, tol=tol, dps=dps)
    ops, ctx = _backend(dps)
    with ctx:
        pref = params.k * ops.sqrt(ops.convert(params.q / (params.p * params.n)))
        lo = pref * context.Y
        return Interval(lo=lo, hi=lo * ops.exp(context.E))


def mckay_tail_bounds(params: BinomialParams, tail: str = "upper",
                      dps: Optional[int] = None) -> Interval:
    """Integral-free enclosure of the tail probability itself.

    tail="upper" encloses Bbar(n,k,p) = P[X >= k] for pn < k <= n - 1;
    tail="lower" encloses B(n,k,p) = P[X <= k] for 1 <= k < pn, via the
    same display with the prefactor inverted.  The hi/lo width is at most
    2 e^{3929/2600} ~ 9.06391 on every admissible point.
    """
    if tail not in ("upper", "lower"):
        raise ValueError(f"tail must be 'upper' or 'lower', got {tail!r}")
    delta = _deviation(params)
    n, k, m = params.n, params.k, params.n - params.k
    if tail == "upper":
        if not (delta > 0 and k <= n - 1):
            raise ValueError(
                f"upper-tail enclosure needs p*n < k <= n-1; got k={k}"
            )
        pref_sq = params.q * k / (params.p * m)
    else:
        if not (k >= 1 and delta < 0):
            raise ValueError(
                f"lower-tail enclosure needs 1 <= k < p*n; got k={k}"
            )
        pref_sq = params.p * m / (params.q * k)
    band = stirling_band(n, k, dps=dps)
    E = mckay_E(params, dps=dps)
    ops, ctx = _backend(dps)
    with ctx:
        sigma = ops.sqrt(ops.convert(params.n * params.p * params.q))
        x = ops.convert(abs(delta)) / sigma
        pref = ops.sqrt(ops.convert(pref_sq))
        damp = ops.exp(_neg_n_entropy_raw(
            ops, ops.convert(n), ops.convert(k), ops.convert(params.p)))
        lo = pref * band.lo * mills_coeff_lower(x, dps=dps) * damp
        hi = pref * band.hi * mills_coeff_upper(x, dps=dps) * ops.exp(E) * damp
        return Interval(lo=lo, hi=hi)


@dataclass(frozen=True)
class CrossoverRates:
    """f* = p(q + sqrt(4+q^2))/2 with the two width-rate evaluators.

    Along k = fn the normal-comparison ratio bracket has width
    1 + gamma1/n + O(n^-2) and the algebraic one 1 + gamma2/n + O(n^-2);
    gamma2/gamma1 decreases in f on (p, 1] and equals 1 exactly at f*.
    """

    p: float
    f_star: float

    def __float__(self) -> float:
        return self.f_star

    def _check(self, f) -> float:
        f = float(f)
        if not self.p < f <= 1:
            raise ValueError(
                f"rates are defined for p < f <= 1, got f={f} with p={self.p}"
            )
        return f

    def gamma1(self, f) -> float:
        """Width rate of the normal-comparison bracket: 1/(f - p)."""
        f = self._check(f)
        return 1 / (f - self.p)

    def gamma2(self, f) -> float:
        """Width rate of the algebraic bracket: (1-f) p^2 / (f (f-p)^2)."""
        f = self._check(f)
        return (1 - f) * self.p**2 / (f * (f - self.p) ** 2)


def crossover_f_star(p, dps: Optional[int] = None) -> CrossoverRates:
    """Tightness crossover f* for the two upper-tail ratio brackets.

    For p < f < f* the normal-comparison bracket is asymptotically
    tighter (gamma2 > gamma1); for f* < f <= 1 the algebraic bracket is
    (gamma2 < gamma1).  The returned object floats to f* and carries the
    gamma evaluators.
    """
    ops, ctx = _backend(dps)
    with ctx:
        pc = ops.convert(Fraction(p) if not isinstance(p, float) else p)
        if not 0 < pc < 1:
            raise ValueError(f"p must be in (0, 1), got {p}")
        q = 1 - pc
        f_star = pc * (q + ops.sqrt(4 + q * q)) / 2
    return CrossoverRates(p=float(pc), f_star=float(f_star))
