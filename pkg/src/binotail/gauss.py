"""Gaussian tail coefficients bracketing Phi(-x) up to the factor e^{-x^2/2}.

For x >= 0 write Phi(-x) for the standard normal upper tail probability.
This module evaluates the two elementary coefficients

    ell(x)     = (sqrt(4 + x^2) - x) / (2 sqrt(2 pi)),
    upsilon(x) = (2 - x) / sqrt(2 pi)   for x <= 1,
                 1 / (x sqrt(2 pi))     for x >= 1,

which satisfy the two-sided enclosure

    ell(x) e^{-x^2/2}  <  Phi(-x)  <  upsilon(x) e^{-x^2/2},

together with the companion cap Phi(-x) <= sqrt(pi/2) ell(x) e^{-x^2/2},
which is attained exactly at x = 0.  The coefficients obey
ell < upsilon <= 2 ell pointwise, so the bracket width never exceeds a
factor of two, and both sqrt(2 pi) x ell(x) -> 1 and upsilon/ell -> 1 as
x -> infinity, so the bracket collapses onto the Mills asymptotics.

ell is evaluated through the reciprocal form 2 / (sqrt(4 + x^2) + x),
which is immune to the catastrophic cancellation the difference form
suffers for large x.  The "mills" variants drop the 1/sqrt(2 pi) factor
and bracket the scaled tail Y(x) = e^{x^2/2} integral_x^oo e^{-t^2/2} dt
directly; they are the prefactors used by the tail-ratio brackets built
from the local central limit estimates.

Float evaluation is exact at the two seams: upsilon's branches agree
bitwise at x = 1, and at x = 0 the identities upsilon(0) == 2 ell(0) and
ell(0) == 1/sqrt(2 pi) hold without rounding slack.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import Interval, _backend

__all__ = [
    "GaussianBoundPair",
    "tail_coeff_lower",
    "tail_coeff_upper",
    "coeff_pair",
    "tail_bracket",
    "mills_coeff_lower",
    "mills_coeff_upper",
]


@dataclass(frozen=True)
class GaussianBoundPair:
    """Coefficient pair with ell e^{-x^2/2} < Phi(-x) <= upsilon e^{-x^2/2}."""

    ell: float
    upsilon: float
    x: float

    def __post_init__(self) -> None:
        if not self.ell <= self.upsilon <= 2 * self.ell:
            raise ValueError(
                "coefficient pair must satisfy ell <= upsilon <= 2 ell, got "
                f"ell={self.ell!r} upsilon={self.upsilon!r}"
            )

    @property
    def width_ratio(self) -> float:
        """upsilon / ell, the multiplicative width of the bracket."""
        return self.upsilon / self.ell


def _checked(ops, x):
    x = ops.convert(x)
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    return x


def mills_coeff_lower(x, dps=None):
    """sqrt(2 pi) ell(x) = (sqrt(4 + x^2) - x) / 2, a lower bound for Y(x).

    Uses the equivalent form 2 / (sqrt(4 + x^2) + x) to avoid cancellation.
    """
    ops, ctx = _backend(dps)
    with ctx:
        x = _checked(ops, x)
        return 2 / (ops.sqrt(4 + x * x) + x)


def mills_coeff_upper(x, dps=None):
    """sqrt(2 pi) upsilon(x) = 2 - x for x <= 1, 1/x for x >= 1.

    Upper bound for Y(x); the two branches agree at x = 1.
    """
    ops, ctx = _backend(dps)
    with ctx:
        x = _checked(ops, x)
        if x <= 1:
            return 2 - x
        return 1 / x


def tail_coeff_lower(x, dps=None):
    """ell(x), the coefficient of the Gaussian tail lower bound."""
    ops, ctx = _backend(dps)
    with ctx:
        x = _checked(ops, x)
        return 2 / ((ops.sqrt(4 + x * x) + x) * ops.sqrt(2 * ops.pi()))


def tail_coeff_upper(x, dps=None):
    """upsilon(x), the coefficient of the Gaussian tail upper bound."""
    ops, ctx = _backend(dps)
    with ctx:
        x = _checked(ops, x)
        root = ops.sqrt(2 * ops.pi())
        if x <= 1:
            return (2 - x) / root
        return 1 / (x * root)


def coeff_pair(x, dps=None) -> GaussianBoundPair:
    """Both tail coefficients at x, packaged with their invariant checked."""
    return GaussianBoundPair(
        ell=tail_coeff_lower(x, dps=dps),
        upsilon=tail_coeff_upper(x, dps=dps),
        x=x,
    )


def tail_bracket(x, dps=None) -> Interval:
    """Enclosure [ell e^{-x^2/2}, upsilon e^{-x^2/2}] for Phi(-x).

    Both ends are strict for every x >= 0.  For x large enough that the
    damping factor e^{-x^2/2} underflows the
    linear endpoints degrade to zero; callers needing the far tail should
    work with the coefficients and track -x^2/2 in the log domain.
    """
    ops, ctx = _backend(dps)
    with ctx:
        xc = _checked(ops, x)
        damp = ops.exp(-(xc * xc) / 2)
        return Interval(
            lo=tail_coeff_lower(x, dps=dps) * damp,
            hi=tail_coeff_upper(x, dps=dps) * damp,
        )
