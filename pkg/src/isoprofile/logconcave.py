"""Sharp isoperimetric profile for log-concave measures on convex bodies.

For a log-concave probability measure on a convex body and a set S with
x = mu(S) <= 1/2,

    diam(K) * mu+(S) >= x * G(1/x),

where G is parametrised by an exponential tilt gamma > 0:

    x(gamma)   = (e^g (g - 1) + 1) / (e^g - 1)^2
    G(gamma)   = g^2 e^g / (e^g (g - 1) + 1)
    x*G        = g^2 e^g / (e^g - 1)^2 = (g / (2 sinh(g/2)))^2

and G(2) = 2 at x = 1/2 (gamma = 0).  The map gamma -> x is a decreasing
bijection of (0, inf) onto (0, 1/2), and gamma is also the slope
d/dx [x G(1/x)].

Numerics: the numerator e^g (g - 1) + 1 vanishes to second order at 0, so
below ``SERIES_CUTOFF`` it is summed as its Taylor series (all terms
positive).  Above ``LARGE_GAMMA`` everything is rewritten in terms of
e^{-g} so nothing overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._numerics import find_root
from .errors import DomainError

SERIES_CUTOFF = 1.0
LARGE_GAMMA = 30.0
NEAR_HALF_GAMMA = 1.0  # below this x is formed as 1/2 - (1/2 - x)
GAMMA_LO = 1e-12
GAMMA_HI = 800.0


@dataclass(frozen=True)
class ProfilePoint:
    """A point (x, gamma, G(1/x)) on the log-concave profile."""

    x: float
    gamma: float
    g: float

    @property
    def xg(self) -> float:
        return self.x * self.g


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise DomainError(f"gamma must be finite and > 0, got {gamma!r}")
    return gamma


def _check_x(x: float, *, open_right: bool = False) -> float:
    x = float(x)
    upper_ok = x < 0.5 if open_right else x <= 0.5
    if not (math.isfinite(x) and x > 0.0 and upper_ok):
        interval = "(0, 1/2)" if open_right else "(0, 1/2]"
        raise DomainError(f"x must lie in {interval}, got {x!r}")
    return x


def _numerator(g: float) -> float:
    """e^g (g - 1) + 1, accurate for all g in (0, LARGE_GAMMA]."""
    if g < SERIES_CUTOFF:
        # sum_{k>=2} (k - 1) g^k / k!
        term = g * g / 2.0
        total = term
        k = 2
        while True:
            k += 1
            term *= g / k
            total += (k - 1) * term
            if term * (k - 1) < 1e-17 * total:
                return total
    return g * math.exp(g) - math.expm1(g)


def _half_gap_over_gamma(g: float) -> float:
    """(1/2 - x(g)) / g for small g (no underflow as g -> 0)."""
    # 1/2 - x = (e^{2g} - 2 g e^g - 1) / (2 (e^g - 1)^2)
    #         = sum_{k>=3} (2^k - 2k) g^k / k!  /  (2 (e^g - 1)^2)
    term = 1.0 / 6.0  # g^{k-3} / k! at k = 3
    total = (8 - 6) * term
    k = 3
    while True:
        k += 1
        term *= g / k
        c = (2.0 ** k - 2 * k) * term
        total += c
        if c < 1e-17 * total:
            break
    em1_over_g = math.expm1(g) / g
    return total / (2.0 * em1_over_g * em1_over_g)


def half_gap(gamma: float) -> float:
    """1/2 - x(gamma), computed without cancellation near gamma = 0."""
    g = _check_gamma(gamma)
    if g < SERIES_CUTOFF:
        return g * _half_gap_over_gamma(g)
    if g <= LARGE_GAMMA:
        em1 = math.expm1(g)
        return (math.expm1(2 * g) - 2 * g * math.exp(g)) / (2 * em1 * em1)
    return 0.5 - x_of_gamma(g)


def log_x_of_gamma(gamma: float) -> float:
    """log x(gamma); finite even where x itself underflows."""
    g = _check_gamma(gamma)
    if g > LARGE_GAMMA:
        q = math.exp(-g)
        return math.log(g - 1.0 + q) - g - 2.0 * math.log1p(-q)
    em1 = math.expm1(g)
    return math.log(_numerator(g)) - 2.0 * math.log(em1)


def x_of_gamma(gamma: float) -> float:
    """Set size x in (0, 1/2) matching tilt gamma; strictly decreasing in gamma.

    Underflows to 0.0 for gamma above roughly 745; use ``log_x_of_gamma``
    there.
    """
    g = _check_gamma(gamma)
    if g < NEAR_HALF_GAMMA:
        return 0.5 - half_gap(g)
    if g > LARGE_GAMMA:
        if g > 708.0:
            return math.exp(log_x_of_gamma(g))
        q = math.exp(-g)
        d = -math.expm1(-g)
        return (g - 1.0 + q) * q / (d * d)
    em1 = math.expm1(g)
    return _numerator(g) / (em1 * em1)


def g_of_gamma(gamma: float) -> float:
    """G(1/x) at tilt gamma; increases from 2 (gamma -> 0+) without bound."""
    g = _check_gamma(gamma)
    if g > LARGE_GAMMA:
        return g * g / (g - 1.0 + math.exp(-g))
    return g * g * math.exp(g) / _numerator(g)


def xg_of_gamma(gamma: float) -> float:
    """x * G(1/x) at tilt gamma, i.e. (gamma / (2 sinh(gamma/2)))^2."""
    g = _check_gamma(gamma)
    if g > 1400.0:
        return 0.0
    r = g / (2.0 * math.sinh(0.5 * g))
    return r * r


def gamma_of_x(x: float) -> float:
    """Invert x(gamma).  Returns 0.0 at x = 1/2.

    Brent's method in u = log(gamma) on [log 1e-12, log 800]; close to 1/2 the
    equation 1/2 - x(gamma) = 1/2 - x is solved instead so the answer keeps
    full relative precision in gamma.
    """
    x = _check_x(x)
    if x == 0.5:
        return 0.0
    if x >= 0.25:
        target = 0.5 - x  # exact in binary floating point for x in [1/4, 1/2]
        lo = min(GAMMA_LO, 3.0 * target)

        def f(u: float) -> float:
            return half_gap(math.exp(u)) - target
    else:
        lo = GAMMA_LO
        target = math.log(x)

        def f(u: float) -> float:
            return log_x_of_gamma(math.exp(u)) - target

    u = find_root(f, math.log(lo), math.log(GAMMA_HI))
    return math.exp(u)


def profile_g(x: float) -> ProfilePoint:
    """The full profile point at set size x in (0, 1/2].

    Sizes above 1/2 are rejected; fold them with min(x, 1 - x) first.
    """
    x = _check_x(x)
    if x == 0.5:
        return ProfilePoint(x=0.5, gamma=0.0, g=2.0)
    gamma = gamma_of_x(x)
    return ProfilePoint(x=x, gamma=gamma, g=g_of_gamma(gamma))


def xg_of_x(x: float) -> float:
    """x * G(1/x) for x in (0, 1/2]."""
    x = _check_x(x)
    if x == 0.5:
        return 1.0
    return xg_of_gamma(gamma_of_x(x))


def xg_slope(x: float) -> float:
    """d/dx [x G(1/x)] on (0, 1/2); equals the tilt gamma(x)."""
    return gamma_of_x(_check_x(x, open_right=True))
