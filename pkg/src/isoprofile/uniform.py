"""Dimension-n profile for the uniform distribution on a convex body.

In dimension 1 the sharp bound is x G(1/x) = 1.  For n >= 2 the extremal
bodies are truncated cones with slope gamma >= 0, and with a = (1+g)^{n-1},
b = (1+g)^n:

    x     = (a (g (n-1) - 1) + 1) / ((a - 1)(b - 1))
    x*G   = g n / (b - 1) * [a g (n-1) / (a - 1)]^{1 - 1/n}

with G(2) = 2 at gamma = 0.  As n -> inf with gamma = c/n both converge to
the log-concave profile at tilt c.

Everything is evaluated through L = log1p(gamma) so (1+gamma)^n never
overflows (n up to 1e5 is exercised by the tests).  The numerator of x
loses its leading terms to cancellation when (n-1) gamma < 1; there it is
summed as the polynomial
    sum_{k>=2} C(n-1, k-1) * n (k-1)/k * gamma^k,
whose terms are all non-negative.  Close to x = 1/2 the gap 1/2 - x is
evaluated directly from the exact integer coefficients of its numerator,
which starts at gamma^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import logconcave
from ._numerics import find_root, log_expm1
from .errors import DomainError

GAMMA_LO = 1e-12


@dataclass(frozen=True)
class UniformProfilePoint:
    n: int
    x: float
    gamma: float
    g: float

    @property
    def xg(self) -> float:
        return self.x * self.g


def _check_n(n: int, minimum: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DomainError(f"dimension n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise DomainError(f"gamma must be finite and > 0, got {gamma!r}")
    return gamma


def _log_numerator(g: float, n: int) -> float:
    """log of (1+g)^{n-1} (g (n-1) - 1) + 1."""
    m = n - 1
    if m * g < 1.0:
        p = float(m)  # C(m, k-1) g^{k-2} at k = 2; g^2 is factored out
        total = p * n / 2.0
        k = 2
        while True:
            p *= g * (m - k + 1) / k
            k += 1
            if p == 0.0:
                break
            c = p * n * (k - 1) / k
            total += c
            if c < 1e-17 * total:
                break
        return 2.0 * math.log(g) + math.log(total)
    mL = m * math.log1p(g)
    return mL + math.log((g * m - 1.0) + math.exp(-mL))


def log_x_of_gamma_n(gamma: float, n: int) -> float:
    g = _check_gamma(gamma)
    n = _check_n(n, 2)
    L = math.log1p(g)
    return _log_numerator(g, n) - log_expm1((n - 1) * L) - log_expm1(n * L)


HALF_SERIES_T = 0.5  # half-gap series used while n * gamma <= this
_HALF_TERMS = 60


@lru_cache(maxsize=64)
def _half_gap_coeffs(n: int) -> tuple[float, ...]:
    """d_k = c_k / n^k for k >= 3, c_k the integer g^k coefficients of
    (a - 1)(b - 1) - 2 (a (g m - 1) + 1); the k < 3 ones vanish."""
    m = n - 1
    out = []
    for k in range(3, min(2 * n - 1, _HALF_TERMS) + 1):
        cross = sum(math.comb(m, i) * math.comb(n, k - i) for i in range(1, k))
        c = cross - 2 * (m * math.comb(m, k - 1) - math.comb(m, k))
        out.append(c / n ** k)
    return tuple(out)


def half_gap_n(gamma: float, n: int) -> float:
    """1/2 - x_of_gamma_n(gamma, n), without cancellation near gamma = 0."""
    g = _check_gamma(gamma)
    n = _check_n(n, 2)
    t = n * g
    if t > HALF_SERIES_T:
        return 0.5 - x_of_gamma_n(g, n)
    series = 0.0
    for d in reversed(_half_gap_coeffs(n)):
        series = series * t + d
    L = math.log1p(g)
    # numerator / g^3 = n^3 * series; denominator / g^2 = 2 (a - 1)/g (b - 1)/g
    return g * n ** 3 * series / (2.0 * (math.expm1((n - 1) * L) / g) * (math.expm1(n * L) / g))


def x_of_gamma_n(gamma: float, n: int) -> float:
    """Set size of the cone cut with slope gamma in dimension n; decreasing in gamma."""
    g = _check_gamma(gamma)
    n = _check_n(n, 2)
    if n * g <= HALF_SERIES_T:
        return 0.5 - half_gap_n(g, n)
    return math.exp(log_x_of_gamma_n(g, n))


def xg_of_gamma_n(gamma: float, n: int) -> float:
    """x * G(1/x) at cone slope gamma in dimension n >= 2."""
    g = _check_gamma(gamma)
    n = _check_n(n, 2)
    m = n - 1
    L = math.log1p(g)
    lg = math.log(g)
    log_first = lg + math.log(n) - log_expm1(n * L)
    log_bracket = m * L + lg + math.log(m) - log_expm1(m * L)
    return math.exp(log_first + (1.0 - 1.0 / n) * log_bracket)


def _check_x(x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and 0.0 < x <= 0.5):
        raise DomainError(f"x must lie in (0, 1/2], got {x!r}")
    return x


def gamma_of_x_n(x: float, n: int) -> float:
    """Invert x_of_gamma_n; returns 0.0 at x = 1/2."""
    x = _check_x(x)
    n = _check_n(n, 2)
    if x == 0.5:
        return 0.0
    if x >= 0.25:
        target = 0.5 - x  # exact for x in [1/4, 1/2]

        def f(u: float) -> float:
            return target - half_gap_n(math.exp(u), n)

        lo = min(GAMMA_LO, target / n)
    else:
        target = math.log(x)

        def f(u: float) -> float:
            return log_x_of_gamma_n(math.exp(u), n) - target

        lo = GAMMA_LO
    while f(math.log(lo)) < 0.0 and lo > 1e-300:
        lo *= 1e-6
    hi = 1.0
    while f(math.log(hi)) > 0.0:
        hi *= 2.0
    return math.exp(find_root(f, math.log(lo), math.log(hi)))


def profile_g_n(x: float, n: int) -> UniformProfilePoint:
    """Uniform-distribution profile point at set size x in dimension n >= 1."""
    x = _check_x(x)
    n = _check_n(n, 1)
    if n == 1:
        return UniformProfilePoint(n=1, x=x, gamma=0.0, g=1.0 / x)
    if x == 0.5:
        return UniformProfilePoint(n=n, x=0.5, gamma=0.0, g=2.0)
    gamma = gamma_of_x_n(x, n)
    return UniformProfilePoint(n=n, x=x, gamma=gamma, g=xg_of_gamma_n(gamma, n) / x)


def xg_of_x_n(x: float, n: int) -> float:
    """x * G_n(1/x)."""
    x = _check_x(x)
    n = _check_n(n, 1)
    if n == 1 or x == 0.5:
        return 1.0
    return xg_of_gamma_n(gamma_of_x_n(x, n), n)


def xg_slope_n(x: float, n: int) -> float:
    """d/dx [x G_n(1/x)] on (0, 1/2).

    By the envelope theorem this is the x-derivative of the cone functional
    g n (1 + x(b - 1))^{1-1/n} / (b - 1) at the optimal slope, which is
    g (n-1) (1 + x((1+g)^n - 1))^{-1/n}.  Zero in dimension 1.
    """
    x = _check_x(x)
    n = _check_n(n, 1)
    if x == 0.5:
        raise DomainError("slope is taken on the open interval (0, 1/2)")
    if n == 1:
        return 0.0
    g = gamma_of_x_n(x, n)
    bm1 = math.expm1(n * math.log1p(g)) if n * math.log1p(g) < 700 else math.inf
    if math.isinf(bm1):
        log_inner = math.log(x) + n * math.log1p(g)
    else:
        log_inner = math.log1p(x * bm1)
    return g * (n - 1) * math.exp(-log_inner / n)


def small_x_ratio(x: float, n: int) -> float:
    """G_n(1/x) / (n / x^{1/n}); tends to 1 as x -> 0+."""
    p = profile_g_n(x, n)
    return p.g * x ** (1.0 / n) / n


def regime_bounds(x: float, n: int) -> tuple[float, float]:
    """(lower, upper) sandwich for G_n(1/x) in the two size regimes.

    x <= 2^-n:  n/x^{1/n} / 2 <= G <= n/x^{1/n}
    x >  2^-n:  2 + log(1/(2x)) <= G <= 2 log2(1/x)
    """
    x = _check_x(x)
    n = _check_n(n, 1)
    if x <= 2.0 ** (-n):
        top = n / x ** (1.0 / n)
        return 0.5 * top, top
    return 2.0 + math.log(1.0 / (2.0 * x)), 2.0 * math.log2(1.0 / x)


def logconcave_gap(x: float, n: int) -> float:
    """G_n(1/x) - G(1/x); non-negative (the uniform bound dominates)."""
    return profile_g_n(x, n).g - logconcave.profile_g(x).g
