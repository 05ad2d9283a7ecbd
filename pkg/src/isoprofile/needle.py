"""One-dimensional needle instances and brute-force oracles for both profiles.

A needle is [0, 1] carrying a log-concave weight, either an exponential
tilt e^{gamma t} or a cone factor (1 + gamma t)^{n-1}.  It is split into
S1 = [0, s), B = [s, s+t], S2 = (s+t, 1] and the three-set functional

    ((1 - t) / t) * mu(B) / mu(K \\ B)

is compared with x G(1/x), x = mu(S1) / mu(K \\ B).  Both profiles are the
infimum of the t -> 0+ limit of this functional over the weight parameter;
the oracles here compute that infimum by scanning and golden-section
search, independently of the closed-form profile code.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from scipy.integrate import quad

from . import logconcave
from ._numerics import find_root, scan_and_refine
from .errors import DomainError, InfeasibleCut, OracleDisagreement

QUAD_ABS_TOL = 1e-13
QUAD_LIMIT = 2000  # subintervals; 21-point Kronrod rule => at most ~4e4 evaluations
AGREEMENT_TOL = 1e-9


class Family(enum.Enum):
    EXPONENTIAL_TILT = "exponential"
    LINEAR_POWER = "linear"


@dataclass(frozen=True)
class NeedleWeight:
    """Weight e^{gamma t} or (1 + gamma t)^{n-1} on [0, 1]."""

    family: Family
    gamma: float
    n: int = 1

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite, got {self.gamma!r}")
        if self.family is Family.LINEAR_POWER:
            if self.gamma <= -1.0:
                raise DomainError("cone weight needs 1 + gamma t > 0 on [0, 1], i.e. gamma > -1")
            if int(self.n) != self.n or self.n < 1:
                raise DomainError(f"n must be an integer >= 1, got {self.n!r}")

    @classmethod
    def exponential(cls, gamma: float) -> "NeedleWeight":
        return cls(Family.EXPONENTIAL_TILT, float(gamma))

    @classmethod
    def linear(cls, gamma: float, n: int) -> "NeedleWeight":
        return cls(Family.LINEAR_POWER, float(gamma), int(n))

    def log_density(self, t: float) -> float:
        if self.family is Family.EXPONENTIAL_TILT:
            return self.gamma * t
        return (self.n - 1) * math.log1p(self.gamma * t)

    def density(self, t: float) -> float:
        return math.exp(self.log_density(t))

    def mirrored(self) -> "NeedleWeight":
        """Weight of t -> 1 - t, up to a constant factor."""
        if self.family is Family.EXPONENTIAL_TILT:
            return NeedleWeight(self.family, -self.gamma)
        # 1 + g(1 - t) = (1 + g)(1 - g/(1+g) t)
        return NeedleWeight(self.family, -self.gamma / (1.0 + self.gamma), self.n)

    def total(self) -> float:
        return weighted_measure(self, 0.0, 1.0)


@dataclass(frozen=True)
class NeedleInstance:
    """A needle with cut s and separation t: S1 = [0,s), B = [s,s+t], S2 = (s+t,1].

    The width of S2 is formed as 1 - (s + t), so when S2 is very thin its
    mass carries a relative error of about eps / (1 - s - t).
    """

    weight: NeedleWeight
    s: float
    t: float

    def __post_init__(self):
        if not (self.s >= 0.0 and self.t >= 0.0 and self.s + self.t <= 1.0 + 1e-15):
            raise DomainError(f"need 0 <= s, 0 <= t, s + t <= 1; got s={self.s!r}, t={self.t!r}")

    def masses(self, method: str = "closed") -> tuple[float, float, float]:
        """(mu(S1), mu(B), mu(S2))."""
        w, s, t = self.weight, self.s, self.t
        end = min(s + t, 1.0)
        return (weighted_measure(w, 0.0, s, method),
                weighted_measure(w, s, end, method),
                weighted_measure(w, end, 1.0, method))

    @property
    def is_canonical(self) -> bool:
        m1, _, m2 = self.masses()
        return m1 <= m2

    def mass_fraction(self, method: str = "closed") -> float:
        """x = mu(S1) / mu(K \\ B)."""
        m1, _, m2 = self.masses(method)
        return m1 / (m1 + m2)

    def mirrored(self) -> "NeedleInstance":
        return NeedleInstance(self.weight.mirrored(), max(0.0, 1.0 - self.s - self.t), self.t)

    def canonical(self) -> "NeedleInstance":
        return self if self.is_canonical else self.mirrored()


def weighted_measure(weight: NeedleWeight, a: float, b: float, method: str = "closed") -> float:
    """Integral of the needle weight over [a, b] with 0 <= a <= b <= 1.

    ``method="closed"`` uses the antiderivative (written so that small gamma
    does not cancel); ``method="quadrature"`` integrates the density
    adaptively and is the independent cross-check.
    """
    if not (0.0 <= a <= b <= 1.0 + 1e-15):
        raise DomainError(f"need 0 <= a <= b <= 1, got [{a!r}, {b!r}]")
    if a == b:
        return 0.0
    if method == "quadrature":
        val, _ = quad(weight.density, a, b, epsabs=QUAD_ABS_TOL, epsrel=1e-13, limit=QUAD_LIMIT)
        return val
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    g = weight.gamma
    width = b - a
    if g == 0.0:
        return width
    if weight.family is Family.EXPONENTIAL_TILT:
        # (e^{gb} - e^{ga}) / g = e^{ga} (b - a) exprel(g (b - a))
        return math.exp(g * a) * width * _exprel(g * width)
    n = weight.n
    base = 1.0 + g * a
    # ((1+gb)^n - (1+ga)^n) / (g n) with 1 + gb = base (1 + y), y = g (b-a) / base;
    # z = n log1p(y) and the quotient is base^n exprel(z) (b-a)/base log1p(y)/y
    y = g * width / base
    z = n * math.log1p(y)
    return base ** (n - 1) * width * _exprel(z) * _log1p_rel(y)


def _exprel(z: float) -> float:
    """(e^z - 1) / z, equal to 1 at z = 0."""
    if abs(z) < 1e-5:
        return 1.0 + z * (0.5 + z / 6.0)
    return math.expm1(z) / z


def _log1p_rel(y: float) -> float:
    """log(1 + y) / y, equal to 1 at y = 0."""
    if abs(y) < 1e-5:
        return 1.0 - y * (0.5 - y / 3.0)
    return math.log1p(y) / y


def cut_for_x(weight: NeedleWeight, x: float, t: float) -> float:
    """Cut s with mu([0, s)) = x mu(K \\ B) where B = [s, s + t].

    The mass equation is strictly increasing in s, so a root exists for every
    x in (0, 1/2] as long as t < 1; t >= 1 raises InfeasibleCut.
    """
    x, t = float(x), float(t)
    if not (0.0 < x <= 0.5):
        raise DomainError(f"x must lie in (0, 1/2], got {x!r}")
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if t >= 1.0:
        raise InfeasibleCut(f"separation t={t!r} leaves no room for S1 and S2")
    total = weight.total()

    def phi(s: float) -> float:
        # mu(K \ B) is summed from its two pieces; total - mu(B) would cancel
        left = weighted_measure(weight, 0.0, s)
        right = weighted_measure(weight, min(s + t, 1.0), 1.0)
        return ((1.0 - x) * left - x * right) / total

    hi = 1.0 - t
    f_lo, f_hi = phi(0.0), phi(hi)
    if not (f_lo < 0.0 < f_hi):
        raise InfeasibleCut(f"no cut realises x={x!r} with t={t!r}")
    # S1 can be very thin, so the cut needs relative rather than absolute precision
    return find_root(phi, 0.0, hi, xtol=1e-300)


def make_instance(weight: NeedleWeight, x: float, t: float) -> NeedleInstance:
    return NeedleInstance(weight, cut_for_x(weight, x, t), t)


def exp_cut_closed_form(gamma: float, x: float, t: float) -> float:
    """Cut position for the exponential tilt from e^{gs} - 1 = x(e^g - e^{gt}) / (1 + x(e^{gt} - 1))."""
    if gamma == 0.0:
        return x * (1.0 - t)
    # e^g - e^{gt} = e^{gt} (e^{g(1-t)} - 1)
    rhs = x * math.exp(gamma * t) * math.expm1(gamma * (1.0 - t)) / (1.0 + x * math.expm1(gamma * t))
    return math.log1p(rhs) / gamma


def three_set_functional(inst: NeedleInstance, x: float | None = None,
                         method: str = "closed") -> float:
    """((1 - t)/t) * mu(B) / mu(K \\ B) for a canonical instance with t > 0.

    method:
      "closed"     measures from antiderivatives
      "quadrature" measures from adaptive quadrature
      "formula"    exponential tilt only; the reduced expression
                   (1 + x(e^g - 1)) ((1-t)/t) (e^{gt} - 1)/(e^g - e^{gt}),
                   with x taken from the instance when not given.
    """
    t = inst.t
    if t <= 0.0:
        raise DomainError("t must be > 0; use limit_functional for the t -> 0+ limit")
    if method == "formula":
        if inst.weight.family is not Family.EXPONENTIAL_TILT:
            raise DomainError("the reduced formula exists only for the exponential tilt")
        if x is None:
            x = inst.mass_fraction()
        g = inst.weight.gamma
        # ((1-t)/t) (e^{gt} - 1)/(e^g - e^{gt}) = exprel(gt) / (e^{gt} exprel(g(1-t)))
        ratio = _exprel(g * t) / (math.exp(g * t) * _exprel(g * (1.0 - t)))
        return (1.0 + x * math.expm1(g)) * ratio
    m1, mb, m2 = inst.masses(method)
    return (1.0 - t) / t * mb / (m1 + m2)


def limit_functional(gamma: float, x: float) -> float:
    """t -> 0+ limit of the exponential-tilt functional: gamma x + gamma/(e^gamma - 1).

    At gamma = 0 the second term tends to 1 and the first to 0, so the value
    is 1 for every x.
    """
    x = float(x)
    if not (0.0 < x <= 0.5):
        raise DomainError(f"x must lie in (0, 1/2], got {x!r}")
    g = float(gamma)
    if g == 0.0:
        return 1.0
    return g * x + g / math.expm1(g)


def linear_limit_functional(gamma: float, x: float, n: int) -> float:
    """t -> 0+ limit for the cone weight: density at the cut over total mass.

    The cut is located by root-finding on the weighted measure, not by the
    closed-form inverse.
    """
    w = NeedleWeight.linear(gamma, n)
    s = cut_for_x(w, x, 0.0)
    return w.density(s) / w.total()


def _stationary_gamma(x: float) -> float:
    """Root of d/dgamma [gamma x + gamma/(e^gamma - 1)] = x + (e^g - 1 - g e^g)/(e^g - 1)^2."""
    if x == 0.5:
        return 0.0

    def dfun(g: float) -> float:
        if g < 1e-2:
            # d/dg [g/(e^g - 1)] = -1/2 + g/6 - g^3/180 + g^5/5040 - ...
            g2 = g * g
            return x - 0.5 + g * (1.0 / 6.0 - g2 * (1.0 / 180.0 - g2 / 5040.0))
        if g > 40.0:
            q = math.exp(-g)
            return x + (q - q * q - g * q) / (1.0 - q) ** 2
        em1 = math.expm1(g)
        return x + (em1 - g * math.exp(g)) / (em1 * em1)

    # derivative is x - 1/2 < 0 at 0+ and tends to x > 0 at infinity
    lo = min(1e-6, 3.0 * (0.5 - x))
    return find_root(dfun, lo, 800.0, xtol=1e-300)


def minimize_exp_family(x: float, *, with_gamma: bool = False):
    """inf over gamma of the exponential-tilt limit functional at set size x.

    Two routes: (a) solve the stationarity equation for gamma, (b) scan
    gamma in [-50, 50] and refine by golden section.  They must agree to
    1e-9, otherwise OracleDisagreement is raised.  Returns the brute-force
    value (and the minimising gamma when ``with_gamma``).
    """
    x = float(x)
    if not (0.0 < x <= 0.5):
        raise DomainError(f"x must lie in (0, 1/2], got {x!r}")
    g_a = _stationary_gamma(x)
    value_a = limit_functional(g_a, x)
    g_b, value_b = scan_and_refine(lambda g: limit_functional(g, x), -50.0, 50.0,
                                   points=401, tol=1e-10)
    if abs(value_a - value_b) > AGREEMENT_TOL:
        raise OracleDisagreement(
            f"x={x!r}: stationarity gives {value_a!r}, direct search {value_b!r}")
    return (value_b, g_b) if with_gamma else value_b


def minimize_linear_family(x: float, n: int, *, with_gamma: bool = False):
    """inf over gamma > -1 of the cone-weight limit functional.

    Searches u = log(1 + gamma) on a window kept below overflow of
    (1 + gamma)^n; a minimum on the window edge raises ConvergenceError.
    """
    x = float(x)
    if not (0.0 < x <= 0.5):
        raise DomainError(f"x must lie in (0, 1/2], got {x!r}")
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    u_max = min(20.0, 600.0 / n)

    def obj(u: float) -> float:
        return linear_limit_functional(math.expm1(u), x, n)

    u_best, value = scan_and_refine(obj, -10.0, u_max, points=121, tol=1e-10, expand=0)
    return (value, math.expm1(u_best)) if with_gamma else value


# -- ((1-t)/t)(D^t - 1)/(D - D^t) >= log D / (D - 1), tight as t -> 0+ ---------

def lemma_min_lhs(D: float, t: float) -> float:
    """((1 - t)/t) (D^t - 1)/(D - D^t) for D > 1, 0 < t < 1."""
    D, t = float(D), float(t)
    if not D > 1.0:
        raise DomainError(f"D must be > 1, got {D!r}")
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    ell = math.log(D)
    # D - D^t = D^t (D^{1-t} - 1)
    return (1.0 - t) / t * math.expm1(t * ell) / (math.exp(t * ell) * math.expm1((1.0 - t) * ell))


def lemma_limit(D: float) -> float:
    """log D / (D - 1): the infimum of lemma_min_lhs over t."""
    D = float(D)
    if not D > 1.0:
        raise DomainError(f"D must be > 1, got {D!r}")
    return math.log(D) / (D - 1.0)


def lemma_limit_extrapolated(D: float, t0: float = 1e-2, levels: int = 4) -> float:
    """Richardson extrapolation of lemma_min_lhs(D, t0 / 2^k) to t = 0."""
    table = [lemma_min_lhs(D, t0 / 2 ** k) for k in range(levels)]
    for j in range(1, levels):
        f = 2.0 ** j
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
    return table[0]


# -- sweeps -------------------------------------------------------------------

SWEEP_COLUMNS = ("family", "n", "gamma", "x", "s", "t", "lhs", "rhs", "slack")


@dataclass(frozen=True)
class SweepRow:
    family: str
    n: int
    gamma: float
    x: float
    s: float
    t: float
    lhs: float
    rhs: float
    slack: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in SWEEP_COLUMNS}


def default_sweep_axes(gamma_count: int = 41, x_count: int = 25,
                       t_count: int = 10) -> tuple[list[float], list[float], list[float]]:
    """gamma in [-20, 20], x in (0, 1/2], t in (0, 0.9]; 10250 instances by default."""
    gammas = [-20.0 + 40.0 * i / (gamma_count - 1) for i in range(gamma_count)]
    xs = [0.5 * (i + 1) / x_count for i in range(x_count)]
    ts = [0.9 * (i + 1) / t_count for i in range(t_count)]
    return gammas, xs, ts


def default_linear_axes(gamma_count: int = 41, x_count: int = 25,
                        t_count: int = 10) -> tuple[list[float], list[float], list[float]]:
    """Cone-weight axes: gamma = e^u - 1 with u in [-2, 3], so gamma stays above -1."""
    gammas = [math.expm1(-2.0 + 5.0 * i / (gamma_count - 1)) for i in range(gamma_count)]
    _, xs, ts = default_sweep_axes(2, x_count, t_count)
    return gammas, xs, ts


def needle_sweep(gammas: Iterable[float], xs: Iterable[float], ts: Iterable[float],
                 family: Family = Family.EXPONENTIAL_TILT, n: int = 1) -> Iterator[SweepRow]:
    """Three-set functional against the sharp profile over a (gamma, x, t) grid.

    For the exponential tilt the right side is x G(1/x) from the log-concave
    profile; for the cone weight it is the dimension-n uniform profile.
    Infeasible (x, t) pairs are skipped.
    """
    from . import uniform

    xs = list(xs)
    ts = list(ts)
    if family is Family.EXPONENTIAL_TILT:
        rhs_of = {x: logconcave.xg_of_x(x) for x in xs}
    else:
        rhs_of = {x: uniform.xg_of_x_n(x, n) for x in xs}
    for g in gammas:
        w = NeedleWeight(family, float(g), n if family is Family.LINEAR_POWER else 1)
        for x in xs:
            for t in ts:
                try:
                    inst = make_instance(w, x, t)
                except InfeasibleCut:
                    continue
                lhs = three_set_functional(inst)
                rhs = rhs_of[x]
                yield SweepRow(family.value, w.n, w.gamma, x, inst.s, t, lhs, rhs, lhs - rhs)
