"""Closed-form upper and lower bounds on x G(1/x) and gap reports against the sharp profiles.

All comparisons are made on the measure-scaled quantity x G(1/x), which is
what diam(K) mu+(S) is bounded by.  The elementwise functions accept
floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import logconcave, uniform
from .errors import DomainError, UsageError

SQRT_2PI = math.sqrt(2.0 * math.pi)

REPORT_COLUMNS = (
    "x", "gamma", "xG_logconcave", "xG_uniform_n", "lb_klm", "lb_simple",
    "ub_log2", "ub_klm_form", "gaussian_lb", "bobkov_entropy",
)


def _unit_open(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any((arr <= 0.0) | (arr >= 1.0)):
        raise DomainError(f"{name} must lie in (0, 1)")
    return arr


def _half_closed(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any((arr <= 0.0) | (arr > 0.5)):
        raise DomainError("x must lie in (0, 1/2]")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def lb_klm(x):
    """x(1-x)(4 + log(1/(4x(1-x)))); symmetric about 1/2, tight at 1/2."""
    x = _unit_open(x)
    p = x * (1.0 - x)
    # 4x(1-x) = 1 - (1-2x)^2
    d = 1.0 - 2.0 * x
    return _out(p * (4.0 - np.log1p(-d * d)))


def lb_simple(x):
    """x(2 + log(1/(2x))) on (0, 1/2]."""
    x = _half_closed(x)
    return _out(x * (2.0 - np.log(2.0 * x)))


def ub_log2(x):
    """2x log2(1/x) on (0, 1/2]."""
    x = _half_closed(x)
    return _out(-2.0 * x * np.log2(x))


def ub_klm_form(x):
    """4x(1-x) log2(1/(x(1-x))); symmetric about 1/2."""
    x = _unit_open(x)
    p = x * (1.0 - x)
    return _out(-4.0 * p * np.log2(p))


def bobkov_entropy(x):
    """x log(1/x) + (1-x) log(1/(1-x))."""
    x = _unit_open(x)
    return _out(-x * np.log(x) - (1.0 - x) * np.log1p(-x))


# -- Gaussian isoperimetric function -------------------------------------

# Rational approximation of the normal quantile (P. J. Acklam), |rel err| < 1.2e-9.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / SQRT_2PI


def _lower_quantile(p: float) -> float:
    """Quantile for p in (0, 1/2]: rational start plus one Newton step."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        z = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        z = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    # lower tail: Phi(z) = erfc(-z/sqrt2)/2 keeps full relative accuracy
    return z - (normal_cdf(z) - p) / normal_pdf(z)


def inverse_normal_cdf(p: float) -> float:
    """Phi^{-1}(p) for p in (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if p <= 0.5:
        return _lower_quantile(p)
    return -_lower_quantile(1.0 - p)


def gaussian_I(x):
    """Gaussian isoperimetric function phi(Phi^{-1}(x))."""
    arr = _unit_open(x)
    vals = np.array([normal_pdf(inverse_normal_cdf(v)) for v in arr.ravel()])
    return _out(vals.reshape(arr.shape))


def gaussian_lb(x):
    """sqrt(2 pi) * I(x); equals 1 at x = 1/2."""
    return _out(SQRT_2PI * np.asarray(gaussian_I(x)))


# -- hypercube (subcube) minimum -----------------------------------------

def bl_hypercube_argmin(x: float, n: int) -> tuple[int, float]:
    """(k, value) minimising k * x^{-1/k} over k = 1..n.

    k -> k exp(l/k) with l = log(1/x) is convex in k with its real minimum
    at k = l, so only the two integers around l (clipped to [1, n]) need to
    be compared.
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    ell = -math.log(x)
    candidates = {min(max(k, 1), n) for k in (math.floor(ell), math.floor(ell) + 1)}
    return min(((k * x ** (-1.0 / k), k) for k in candidates))[::-1]


def bl_hypercube_min(x: float, n: int) -> float:
    """min over k = 1..n of k / x^{1/k}: the best subcube ratio diam mu+ / mu on [0,1]^n."""
    return bl_hypercube_argmin(x, n)[1]


# -- residual of the strengthened KLM bound --------------------------------

def klm_residual(gamma: float) -> float:
    """x G(1/x) / (x(1-x)) - (4 + log(1/(4x(1-x)))) with x = x(gamma); >= 0."""
    g = float(gamma)
    if not math.isfinite(g) or g <= 0.0:
        raise DomainError(f"gamma must be finite and > 0, got {g!r}")
    x = logconcave.x_of_gamma(g)
    xg = logconcave.xg_of_gamma(g)
    if x >= 0.25:
        # 4x(1-x) = 1 - 4h^2 with h = 1/2 - x known to full relative precision
        h = logconcave.half_gap(g)
        log_term = -math.log1p(-4.0 * h * h)
    else:
        log_term = -math.log(4.0 * x) - math.log1p(-x)
    return xg / (x * (1.0 - x)) - (4.0 + log_term)


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """count points between lo and hi, linearly or logarithmically spaced."""

    lo: float
    hi: float
    count: int
    spacing: str = "log"

    def __post_init__(self):
        if self.spacing not in ("linear", "log"):
            raise UsageError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if int(self.count) != self.count or self.count < 2:
            raise UsageError(f"grid needs at least 2 points, got {self.count!r}")
        if not (0.0 < self.lo < self.hi):
            raise UsageError(f"grid bounds must satisfy 0 < lo < hi, got ({self.lo}, {self.hi})")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            pts = np.geomspace(self.lo, self.hi, int(self.count))
        else:
            pts = np.linspace(self.lo, self.hi, int(self.count))
        pts[0], pts[-1] = self.lo, self.hi
        return pts


DEFAULT_GRID = GridSpec(1e-4, 0.5, 2000, "log")


@dataclass
class BoundReport:
    n: int
    x_grid: np.ndarray
    gamma: np.ndarray
    xg_logconcave: np.ndarray
    xg_uniform: np.ndarray
    bounds: dict[str, np.ndarray] = field(default_factory=dict)
    max_abs_err: float = 0.0
    max_rel_err: float = 0.0

    def rows(self) -> list[dict]:
        out = []
        for i, x in enumerate(self.x_grid):
            row = {
                "x": float(x),
                "gamma": float(self.gamma[i]),
                "xG_logconcave": float(self.xg_logconcave[i]),
                "xG_uniform_n": float(self.xg_uniform[i]),
            }
            for name in REPORT_COLUMNS[4:]:
                row[name] = float(self.bounds[name][i])
            out.append(row)
        return out

    def ordering_slacks(self) -> dict[str, float]:
        """Smallest slack of each link in the bound ordering (>= 0 when it holds)."""
        b, s = self.bounds, self.xg_logconcave
        links = {
            "ub_klm_form>=ub_log2": b["ub_klm_form"] - b["ub_log2"],
            "ub_log2>=xG": b["ub_log2"] - s,
            "xG>=lb_klm": s - b["lb_klm"],
            "lb_klm>=lb_simple": b["lb_klm"] - b["lb_simple"],
            "xG>=gaussian_lb": s - b["gaussian_lb"],
            "xG>=bobkov_entropy": s - b["bobkov_entropy"],
        }
        return {k: float(np.min(v)) for k, v in links.items()}

    def ordering_holds(self, tol: float = 1e-10) -> bool:
        return all(v >= -tol for v in self.ordering_slacks().values())


def bound_gap_report(grid: GridSpec | Sequence[float] = DEFAULT_GRID, n: int = 2) -> BoundReport:
    """Evaluate every bound and both sharp profiles on a grid in (0, 1/2].

    ``grid`` is a GridSpec or an explicit sequence of points.  The errors
    reported are the largest absolute and relative gaps between x G(1/x) and
    the strengthened KLM lower bound.
    """
    if isinstance(grid, GridSpec):
        xs = grid.points()
    else:
        xs = np.asarray(list(grid), dtype=float)
        if xs.size == 0:
            raise UsageError("grid is empty")
    if np.any((xs <= 0.0) | (xs > 0.5)) or not np.all(np.isfinite(xs)):
        raise UsageError("grid points must lie in (0, 1/2]")

    gam = np.empty_like(xs)
    xg = np.empty_like(xs)
    xgu = np.empty_like(xs)
    for i, x in enumerate(xs):
        p = logconcave.profile_g(x)
        gam[i] = p.gamma
        xg[i] = 1.0 if p.gamma == 0.0 else logconcave.xg_of_gamma(p.gamma)
        xgu[i] = uniform.xg_of_x_n(x, n)

    bounds = {
        "lb_klm": np.asarray(lb_klm(xs)),
        "lb_simple": np.asarray(lb_simple(xs)),
        "ub_log2": np.asarray(ub_log2(xs)),
        "ub_klm_form": np.asarray(ub_klm_form(xs)),
        "gaussian_lb": np.asarray(gaussian_lb(xs)),
        "bobkov_entropy": np.asarray(bobkov_entropy(xs)),
    }
    gap = xg - bounds["lb_klm"]
    return BoundReport(
        n=n, x_grid=xs, gamma=gam, xg_logconcave=xg, xg_uniform=xgu, bounds=bounds,
        max_abs_err=float(np.max(np.abs(gap))),
        max_rel_err=float(np.max(np.abs(gap) / xg)),
    )
