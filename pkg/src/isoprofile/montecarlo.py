"""Monte Carlo estimates of mu(S), the Minkowski content mu+(S) and the theorem check.

Sampling is split into fixed blocks of ``BLOCK`` points.  Block b draws from
its own Philox stream keyed by (seed, b), so its points depend only on the
seed and the block index.  Each block is reduced to integer category counts
(inside S, or the number of dilation radii h_j with dist(y, S) <= h_j), and
counts are summed in block order.  Results are therefore bit-identical for
any thread count.  Set ``ISOPROFILE_THREADS`` to override the worker count.

mu+(S) = lim_{h->0+} mu(S_h \\ S) / h is estimated at each h in ``h_list`` and
extrapolated to h = 0 with the Lagrange weights of the interpolating
polynomial through the points (h_j, ratio_j).  The extrapolated value is a
per-sample mean of Z = sum_j w_j 1{0 < d <= h_j} / h_j, so its standard
error comes straight from the sample variance of Z.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import logconcave, uniform
from .bodies import (
    BodySpec, CornerSubcube, Cut, ExponentialTilt, Halfspace, KDimSubcube, Norm, Shape,
    Uniform, _parse_enum, body_diameter, sample_uniform,
)
from .errors import ConfigurationError, UsageError

BLOCK = 1 << 16
DEFAULT_H = (0.02, 0.01, 0.005)
DEFAULT_SAMPLES = 1_000_000
DEFAULT_SEED = 20_240_917
MIN_ACCEPTANCE = 1e-4
_ACCEPT_PROBE = 1 << 20  # proposals drawn before the acceptance rate is judged
_SEED_MAX = (1 << 64) - 1

MATRIX_COLUMNS = (
    "shape", "n", "norm", "density", "gamma", "cut", "samples", "seed", "mu_S", "se_mu",
    "mink", "se_mink", "diam", "lhs", "rhs", "slack_sigma", "pass",
)


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_err: float
    samples: int
    seed: int
    flags: tuple[str, ...] = ()
    raw: tuple[float, ...] = ()  # per-h ratios for Minkowski estimates
    acceptance: float = 1.0


def _threads() -> int:
    env = os.environ.get("ISOPROFILE_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            raise ConfigurationError(f"ISOPROFILE_THREADS must be a positive integer, got {env!r}") from None
        if k < 1:
            raise ConfigurationError(f"ISOPROFILE_THREADS must be a positive integer, got {env!r}")
        return k
    return max(1, min(8, os.cpu_count() or 1))


def _check_samples(samples) -> int:
    if isinstance(samples, bool) or int(samples) != samples or samples < 1:
        raise UsageError(f"samples must be a positive integer, got {samples!r}")
    return int(samples)


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= _SEED_MAX:
        raise UsageError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    return int(seed)


def _check_h_list(h_list: Sequence[float]) -> np.ndarray:
    h = np.asarray(list(h_list), dtype=float)
    if h.ndim != 1 or h.size < 3:
        raise UsageError("h_list needs at least 3 values")
    if not np.all(np.isfinite(h)) or np.any(h <= 0.0) or np.any(np.diff(h) >= 0.0):
        raise UsageError("h_list must be positive and strictly decreasing")
    return h


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, block], dtype=np.uint64)))


def draw_points(body: BodySpec, rng: np.random.Generator, count: int) -> tuple[np.ndarray, int]:
    """count draws from mu; returns (points, proposals used).

    Uniform bodies are sampled directly.  A tilt is sampled by rejection
    against the uniform sampler with acceptance exp(gamma <u, x> - max_K);
    with gamma = 0 no acceptance uniforms are drawn, so the stream is the
    uniform one.
    """
    density = body.density
    if isinstance(density, Uniform) or density.gamma == 0.0:
        return sample_uniform(body.shape, body.n, rng, count), count
    top = body.max_log_density()
    u = np.asarray(density.direction)
    chunks, have, proposed, rate = [], 0, 0, 1.0
    while have < count:
        m = min(4 * BLOCK, int(math.ceil((count - have) / rate * 1.1)) + 16)
        cand = sample_uniform(body.shape, body.n, rng, m)
        keep = rng.random(m) < np.exp(density.gamma * (cand @ u) - top)
        idx = np.flatnonzero(keep)[: count - have]
        # proposals up to the last kept point, so proposed/count estimates acceptance
        proposed += int(idx[-1]) + 1 if have + idx.size == count else m
        chunks.append(cand[idx])
        have += idx.size
        rate = max(have / proposed, 1.0 / proposed)
        if proposed >= _ACCEPT_PROBE and have < MIN_ACCEPTANCE * proposed:
            raise ConfigurationError(
                f"rejection acceptance {have / proposed:.2e} is below {MIN_ACCEPTANCE:g}; "
                "use a smaller |gamma|")
    return np.concatenate(chunks), proposed


def richardson_weights(h: Sequence[float]) -> np.ndarray:
    """Weights w with sum_j w_j f(h_j) = p(0), p the interpolant through (h_j, f(h_j))."""
    h = np.asarray(h, dtype=float)
    w = np.ones_like(h)
    for j in range(h.size):
        for k in range(h.size):
            if k != j:
                w[j] *= h[k] / (h[k] - h[j])
    return w


# -- block tallies -------------------------------------------------------------

@dataclass
class Tally:
    """Integer category counts over all samples.

    levels[L] counts points outside S that lie within h_j of S for exactly
    the first L radii (L = 0 means beyond h_0).
    """

    samples: int
    inside: int
    levels: np.ndarray
    proposed: int


def _block_tally(body, cut, norm, h, seed, block, count):
    pts, proposed = draw_points(body, block_rng(seed, block), count)
    inside = cut.inside(pts)
    d = cut.distance(pts[~inside], norm)
    # number of radii h_j >= d, h decreasing
    lv = h.size - np.searchsorted(h[::-1], d, side="left")
    levels = np.bincount(lv, minlength=h.size + 1).astype(np.int64)
    return int(np.count_nonzero(inside)), levels, proposed


def tally(body: BodySpec, cut: Cut, samples: int, seed: int,
          norm: Norm | None = None, h_list: Sequence[float] = DEFAULT_H) -> Tally:
    samples = _check_samples(samples)
    seed = _check_seed(seed)
    cut.check(body)
    norm = body.norm if norm is None else _parse_enum(Norm, norm)
    h = _check_h_list(h_list)
    nblocks = -(-samples // BLOCK)
    sizes = [min(BLOCK, samples - b * BLOCK) for b in range(nblocks)]

    def work(b):
        return _block_tally(body, cut, norm, h, seed, b, sizes[b])

    threads = _threads()
    if threads == 1 or nblocks == 1:
        parts = [work(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, range(nblocks)))
    inside = sum(p[0] for p in parts)
    levels = np.sum([p[1] for p in parts], axis=0)
    proposed = sum(p[2] for p in parts)
    return Tally(samples=samples, inside=inside, levels=levels, proposed=proposed)


def _measure_from(t: Tally, seed: int) -> McEstimate:
    p = t.inside / t.samples
    return McEstimate(value=p, std_err=math.sqrt(p * (1.0 - p) / t.samples),
                      samples=t.samples, seed=seed, acceptance=t.samples / t.proposed)


def _level_values(h: np.ndarray) -> np.ndarray:
    """Z on each level: level L contributes sum_{j<L} w_j / h_j."""
    w = richardson_weights(h)
    return np.concatenate([[0.0], np.cumsum(w / h)])


def _minkowski_from(t: Tally, seed: int, h: np.ndarray) -> McEstimate:
    z = _level_values(h)
    n = t.samples
    mean = float(np.dot(z, t.levels)) / n
    second = float(np.dot(z * z, t.levels)) / n
    var = max(second - mean * mean, 0.0)
    # cumulative counts: number within h_j is the number at level >= j+1
    within = np.cumsum(t.levels[::-1])[::-1][1:]
    ratios = tuple(float(c / (n * hj)) for c, hj in zip(within, h))
    flags = []
    diffs = np.diff(ratios)
    if np.any(diffs > 0) and np.any(diffs < 0):
        flags.append("non_monotone")
    if within[-1] < 100:
        flags.append("few_boundary_samples")
    return McEstimate(value=mean, std_err=math.sqrt(var / n), samples=n, seed=seed,
                      flags=tuple(flags), raw=ratios, acceptance=n / t.proposed)


def estimate_measure(body: BodySpec, cut: Cut, samples: int = DEFAULT_SAMPLES,
                     seed: int = DEFAULT_SEED) -> McEstimate:
    """Fraction of sampled points inside S, with binomial standard error."""
    return _measure_from(tally(body, cut, samples, seed), seed)


def estimate_minkowski(body: BodySpec, cut: Cut, norm: Norm | str | None = None,
                       samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                       h_list: Sequence[float] = DEFAULT_H) -> McEstimate:
    """Richardson-extrapolated estimate of mu+(S) in ``norm`` (body.norm by default)."""
    h = _check_h_list(h_list)
    return _minkowski_from(tally(body, cut, samples, seed, norm, h), seed, h)


# -- theorem check -------------------------------------------------------------

def fold_x(x: float) -> float:
    """min(x, 1 - x) for x in (0, 1)."""
    x = float(x)
    if not (math.isfinite(x) and 0.0 < x < 1.0):
        raise UsageError(f"x must lie in the open interval (0, 1), got {x!r}")
    return min(x, 1.0 - x)


@dataclass(frozen=True)
class CheckResult:
    body: BodySpec
    cut: Cut
    norm: Norm
    mu: McEstimate
    mink: McEstimate
    diam: float
    lhs_estimate: float
    rhs: float
    rhs_logconcave: float
    sigma: float
    sigma_slack: float
    passed: bool
    flags: tuple[str, ...] = field(default=())

    @property
    def pass_(self) -> bool:
        return self.passed

    def row(self) -> dict:
        return {
            "shape": self.body.shape.value, "n": self.body.n, "norm": self.norm.value,
            "density": self.body.density.label, "gamma": float(self.body.density.gamma),
            "cut": self.cut.label, "samples": self.mu.samples, "seed": self.mu.seed,
            "mu_S": self.mu.value, "se_mu": self.mu.std_err,
            "mink": self.mink.value, "se_mink": self.mink.std_err, "diam": self.diam,
            "lhs": self.lhs_estimate, "rhs": self.rhs, "slack_sigma": self.sigma_slack,
            "pass": self.passed,
        }


def _profile_rhs(x: float, n: int, uniform_density: bool) -> tuple[float, float, float]:
    """(strongest rhs, log-concave rhs, d rhs / dx) at folded x."""
    if x == 0.5:
        return 1.0, 1.0, 0.0
    lc = logconcave.profile_g(x)
    lc_rhs = lc.xg
    if not uniform_density:
        return lc_rhs, lc_rhs, lc.gamma
    return uniform.xg_of_x_n(x, n), lc_rhs, uniform.xg_slope_n(x, n)


def run_theorem_check(body: BodySpec, cut: Cut, norm: Norm | str | None = None,
                      samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                      h_list: Sequence[float] = DEFAULT_H, sigmas: float = 3.0) -> CheckResult:
    """Check diam(K) mu+(S) >= x G(1/x) with x = min(mu(S), 1 - mu(S)).

    Uniform bodies are held to the stronger dimension-n profile.  The noise
    of lhs - rhs is estimated per sample from the linearisation
    diam * Z - slope * 1{y in S}, so the correlation between the two
    estimates is accounted for.
    """
    norm = body.norm if norm is None else _parse_enum(Norm, norm)
    h = _check_h_list(h_list)
    t = tally(body, cut, samples, seed, norm, h)
    mu = _measure_from(t, seed)
    mink = _minkowski_from(t, seed, h)
    if t.inside in (0, t.samples):
        raise ConfigurationError(
            f"cut {cut.label} captured {t.inside} of {t.samples} samples; mu(S) must be interior")
    x = fold_x(mu.value)
    folded = mu.value > 0.5
    rhs, rhs_lc, slope = _profile_rhs(x, body.n, isinstance(body.density, Uniform))
    if folded:
        slope = -slope
    diam = body_diameter(body, norm)
    lhs = diam * mink.value

    # per-sample variance of W = diam * Z - slope * 1_S (disjoint supports)
    z = _level_values(h)
    n = t.samples
    w_vals = np.concatenate([diam * z, [-slope]])
    w_counts = np.concatenate([t.levels, [t.inside]]).astype(float)
    m1 = float(np.dot(w_vals, w_counts)) / n
    m2 = float(np.dot(w_vals * w_vals, w_counts)) / n
    sigma = math.sqrt(max(m2 - m1 * m1, 0.0) / n)

    gap = lhs - rhs
    if sigma > 0.0:
        slack = gap / sigma
    else:
        slack = math.inf if gap >= 0 else -math.inf
    passed = gap >= -sigmas * sigma
    return CheckResult(body=body, cut=cut, norm=norm, mu=mu, mink=mink, diam=diam,
                       lhs_estimate=lhs, rhs=rhs, rhs_logconcave=rhs_lc, sigma=sigma,
                       sigma_slack=slack, passed=passed, flags=mink.flags)


# -- default verification matrix ----------------------------------------------

def default_cuts(shape: Shape, n: int) -> list[Cut]:
    """Five cuts per shape covering halves, small sets, folded sets and oblique normals."""
    e1 = [1.0] + [0.0] * (n - 1)
    ones = [1.0] * n
    if shape is Shape.CUBE:
        return [
            Halfspace(e1, 0.5),
            Halfspace(ones, 0.3 * n),
            CornerSubcube.of_volume(n, 2.0 ** -n),
            CornerSubcube.of_volume(n, 0.1),
            KDimSubcube.of_volume(n - 1, 0.1),
        ]
    if shape is Shape.BALL:
        return [
            Halfspace(e1, 0.0),
            Halfspace(e1, 0.6),
            Halfspace(e1, -0.5),
            Halfspace(ones, 0.4 * math.sqrt(n)),
            Halfspace([1.0, -1.0] + [0.0] * (n - 2), 0.3),
        ]
    return [
        Halfspace(e1, 0.2),
        Halfspace([1.0, -1.0] + [0.0] * (n - 2), 0.0),
        Halfspace(ones, 0.5),
        Halfspace(ones, 0.9),
        Halfspace(e1, 0.05),
    ]


MATRIX_DIMS = (2, 3, 5)
MATRIX_TILT = 1.0


def default_matrix(dims: Iterable[int] = MATRIX_DIMS) -> list[tuple[BodySpec, Cut]]:
    cells = []
    for shape in Shape:
        for n in dims:
            for density in (Uniform(), ExponentialTilt.along_axis(n, MATRIX_TILT)):
                for norm in Norm:
                    body = BodySpec(shape, n, density, norm)
                    cells.extend((body, cut) for cut in default_cuts(shape, n))
    return cells


def run_matrix(cells: Iterable[tuple[BodySpec, Cut]] | None = None,
               samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
               h_list: Sequence[float] = DEFAULT_H) -> list[CheckResult]:
    """run_theorem_check over every cell, in order, all with the same seed."""
    cells = default_matrix() if cells is None else cells
    return [run_theorem_check(b, c, samples=samples, seed=seed, h_list=h_list) for b, c in cells]
