"""Acceptance criteria, one test each; the summary prints one PASS/FAIL line per criterion."""

import math
import time

import numpy as np
import pytest

from isoprofile import bounds as bd
from isoprofile import logconcave as lc
from isoprofile import montecarlo as mc
from isoprofile import needle as nd
from isoprofile import uniform as un
from isoprofile.bodies import BodySpec, CornerSubcube


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_01_tight_point(criterion):
    p = lc.profile_g(0.5)
    err = abs(p.g - 2.0)
    ok = criterion(1, "tight point G = 2 at x = 1/2", err <= 1e-12 and p.gamma == 0.0, f"|G-2|={err:.1e}")
    assert ok


def test_02_bound_gap(criterion):
    with Clock() as c:
        rep = bd.bound_gap_report(bd.DEFAULT_GRID)
    ok = rep.max_abs_err <= 0.0051 and rep.max_rel_err <= 0.07 and c.elapsed < 1.0
    criterion(2, "bound gap on the default log grid", ok,
              f"abs={rep.max_abs_err:.6f} rel={rep.max_rel_err:.4f} t={c.elapsed:.2f}s")
    assert rep.x_grid.size == 2000
    assert ok


def test_03_ordering_chain(criterion):
    with Clock() as c:
        slacks = bd.bound_gap_report(bd.DEFAULT_GRID).ordering_slacks()
    worst = min(slacks.values())
    ok = worst >= -1e-10 and c.elapsed < 1.0
    criterion(3, "bound ordering chain", ok, f"min slack={worst:.3e} t={c.elapsed:.2f}s")
    assert ok, slacks


def test_04_exp_oracle(criterion):
    xs = (0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.49)
    with Clock() as c:
        err = max(abs(nd.minimize_exp_family(x) - x * lc.profile_g(x).g) for x in xs)
    ok = err <= 1e-8 and c.elapsed < 1.0
    criterion(4, "exponential needle minimum equals profile", ok, f"max err={err:.1e} t={c.elapsed:.2f}s")
    assert ok


def test_05_cone_oracle(criterion):
    with Clock() as c:
        err = max(abs(nd.minimize_linear_family(x, n) - x * un.profile_g_n(x, n).g)
                  for n in (2, 3, 5, 10) for x in (0.05, 0.1, 0.25, 0.4))
    ok = err <= 1e-6 and c.elapsed < 5.0
    criterion(5, "cone needle minimum equals uniform profile", ok, f"max err={err:.1e} t={c.elapsed:.2f}s")
    assert ok


def test_06_plane_cone_point(criterion):
    x = un.x_of_gamma_n(1.0, 2)
    g = un.profile_g_n(1.0 / 3.0, 2).g
    ex, eg = abs(x - 1.0 / 3.0), abs(g - 2.0 * math.sqrt(2.0))
    ok = ex <= 1e-12 and eg <= 1e-9
    criterion(6, "n = 2, gamma = 1 gives x = 1/3, G = 2 sqrt 2", ok, f"dx={ex:.1e} dG={eg:.1e}")
    assert ok


def test_07_log_ratio_inequality(criterion):
    Ds = np.geomspace(1.0 + 1e-3, 1e6, 200)
    ts = np.linspace(1e-3, 1.0 - 1e-3, 200)
    with Clock() as c:
        worst = min(nd.lemma_min_lhs(float(D), float(t)) - nd.lemma_limit(float(D))
                    for D in Ds for t in ts)
        extrap = max(abs(nd.lemma_limit_extrapolated(float(D)) - math.log(D) / (D - 1.0))
                     for D in Ds[::10])
    ok = worst >= -1e-12 and extrap <= 1e-6 and c.elapsed < 1.0
    criterion(7, "log D/(D-1) grid and t -> 0 limit", ok,
              f"min slack={worst:.1e} extrap err={extrap:.1e} t={c.elapsed:.2f}s")
    assert ok


def test_08_needle_suite(criterion):
    with Clock() as c:
        rows = list(nd.needle_sweep(*nd.default_sweep_axes()))
    worst = min(r.slack for r in rows)
    ok = len(rows) >= 10_000 and worst >= -1e-10 and c.elapsed < 10.0
    criterion(8, "three-set functional over the needle grid", ok,
              f"{len(rows)} instances, min slack={worst:.1e} t={c.elapsed:.2f}s")
    assert ok


def test_09_dimension_free_limit(criterion):
    # the limit is the log-concave x G at gamma = 1, i.e. e/(e-1)^2 (see README)
    limit = lc.xg_of_gamma(1.0)
    assert limit == pytest.approx(math.e / (math.e - 1.0) ** 2, rel=1e-15)
    errs = [abs(un.xg_of_gamma_n(1.0 / n, n) - limit) for n in (10**2, 10**3, 10**4, 10**5)]
    ok = all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] <= 1e-3
    criterion(9, "uniform profile at gamma = 1/n tends to the log-concave one", ok,
              "errs=" + ",".join(f"{e:.1e}" for e in errs))
    assert ok


SUBCUBE_CELLS = [(n, x) for n in (2, 3, 5) for x in (2.0 ** -n, 0.1)]


@pytest.mark.slow
def test_10_hypercube_corners(criterion):
    worst, ok = 0.0, True
    with Clock() as c:
        for n, x in SUBCUBE_CELLS:
            body = BodySpec("cube", n, norm="linf")
            cut = CornerSubcube.of_volume(n, x)
            mu = mc.estimate_measure(body, cut, 10_000_000)
            mk = mc.estimate_minkowski(body, cut, samples=10_000_000)
            z_mu = abs(mu.value - x) / mu.std_err
            z_mk = abs(mk.value - n * x ** (1.0 - 1.0 / n)) / mk.std_err
            worst = max(worst, z_mu, z_mk)
            ok &= z_mu <= 4.0 and z_mk <= 4.0
    ok &= c.elapsed < 120.0
    criterion(10, "corner subcube measure and content at 1e7 samples", ok,
              f"worst={worst:.2f} sigma t={c.elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_11_theorem_matrix(criterion):
    with Clock() as c:
        results = mc.run_matrix(samples=1_000_000)
    failed = [r.row() for r in results if not r.passed]
    ok = len(results) == 270 and not failed and c.elapsed < 600.0
    tightest = min(r.sigma_slack for r in results)
    criterion(11, "Monte Carlo theorem matrix at 3 sigma", ok,
              f"{len(results) - len(failed)}/{len(results)} pass, tightest={tightest:.2f} sigma "
              f"t={c.elapsed:.0f}s")
    assert ok, failed[:3]


def test_12_limit_trends(criterion):
    xs = [10.0 ** -k for k in range(2, 9)]
    ratios = [lc.profile_g(x).g / math.log(1.0 / x) for x in xs]
    ok_lc = all(a > b for a, b in zip(ratios, ratios[1:])) and 1.0 < ratios[-1] < 1.3
    ok_n = True
    finals = []
    for n in (2, 5):
        r = [un.small_x_ratio(x, n) for x in xs]
        devs = [abs(v - 1.0) for v in r]
        ok_n &= all(a > b for a, b in zip(devs, devs[1:])) and devs[-1] < 0.05
        finals.append(r[-1])
    ok = ok_lc and ok_n
    criterion(12, "small-x limit trends", ok,
              f"G/log={ratios[-1]:.4f} G_n ratio(n=2,5)={finals[0]:.4f},{finals[1]:.4f}")
    assert ok
