import math

import pytest
from hypothesis import given, settings, strategies as st

from isoprofile import logconcave as lc
from isoprofile.errors import DomainError

# (gamma, x, G, xG) from 50-digit mpmath evaluation of the closed forms
MPMATH_POINTS = [
    (1e-6, 0.49999983333333333, 2.0000006666667222, 0.99999999999991667),
    (0.01, 0.49833333888886905, 2.0066722185154394, 0.99999166670833317),
    (0.5, 0.4173549619795836, 2.3467422493615949, 0.97942452225819094),
    (1.0, 0.33869688733846589, 2.7182818284590452, 0.92067359420779232),
    (2.0, 0.20551318773348958, 3.5231883119115298, 0.72406166096631047),
    (5.0, 0.027364709494656052, 6.2394896623384555, 0.17074182200480141),
    (20.0, 3.9161918992018415e-8, 21.052631576663542, 8.2446145237410655e-7),
    (100.0, 3.6828752162606276e-42, 101.01010101010101, 3.720075976020836e-40),
    (500.0, 3.5551636269639015e-215, 501.00200400801603, 1.7811441016853214e-212),
]

# (x, gamma) by 400-step mpmath bisection
MPMATH_INVERSE = [
    (0.01, 6.2716545082178208),
    (0.1, 3.1887790124099724),
    (0.25, 1.6323065927174806),
    (0.4, 0.60737144218799779),
    (0.49, 0.060007201666752418),
    (1e-10, 26.2548699358184),
]


@pytest.mark.parametrize("gamma,x,g,xg", MPMATH_POINTS)
def test_closed_forms_match_high_precision(gamma, x, g, xg):
    assert lc.x_of_gamma(gamma) == pytest.approx(x, rel=1e-13)
    assert lc.g_of_gamma(gamma) == pytest.approx(g, rel=1e-13)
    assert lc.xg_of_gamma(gamma) == pytest.approx(xg, rel=1e-13)
    assert lc.log_x_of_gamma(gamma) == pytest.approx(math.log(x), rel=1e-13)


@pytest.mark.parametrize("x,gamma", MPMATH_INVERSE)
def test_inverse_matches_bisection(x, gamma):
    assert lc.gamma_of_x(x) == pytest.approx(gamma, rel=1e-11)


def test_gamma_one_value():
    # numerator e (1 - 1) + 1 = 1
    assert lc.x_of_gamma(1.0) == pytest.approx(1.0 / (math.e - 1.0) ** 2, rel=1e-15)
    assert lc.g_of_gamma(1.0) == pytest.approx(math.e, rel=1e-15)


def test_half_is_tight():
    p = lc.profile_g(0.5)
    assert (p.x, p.gamma, p.g) == (0.5, 0.0, 2.0)
    assert lc.xg_of_x(0.5) == 1.0


def test_g_tends_to_two_at_half():
    assert lc.profile_g(0.5 - 1e-12).g == pytest.approx(2.0, abs=1e-9)
    # G = 2 + 2 gamma / 3 + O(gamma^2)
    assert lc.g_of_gamma(1e-9) == pytest.approx(2.0 + 2e-9 / 3.0, abs=1e-15)


def test_half_gap_agrees_with_difference():
    for g in (0.3, 0.9, 1.5, 10.0):
        assert lc.half_gap(g) == pytest.approx(0.5 - lc.x_of_gamma(g), rel=1e-12)
    # 1/2 - x = gamma / 6 + O(gamma^3)
    assert lc.half_gap(1e-9) == pytest.approx(1e-9 / 6.0, rel=1e-12)


def test_large_gamma_is_finite():
    assert lc.x_of_gamma(700.0) > 0.0
    assert lc.x_of_gamma(1000.0) == 0.0
    assert math.isfinite(lc.log_x_of_gamma(1e5))
    assert lc.g_of_gamma(1e5) == pytest.approx(1e5, rel=1e-4)


@pytest.mark.parametrize("bad", [0.0, -1.0, 0.50000001, 1.0, math.nan, math.inf])
def test_profile_rejects_outside_domain(bad):
    with pytest.raises(DomainError):
        lc.profile_g(bad)


@pytest.mark.parametrize("bad", [0.0, -0.5, math.nan, math.inf])
def test_gamma_must_be_positive(bad):
    with pytest.raises(DomainError):
        lc.x_of_gamma(bad)


def test_slope_is_open_at_half():
    with pytest.raises(DomainError):
        lc.xg_slope(0.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=50.0))
def test_round_trip(gamma):
    x = lc.x_of_gamma(gamma)
    assert lc.gamma_of_x(x) == pytest.approx(gamma, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-300, max_value=0.5))
def test_xg_equals_x_times_g(x):
    p = lc.profile_g(x)
    assert p.x * p.g == pytest.approx(lc.xg_of_x(x), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-4, max_value=0.499))
def test_slope_equals_gamma_by_finite_differences(x):
    h = 1e-3 * min(x, 0.5 - x)
    fd = (lc.xg_of_x(x + h) - lc.xg_of_x(x - h)) / (2 * h)
    assert lc.xg_slope(x) == pytest.approx(fd, rel=1e-5, abs=1e-6)


def test_x_decreasing_and_g_increasing():
    gammas = [10 ** (k / 10.0) for k in range(-60, 26)]
    xs = [lc.x_of_gamma(g) for g in gammas]
    gs = [lc.g_of_gamma(g) for g in gammas]
    assert all(a > b for a, b in zip(xs, xs[1:]))
    assert all(a < b for a, b in zip(gs, gs[1:]))
