"""Small numerical building blocks: bracketed roots, golden section, log helpers."""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import brentq

from .errors import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


def log_expm1(z: float) -> float:
    """log(e^z - 1) for z > 0 without overflow."""
    if z > 40.0:
        return z + math.log1p(-math.exp(-z))
    return math.log(math.expm1(z))


def find_root(f: Callable[[float], float], lo: float, hi: float,
              xtol: float = 1e-15, rtol: float = 4 * 2.220446049250313e-16,
              maxiter: int = 500) -> float:
    """Brent's method on [lo, hi]; raises ConvergenceError when f does not change sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.isnan(flo) or math.isnan(fhi) or (flo > 0) == (fhi > 0):
        raise ConvergenceError(
            f"root not bracketed on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}")
    return brentq(f, lo, hi, xtol=xtol, rtol=rtol, maxiter=maxiter)


def golden_section(f: Callable[[float], float], a: float, b: float,
                   tol: float = 1e-10, maxiter: int = 500) -> tuple[float, float]:
    """Minimise a unimodal f on [a, b]; returns (argmin, min).

    The interval is shrunk until its width is below ``tol``; the best point
    seen (interior probes and both ends) is returned.
    """
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    candidates = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fbest, xbest = min(candidates)
    return xbest, fbest


def scan_and_refine(f: Callable[[float], float], lo: float, hi: float,
                    points: int = 201, tol: float = 1e-10,
                    expand: int = 8) -> tuple[float, float]:
    """Global scan on a uniform grid, then golden section around the best cell.

    If the best grid value sits on an edge the window is widened (up to
    ``expand`` times, each doubling its width on that side); a minimum that
    stays on the edge raises ConvergenceError.
    """
    for _ in range(expand + 1):
        step = (hi - lo) / (points - 1)
        xs = [lo + i * step for i in range(points)]
        ys = [f(x) for x in xs]
        i = min(range(points), key=ys.__getitem__)
        if i == 0:
            lo -= hi - lo
            continue
        if i == points - 1:
            hi += hi - lo
            continue
        return golden_section(f, xs[i - 1], xs[i + 1], tol=tol)
    raise ConvergenceError(
        f"minimum stays on the edge of the search window [{lo!r}, {hi!r}]")
