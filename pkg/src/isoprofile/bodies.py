"""Concrete convex bodies, densities, norms and cut sets for Monte Carlo checks.

Three shapes are supported, all full-dimensional in R^n:

    cube      [0, 1]^n
    ball      {x : |x|_2 <= 1}
    simplex   {x : x_i >= 0, sum x_i <= 1}

Densities are uniform or an exponential tilt exp(gamma <u, x>) restricted to
the body; both are log-concave.  Distances to cut sets are exact for
axis-aligned boxes.  For halfspaces the distance to the bounding hyperplane
is used; see ``Halfspace.distance``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedCombinationError, UsageError


class Shape(enum.Enum):
    CUBE = "cube"
    BALL = "ball"
    SIMPLEX = "simplex"


class Norm(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @property
    def dual(self) -> "Norm":
        return {Norm.L1: Norm.LINF, Norm.L2: Norm.L2, Norm.LINF: Norm.L1}[self]

    def of(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """Row-wise norm along ``axis``."""
        v = np.asarray(v, dtype=float)
        if self is Norm.L1:
            return np.sum(np.abs(v), axis=axis)
        if self is Norm.L2:
            return np.sqrt(np.sum(v * v, axis=axis))
        return np.max(np.abs(v), axis=axis)


def _parse_enum(cls, value):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).lower())
    except ValueError:
        legal = ", ".join(m.value for m in cls)
        raise UsageError(f"unknown {cls.__name__.lower()} {value!r}; expected one of {legal}") from None


# -- densities ---------------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    label = "uniform"
    gamma = 0.0

    def log_density(self, points: np.ndarray) -> np.ndarray:
        return np.zeros(np.asarray(points).shape[:-1])


@dataclass(frozen=True)
class ExponentialTilt:
    """Density proportional to exp(gamma <u, x>) on the body; u is a unit vector."""

    direction: tuple[float, ...]
    gamma: float
    label = "exponential"

    def __post_init__(self):
        u = np.asarray(self.direction, dtype=float)
        if u.ndim != 1 or not np.all(np.isfinite(u)) or abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise UsageError("tilt direction must be a finite unit vector")
        if not math.isfinite(self.gamma):
            raise UsageError(f"tilt gamma must be finite, got {self.gamma!r}")
        object.__setattr__(self, "direction", tuple(float(c) for c in u))

    @classmethod
    def along_axis(cls, n: int, gamma: float, axis: int = 0) -> "ExponentialTilt":
        u = [0.0] * n
        u[axis] = 1.0
        return cls(tuple(u), float(gamma))

    def log_density(self, points: np.ndarray) -> np.ndarray:
        return self.gamma * (np.asarray(points, dtype=float) @ np.asarray(self.direction))


Density = Uniform | ExponentialTilt


# -- bodies ------------------------------------------------------------------

@dataclass(frozen=True)
class BodySpec:
    shape: Shape
    n: int
    density: Density = field(default_factory=Uniform)
    norm: Norm = Norm.L2

    def __post_init__(self):
        object.__setattr__(self, "shape", _parse_enum(Shape, self.shape))
        object.__setattr__(self, "norm", _parse_enum(Norm, self.norm))
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise UsageError(f"body dimension n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if isinstance(self.density, ExponentialTilt) and len(self.density.direction) != self.n:
            raise UsageError("tilt direction length does not match n")

    def with_norm(self, norm) -> "BodySpec":
        return BodySpec(self.shape, self.n, self.density, _parse_enum(Norm, norm))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        if self.shape is Shape.CUBE:
            return np.all((p >= -tol) & (p <= 1.0 + tol), axis=-1)
        if self.shape is Shape.BALL:
            return np.sum(p * p, axis=-1) <= 1.0 + tol
        return np.all(p >= -tol, axis=-1) & (np.sum(p, axis=-1) <= 1.0 + tol)

    def log_density(self, points: np.ndarray) -> np.ndarray:
        """Unnormalised log-density; -inf outside the body."""
        p = np.asarray(points, dtype=float)
        out = np.asarray(self.density.log_density(p), dtype=float)
        return np.where(self.contains(p), out, -np.inf)

    def max_log_density(self) -> float:
        """max of gamma <u, x> over the body (the rejection envelope)."""
        if isinstance(self.density, Uniform):
            return 0.0
        c = self.density.gamma * np.asarray(self.density.direction)
        if self.shape is Shape.CUBE:
            return float(np.sum(np.maximum(c, 0.0)))
        if self.shape is Shape.BALL:
            return float(np.linalg.norm(c))
        return float(max(0.0, np.max(c)))

    @property
    def label(self) -> str:
        return self.shape.value


def sample_uniform(shape: Shape, n: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """count exact uniform draws from the body, shape (count, n)."""
    if shape is Shape.CUBE:
        return rng.random((count, n))
    if shape is Shape.BALL:
        g = rng.standard_normal((count, n))
        r = rng.random(count) ** (1.0 / n)
        return g * (r / np.sqrt(np.sum(g * g, axis=1)))[:, None]
    # flat Dirichlet on n+1 coordinates, last one dropped
    e = rng.standard_exponential((count, n + 1))
    return e[:, :n] / np.sum(e, axis=1)[:, None]


def sample_point(body: BodySpec, rng: np.random.Generator) -> np.ndarray:
    """One draw from mu on the body."""
    from .montecarlo import draw_points  # shared rejection logic
    return draw_points(body, rng, 1)[0][0]


def body_diameter(body: BodySpec, norm: Norm | str | None = None) -> float:
    """Closed-form diameter of the body in the given norm (body.norm by default).

    cube:    L1 n,       L2 sqrt(n),  Linf 1
    ball:    L1 2 sqrt(n), L2 2,      Linf 2
    simplex: L1 2,       L2 sqrt(2),  Linf 1
    """
    norm = body.norm if norm is None else _parse_enum(Norm, norm)
    n = body.n
    table = {
        Shape.CUBE: {Norm.L1: float(n), Norm.L2: math.sqrt(n), Norm.LINF: 1.0},
        Shape.BALL: {Norm.L1: 2.0 * math.sqrt(n), Norm.L2: 2.0, Norm.LINF: 2.0},
        Shape.SIMPLEX: {Norm.L1: 2.0, Norm.L2: math.sqrt(2.0), Norm.LINF: 1.0},
    }
    return table[body.shape][norm]


# -- cuts --------------------------------------------------------------------

@dataclass(frozen=True)
class Halfspace:
    """S = K ∩ {x : <a, x> <= b}."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        a = np.asarray(self.normal, dtype=float)
        if a.ndim != 1 or not np.all(np.isfinite(a)) or not np.any(a != 0.0):
            raise UsageError("halfspace normal must be a finite non-zero vector")
        object.__setattr__(self, "normal", tuple(float(c) for c in a))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def label(self) -> str:
        a = ",".join(f"{c:g}" for c in self.normal)
        return f"halfspace(a=[{a}];b={self.offset:g})"

    def check(self, body: BodySpec) -> None:
        if len(self.normal) != body.n:
            raise UsageError("halfspace normal length does not match n")

    def inside(self, points: np.ndarray) -> np.ndarray:
        return points @ np.asarray(self.normal) <= self.offset

    def distance(self, points: np.ndarray, norm: Norm) -> np.ndarray:
        """Distance to the hyperplane <a, x> = b, zero inside.

        This is the distance to {<a, x> <= b} in R^n rather than to its
        intersection with K; the two agree except within O(h) of the face
        where the hyperplane meets the boundary of K, so mu(S_h \\ S) changes
        by O(h^2) and the h -> 0 limit is unaffected.
        """
        a = np.asarray(self.normal)
        excess = points @ a - self.offset
        return np.maximum(excess, 0.0) / float(norm.dual.of(a))


@dataclass(frozen=True)
class KDimSubcube:
    """S = [0, side]^k x [0, 1]^{n-k} inside the unit cube."""

    k: int
    side: float

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise UsageError(f"subcube k must be an integer >= 1, got {self.k!r}")
        if not 0.0 < self.side < 1.0:
            raise UsageError(f"subcube side must lie in (0, 1), got {self.side!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "side", float(self.side))

    @classmethod
    def of_volume(cls, k: int, x: float) -> "KDimSubcube":
        return cls(k, x ** (1.0 / k))

    @property
    def label(self) -> str:
        return f"subcube(k={self.k};side={self.side:.10g})"

    def check(self, body: BodySpec) -> None:
        if body.shape is not Shape.CUBE:
            raise UnsupportedCombinationError(f"{type(self).__name__} is only defined on the unit cube")
        if self.k > body.n:
            raise UsageError(f"subcube k={self.k} exceeds n={body.n}")

    def inside(self, points: np.ndarray) -> np.ndarray:
        return np.all(points[:, : self.k] <= self.side, axis=1)

    def distance(self, points: np.ndarray, norm: Norm) -> np.ndarray:
        # points lie in the cube, so only the upper faces of the first k axes can be crossed
        excess = np.maximum(points[:, : self.k] - self.side, 0.0)
        return norm.of(excess, axis=1)


@dataclass(frozen=True)
class CornerSubcube:
    """S = [0, side]^n; the full-dimensional corner cube."""

    side: float

    def __post_init__(self):
        if not 0.0 < self.side < 1.0:
            raise UsageError(f"subcube side must lie in (0, 1), got {self.side!r}")
        object.__setattr__(self, "side", float(self.side))

    @classmethod
    def of_volume(cls, n: int, x: float) -> "CornerSubcube":
        return cls(x ** (1.0 / n))

    @property
    def label(self) -> str:
        return f"corner(side={self.side:.10g})"

    def check(self, body: BodySpec) -> None:
        if body.shape is not Shape.CUBE:
            raise UnsupportedCombinationError("CornerSubcube is only defined on the unit cube")

    def inside(self, points: np.ndarray) -> np.ndarray:
        return np.all(points <= self.side, axis=1)

    def distance(self, points: np.ndarray, norm: Norm) -> np.ndarray:
        return norm.of(np.maximum(points - self.side, 0.0), axis=1)


Cut = Halfspace | KDimSubcube | CornerSubcube
