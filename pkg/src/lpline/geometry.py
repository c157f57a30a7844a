"""Points, lines, residuals and the objective functions every solver shares.

Two line representations are used throughout:

* ``LineSI(a, b)`` is the graph of ``y = a*x + b`` (never vertical).
* ``LineHesse(theta, c)`` is ``{q : <q, n> = c}`` with unit normal
  ``n = (cos theta, sin theta)`` and ``theta in [0, pi)``; ``(c, n)`` and
  ``(-c, -n)`` describe the same line, the angle range fixes one of the two.

Sign conventions: the vertical residual is ``y - (a*x + b)`` (positive above
the line), the orthogonal residual is ``c - <p, n>``.  Index decompositions
put a point into the plus class when it lies on the side the respective
definition singles out: ``y > a*x + b`` for the vertical distance and
``<p, n> > c`` for the orthogonal one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import EmptySet, InsufficientPoints, VerticalLineForAlgebraic

__all__ = [
    "Point",
    "PointSet",
    "LineSI",
    "LineHesse",
    "Line",
    "IndexDecomposition",
    "ScatterStats",
    "si_to_hesse",
    "hesse_to_si",
    "vertical_residual",
    "orthogonal_residual",
    "decompose",
    "objective",
    "scatter",
    "default_tol",
]


@dataclass(frozen=True)
class Point:
    """A planar point with an integer multiplicity (weight)."""

    x: float
    y: float
    mult: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in point ({self.x}, {self.y})")
        if not isinstance(self.mult, int) or isinstance(self.mult, bool) or self.mult < 1:
            raise ValueError(f"multiplicity must be an integer >= 1, got {self.mult!r}")


@dataclass(frozen=True)
class LineSI:
    """Line in slope-intercept form, the graph of y = a*x + b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"non-finite line parameters ({self.a}, {self.b})")

    def y_at(self, x: float) -> float:
        return self.a * x + self.b


@dataclass(frozen=True)
class LineHesse:
    """Line {q : <q, n> = c} with n = (cos theta, sin theta), theta in [0, pi).

    ``nx``/``ny`` cache the normal components.  They default to the cosine and
    sine of ``theta`` but converters may pass sharper values; keeping them
    avoids the precision loss of a round trip through the angle for extreme
    slopes.
    """

    theta: float
    c: float
    nx: float = field(default=None, compare=False, repr=False)  # type: ignore[assignment]
    ny: float = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.c)):
            raise ValueError(f"non-finite line parameters ({self.theta}, {self.c})")
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"theta must lie in [0, pi), got {self.theta}")
        if self.nx is None or self.ny is None:
            object.__setattr__(self, "nx", math.cos(self.theta))
            object.__setattr__(self, "ny", math.sin(self.theta))

    @property
    def normal(self) -> tuple[float, float]:
        return (self.nx, self.ny)

    @property
    def is_vertical(self) -> bool:
        return self.ny == 0.0

    @classmethod
    def from_normal(cls, nx: float, ny: float, c: float) -> "LineHesse":
        """Canonical Hesse form from any (possibly unnormalised) normal."""
        h = math.hypot(nx, ny)
        if h == 0.0:
            raise ValueError("zero normal vector")
        nx, ny, c = nx / h, ny / h, c / h
        if ny < 0.0 or (ny == 0.0 and nx < 0.0):
            nx, ny, c = -nx, -ny, -c
        if ny == 0.0:
            nx, ny = 1.0, 0.0  # drop any -0.0 component
        theta = math.atan2(ny, nx)
        if theta >= math.pi:  # atan2(+0.0, -1.0) == pi
            theta = 0.0
            nx, ny, c = -nx, -ny, -c
        return cls(theta, c, nx=nx, ny=ny)


Line = Union[LineSI, LineHesse]


def si_to_hesse(line: LineSI) -> LineHesse:
    """Hesse normal form of a slope-intercept line."""
    h = math.hypot(1.0, line.a)
    return LineHesse.from_normal(-line.a / h, 1.0 / h, line.b / h)


def hesse_to_si(line: LineHesse) -> LineSI:
    """Slope-intercept form; raises for vertical lines."""
    if line.ny == 0.0:
        raise VerticalLineForAlgebraic("vertical line has no slope-intercept form")
    return LineSI(-line.nx / line.ny, line.c / line.ny)


class PointSet:
    """Immutable, ordered collection of points with cached statistics.

    The input order is preserved: index ``i`` in decompositions, residual
    vectors and certificates always refers to the i-th point as given.
    Duplicate coordinates are allowed; each solver checks its own
    degeneracy preconditions.
    """

    __slots__ = ("points", "m_eff", "xs", "ys", "ws", "_scatter")

    def __init__(self, points: Iterable[Point]):
        pts = tuple(points)
        if not pts:
            raise EmptySet("point set must be nonempty")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "m_eff", sum(p.mult for p in pts))
        object.__setattr__(self, "xs", np.array([p.x for p in pts], dtype=np.float64))
        object.__setattr__(self, "ys", np.array([p.y for p in pts], dtype=np.float64))
        object.__setattr__(self, "ws", np.array([p.mult for p in pts], dtype=np.float64))
        object.__setattr__(self, "_scatter", _compute_scatter(self))

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointSet({list(self.points)!r})"

    @classmethod
    def from_xy(cls, xs: Sequence[float], ys: Sequence[float], mults: Sequence[int] | None = None) -> "PointSet":
        if mults is None:
            mults = [1] * len(xs)
        return cls(Point(float(x), float(y), int(m)) for x, y, m in zip(xs, ys, mults))

    @property
    def centroid(self) -> Point:
        return self._scatter.centroid

    @property
    def scatter_stats(self) -> "ScatterStats":
        return self._scatter

    def coordinate_scale(self) -> float:
        """1 + largest coordinate magnitude; the reference scale for tolerances."""
        return 1.0 + max(float(np.max(np.abs(self.xs))), float(np.max(np.abs(self.ys))))

    def require_m_eff(self, n: int) -> None:
        if self.m_eff < n:
            raise InsufficientPoints(f"need total multiplicity >= {n}, got {self.m_eff}")


@dataclass(frozen=True)
class ScatterStats:
    """Multiplicity-weighted centroid and centered second moments."""

    centroid: Point
    s_xx: float
    s_xy: float
    s_yy: float


def _compute_scatter(ps: PointSet) -> ScatterStats:
    w = ps.ws
    wsum = w.sum()
    xbar = float((w * ps.xs).sum() / wsum)
    ybar = float((w * ps.ys).sum() / wsum)
    dx = ps.xs - xbar
    dy = ps.ys - ybar
    return ScatterStats(
        centroid=Point(xbar, ybar),
        s_xx=float((w * dx * dx).sum()),
        s_xy=float((w * dx * dy).sum()),
        s_yy=float((w * dy * dy).sum()),
    )


def scatter(ps: PointSet) -> ScatterStats:
    """Centroid and centered second moments of a point set."""
    return ps.scatter_stats


def default_tol(ps: PointSet) -> float:
    """Default residual classification tolerance, scaled to the data."""
    return 1e-9 * ps.coordinate_scale()


def vertical_residual(p: Point, line: LineSI) -> float:
    """Signed vertical residual y - (a*x + b); positive above the line."""
    return p.y - (line.a * p.x + line.b)


def orthogonal_residual(p: Point, line: LineHesse) -> float:
    """Signed orthogonal residual c - <p, n>; |value| is the point-line distance."""
    return line.c - (p.x * line.nx + p.y * line.ny)


@dataclass(frozen=True)
class IndexDecomposition:
    """Partition of point indices into above / on / below a line.

    The weighted counts are multiplicity sums over the three classes.
    """

    j_plus: tuple[int, ...]
    j_zero: tuple[int, ...]
    j_minus: tuple[int, ...]
    w_plus: int
    w_zero: int
    w_minus: int


def _as_si(line: Line) -> LineSI:
    if isinstance(line, LineSI):
        return line
    if line.is_vertical:
        raise VerticalLineForAlgebraic("vertical line cannot be used with the vertical distance")
    return hesse_to_si(line)


def _as_hesse(line: Line) -> LineHesse:
    return line if isinstance(line, LineHesse) else si_to_hesse(line)


def orientation_values(ps: PointSet, line: Line, kind: str) -> np.ndarray:
    """Per-point signed side values in the plus-class orientation of `kind`."""
    if kind == "vertical":
        l = _as_si(line)
        return ps.ys - (l.a * ps.xs + l.b)
    if kind == "orthogonal":
        l = _as_hesse(line)
        return (ps.xs * l.nx + ps.ys * l.ny) - l.c
    raise ValueError(f"unknown distance kind {kind!r}")


def signed_residuals(ps: PointSet, line: Line, kind: str) -> np.ndarray:
    """Per-point signed residuals in this module's sign convention."""
    s = orientation_values(ps, line, kind)
    return s if kind == "vertical" else -s


def decompose(ps: PointSet, line: Line, kind: str, tol: float = 0.0) -> IndexDecomposition:
    """Partition indices by side of the line, with a |residual| <= tol tie band."""
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    s = orientation_values(ps, line, kind)
    plus, zero, minus = [], [], []
    wp = wz = wm = 0
    for i, (v, p) in enumerate(zip(s, ps.points)):
        if abs(v) <= tol:
            zero.append(i)
            wz += p.mult
        elif v > 0.0:
            plus.append(i)
            wp += p.mult
        else:
            minus.append(i)
            wm += p.mult
    return IndexDecomposition(tuple(plus), tuple(zero), tuple(minus), wp, wz, wm)


def objective(ps: PointSet, line: Line, norm: float, kind: str) -> float:
    """Weighted residual aggregate: sum of mult * |r|^p for finite p, max |r| for inf.

    For finite ``p`` this is the raw power sum, not its p-th root.
    """
    if norm != math.inf and norm < 1.0:
        raise ValueError(f"norm exponent must be >= 1 or inf, got {norm}")
    r = np.abs(orientation_values(ps, line, kind))
    if norm == math.inf:
        return float(r.max())
    if norm == 1.0:
        return float((ps.ws * r).sum())
    if norm == 2.0:
        return float((ps.ws * r * r).sum())
    return float((ps.ws * r**norm).sum())
