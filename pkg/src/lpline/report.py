"""Fit reports and the exact description of optimal-line sets.

An optimal set is one of five shapes:

* ``UniqueLine`` — a single minimiser.
* ``ParameterPolytope`` — convex polytope in (slope, intercept) space; every
  parameter point inside it is optimal (vertical-distance L1).
* ``LineFamilies`` — finitely many normals, each with an interval of offsets
  (orthogonal-distance L1, Linf and Lp solvers; a zero-width interval is a
  single line).
* ``AllLinesThroughPoint`` — a full pencil of optimal lines.
* ``VerticalDegenerate`` — all x equal: every line y = a*(x - x0) + b with
  any slope and intercept b in [b_lo, b_hi] is optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .geometry import (
    IndexDecomposition,
    Line,
    LineHesse,
    LineSI,
    PointSet,
    decompose,
    signed_residuals,
)

__all__ = [
    "UniqueLine",
    "ParameterPolytope",
    "LineFamily",
    "LineFamilies",
    "AllLinesThroughPoint",
    "VerticalDegenerate",
    "OptimalSet",
    "CandidateLine",
    "LinfCertificate",
    "FitReport",
    "line_count",
    "representatives",
]


@dataclass(frozen=True)
class UniqueLine:
    line: Line


@dataclass(frozen=True)
class ParameterPolytope:
    """Vertices of the optimal (a, b) polytope, counter-clockwise, distinct."""

    vertices: tuple[tuple[float, float], ...]
    exact_vertices: Optional[tuple[tuple[Fraction, Fraction], ...]] = None
    at_tolerance: bool = False


@dataclass(frozen=True)
class LineFamily:
    """Lines with fixed normal angle and offsets spanning [c_lo, c_hi]."""

    theta: float
    c_lo: float
    c_hi: float

    @property
    def is_single(self) -> bool:
        return self.c_lo == self.c_hi

    def line_at(self, t: float) -> LineHesse:
        return LineHesse(self.theta, self.c_lo + t * (self.c_hi - self.c_lo))


@dataclass(frozen=True)
class LineFamilies:
    families: tuple[LineFamily, ...]
    at_tolerance: bool = False


@dataclass(frozen=True)
class AllLinesThroughPoint:
    point: tuple[float, float]


@dataclass(frozen=True)
class VerticalDegenerate:
    x0: float
    b_lo: float
    b_hi: float


OptimalSet = Union[
    UniqueLine, ParameterPolytope, LineFamilies, AllLinesThroughPoint, VerticalDegenerate
]


def line_count(opt: OptimalSet) -> float:
    """Number of distinct optimal lines; inf for continuous families."""
    if isinstance(opt, UniqueLine):
        return 1
    if isinstance(opt, ParameterPolytope):
        return 1 if len(opt.vertices) == 1 else math.inf
    if isinstance(opt, LineFamilies):
        if all(f.is_single for f in opt.families):
            return len(opt.families)
        return math.inf
    return math.inf


@dataclass(frozen=True)
class CandidateLine:
    """A line through input points j and k (j > k) with its audit data.

    ``exact`` carries solver-specific rational payloads, e.g. slope/intercept
    and objective for vertical fits, or the squared objective for orthogonal
    fits.
    """

    j: int
    k: int
    line: Line
    objective: float
    decomposition: IndexDecomposition
    certified: bool
    exact: Optional[dict] = None


@dataclass(frozen=True)
class LinfCertificate:
    """Equioscillation witness: edge (k1, k2) on the hull boundary plus a
    third vertex k3 attaining the same residual magnitude with opposite sign."""

    edge: tuple[int, int]
    witness: int
    value: float


@dataclass(frozen=True)
class FitReport:
    solver: str
    norm: float
    distance: str
    objective: float
    line: Line
    optimal_set: OptimalSet
    residuals: tuple[float, ...]
    decomposition: IndexDecomposition
    certificates: tuple = ()
    candidates: tuple = ()
    objective_exact: Optional[Fraction] = None
    objective_sq_exact: Optional[Fraction] = None
    diagnostics: dict = field(default_factory=dict)


def finish_report(
    ps: PointSet,
    solver: str,
    norm: float,
    distance: str,
    objective: float,
    line: Line,
    optimal_set: OptimalSet,
    tol: float,
    **extra,
) -> FitReport:
    """Assemble a report, filling residuals and decomposition from the line."""
    res = tuple(float(v) for v in signed_residuals(ps, line, distance))
    dec = decompose(ps, line, distance, tol)
    return FitReport(
        solver=solver,
        norm=norm,
        distance=distance,
        objective=objective,
        line=line,
        optimal_set=optimal_set,
        residuals=res,
        decomposition=dec,
        **extra,
    )


def representatives(opt: OptimalSet, n: int = 5, span: float = 1.0) -> list[Line]:
    """Up to ``n`` concrete lines spread over an optimal set (for plotting).

    ``span`` scales the slope fan for the unbounded variants.
    """
    ts = [i / (n - 1) for i in range(n)] if n > 1 else [0.5]
    if isinstance(opt, UniqueLine):
        return [opt.line]
    if isinstance(opt, ParameterPolytope):
        verts = opt.vertices
        if len(verts) == 1:
            return [LineSI(*verts[0])]
        out = [LineSI(*v) for v in verts[:n]]
        if len(out) < n:
            ax = sum(v[0] for v in verts) / len(verts)
            bx = sum(v[1] for v in verts) / len(verts)
            out.append(LineSI(ax, bx))
        for t in ts:
            if len(out) >= n:
                break
            v0, v1 = verts[0], verts[1 % len(verts)]
            out.append(LineSI(v0[0] + t * (v1[0] - v0[0]), v0[1] + t * (v1[1] - v0[1])))
        return out[:n]
    if isinstance(opt, LineFamilies):
        out = []
        for fam in opt.families:
            if fam.is_single:
                out.append(fam.line_at(0.0))
            else:
                out.extend(fam.line_at(t) for t in ts)
        return out[: max(n, len(opt.families))]
    if isinstance(opt, AllLinesThroughPoint):
        px, py = opt.point
        out = []
        for i in range(n):
            th = (i + 0.5) * math.pi / n
            nx, ny = math.cos(th), math.sin(th)
            out.append(LineHesse(th, nx * px + ny * py))
        return out
    if isinstance(opt, VerticalDegenerate):
        bmid = 0.5 * (opt.b_lo + opt.b_hi)
        slopes = [span * (i - (n - 1) / 2) for i in range(n)]
        return [LineSI(a, bmid - a * opt.x0) for a in slopes]
    raise TypeError(f"unknown optimal set {opt!r}")
