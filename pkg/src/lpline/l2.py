"""Closed-form least-squares solvers.

The vertical-distance optimum is ordinary linear regression; the orthogonal
one is the line through the centroid whose normal spans the eigenspace of the
smallest eigenvalue of the 2x2 scatter matrix.  Both use the explicit 2x2
closed forms, no general eigensolver is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .geometry import (
    LineHesse,
    LineSI,
    PointSet,
    default_tol,
    objective,
    si_to_hesse,
)
from .report import (
    AllLinesThroughPoint,
    FitReport,
    UniqueLine,
    VerticalDegenerate,
    finish_report,
)

__all__ = ["EigenInfo", "L2Report", "CoincidenceResult", "fit_algebraic_l2", "fit_geometric_l2", "l2_coincidence"]

#: Relative band for the degenerate-case split of the scatter matrix.
DEGENERACY_REL_TOL = 1e-12


@dataclass(frozen=True)
class EigenInfo:
    """Eigenvalues of the scatter matrix and the discriminant d used for them."""

    lambda_min: float
    lambda_max: float
    d: float


@dataclass(frozen=True)
class L2Report:
    report: FitReport
    eigen: Optional[EigenInfo] = None


def _all_x_equal(ps: PointSet) -> bool:
    x0 = ps.points[0].x
    return all(p.x == x0 for p in ps.points)


def fit_algebraic_l2(ps: PointSet) -> L2Report:
    """Unique regression line, slope s_xy/s_xx, through the centroid.

    When every x coincides the whole pencil y = a*(x - x0) + ybar is optimal
    and a ``VerticalDegenerate`` set is returned instead.
    """
    ps.require_m_eff(2)
    st = ps.scatter_stats
    tol = default_tol(ps)
    xbar, ybar = st.centroid.x, st.centroid.y
    if _all_x_equal(ps):
        rep = LineSI(0.0, ybar)
        fit = finish_report(
            ps, "l2", 2.0, "vertical", objective(ps, rep, 2.0, "vertical"), rep,
            VerticalDegenerate(xbar, ybar, ybar), tol,
            diagnostics={"degenerate": "all_x_equal"},
        )
        return L2Report(fit)
    a = st.s_xy / st.s_xx
    line = LineSI(a, ybar - a * xbar)
    fit = finish_report(
        ps, "l2", 2.0, "vertical", objective(ps, line, 2.0, "vertical"), line,
        UniqueLine(line), tol,
    )
    return L2Report(fit)


def _eigen(st) -> EigenInfo:
    d = math.hypot(st.s_xx - st.s_yy, 2.0 * st.s_xy)
    half_tr = 0.5 * (st.s_xx + st.s_yy)
    return EigenInfo(half_tr - 0.5 * d, half_tr + 0.5 * d, d)


def geometric_slope(s_xx: float, s_xy: float, s_yy: float, d: float) -> float:
    """Slope 2*s_xy / (s_xx - s_yy + d), evaluated without cancellation."""
    if s_xx >= s_yy:
        return 2.0 * s_xy / (s_xx - s_yy + d)
    return (d + (s_yy - s_xx)) / (2.0 * s_xy)


def fit_geometric_l2(ps: PointSet) -> L2Report:
    """Orthogonal least-squares line through the centroid.

    Case split on the scatter matrix: a two-dimensional smallest eigenspace
    makes every line through the centroid optimal; s_xy = 0 with s_xx < s_yy
    gives the vertical line x = xbar; otherwise the optimum is unique with
    slope 2*s_xy / (s_xx - s_yy + d).
    """
    ps.require_m_eff(2)
    st = ps.scatter_stats
    eig = _eigen(st)
    tol = default_tol(ps)
    xbar, ybar = st.centroid.x, st.centroid.y
    band = DEGENERACY_REL_TOL * (st.s_xx + st.s_yy)
    diagnostics = {}
    if abs(st.s_xy) <= band and abs(st.s_xx - st.s_yy) <= band:
        diagnostics["near_degenerate"] = True

    if st.s_xy == 0.0:
        if st.s_xx == st.s_yy:
            rep = LineHesse.from_normal(0.0, 1.0, ybar)
            fit = finish_report(
                ps, "l2", 2.0, "orthogonal",
                objective(ps, rep, 2.0, "orthogonal"), rep,
                AllLinesThroughPoint((xbar, ybar)), tol,
                diagnostics={"degenerate": "isotropic_scatter"},
            )
            return L2Report(fit, eig)
        if st.s_xx < st.s_yy:
            line = LineHesse.from_normal(1.0, 0.0, xbar)
            fit = finish_report(
                ps, "l2", 2.0, "orthogonal",
                objective(ps, line, 2.0, "orthogonal"), line,
                UniqueLine(line), tol, diagnostics=diagnostics,
            )
            return L2Report(fit, eig)

    a = geometric_slope(st.s_xx, st.s_xy, st.s_yy, eig.d)
    line = si_to_hesse(LineSI(a, ybar - a * xbar))
    fit = finish_report(
        ps, "l2", 2.0, "orthogonal", objective(ps, line, 2.0, "orthogonal"),
        line, UniqueLine(line), tol, diagnostics=diagnostics,
    )
    return L2Report(fit, eig)


@dataclass(frozen=True)
class CoincidenceResult:
    coincide: bool
    branch: str  # "collinear" | "sxy_zero_sxx_ge_syy" | "none"
    algebraic: L2Report
    geometric: L2Report


def l2_coincidence(ps: PointSet) -> CoincidenceResult:
    """Do the vertical and orthogonal least-squares optima agree?

    They do exactly when the points are collinear or when s_xy = 0 with
    s_xx >= s_yy; the result reports which branch fired.
    """
    alg = fit_algebraic_l2(ps)
    geo = fit_geometric_l2(ps)
    st = ps.scatter_stats
    eig = geo.eigen

    if eig is not None and eig.lambda_min <= DEGENERACY_REL_TOL * max(1.0, st.s_xx + st.s_yy):
        branch = "collinear"
    elif st.s_xy == 0.0 and st.s_xx >= st.s_yy:
        branch = "sxy_zero_sxx_ge_syy"
    else:
        branch = "none"

    opt = geo.report.optimal_set
    if isinstance(opt, AllLinesThroughPoint):
        coincide = True  # the regression line passes through the centroid
    elif isinstance(alg.report.optimal_set, VerticalDegenerate):
        g = geo.report.line
        coincide = isinstance(g, LineHesse) and g.is_vertical
    else:
        g = geo.report.line
        if isinstance(g, LineHesse) and g.is_vertical:
            coincide = False
        else:
            ga = -g.nx / g.ny
            gb = g.c / g.ny
            al = alg.report.line
            scale = 1.0 + abs(al.a) + abs(al.b)
            coincide = abs(ga - al.a) <= 1e-9 * scale and abs(gb - al.b) <= 1e-9 * scale
    return CoincidenceResult(coincide, branch, alg, geo)
