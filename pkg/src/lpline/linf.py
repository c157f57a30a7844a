"""Minimax solvers: minimise the largest residual magnitude.

For a fixed direction the optimal offset is the mid-range of the point
projections, so only directions matter, and the optimal direction is always
parallel to an edge of the convex hull.  Both solvers therefore enumerate
hull edges: half of the smallest vertical (resp. orthogonal) width over edge
directions is the optimum.  The vertical-distance optimum is unique; the
orthogonal one is a finite set of lines, one per width-minimising edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._exact import canonical_direction, exact_points
from .geometry import (
    LineHesse,
    LineSI,
    PointSet,
    default_tol,
)
from .hull import build_hull
from .report import (
    AllLinesThroughPoint,
    FitReport,
    LineFamilies,
    LineFamily,
    LinfCertificate,
    UniqueLine,
    VerticalDegenerate,
    finish_report,
)

__all__ = ["midrange_offset", "MidrangeResult", "fit_algebraic_linf", "fit_geometric_linf"]


@dataclass(frozen=True)
class MidrangeResult:
    """Optimal offset for one direction: mid-range of the projections."""

    offset: float
    half_range: float
    idx_min: int
    idx_max: int


def midrange_offset(ps: PointSet, kind: str, direction: float) -> MidrangeResult:
    """Unique max-residual-minimising offset for a fixed direction.

    ``direction`` is a slope for kind="vertical" and a normal angle for
    kind="orthogonal".
    """
    if kind == "vertical":
        vals = ps.ys - direction * ps.xs
    elif kind == "orthogonal":
        vals = math.cos(direction) * ps.xs + math.sin(direction) * ps.ys
    else:
        raise ValueError(f"unknown distance kind {kind!r}")
    i_min = int(vals.argmin())
    i_max = int(vals.argmax())
    lo, hi = float(vals[i_min]), float(vals[i_max])
    return MidrangeResult(0.5 * (lo + hi), 0.5 * (hi - lo), i_min, i_max)


def _vertical_degenerate_linf(ps: PointSet, tol: float) -> FitReport:
    ys = sorted(Fraction(p.y) for p in ps.points)
    b0 = (ys[0] + ys[-1]) / 2
    half = (ys[-1] - ys[0]) / 2
    x0 = ps.points[0].x
    rep = LineSI(0.0, float(b0))
    return finish_report(
        ps, "linf", math.inf, "vertical", float(half), rep,
        VerticalDegenerate(x0, float(b0), float(b0)), tol,
        objective_exact=half,
        diagnostics={"degenerate": "all_x_equal"},
    )


def fit_algebraic_linf(ps: PointSet, tol: float | None = None) -> FitReport:
    """The unique line minimising the largest vertical distance.

    Exact ties between edge candidates can only arise with repeated
    x-coordinates; then the lexicographically smallest (slope, intercept)
    is returned and the report flags the degeneracy.
    """
    ps.require_m_eff(2)
    if tol is None:
        tol = default_tol(ps)
    pts = exact_points(ps)
    if all(q[0] == pts[0][0] for q in pts):
        return _vertical_degenerate_linf(ps, tol)

    hp = build_hull(ps)
    if hp.degenerate == "segment":
        (k, l) = hp.edges[0]
        a = (pts[l][1] - pts[k][1]) / (pts[l][0] - pts[k][0])
        b = pts[k][1] - a * pts[k][0]
        line = LineSI(float(a), float(b))
        return finish_report(
            ps, "linf", math.inf, "vertical", 0.0, line, UniqueLine(line), tol,
            objective_exact=Fraction(0),
            diagnostics={"degenerate": "collinear"},
        )

    verts = hp.vertices
    cands = []  # (half_width, a, b0, edge, witness)
    for (k, l) in hp.edges:
        if pts[k][0] == pts[l][0]:
            continue
        a = (pts[l][1] - pts[k][1]) / (pts[l][0] - pts[k][0])
        betas = [(pts[v][1] - a * pts[v][0], v) for v in verts]
        bmin, vmin = min(betas)
        bmax, vmax = max(betas)
        b0 = (bmax + bmin) / 2
        half = (bmax - bmin) / 2
        beta_edge = pts[k][1] - a * pts[k][0]
        witness = vmin if beta_edge == bmax else vmax
        cands.append((half, a, b0, (k, l), witness))

    fmin = min(c[0] for c in cands)
    optimal = sorted((c for c in cands if c[0] == fmin), key=lambda c: (c[1], c[2]))
    distinct = sorted({(c[1], c[2]) for c in optimal})
    half, a, b0, edge, witness = optimal[0]
    near = [c for c in cands if c[0] != fmin and float(c[0]) <= float(fmin) + tol * (1.0 + float(fmin))]

    line = LineSI(float(a), float(b0))
    cert = LinfCertificate(edge=edge, witness=witness, value=float(half))
    diagnostics = {"n_edges": len(cands)}
    if len(distinct) > 1:
        diagnostics["exact_tie_count"] = len(distinct)
    if near:
        diagnostics["near_degenerate"] = True
    return finish_report(
        ps, "linf", math.inf, "vertical", float(half), line, UniqueLine(line), tol,
        certificates=(cert,),
        objective_exact=half,
        diagnostics=diagnostics,
    )


def fit_geometric_linf(ps: PointSet, tol: float | None = None) -> FitReport:
    """All lines minimising the largest orthogonal distance.

    One candidate per hull edge: the line parallel to the edge at half the
    directional width.  All edges attaining the minimal width contribute a
    line; near-ties within ``tol`` are included and flagged.
    """
    ps.require_m_eff(2)
    if tol is None:
        tol = default_tol(ps)
    pts = exact_points(ps)
    if all(q == pts[0] for q in pts):
        cx, cy = ps.centroid.x, ps.centroid.y
        rep = LineHesse.from_normal(0.0, 1.0, cy)
        return finish_report(
            ps, "linf", math.inf, "orthogonal", 0.0, rep,
            AllLinesThroughPoint((cx, cy)), tol,
            diagnostics={"degenerate": "all_points_identical"},
        )

    hp = build_hull(ps)
    if hp.degenerate == "segment":
        (k, l) = hp.edges[0]
        dx = pts[l][0] - pts[k][0]
        dy = pts[l][1] - pts[k][1]
        sk = dx * pts[k][1] - dy * pts[k][0]
        h = math.hypot(float(dx), float(dy))
        line = LineHesse.from_normal(-float(dy) / h, float(dx) / h, float(sk) / h)
        return finish_report(
            ps, "linf", math.inf, "orthogonal", 0.0, line, UniqueLine(line), tol,
            diagnostics={"degenerate": "collinear"},
        )

    verts = hp.vertices
    cands = []  # (width_sq/4, line_key, dx, dy, s_mid, edge, witness, half_float)
    for (k, l) in hp.edges:
        dx = pts[l][0] - pts[k][0]
        dy = pts[l][1] - pts[k][1]
        b_len2 = dx * dx + dy * dy
        crosses = [(dx * (pts[v][1] - pts[k][1]) - dy * (pts[v][0] - pts[k][0]), v) for v in verts]
        m_val, witness = max(crosses)
        sk = dx * pts[k][1] - dy * pts[k][0]
        s_mid = sk + m_val / 2
        quarter_sq = m_val * m_val / (4 * b_len2)
        dcan = canonical_direction(dx, dy)
        mu = dx if dcan[0] != 0 else dy
        key = (dcan, s_mid / mu)
        half_float = 0.5 * float(m_val) / math.sqrt(float(b_len2))
        cands.append((quarter_sq, key, dx, dy, s_mid, (k, l), witness, half_float))

    fmin_sq = min(c[0] for c in cands)
    obj = math.sqrt(float(fmin_sq))
    band = obj + tol * (1.0 + obj)
    chosen = [c for c in cands if c[0] == fmin_sq]
    widened = [c for c in cands if c[0] != fmin_sq and c[7] <= band]
    at_tol = bool(widened)

    by_line: dict = {}
    certs = []
    for c in chosen + widened:
        if c[1] not in by_line:
            by_line[c[1]] = c
            certs.append(LinfCertificate(edge=c[5], witness=c[6], value=c[7]))

    fams = []
    for _, key, dx, dy, s_mid, edge, witness, hf in by_line.values():
        h = math.hypot(float(dx), float(dy))
        line = LineHesse.from_normal(-float(dy) / h, float(dx) / h, float(s_mid) / h)
        fams.append(LineFamily(line.theta, line.c, line.c))
    fams.sort(key=lambda f: (f.theta, f.c_lo))

    if len(fams) == 1 and not at_tol:
        rep = LineHesse(fams[0].theta, fams[0].c_lo)
        optimal_set = UniqueLine(rep)
    else:
        optimal_set = LineFamilies(tuple(fams), at_tolerance=at_tol)
        rep = LineHesse(fams[0].theta, fams[0].c_lo)

    return finish_report(
        ps, "linf", math.inf, "orthogonal", obj, rep, optimal_set, tol,
        certificates=tuple(certs),
        objective_sq_exact=fmin_sq,
        diagnostics={"n_edges": len(cands), "n_optimal_lines": len({c[1] for c in chosen})},
    )
