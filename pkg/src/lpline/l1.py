"""Exact enumerative solvers for the sum-of-distances objective.

Every optimal set contains a line through two input points, so the solvers
enumerate all point pairs, evaluate each candidate exactly in rational
arithmetic, keep the certified minimisers and assemble the complete optimal
set: the convex hull of the optimal candidates in (slope, intercept) space
for the vertical distance, or normal-wise offset intervals for the
orthogonal one.

A candidate's offset is optimal for its own direction exactly when the
weighted counts of points above/on/below it satisfy |w+ - w-| <= w0; that
certificate is attached to every candidate for auditing.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._exact import canonical_direction, exact_points, monotone_chain
from .geometry import (
    IndexDecomposition,
    LineHesse,
    LineSI,
    PointSet,
    default_tol,
)
from .report import (
    AllLinesThroughPoint,
    CandidateLine,
    FitReport,
    LineFamilies,
    LineFamily,
    ParameterPolytope,
    UniqueLine,
    VerticalDegenerate,
    finish_report,
)

__all__ = ["fit_algebraic_l1", "fit_geometric_l1", "l1_certificate"]


def l1_certificate(dec: IndexDecomposition) -> bool:
    """Offset optimality in the line's own direction: |w+ - w-| <= w0."""
    return abs(dec.w_plus - dec.w_minus) <= dec.w_zero


def _decomposition_from_signs(signs, mults) -> IndexDecomposition:
    plus, zero, minus = [], [], []
    wp = wz = wm = 0
    for i, (s, m) in enumerate(zip(signs, mults)):
        if s > 0:
            plus.append(i)
            wp += m
        elif s < 0:
            minus.append(i)
            wm += m
        else:
            zero.append(i)
            wz += m
    return IndexDecomposition(tuple(plus), tuple(zero), tuple(minus), wp, wz, wm)


def _vertical_degenerate_l1(ps: PointSet, tol: float) -> FitReport:
    # All x equal: the slope is irrelevant, minimise sum w|y - b| over b.
    pts = exact_points(ps)
    mults = [p.mult for p in ps.points]
    x0 = pts[0][0]
    ys = sorted({q[1] for q in pts})
    values = {b: sum(m * abs(q[1] - b) for q, m in zip(pts, mults)) for b in ys}
    fmin = min(values.values())
    best = [b for b in ys if values[b] == fmin]
    b_lo, b_hi = min(best), max(best)
    rep = LineSI(0.0, float((b_lo + b_hi) / 2))
    return finish_report(
        ps, "l1", 1.0, "vertical", float(fmin), rep,
        VerticalDegenerate(float(x0), float(b_lo), float(b_hi)), tol,
        objective_exact=fmin,
        diagnostics={"degenerate": "all_x_equal"},
    )


def fit_algebraic_l1(ps: PointSet, tol: float | None = None) -> FitReport:
    """All lines minimising the weighted sum of vertical distances.

    The optimal set is the convex hull, in (a, b) parameter space, of the
    optimal two-point candidate lines; its vertices are reported exactly.
    """
    ps.require_m_eff(2)
    if tol is None:
        tol = default_tol(ps)
    pts = exact_points(ps)
    mults = [p.mult for p in ps.points]
    if all(q[0] == pts[0][0] for q in pts):
        return _vertical_degenerate_l1(ps, tol)

    n = len(pts)
    candidates = []
    by_params: dict[tuple[Fraction, Fraction], Fraction] = {}
    for j in range(n):
        for k in range(j):
            xj, yj = pts[j]
            xk, yk = pts[k]
            if xj == xk:
                continue
            a = (yj - yk) / (xj - xk)
            b = (yk * xj - yj * xk) / (xj - xk)
            res = [q[1] - a * q[0] - b for q in pts]
            f = sum(m * abs(r) for m, r in zip(mults, res))
            dec = _decomposition_from_signs(res, mults)
            candidates.append(
                CandidateLine(
                    j, k, LineSI(float(a), float(b)), float(f), dec,
                    certified=l1_certificate(dec),
                    exact={"a": a, "b": b, "objective": f},
                )
            )
            key = (a, b)
            if key not in by_params or f < by_params[key]:
                by_params[key] = f

    fmin = min(c.exact["objective"] for c in candidates if c.certified)
    band = float(fmin) + tol * (1.0 + float(fmin))
    optimal_params = sorted(k for k, f in by_params.items() if f == fmin)
    widened = sorted(k for k, f in by_params.items() if f != fmin and float(f) <= band)
    at_tol = bool(widened)
    e_params = optimal_params + widened

    if len(e_params) == 1:
        a, b = e_params[0]
        verts = [(a, b)]
    else:
        hull_idx = monotone_chain(e_params)
        verts = [e_params[i] for i in hull_idx]

    rep_a = sum(v[0] for v in verts) / len(verts)
    rep_b = sum(v[1] for v in verts) / len(verts)
    rep = LineSI(float(rep_a), float(rep_b))
    if len(verts) == 1 and not at_tol:
        optimal_set = UniqueLine(LineSI(float(verts[0][0]), float(verts[0][1])))
    else:
        optimal_set = ParameterPolytope(
            tuple((float(a), float(b)) for a, b in verts),
            exact_vertices=tuple(verts),
            at_tolerance=at_tol,
        )
    members = set(e_params)
    certs = tuple(c for c in candidates if (c.exact["a"], c.exact["b"]) in members)
    return finish_report(
        ps, "l1", 1.0, "vertical", float(fmin), rep, optimal_set, tol,
        certificates=certs,
        candidates=tuple(candidates),
        objective_exact=fmin,
        diagnostics={"n_candidates": len(candidates), "n_optimal": len(optimal_params)},
    )


def _pair_line_hesse(dx: Fraction, dy: Fraction, sk: Fraction) -> LineHesse:
    # Line {q : cross(d, q) = sk} in canonical Hesse form.
    h = math.hypot(float(dx), float(dy))
    return LineHesse.from_normal(-float(dy) / h, float(dx) / h, float(sk) / h)


def fit_geometric_l1(ps: PointSet, tol: float | None = None) -> FitReport:
    """All lines minimising the weighted sum of orthogonal distances.

    Candidates through two points compare exactly via the rational square
    A^2/B of their objective A/sqrt(B); optimal parallel candidates merge
    into offset intervals.
    """
    ps.require_m_eff(2)
    if tol is None:
        tol = default_tol(ps)
    pts = exact_points(ps)
    mults = [p.mult for p in ps.points]
    if all(q == pts[0] for q in pts):
        cx, cy = ps.centroid.x, ps.centroid.y
        rep = LineHesse.from_normal(0.0, 1.0, cy)
        return finish_report(
            ps, "l1", 1.0, "orthogonal", 0.0, rep,
            AllLinesThroughPoint((cx, cy)), tol,
            objective_exact=Fraction(0),
            diagnostics={"degenerate": "all_points_identical"},
        )

    n = len(pts)
    candidates = []
    # exact line identity -> (objective^2, direction, dx, dy, offset in canonical units)
    lines: dict = {}
    for j in range(n):
        for k in range(j):
            dx = pts[j][0] - pts[k][0]
            dy = pts[j][1] - pts[k][1]
            if dx == 0 and dy == 0:
                continue
            crosses = [dx * (q[1] - pts[k][1]) - dy * (q[0] - pts[k][0]) for q in pts]
            a_sum = sum(m * abs(cr) for m, cr in zip(mults, crosses))
            b_len2 = dx * dx + dy * dy
            fsq = a_sum * a_sum / b_len2
            dec = _decomposition_from_signs(crosses, mults)
            dcan = canonical_direction(dx, dy)
            mu = dx if dcan[0] != 0 else dy
            sk = dx * pts[k][1] - dy * pts[k][0]  # cross(d, p_k)
            key = (dcan, sk / mu)
            fval = float(a_sum) / math.sqrt(float(b_len2))
            candidates.append(
                CandidateLine(
                    j, k, _pair_line_hesse(dx, dy, sk), fval, dec,
                    certified=l1_certificate(dec),
                    exact={"objective_sq": fsq, "abs_cross_sum": a_sum, "len_sq": b_len2},
                )
            )
            if key not in lines or fsq < lines[key][0]:
                lines[key] = (fsq, dcan, dx, dy, sk / mu, fval)

    certified_min = min(c.exact["objective_sq"] for c in candidates if c.certified)
    fmin = math.sqrt(float(certified_min))
    band = fmin + tol * (1.0 + fmin)
    optimal = [v for v in lines.values() if v[0] == certified_min]
    widened = [v for v in lines.values() if v[0] != certified_min and v[5] <= band]
    at_tol = bool(widened)

    families = []
    groups: dict = {}
    for fsq, dcan, dx, dy, soff, fval in optimal + widened:
        groups.setdefault(dcan, []).append((soff, dx, dy))
    for dcan, entries in groups.items():
        entries.sort(key=lambda e: e[0])
        hesse_lines = []
        for soff, dx, dy in (entries[0], entries[-1]):
            mu = dx if dcan[0] != 0 else dy
            hesse_lines.append(_pair_line_hesse(dx, dy, soff * mu))
        lo, hi = hesse_lines
        if hi.c < lo.c:
            lo, hi = hi, lo
        families.append(LineFamily(lo.theta, lo.c, hi.c))
    families.sort(key=lambda f: (f.theta, f.c_lo))

    if len(families) == 1 and families[0].is_single and not at_tol:
        fam = families[0]
        rep = LineHesse(fam.theta, fam.c_lo)
        optimal_set = UniqueLine(rep)
    else:
        optimal_set = LineFamilies(tuple(families), at_tolerance=at_tol)
        fam = families[0]
        rep = fam.line_at(0.5)

    certs = tuple(
        c for c in candidates
        if c.certified and c.exact["objective_sq"] == certified_min
    )
    return finish_report(
        ps, "l1", 1.0, "orthogonal", fmin, rep, optimal_set, tol,
        certificates=certs,
        candidates=tuple(candidates),
        objective_sq_exact=certified_min,
        diagnostics={
            "n_candidates": len(candidates),
            "n_optimal_lines": len(optimal),
        },
    )
