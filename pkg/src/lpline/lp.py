"""Numerical solvers for the power-sum objective with exponent p > 1.

The vertical-distance problem is smooth and strictly convex in (a, b); a
damped Newton iteration solves it, with a smoothed surrogate
sum w*(r^2 + eps^2)^(p/2) driven through a continuation schedule for
1 < p < 2 where the true Hessian blows up at zero residuals.  Several
starts must agree before the result is reported.

The orthogonal-distance problem is convex only in the offset: for each
normal angle the unique optimal offset comes from a derivative bisection,
and the angle is scanned over [0, pi) and refined around every local
basin.  All basins attaining the global value are reported; no claim is
made that the list is exhaustive for exponents where the optimal normal
set could in principle be infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import (
    LineHesse,
    LineSI,
    PointSet,
    default_tol,
    objective,
    si_to_hesse,
)
from .errors import NoConvergence
from .l2 import fit_algebraic_l2
from .report import (
    AllLinesThroughPoint,
    FitReport,
    LineFamilies,
    LineFamily,
    UniqueLine,
    VerticalDegenerate,
    finish_report,
)

__all__ = ["LpSolverConfig", "fit_algebraic_lp", "fit_geometric_lp", "lp_gradient", "golden_section"]


@dataclass(frozen=True)
class LpSolverConfig:
    p: float
    grad_tol: float = 1e-10
    max_iter: int = 200
    angle_samples: int = 720
    smoothing_eps: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if self.grad_tol <= 0.0:
            raise ValueError("grad_tol must be positive")
        if self.angle_samples < 8:
            raise ValueError("angle_samples must be at least 8")


def golden_section(fn, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Minimise a unimodal function on [lo, hi]; returns (x, fn(x))."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = fn(x2)
    x = 0.5 * (lo + hi)
    return x, fn(x)


def lp_gradient(ps: PointSet, params, p: float, kind: str) -> np.ndarray:
    """Analytic gradient of the power-sum objective.

    ``params`` is (a, b) for kind="vertical" and (c, theta) for
    kind="orthogonal"; the returned components follow the same order.
    """
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    w = ps.ws
    if kind == "vertical":
        a, b = params
        r = ps.ys - a * ps.xs - b
        s = p * np.sign(r) * np.abs(r) ** (p - 1.0)
        return np.array([-(w * ps.xs * s).sum(), -(w * s).sum()])
    if kind == "orthogonal":
        c, theta = params
        nx, ny = math.cos(theta), math.sin(theta)
        gam = nx * ps.xs + ny * ps.ys
        dgam = -ps.xs * ny + ps.ys * nx  # d<p, n>/dtheta
        s = p * np.sign(c - gam) * np.abs(c - gam) ** (p - 1.0)
        return np.array([(w * s).sum(), -(w * s * dgam).sum()])
    raise ValueError(f"unknown distance kind {kind!r}")


def _stationarity_vertical(ps: PointSet, a: float, b: float, p: float):
    """Residuals of the two balance equations, their float allowances, and f.

    A residual that vanishes at the optimum cannot be represented more
    finely than the rounding error of y - a*x - b, and for p < 2 its
    |r|^(p-1) term swings by (rounding error)^(p-1), far above machine
    epsilon.  The allowance returned here is the total swing attainable by
    sub-resolution movement of the near-zero residuals; an iterate within
    it of balance is optimal to double precision.
    """
    r = ps.ys - a * ps.xs - b
    ar = np.abs(r)
    mag = ar ** (p - 1.0)
    s = np.sign(r) * mag
    f = float((ps.ws * ar**p).sum())
    eq_b = abs(float((ps.ws * s).sum()))
    eq_a = abs(float((ps.ws * ps.xs * s).sum()))
    delta = 8.0 * 2.3e-16 * (np.abs(ps.ys) + np.abs(a * ps.xs) + abs(b))
    rr = np.maximum(ar, delta)
    swing = ps.ws * np.minimum(abs(p - 1.0) * rr ** (p - 2.0) * delta, rr ** (p - 1.0))
    allow_b = float(swing.sum())
    allow_a = float((np.abs(ps.xs) * swing).sum())
    return eq_a, eq_b, allow_a, allow_b, f


def _is_stationary(ps: PointSet, a: float, b: float, p: float, grad_tol: float) -> bool:
    eq_a, eq_b, allow_a, allow_b, f = _stationarity_vertical(ps, a, b, p)
    return eq_a <= grad_tol * (1.0 + f) + allow_a and eq_b <= grad_tol * (1.0 + f) + allow_b


#: A Newton step this small (relative) means the parameters are pinned well
#: below the multi-start agreement scale.
_STEP_TOL = 1e-9


def _newton_vertical(ps: PointSet, p: float, a: float, b: float, eps: float,
                     grad_tol: float, max_iter: int, step_tol: float = _STEP_TOL):
    """Damped Newton on the (possibly eps-smoothed) vertical objective.

    Converged when the balance equations hold to ``grad_tol`` (plus the
    float-representability allowance) and the proposed step is negligible;
    near the optimum the Newton step tracks the remaining parameter error,
    so the combination pins (a, b) even for large exponents where the
    objective value itself is tiny.
    """
    xs, ys, w = ps.xs, ps.ys, ps.ws
    iters = 0
    for _ in range(max_iter):
        r = ys - a * xs - b
        if eps == 0.0:
            # only used for p >= 2, where |r|^(p-2) stays finite
            ar = np.abs(r)
            dphi = p * np.sign(r) * ar ** (p - 1.0)
            ddphi = p * (p - 1.0) * ar ** (p - 2.0)
            fs = float((w * ar**p).sum())
        else:
            s2 = r * r + eps * eps
            dphi = p * r * s2 ** (0.5 * p - 1.0)
            ddphi = p * s2 ** (0.5 * p - 2.0) * (s2 + (p - 2.0) * r * r)
            fs = float((w * s2 ** (0.5 * p)).sum())
        ga = -float((w * xs * dphi).sum())
        gb = -float((w * dphi).sum())
        haa = float((w * xs * xs * ddphi).sum())
        hab = float((w * xs * ddphi).sum())
        hbb = float((w * ddphi).sum())
        det = haa * hbb - hab * hab
        damp = 1e-12 * (haa + hbb) + 1e-300
        while det <= 0.0:
            haa += damp
            hbb += damp
            det = haa * hbb - hab * hab
            damp *= 10.0
        da = -(hbb * ga - hab * gb) / det
        db = -(haa * gb - hab * ga) / det
        if math.hypot(da, db) <= step_tol * (1.0 + abs(a) + abs(b)):
            return a, b, iters, _is_stationary(ps, a, b, p, grad_tol)
        step = 1.0
        decrement = ga * da + gb * db  # negative for a descent direction
        for _ in range(60):
            an, bn = a + step * da, b + step * db
            rn = ys - an * xs - bn
            if eps == 0.0:
                fn = float((w * np.abs(rn) ** p).sum())
            else:
                fn = float((w * (rn * rn + eps * eps) ** (0.5 * p)).sum())
            if fn <= fs + 1e-4 * step * decrement or fn < fs:
                break
            step *= 0.5
        else:
            return a, b, iters, False
        a, b = a + step * da, b + step * db
        iters += 1
    return a, b, iters, _is_stationary(ps, a, b, p, grad_tol)


def _solve_vertical_from(ps: PointSet, cfg: LpSolverConfig, a0: float, b0: float, rms_scale: float):
    p = cfg.p
    if p >= 2.0:
        # warm-started continuation in the exponent: direct Newton on a
        # high-p objective is badly conditioned away from the optimum
        stages = [2.0]
        while stages[-1] * 2.0 < p:
            stages.append(stages[-1] * 2.0)
        stages.append(p)
        a, b = a0, b0
        total = 0
        ok = True
        for stage in stages if p > 4.0 else [p]:
            a, b, iters, ok = _newton_vertical(ps, stage, a, b, 0.0, cfg.grad_tol, cfg.max_iter)
            total += iters
        return a, b, total, ok
    # 1 < p < 2: smoothing continuation; the schedule depends only on the
    # data scale so every start walks the same sequence of subproblems.
    # Optima may pin residuals near zero, so steps must resolve finely.
    eps = cfg.smoothing_eps * (1.0 + rms_scale)
    a, b = a0, b0
    total = 0
    ok = False
    while True:
        a, b, iters, ok = _newton_vertical(
            ps, p, a, b, eps, cfg.grad_tol, cfg.max_iter, step_tol=1e-13
        )
        total += iters
        if ok or eps < 1e-15 * (1.0 + rms_scale):
            break
        eps *= 0.1
    return a, b, total, ok


def fit_algebraic_lp(ps: PointSet, cfg: LpSolverConfig) -> FitReport:
    """The unique vertical-distance optimum for exponent p > 1.

    Runs a multi-start Newton iteration; all starts must land on the same
    (a, b) before the fit is reported, otherwise NoConvergence is raised
    with the best iterate attached.
    """
    ps.require_m_eff(2)
    p = cfg.p
    tol = default_tol(ps)
    if all(pt.x == ps.points[0].x for pt in ps.points):
        b0 = _offset_minimum_1d(ps.ys, ps.ws, p)
        xbar = ps.centroid.x
        rep = LineSI(0.0, b0)
        return finish_report(
            ps, "lp", p, "vertical", objective(ps, rep, p, "vertical"), rep,
            VerticalDegenerate(xbar, b0, b0), tol,
            diagnostics={"degenerate": "all_x_equal"},
        )

    l2line = fit_algebraic_l2(ps).report.line
    rms_scale = math.sqrt(objective(ps, l2line, 2.0, "vertical") / ps.m_eff)
    rng = np.random.default_rng(cfg.seed)
    slope_spread = 1.0 + abs(l2line.a)
    intercept_spread = 1.0 + abs(l2line.b)
    starts = [(l2line.a, l2line.b)]
    for _ in range(3):
        starts.append(
            (l2line.a + 0.5 * slope_spread * rng.standard_normal(),
             l2line.b + 0.5 * intercept_spread * rng.standard_normal())
        )

    solutions = []
    total_iters = 0
    for a0, b0 in starts:
        a, b, iters, ok = _solve_vertical_from(ps, cfg, a0, b0, rms_scale)
        total_iters += iters
        solutions.append((a, b, ok))
    best = min(solutions, key=lambda s: objective(ps, LineSI(s[0], s[1]), p, "vertical"))
    a, b = best[0], best[1]
    eq_a, eq_b, _, _, f = _stationarity_vertical(ps, a, b, p)
    spread = max(
        max(abs(s[0] - a), abs(s[1] - b)) for s in solutions
    )
    scale = 1.0 + abs(a) + abs(b)
    if not all(s[2] for s in solutions) or not _is_stationary(ps, a, b, p, cfg.grad_tol):
        raise NoConvergence(
            f"stationarity ({eq_a:.3e}, {eq_b:.3e}) above tolerance after {total_iters} iterations",
            best_params=(a, b), best_value=f, grad_norm=max(eq_a, eq_b),
        )
    if spread > 1e-7 * scale:
        raise NoConvergence(
            f"multi-start disagreement {spread:.3e} exceeds 1e-7 scale",
            best_params=(a, b), best_value=f, grad_norm=max(ra, rb),
        )
    line = LineSI(a, b)
    return finish_report(
        ps, "lp", p, "vertical", f, line, UniqueLine(line), tol,
        diagnostics={
            "iterations": total_iters,
            "starts": len(starts),
            "start_spread": spread,
            "stationarity": (eq_a, eq_b),
        },
    )


def _offset_minimum_1d(vals: np.ndarray, w: np.ndarray, p: float) -> float:
    f, c = _kernels.scan_offsets(
        np.zeros_like(vals), vals, w, np.array([0.0]), np.array([1.0]), p
    )
    return float(c[0])


def _offset_and_value(ps: PointSet, theta: float, p: float):
    f, c = _kernels.scan_offsets(
        ps.xs, ps.ys, ps.ws, np.array([math.cos(theta)]), np.array([math.sin(theta)]), p
    )
    return float(f[0]), float(c[0])


def _theta_derivative(ps: PointSet, theta: float, p: float):
    """(h'(theta), h(theta), c): derivative of the reduced angle objective."""
    f, c = _offset_and_value(ps, theta, p)
    g = lp_gradient(ps, (c, theta), p, "orthogonal")
    return float(g[1]), f, c


def fit_geometric_lp(ps: PointSet, cfg: LpSolverConfig) -> FitReport:
    """Orthogonal-distance optima for exponent p > 1 via an angle scan.

    Every local basin of the reduced objective theta -> min_c f(c, theta) is
    refined by derivative bisection; all basins attaining the global value
    are reported.  A globally flat scan is classified as rotationally
    degenerate and concurrency of the optimal lines is detected.
    """
    ps.require_m_eff(2)
    p = cfg.p
    tol = default_tol(ps)
    if all((pt.x, pt.y) == (ps.points[0].x, ps.points[0].y) for pt in ps.points):
        cx, cy = ps.centroid.x, ps.centroid.y
        rep = LineHesse.from_normal(0.0, 1.0, cy)
        return finish_report(
            ps, "lp", p, "orthogonal", 0.0, rep, AllLinesThroughPoint((cx, cy)), tol,
            diagnostics={"degenerate": "all_points_identical"},
        )

    nt = cfg.angle_samples
    thetas = np.arange(nt) * (math.pi / nt)
    fvals, cvals = _kernels.scan_offsets(
        ps.xs, ps.ys, ps.ws, np.cos(thetas), np.sin(thetas), p
    )
    fmin_scan = float(fvals.min())
    fmax_scan = float(fvals.max())
    flat = fmax_scan - fmin_scan <= 1e-9 * (1.0 + fmin_scan)
    diagnostics = {
        "angle_samples": nt,
        "scan_min": fmin_scan,
        "scan_max": fmax_scan,
    }

    if flat:
        diagnostics["rotationally_degenerate"] = True
        idxs = [0, nt // 3, (2 * nt) // 3]
        lines = [LineHesse(float(thetas[i]), float(cvals[i])) for i in idxs]
        point = _common_point(lines, ps.coordinate_scale())
        rep = lines[0]
        if point is not None:
            opt = AllLinesThroughPoint(point)
        else:
            fams = tuple(
                LineFamily(float(thetas[i]), float(cvals[i]), float(cvals[i]))
                for i in range(0, nt, max(1, nt // 8))
            )
            opt = LineFamilies(fams)
        return finish_report(
            ps, "lp", p, "orthogonal", fmin_scan, rep, opt, tol,
            diagnostics=diagnostics,
        )

    minima = []
    step = math.pi / nt
    for i in range(nt):
        f_prev = fvals[(i - 1) % nt]
        f_next = fvals[(i + 1) % nt]
        if fvals[i] <= f_prev and fvals[i] <= f_next:
            theta_star, f_star, c_star, ok = _refine_basin(
                ps, p, thetas[i] - step, thetas[i] + step, cfg
            )
            minima.append((f_star, theta_star % math.pi, c_star, ok))

    if not minima:
        raise NoConvergence("angle scan found no local minimum", best_value=fmin_scan)
    fbest = min(m[0] for m in minima)
    keep_band = 1e-9 * (1.0 + fbest)
    kept = []
    for f_star, theta_star, c_star, ok in sorted(minima):
        if f_star > fbest + keep_band:
            continue
        line = LineHesse.from_normal(
            math.cos(theta_star), math.sin(theta_star), c_star
        )
        if any(_same_line(line, other, 1e-7) for other in kept):
            continue
        kept.append(line)
        if not ok:
            diagnostics["refinement_incomplete"] = True

    diagnostics["iterations"] = len(minima)
    if len(kept) == 1:
        opt = UniqueLine(kept[0])
    else:
        opt = LineFamilies(tuple(LineFamily(l.theta, l.c, l.c) for l in kept))
    rep = kept[0]
    f = objective(ps, rep, p, "orthogonal")
    g = lp_gradient(ps, (rep.c, rep.theta), p, "orthogonal")
    eq_c = abs(g[0]) / p
    eq_t = abs(g[1]) / p
    scale = ps.coordinate_scale()
    if eq_c > cfg.grad_tol * (1.0 + f) or eq_t > cfg.grad_tol * (1.0 + f) * scale:
        raise NoConvergence(
            "reported optimum fails the stationarity equations",
            best_params=(rep.c, rep.theta), best_value=f,
            grad_norm=float(np.abs(g).max()),
        )
    return finish_report(
        ps, "lp", p, "orthogonal", f, rep, opt, tol, diagnostics=diagnostics,
    )


def _refine_basin(ps: PointSet, p: float, lo: float, hi: float, cfg: LpSolverConfig):
    """Locate the basin minimum by bisection on the angle derivative."""
    d_lo, f_lo, c_lo = _theta_derivative(ps, lo, p)
    d_hi, f_hi, c_hi = _theta_derivative(ps, hi, p)
    if not (d_lo <= 0.0 <= d_hi):
        # derivative did not bracket a sign change; fall back to value search
        theta, _ = golden_section(lambda t: _offset_and_value(ps, t, p)[0], lo, hi, tol=1e-13)
        f, c = _offset_and_value(ps, theta, p)
        return theta, f, c, False
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        d_mid, f_mid, c_mid = _theta_derivative(ps, mid, p)
        if d_mid < 0.0:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    f, c = _offset_and_value(ps, theta, p)
    return theta, f, c, True


def _same_line(a: LineHesse, b: LineHesse, tol: float) -> bool:
    dt = abs(a.theta - b.theta)
    dt = min(dt, math.pi - dt)
    if dt > tol:
        return False
    cb = b.c if abs(a.theta - b.theta) <= tol else -b.c
    return abs(a.c - cb) <= tol * (1.0 + abs(a.c))


def _common_point(lines, scale: float):
    """Intersection point shared by all lines, or None."""
    l1, l2 = lines[0], lines[1]
    det = l1.nx * l2.ny - l1.ny * l2.nx
    if abs(det) < 1e-9:
        return None
    x = (l1.c * l2.ny - l2.c * l1.ny) / det
    y = (l1.nx * l2.c - l2.nx * l1.c) / det
    for l in lines:
        if abs(l.nx * x + l.ny * y - l.c) > 1e-6 * scale:
            return None
    return (x, y)
