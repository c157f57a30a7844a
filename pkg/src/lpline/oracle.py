"""Brute-force verifiers, independent of the production solvers.

``grid_oracle`` minimises over a dense parameter grid with box refinement;
its search box comes from a-priori parameter bounds (extreme two-point
slopes and projection ranges), never from solver output.
``exhaustive_pairs_oracle`` evaluates the full candidate class for the
sum and max norms without any certificate pruning, in the same exact
arithmetic as the solvers, so agreement can be asserted exactly.
``convexity_probe`` samples the defining convexity inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import _kernels
from ._exact import exact_points
from .errors import TooLarge
from .geometry import PointSet

__all__ = [
    "GridSpec",
    "OracleResult",
    "ExhaustiveResult",
    "ProbeResult",
    "default_grid_box",
    "grid_oracle",
    "exhaustive_pairs_oracle",
    "convexity_probe",
]


@dataclass(frozen=True)
class GridSpec:
    """Search box, per-axis resolution, and number of refinement passes.

    Each pass shrinks the box to a +-2 cell window around the incumbent,
    a factor resolution/4 >= 4 for the allowed resolutions.
    """

    bounds: tuple[tuple[float, float], tuple[float, float]]
    resolution: int = 48
    levels: int = 3

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")
        if self.levels < 0:
            raise ValueError("levels must be nonnegative")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"invalid box bounds ({lo}, {hi})")


@dataclass(frozen=True)
class OracleResult:
    value: float
    params: tuple[float, float]
    err_bound: float
    level_values: tuple[float, ...]
    evals: int


def pair_slope_range(ps: PointSet) -> tuple[float, float]:
    """Extreme slopes over all point pairs with distinct x."""
    lo, hi = math.inf, -math.inf
    n = len(ps.points)
    for j in range(n):
        for k in range(j):
            dx = ps.points[j].x - ps.points[k].x
            if dx == 0.0:
                continue
            a = (ps.points[j].y - ps.points[k].y) / dx
            lo, hi = min(lo, a), max(hi, a)
    if lo > hi:
        raise ValueError("all x coordinates coincide; no slope bounds exist")
    return lo, hi


def default_grid_box(ps: PointSet, kind: str, pad: float = 0.05):
    """A-priori parameter box guaranteed to contain every optimal line."""
    if kind == "vertical":
        a0, a1 = pair_slope_range(ps)
        pa = pad * (a1 - a0) + 1e-9
        b_cands = [p.y - a * p.x for p in ps.points for a in (a0, a1)]
        b0, b1 = min(b_cands), max(b_cands)
        pb = pad * (b1 - b0) + 1e-9
        return ((a0 - pa, a1 + pa), (b0 - pb, b1 + pb))
    if kind == "orthogonal":
        r = float(np.hypot(ps.xs, ps.ys).max())
        return ((0.0, math.pi), (-r - 1e-9, r + 1e-9))
    raise ValueError(f"unknown distance kind {kind!r}")


def _eval_grid(ps: PointSet, norm: float, kind: str, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    uu, vv = np.meshgrid(u, v, indexing="ij")
    if kind == "vertical":
        f = _kernels.eval_lines_vertical(
            ps.xs, ps.ys, ps.ws, uu.ravel(), vv.ravel(), norm
        )
    else:
        th = uu.ravel()
        f = _kernels.eval_lines_orthogonal(
            ps.xs, ps.ys, ps.ws, np.cos(th), np.sin(th), vv.ravel(), norm
        )
    return f.reshape(uu.shape)


def _reach(ps: PointSet, kind: str) -> float:
    if kind == "vertical":
        return float(np.abs(ps.xs).max())
    return float(np.hypot(ps.xs, ps.ys).max())


def _lipschitz(ps: PointSet, norm: float, kind: str, res_max: float) -> float:
    reach = _reach(ps, kind)
    if norm == math.inf:
        return 1.0 + reach
    return norm * max(res_max, 1e-30) ** (norm - 1.0) * float(ps.ws.sum()) * (1.0 + reach)


def grid_oracle(ps: PointSet, norm: float, kind: str, spec: Optional[GridSpec] = None) -> OracleResult:
    """Best grid point after refinement, with a Lipschitz error estimate.

    The reported ``err_bound`` is (local Lipschitz bound) x (final cell
    diagonal); it bounds the gap to the true minimum provided the
    refinement tracked the optimal basin, which holds for the convex
    vertical objectives and is heuristic for the angular ones.
    """
    if spec is None:
        spec = GridSpec(bounds=default_grid_box(ps, kind))
    (u_lo, u_hi), (v_lo, v_hi) = spec.bounds
    res = spec.resolution
    best_val = math.inf
    best_uv = (u_lo, v_lo)
    level_values = []
    evals = 0
    for _ in range(spec.levels + 1):
        u = np.linspace(u_lo, u_hi, res)
        v = np.linspace(v_lo, v_hi, res)
        grid = _eval_grid(ps, norm, kind, u, v)
        evals += grid.size
        flat = int(np.argmin(grid))
        i, j = divmod(flat, res)
        if grid[i, j] < best_val:
            best_val = float(grid[i, j])
            best_uv = (float(u[i]), float(v[j]))
        level_values.append(best_val)
        cu = (u_hi - u_lo) / (res - 1)
        cv = (v_hi - v_lo) / (res - 1)
        u_lo, u_hi = best_uv[0] - 2 * cu, best_uv[0] + 2 * cu
        v_lo, v_hi = best_uv[1] - 2 * cv, best_uv[1] + 2 * cv

    final_diag = math.hypot(cu, cv)
    if norm == math.inf:
        res_max = best_val
    else:
        res_max = (best_val / max(float(ps.ws.min()), 1.0)) ** (1.0 / norm) if best_val > 0 else 0.0
    res_local = res_max + (1.0 + _reach(ps, kind)) * final_diag
    err = _lipschitz(ps, norm, kind, res_local) * final_diag
    return OracleResult(best_val, best_uv, err, tuple(level_values), evals)


@dataclass(frozen=True)
class ExhaustiveResult:
    value: float
    pair: Optional[tuple[int, int]]
    exact: Optional[Fraction] = None       # rational objectives (vertical)
    exact_sq: Optional[Fraction] = None    # squared objective (orthogonal)


def exhaustive_pairs_oracle(ps: PointSet, norm: float, kind: str) -> ExhaustiveResult:
    """Exact minimum over the full two-point candidate class, no pruning.

    For the sum norm every pair line is evaluated; for the max norm every
    pair direction is paired with its mid-range offset.  Only desk-scale
    inputs are accepted.
    """
    if ps.m_eff > 12:
        raise TooLarge(f"exhaustive oracle limited to total multiplicity 12, got {ps.m_eff}")
    if norm not in (1.0, math.inf):
        raise ValueError("exhaustive oracle handles the sum and max norms only")
    if kind not in ("vertical", "orthogonal"):
        raise ValueError(f"unknown distance kind {kind!r}")
    pts = exact_points(ps)
    mults = [p.mult for p in ps.points]
    n = len(pts)

    if kind == "vertical" and all(q[0] == pts[0][0] for q in pts):
        ys = [q[1] for q in pts]
        if norm == 1.0:
            vals = [(sum(m * abs(y - b) for y, m in zip(ys, mults)), b) for b in ys]
            fmin = min(vals)[0]
        else:
            fmin = (max(ys) - min(ys)) / 2
        return ExhaustiveResult(float(fmin), None, exact=fmin)
    if kind == "orthogonal" and all(q == pts[0] for q in pts):
        return ExhaustiveResult(0.0, None, exact_sq=Fraction(0))

    best = None  # (comparable exact value, pair)
    for j in range(n):
        for k in range(j):
            dx = pts[j][0] - pts[k][0]
            dy = pts[j][1] - pts[k][1]
            if kind == "vertical":
                if dx == 0:
                    continue
                a = dy / dx
                betas = [q[1] - a * q[0] for q in pts]
                if norm == 1.0:
                    b = pts[k][1] - a * pts[k][0]
                    val = sum(m * abs(be - b) for be, m in zip(betas, mults))
                else:
                    val = (max(betas) - min(betas)) / 2
                if best is None or val < best[0]:
                    best = (val, (j, k))
            else:
                if dx == 0 and dy == 0:
                    continue
                proj = [dx * q[1] - dy * q[0] for q in pts]
                b_len2 = dx * dx + dy * dy
                if norm == 1.0:
                    base = proj[k]
                    asum = sum(m * abs(pr - base) for pr, m in zip(proj, mults))
                    val = asum * asum / b_len2
                else:
                    rng = max(proj) - min(proj)
                    val = rng * rng / (4 * b_len2)
                if best is None or val < best[0]:
                    best = (val, (j, k))

    val, pair = best
    if kind == "vertical":
        return ExhaustiveResult(float(val), pair, exact=val)
    return ExhaustiveResult(math.sqrt(float(val)), pair, exact_sq=val)


@dataclass(frozen=True)
class ProbeResult:
    passed: bool
    worst_violation: float
    tolerance: float


def convexity_probe(
    fn: Callable, x0, x1, samples: int = 200, rng=None, rel_tol: float = 1e-10
) -> ProbeResult:
    """Check f(t*x1 + (1-t)*x0) <= t*f(x1) + (1-t)*f(x0) at random t."""
    if rng is None:
        rng = np.random.default_rng(0)
    x0 = np.asarray(x0, dtype=np.float64)
    x1 = np.asarray(x1, dtype=np.float64)
    f0 = float(fn(x0))
    f1 = float(fn(x1))
    scale = max(1.0, abs(f0), abs(f1))
    worst = -math.inf
    for t in rng.random(samples):
        xt = t * x1 + (1.0 - t) * x0
        violation = float(fn(xt)) - (t * f1 + (1.0 - t) * f0)
        worst = max(worst, violation)
    tolerance = rel_tol * scale
    return ProbeResult(worst <= tolerance, worst, tolerance)
