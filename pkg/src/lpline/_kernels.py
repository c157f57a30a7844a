"""Hot numeric kernels: batched objective evaluation and offset scans.

Two interchangeable implementations live here: numba ``@njit`` loops and
vectorised pure-numpy versions.  The active one is chosen at import time by
the ``LPLINE_BACKEND`` environment variable:

* ``auto``  (default) — numba when importable, numpy otherwise
* ``numba`` — force numba, fail loudly if it is missing
* ``numpy`` — force the pure-numpy path

Both paths compute identical results (same formulas, same iteration counts);
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import math
import os

import numpy as np

_BACKEND_REQUEST = os.environ.get("LPLINE_BACKEND", "auto").lower()
if _BACKEND_REQUEST not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"LPLINE_BACKEND must be 'auto', 'numba' or 'numpy', got {_BACKEND_REQUEST!r}"
    )

_HAVE_NUMBA = False
if _BACKEND_REQUEST in ("auto", "numba"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _BACKEND_REQUEST == "numba":
            raise

#: Number of bisection steps for the 1-d offset minimisation; halving the
#: bracket 60 times puts the iterate below double-precision resolution.
OFFSET_BISECT_ITERS = 60


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _eval_lines_vertical_np(xs, ys, ws, a, b, p):
    r = np.abs(ys[None, :] - a[:, None] * xs[None, :] - b[:, None])
    if p == math.inf:
        return r.max(axis=1)
    if p == 1.0:
        return r @ ws
    if p == 2.0:
        return (r * r) @ ws
    return (r**p) @ ws


def _eval_lines_orthogonal_np(xs, ys, ws, nx, ny, c, p):
    r = np.abs(c[:, None] - nx[:, None] * xs[None, :] - ny[:, None] * ys[None, :])
    if p == math.inf:
        return r.max(axis=1)
    if p == 1.0:
        return r @ ws
    if p == 2.0:
        return (r * r) @ ws
    return (r**p) @ ws


def _scan_offsets_np(xs, ys, ws, nx, ny, p):
    # Lockstep bisection on the (monotone) derivative of c -> sum w|c-gamma|^p.
    gam = nx[:, None] * xs[None, :] + ny[:, None] * ys[None, :]
    lo = gam.min(axis=1)
    hi = gam.max(axis=1)
    q = p - 1.0
    for _ in range(OFFSET_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        d = mid[:, None] - gam
        g = (np.sign(d) * np.abs(d) ** q) @ ws
        neg = g < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    c = 0.5 * (lo + hi)
    f = (np.abs(c[:, None] - gam) ** p) @ ws
    return f, c


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _eval_lines_vertical_nb(xs, ys, ws, a, b, p):
        n = a.shape[0]
        m = xs.shape[0]
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            if p == np.inf:
                acc = 0.0
                for j in range(m):
                    r = abs(ys[j] - a[i] * xs[j] - b[i])
                    if r > acc:
                        acc = r
            elif p == 1.0:
                acc = 0.0
                for j in range(m):
                    acc += ws[j] * abs(ys[j] - a[i] * xs[j] - b[i])
            elif p == 2.0:
                acc = 0.0
                for j in range(m):
                    r = ys[j] - a[i] * xs[j] - b[i]
                    acc += ws[j] * r * r
            else:
                acc = 0.0
                for j in range(m):
                    acc += ws[j] * abs(ys[j] - a[i] * xs[j] - b[i]) ** p
            out[i] = acc
        return out

    @njit(cache=True)
    def _eval_lines_orthogonal_nb(xs, ys, ws, nx, ny, c, p):
        n = c.shape[0]
        m = xs.shape[0]
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            if p == np.inf:
                acc = 0.0
                for j in range(m):
                    r = abs(c[i] - nx[i] * xs[j] - ny[i] * ys[j])
                    if r > acc:
                        acc = r
            elif p == 1.0:
                acc = 0.0
                for j in range(m):
                    acc += ws[j] * abs(c[i] - nx[i] * xs[j] - ny[i] * ys[j])
            elif p == 2.0:
                acc = 0.0
                for j in range(m):
                    r = c[i] - nx[i] * xs[j] - ny[i] * ys[j]
                    acc += ws[j] * r * r
            else:
                acc = 0.0
                for j in range(m):
                    acc += ws[j] * abs(c[i] - nx[i] * xs[j] - ny[i] * ys[j]) ** p
            out[i] = acc
        return out

    @njit(cache=True)
    def _scan_offsets_nb(xs, ys, ws, nx, ny, p, iters):
        nt = nx.shape[0]
        m = xs.shape[0]
        fvals = np.empty(nt, dtype=np.float64)
        cvals = np.empty(nt, dtype=np.float64)
        q = p - 1.0
        gam = np.empty(m, dtype=np.float64)
        for i in range(nt):
            lo = np.inf
            hi = -np.inf
            for j in range(m):
                g = nx[i] * xs[j] + ny[i] * ys[j]
                gam[j] = g
                if g < lo:
                    lo = g
                if g > hi:
                    hi = g
            for _ in range(iters):
                mid = 0.5 * (lo + hi)
                deriv = 0.0
                for j in range(m):
                    d = mid - gam[j]
                    if d > 0.0:
                        deriv += ws[j] * d**q
                    elif d < 0.0:
                        deriv -= ws[j] * (-d) ** q
                if deriv < 0.0:
                    lo = mid
                else:
                    hi = mid
            c = 0.5 * (lo + hi)
            acc = 0.0
            for j in range(m):
                acc += ws[j] * abs(c - gam[j]) ** p
            fvals[i] = acc
            cvals[i] = c
        return fvals, cvals


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def backend_name() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def eval_lines_vertical(xs, ys, ws, a, b, p):
    """Objective of each line (a[i], b[i]) under the vertical distance."""
    xs, ys, ws, a, b = map(_f64, (xs, ys, ws, a, b))
    if _HAVE_NUMBA:
        return _eval_lines_vertical_nb(xs, ys, ws, a, b, float(p))
    return _eval_lines_vertical_np(xs, ys, ws, a, b, float(p))


def eval_lines_orthogonal(xs, ys, ws, nx, ny, c, p):
    """Objective of each line (n[i], c[i]) under the orthogonal distance."""
    xs, ys, ws, nx, ny, c = map(_f64, (xs, ys, ws, nx, ny, c))
    if _HAVE_NUMBA:
        return _eval_lines_orthogonal_nb(xs, ys, ws, nx, ny, c, float(p))
    return _eval_lines_orthogonal_np(xs, ys, ws, nx, ny, c, float(p))


def scan_offsets(xs, ys, ws, nx, ny, p):
    """Per-direction optimal offset of c -> sum w|c - <p_j, n>|^p, p > 1.

    Returns ``(fvals, cvals)``.  The minimiser is unique because the map is
    strictly convex in c; a sign bisection on its derivative finds it to
    double-precision bracket width.
    """
    xs, ys, ws, nx, ny = map(_f64, (xs, ys, ws, nx, ny))
    if _HAVE_NUMBA:
        return _scan_offsets_nb(xs, ys, ws, nx, ny, float(p), OFFSET_BISECT_ITERS)
    return _scan_offsets_np(xs, ys, ws, nx, ny, float(p))
