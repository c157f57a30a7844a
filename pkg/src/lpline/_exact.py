"""Exact rational helpers for the enumerative solvers.

Float coordinates convert to ``Fraction`` without rounding, so candidate-line
comparisons, tie detection and convex hulls done here are exact relative to
the binary input values.  Objectives of slanted lines under the orthogonal
distance have the form A/sqrt(B) with rational A, B; those are ordered by
comparing A^2/B, which stays rational.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Frac = Fraction
FracPoint = tuple[Fraction, Fraction]


def fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def exact_points(ps) -> list[FracPoint]:
    return [(Fraction(p.x), Fraction(p.y)) for p in ps.points]


def cross3(o: FracPoint, a: FracPoint, b: FracPoint) -> Fraction:
    """Cross product of (a - o) and (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dist2(a: FracPoint, b: FracPoint) -> Fraction:
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return dx * dx + dy * dy


def monotone_chain(pts: Sequence[FracPoint], tol: Fraction = Fraction(0)) -> list[int]:
    """Indices of hull vertices in counter-clockwise order, strictly convex.

    Points within ``tol`` of an edge's supporting line are treated as interior
    and never become vertices.  ``pts`` must be pairwise distinct.
    """
    n = len(pts)
    if n == 1:
        return [0]
    order = sorted(range(n), key=lambda i: pts[i])
    tol2 = tol * tol

    def keeps_turn(o: FracPoint, a: FracPoint, b: FracPoint) -> bool:
        cr = cross3(o, a, b)
        if cr <= 0:
            return False
        if tol2 == 0:
            return True
        return cr * cr > tol2 * dist2(o, b)

    def half(indices):
        chain: list[int] = []
        for i in indices:
            while len(chain) >= 2 and not keeps_turn(pts[chain[-2]], pts[chain[-1]], pts[i]):
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(reversed(order))
    if len(lower) == 2 and len(upper) == 2:  # collinear input
        return lower
    return lower[:-1] + upper[:-1]


def canonical_direction(dx: Fraction, dy: Fraction) -> tuple[Fraction, Fraction]:
    """Scale a direction to a canonical representative of its parallel class."""
    if dx != 0:
        return (Fraction(1), dy / dx) if dx > 0 else (Fraction(1), dy / dx)
    return (Fraction(0), Fraction(1))


def line_key(point: FracPoint, dx: Fraction, dy: Fraction):
    """Hashable exact identity of the line through ``point`` with direction (dx, dy)."""
    d = canonical_direction(dx, dy)
    # offset measured against the canonical direction: cross(d, point)
    off = d[0] * point[1] - d[1] * point[0]
    return (d, off)
