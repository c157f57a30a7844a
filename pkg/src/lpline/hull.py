"""Convex hull of a point set: vertex set, boundary edges, degeneracy class.

Vertices follow the strict rule: a point is a vertex only if it is not in the
convex hull of the remaining points, so collinear boundary points are never
vertices.  The hull is computed on distinct coordinate values; multiplicities
play no role here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._exact import exact_points, monotone_chain
from .geometry import PointSet

__all__ = ["HullPolytope", "build_hull"]


@dataclass(frozen=True)
class HullPolytope:
    """Counter-clockwise hull vertices (input indices) and boundary edges.

    ``degenerate`` is "full" for a 2-d polygon, "segment" when all points are
    collinear, and "point" when all coordinates coincide.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    degenerate: str

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)


def build_hull(ps: PointSet, tol: float = 0.0) -> HullPolytope:
    """Hull of the distinct coordinates of ``ps``.

    ``tol``: points within this distance of an edge's supporting line are not
    vertices.  With the default 0 the vertex rule is evaluated exactly.
    """
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    pts = exact_points(ps)
    seen: dict[tuple, int] = {}
    distinct = []
    first_index = []
    for i, q in enumerate(pts):
        if q not in seen:
            seen[q] = len(distinct)
            distinct.append(q)
            first_index.append(i)

    if len(distinct) == 1:
        return HullPolytope((first_index[0],), (), "point")

    chain = monotone_chain(distinct, Fraction(tol))
    verts = tuple(first_index[i] for i in chain)
    if len(verts) == 2:
        return HullPolytope(verts, ((verts[0], verts[1]),), "segment")
    edges = tuple(
        (verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))
    )
    return HullPolytope(verts, edges, "full")
