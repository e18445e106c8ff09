"""Planar polygon helpers and candidate-site lattices.

All coordinates are kilometres in a local planar frame; the target regions
are small enough (< 20 km extent) that geodesy is ignored.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "polygon_area",
    "polygon_is_simple",
    "point_in_polygon",
    "points_in_polygon",
    "polygon_bbox",
    "hex_lattice_sites",
]


def polygon_area(vertices) -> float:
    """Shoelace area of a closed polygon given as an (N, 2) vertex array."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] < 3 or v.shape[1] != 2:
        raise ValueError("polygon needs at least 3 planar vertices")
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        val = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(val) < 1e-12:
            return 0
        return 1 if val > 0 else -1

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def polygon_is_simple(vertices) -> bool:
    """True when no two non-adjacent edges intersect."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    edges = [(v[i], v[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return False
    return True


def point_in_polygon(x: float, y: float, vertices) -> bool:
    """Ray-casting point-in-polygon test (boundary counts as inside)."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    inside = False
    for i in range(n):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % n]
        # on-edge check keeps boundary points inside
        if (min(x1, x2) - 1e-12 <= x <= max(x1, x2) + 1e-12
                and abs((x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)) < 1e-9
                and min(y1, y2) - 1e-12 <= y <= max(y1, y2) + 1e-12):
            return True
        if (y1 > y) != (y2 > y):
            xs = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xs:
                inside = not inside
    return inside


def points_in_polygon(points, vertices) -> np.ndarray:
    """Vectorised containment mask for an (N, 2) point array.

    Ray casting against all edges at once; points within 1e-9 of an edge
    count as inside, matching the scalar test.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    v = np.asarray(vertices, dtype=float)
    x, y = pts[:, 0][:, None], pts[:, 1][:, None]
    x1, y1 = v[:, 0][None, :], v[:, 1][None, :]
    x2, y2 = np.roll(v[:, 0], -1)[None, :], np.roll(v[:, 1], -1)[None, :]

    crosses = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = x1 + (y - y1) * (x2 - x1) / np.where(y2 == y1, np.inf, y2 - y1)
    inside = (np.sum(crosses & (x < xs), axis=1) % 2).astype(bool)

    on_edge = ((np.minimum(x1, x2) - 1e-12 <= x) & (x <= np.maximum(x1, x2) + 1e-12)
               & (np.minimum(y1, y2) - 1e-12 <= y) & (y <= np.maximum(y1, y2) + 1e-12)
               & (np.abs((x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)) < 1e-9))
    return inside | on_edge.any(axis=1)


def polygon_bbox(vertices):
    v = np.asarray(vertices, dtype=float)
    return v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()


def hex_lattice_sites(vertices, count: int, jitter_fraction: float, seed: int) -> np.ndarray:
    """Jittered hexagonal lattice of `count` points inside a polygon.

    The lattice pitch is solved by bisection so that exactly `count` points
    fall inside the outline; each kept point is then displaced by a seeded
    uniform jitter of at most `jitter_fraction * pitch` in both axes (points
    pushed outside the outline keep their unjittered position).  The layout
    is a pure function of (vertices, count, jitter_fraction, seed).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    area = polygon_area(vertices)
    xmin, ymin, xmax, ymax = polygon_bbox(vertices)
    rng = np.random.Generator(np.random.PCG64(seed))

    def lattice(pitch: float) -> np.ndarray:
        dy = pitch * math.sqrt(3.0) / 2.0
        rows = np.arange(ymin + 0.5 * dy, ymax, dy)
        pts = []
        for r, y in enumerate(rows):
            xs = np.arange(xmin + (0.25 if r % 2 == 0 else 0.75) * pitch, xmax, pitch)
            pts.append(np.column_stack([xs, np.full_like(xs, y)]))
        if not pts:
            return np.empty((0, 2))
        grid = np.vstack(pts)
        return grid[points_in_polygon(grid, vertices)]

    # bracket a pitch giving at least `count` interior points
    hi = math.sqrt(2.0 * area / (math.sqrt(3.0) * count)) * 2.0
    lo = hi / 64.0
    while len(lattice(lo)) < count:
        lo /= 2.0
        if lo < 1e-4:
            raise ValueError("cannot fit requested site count inside region")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if len(lattice(mid)) >= count:
            lo = mid
        else:
            hi = mid
    pts = lattice(lo)
    # drop surplus points farthest from the region centroid: keeps the core
    v = np.asarray(vertices, dtype=float)
    centroid = v.mean(axis=0)
    order = np.argsort(np.hypot(*(pts - centroid).T), kind="stable")
    pts = pts[order[:count]]
    # stable ordering by (y, x) so ids do not depend on trimming order
    pts = pts[np.lexsort((pts[:, 0], pts[:, 1]))]

    if jitter_fraction > 0.0:
        jit = rng.uniform(-jitter_fraction * lo, jitter_fraction * lo, size=pts.shape)
        moved = pts + jit
        keep = points_in_polygon(moved, vertices)
        pts = np.where(keep[:, None], moved, pts)
    return pts
