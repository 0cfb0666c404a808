"""Computational-geometry kernel.

Oriented bounding boxes, minimum-area rectangle fitting (rotating calipers over
the convex hull), convex polygon IoU (Sutherland-Hodgman clipping), angle
unwrapping and a minimum-cost assignment solver with deterministic tie-breaking.

Coordinates are image pixels: x grows right, y grows down. Angles are degrees
measured with ``atan2(dy, dx)`` in those coordinates, so a positive angle turns
clockwise on screen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "OBB",
    "AssignmentResult",
    "GeometryError",
    "convex_hull",
    "min_area_obb",
    "polygon_area",
    "polygon_iou",
    "hungarian",
    "unwrap_angles",
]


class GeometryError(ValueError):
    """Invalid geometric input (empty point set, non-convex polygon, ...)."""


@dataclass(frozen=True)
class OBB:
    """Oriented bounding box.

    ``theta`` is the orientation of the w-axis in degrees. Boxes produced by
    :func:`min_area_obb` carry the canonical angle in [-45, 45), which makes the
    +-90 degree axis ambiguity of a minimum-area fit explicit: a box rotating
    through 45 degrees jumps by 90 degrees and swaps w and h.
    """

    cx: float
    cy: float
    w: float
    h: float
    theta: float = 0.0

    @property
    def area(self) -> float:
        return self.w * self.h

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        a = math.radians(self.theta)
        u = np.array([math.cos(a), math.sin(a)])
        n = np.array([-math.sin(a), math.cos(a)])
        return u, n

    def corners(self) -> np.ndarray:
        """Four corners as a (4, 2) array with positive shoelace orientation."""
        u, n = self.axes()
        c = np.array([self.cx, self.cy])
        hw, hh = self.w / 2.0, self.h / 2.0
        return np.array([
            c - u * hw - n * hh,
            c + u * hw - n * hh,
            c + u * hw + n * hh,
            c - u * hw + n * hh,
        ])

    def scaled(self, s: float) -> "OBB":
        return OBB(self.cx * s, self.cy * s, self.w * s, self.h * s, self.theta)


@dataclass
class AssignmentResult:
    matches: list[tuple[int, int]] = field(default_factory=list)
    total_cost: float = 0.0
    unmatched_rows: list[int] = field(default_factory=list)
    unmatched_cols: list[int] = field(default_factory=list)


# --------------------------------------------------------------------- hulls

def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Convex hull (Andrew's monotone chain), positive orientation, no
    collinear vertices. Returns 1 or 2 points for degenerate input."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise GeometryError("convex hull of an empty point set")
    pts = np.unique(pts, axis=0)  # sorted by x then y
    if len(pts) <= 2:
        return pts
    pts = _akl_toussaint(pts)

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2:
                (ox, oy), (ax, ay) = out[-2], out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) > 0:
                    break
                out.pop()
            out.append(p)
        return out

    seq = [tuple(p) for p in pts.tolist()]  # plain floats loop much faster than array rows
    lower = chain(seq)
    upper = chain(seq[::-1])
    hull = np.array(lower[:-1] + upper[:-1], dtype=float)
    if len(hull) < 3:
        # collinear input collapses to its two extreme points
        return np.array([pts[0], pts[-1]])
    return hull


def _akl_toussaint(pts: np.ndarray) -> np.ndarray:
    """Drop points strictly inside the quadrilateral of the extreme points.
    ``pts`` must be lexicographically sorted; the order is preserved."""
    if len(pts) < 16:
        return pts
    s = pts[:, 0] + pts[:, 1]
    d = pts[:, 0] - pts[:, 1]
    # extremes in four diagonal directions, in counter-clockwise order
    idx = [int(np.argmin(s)), int(np.argmax(d)), int(np.argmax(s)), int(np.argmin(d))]
    quad = pts[idx]
    inside = np.ones(len(pts), dtype=bool)
    for k in range(4):
        a, b = quad[k], quad[(k + 1) % 4]
        cr = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        inside &= cr > 0
    area2 = sum(_cross(quad[0], quad[k], quad[k + 1]) for k in (1, 2))
    if area2 <= 0:
        return pts
    return pts[~inside]


def polygon_area(poly) -> float:
    """Signed shoelace area (positive for the orientation used throughout)."""
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# ----------------------------------------------------------------- min-area

def _canonical_angle(deg: float) -> float:
    a = (deg + 45.0) % 90.0 - 45.0
    return 0.0 if a == 0.0 else a  # no negative zero


def _box_along(pts: np.ndarray, theta: float) -> OBB:
    a = math.radians(theta)
    u = np.array([math.cos(a), math.sin(a)])
    n = np.array([-math.sin(a), math.cos(a)])
    pu, pn = pts @ u, pts @ n
    umin, umax, nmin, nmax = pu.min(), pu.max(), pn.min(), pn.max()
    c = u * (umin + umax) / 2.0 + n * (nmin + nmax) / 2.0
    return OBB(float(c[0]), float(c[1]), float(umax - umin), float(nmax - nmin), theta)


def min_area_obb(points) -> OBB:
    """Minimum-area enclosing rectangle by rotating calipers.

    One of the hull edges is always collinear with a side of the optimal
    rectangle, so only hull-edge directions need to be tried. Ties are broken
    toward the smallest canonical angle magnitude.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise GeometryError("min_area_obb needs at least one point")
    hull = convex_hull(pts)
    if len(hull) == 1:
        return OBB(float(hull[0, 0]), float(hull[0, 1]), 0.0, 0.0, 0.0)
    if len(hull) == 2:
        d = hull[1] - hull[0]
        return _box_along(hull, _canonical_angle(math.degrees(math.atan2(d[1], d[0]))))

    edges = np.roll(hull, -1, axis=0) - hull
    angles = np.arctan2(edges[:, 1], edges[:, 0])
    u = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    n = np.stack([-np.sin(angles), np.cos(angles)], axis=1)
    pu = hull @ u.T
    pn = hull @ n.T
    areas = (pu.max(0) - pu.min(0)) * (pn.max(0) - pn.min(0))
    best = areas.min()
    tol = 1e-12 * max(best, 1.0)
    cands = sorted(
        {_canonical_angle(math.degrees(a)) for a in angles[areas <= best + tol]},
        key=lambda t: (abs(t), t),
    )
    return _box_along(hull, cands[0])


# ---------------------------------------------------------------------- IoU

def _oriented(poly) -> np.ndarray:
    p = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(p) < 3:
        raise GeometryError("polygon needs at least 3 vertices")
    return p[::-1].copy() if polygon_area(p) < 0 else p


def _check_convex(p: np.ndarray) -> None:
    n = len(p)
    scale = max(1.0, float(np.abs(p).max()))
    tol = 1e-9 * scale * scale
    for i in range(n):
        if _cross(p[i], p[(i + 1) % n], p[(i + 2) % n]) < -tol:
            raise GeometryError("polygon_iou only supports convex polygons")


def _clip(subject: list, a: np.ndarray, b: np.ndarray) -> list:
    out = []
    if not subject:
        return out
    ex, ey = b[0] - a[0], b[1] - a[1]

    def side(p):
        return ex * (p[1] - a[1]) - ey * (p[0] - a[0])

    prev = subject[-1]
    sp = side(prev)
    for cur in subject:
        sc = side(cur)
        if sc >= 0:
            if sp < 0:
                out.append(_intersect(prev, cur, sp, sc))
            out.append(cur)
        elif sp >= 0:
            out.append(_intersect(prev, cur, sp, sc))
        prev, sp = cur, sc
    return out


def _intersect(p, q, sp, sq):
    t = sp / (sp - sq)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def polygon_iou(a, b) -> float:
    """Intersection over union of two convex polygons."""
    pa, pb = _oriented(a), _oriented(b)
    _check_convex(pa)
    _check_convex(pb)
    area_a, area_b = polygon_area(pa), polygon_area(pb)
    inter_poly = [tuple(v) for v in pa]
    for i in range(len(pb)):
        inter_poly = _clip(inter_poly, pb[i], pb[(i + 1) % len(pb)])
        if not inter_poly:
            break
    inter = max(polygon_area(inter_poly), 0.0) if len(inter_poly) >= 3 else 0.0
    union = area_a + area_b - inter
    if union <= 0.0:
        return 0.0
    return float(min(max(inter / union, 0.0), 1.0))


# --------------------------------------------------------------- assignment

def _solve_square(cost: np.ndarray) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Shortest-augmenting-path Hungarian method, O(n^3).

    Returns the row->column assignment and dual potentials (u, v) with
    ``cost[i, j] - u[i] - v[j] >= 0`` everywhere and equality on the matching.
    """
    n = cost.shape[0]
    inf = math.inf
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=int)  # p[j]: row (1-based) assigned to column j
    way = np.zeros(n + 1, dtype=int)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = [0] * n
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    return row_to_col, u[1:], v[1:]


def _lexicographic(tight: np.ndarray, match: list[int]) -> list[int]:
    """Lexicographically smallest perfect matching inside the tight-edge graph.

    Every perfect matching of tight edges is optimal (complementary slackness),
    so walking rows in order and taking the lowest column that still admits a
    perfect matching yields the lowest optimal assignment.
    """
    n = len(match)
    match = list(match)
    owner = [0] * n
    for r, c in enumerate(match):
        owner[c] = r

    def reroute(row: int, target: int, fixed_upto: int, seen: set) -> bool:
        # give `row` a new tight column, ending on `target`, moving only rows > fixed_upto
        for c in np.flatnonzero(tight[row]):
            c = int(c)
            if c in seen or c == match[row]:
                continue
            if c != target and owner[c] <= fixed_upto:
                continue
            seen.add(c)
            if c == target or reroute(owner[c], target, fixed_upto, seen):
                match[row] = c
                owner[c] = row
                return True
        return False

    for r in range(n):
        for c in np.flatnonzero(tight[r]):
            c = int(c)
            if c >= match[r]:
                break
            if owner[c] < r:
                continue
            old = match[r]
            if reroute(owner[c], old, r, {c}):
                match[r] = c
                owner[c] = r
                break
    return match


def hungarian(cost, pad_cost: float = 1.0) -> AssignmentResult:
    """Minimum-cost assignment on an R x C matrix.

    The matrix is padded to square: rows left without a real column pay
    ``pad_cost`` (dummy columns), surplus columns are free to stay unmatched.
    Among optimal assignments the lowest one in (row, col) lexicographic order
    is returned.
    """
    c = np.asarray(cost, dtype=float)
    if c.size == 0:
        rows = c.shape[0] if c.ndim == 2 else 0
        cols = c.shape[1] if c.ndim == 2 else 0
        return AssignmentResult(
            [], float(pad_cost) * rows if cols == 0 else 0.0,
            list(range(rows)), list(range(cols)),
        )
    if c.ndim != 2:
        raise GeometryError("cost must be a 2-D matrix")
    if not np.all(np.isfinite(c)):
        raise GeometryError("cost matrix contains non-finite values")
    R, C = c.shape
    n = max(R, C)
    sq = np.zeros((n, n))
    sq[:R, :C] = c
    sq[:R, C:] = pad_cost
    row_to_col, u, v = _solve_square(sq)
    reduced = sq - u[:, None] - v[None, :]
    tol = 1e-9 * max(1.0, float(np.abs(sq).max()))
    row_to_col = _lexicographic(reduced <= tol, row_to_col)

    matches, unmatched_rows = [], []
    total = 0.0
    for r in range(R):
        col = row_to_col[r]
        if col < C:
            matches.append((r, col))
            total += float(c[r, col])
        else:
            unmatched_rows.append(r)
            total += float(pad_cost)
    used = {col for _, col in matches}
    unmatched_cols = [j for j in range(C) if j not in used]
    return AssignmentResult(matches, total, unmatched_rows, unmatched_cols)


# ------------------------------------------------------------------ angles

def unwrap_angles(theta_series: Sequence[float], period: float = 90.0) -> list[float]:
    """Map successive differences into (-period/2, period/2] and re-integrate
    from the first sample."""
    if period <= 0:
        raise GeometryError("period must be positive")
    th = np.asarray(theta_series, dtype=float)
    if th.size == 0:
        return []
    d = np.diff(th)
    d = d - period * np.ceil(d / period - 0.5)
    out = np.concatenate([[th[0]], th[0] + np.cumsum(d)])
    return out.tolist()
