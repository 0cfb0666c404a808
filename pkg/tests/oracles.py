"""Brute-force reference implementations used as test oracles.

Each one is deliberately naive: slow, but simple enough to trust by reading.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def inside_convex(poly: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Point-in-convex-polygon by half-planes (either orientation)."""
    poly = np.asarray(poly, dtype=float)
    signs = []
    for i in range(len(poly)):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % len(poly)]
        signs.append((bx - ax) * (y - ay) - (by - ay) * (x - ax))
    s = np.stack(signs)
    return np.all(s >= 0, axis=0) | np.all(s <= 0, axis=0)


def _row_spans(poly: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each horizontal line y, the [lo, hi] x-interval inside a convex
    polygon (lo > hi when the line misses it)."""
    lo = np.full(ys.shape, np.inf)
    hi = np.full(ys.shape, -np.inf)
    for i in range(len(poly)):
        (ax, ay), (bx, by) = poly[i], poly[(i + 1) % len(poly)]
        if ay == by:
            continue
        t = (ys - ay) / (by - ay)
        hit = (t >= 0) & (t <= 1)
        x = ax + t * (bx - ax)
        lo = np.where(hit, np.minimum(lo, x), lo)
        hi = np.where(hit, np.maximum(hi, x), hi)
    return lo, hi


def _count(lo, hi, x0, step, res):
    """Pixel centres x0 + (k + 0.5) * step, k in [0, res), inside [lo, hi]."""
    k0 = np.clip(np.ceil((lo - x0) / step - 0.5), 0, res)
    k1 = np.clip(np.floor((hi - x0) / step - 0.5), -1, res - 1)
    return np.maximum(k1 - k0 + 1, 0)


def raster_iou(a, b, res: int = 2000) -> float:
    """IoU by counting pixel centres on a res x res grid over both shapes,
    one scanline at a time."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    pts = np.vstack([a, b])
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    sx, sy = (x1 - x0) / res, (y1 - y0) / res
    ys = y0 + (np.arange(res) + 0.5) * sy
    la, ha = _row_spans(a, ys)
    lb, hb = _row_spans(b, ys)
    na = _count(la, ha, x0, sx, res)
    nb = _count(lb, hb, x0, sx, res)
    inter = _count(np.maximum(la, lb), np.minimum(ha, hb), x0, sx, res).sum()
    union = na.sum() + nb.sum() - inter
    return float(inter / union) if union else 0.0


def random_convex_quad(rng: np.random.Generator) -> np.ndarray:
    """Four points on a random ellipse at sorted angles, so always convex."""
    cx, cy = rng.uniform(0.3, 0.7, 2)
    rx, ry = rng.uniform(0.1, 0.35, 2)
    rot = rng.uniform(0, math.pi)
    ang = np.sort(rng.uniform(0, 2 * math.pi, 4))
    # keep vertices apart so the quad is not a sliver
    while np.min(np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))) < 0.3:
        ang = np.sort(rng.uniform(0, 2 * math.pi, 4))
    px, py = rx * np.cos(ang), ry * np.sin(ang)
    c, s = math.cos(rot), math.sin(rot)
    return np.stack([cx + c * px - s * py, cy + s * px + c * py], axis=1)


def sweep_min_area(points, step_deg: float = 0.1) -> float:
    """Smallest enclosing rectangle area over a fixed grid of orientations."""
    p = np.asarray(points, dtype=float)
    best = math.inf
    for k in range(int(round(90.0 / step_deg))):
        a = math.radians(k * step_deg)
        u = p @ np.array([math.cos(a), math.sin(a)])
        v = p @ np.array([-math.sin(a), math.cos(a)])
        best = min(best, (u.max() - u.min()) * (v.max() - v.min()))
    return best


def _areas(p: np.ndarray, angles_deg: np.ndarray) -> np.ndarray:
    a = np.radians(angles_deg)[:, None]
    u = p[:, 0] * np.cos(a) + p[:, 1] * np.sin(a)
    v = -p[:, 0] * np.sin(a) + p[:, 1] * np.cos(a)
    return np.ptp(u, axis=1) * np.ptp(v, axis=1)


def refined_min_area(points, step_deg: float = 0.1, fine_deg: float = 1e-5) -> float:
    """The 0.1 degree sweep, then a dense local sweep around every coarse
    local minimum within 1% of the best one."""
    p = np.asarray(points, dtype=float)
    p = p - p.mean(axis=0)
    grid = np.arange(0.0, 90.0, step_deg)
    coarse = _areas(p, grid)
    best = coarse.min()
    fine = np.arange(-step_deg, step_deg + fine_deg / 2, fine_deg)
    local = (coarse <= np.roll(coarse, 1)) & (coarse <= np.roll(coarse, -1)) & (coarse <= best * 1.01)
    for g in grid[local]:
        best = min(best, _areas(p, g + fine).min())
    return float(best)


def brute_assignment(cost, pad: float = 1.0):
    """Enumerate every padded permutation in lexicographic order and keep the
    first one of minimum cost. Returns (matches, total)."""
    c = np.asarray(cost, dtype=float)
    R, C = c.shape
    n = max(R, C)
    sq = np.zeros((n, n))
    sq[:R, :C] = c
    sq[:R, C:] = pad
    best, best_perm = math.inf, None
    for perm in itertools.permutations(range(n)):
        total = sum(sq[i, perm[i]] for i in range(n))
        if total < best - 1e-12:
            best, best_perm = total, perm
    matches = [(i, best_perm[i]) for i in range(R) if best_perm[i] < C]
    return matches, best


def levenshtein_ref(a: str, b: str) -> int:
    """Edit distance straight from its recursive definition."""

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def rotating_rect_angles(step_deg: float, n: int, start_deg: float = 10.0) -> list[float]:
    """Canonical [-45, 45) angle of a rectangle turning ``step_deg`` per frame,
    as a minimum-area fit would report it."""
    return [((start_deg + k * step_deg) + 45.0) % 90.0 - 45.0 for k in range(n)]
