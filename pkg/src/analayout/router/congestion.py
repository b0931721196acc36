"""Grid congestion estimate and congestion-driven block spreading."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..cost import pin_positions
from ..model import Block, Net
from ..seqpair import Placement, Rect

DEFAULT_CAPACITY = 4


@dataclass
class CongestionMap:
    """Demand on the internal boundaries of a ``gx`` x ``gy`` grid.

    ``demand_v[c, r]`` counts crossings of the vertical boundary between
    columns c and c+1 in row r; ``demand_h[c, r]`` the horizontal boundary
    between rows r and r+1 in column c.
    """

    gx: int
    gy: int
    width: float
    height: float
    demand_v: np.ndarray
    demand_h: np.ndarray
    capacity: int = DEFAULT_CAPACITY

    @property
    def cell_w(self) -> float:
        return self.width / self.gx

    @property
    def cell_h(self) -> float:
        return self.height / self.gy

    @property
    def overflow_v(self) -> np.ndarray:
        return np.maximum(self.demand_v - self.capacity, 0)

    @property
    def overflow_h(self) -> np.ndarray:
        return np.maximum(self.demand_h - self.capacity, 0)

    @property
    def max_overflow(self) -> int:
        return int(max(self.overflow_v.max(initial=0), self.overflow_h.max(initial=0)))

    @property
    def total_overflow(self) -> int:
        return int(self.overflow_v.sum() + self.overflow_h.sum())

    @property
    def total_demand(self) -> int:
        return int(self.demand_v.sum() + self.demand_h.sum())

    def to_dict(self) -> dict:
        return {"gx": self.gx, "gy": self.gy, "width": self.width, "height": self.height,
                "capacity": self.capacity, "demand_v": self.demand_v.tolist(),
                "demand_h": self.demand_h.tolist(), "max_overflow": self.max_overflow,
                "total_overflow": self.total_overflow}


def spanning_edges(points: Sequence[tuple[float, float]]) -> list[tuple[int, int]]:
    """Rectilinear minimum spanning tree by Prim; ties go to lower indices."""
    n = len(points)
    if n < 2:
        return []
    in_tree = [False] * n
    dist = [math.inf] * n
    parent = [-1] * n
    dist[0] = 0.0
    edges = []
    for _ in range(n):
        u = min((k for k in range(n) if not in_tree[k]), key=lambda k: (dist[k], k))
        in_tree[u] = True
        if parent[u] >= 0:
            edges.append((parent[u], u))
        for v in range(n):
            if not in_tree[v]:
                d = abs(points[u][0] - points[v][0]) + abs(points[u][1] - points[v][1])
                if d < dist[v]:
                    dist[v], parent[v] = d, u
    return edges


def l_route(p, q):
    """Two legs: horizontal from the lower-left pin, then vertical."""
    a, b = (p, q) if (p[0], p[1]) <= (q[0], q[1]) else (q, p)
    corner = (b[0], a[1])
    return (a, corner), (corner, b)


def estimate_congestion(placement: Placement, nets: Iterable[Net], blocks: Iterable[Block],
                        gx: int = 4, gy: int = 4,
                        capacity: int = DEFAULT_CAPACITY) -> CongestionMap:
    if gx < 2 or gy < 2:
        raise ValueError("congestion grid needs gx, gy >= 2")
    W, H = placement.width, placement.height
    cw, ch = W / gx, H / gy
    dv = np.zeros((gx - 1, gy), dtype=int)
    dh = np.zeros((gx, gy - 1), dtype=int)
    by_id = {b.id: b for b in blocks}

    def col(x):
        return min(max(int(math.floor(x / cw)), 0), gx - 1)

    def row(y):
        return min(max(int(math.floor(y / ch)), 0), gy - 1)

    for net in nets:
        pts = pin_positions(placement, net, by_id)
        for i, j in spanning_edges(pts):
            (a, c), (c2, b) = l_route(pts[i], pts[j])
            r = row(a[1])
            c_lo, c_hi = sorted((col(a[0]), col(c[0])))
            for k in range(c_lo, c_hi):
                dv[k, r] += 1
            cc = col(c2[0])
            r_lo, r_hi = sorted((row(c2[1]), row(b[1])))
            for k in range(r_lo, r_hi):
                dh[cc, k] += 1
    return CongestionMap(gx, gy, W, H, dv, dh, capacity)


def shift_blocks(placement: Placement, x_cuts: Iterable[float], y_cuts: Iterable[float],
                 pitch: float) -> Placement:
    """Move every block whose lower-left coordinate is at or beyond a cut by
    ``pitch`` per cut. The shift is nondecreasing in the coordinate, so
    relative order and non-overlap are preserved."""
    xc = sorted(set(x_cuts))
    yc = sorted(set(y_cuts))
    rects = {}
    for bid, r in placement.rects.items():
        dx = pitch * sum(1 for c in xc if r.x >= c - 1e-9)
        dy = pitch * sum(1 for c in yc if r.y >= c - 1e-9)
        rects[bid] = Rect(r.x + dx, r.y + dy, r.w, r.h)
    return Placement.from_rects(rects, variant=placement.variant, rotated=placement.rotated,
                                mirrored=placement.mirrored)


def redistribute(placement: Placement, cmap: CongestionMap, pitch: float,
                 nets: Sequence[Net], blocks: Sequence[Block]) -> Placement:
    """Open one pitch of spacing at every overflowed boundary.

    The spread placement is kept only if its recomputed congestion strictly
    improves (max overflow, then total overflow); otherwise the input is
    returned unchanged.
    """
    if cmap.total_overflow == 0:
        return placement
    x_cuts = [(c + 1) * cmap.cell_w for c in range(cmap.gx - 1) if cmap.overflow_v[c].any()]
    y_cuts = [(r + 1) * cmap.cell_h for r in range(cmap.gy - 1) if cmap.overflow_h[:, r].any()]
    spread = shift_blocks(placement, x_cuts, y_cuts, pitch)
    after = estimate_congestion(spread, nets, blocks, cmap.gx, cmap.gy, cmap.capacity)
    if (after.max_overflow, after.total_overflow) < (cmap.max_overflow, cmap.total_overflow):
        return spread
    return placement


def relieve_congestion(placement: Placement, nets: Sequence[Net], blocks: Sequence[Block],
                       gx: int = 4, gy: int = 4, capacity: int = DEFAULT_CAPACITY,
                       pitch: float = 1.0, max_iter: int = 10) -> tuple[Placement, CongestionMap, int]:
    """Apply :func:`redistribute` until the placement stops changing."""
    cmap = estimate_congestion(placement, nets, blocks, gx, gy, capacity)
    for it in range(max_iter):
        nxt = redistribute(placement, cmap, pitch, nets, blocks)
        if nxt is placement:
            return placement, cmap, it
        placement = nxt
        cmap = estimate_congestion(placement, nets, blocks, gx, gy, capacity)
    return placement, cmap, max_iter
