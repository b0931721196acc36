"""Obstacle-extended Hanan grid."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..seqpair import Rect

Point = tuple[float, float]
TOL = 1e-9


class UnroutableError(ValueError):
    """A terminal is blocked or cannot be reached."""


def _strictly_inside(x: float, y: float, r: Rect) -> bool:
    return r.x + TOL < x < r.x2 - TOL and r.y + TOL < y < r.y2 - TOL


@dataclass
class RoutingGrid:
    xs: list[float]
    ys: list[float]
    obstacles: list[Rect]
    canvas: tuple[float, float, float, float]
    blocked: list[list[bool]]  # blocked[i][j] for node (xs[i], ys[j])
    h_ok: list[list[bool]]  # edge (i, j) -> (i+1, j)
    v_ok: list[list[bool]]  # edge (i, j) -> (i, j+1)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.xs), len(self.ys)

    @property
    def n_nodes(self) -> int:
        return len(self.xs) * len(self.ys)

    def node(self, p: Point) -> tuple[int, int]:
        i = bisect.bisect_left(self.xs, p[0] - TOL)
        j = bisect.bisect_left(self.ys, p[1] - TOL)
        if i >= len(self.xs) or abs(self.xs[i] - p[0]) > TOL or \
                j >= len(self.ys) or abs(self.ys[j] - p[1]) > TOL:
            raise KeyError(f"point {p} is not a grid node")
        return i, j

    def point(self, ij: tuple[int, int]) -> Point:
        return self.xs[ij[0]], self.ys[ij[1]]

    def neighbors(self, ij: tuple[int, int]):
        """Yield ``(neighbor, direction, length)``; direction 0 = H, 1 = V."""
        i, j = ij
        nx, ny = self.shape
        if i + 1 < nx and self.h_ok[i][j]:
            yield (i + 1, j), 0, self.xs[i + 1] - self.xs[i]
        if i > 0 and self.h_ok[i - 1][j]:
            yield (i - 1, j), 0, self.xs[i] - self.xs[i - 1]
        if j + 1 < ny and self.v_ok[i][j]:
            yield (i, j + 1), 1, self.ys[j + 1] - self.ys[j]
        if j > 0 and self.v_ok[i][j - 1]:
            yield (i, j - 1), 1, self.ys[j] - self.ys[j - 1]

    def edge_ok(self, a: Point, b: Point) -> bool:
        """Whether an axis-parallel segment avoids every obstacle interior."""
        for r in self.obstacles:
            if segment_hits_interior(a, b, r):
                return False
        return True


def segment_hits_interior(a: Point, b: Point, r: Rect) -> bool:
    (x1, y1), (x2, y2) = a, b
    if abs(y1 - y2) <= TOL:
        lo, hi = min(x1, x2), max(x1, x2)
        return r.y + TOL < y1 < r.y2 - TOL and min(hi, r.x2) - max(lo, r.x) > TOL
    lo, hi = min(y1, y2), max(y1, y2)
    return r.x + TOL < x1 < r.x2 - TOL and min(hi, r.y2) - max(lo, r.y) > TOL


def _unique(vals: Iterable[float]) -> list[float]:
    out: list[float] = []
    for v in sorted(vals):
        if not out or v - out[-1] > TOL:
            out.append(v)
    return out


def build_grid(terminals: Sequence[Point], obstacles: Sequence[Rect] = (),
               canvas: Optional[tuple[float, float, float, float]] = None) -> RoutingGrid:
    """Hanan grid of the terminals, extended with obstacle edges and the
    canvas boundary. Nodes outside the canvas or strictly inside an obstacle
    are blocked; obstacle boundaries stay routable.

    ``canvas`` is ``(x0, y0, x1, y1)``; by default it spans from the origin to
    the largest terminal/obstacle coordinate.
    """
    obstacles = list(obstacles)
    if canvas is None:
        xs_all = [p[0] for p in terminals] + [r.x2 for r in obstacles]
        ys_all = [p[1] for p in terminals] + [r.y2 for r in obstacles]
        canvas = (min(0.0, *[p[0] for p in terminals]), min(0.0, *[p[1] for p in terminals]),
                  max(xs_all), max(ys_all))
    cx0, cy0, cx1, cy1 = canvas
    for p in terminals:
        if not (cx0 - TOL <= p[0] <= cx1 + TOL and cy0 - TOL <= p[1] <= cy1 + TOL):
            raise UnroutableError(f"terminal {p} lies outside the canvas")
        for r in obstacles:
            if _strictly_inside(p[0], p[1], r):
                raise UnroutableError(f"terminal {p} lies strictly inside an obstacle")
    xs = _unique([p[0] for p in terminals] + [v for r in obstacles for v in (r.x, r.x2)]
                 + [cx0, cx1])
    ys = _unique([p[1] for p in terminals] + [v for r in obstacles for v in (r.y, r.y2)]
                 + [cy0, cy1])

    def outside(x, y):
        return x < cx0 - TOL or x > cx1 + TOL or y < cy0 - TOL or y > cy1 + TOL

    blocked = [[outside(x, y) or any(_strictly_inside(x, y, r) for r in obstacles)
                for y in ys] for x in xs]
    nx, ny = len(xs), len(ys)
    h_ok = [[False] * ny for _ in range(max(nx - 1, 0))]
    v_ok = [[False] * max(ny - 1, 0) for _ in range(nx)]
    for i in range(nx - 1):
        for j in range(ny):
            if blocked[i][j] or blocked[i + 1][j]:
                continue
            mx, y = (xs[i] + xs[i + 1]) / 2.0, ys[j]
            h_ok[i][j] = not any(_strictly_inside(mx, y, r) for r in obstacles)
    for i in range(nx):
        for j in range(ny - 1):
            if blocked[i][j] or blocked[i][j + 1]:
                continue
            x, my = xs[i], (ys[j] + ys[j + 1]) / 2.0
            v_ok[i][j] = not any(_strictly_inside(x, my, r) for r in obstacles)
    return RoutingGrid(xs, ys, obstacles, canvas, blocked, h_ok, v_ok)
