"""Independent reference computations used by the tests.

None of these reuse the packing, routing or congestion code they check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.csgraph import minimum_spanning_tree, shortest_path


def min_area_bruteforce(circuit) -> float:
    """Minimum bounding-box area over every sequence pair, orientation and
    variant.

    For a fixed sequence pair the packed width is the heaviest chain of
    mutually left-related blocks (and the height the heaviest chain of
    mutually below-related blocks); chains are found by subset enumeration
    and evaluated for all dimension choices at once.
    """
    blocks = circuit.blocks
    n = len(blocks)
    opts = []
    for b in blocks:
        dims = set()
        for v in b.variants:
            dims.add((v.width, v.height))
            if b.rotatable:
                dims.add((v.height, v.width))
        opts.append(sorted(dims))
    combos = list(itertools.product(*opts))
    W = np.array([[c[k][0] for k in range(n)] for c in combos])
    H = np.array([[c[k][1] for k in range(n)] for c in combos])
    subsets = [s for r in range(1, n + 1) for s in itertools.combinations(range(n), r)]
    best = math.inf
    for g1 in itertools.permutations(range(n)):
        p1 = {b: i for i, b in enumerate(g1)}
        for g2 in itertools.permutations(range(n)):
            p2 = {b: i for i, b in enumerate(g2)}
            width = np.zeros(len(combos))
            height = np.zeros(len(combos))
            for s in subsets:
                pairs = list(itertools.combinations(s, 2))
                if all((p1[a] - p1[b]) * (p2[a] - p2[b]) > 0 for a, b in pairs):
                    width = np.maximum(width, W[:, list(s)].sum(axis=1))
                if all((p1[a] - p1[b]) * (p2[a] - p2[b]) < 0 for a, b in pairs):
                    height = np.maximum(height, H[:, list(s)].sum(axis=1))
            best = min(best, float((width * height).min()))
    return best


def _crosses_interior(a, b, r) -> bool:
    """Whether the midpoint of a grid edge lies strictly inside ``r``.

    Grid edges never cross an obstacle edge line, so the midpoint decides."""
    mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return r.x < mx < r.x2 and r.y < my < r.y2


def grid_graph(grid):
    """Adjacency of the unblocked grid as a scipy sparse matrix, built from
    geometry rather than the grid's own edge flags."""
    xs, ys = grid.xs, grid.ys
    nx, ny = len(xs), len(ys)
    idx = lambda i, j: i * ny + j  # noqa: E731
    cx0, cy0, cx1, cy1 = grid.canvas

    def free(x, y):
        if x < cx0 - 1e-9 or x > cx1 + 1e-9 or y < cy0 - 1e-9 or y > cy1 + 1e-9:
            return False
        return not any(r.x < x < r.x2 and r.y < y < r.y2 for r in grid.obstacles)

    A = lil_matrix((nx * ny, nx * ny))
    for i in range(nx):
        for j in range(ny):
            if not free(xs[i], ys[j]):
                continue
            for di, dj in ((1, 0), (0, 1)):
                k, m = i + di, j + dj
                if k >= nx or m >= ny or not free(xs[k], ys[m]):
                    continue
                a, b = (xs[i], ys[j]), (xs[k], ys[m])
                if any(_crosses_interior(a, b, r) for r in grid.obstacles):
                    continue
                d = abs(xs[k] - xs[i]) + abs(ys[m] - ys[j])
                A[idx(i, j), idx(k, m)] = d
                A[idx(k, m), idx(i, j)] = d
    return A.tocsr(), idx


def exact_steiner_length(grid, terminals) -> float:
    """Optimal obstacle-avoiding Steiner length on the grid graph.

    Tries every set of at most k-2 Steiner vertices and takes the minimum
    spanning tree of terminals plus Steiner vertices in the shortest-path
    metric.
    """
    A, idx = grid_graph(grid)
    D = shortest_path(A, method="D", directed=False)
    nodes = [idx(*grid.node(t)) for t in terminals]
    nodes = list(dict.fromkeys(nodes))
    k = len(nodes)
    if k <= 1:
        return 0.0
    candidates = [v for v in range(D.shape[0]) if np.isfinite(D[nodes[0], v]) and v not in nodes]
    best = math.inf
    for r in range(0, max(k - 2, 0) + 1):
        for extra in itertools.combinations(candidates, r):
            pts = nodes + list(extra)
            sub = D[np.ix_(pts, pts)]
            if not np.all(np.isfinite(sub)):
                continue
            mst = minimum_spanning_tree(sub)
            best = min(best, float(mst.sum()))
    return best


def count_boundary_crossings(segments, W, H, gx, gy) -> int:
    """Number of (segment, grid line) intersections for axis-parallel
    segments against the internal lines of a uniform gx x gy grid."""
    total = 0
    xl = [W * k / gx for k in range(1, gx)]
    yl = [H * k / gy for k in range(1, gy)]
    for (x1, y1), (x2, y2) in segments:
        if y1 == y2:
            lo, hi = sorted((x1, x2))
            total += sum(1 for x in xl if lo < x <= hi)
        else:
            lo, hi = sorted((y1, y2))
            total += sum(1 for y in yl if lo < y <= hi)
    return total


def central_difference(f, params, eps=1e-6):
    """Numerical gradient of scalar ``f()`` w.r.t. each array in ``params``."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            ix = it.multi_index
            old = p[ix]
            p[ix] = old + eps
            up = f()
            p[ix] = old - eps
            down = f()
            p[ix] = old
            g[ix] = (up - down) / (2 * eps)
        grads.append(g)
    return grads
