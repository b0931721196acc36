"""Obstacle-avoiding rectilinear Steiner trees by sequential path grafting."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .grid import TOL, Point, RoutingGrid, UnroutableError

Node = tuple[int, int]


@dataclass
class RouteTree:
    net: str
    vertices: list[Point]
    edges: list[tuple[Point, Point]]
    terminals: list[Point] = field(default_factory=list)

    @property
    def length(self) -> float:
        return sum(abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in self.edges)

    @property
    def steiner_points(self) -> list[Point]:
        deg: dict[Point, int] = {}
        for a, b in self.edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        terms = set(self.terminals)
        return [v for v in self.vertices if v not in terms and deg.get(v, 0) >= 3]


def _grow(grid: RoutingGrid, tree: set[Node]):
    """Multi-source Dijkstra from ``tree``; keys are (length, bends)."""
    best: dict[tuple[Node, int], tuple[float, int]] = {}
    prev: dict[tuple[Node, int], tuple[Node, int] | None] = {}
    heap = []
    for s in sorted(tree):
        for d in (0, 1):
            best[(s, d)] = (0.0, 0)
            prev[(s, d)] = None
            heapq.heappush(heap, (0.0, 0, grid.point(s), d, s))
    while heap:
        dist, bends, _, d, u = heapq.heappop(heap)
        if best.get((u, d), (float("inf"), 0)) < (dist, bends):
            continue
        for v, nd, length in grid.neighbors(u):
            key = (dist + length, bends + (1 if (nd != d and u not in tree) else 0))
            if key < best.get((v, nd), (float("inf"), 0)):
                best[(v, nd)] = key
                prev[(v, nd)] = (u, d)
                heapq.heappush(heap, (key[0], key[1], grid.point(v), nd, v))
    return best, prev


def _attach(grid: RoutingGrid, term_nodes: list[Node], net: str) -> set[tuple[Node, Node]]:
    tree: set[Node] = {term_nodes[0]}
    unit_edges: set[tuple[Node, Node]] = set()
    pending = set(term_nodes[1:]) - tree
    while pending:
        best, prev = _grow(grid, tree)
        choice = None
        for t in pending:
            keys = [best[(t, d)] for d in (0, 1) if (t, d) in best]
            if not keys:
                continue
            k = min(keys)
            cand = (k[0], k[1], grid.point(t))
            if choice is None or cand < choice[0]:
                d = min((d for d in (0, 1) if (t, d) in best), key=lambda d: best[(t, d)])
                choice = (cand, t, d)
        if choice is None:
            missing = sorted(grid.point(t) for t in pending)
            raise UnroutableError(f"net {net!r}: terminal {missing[0]} is unreachable")
        _, t, d = choice
        state = (t, d)
        while prev[state] is not None:
            u = prev[state][0]
            v = state[0]
            unit_edges.add((min(u, v), max(u, v)))
            tree.add(v)
            state = prev[state]
        tree.add(t)
        pending -= tree
    return unit_edges


def oarsmt(grid: RoutingGrid, terminals: Sequence[Point], net: str = "",
           multi_start: bool = True) -> RouteTree:
    """Grow a tree from a root terminal, repeatedly grafting the shortest
    grid path to the nearest unattached terminal.

    Ties prefer fewer bends, then the lexicographically smaller terminal.
    Degree-1 non-terminal vertices are pruned and collinear pass-through
    vertices collapsed. With ``multi_start`` every terminal is tried as the
    root and the shortest tree kept (earliest root on ties).
    """
    uniq: list[Point] = []
    for p in terminals:
        if not any(abs(p[0] - q[0]) <= TOL and abs(p[1] - q[1]) <= TOL for q in uniq):
            uniq.append(p)
    if not uniq:
        raise ValueError("a route needs at least one terminal")
    term_nodes = []
    for p in uniq:
        ij = grid.node(p)
        if grid.blocked[ij[0]][ij[1]]:
            raise UnroutableError(f"terminal {p} of net {net!r} is blocked")
        term_nodes.append(ij)

    points = [grid.point(t) for t in term_nodes]
    best = None
    for k in range(len(term_nodes) if multi_start else 1):
        order = [term_nodes[k]] + term_nodes[:k] + term_nodes[k + 1:]
        tree = _simplify(grid, _attach(grid, order, net), points, net)
        if best is None or tree.length < best.length - TOL:
            best = tree
    return best


def _simplify(grid: RoutingGrid, unit_edges, terminals: list[Point], net: str) -> RouteTree:
    adj: dict[Point, set[Point]] = {}
    for u, v in unit_edges:
        a, b = grid.point(u), grid.point(v)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    terms = set(terminals)
    for t in terminals:
        adj.setdefault(t, set())

    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in terms and len(adj[v]) <= 1:
                for u in adj[v]:
                    adj[u].discard(v)
                del adj[v]
                changed = True

    for v in sorted(adj):
        if v in terms or len(adj[v]) != 2:
            continue
        a, b = sorted(adj[v])
        if (a[0] == v[0] == b[0]) or (a[1] == v[1] == b[1]):
            adj[a].discard(v)
            adj[b].discard(v)
            adj[a].add(b)
            adj[b].add(a)
            del adj[v]

    vertices = sorted(adj)
    edges = sorted({(min(a, b), max(a, b)) for a in adj for b in adj[a]})
    return RouteTree(net, vertices, edges, list(terminals))
