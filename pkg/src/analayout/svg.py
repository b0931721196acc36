"""Deterministic SVG rendering of a floorplan with routes and conduits."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .router import H, Conduit, RouteTree
from .seqpair import Placement

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


def _f(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


def render_svg(placement: Placement, routes: Optional[dict[str, RouteTree]] = None,
               conduits: Sequence[Conduit] = (), scale: float = 20.0,
               margin: float = 1.0) -> str:
    """SVG text; y grows upward in layout space and is flipped for display."""
    W, H_ = placement.width, placement.height
    pw = (W + 2 * margin) * scale
    ph = (H_ + 2 * margin) * scale

    def X(x):
        return (x + margin) * scale

    def Y(y):
        return (H_ + margin - y) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(pw)}" height="{_f(ph)}" '
           f'viewBox="0 0 {_f(pw)} {_f(ph)}">',
           f'<path class="outline" d="M{_f(X(0))},{_f(Y(0))} H{_f(X(W))} V{_f(Y(H_))} '
           f'H{_f(X(0))} Z" fill="none" stroke="#999" stroke-dasharray="4"/>']
    for bid, r in placement.rects.items():
        out.append(f'<rect class="block" x="{_f(X(r.x))}" y="{_f(Y(r.y2))}" '
                   f'width="{_f(r.w * scale)}" height="{_f(r.h * scale)}" '
                   f'fill="#dde7f3" stroke="#334"/>')
        out.append(f'<text x="{_f(X(r.x + r.w / 2))}" y="{_f(Y(r.y + r.h / 2))}" '
                   f'font-size="{_f(0.3 * scale)}" text-anchor="middle">{escape(bid)}</text>')
    nets = sorted(routes) if routes else []
    color = {n: PALETTE[k % len(PALETTE)] for k, n in enumerate(nets)}
    for c in conduits:
        half = max(c.width, 0.05) / 2
        if c.orientation == H:
            x, y, w, h = c.start, c.cross_position - half, c.end - c.start, 2 * half
        else:
            x, y, w, h = c.cross_position - half, c.start, 2 * half, c.end - c.start
        out.append(f'<rect class="conduit" x="{_f(X(x))}" y="{_f(Y(y + h))}" '
                   f'width="{_f(w * scale)}" height="{_f(h * scale)}" fill="#f0a000" '
                   f'fill-opacity="0.3" stroke="none"/>')
    for n in nets:
        for a, b in routes[n].edges:
            out.append(f'<polyline class="net" data-net="{escape(n)}" '
                       f'points="{_f(X(a[0]))},{_f(Y(a[1]))} {_f(X(b[0]))},{_f(Y(b[1]))}" '
                       f'fill="none" stroke="{color[n]}" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(placement: Placement, path, routes=None, conduits=(), scale: float = 20.0) -> None:
    Path(path).write_text(render_svg(placement, routes, conduits, scale), encoding="utf-8")
