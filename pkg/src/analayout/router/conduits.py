"""Layered segment decomposition and conduit bundling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .steiner import RouteTree

H, V = "horizontal", "vertical"


@dataclass(frozen=True)
class LayerPolicy:
    horizontal: int = 3
    vertical: int = 2

    def layer(self, orientation: str) -> int:
        return self.horizontal if orientation == H else self.vertical


@dataclass(frozen=True)
class Segment:
    net: str
    orientation: str
    cross_position: float
    start: float
    end: float
    layer: int
    blocks: tuple[str, ...] = ()

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class Via:
    net: str
    x: float
    y: float
    layers: tuple[int, int]


@dataclass(frozen=True)
class PitchConfig:
    wire_width: float = 0.1
    spacing: float = 0.1
    bundle_distance: float = 0.5


@dataclass
class Conduit:
    orientation: str
    start: float
    end: float
    cross_position: float
    nets: list[str]
    layer: int
    width: float
    blocks: list[str] = field(default_factory=list)
    members: list[Segment] = field(default_factory=list)

    @property
    def span(self) -> tuple[float, float]:
        return self.start, self.end


def decompose_segments(tree: RouteTree, policy: LayerPolicy = LayerPolicy(),
                       blocks: Sequence[str] = ()) -> tuple[list[Segment], list[Via]]:
    """One segment per tree edge; a via wherever H and V segments meet."""
    segs = []
    orient_at: dict = {}
    for a, b in tree.edges:
        if a[1] == b[1]:
            o, cross, lo, hi = H, a[1], min(a[0], b[0]), max(a[0], b[0])
        else:
            o, cross, lo, hi = V, a[0], min(a[1], b[1]), max(a[1], b[1])
        segs.append(Segment(tree.net, o, cross, lo, hi, policy.layer(o), tuple(blocks)))
        for p in (a, b):
            orient_at.setdefault(p, set()).add(o)
    vias = [Via(tree.net, p[0], p[1], (policy.horizontal, policy.vertical))
            for p in sorted(orient_at) if len(orient_at[p]) == 2]
    return segs, vias


def _overlap(a_lo, a_hi, b_lo, b_hi) -> bool:
    return min(a_hi, b_hi) - max(a_lo, b_lo) > 1e-12


def bundle_conduits(segments: Iterable[Segment], pitch: PitchConfig = PitchConfig()) -> list[Conduit]:
    """Merge parallel same-layer segments that lie within ``bundle_distance``
    of each other and overlap in span.

    Segments are visited in (orientation, layer, cross, start, net) order; a
    segment joins the first open bundle whose lowest cross position is within
    the distance and whose every member it overlaps. Members of a bundle are
    therefore pairwise within the distance and share a common span point.
    """
    segs = sorted(segments, key=lambda s: (s.orientation, s.layer, s.cross_position,
                                           s.start, s.end, s.net))
    groups: list[list[Segment]] = []
    for s in segs:
        target = None
        for g in groups:
            g0 = g[0]
            if g0.orientation != s.orientation or g0.layer != s.layer:
                continue
            if s.cross_position - g0.cross_position > pitch.bundle_distance + 1e-12:
                continue
            if all(_overlap(s.start, s.end, m.start, m.end) for m in g):
                target = g
                break
        if target is None:
            groups.append([s])
        else:
            target.append(s)

    out = []
    for g in groups:
        nets = sorted({m.net for m in g})
        width = len(nets) * pitch.wire_width + (len(nets) - 1) * pitch.spacing
        out.append(Conduit(
            orientation=g[0].orientation,
            start=min(m.start for m in g),
            end=max(m.end for m in g),
            cross_position=sum(m.cross_position for m in g) / len(g),
            nets=nets,
            layer=g[0].layer,
            width=width,
            blocks=sorted({b for m in g for b in m.blocks}),
            members=list(g),
        ))
    out.sort(key=lambda c: (c.orientation, c.layer, c.cross_position, c.start, c.nets))
    return out
