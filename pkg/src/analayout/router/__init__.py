"""Global routing: per-net OARSMT, layered segments, conduits, congestion."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..cost import pin_positions
from ..model import Circuit, Net
from ..seqpair import Placement
from .conduits import (H, V, Conduit, LayerPolicy, PitchConfig, Segment, Via, bundle_conduits,
                       decompose_segments)
from .congestion import (DEFAULT_CAPACITY, CongestionMap, estimate_congestion, l_route,
                         redistribute, relieve_congestion, shift_blocks, spanning_edges)
from .grid import RoutingGrid, UnroutableError, build_grid, segment_hits_interior
from .steiner import RouteTree, oarsmt


def net_obstacles(placement: Placement, net: Net):
    own = {p.block for p in net.pins}
    return [r for bid, r in placement.rects.items() if bid not in own]


def grid_for_net(placement: Placement, net: Net, circuit: Circuit) -> tuple[RoutingGrid, list]:
    terminals = pin_positions(placement, net, {b.id: b for b in circuit.blocks})
    grid = build_grid(terminals, net_obstacles(placement, net),
                      canvas=(0.0, 0.0, placement.width, placement.height))
    return grid, terminals


def route_net(placement: Placement, net: Net, circuit: Circuit) -> RouteTree:
    grid, terminals = grid_for_net(placement, net, circuit)
    return oarsmt(grid, terminals, net.name)


@dataclass
class RoutingResult:
    trees: dict[str, RouteTree]
    segments: list[Segment]
    vias: list[Via]
    conduits: list[Conduit]
    congestion: CongestionMap
    placement: Placement = field(repr=False, default=None)

    @property
    def wirelength(self) -> float:
        return sum(t.length for t in self.trees.values())


def route_placement(placement: Placement, circuit: Circuit, layers: LayerPolicy = LayerPolicy(),
                    pitch: PitchConfig = PitchConfig(), gx: int = 4, gy: int = 4,
                    capacity: int = DEFAULT_CAPACITY) -> RoutingResult:
    """Route every net of ``circuit`` (in net-name order) over ``placement``."""
    trees: dict[str, RouteTree] = {}
    segments: list[Segment] = []
    vias: list[Via] = []
    for net in sorted(circuit.nets, key=lambda n: n.name):
        tree = route_net(placement, net, circuit)
        trees[net.name] = tree
        blocks = sorted({p.block for p in net.pins})
        s, v = decompose_segments(tree, layers, blocks)
        segments += s
        vias += v
    conduits = bundle_conduits(segments, pitch)
    cmap = estimate_congestion(placement, circuit.nets, circuit.blocks, gx, gy, capacity)
    return RoutingResult(trees, segments, vias, conduits, cmap, placement)


__all__ = [
    "H", "V", "Conduit", "LayerPolicy", "PitchConfig", "Segment", "Via", "bundle_conduits",
    "decompose_segments", "DEFAULT_CAPACITY", "CongestionMap", "estimate_congestion", "l_route",
    "redistribute", "relieve_congestion", "shift_blocks", "spanning_edges", "RoutingGrid",
    "UnroutableError", "build_grid", "segment_hits_interior", "RouteTree", "oarsmt",
    "net_obstacles", "grid_for_net", "route_net", "RoutingResult", "route_placement",
]
