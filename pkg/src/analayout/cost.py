"""Floorplan cost: area, HPWL, empty space and the weighted combination."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .model import Block, Circuit, Net, pin_offset
from .seqpair import Placement

HPWL_WINDOW = 100


class EvaluationError(ValueError):
    pass


def pin_positions(placement: Placement, net: Net,
                  blocks: dict[str, Block]) -> list[tuple[float, float]]:
    pts = []
    for p in net.pins:
        r = placement.rects.get(p.block)
        if r is None:
            raise EvaluationError(f"net {net.name!r} has a pin on unplaced block {p.block!r}")
        b = blocks[p.block]
        dx, dy = pin_offset(b, p, placement.variant.get(p.block, 0),
                            p.block in placement.rotated, p.block in placement.mirrored)
        pts.append((r.x + dx, r.y + dy))
    return pts


def net_hpwl(points: Sequence[tuple[float, float]]) -> float:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (max(xs) - min(xs)) + (max(ys) - min(ys))


def hpwl(placement: Placement, nets: Iterable[Net], blocks: Iterable[Block]) -> float:
    """Weighted half-perimeter wirelength summed over ``nets``."""
    by_id = {b.id: b for b in blocks}
    total = 0.0
    for net in nets:
        if net.pins:
            total += net.weight * net_hpwl(pin_positions(placement, net, by_id))
    return total


def area_cost(placement: Placement) -> float:
    return placement.width * placement.height


def placed_block_area(placement: Placement) -> float:
    return sum(r.w * r.h for r in placement.rects.values())


def empty_space(placement: Placement) -> float:
    """Percentage of the bounding box not covered by blocks."""
    f = area_cost(placement)
    return 100.0 * (f - placed_block_area(placement)) / f


def aspect_ratio(placement: Placement) -> float:
    if placement.width <= 0:
        raise EvaluationError("placement has zero width")
    return placement.height / placement.width


class CostTracker:
    """Sliding mean of the last ``window`` HPWL values."""

    def __init__(self, window: int = HPWL_WINDOW):
        self.values: deque[float] = deque(maxlen=window)
        self.eval_count = 0

    @property
    def hpwl_avg(self) -> Optional[float]:
        if not self.values:
            return None
        return math.fsum(self.values) / len(self.values)

    def push(self, value: float) -> None:
        self.values.append(float(value))
        self.eval_count += 1

    def copy(self) -> "CostTracker":
        t = CostTracker(self.values.maxlen)
        t.values.extend(self.values)
        t.eval_count = self.eval_count
        return t


@dataclass(frozen=True)
class CostBreakdown:
    area_term: float
    wirelength_term: float
    aspect_term: float
    total: float
    f_area: float
    hpwl: float
    r: float


def combined_cost(placement: Placement, nets: Iterable[Net], alpha: float, beta: float,
                  tracker: CostTracker, target_ratio: float, total_block_area: float,
                  blocks: Iterable[Block]) -> CostBreakdown:
    """Weighted area / wirelength / aspect-ratio cost.

    The wirelength term is normalized by the tracker's running HPWL mean;
    the current HPWL is recorded afterwards. Before any HPWL is recorded the
    mean is taken to be the current value.
    """
    f_area = area_cost(placement)
    wl = hpwl(placement, nets, blocks)
    r = aspect_ratio(placement)
    avg = tracker.hpwl_avg
    if avg is None or avg <= 0:
        wl_term = 0.0 if wl == 0 else 1.0
    else:
        wl_term = wl / avg
    area_term = f_area / total_block_area
    aspect_term = (target_ratio - r) ** 2
    total = alpha * area_term + beta * wl_term + (1.0 - alpha - beta) * aspect_term
    tracker.push(wl)
    return CostBreakdown(area_term, wl_term, aspect_term, total, f_area, wl, r)


class AreaObjective:
    """Bounding-box area of the packed floorplan (µm²)."""

    name = "area"

    def __init__(self, circuit: Circuit):
        self.circuit = circuit

    def __call__(self, placement: Placement) -> float:
        return area_cost(placement)

    def reset(self) -> None:
        pass


class CombinedObjective:
    """Weighted area/HPWL/aspect cost with its own HPWL tracker."""

    name = "combined"

    def __init__(self, circuit: Circuit, tracker: Optional[CostTracker] = None):
        self.circuit = circuit
        self.tracker = tracker if tracker is not None else CostTracker()
        self.last: Optional[CostBreakdown] = None

    def __call__(self, placement: Placement) -> float:
        c = self.circuit
        self.last = combined_cost(placement, c.nets, c.alpha, c.beta, self.tracker,
                                  c.target_aspect_ratio, placed_block_area(placement),
                                  c.blocks)
        return self.last.total

    def reset(self) -> None:
        self.tracker = CostTracker(self.tracker.values.maxlen)


OBJECTIVES = {"area": AreaObjective, "combined": CombinedObjective}


def make_objective(name: str, circuit: Circuit):
    try:
        return OBJECTIVES[name](circuit)
    except KeyError:
        raise ValueError(f"unknown objective {name!r}; choose from {sorted(OBJECTIVES)}") from None
