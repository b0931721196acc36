from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..model import Circuit
from ..seqpair import Placement, SequencePairState, try_pack

CostFn = Callable[[Placement], float]


class SearchFailed(RuntimeError):
    """No alignment-feasible state was ever evaluated."""


@dataclass
class SearchResult:
    best_state: SequencePairState
    best_placement: Placement
    best_cost: float
    cost_trace: list = field(default_factory=list)  # (step, current, best)
    wall_time: float = 0.0
    n_evals: int = 0


def evaluate(state: SequencePairState, circuit: Circuit,
             cost_fn: CostFn) -> tuple[float, Optional[Placement]]:
    placement = try_pack(state, circuit)
    if placement is None:
        return math.inf, None
    return float(cost_fn(placement)), placement
