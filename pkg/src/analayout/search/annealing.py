"""Simulated annealing over sequence-pair states."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..model import Circuit
from ..seqpair import SequencePairState, random_move
from ._common import CostFn, SearchFailed, SearchResult, evaluate

FINAL_TEMPERATURE = 0.01


@dataclass(frozen=True)
class SAConfig:
    t0: float = 15.0
    steps: int = 5000
    cooling: Optional[float] = None  # None: decay t0 -> 0.01 over ``steps``

    def __post_init__(self):
        if self.t0 <= 0 or self.steps < 1:
            raise ValueError("SA needs t0 > 0 and steps >= 1")
        if self.cooling is not None and not 0 < self.cooling < 1:
            raise ValueError("cooling ratio must lie in (0, 1)")

    @property
    def ratio(self) -> float:
        if self.cooling is not None:
            return self.cooling
        return (FINAL_TEMPERATURE / self.t0) ** (1.0 / self.steps)


def acceptance_probability(delta: float, temperature: float) -> float:
    """Metropolis rule."""
    if delta <= 0:
        return 1.0
    if not math.isfinite(delta):
        return 0.0
    return math.exp(-delta / temperature)


def simulated_annealing(init: SequencePairState, circuit: Circuit, cost_fn: CostFn,
                        cfg: SAConfig, rng: np.random.Generator) -> SearchResult:
    """Anneal from ``init``; move kinds are drawn uniformly each step.

    Alignment-infeasible neighbours count as rejected moves. The returned
    result holds the best state ever evaluated.
    """
    t_start = time.perf_counter()
    cur = init
    cur_cost, cur_pl = evaluate(cur, circuit, cost_fn)
    best, best_cost, best_pl = cur, cur_cost, cur_pl
    trace = [(0, cur_cost, best_cost)]
    temperature = cfg.t0
    ratio = cfg.ratio
    n_evals = 1
    for step in range(1, cfg.steps + 1):
        cand, _, changed = random_move(cur, circuit, rng)
        if changed:
            cost, pl = evaluate(cand, circuit, cost_fn)
            n_evals += 1
            if pl is not None:
                delta = cost - cur_cost
                if delta <= 0 or rng.random() < acceptance_probability(delta, temperature):
                    cur, cur_cost, cur_pl = cand, cost, pl
                    if cost < best_cost:
                        best, best_cost, best_pl = cand, cost, pl
        trace.append((step, cur_cost, best_cost))
        temperature *= ratio
    if best_pl is None:
        raise SearchFailed("annealing never reached an alignment-feasible state")
    return SearchResult(best, best_pl, best_cost, trace,
                        time.perf_counter() - t_start, n_evals)
