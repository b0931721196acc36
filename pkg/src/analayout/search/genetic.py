"""Genetic search with order crossover on both sequences."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..model import Circuit
from ..seqpair import SequencePairState, feasible_random_state, random_move
from ._common import CostFn, SearchFailed, SearchResult, evaluate


@dataclass(frozen=True)
class GAConfig:
    mutation_rate: float = 0.1
    crossover_rate: float = 0.9
    population: int = 200
    generations: int = 25

    def __post_init__(self):
        if not (0 <= self.mutation_rate <= 1 and 0 <= self.crossover_rate <= 1):
            raise ValueError("GA rates must lie in [0, 1]")
        if self.population < 2 or self.generations < 0:
            raise ValueError("GA needs population >= 2")


def order_crossover(p1: Sequence, p2: Sequence, cut1: int, cut2: int) -> tuple:
    """Davis order crossover.

    The child keeps ``p1[cut1:cut2+1]`` in place; the remaining positions,
    starting after ``cut2`` and wrapping around, are filled with the missing
    genes in the order they appear in ``p2`` read from ``cut2+1`` onward.
    """
    n = len(p1)
    child = [None] * n
    kept = set(p1[cut1:cut2 + 1])
    child[cut1:cut2 + 1] = p1[cut1:cut2 + 1]
    donors = [p2[(cut2 + 1 + k) % n] for k in range(n)]
    fill = iter(g for g in donors if g not in kept)
    for k in range(n):
        pos = (cut2 + 1 + k) % n
        if child[pos] is None:
            child[pos] = next(fill)
    return tuple(child)


def _cuts(rng: np.random.Generator, n: int) -> tuple[int, int]:
    a, b = sorted(int(v) for v in rng.integers(n, size=2))
    return a, b


def crossover(a: SequencePairState, b: SequencePairState,
              rng: np.random.Generator) -> SequencePairState:
    n = len(a.gamma1)
    g1 = order_crossover(a.gamma1, b.gamma1, *_cuts(rng, n))
    g2 = order_crossover(a.gamma2, b.gamma2, *_cuts(rng, n))
    mask = rng.random(n) < 0.5
    rot = tuple(ra if m else rb for m, ra, rb in zip(mask, a.rotated, b.rotated))
    var = tuple(va if m else vb for m, va, vb in zip(mask, a.variant, b.variant))
    return SequencePairState(g1, g2, rot, var)


def genetic_search(circuit: Circuit, cost_fn: CostFn, cfg: GAConfig,
                   rng: np.random.Generator, on_generation=None) -> SearchResult:
    """Tournament-2 selection, order crossover, single-move mutation and
    single-individual elitism."""
    t_start = time.perf_counter()
    pop = [feasible_random_state(circuit, rng) for _ in range(cfg.population)]
    evals = [evaluate(s, circuit, cost_fn) for s in pop]
    costs = [c for c, _ in evals]
    n_evals = len(pop)
    k = int(np.argmin(costs))
    best, best_cost, best_pl = pop[k], costs[k], evals[k][1]
    trace = [(0, costs[k], best_cost)]

    def tournament() -> int:
        i, j = rng.integers(len(pop), size=2)
        return int(i) if costs[i] <= costs[j] else int(j)

    for gen in range(1, cfg.generations + 1):
        elite = int(np.argmin(costs))
        new_pop = [pop[elite]]
        new_evals = [(costs[elite], evals[elite][1])]
        while len(new_pop) < cfg.population:
            a, b = tournament(), tournament()
            if rng.random() < cfg.crossover_rate:
                child = crossover(pop[a], pop[b], rng)
                fresh = True
            else:
                child, fresh = pop[a], False
            if rng.random() < cfg.mutation_rate:
                child, _, changed = random_move(child, circuit, rng)
                fresh = fresh or changed
            if fresh:
                new_evals.append(evaluate(child, circuit, cost_fn))
                n_evals += 1
            else:
                new_evals.append((costs[a], evals[a][1]))
            new_pop.append(child)
        pop, evals = new_pop, new_evals
        costs = [c for c, _ in evals]
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best, best_cost, best_pl = pop[k], costs[k], evals[k][1]
        trace.append((gen, costs[k], best_cost))
        if on_generation is not None:
            on_generation(gen, pop)
    if best_pl is None or not math.isfinite(best_cost):
        raise SearchFailed("genetic search found no alignment-feasible state")
    return SearchResult(best, best_pl, best_cost, trace,
                        time.perf_counter() - t_start, n_evals)
