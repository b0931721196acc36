"""Particle swarm search with a random-keys encoding of sequence pairs.

A particle's position has four blocks of n keys in [0, 1]: the argsort of
the first two gives the sequences, the third picks a shape variant by
binning and the fourth sets rotation for rotatable blocks (key >= 0.5).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..model import Circuit
from ..seqpair import SequencePairState
from ._common import CostFn, SearchFailed, SearchResult, evaluate


@dataclass(frozen=True)
class PSOConfig:
    inertia: float = 0.8
    cognitive: float = 1.49
    social: float = 1.49
    population: int = 200
    iterations: int = 25
    v_max: float = 0.5

    def __post_init__(self):
        if self.population < 2 or self.iterations < 0:
            raise ValueError("PSO needs population >= 2")


def keys_to_order(keys, ids):
    return tuple(ids[k] for k in np.argsort(keys, kind="stable"))


def decode(position: np.ndarray, circuit: Circuit) -> SequencePairState:
    ids = circuit.ids
    n = len(ids)
    g1 = keys_to_order(position[:n], ids)
    g2 = keys_to_order(position[n:2 * n], ids)
    var = []
    rot = []
    for k, b in enumerate(circuit.blocks):
        nv = len(b.variants)
        var.append(min(int(position[2 * n + k] * nv), nv - 1))
        rot.append(bool(b.rotatable and position[3 * n + k] >= 0.5))
    return SequencePairState(g1, g2, tuple(rot), tuple(var))


def particle_swarm(circuit: Circuit, cost_fn: CostFn, cfg: PSOConfig,
                   rng: np.random.Generator) -> SearchResult:
    t_start = time.perf_counter()
    n = circuit.n_blocks
    p, d = cfg.population, 4 * n
    x = rng.random((p, d))
    v = rng.uniform(-0.1, 0.1, size=(p, d))

    def score(pos):
        s = decode(pos, circuit)
        c, pl = evaluate(s, circuit, cost_fn)
        return s, c, pl

    scored = [score(x[i]) for i in range(p)]
    n_evals = p
    pbest = x.copy()
    pbest_cost = np.array([c for _, c, _ in scored])
    g = int(np.argmin(pbest_cost))
    best_state, best_cost, best_pl = scored[g][0], float(pbest_cost[g]), scored[g][2]
    gbest = pbest[g].copy()
    trace = [(0, best_cost, best_cost)]

    for it in range(1, cfg.iterations + 1):
        r1 = rng.random((p, d))
        r2 = rng.random((p, d))
        v = (cfg.inertia * v + cfg.cognitive * r1 * (pbest - x)
             + cfg.social * r2 * (gbest - x))
        np.clip(v, -cfg.v_max, cfg.v_max, out=v)
        x = np.clip(x + v, 0.0, 1.0)
        it_best = math.inf
        for i in range(p):
            s, c, pl = score(x[i])
            n_evals += 1
            it_best = min(it_best, c)
            if c < pbest_cost[i]:
                pbest_cost[i] = c
                pbest[i] = x[i]
                if c < best_cost:
                    best_state, best_cost, best_pl = s, c, pl
                    gbest = x[i].copy()
        trace.append((it, it_best, best_cost))
    if best_pl is None or not math.isfinite(best_cost):
        raise SearchFailed("particle swarm found no alignment-feasible state")
    return SearchResult(best_state, best_pl, best_cost, trace,
                        time.perf_counter() - t_start, n_evals)
