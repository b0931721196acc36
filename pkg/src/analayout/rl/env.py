"""Floorplanning MDPs.

``rlsa`` mode: the agent picks a move kind each step and SA refines the
final state when the episode ends. ``pure`` mode: the environment proposes a
neighbour and the agent accepts or rejects it.

Observation layout: ``[current, minimum, average, neighbour] / initial cost,
phase, then (x/W, y/H, w/W, h/H)`` for every original block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..cost import make_objective
from ..model import Circuit, fold_symmetry
from ..search import SAConfig, evaluate, simulated_annealing
from ..seqpair import MOVES, Placement, SequencePairState, feasible_random_state, perturb, unfold

MODES = ("rlsa", "pure")
ACCEPT, REJECT = 0, 1
NEIGHBOR_TRIES = 20


class IllegalAction(ValueError):
    pass


@dataclass(frozen=True)
class RewardSpec:
    """``improvement``: cost(s) - cost(s'); ``increase``: cost(s') - cost(s)."""

    intermediate_sign: str = "improvement"
    global_sign: str = "improvement"

    def __post_init__(self):
        for v in (self.intermediate_sign, self.global_sign):
            if v not in ("improvement", "increase"):
                raise ValueError(f"unknown reward convention {v!r}")

    @staticmethod
    def _signed(sign: str, before: float, after: float) -> float:
        return before - after if sign == "improvement" else after - before

    def intermediate(self, before: float, after: float) -> float:
        return self._signed(self.intermediate_sign, before, after)

    def global_(self, pre_sa: float, post_sa: float) -> float:
        return self._signed(self.global_sign, pre_sa, post_sa)

    def to_dict(self) -> dict:
        return {"intermediate_sign": self.intermediate_sign, "global_sign": self.global_sign}


def obs_dim(n_blocks: int) -> int:
    return 5 + 4 * n_blocks


class FloorplanEnv:
    def __init__(self, circuit: Circuit, mode: str = "pure", cyclic: bool = False,
                 reward: RewardSpec = RewardSpec(), steps_per_episode: int = 5000,
                 objective: str = "combined", sa_config: SAConfig = SAConfig(t0=15.0, steps=2000),
                 symmetry_spacing: float = 0.0, rng: Optional[np.random.Generator] = None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.circuit = circuit
        self.mode = mode
        self.cyclic = cyclic
        self.reward_spec = reward
        self.steps_per_episode = int(steps_per_episode)
        self.sa_config = sa_config
        self.folded = fold_symmetry(circuit, symmetry_spacing)
        self.work = self.folded.circuit
        self.cost_fn = make_objective(objective, self.work)
        self.rng = rng if rng is not None else np.random.default_rng()
        self.n_actions = len(MOVES) if mode == "rlsa" else 2
        self.obs_dim = obs_dim(circuit.n_blocks)
        self._final_state: Optional[SequencePairState] = None
        self.state: Optional[SequencePairState] = None

    # -- helpers -------------------------------------------------------------

    def _evaluate(self, state):
        return evaluate(state, self.work, self.cost_fn)

    def _start_state(self) -> tuple[SequencePairState, float, Placement]:
        if self.cyclic and self._final_state is not None:
            state = self._final_state
        else:
            state = feasible_random_state(self.work, self.rng)
        cost, pl = self._evaluate(state)
        while pl is None:
            state = feasible_random_state(self.work, self.rng)
            cost, pl = self._evaluate(state)
        return state, cost, pl

    def _sample_neighbor(self):
        for _ in range(NEIGHBOR_TRIES):
            move = MOVES[int(self.rng.integers(len(MOVES)))]
            cand, changed = perturb(self.state, move, self.work, self.rng)
            if not changed:
                continue
            cost, pl = self._evaluate(cand)
            if pl is not None:
                return cand, cost, pl
        return self.state, self.cost, self.placement

    def _observe(self) -> np.ndarray:
        c0 = abs(self.initial_cost) if abs(self.initial_cost) > 1e-12 else 1.0
        nb = self.neighbor_cost if self.mode == "pure" else self.cost
        stats = [self.cost / c0, self.min_cost / c0, self._hist_sum / self._hist_n / c0,
                 nb / c0, self.phase]
        pl = unfold(self.placement, self.folded)
        W, H = pl.width, pl.height
        geo = []
        for bid in self.circuit.ids:
            r = pl.rects[bid]
            geo += [r.x / W, r.y / H, r.w / W, r.h / H]
        return np.asarray(stats + geo, dtype=float)

    def _record(self, cost: float) -> None:
        self._hist_sum += cost
        self._hist_n += 1
        self.cost_history.append(cost)
        if cost < self.min_cost:
            self.min_cost = cost
        if cost < self.best_cost:
            self.best_cost = cost
            self.best_state = self.state
            self.best_placement = self.placement

    # -- API -------------------------------------------------------------------

    def reset(self) -> np.ndarray:
        self.state, self.cost, self.placement = self._start_state()
        self.start_state = self.state
        self.initial_cost = self.cost
        self.min_cost = math.inf
        self.best_cost = math.inf
        self._hist_sum = 0.0
        self._hist_n = 0
        self.cost_history: list[float] = []
        self.t = 0
        self.phase = 0.0
        self._record(self.cost)
        if self.mode == "pure":
            self.neighbor, self.neighbor_cost, self.neighbor_pl = self._sample_neighbor()
        return self._observe()

    def step(self, action: int):
        if self.state is None:
            raise RuntimeError("call reset() before step()")
        if not (isinstance(action, (int, np.integer)) and 0 <= action < self.n_actions):
            raise IllegalAction(f"action {action!r} is not legal in {self.mode} mode")
        before = self.cost
        info: dict = {}
        if self.mode == "pure":
            if action == ACCEPT:
                self.state, self.cost, self.placement = (
                    self.neighbor, self.neighbor_cost, self.neighbor_pl)
            reward = self.reward_spec.intermediate(before, self.cost) if action == ACCEPT else 0.0
        else:
            cand, changed = perturb(self.state, MOVES[action], self.work, self.rng)
            reward = 0.0
            if changed:
                cost, pl = self._evaluate(cand)
                if pl is not None:
                    self.state, self.cost, self.placement = cand, cost, pl
                    reward = self.reward_spec.intermediate(before, cost)
        self.t += 1
        self.phase = min(1.0, self.t / self.steps_per_episode)
        self._record(self.cost)
        done = self.t >= self.steps_per_episode
        if done and self.mode == "rlsa":
            pre = self.cost
            res = simulated_annealing(self.state, self.work, self.cost_fn,
                                      self.sa_config, self.rng)
            g = self.reward_spec.global_(pre, res.best_cost)
            info.update(pre_sa_cost=pre, post_sa_cost=res.best_cost, global_reward=g,
                        pre_sa_state=self.state)
            reward += g
            self.state, self.cost, self.placement = (
                res.best_state, res.best_cost, res.best_placement)
            self._record(self.cost)
        if done:
            self._final_state = self.state
        elif self.mode == "pure":
            self.neighbor, self.neighbor_cost, self.neighbor_pl = self._sample_neighbor()
        return self._observe(), float(reward), done, info

    def best_unfolded(self) -> Placement:
        return unfold(self.best_placement, self.folded)
