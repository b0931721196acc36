"""Estimator-style wrappers around the floorplan searches and the router.

Each floorplanner is configured through constructor parameters
(``get_params``/``set_params``/``clone`` work as usual) and ``fit`` takes a
circuit. Fitted attributes end with an underscore:

``placement_``
    Best placement, expanded back to the original (unfolded) blocks.
``state_``
    Best sequence-pair state over the folded circuit.
``best_cost_``, ``cost_trace_``, ``runtime_``
"""

from __future__ import annotations

import time
from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cost import empty_space, hpwl, make_objective
from .model import fold_symmetry
from .rl import PPOConfig, TrainedModel, policy_floorplan, train
from .router import LayerPolicy, PitchConfig, relieve_congestion, route_placement
from .search import (GAConfig, PSOConfig, SAConfig, genetic_search, particle_swarm,
                     simulated_annealing)
from .seqpair import feasible_random_state, unfold
from .validation import check_input_circuit, check_rng, check_state


class _Floorplanner(BaseEstimator):
    tag = "base"

    def _search(self, folded, cost_fn, rng, init):
        raise NotImplementedError

    def fit(self, circuit, init=None):
        circuit = check_input_circuit(circuit)
        rng = check_rng(self.random_state)
        t0 = time.perf_counter()
        folded = fold_symmetry(circuit, self.symmetry_spacing)
        if init is not None:
            check_state(init, folded.circuit)
        cost_fn = make_objective(self.objective, folded.circuit)
        res = self._search(folded, cost_fn, rng, init)
        self.circuit_ = circuit
        self.folded_ = folded
        self.result_ = res
        self.state_ = res.best_state
        self.best_cost_ = res.best_cost
        self.cost_trace_ = res.cost_trace
        self.placement_ = unfold(res.best_placement, folded)
        self.runtime_ = time.perf_counter() - t0
        return self

    def predict(self, circuit=None):
        """The fitted placement; ``circuit`` is accepted for API symmetry."""
        check_is_fitted(self, "placement_")
        return self.placement_

    def fit_predict(self, circuit, init=None):
        return self.fit(circuit, init).placement_

    def score(self, circuit=None):
        check_is_fitted(self, "placement_")
        return -self.best_cost_

    def metrics(self) -> dict:
        check_is_fitted(self, "placement_")
        c = self.circuit_
        return {"runtime_s": self.runtime_, "empty_space_pct": empty_space(self.placement_),
                "hpwl_um": hpwl(self.placement_, c.nets, c.blocks),
                "area_um2": self.placement_.area, "cost": self.best_cost_}


class SAFloorplanner(_Floorplanner):
    tag = "sa"

    def __init__(self, t0=15.0, steps=5000, cooling=None, objective="combined",
                 symmetry_spacing=0.0, random_state=None):
        self.t0 = t0
        self.steps = steps
        self.cooling = cooling
        self.objective = objective
        self.symmetry_spacing = symmetry_spacing
        self.random_state = random_state

    def _search(self, folded, cost_fn, rng, init):
        cfg = SAConfig(self.t0, self.steps, self.cooling)
        if init is None:
            init = feasible_random_state(folded.circuit, rng)
        return simulated_annealing(init, folded.circuit, cost_fn, cfg, rng)


class GAFloorplanner(_Floorplanner):
    tag = "ga"

    def __init__(self, mutation_rate=0.1, crossover_rate=0.9, population=200, generations=25,
                 objective="combined", symmetry_spacing=0.0, random_state=None):
        self.mutation_rate = mutation_rate
        self.crossover_rate = crossover_rate
        self.population = population
        self.generations = generations
        self.objective = objective
        self.symmetry_spacing = symmetry_spacing
        self.random_state = random_state

    def _search(self, folded, cost_fn, rng, init):
        cfg = GAConfig(self.mutation_rate, self.crossover_rate, self.population, self.generations)
        return genetic_search(folded.circuit, cost_fn, cfg, rng)


class PSOFloorplanner(_Floorplanner):
    tag = "pso"

    def __init__(self, inertia=0.8, cognitive=1.49, social=1.49, population=200, iterations=25,
                 objective="combined", symmetry_spacing=0.0, random_state=None):
        self.inertia = inertia
        self.cognitive = cognitive
        self.social = social
        self.population = population
        self.iterations = iterations
        self.objective = objective
        self.symmetry_spacing = symmetry_spacing
        self.random_state = random_state

    def _search(self, folded, cost_fn, rng, init):
        cfg = PSOConfig(self.inertia, self.cognitive, self.social, self.population,
                        self.iterations)
        return particle_swarm(folded.circuit, cost_fn, cfg, rng)


class _PolicyFloorplanner(_Floorplanner):
    mode = "rlsa"

    def _model(self, circuit, rng) -> TrainedModel:
        if isinstance(self.model, TrainedModel):
            return self.model
        if self.model is not None:
            return TrainedModel.load(Path(self.model))
        # No model given: train a desk-scale policy on this circuit.
        cfg = PPOConfig.for_mode(self.mode, episodes=self.train_episodes,
                                 steps_per_episode=self._train_steps())
        model, _ = train(self.mode, circuit.n_blocks, cfg, rng, circuits=[circuit],
                         objective=self.objective, sa_config=self._sa_config())
        return model

    def _sa_config(self):
        return SAConfig(t0=15.0, steps=2000)

    def _train_steps(self):
        return self._steps()

    def fit(self, circuit, init=None):
        circuit = check_input_circuit(circuit)
        rng = check_rng(self.random_state)
        t0 = time.perf_counter()
        model = self._model(circuit, rng)
        res, env = policy_floorplan(circuit, model, rng, steps=self._steps(),
                                    objective=self.objective, sa_config=self._sa_config(),
                                    greedy=self.greedy)
        self.model_ = model
        self.circuit_ = circuit
        self.folded_ = env.folded
        self.result_ = res
        self.state_ = res.best_state
        self.best_cost_ = res.best_cost
        self.cost_trace_ = res.cost_trace
        self.placement_ = env.best_unfolded()
        self.runtime_ = time.perf_counter() - t0
        return self


class RLSAFloorplanner(_PolicyFloorplanner):
    """Policy-driven perturbations followed by annealing refinement."""

    tag = "rlsa"
    mode = "rlsa"

    def __init__(self, model=None, rl_steps=128, sa_steps=2000, t0=15.0, train_episodes=10,
                 greedy=False, objective="combined", random_state=None):
        self.model = model
        self.rl_steps = rl_steps
        self.sa_steps = sa_steps
        self.t0 = t0
        self.train_episodes = train_episodes
        self.greedy = greedy
        self.objective = objective
        self.random_state = random_state

    def _steps(self):
        return self.rl_steps

    def _sa_config(self):
        return SAConfig(t0=self.t0, steps=self.sa_steps)


class RLFloorplanner(_PolicyFloorplanner):
    """Policy that accepts or rejects proposed neighbours on its own."""

    tag = "rl"
    mode = "pure"

    def __init__(self, model=None, steps=5000, train_episodes=10, train_steps=500,
                 greedy=False, objective="combined", random_state=None):
        self.model = model
        self.steps = steps
        self.train_episodes = train_episodes
        self.train_steps = train_steps
        self.greedy = greedy
        self.objective = objective
        self.random_state = random_state

    def _steps(self):
        return self.steps

    def _train_steps(self):
        return self.train_steps


FLOORPLANNERS = {cls.tag: cls for cls in (SAFloorplanner, GAFloorplanner, PSOFloorplanner,
                                          RLSAFloorplanner, RLFloorplanner)}


class GlobalRouter(BaseEstimator):
    """Congestion-driven spreading followed by per-net OARSMT routing.

    ``fit(placement, circuit)`` sets ``placement_`` (after spreading),
    ``routing_`` (trees, segments, vias, conduits, congestion) and
    ``n_spread_iter_``.
    """

    def __init__(self, gx=4, gy=4, capacity=4, spread_pitch=1.0, max_spread_iter=10,
                 h_layer=3, v_layer=2, wire_width=0.1, wire_spacing=0.1, bundle_distance=0.5):
        self.gx = gx
        self.gy = gy
        self.capacity = capacity
        self.spread_pitch = spread_pitch
        self.max_spread_iter = max_spread_iter
        self.h_layer = h_layer
        self.v_layer = v_layer
        self.wire_width = wire_width
        self.wire_spacing = wire_spacing
        self.bundle_distance = bundle_distance

    def fit(self, placement, circuit):
        circuit = check_input_circuit(circuit)
        spread, _, iters = relieve_congestion(
            placement, circuit.nets, circuit.blocks, self.gx, self.gy, self.capacity,
            self.spread_pitch, self.max_spread_iter)
        self.placement_ = spread
        self.n_spread_iter_ = iters
        self.routing_ = route_placement(
            spread, circuit, LayerPolicy(self.h_layer, self.v_layer),
            PitchConfig(self.wire_width, self.wire_spacing, self.bundle_distance),
            self.gx, self.gy, self.capacity)
        return self

    def transform(self, placement=None):
        check_is_fitted(self, "routing_")
        return self.routing_.conduits
