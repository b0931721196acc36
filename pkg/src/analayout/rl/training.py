"""PPO training loops, inference drivers and the policy model file."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from ..model import Circuit
from ..search import SAConfig, SearchResult
from .env import FloorplanEnv, RewardSpec, obs_dim
from .ppo import PolicyNet, PPOConfig, Trajectory, ppo_update
from .synthetic import generate_synthetic_circuit

MODEL_FORMAT = "analayout-policy"
MODEL_FORMAT_VERSION = 1


@dataclass
class TrainedModel:
    policy: PolicyNet
    mode: str
    n_devices: int
    reward_spec: RewardSpec = field(default_factory=RewardSpec)
    objective: str = "combined"

    def save(self, path) -> None:
        doc = {
            "format": MODEL_FORMAT,
            "format_version": MODEL_FORMAT_VERSION,
            "mode": self.mode,
            "n_devices": self.n_devices,
            "objective": self.objective,
            "reward_spec": self.reward_spec.to_dict(),
            "policy": self.policy.to_dict(),
        }
        Path(path).write_text(json.dumps(doc), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "TrainedModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != MODEL_FORMAT:
            raise ValueError(f"{path}: not a policy model file")
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported model format version {doc.get('format_version')}")
        return cls(PolicyNet.from_dict(doc["policy"]), doc["mode"], int(doc["n_devices"]),
                   RewardSpec(**doc["reward_spec"]), doc.get("objective", "combined"))


class RandomPolicy:
    """Uniform over the action set; in pure mode this accepts half the time."""

    def __init__(self, n_actions: int):
        self.n_actions = n_actions

    def act(self, obs, rng, greedy=False):
        return int(rng.integers(self.n_actions)), 0.0, 0.0


def run_episode(env: FloorplanEnv, policy, rng: np.random.Generator, greedy: bool = False,
                traj: Optional[Trajectory] = None) -> dict:
    obs = env.reset()
    total = 0.0
    info: dict = {}
    done = False
    while not done:
        a, lp, v = policy.act(obs, rng, greedy)
        nxt, r, done, info = env.step(a)
        if traj is not None:
            traj.add(obs, a, lp, r, v, done)
        total += r
        obs = nxt
    return {"reward": total, "best_cost": env.best_cost, "initial_cost": env.initial_cost,
            "final_cost": env.cost, **{k: v for k, v in info.items() if k.endswith("_reward")
                                       or k.endswith("_cost")}}


def train(mode: str, n: int, cfg: PPOConfig, rng: np.random.Generator,
          circuits: Optional[Sequence[Circuit]] = None, n_circuits: int = 8,
          objective: str = "combined", reward: RewardSpec = RewardSpec(),
          cyclic: Optional[bool] = None, sa_config: SAConfig = SAConfig(t0=15.0, steps=2000),
          callback: Optional[Callable[[dict], None]] = None) -> tuple[TrainedModel, list[dict]]:
    """Train one policy for circuits of ``n`` devices.

    Episodes cycle through ``circuits`` (synthetic ones by default); the
    policy is updated after every episode. ``cyclic`` (default: on in rlsa
    mode) starts each episode from the previous final state of that circuit.
    """
    if circuits is None:
        circuits = [generate_synthetic_circuit(n, rng) for _ in range(n_circuits)]
    if any(c.n_blocks != n for c in circuits):
        raise ValueError(f"all training circuits must have {n} blocks")
    if cyclic is None:
        cyclic = mode == "rlsa"
    envs = [FloorplanEnv(c, mode=mode, cyclic=cyclic, reward=reward,
                         steps_per_episode=cfg.steps_per_episode, objective=objective,
                         sa_config=sa_config, rng=rng) for c in circuits]
    policy = PolicyNet(obs_dim(n), envs[0].n_actions, rng)
    log = []
    for ep in range(cfg.episodes):
        t0 = time.perf_counter()
        env = envs[ep % len(envs)]
        traj = Trajectory()
        stats = run_episode(env, policy, rng, traj=traj)
        _, losses = ppo_update(traj, policy, cfg, rng)
        entry = {"episode": ep, "circuit": env.circuit.name, **stats, **losses,
                 "seconds": time.perf_counter() - t0}
        log.append(entry)
        if callback is not None:
            callback(entry)
    return TrainedModel(policy, mode, n, reward, objective), log


def policy_floorplan(circuit: Circuit, model: TrainedModel, rng: np.random.Generator,
                     steps: Optional[int] = None, objective: Optional[str] = None,
                     sa_config: SAConfig = SAConfig(t0=15.0, steps=2000),
                     greedy: bool = False) -> tuple[SearchResult, FloorplanEnv]:
    """One inference episode of a trained policy (rlsa or pure mode)."""
    if circuit.n_blocks != model.n_devices:
        raise ValueError(f"model trained for {model.n_devices} devices, "
                         f"circuit has {circuit.n_blocks}")
    if steps is None:
        steps = 128 if model.mode == "rlsa" else 5000
    env = FloorplanEnv(circuit, mode=model.mode, steps_per_episode=steps,
                       objective=objective or model.objective, reward=model.reward_spec,
                       sa_config=sa_config, rng=rng)
    t0 = time.perf_counter()
    run_episode(env, model.policy, rng, greedy)
    trace = []
    best = float("inf")
    for k, c in enumerate(env.cost_history):
        best = min(best, c)
        trace.append((k, c, best))
    res = SearchResult(env.best_state, env.best_placement, env.best_cost, trace,
                       time.perf_counter() - t0, len(env.cost_history))
    return res, env
