"""Actor-critic policy and the clipped-surrogate PPO update."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .nn import MLP, Adam

ACTOR_HIDDEN = (128, 128, 128)
CRITIC_HIDDEN = (128, 128)


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PPOConfig:
    clip_ratio: float = 0.2
    gamma: float = 0.99
    gae_lambda: float = 0.95
    epochs_per_update: int = 10
    minibatch: int = 64
    learning_rate: float = 3e-4
    entropy_coeff: float = 0.01
    value_coeff: float = 0.5
    max_grad_norm: float = 0.5
    normalize_advantage: bool = True
    steps_per_episode: int = 128
    episodes: int = 10

    def __post_init__(self):
        if not 0 < self.clip_ratio < 1:
            raise ValueError("clip_ratio must lie in (0, 1)")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if self.epochs_per_update < 1 or self.minibatch < 1 or self.steps_per_episode < 1:
            raise ValueError("epochs, minibatch and steps_per_episode must be >= 1")

    @classmethod
    def for_mode(cls, mode: str, **overrides) -> "PPOConfig":
        base = {"rlsa": cls(steps_per_episode=128, epochs_per_update=10),
                "pure": cls(steps_per_episode=5000, epochs_per_update=50)}[mode]
        return replace(base, **overrides)


def log_softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


class PolicyNet:
    """Categorical actor (3x128 tanh) and value critic (2x128 tanh)."""

    def __init__(self, obs_dim: int, n_actions: int, rng: np.random.Generator,
                 actor_hidden=ACTOR_HIDDEN, critic_hidden=CRITIC_HIDDEN):
        self.obs_dim = int(obs_dim)
        self.n_actions = int(n_actions)
        self.actor = MLP((obs_dim, *actor_hidden, n_actions), rng, out_scale=0.01)
        self.critic = MLP((obs_dim, *critic_hidden, 1), rng)
        self.optimizer: Optional[Adam] = None

    @property
    def params(self) -> list[np.ndarray]:
        return self.actor.params + self.critic.params

    def probs(self, obs: np.ndarray) -> np.ndarray:
        return np.exp(log_softmax(self.actor.forward(np.atleast_2d(obs))))

    def value(self, obs: np.ndarray) -> np.ndarray:
        return self.critic.forward(np.atleast_2d(obs))[:, 0]

    def log_prob(self, obs: np.ndarray, actions: np.ndarray) -> np.ndarray:
        lp = log_softmax(self.actor.forward(np.atleast_2d(obs)))
        return lp[np.arange(len(lp)), np.asarray(actions)]

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> tuple[int, float, float]:
        """Sample (or argmax) an action; returns (action, log-prob, value)."""
        lp = log_softmax(self.actor.forward(obs[None, :]))[0]
        if greedy:
            a = int(np.argmax(lp))
        else:
            a = int(np.searchsorted(np.cumsum(np.exp(lp)), rng.random() * np.exp(lp).sum()))
            a = min(a, self.n_actions - 1)
        v = float(self.critic.forward(obs[None, :])[0, 0])
        return a, float(lp[a]), v

    def to_dict(self) -> dict:
        return {"obs_dim": self.obs_dim, "n_actions": self.n_actions,
                "actor": self.actor.to_dict(), "critic": self.critic.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "PolicyNet":
        net = cls.__new__(cls)
        net.obs_dim = int(d["obs_dim"])
        net.n_actions = int(d["n_actions"])
        net.actor = MLP.from_dict(d["actor"])
        net.critic = MLP.from_dict(d["critic"])
        net.optimizer = None
        return net


@dataclass
class Trajectory:
    """Rollout buffer for one or more episodes."""

    obs: list = field(default_factory=list)
    actions: list = field(default_factory=list)
    log_probs: list = field(default_factory=list)
    rewards: list = field(default_factory=list)
    values: list = field(default_factory=list)
    dones: list = field(default_factory=list)
    last_value: float = 0.0

    def add(self, obs, action, log_prob, reward, value, done) -> None:
        self.obs.append(obs)
        self.actions.append(action)
        self.log_probs.append(log_prob)
        self.rewards.append(reward)
        self.values.append(value)
        self.dones.append(done)

    def __len__(self) -> int:
        return len(self.rewards)


def compute_gae(rewards, values, dones, last_value: float, gamma: float,
                lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and the matching value targets.

    ``dones[t]`` marks that the episode ended after step t.
    """
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    T = len(rewards)
    adv = np.zeros(T)
    gae = 0.0
    for t in range(T - 1, -1, -1):
        nonterminal = 0.0 if dones[t] else 1.0
        next_v = last_value if t == T - 1 else values[t + 1]
        delta = rewards[t] + gamma * next_v * nonterminal - values[t]
        gae = delta + gamma * lam * nonterminal * gae
        adv[t] = gae
    return adv, adv + values


def ppo_loss_and_grads(policy: PolicyNet, obs, actions, old_log_probs, advantages,
                       returns, cfg: PPOConfig):
    """Loss terms and parameter gradients for one minibatch.

    loss = -mean(min(r*A, clip(r)*A)) + c_v*mean((V-R)^2) - c_e*mean(H)
    """
    B = len(actions)
    logits, a_acts = policy.actor.forward(obs, keep=True)
    lp_all = log_softmax(logits)
    p = np.exp(lp_all)
    idx = np.arange(B)
    logp = lp_all[idx, actions]
    ratio = np.exp(logp - old_log_probs)
    eps = cfg.clip_ratio
    clipped = np.clip(ratio, 1.0 - eps, 1.0 + eps)
    surr1 = ratio * advantages
    surr2 = clipped * advantages
    policy_loss = -np.mean(np.minimum(surr1, surr2))
    entropy = -(p * lp_all).sum(axis=1)
    values, c_acts = policy.critic.forward(obs, keep=True)
    values = values[:, 0]
    value_loss = np.mean((values - returns) ** 2)
    loss = policy_loss + cfg.value_coeff * value_loss - cfg.entropy_coeff * entropy.mean()

    # Gradient flows through the unclipped branch unless the clipped branch
    # is strictly smaller (ratio out of range in the advantage's direction).
    active = surr1 <= surr2
    d_logp = np.where(active, -advantages * ratio / B, 0.0)
    onehot = np.zeros_like(p)
    onehot[idx, actions] = 1.0
    d_logits = d_logp[:, None] * (onehot - p)
    if cfg.entropy_coeff:
        d_logits += (cfg.entropy_coeff / B) * p * (lp_all + entropy[:, None])
    d_values = (cfg.value_coeff * 2.0 / B) * (values - returns)
    grads = policy.actor.backward(a_acts, d_logits) + \
        policy.critic.backward(c_acts, d_values[:, None])
    clip_frac = float(np.mean(np.abs(ratio - 1.0) > eps))
    report = {"loss": float(loss), "policy_loss": float(policy_loss),
              "value_loss": float(value_loss), "entropy": float(entropy.mean()),
              "clip_fraction": clip_frac}
    return report, grads


def ppo_update(traj: Trajectory, policy: PolicyNet, cfg: PPOConfig,
               rng: np.random.Generator) -> tuple[PolicyNet, dict]:
    """Run ``epochs_per_update`` passes of minibatch PPO over ``traj``.

    Parameters are updated in place; the policy is returned for chaining.
    """
    if policy.optimizer is None:
        policy.optimizer = Adam(policy.params, lr=cfg.learning_rate)
    obs = np.asarray(traj.obs, dtype=float)
    actions = np.asarray(traj.actions, dtype=int)
    old_lp = np.asarray(traj.log_probs, dtype=float)
    adv, returns = compute_gae(traj.rewards, traj.values, traj.dones, traj.last_value,
                               cfg.gamma, cfg.gae_lambda)
    T = len(actions)
    reports = []
    for _ in range(cfg.epochs_per_update):
        order = rng.permutation(T)
        for start in range(0, T, cfg.minibatch):
            mb = order[start:start + cfg.minibatch]
            a = adv[mb]
            if cfg.normalize_advantage and len(mb) > 1:
                a = (a - a.mean()) / (a.std() + 1e-8)
            rep, grads = ppo_loss_and_grads(policy, obs[mb], actions[mb], old_lp[mb], a,
                                            returns[mb], cfg)
            if not np.isfinite(rep["loss"]) or not all(np.all(np.isfinite(g)) for g in grads):
                raise TrainingError(f"non-finite PPO loss: {rep}")
            if cfg.max_grad_norm:
                norm = np.sqrt(sum(float((g * g).sum()) for g in grads))
                if norm > cfg.max_grad_norm:
                    grads = [g * (cfg.max_grad_norm / norm) for g in grads]
            policy.optimizer.step(grads)
            reports.append(rep)
    summary = {k: float(np.mean([r[k] for r in reports])) for k in reports[0]}
    return policy, summary
