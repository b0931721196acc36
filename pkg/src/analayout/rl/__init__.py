from .env import ACCEPT, REJECT, FloorplanEnv, IllegalAction, RewardSpec, obs_dim
from .nn import MLP, Adam
from .ppo import (PolicyNet, PPOConfig, TrainingError, Trajectory, compute_gae,
                  ppo_loss_and_grads, ppo_update)
from .synthetic import generate_synthetic_circuit
from .training import RandomPolicy, TrainedModel, policy_floorplan, run_episode, train

__all__ = [
    "ACCEPT", "REJECT", "FloorplanEnv", "IllegalAction", "RewardSpec", "obs_dim",
    "MLP", "Adam", "PolicyNet", "PPOConfig", "TrainingError", "Trajectory", "compute_gae",
    "ppo_loss_and_grads", "ppo_update", "generate_synthetic_circuit", "RandomPolicy",
    "TrainedModel", "policy_floorplan", "run_episode", "train",
]
