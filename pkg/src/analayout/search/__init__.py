from ._common import SearchFailed, SearchResult, evaluate
from .annealing import SAConfig, acceptance_probability, simulated_annealing
from .genetic import GAConfig, crossover, genetic_search, order_crossover
from .swarm import PSOConfig, decode, keys_to_order, particle_swarm

__all__ = [
    "SearchFailed", "SearchResult", "evaluate",
    "SAConfig", "acceptance_probability", "simulated_annealing",
    "GAConfig", "crossover", "genetic_search", "order_crossover",
    "PSOConfig", "decode", "keys_to_order", "particle_swarm",
]
