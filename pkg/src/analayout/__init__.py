"""Analog layout templates: sequence-pair floorplanning (SA, GA, PSO and
PPO-trained policies) and obstacle-avoiding Steiner global routing."""

from .cost import (AreaObjective, CombinedObjective, CostBreakdown, CostTracker, area_cost,
                   combined_cost, empty_space, hpwl)
from .estimators import (FLOORPLANNERS, GAFloorplanner, GlobalRouter, PSOFloorplanner,
                         RLFloorplanner, RLSAFloorplanner, SAFloorplanner)
from .io import parse_circuit
from .model import (Block, Circuit, ConstraintSet, Net, Pin, ShapeVariant, ValidationError,
                    fold_symmetry, validate_circuit)
from .seqpair import (MoveKind, Placement, SequencePairState, pack, perturb, random_state,
                      relation, unfold)
from .shapegen import ShapeSpec, enumerate_shapes

__version__ = "0.1.0"

__all__ = [
    "AreaObjective", "CombinedObjective", "CostBreakdown", "CostTracker", "area_cost",
    "combined_cost", "empty_space", "hpwl", "FLOORPLANNERS", "GAFloorplanner", "GlobalRouter",
    "PSOFloorplanner", "RLFloorplanner", "RLSAFloorplanner", "SAFloorplanner", "parse_circuit",
    "Block", "Circuit", "ConstraintSet", "Net", "Pin", "ShapeVariant", "ValidationError",
    "fold_symmetry", "validate_circuit", "MoveKind", "Placement", "SequencePairState", "pack",
    "perturb", "random_state", "relation", "unfold", "ShapeSpec", "enumerate_shapes",
]
