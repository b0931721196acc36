"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .model import Circuit, StructureError, check_circuit
from .seqpair import SequencePairState


def check_rng(seed) -> np.random.Generator:
    """Turn None, an int or a Generator into a numpy Generator."""
    if seed is None or isinstance(seed, (numbers.Integral, np.integer)):
        return np.random.default_rng(seed)
    if isinstance(seed, np.random.Generator):
        return seed
    raise TypeError(f"cannot build a Generator from {seed!r}")


def check_state(state: SequencePairState, circuit: Circuit) -> SequencePairState:
    if not isinstance(state, SequencePairState) or not state.is_valid(circuit):
        raise ValueError("initial state does not match the circuit's blocks")
    return state


def check_input_circuit(circuit) -> Circuit:
    if not isinstance(circuit, Circuit):
        raise StructureError(f"expected a Circuit, got {type(circuit).__name__}")
    return check_circuit(circuit)


def check_positive(name: str, value, integer: bool = False):
    kind = numbers.Integral if integer else numbers.Real
    if not isinstance(value, kind) or isinstance(value, bool) or value <= 0:
        raise ValueError(f"{name} must be a positive {'integer' if integer else 'number'}, got {value!r}")
    return value
