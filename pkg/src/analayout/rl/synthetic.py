"""Random training circuits with varied constraints and aspect-ratio targets."""

from __future__ import annotations

import math

import numpy as np

from ..model import Block, Circuit, ConstraintSet, Net, Pin, ShapeVariant, check_circuit

MIN_DEVICES, MAX_DEVICES = 5, 20


def _variants(rng: np.random.Generator, area_range: tuple[float, float]) -> tuple[ShapeVariant, ...]:
    lo, hi = area_range
    area = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    k = int(rng.integers(1, 5))
    ratios = sorted(math.exp(r) for r in rng.uniform(math.log(0.25), math.log(4.0), size=k))
    out = []
    for r in ratios:
        w = round(math.sqrt(area / r), 3)
        h = round(area / w, 3)
        v = ShapeVariant(w, h)
        if v not in out:
            out.append(v)
    return tuple(out)


def generate_synthetic_circuit(n: int, rng: np.random.Generator,
                               area_range: tuple[float, float] = (1.0, 100.0),
                               name: str | None = None) -> Circuit:
    """``n`` blocks (1-4 variants), ~1.5n nets of 2-4 pins, one symmetry pair
    and one alignment group each with probability 1/2, R* ~ U[0.5, 2]."""
    if not MIN_DEVICES <= n <= MAX_DEVICES:
        raise ValueError(f"device count must lie in [{MIN_DEVICES}, {MAX_DEVICES}]")
    ids = [f"M{k}" for k in range(n)]
    blocks = [Block(bid, _variants(rng, area_range), rotatable=bool(rng.random() < 0.5))
              for bid in ids]

    pairs: tuple = ()
    if rng.random() < 0.5:
        a, b = (int(k) for k in rng.choice(n, size=2, replace=False))
        blocks[b] = Block(ids[b], blocks[a].variants, rotatable=False)
        blocks[a] = Block(ids[a], blocks[a].variants, rotatable=False)
        pairs = ((ids[a], ids[b]),)
    paired = {x for p in pairs for x in p}

    h_align: tuple = ()
    v_align: tuple = ()
    if rng.random() < 0.5:
        free = [k for k in range(n) if ids[k] not in paired]
        a, b = (int(k) for k in rng.choice(free, size=2, replace=False))
        group = (ids[min(a, b)], ids[max(a, b)])
        if rng.random() < 0.5:
            h_align = (group,)
        else:
            v_align = (group,)

    nets = []
    for k in range(int(round(1.5 * n))):
        size = int(rng.integers(2, 5))
        members = sorted(int(m) for m in rng.choice(n, size=size, replace=False))
        pins = []
        for m in members:
            v = blocks[m].variants[0]
            pins.append(Pin(ids[m], round(float(rng.uniform(0, v.width)), 3),
                            round(float(rng.uniform(0, v.height)), 3)))
        nets.append(Net(f"n{k}", tuple(pins)))

    circuit = Circuit(
        blocks=tuple(blocks),
        nets=tuple(nets),
        constraints=ConstraintSet(symmetry_pairs=pairs, h_align=h_align, v_align=v_align),
        target_aspect_ratio=float(rng.uniform(0.5, 2.0)),
        name=name or f"synthetic{n}",
    )
    return check_circuit(circuit)
