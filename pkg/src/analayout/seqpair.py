"""Sequence-pair floorplan representation.

A state holds two permutations of block ids plus per-block orientation and
shape-variant choice (both indexed by block position in ``circuit.blocks``).
Packing evaluates the horizontal and vertical constraint graphs by longest
path in O(n^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .model import Circuit, FoldedCircuit

EPS = 1e-9


class AlignmentInfeasible(ValueError):
    """Alignment snapping could not be satisfied by the packing."""

    def __init__(self, group: tuple[str, ...], axis: str):
        self.group = group
        self.axis = axis
        super().__init__(f"{axis} alignment group {','.join(group)} is infeasible")


class Relation(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    BELOW = "below"
    ABOVE = "above"


class MoveKind(str, Enum):
    SWAP_GAMMA1 = "swap_gamma1"
    SWAP_BOTH = "swap_both"
    ROTATE = "rotate"
    RESHAPE = "reshape"


MOVES = tuple(MoveKind)


@dataclass(frozen=True)
class SequencePairState:
    gamma1: tuple[str, ...]
    gamma2: tuple[str, ...]
    rotated: tuple[bool, ...]
    variant: tuple[int, ...]

    def is_valid(self, circuit: Circuit) -> bool:
        ids = circuit.ids
        if sorted(self.gamma1) != sorted(ids) or sorted(self.gamma2) != sorted(ids):
            return False
        if len(set(self.gamma1)) != len(ids):
            return False
        if len(self.rotated) != len(ids) or len(self.variant) != len(ids):
            return False
        for b, r, v in zip(circuit.blocks, self.rotated, self.variant):
            if not 0 <= v < len(b.variants) or (r and not b.rotatable):
                return False
        return True


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    def overlaps(self, other: "Rect", tol: float = EPS) -> bool:
        """True when open interiors intersect (beyond ``tol``)."""
        return (min(self.x2, other.x2) - max(self.x, other.x) > tol
                and min(self.y2, other.y2) - max(self.y, other.y) > tol)

    def shifted(self, dx: float = 0.0, dy: float = 0.0) -> "Rect":
        return Rect(self.x + dx, self.y + dy, self.w, self.h)


@dataclass(frozen=True)
class Placement:
    rects: dict[str, Rect]
    width: float
    height: float
    variant: dict[str, int] = field(default_factory=dict)
    rotated: frozenset = frozenset()
    mirrored: frozenset = frozenset()

    @property
    def area(self) -> float:
        return self.width * self.height

    @classmethod
    def from_rects(cls, rects: dict[str, Rect], **kw) -> "Placement":
        width = max(r.x2 for r in rects.values())
        height = max(r.y2 for r in rects.values())
        return cls(rects, width, height, **kw)


def relation(sp: SequencePairState, i: str, j: str) -> Relation:
    """Relation of block ``i`` with respect to block ``j``."""
    if i == j:
        raise ValueError("relation needs two distinct blocks")
    try:
        a1, b1 = sp.gamma1.index(i), sp.gamma1.index(j)
        a2, b2 = sp.gamma2.index(i), sp.gamma2.index(j)
    except ValueError as exc:
        raise KeyError(str(exc)) from None
    if a1 < b1 and a2 < b2:
        return Relation.LEFT
    if a1 > b1 and a2 > b2:
        return Relation.RIGHT
    if a1 > b1 and a2 < b2:
        return Relation.BELOW
    return Relation.ABOVE


def _longest_path(order, pos1, w, h, floor_x, floor_y):
    n = len(order)
    x = [0.0] * n
    y = [0.0] * n
    done: list[int] = []
    for i in order:
        xi = floor_x[i] if floor_x else 0.0
        yi = floor_y[i] if floor_y else 0.0
        pi = pos1[i]
        for j in done:
            if pos1[j] < pi:
                v = x[j] + w[j]
                if v > xi:
                    xi = v
            else:
                v = y[j] + h[j]
                if v > yi:
                    yi = v
        x[i] = xi
        y[i] = yi
        done.append(i)
    return x, y


def pack(sp: SequencePairState, circuit: Circuit) -> Placement:
    """Pack ``sp`` into absolute coordinates for ``circuit``'s blocks.

    Alignment groups are snapped to the group's maximum coordinate, then one
    repack sweep propagates the shift. Raises AlignmentInfeasible if a group
    ends up unaligned.
    """
    blocks = circuit.blocks
    index = circuit.index()
    n = len(blocks)
    w = [0.0] * n
    h = [0.0] * n
    for k, b in enumerate(blocks):
        w[k], h[k] = b.dims(sp.variant[k], sp.rotated[k])
    pos1 = [0] * n
    for p, bid in enumerate(sp.gamma1):
        pos1[index[bid]] = p
    order = [index[bid] for bid in sp.gamma2]

    x, y = _longest_path(order, pos1, w, h, None, None)

    cons = circuit.constraints
    if cons.v_align or cons.h_align:
        fx = [0.0] * n
        fy = [0.0] * n
        vgroups = [[index[b] for b in g] for g in cons.v_align]
        hgroups = [[index[b] for b in g] for g in cons.h_align]
        for g in vgroups:
            t = max(x[k] for k in g)
            for k in g:
                fx[k] = max(fx[k], t)
        for g in hgroups:
            t = max(y[k] for k in g)
            for k in g:
                fy[k] = max(fy[k], t)
        x, y = _longest_path(order, pos1, w, h, fx, fy)
        for g, ids in zip(vgroups, cons.v_align):
            if max(x[k] for k in g) - min(x[k] for k in g) > EPS:
                raise AlignmentInfeasible(ids, "v_align")
        for g, ids in zip(hgroups, cons.h_align):
            if max(y[k] for k in g) - min(y[k] for k in g) > EPS:
                raise AlignmentInfeasible(ids, "h_align")

    rects = {b.id: Rect(x[k], y[k], w[k], h[k]) for k, b in enumerate(blocks)}
    return Placement(
        rects,
        max(x[k] + w[k] for k in range(n)),
        max(y[k] + h[k] for k in range(n)),
        variant={b.id: sp.variant[k] for k, b in enumerate(blocks)},
        rotated=frozenset(b.id for k, b in enumerate(blocks) if sp.rotated[k]),
    )


def try_pack(sp: SequencePairState, circuit: Circuit) -> Optional[Placement]:
    """Like :func:`pack` but returns None for alignment-infeasible states."""
    try:
        return pack(sp, circuit)
    except AlignmentInfeasible:
        return None


def _pair(rng: np.random.Generator, n: int) -> tuple[int, int]:
    i, j = rng.choice(n, size=2, replace=False)
    return (int(i), int(j)) if i < j else (int(j), int(i))


def perturb(sp: SequencePairState, move: MoveKind, circuit: Circuit,
            rng: np.random.Generator) -> tuple[SequencePairState, bool]:
    """Apply one move and return ``(new_state, changed)``.

    ``changed`` is False when the move has nothing to act on (a single
    block, no rotatable block, or no block with more than one variant); the
    input state is then returned unchanged.
    """
    move = MoveKind(move)
    n = len(sp.gamma1)
    if move in (MoveKind.SWAP_GAMMA1, MoveKind.SWAP_BOTH):
        if n < 2:
            return sp, False
        i, j = _pair(rng, n)
        g1 = list(sp.gamma1)
        a, b = g1[i], g1[j]
        g1[i], g1[j] = b, a
        g2 = sp.gamma2
        if move is MoveKind.SWAP_BOTH:
            g2 = list(g2)
            pa, pb = g2.index(a), g2.index(b)
            g2[pa], g2[pb] = b, a
            g2 = tuple(g2)
        return SequencePairState(tuple(g1), g2, sp.rotated, sp.variant), True
    if move is MoveKind.ROTATE:
        cand = [k for k, b in enumerate(circuit.blocks) if b.rotatable]
        if not cand:
            return sp, False
        k = cand[int(rng.integers(len(cand)))]
        rot = list(sp.rotated)
        rot[k] = not rot[k]
        return SequencePairState(sp.gamma1, sp.gamma2, tuple(rot), sp.variant), True
    cand = [k for k, b in enumerate(circuit.blocks) if len(b.variants) > 1]
    if not cand:
        return sp, False
    k = cand[int(rng.integers(len(cand)))]
    nv = len(circuit.blocks[k].variants)
    new = int(rng.integers(nv - 1))
    if new >= sp.variant[k]:
        new += 1
    var = list(sp.variant)
    var[k] = new
    return SequencePairState(sp.gamma1, sp.gamma2, sp.rotated, tuple(var)), True


def random_move(sp: SequencePairState, circuit: Circuit,
                rng: np.random.Generator) -> tuple[SequencePairState, MoveKind, bool]:
    """Perturb with a move kind drawn uniformly from the four kinds."""
    move = MOVES[int(rng.integers(len(MOVES)))]
    new, changed = perturb(sp, move, circuit, rng)
    return new, move, changed


def random_state(circuit: Circuit, rng: np.random.Generator) -> SequencePairState:
    ids = circuit.ids
    n = len(ids)
    g1 = tuple(ids[k] for k in rng.permutation(n))
    g2 = tuple(ids[k] for k in rng.permutation(n))
    variant = tuple(int(rng.integers(len(b.variants))) for b in circuit.blocks)
    rotated = tuple(bool(b.rotatable and rng.random() < 0.5) for b in circuit.blocks)
    return SequencePairState(g1, g2, rotated, variant)


def feasible_random_state(circuit: Circuit, rng: np.random.Generator,
                          tries: int = 1000) -> SequencePairState:
    """Draw random states until one packs without alignment failure.

    Falls back to the last draw (still a valid permutation state) if none of
    ``tries`` draws is feasible.
    """
    sp = random_state(circuit, rng)
    if not (circuit.constraints.h_align or circuit.constraints.v_align):
        return sp
    for _ in range(tries):
        if try_pack(sp, circuit) is not None:
            return sp
        sp = random_state(circuit, rng)
    return sp


def unfold(placement: Placement, folded: FoldedCircuit) -> Placement:
    """Expand composite blocks back into their symmetric member blocks."""
    comps = folded.composites
    if not comps:
        return placement
    rects: dict[str, Rect] = {}
    variant = {}
    mirrored = set(placement.mirrored)
    for bid, r in placement.rects.items():
        spec = comps.get(bid)
        if spec is None:
            rects[bid] = r
            if bid in placement.variant:
                variant[bid] = placement.variant[bid]
            continue
        m = (r.w - spec.spacing) / 2.0
        rects[spec.left] = Rect(r.x, r.y, m, r.h)
        rects[spec.right] = Rect(r.x + m + spec.spacing, r.y, m, r.h)
        k = placement.variant.get(bid, 0)
        variant[spec.left] = variant[spec.right] = k
        mirrored.add(spec.right)
    order = folded.original.ids
    rects = {bid: rects[bid] for bid in order}
    return Placement(rects, placement.width, placement.height, variant=variant,
                     rotated=placement.rotated, mirrored=frozenset(mirrored))


def overlapping_pairs(placement: Placement, tol: float = EPS) -> list[tuple[str, str]]:
    items = list(placement.rects.items())
    out = []
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a][1].overlaps(items[b][1], tol):
                out.append((items[a][0], items[b][0]))
    return out


def all_states(circuit: Circuit) -> Iterable[SequencePairState]:
    """Every state of a (small) circuit: (n!)^2 x orientations x variants."""
    from itertools import permutations, product

    ids = circuit.ids
    rot_opts = [(False, True) if b.rotatable else (False,) for b in circuit.blocks]
    var_opts = [tuple(range(len(b.variants))) for b in circuit.blocks]
    perms = list(permutations(ids))
    for g1 in perms:
        for g2 in perms:
            for rot in product(*rot_opts):
                for var in product(*var_opts):
                    yield SequencePairState(g1, g2, rot, var)
