"""Circuit data model: blocks, shape variants, nets, constraints.

All lengths are micrometers. Pin offsets are declared against a block's
first variant and scale with the chosen variant's dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

DEFAULT_ALPHA = 0.5
DEFAULT_BETA = 0.3


class CircuitError(ValueError):
    """Base class for malformed circuit input."""


class StructureError(CircuitError):
    """Input cannot be interpreted as a circuit at all."""


class ConstraintError(CircuitError):
    """A topological constraint cannot be realized."""


class ValidationError(CircuitError):
    """Semantic invariant violations; ``report`` lists every one."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(str(v) for v in report) or "invalid circuit")


@dataclass(frozen=True)
class ShapeParams:
    w_f: float
    n_f: int
    m: int

    @property
    def total_width(self) -> float:
        return self.w_f * self.n_f * self.m


@dataclass(frozen=True)
class ShapeVariant:
    width: float
    height: float
    params: Optional[ShapeParams] = None

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class FoldSpec:
    """Members of a composite symmetric block: ``left`` is placed as-is,
    ``right`` is mirrored about the composite's vertical center axis."""

    left: str
    right: str
    spacing: float


@dataclass(frozen=True)
class Block:
    id: str
    variants: tuple[ShapeVariant, ...]
    rotatable: bool = False
    group: Optional[str] = None
    w_tot: Optional[float] = None
    fold: Optional[FoldSpec] = None

    def dims(self, variant: int, rotated: bool = False) -> tuple[float, float]:
        v = self.variants[variant]
        return (v.height, v.width) if rotated else (v.width, v.height)


@dataclass(frozen=True)
class Pin:
    block: str
    dx: float
    dy: float
    # Only meaningful on composite blocks: the pin belongs to the right member.
    mirrored: bool = False


@dataclass(frozen=True)
class Net:
    name: str
    pins: tuple[Pin, ...]
    weight: float = 1.0


@dataclass(frozen=True)
class ConstraintSet:
    symmetry_pairs: tuple[tuple[str, str], ...] = ()
    h_align: tuple[tuple[str, ...], ...] = ()
    v_align: tuple[tuple[str, ...], ...] = ()


@dataclass(frozen=True)
class Circuit:
    blocks: tuple[Block, ...]
    nets: tuple[Net, ...] = ()
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    target_aspect_ratio: float = 1.0
    name: str = "circuit"

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.blocks)

    def index(self) -> dict[str, int]:
        return {b.id: k for k, b in enumerate(self.blocks)}

    def block(self, block_id: str) -> Block:
        for b in self.blocks:
            if b.id == block_id:
                return b
        raise KeyError(block_id)

    def min_total_area(self) -> float:
        """Sum of the smallest variant area of every block."""
        return sum(min(v.area for v in b.variants) for b in self.blocks)


# --- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}[{self.subject}]: {self.message}"


class ValidationReport(list):
    """List of :class:`Violation`; empty means valid."""

    def kinds(self) -> list[str]:
        return [v.kind for v in self]


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def validate_circuit(circuit: Circuit) -> ValidationReport:
    """Return every violated invariant of ``circuit``.

    Raises StructureError when the object is not shaped like a circuit.
    """
    if not isinstance(circuit, Circuit):
        raise StructureError(f"expected Circuit, got {type(circuit).__name__}")
    report = ValidationReport()
    add = lambda kind, subject, msg: report.append(Violation(kind, subject, msg))  # noqa: E731

    seen: set[str] = set()
    for b in circuit.blocks:
        if not isinstance(b, Block):
            raise StructureError(f"expected Block, got {type(b).__name__}")
        if b.id in seen:
            add("duplicate-id", b.id, "block id used more than once")
        seen.add(b.id)
        if not b.variants:
            add("no-variants", b.id, "block has no shape variant")
        for k, v in enumerate(b.variants):
            if not (_is_num(v.width) and _is_num(v.height)) or v.width <= 0 or v.height <= 0:
                add("bad-dimension", b.id, f"variant {k} has non-positive size")
            if v.params is not None and b.w_tot is not None:
                tot = v.params.total_width
                if not math.isclose(tot, b.w_tot, rel_tol=1e-9):
                    add("width-identity", b.id,
                        f"variant {k}: w_f*N_f*M = {tot} != W_tot = {b.w_tot}")
    if not circuit.blocks:
        add("empty", circuit.name, "circuit has no blocks")

    for net in circuit.nets:
        if not net.pins:
            add("empty-net", net.name, "net has no pins")
        if not _is_num(net.weight) or net.weight < 0:
            add("net-weight", net.name, "net weight must be nonnegative")
        for p in net.pins:
            if p.block not in seen:
                add("unknown-block", net.name, f"pin references unknown block {p.block!r}")

    cons = circuit.constraints
    paired: set[str] = set()
    for a, b in cons.symmetry_pairs:
        for x in (a, b):
            if x not in seen:
                add("unknown-block", f"{a},{b}", f"symmetry pair references unknown block {x!r}")
            if x in paired:
                add("symmetry-reuse", x, "block appears in more than one symmetry pair")
            paired.add(x)
        if a == b:
            add("symmetry-self", a, "block paired with itself")
    for kind, groups in (("h_align", cons.h_align), ("v_align", cons.v_align)):
        for g in groups:
            label = ",".join(g)
            if len(set(g)) < 2:
                add("alignment-size", label, f"{kind} group needs two distinct blocks")
            for x in g:
                if x not in seen:
                    add("unknown-block", label, f"{kind} group references unknown block {x!r}")

    if not (_is_num(circuit.alpha) and _is_num(circuit.beta)):
        add("weights", "alpha,beta", "weights must be finite reals")
    else:
        if circuit.alpha < 0 or circuit.beta < 0:
            add("weights", "alpha,beta", "weights must be nonnegative")
        if circuit.alpha + circuit.beta > 1 + 1e-12:
            add("weight-sum", "alpha,beta",
                f"alpha + beta = {circuit.alpha + circuit.beta} exceeds 1")
    r = circuit.target_aspect_ratio
    if not _is_num(r) or r <= 0:
        add("aspect-ratio", "target_aspect_ratio", "target aspect ratio must be > 0")
    return report


def check_circuit(circuit: Circuit) -> Circuit:
    """Raise ValidationError unless ``circuit`` is valid; return it otherwise."""
    report = validate_circuit(circuit)
    if report:
        raise ValidationError(report)
    return circuit


# --- pin geometry -----------------------------------------------------------


def pin_offset(block: Block, pin: Pin, variant: int, rotated: bool = False,
               mirrored: bool = False) -> tuple[float, float]:
    """Offset of ``pin`` from the lower-left corner of ``block`` as placed.

    ``mirrored`` reflects the pin about the block's vertical center axis
    (used for the right member of an unfolded symmetry pair).
    """
    w, h = block.variants[variant].width, block.variants[variant].height
    if block.fold is not None:
        s = block.fold.spacing
        w0, h0 = block.variants[0].width, block.variants[0].height
        m, m0 = (w - s) / 2.0, (w0 - s) / 2.0
        x = pin.dx * m / m0
        y = pin.dy * h / h0
        if pin.mirrored:
            x = w - x
    else:
        w0, h0 = block.variants[0].width, block.variants[0].height
        x = pin.dx * w / w0
        y = pin.dy * h / h0
    if mirrored:
        x = w - x
    if rotated:
        x, y = y, x
    return x, y


def center_pin(block: Block) -> Pin:
    v = block.variants[0]
    return Pin(block.id, v.width / 2.0, v.height / 2.0)


# --- symmetry folding -------------------------------------------------------


@dataclass(frozen=True)
class FoldedCircuit:
    """A circuit with symmetry pairs merged into composite blocks, plus the
    original circuit needed to expand placements back."""

    circuit: Circuit
    original: Circuit

    @property
    def composites(self) -> dict[str, FoldSpec]:
        return {b.id: b.fold for b in self.circuit.blocks if b.fold is not None}


def composite_id(a: str, b: str) -> str:
    return f"{a}|{b}"


def fold_symmetry(circuit: Circuit, spacing: float = 0.0) -> FoldedCircuit:
    """Replace every symmetry pair by one non-rotatable composite block.

    The left member keeps its orientation; the right member is mirrored.
    Composite variant k has width ``2*w_k + spacing`` and height ``h_k``.
    """
    check_circuit(circuit)
    if spacing < 0:
        raise ValueError("symmetry spacing must be >= 0")
    pairs = circuit.constraints.symmetry_pairs
    if not pairs:
        return FoldedCircuit(circuit, circuit)

    by_id = {b.id: b for b in circuit.blocks}
    member_of: dict[str, tuple[str, bool]] = {}
    composites: dict[str, Block] = {}
    for a, b in pairs:
        ba, bb = by_id[a], by_id[b]
        dims_a = [(v.width, v.height) for v in ba.variants]
        dims_b = [(v.width, v.height) for v in bb.variants]
        if dims_a != dims_b:
            raise ConstraintError(
                f"symmetry pair ({a}, {b}) has mismatched variant dimensions")
        cid = composite_id(a, b)
        variants = tuple(
            ShapeVariant(2.0 * v.width + spacing, v.height) for v in ba.variants)
        composites[cid] = Block(cid, variants, rotatable=False, group=ba.group,
                                fold=FoldSpec(a, b, spacing))
        member_of[a] = (cid, False)
        member_of[b] = (cid, True)

    blocks = []
    for b in circuit.blocks:
        if b.id in member_of:
            cid, is_right = member_of[b.id]
            if not is_right:
                blocks.append(composites[cid])
        else:
            blocks.append(b)

    nets = []
    for net in circuit.nets:
        pins = []
        for p in net.pins:
            if p.block in member_of:
                cid, is_right = member_of[p.block]
                pins.append(Pin(cid, p.dx, p.dy, mirrored=is_right))
            else:
                pins.append(p)
        nets.append(replace(net, pins=tuple(pins)))

    def remap(groups, allow_members):
        out = []
        for g in groups:
            mapped = []
            for x in g:
                if x in member_of:
                    if not allow_members:
                        raise ConstraintError(
                            f"v_align group {g} references symmetric block {x!r}")
                    x = member_of[x][0]
                if x not in mapped:
                    mapped.append(x)
            if len(mapped) >= 2:
                out.append(tuple(mapped))
        return tuple(out)

    cons = ConstraintSet(
        symmetry_pairs=(),
        h_align=remap(circuit.constraints.h_align, True),
        v_align=remap(circuit.constraints.v_align, False),
    )
    folded = replace(circuit, blocks=tuple(blocks), nets=tuple(nets), constraints=cons)
    return FoldedCircuit(folded, circuit)


def block_areas(circuit: Circuit, variants: Sequence[int]) -> float:
    return sum(b.variants[k].area for b, k in zip(circuit.blocks, variants))
