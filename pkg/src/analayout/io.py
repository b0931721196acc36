"""JSON file formats: circuits, placements and conduit exports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .model import (DEFAULT_ALPHA, DEFAULT_BETA, Block, Circuit, ConstraintSet, Net, Pin,
                    ShapeParams, ShapeVariant, StructureError, center_pin, check_circuit)
from .router import Conduit
from .seqpair import Placement, Rect
from .shapegen import enumerate_shapes, shape_spec_from_dict

FORMAT_VERSION = 1


class CircuitSyntaxError(StructureError):
    def __init__(self, path, line: int, column: int, msg: str):
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {msg}")


def _load_json(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitSyntaxError(path, exc.lineno, exc.colno, exc.msg) from None


def _write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n", encoding="utf-8")


# --- circuits ---------------------------------------------------------------


def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise StructureError(f"{where}: missing key {key!r}")
    return d[key]


def _variant(d: dict, where: str) -> ShapeVariant:
    params = None
    if d.get("params") is not None:
        p = d["params"]
        params = ShapeParams(float(p["w_f"]), int(p["N_f"]), int(p["M"]))
    return ShapeVariant(float(_require(d, "width", where)), float(_require(d, "height", where)),
                        params)


def _block(d: dict, k: int) -> Block:
    where = f"blocks[{k}]"
    bid = str(_require(d, "id", where))
    w_tot = d.get("W_tot")
    if "shape" in d:
        spec = shape_spec_from_dict(d["shape"])
        variants = tuple(enumerate_shapes(spec))
        w_tot = spec.w_tot
    else:
        raw = _require(d, "variants", where)
        if not isinstance(raw, list):
            raise StructureError(f"{where}: variants must be a list")
        variants = tuple(_variant(v, f"{where}.variants[{j}]") for j, v in enumerate(raw))
    return Block(bid, variants, rotatable=bool(d.get("rotatable", False)),
                 group=d.get("group"), w_tot=None if w_tot is None else float(w_tot))


def circuit_from_dict(doc: dict, name: Optional[str] = None) -> Circuit:
    """Build (without validating) a circuit from its JSON document."""
    if not isinstance(doc, dict):
        raise StructureError("circuit document must be a JSON object")
    raw_blocks = _require(doc, "blocks", "circuit")
    if not isinstance(raw_blocks, list):
        raise StructureError("blocks must be a list")
    blocks = tuple(_block(b, k) for k, b in enumerate(raw_blocks))
    by_id = {b.id: b for b in blocks}
    nets = []
    for k, n in enumerate(doc.get("nets", [])):
        where = f"nets[{k}]"
        pins = []
        for p in _require(n, "pins", where):
            if isinstance(p, str):
                # Omitted offsets mean the block center.
                pins.append(center_pin(by_id[p]) if p in by_id else Pin(p, 0.0, 0.0))
            elif isinstance(p, dict):
                bid = str(_require(p, "block", where))
                if "dx" in p or "dy" in p or bid not in by_id:
                    pins.append(Pin(bid, float(p.get("dx", 0.0)), float(p.get("dy", 0.0)),
                                    bool(p.get("mirrored", False))))
                else:
                    pins.append(center_pin(by_id[bid]))
            else:
                raise StructureError(f"{where}: pin must be a block id or an object")
        nets.append(Net(str(_require(n, "name", where)), tuple(pins), float(n.get("weight", 1.0))))
    c = doc.get("constraints", {}) or {}
    cons = ConstraintSet(
        symmetry_pairs=tuple((str(a), str(b)) for a, b in c.get("symmetry_pairs", [])),
        h_align=tuple(tuple(str(x) for x in g) for g in c.get("h_align", [])),
        v_align=tuple(tuple(str(x) for x in g) for g in c.get("v_align", [])),
    )
    w = doc.get("weights", {}) or {}
    return Circuit(
        blocks=blocks,
        nets=tuple(nets),
        constraints=cons,
        alpha=float(w.get("alpha", DEFAULT_ALPHA)),
        beta=float(w.get("beta", DEFAULT_BETA)),
        target_aspect_ratio=float(doc.get("target_aspect_ratio", 1.0)),
        name=str(doc.get("name", name or "circuit")),
    )


def parse_circuit(path) -> Circuit:
    """Read, expand shape specs, and validate a circuit file."""
    doc = _load_json(path)
    try:
        circuit = circuit_from_dict(doc, name=Path(path).stem)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise StructureError(f"{path}: {exc}") from None
    return check_circuit(circuit)


def circuit_to_dict(circuit: Circuit) -> dict:
    blocks = []
    for b in circuit.blocks:
        d: dict = {"id": b.id, "variants": []}
        for v in b.variants:
            vd: dict = {"width": v.width, "height": v.height}
            if v.params is not None:
                vd["params"] = {"w_f": v.params.w_f, "N_f": v.params.n_f, "M": v.params.m}
            d["variants"].append(vd)
        d["rotatable"] = b.rotatable
        if b.group is not None:
            d["group"] = b.group
        if b.w_tot is not None:
            d["W_tot"] = b.w_tot
        blocks.append(d)
    nets = []
    for n in circuit.nets:
        pins = []
        for p in n.pins:
            pd = {"block": p.block, "dx": p.dx, "dy": p.dy}
            if p.mirrored:
                pd["mirrored"] = True
            pins.append(pd)
        nets.append({"name": n.name, "weight": n.weight, "pins": pins})
    cons = circuit.constraints
    return {
        "name": circuit.name,
        "blocks": blocks,
        "nets": nets,
        "constraints": {
            "symmetry_pairs": [list(p) for p in cons.symmetry_pairs],
            "h_align": [list(g) for g in cons.h_align],
            "v_align": [list(g) for g in cons.v_align],
        },
        "weights": {"alpha": circuit.alpha, "beta": circuit.beta},
        "target_aspect_ratio": circuit.target_aspect_ratio,
    }


def dump_circuit(circuit: Circuit, path) -> None:
    _write_json(path, circuit_to_dict(circuit))


# --- placements -------------------------------------------------------------


def placement_to_dict(placement: Placement, **meta) -> dict:
    blocks = []
    for bid, r in placement.rects.items():
        blocks.append({"id": bid, "x": r.x, "y": r.y, "w": r.w, "h": r.h,
                       "variant": placement.variant.get(bid, 0),
                       "rotated": bid in placement.rotated,
                       "mirrored": bid in placement.mirrored})
    return {"format_version": FORMAT_VERSION, **meta, "width": placement.width,
            "height": placement.height, "blocks": blocks}


def placement_from_dict(doc: dict) -> Placement:
    rects, variant, rotated, mirrored = {}, {}, set(), set()
    for b in _require(doc, "blocks", "placement"):
        bid = str(b["id"])
        rects[bid] = Rect(float(b["x"]), float(b["y"]), float(b["w"]), float(b["h"]))
        variant[bid] = int(b.get("variant", 0))
        if b.get("rotated"):
            rotated.add(bid)
        if b.get("mirrored"):
            mirrored.add(bid)
    return Placement(rects, float(doc["width"]), float(doc["height"]), variant,
                     frozenset(rotated), frozenset(mirrored))


def save_placement(placement: Placement, path, **meta) -> None:
    _write_json(path, placement_to_dict(placement, **meta))


def load_placement(path) -> Placement:
    return placement_from_dict(_load_json(path))


# --- conduits ---------------------------------------------------------------


def conduit_to_dict(c: Conduit) -> dict:
    return {"orientation": c.orientation, "start": c.start, "end": c.end,
            "cross_position": c.cross_position, "layer": c.layer, "nets": list(c.nets),
            "width": c.width, "blocks": list(c.blocks)}


def conduits_to_dict(conduits) -> dict:
    return {"format_version": FORMAT_VERSION, "conduits": [conduit_to_dict(c) for c in conduits]}


def export_conduits(conduits, path) -> None:
    _write_json(path, conduits_to_dict(conduits))


def parse_conduits(path) -> list[Conduit]:
    doc = _load_json(path)
    if doc.get("format_version") != FORMAT_VERSION:
        raise StructureError(f"{path}: unsupported conduit format version")
    return [Conduit(d["orientation"], float(d["start"]), float(d["end"]),
                    float(d["cross_position"]), list(d["nets"]), int(d["layer"]),
                    float(d["width"]), list(d.get("blocks", [])))
            for d in doc["conduits"]]


def routes_to_dict(result) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "wirelength": result.wirelength,
        "nets": [{"net": name, "length": t.length,
                  "terminals": [list(p) for p in t.terminals],
                  "vertices": [list(p) for p in t.vertices],
                  "edges": [[list(a), list(b)] for a, b in t.edges]}
                 for name, t in result.trees.items()],
        "vias": [{"net": v.net, "x": v.x, "y": v.y, "layers": list(v.layers)}
                 for v in result.vias],
    }
