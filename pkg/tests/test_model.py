from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analayout.model import (Block, Circuit, ConstraintError, ConstraintSet, Net, Pin,
                             ShapeParams, ShapeVariant, StructureError, ValidationError,
                             check_circuit, fold_symmetry, pin_offset, validate_circuit)
from analayout.seqpair import pack, random_state, unfold

from conftest import blk, ota5, simple_circuit


def test_duplicate_id_reported_once():
    c = Circuit((blk("M1", 1, 1), blk("M1", 2, 2), blk("M2", 1, 1)))
    report = validate_circuit(c)
    assert report.kinds().count("duplicate-id") == 1
    assert report[0].subject == "M1"


def test_weight_sum_violation():
    c = simple_circuit({"a": (1, 1)}, alpha=0.5, beta=0.6)
    assert "weight-sum" in validate_circuit(c).kinds()


def test_hand_built_ota_is_valid():
    assert validate_circuit(ota5()) == []


def test_structure_error_is_distinct():
    with pytest.raises(StructureError):
        validate_circuit({"blocks": []})
    assert not issubclass(ValidationError, StructureError)


@pytest.mark.parametrize("circuit, kind", [
    (Circuit((Block("a", ()),)), "no-variants"),
    (Circuit((blk("a", 0, 1),)), "bad-dimension"),
    (Circuit((blk("a", 1, 1),), (Net("n", ()),)), "empty-net"),
    (Circuit((blk("a", 1, 1),), (Net("n", (Pin("zz", 0, 0),)),)), "unknown-block"),
    (Circuit((blk("a", 1, 1), blk("b", 1, 1), blk("c", 1, 1)), (),
             ConstraintSet(symmetry_pairs=(("a", "b"), ("b", "c")))), "symmetry-reuse"),
    (Circuit((blk("a", 1, 1),), (), ConstraintSet(h_align=(("a", "a"),))), "alignment-size"),
    (Circuit((blk("a", 1, 1),), target_aspect_ratio=0.0), "aspect-ratio"),
    (Circuit((blk("a", 1, 1),), alpha=-0.1), "weights"),
    (Circuit((blk("a", 1, 1),), (Net("n", (Pin("a", 0, 0),), weight=-1),)), "net-weight"),
])
def test_each_violation_kind(circuit, kind):
    assert kind in validate_circuit(circuit).kinds()


def test_width_identity_checked():
    good = Block("a", (ShapeVariant(6, 2, ShapeParams(2, 3, 2)),), w_tot=12)
    bad = Block("b", (ShapeVariant(6, 2, ShapeParams(2, 3, 1)),), w_tot=12)
    report = validate_circuit(Circuit((good, bad)))
    assert [(v.kind, v.subject) for v in report] == [("width-identity", "b")]


def test_check_circuit_lists_every_violation():
    c = Circuit((blk("a", 1, 1), blk("a", 1, 1)), alpha=0.9, beta=0.9)
    with pytest.raises(ValidationError) as exc:
        check_circuit(c)
    assert set(exc.value.report.kinds()) == {"duplicate-id", "weight-sum"}


def _pair_circuit(wb=2, hb=3, pins=()):
    return Circuit((blk("A", 2, 3), blk("B", wb, hb)), tuple(pins),
                   ConstraintSet(symmetry_pairs=(("A", "B"),)))


def test_fold_builds_composite():
    f = fold_symmetry(_pair_circuit())
    (comp,) = f.circuit.blocks
    assert comp.dims(0) == (4, 3)
    assert not comp.rotatable
    sp = random_state(f.circuit, np.random.default_rng(0))
    pl = unfold(pack(sp, f.circuit), f)
    assert pl.rects["A"].x == 0 and pl.rects["A"].y == 0
    assert (pl.rects["B"].x, pl.rects["B"].w) == (2, 2)
    assert "B" in pl.mirrored and "A" not in pl.mirrored


def test_fold_mismatched_pair_rejected():
    with pytest.raises(ConstraintError):
        fold_symmetry(_pair_circuit(2, 4))


def test_mirrored_pin_reflection():
    c = _pair_circuit(pins=[Net("n", (Pin("B", 0.5, 1.0),))])
    f = fold_symmetry(c)
    comp = f.circuit.blocks[0]
    pin = f.circuit.nets[0].pins[0]
    assert pin.mirrored
    assert pin_offset(comp, pin, 0) == (3.5, 1.0)


def test_fold_rejects_vertical_alignment_of_member():
    c = Circuit((blk("A", 1, 1), blk("B", 1, 1), blk("C", 1, 1)), (),
                ConstraintSet(symmetry_pairs=(("A", "B"),), v_align=(("A", "C"),)))
    with pytest.raises(ConstraintError):
        fold_symmetry(c)


def test_fold_remaps_horizontal_alignment():
    c = Circuit((blk("A", 1, 1), blk("B", 1, 1), blk("C", 1, 1)), (),
                ConstraintSet(symmetry_pairs=(("A", "B"),), h_align=(("A", "C"),)))
    f = fold_symmetry(c)
    assert f.circuit.constraints.h_align == (("A|B", "C"),)


dims = st.tuples(st.integers(1, 6), st.integers(1, 6))


@settings(max_examples=60, deadline=None)
@given(pairs=st.lists(dims, min_size=1, max_size=3), singles=st.lists(dims, max_size=3),
       spacing=st.sampled_from([0.0, 0.5, 1.0]), seed=st.integers(0, 2**31))
def test_fold_unfold_properties(pairs, singles, spacing, seed):
    blocks, sym = [], []
    for k, (w, h) in enumerate(pairs):
        blocks += [blk(f"L{k}", w, h), blk(f"R{k}", w, h)]
        sym.append((f"L{k}", f"R{k}"))
    blocks += [blk(f"S{k}", w, h, rotatable=True) for k, (w, h) in enumerate(singles)]
    c = Circuit(tuple(blocks), (), ConstraintSet(symmetry_pairs=tuple(sym)))
    f = fold_symmetry(c, spacing)
    assert validate_circuit(f.circuit) == []
    before = sum(b.variants[0].area for b in c.blocks)
    after = sum(b.variants[0].area for b in f.circuit.blocks)
    extra = sum(spacing * h for _, h in pairs)
    assert after == pytest.approx(before + extra, abs=1e-9)

    pl = pack(random_state(f.circuit, np.random.default_rng(seed)), f.circuit)
    up = unfold(pl, f)
    assert set(up.rects) == set(c.ids)
    for (a, b) in sym:
        comp = pl.rects[f"{a}|{b}"]
        axis = comp.x + comp.w / 2
        ca = up.rects[a].x + up.rects[a].w / 2
        cb = up.rects[b].x + up.rects[b].w / 2
        assert abs(ca + cb - 2 * axis) <= 1e-9
        assert up.rects[a].y == up.rects[b].y
