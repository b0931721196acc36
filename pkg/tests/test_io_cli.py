from __future__ import annotations

import csv
import json
import re
import statistics
from pathlib import Path

import numpy as np
import pytest

from analayout.bench import run_benchmark, summarize
from analayout.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, main
from analayout.io import (CircuitSyntaxError, circuit_from_dict, circuit_to_dict,
                          conduits_to_dict, dump_circuit, export_conduits, load_placement,
                          parse_circuit, parse_conduits, save_placement)
from analayout.model import Circuit, Net, Pin, StructureError, ValidationError
from analayout.router import H, PitchConfig, Segment, bundle_conduits, route_placement
from analayout.seqpair import Placement, Rect, feasible_random_state, pack
from analayout.svg import render_svg

from conftest import blk, ota5

CIRCUITS = Path(__file__).resolve().parents[1] / "circuits"

MINIMAL = {"blocks": [{"id": "A", "variants": [{"width": 2, "height": 1}]}]}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return p


# -- circuit files ---------------------------------------------------------------------

def test_minimal_file(tmp_path):
    c = parse_circuit(write(tmp_path, "one.json", MINIMAL))
    assert c.ids == ("A",) and c.name == "one"
    assert c.blocks[0].dims(0) == (2, 1)


def test_weight_violation_reported(tmp_path):
    doc = dict(MINIMAL, weights={"alpha": 0.7, "beta": 0.5})
    with pytest.raises(ValidationError) as exc:
        parse_circuit(write(tmp_path, "w.json", doc))
    assert "weight-sum" in exc.value.report.kinds()


def test_syntax_error_has_position(tmp_path):
    p = write(tmp_path, "bad.json", '{"blocks": [\n  {"id": }\n]}')
    with pytest.raises(CircuitSyntaxError) as exc:
        parse_circuit(p)
    assert (exc.value.line, exc.value.column) == (2, 10)
    assert ":2:10:" in str(exc.value)


def test_missing_blocks_is_structure_error(tmp_path):
    with pytest.raises(StructureError):
        parse_circuit(write(tmp_path, "x.json", {"nets": []}))


def test_benchmark_fixtures_parse():
    sizes = {p.stem: parse_circuit(p).n_blocks for p in sorted(CIRCUITS.glob("*.json"))}
    assert sizes == {"ota5": 5, "ota8": 8, "ota11": 11}


def test_shape_spec_expanded():
    c = parse_circuit(CIRCUITS / "ota5.json")
    b = c.blocks[0]
    assert len(b.variants) > 1
    assert all(v.params is not None for v in b.variants)


@pytest.mark.parametrize("name", ["ota5", "ota8", "ota11"])
def test_circuit_round_trip(tmp_path, name):
    c = parse_circuit(CIRCUITS / f"{name}.json")
    assert circuit_from_dict(circuit_to_dict(c)) == c
    dump_circuit(c, tmp_path / "c.json")
    assert parse_circuit(tmp_path / "c.json") == c


def test_center_pin_default(tmp_path):
    doc = dict(MINIMAL, nets=[{"name": "n", "pins": ["A"]}])
    (net,) = parse_circuit(write(tmp_path, "p.json", doc)).nets
    assert (net.pins[0].dx, net.pins[0].dy) == (1.0, 0.5)


def test_placement_round_trip(tmp_path):
    c = ota5()
    pl = pack(feasible_random_state(c, np.random.default_rng(0)), c)
    save_placement(pl, tmp_path / "pl.json", circuit="ota5")
    back = load_placement(tmp_path / "pl.json")
    assert back.rects == pl.rects
    assert (back.width, back.height) == (pl.width, pl.height)
    assert back.rotated == pl.rotated


# -- conduit export ---------------------------------------------------------------------

def test_empty_conduit_export(tmp_path):
    assert conduits_to_dict([]) == {"format_version": 1, "conduits": []}
    export_conduits([], tmp_path / "c.json")
    assert parse_conduits(tmp_path / "c.json") == []


def test_conduit_literal_entry(tmp_path):
    segs = [Segment("n1", H, 1.0, 0, 5, 3, ("A",)), Segment("n2", H, 1.2, 1, 4, 3, ("B",))]
    conduits = bundle_conduits(segs, PitchConfig())
    (entry,) = conduits_to_dict(conduits)["conduits"]
    assert entry["orientation"] == "horizontal"
    assert (entry["start"], entry["end"], entry["layer"]) == (0, 5, 3)
    assert entry["cross_position"] == pytest.approx(1.1)
    assert entry["nets"] == ["n1", "n2"] and entry["blocks"] == ["A", "B"]
    assert entry["width"] == pytest.approx(0.3)

    export_conduits(conduits, tmp_path / "c.json")
    (back,) = parse_conduits(tmp_path / "c.json")
    c = conduits[0]
    assert (back.orientation, back.start, back.end, back.cross_position, back.nets,
            back.layer, back.width, back.blocks) == \
        (c.orientation, c.start, c.end, c.cross_position, c.nets, c.layer, c.width, c.blocks)


def test_conduit_version_checked(tmp_path):
    p = write(tmp_path, "c.json", {"format_version": 2, "conduits": []})
    with pytest.raises(StructureError):
        parse_conduits(p)


# -- svg --------------------------------------------------------------------------------

def test_single_block_svg():
    svg = render_svg(Placement.from_rects({"A": Rect(0, 0, 2, 1)}))
    assert len(re.findall(r"<rect\b", svg)) == 1
    assert svg == render_svg(Placement.from_rects({"A": Rect(0, 0, 2, 1)}))


def test_routed_svg_polylines_match_edges():
    blocks = (blk("A", 2, 2), blk("B", 2, 2), blk("C", 2, 2))
    nets = (Net("n1", (Pin("A", 1, 2), Pin("B", 1, 2))),
            Net("n2", (Pin("A", 2, 1), Pin("C", 0, 1))),
            Net("n3", (Pin("A", 1, 0), Pin("B", 2, 1), Pin("C", 1, 2))))
    c = Circuit(blocks, nets)
    pl = Placement.from_rects({"A": Rect(0, 0, 2, 2), "B": Rect(0, 3, 2, 2),
                               "C": Rect(3, 0, 2, 2)})
    res = route_placement(pl, c)
    svg = render_svg(pl, res.trees, res.conduits)
    edges = sum(len(t.edges) for t in res.trees.values())
    assert edges > 0
    assert svg.count("<polyline") == edges
    assert len(re.findall(r'<rect class="block"', svg)) == 3


# -- benchmark runner -------------------------------------------------------------------

SA_FAST = {"sa": {"steps": 150}}


def test_bench_bookkeeping(tmp_path):
    c = ota5()
    records, rows = run_benchmark([c], ["sa"], 3, 7, SA_FAST, tmp_path / "s.csv")
    assert len(records) == 3 and len(rows) == 1
    assert [r.seed for r in records] == [7, 8, 9]
    row = rows[0]
    es = [r.empty_space_pct for r in records]
    wl = [r.hpwl_um for r in records]
    assert row["empty_space_mean"] == pytest.approx(sum(es) / 3)
    assert row["empty_space_std"] == pytest.approx(statistics.stdev(es))
    assert row["hpwl_mean"] == pytest.approx(sum(wl) / 3)
    assert row["std_defined"] is True
    for r in records:
        e, h = r.recompute(c)
        assert abs(e - r.empty_space_pct) <= 1e-9 and abs(h - r.hpwl_um) <= 1e-9
    with open(tmp_path / "s.csv", newline="") as fh:
        (csv_row,) = list(csv.DictReader(fh))
    assert csv_row["runs"] == "3" and csv_row["failures"] == "0"
    lines = (tmp_path / "s.runs.jsonl").read_text().splitlines()
    assert len(lines) == 3 and json.loads(lines[0])["seed"] == 7


def test_bench_single_repeat_std_flagged():
    _, (row,) = run_benchmark([ota5()], ["sa"], 1, 0, SA_FAST)
    assert row["empty_space_std"] == 0 and row["runtime_std"] == 0
    assert row["std_defined"] is False


def test_bench_failure_row_kept():
    records, (row,) = run_benchmark([ota5()], ["sa"], 2, 0, {"sa": {"steps": 0}})
    assert [r.status for r in records] == ["failed", "failed"]
    assert "ValueError" in records[0].error
    assert row["runs"] == 2 and row["failures"] == 2


def test_summary_preserves_cell_order():
    records, _ = run_benchmark([ota5()], ["sa", "ga"], 1, 0,
                               {"sa": {"steps": 50}, "ga": {"population": 6, "generations": 2}})
    assert [r["algorithm"] for r in summarize(records, [ota5()])] == ["sa", "ga"]


# -- command line -----------------------------------------------------------------------

def floorplan(out, seed=3, algo="sa", extra=()):
    return main(["floorplan", "--input", str(CIRCUITS / "ota5.json"), "--algo", algo,
                 "--seed", str(seed), "--steps", "300", "--out", str(out), *extra])


def route(out, placement):
    return main(["route", "--placement", str(placement), "--circuit",
                 str(CIRCUITS / "ota5.json"), "--out", str(out), "--grid", "4x4"])


def test_cli_pipeline_is_byte_deterministic(tmp_path, capsys):
    outputs = []
    for k in range(2):
        fp, rt = tmp_path / f"fp{k}", tmp_path / f"rt{k}"
        assert floorplan(fp) == EXIT_OK
        assert route(rt, fp / "placement.json") == EXIT_OK
        outputs.append({p.relative_to(tmp_path / f"fp{k}").as_posix(): p.read_bytes()
                        for p in fp.iterdir()} |
                       {"route/" + p.name: p.read_bytes() for p in rt.iterdir()})
    assert outputs[0] == outputs[1]
    assert set(outputs[0]) == {"placement.json", "floorplan.svg", "metrics.csv",
                               "route/placement_routed.json", "route/conduits.json",
                               "route/routes.json", "route/congestion.json", "route/layout.svg"}
    doc = json.loads(outputs[0]["route/conduits.json"])
    assert doc["format_version"] == 1
    capsys.readouterr()


def test_cli_input_errors(tmp_path, capsys):
    assert main(["floorplan", "--input", str(tmp_path / "missing.json"), "--algo", "sa",
                 "--seed", "0", "--out", str(tmp_path)]) == EXIT_INPUT
    bad = write(tmp_path, "bad.json", "{ not json")
    assert main(["floorplan", "--input", str(bad), "--algo", "sa", "--seed", "0",
                 "--out", str(tmp_path)]) == EXIT_INPUT
    assert floorplan(tmp_path / "o", extra=["--alpha", "0.9", "--beta", "0.9"]) == EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        floorplan(tmp_path / "o", extra=["--bogus", "1"])
    assert exc.value.code == EXIT_INPUT
    err = capsys.readouterr().err
    assert "bogus" in err


def test_cli_infeasible(tmp_path, capsys):
    doc = {"blocks": [{"id": "A", "variants": [{"width": 1, "height": 2}]},
                      {"id": "B", "variants": [{"width": 1, "height": 3}]}],
           "constraints": {"symmetry_pairs": [["A", "B"]]}}
    p = write(tmp_path, "sym.json", doc)
    assert main(["floorplan", "--input", str(p), "--algo", "sa", "--seed", "0",
                 "--out", str(tmp_path / "o")]) == EXIT_INFEASIBLE
    assert "infeasible" in capsys.readouterr().err


def test_cli_route_rejects_incomplete_placement(tmp_path, capsys):
    save_placement(Placement.from_rects({"M1": Rect(0, 0, 1, 1)}), tmp_path / "p.json")
    assert route(tmp_path / "r", tmp_path / "p.json") == EXIT_INPUT
    capsys.readouterr()


def test_cli_synth_and_bench(tmp_path, capsys):
    d = tmp_path / "circ"
    d.mkdir()
    assert main(["synth", "--devices", "5", "--seed", "1", "--out", str(d / "s.json")]) == 0
    assert parse_circuit(d / "s.json").n_blocks == 5
    assert main(["bench", "--circuits", str(d), "--algos", "sa", "--repeats", "2",
                 "--seed0", "0", "--out", str(tmp_path / "b.csv"), "--steps", "100"]) == 0
    with open(tmp_path / "b.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1 and rows[0]["runs"] == "2"
    assert main(["bench", "--circuits", str(d), "--algos", "nope", "--repeats", "1",
                 "--seed0", "0", "--out", str(tmp_path / "b.csv")]) == EXIT_INPUT
    capsys.readouterr()
