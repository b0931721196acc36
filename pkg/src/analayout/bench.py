"""Repeated seeded runs per (circuit, algorithm) with mean/std summaries."""

from __future__ import annotations

import csv
import json
import statistics
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .cost import empty_space, hpwl
from .estimators import FLOORPLANNERS
from .io import placement_from_dict, placement_to_dict
from .model import Circuit

SUMMARY_COLUMNS = ("circuit", "n_devices", "algorithm", "runs", "failures",
                   "runtime_mean", "runtime_std", "empty_space_mean", "empty_space_std",
                   "hpwl_mean", "hpwl_std", "std_defined")


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    circuit: str
    runtime_s: float = float("nan")
    empty_space_pct: float = float("nan")
    hpwl_um: float = float("nan")
    final_cost: float = float("nan")
    config: dict = field(default_factory=dict)
    placement: Optional[dict] = None
    status: str = "ok"
    error: str = ""

    def recompute(self, circuit: Circuit) -> tuple[float, float]:
        """Empty space and HPWL recomputed from the stored placement."""
        pl = placement_from_dict(self.placement)
        return empty_space(pl), hpwl(pl, circuit.nets, circuit.blocks)


def _mean_std(vals: list[float]) -> tuple[float, float, bool]:
    if not vals:
        return float("nan"), float("nan"), False
    if len(vals) == 1:
        return vals[0], 0.0, False
    return statistics.fmean(vals), statistics.stdev(vals), True


def run_once(circuit: Circuit, algorithm: str, seed: int, params: Optional[dict] = None) -> RunRecord:
    params = dict(params or {})
    try:
        est = FLOORPLANNERS[algorithm](random_state=seed, **params)
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    config = {k: v for k, v in est.get_params().items()
              if isinstance(v, (int, float, str, bool, type(None)))}
    rec = RunRecord(algorithm, seed, circuit.name, config=config)
    try:
        est.fit(circuit)
    except Exception as exc:  # recorded as a failure row, never dropped
        rec.status = "failed"
        rec.error = f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
        return rec
    m = est.metrics()
    rec.runtime_s = m["runtime_s"]
    rec.empty_space_pct = m["empty_space_pct"]
    rec.hpwl_um = m["hpwl_um"]
    rec.final_cost = m["cost"]
    rec.placement = placement_to_dict(est.placement_)
    return rec


def summarize(records: Sequence[RunRecord], circuits: Sequence[Circuit]) -> list[dict]:
    n_dev = {c.name: c.n_blocks for c in circuits}
    keys: list[tuple[str, str]] = []
    for r in records:
        if (r.circuit, r.algorithm) not in keys:
            keys.append((r.circuit, r.algorithm))
    rows = []
    for circ, algo in keys:
        cell = [r for r in records if r.circuit == circ and r.algorithm == algo]
        ok = [r for r in cell if r.status == "ok"]
        rt = _mean_std([r.runtime_s for r in ok])
        es = _mean_std([r.empty_space_pct for r in ok])
        wl = _mean_std([r.hpwl_um for r in ok])
        rows.append({"circuit": circ, "n_devices": n_dev.get(circ, ""), "algorithm": algo,
                     "runs": len(cell), "failures": len(cell) - len(ok),
                     "runtime_mean": rt[0], "runtime_std": rt[1],
                     "empty_space_mean": es[0], "empty_space_std": es[1],
                     "hpwl_mean": wl[0], "hpwl_std": wl[1], "std_defined": rt[2]})
    return rows


def run_benchmark(circuits: Sequence[Circuit], algorithms: Sequence[str], repeats: int,
                  seed0: int = 0, params: Optional[dict] = None,
                  out_csv=None, progress=None) -> tuple[list[RunRecord], list[dict]]:
    """Run ``repeats`` seeded runs (seeds ``seed0 .. seed0+repeats-1``) of
    every algorithm on every circuit.

    ``params`` maps an algorithm tag to estimator keyword arguments. When
    ``out_csv`` is given the summary is written there and the per-run
    records next to it as ``<stem>.runs.jsonl``.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    params = params or {}
    records = []
    for circuit in circuits:
        for algo in algorithms:
            for r in range(repeats):
                rec = run_once(circuit, algo, seed0 + r, params.get(algo))
                records.append(rec)
                if progress is not None:
                    progress(rec)
    rows = summarize(records, circuits)
    if out_csv is not None:
        write_summary(rows, out_csv)
        runs = Path(out_csv).with_suffix(".runs.jsonl")
        with open(runs, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(asdict(rec)) + "\n")
    return records, rows


def write_summary(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()})
