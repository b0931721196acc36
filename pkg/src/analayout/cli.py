"""Command-line entry point: ``analayout {floorplan,route,bench,train,synth}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .bench import run_benchmark
from .cost import empty_space, hpwl
from .estimators import FLOORPLANNERS, GlobalRouter
from .io import (dump_circuit, export_conduits, load_placement, parse_circuit, routes_to_dict,
                 save_placement)
from .model import CircuitError, ConstraintError, check_circuit
from .rl import PPOConfig, TrainedModel, generate_synthetic_circuit, train
from .router import UnroutableError
from .search import SearchFailed
from .seqpair import AlignmentInfeasible
from .svg import emit_svg
from .validation import check_rng

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("analayout")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple[int, int]:
    try:
        gx, gy = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected GXxGY, got {text!r}") from None
    return gx, gy


def _estimator_params(args) -> dict:
    """Map generic CLI flags onto the chosen algorithm's estimator params."""
    p: dict = {}
    algo = args.algo
    if getattr(args, "objective", None):
        p["objective"] = args.objective
    if algo == "sa":
        if args.steps is not None:
            p["steps"] = args.steps
        if args.t0 is not None:
            p["t0"] = args.t0
    elif algo in ("ga", "pso"):
        if args.steps is not None:
            key = "generations" if algo == "ga" else "iterations"
            p[key] = max(1, args.steps // 200)
    elif algo == "rlsa":
        if args.steps is not None:
            p["sa_steps"] = args.steps
        if args.t0 is not None:
            p["t0"] = args.t0
        if args.model:
            p["model"] = args.model
    elif algo == "rl":
        if args.steps is not None:
            p["steps"] = args.steps
        if args.model:
            p["model"] = args.model
    return p


def cmd_floorplan(args) -> int:
    circuit = parse_circuit(args.input)
    if args.alpha is not None or args.beta is not None:
        circuit = replace(circuit, alpha=circuit.alpha if args.alpha is None else args.alpha,
                          beta=circuit.beta if args.beta is None else args.beta)
    if args.aspect is not None:
        circuit = replace(circuit, target_aspect_ratio=args.aspect)
    check_circuit(circuit)
    params = _estimator_params(args)
    est = FLOORPLANNERS[args.algo](random_state=args.seed, **params)
    est.fit(circuit)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pl = est.placement_
    metrics = {"empty_space_pct": empty_space(pl), "hpwl_um": hpwl(pl, circuit.nets, circuit.blocks),
               "area_um2": pl.area, "cost": est.best_cost_}
    save_placement(pl, out / "placement.json", circuit=circuit.name, algorithm=args.algo,
                   seed=args.seed, metrics=metrics)
    emit_svg(pl, out / "floorplan.svg")
    with open(out / "metrics.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["circuit", "algorithm", "seed", *metrics])
        w.writerow([circuit.name, args.algo, args.seed, *(f"{v:.10g}" for v in metrics.values())])
    print(json.dumps({**metrics, "runtime_s": est.runtime_}))
    return EXIT_OK


def cmd_route(args) -> int:
    circuit = parse_circuit(args.circuit)
    placement = load_placement(args.placement)
    missing = set(circuit.ids) - set(placement.rects)
    if missing:
        raise CircuitError(f"placement lacks blocks {sorted(missing)}")
    gx, gy = args.grid
    router = GlobalRouter(gx=gx, gy=gy, capacity=args.capacity, spread_pitch=args.pitch)
    router.fit(placement, circuit)
    res = router.routing_
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_placement(router.placement_, out / "placement_routed.json", circuit=circuit.name)
    export_conduits(res.conduits, out / "conduits.json")
    (out / "routes.json").write_text(json.dumps(routes_to_dict(res), indent=2) + "\n",
                                     encoding="utf-8")
    (out / "congestion.json").write_text(json.dumps(res.congestion.to_dict(), indent=2) + "\n",
                                         encoding="utf-8")
    emit_svg(router.placement_, out / "layout.svg", res.trees, res.conduits)
    print(json.dumps({"wirelength_um": res.wirelength, "conduits": len(res.conduits),
                      "max_overflow": res.congestion.max_overflow,
                      "spread_iterations": router.n_spread_iter_}))
    return EXIT_OK


def cmd_bench(args) -> int:
    paths = sorted(Path(args.circuits).glob("*.json"))
    if not paths:
        raise CircuitError(f"no circuit files in {args.circuits}")
    circuits = [parse_circuit(p) for p in paths]
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in FLOORPLANNERS]
    if bad:
        raise CircuitError(f"unknown algorithms {bad}")
    params: dict = {}
    models = [TrainedModel.load(m) for m in args.model or []]
    for m in models:
        tag = "rlsa" if m.mode == "rlsa" else "rl"
        params.setdefault(tag, {})["model"] = m
    if args.steps is not None:
        params.setdefault("sa", {})["steps"] = args.steps

    def progress(rec):
        log.info("%s %s seed=%d %s", rec.circuit, rec.algorithm, rec.seed, rec.status)

    _, rows = run_benchmark(circuits, algos, args.repeats, args.seed0, params, args.out,
                            progress)
    failures = sum(r["failures"] for r in rows)
    print(json.dumps({"cells": len(rows), "failures": failures, "summary": str(args.out)}))
    return EXIT_OK


def cmd_train(args) -> int:
    rng = check_rng(args.seed)
    overrides = {"episodes": args.episodes}
    if args.steps_per_episode is not None:
        overrides["steps_per_episode"] = args.steps_per_episode
    if args.epochs is not None:
        overrides["epochs_per_update"] = args.epochs
    cfg = PPOConfig.for_mode(args.mode, **overrides)

    def cb(entry):
        log.info("episode %d reward=%.4f best=%.4f", entry["episode"], entry["reward"],
                 entry["best_cost"])

    model, history = train(args.mode, args.devices, cfg, rng, n_circuits=args.circuits,
                           objective=args.objective, callback=cb)
    model.save(args.out)
    if args.log:
        Path(args.log).write_text(json.dumps(history, indent=1, default=float) + "\n",
                                  encoding="utf-8")
    print(json.dumps({"model": str(args.out), "episodes": len(history),
                      "last_reward": history[-1]["reward"] if history else None}))
    return EXIT_OK


def cmd_synth(args) -> int:
    circuit = generate_synthetic_circuit(args.devices, check_rng(args.seed),
                                         name=args.name or f"synthetic{args.devices}_s{args.seed}")
    dump_circuit(circuit, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="analayout", description="Analog layout templates: floorplan and route.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("floorplan", help="search a floorplan for a circuit file")
    f.add_argument("--input", required=True)
    f.add_argument("--algo", required=True, choices=sorted(FLOORPLANNERS))
    f.add_argument("--seed", type=int, required=True)
    f.add_argument("--steps", type=int)
    f.add_argument("--t0", type=float)
    f.add_argument("--alpha", type=float)
    f.add_argument("--beta", type=float)
    f.add_argument("--aspect", type=float)
    f.add_argument("--objective", choices=("combined", "area"))
    f.add_argument("--model", help="trained policy file for rlsa/rl")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_floorplan)

    r = sub.add_parser("route", help="global-route a placement")
    r.add_argument("--placement", required=True)
    r.add_argument("--circuit", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--grid", type=_grid, default=(4, 4))
    r.add_argument("--capacity", type=int, default=4)
    r.add_argument("--pitch", type=float, default=1.0)
    r.set_defaults(func=cmd_route)

    b = sub.add_parser("bench", help="repeated runs with mean/std summary")
    b.add_argument("--circuits", required=True)
    b.add_argument("--algos", required=True)
    b.add_argument("--repeats", type=int, required=True)
    b.add_argument("--seed0", type=int, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--steps", type=int)
    b.add_argument("--model", action="append")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("train", help="train a PPO policy on synthetic circuits")
    t.add_argument("--mode", required=True, choices=("rlsa", "pure"))
    t.add_argument("--devices", type=int, required=True)
    t.add_argument("--episodes", type=int, required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--circuits", type=int, default=8)
    t.add_argument("--steps-per-episode", type=int)
    t.add_argument("--epochs", type=int)
    t.add_argument("--objective", choices=("combined", "area"), default="combined")
    t.add_argument("--log")
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("synth", help="write a synthetic circuit file")
    s.add_argument("--devices", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--name")
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UnroutableError, SearchFailed, AlignmentInfeasible, ConstraintError) as exc:
        print(f"analayout: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CircuitError, OSError, ValueError) as exc:
        print(f"analayout: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - last-resort guard
        log.exception("internal error")
        print(f"analayout: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
