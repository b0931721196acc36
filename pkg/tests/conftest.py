from __future__ import annotations

import numpy as np
import pytest

from analayout.model import Block, Circuit, ConstraintSet, Net, Pin, ShapeVariant


def blk(bid, w, h, rotatable=False, extra=()):
    variants = (ShapeVariant(w, h),) + tuple(ShapeVariant(a, b) for a, b in extra)
    return Block(bid, variants, rotatable=rotatable)


def simple_circuit(sizes, nets=(), constraints=None, **kw):
    blocks = tuple(blk(bid, w, h) for bid, (w, h) in sizes.items())
    return Circuit(blocks, tuple(nets), constraints or ConstraintSet(), **kw)


def ota5():
    """Hand-built 5-block OTA-like fixture satisfying every invariant."""
    blocks = (
        Block("M1", (ShapeVariant(2, 3), ShapeVariant(3, 2)), rotatable=True, group="diffpair"),
        Block("M2", (ShapeVariant(2, 3), ShapeVariant(3, 2)), rotatable=True, group="diffpair"),
        Block("M3", (ShapeVariant(4, 2),), rotatable=True, group="mirror"),
        Block("M4", (ShapeVariant(4, 2),), rotatable=True, group="mirror"),
        Block("M5", (ShapeVariant(3, 3), ShapeVariant(9, 1)), rotatable=False, group="tail"),
    )
    nets = (
        Net("inp", (Pin("M1", 1, 1.5),)),
        Net("inn", (Pin("M2", 1, 1.5),)),
        Net("x", (Pin("M1", 1, 3), Pin("M3", 2, 0))),
        Net("out", (Pin("M2", 1, 3), Pin("M4", 2, 0)), weight=2.0),
        Net("tail", (Pin("M1", 1, 0), Pin("M2", 1, 0), Pin("M5", 1.5, 3))),
    )
    cons = ConstraintSet(symmetry_pairs=(("M1", "M2"),), h_align=(("M3", "M4"),))
    return Circuit(blocks, nets, cons, alpha=0.5, beta=0.3, target_aspect_ratio=1.0, name="ota5")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_net_instance(rng, max_terminals=4, max_obstacles=3, size=8):
    """Random terminals and rectangular obstacles on integer coordinates
    ``0..size-1``; no terminal lies strictly inside an obstacle."""
    from analayout.seqpair import Rect

    obstacles = []
    for _ in range(int(rng.integers(0, max_obstacles + 1))):
        x0, x1 = sorted(rng.choice(size, 2, replace=False))
        y0, y1 = sorted(rng.choice(size, 2, replace=False))
        obstacles.append(Rect(float(x0), float(y0), float(x1 - x0), float(y1 - y0)))
    k = int(rng.integers(2, max_terminals + 1))
    pts: list = []
    while len(pts) < k:
        p = (float(rng.integers(0, size)), float(rng.integers(0, size)))
        if p in pts or any(r.x < p[0] < r.x2 and r.y < p[1] < r.y2 for r in obstacles):
            continue
        pts.append(p)
    return pts, obstacles


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one exit criterion for the end-of-run report."""

    def record(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_RESULTS[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
