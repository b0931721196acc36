"""Shape-variant enumeration for devices with a fixed total electrical width."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import ShapeParams, ShapeVariant


class NoLegalShape(ValueError):
    pass


@dataclass(frozen=True)
class ShapeSpec:
    w_tot: float
    wf_range: tuple[float, ...]
    nf_range: tuple[int, int]
    m_range: tuple[int, int]
    finger_spacing: float = 0.0
    row_height: float = 1.0

    def __post_init__(self):
        if self.w_tot <= 0:
            raise ValueError("W_tot must be positive")
        if not self.wf_range or any(w <= 0 for w in self.wf_range):
            raise ValueError("finger widths must be positive and nonempty")
        for lo, hi in (self.nf_range, self.m_range):
            if lo < 1 or hi < lo:
                raise ValueError(f"bad integer interval ({lo}, {hi})")
        if self.finger_spacing < 0 or self.row_height <= 0:
            raise ValueError("spacing must be >= 0 and row height > 0")


def enumerate_shapes(spec: ShapeSpec) -> list[ShapeVariant]:
    """All footprints whose finger decomposition multiplies to ``w_tot``.

    Footprint of (w_f, N_f, M) is ``N_f*(w_f+s)`` wide and ``M*h_row`` tall.
    Duplicate footprints keep the first triple in (w_f, N_f, M) order.
    """
    found: dict[tuple[float, float], ShapeVariant] = {}
    for wf in sorted(set(spec.wf_range)):
        for nf in range(spec.nf_range[0], spec.nf_range[1] + 1):
            for m in range(spec.m_range[0], spec.m_range[1] + 1):
                if not math.isclose(wf * nf * m, spec.w_tot, rel_tol=1e-9):
                    continue
                fp = (nf * (wf + spec.finger_spacing), m * spec.row_height)
                if fp not in found:
                    found[fp] = ShapeVariant(fp[0], fp[1], ShapeParams(wf, nf, m))
    if not found:
        raise NoLegalShape(f"no (w_f, N_f, M) in range multiplies to W_tot={spec.w_tot}")
    return sorted(found.values(), key=lambda v: (v.width, v.height))


def shape_spec_from_dict(d: dict) -> ShapeSpec:
    def interval(v) -> tuple[int, int]:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return int(v[0]), int(v[1])
        raise ValueError(f"expected [lo, hi] interval, got {v!r}")

    wf: Sequence[float] = d["wf_range"]
    return ShapeSpec(
        w_tot=float(d["W_tot"]),
        wf_range=tuple(float(x) for x in wf),
        nf_range=interval(d["Nf_range"]),
        m_range=interval(d["M_range"]),
        finger_spacing=float(d.get("finger_spacing", 0.0)),
        row_height=float(d.get("row_height", 1.0)),
    )
