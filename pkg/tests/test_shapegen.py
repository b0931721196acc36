from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analayout.shapegen import NoLegalShape, ShapeSpec, enumerate_shapes, shape_spec_from_dict


def brute_triples(w_tot, wfs, nf, m):
    return {(wf, n, k) for wf, n, k in itertools.product(wfs, range(nf[0], nf[1] + 1),
                                                         range(m[0], m[1] + 1))
            if math.isclose(wf * n * k, w_tot, rel_tol=1e-9)}


def test_w12_matches_exhaustive_triples():
    spec = ShapeSpec(12, (1, 2, 3), (1, 6), (1, 2))
    triples = brute_triples(12, (1, 2, 3), (1, 6), (1, 2))
    # Frozen from the enumeration above: every product-12 combination in range.
    assert triples == {(1, 6, 2), (2, 6, 1), (2, 3, 2), (3, 4, 1), (3, 2, 2)}
    expected = sorted({(n * wf, float(k)) for wf, n, k in triples})
    got = [(v.width, v.height) for v in enumerate_shapes(spec)]
    assert got == expected
    fp = {(v.width, v.height): v.params for v in enumerate_shapes(spec)}
    assert fp[(12, 1)].n_f == 6 and fp[(12, 1)].w_f == 2
    assert (6, 2) in fp


def test_forced_single_variant():
    (v,) = enumerate_shapes(ShapeSpec(1, (1,), (1, 1), (1, 1)))
    assert (v.width, v.height) == (1, 1)
    assert (v.params.w_f, v.params.n_f, v.params.m) == (1, 1, 1)


def test_no_legal_shape():
    with pytest.raises(NoLegalShape):
        enumerate_shapes(ShapeSpec(7, (2,), (1, 3), (1, 2)))


def test_spacing_and_row_height_in_footprint():
    (v,) = enumerate_shapes(ShapeSpec(4, (2,), (2, 2), (1, 1), finger_spacing=0.5, row_height=1.5))
    assert (v.width, v.height) == (5.0, 1.5)


def test_invalid_spec_rejected():
    with pytest.raises(ValueError):
        ShapeSpec(4, (2,), (1, 2), (1, 1), finger_spacing=-1)
    with pytest.raises(ValueError):
        ShapeSpec(4, (), (1, 2), (1, 1))


def test_from_dict():
    spec = shape_spec_from_dict({"W_tot": 12, "wf_range": [3, 1, 2], "Nf_range": [1, 6],
                                 "M_range": [1, 2]})
    assert spec.w_tot == 12 and spec.nf_range == (1, 6)


@settings(max_examples=80, deadline=None)
@given(w_tot=st.integers(1, 48), wfs=st.lists(st.sampled_from([0.5, 1, 1.5, 2, 3, 4]),
                                               min_size=1, max_size=4, unique=True),
       nf_hi=st.integers(1, 12), m_hi=st.integers(1, 4), seed=st.randoms())
def test_identity_and_set_semantics(w_tot, wfs, nf_hi, m_hi, seed):
    spec = ShapeSpec(w_tot, tuple(wfs), (1, nf_hi), (1, m_hi))
    shuffled = list(wfs)
    seed.shuffle(shuffled)
    spec2 = ShapeSpec(w_tot, tuple(shuffled), (1, nf_hi), (1, m_hi))
    triples = brute_triples(w_tot, wfs, (1, nf_hi), (1, m_hi))
    if not triples:
        with pytest.raises(NoLegalShape):
            enumerate_shapes(spec)
        return
    out = enumerate_shapes(spec)
    assert out == enumerate_shapes(spec2)
    for v in out:
        p = v.params
        assert math.isclose(p.w_f * p.n_f * p.m, w_tot, rel_tol=1e-9)
    assert {(v.width, v.height) for v in out} == {(n * wf, float(k)) for wf, n, k in triples}
    widths = [v.width for v in out]
    assert widths == sorted(widths)


@given(wf=st.floats(0.1, 5), nf=st.integers(1, 8), s=st.floats(0, 1))
def test_area_monotone_in_rows(wf, nf, s):
    areas = []
    for m in (1, 2, 3):
        (v,) = enumerate_shapes(ShapeSpec(wf * nf * m, (wf,), (nf, nf), (m, m), s))
        areas.append(v.area)
    assert areas[0] < areas[1] < areas[2]
