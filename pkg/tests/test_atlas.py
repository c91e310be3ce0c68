import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blaschke_atlas import (
    Connectivity,
    DynClass,
    Label,
    OrbitSpec,
    ParamClassRecord,
    PlaneSpec,
    classify_parameter,
    dyn_plane_grid,
    param_plane_grid,
)
from blaschke_atlas.atlas import ATTRACTING_LABELS, SWAPPING_LABELS
from blaschke_atlas.family import XI

GRID = OrbitSpec.for_grids()


@pytest.mark.parametrize(
    "a, label, period, connectivity",
    [
        (0.5, Label.DISK_ESCAPE, None, Connectivity.CIRCLE_JULIA),
        (1j, Label.DEGENERATE, None, Connectivity.UNKNOWN),
        (1.5, Label.BITRANSITIVE, 2, Connectivity.UNKNOWN),
        (1.5j, Label.NON_HYPERBOLIC_CIRCLE, None, Connectivity.UNKNOWN),
        (5.25, Label.DISJOINT, 2, Connectivity.CONNECTED),
        (4, Label.DISJOINT, 1, Connectivity.CONNECTED),
        (2.5, Label.TONGUE_ADJACENT, 1, Connectivity.CONNECTED),
        (-0.87 + 2.05333j, Label.ESCAPING_IMMEDIATE, None, Connectivity.DISCONNECTED),
        (-3.22271 + 5.58189j, Label.SWAPPING_BITRANSITIVE, 6, Connectivity.CONNECTED),
        (-3.22278 + 5.58202j, Label.SWAPPING_DISJOINT, 6, Connectivity.CONNECTED),
    ],
)
def test_taxonomy_examples(a, label, period, connectivity):
    rec = classify_parameter(a)
    assert rec.label is label
    assert rec.period == period
    assert rec.connectivity is connectivity


def test_frozen_multipliers():
    assert abs(classify_parameter(5.25).multiplier - (-0.026208938559198)) < 1e-12
    assert abs(classify_parameter(1.5).multiplier - 0.1309818921291897) < 1e-12
    assert abs(classify_parameter(2.5).multiplier - 2 / 3) < 1e-12
    rec = classify_parameter(-3.22278 + 5.58202j)
    assert abs(rec.multiplier - (0.0194226035475 + 0.184038313463j)) < 1e-9


def test_disjoint_periods_one_and_four_on_circle():
    rec = classify_parameter(1.07398 + 0.5579j)
    assert rec.label is Label.DISJOINT
    assert sorted([rec.cycle_plus.period, rec.cycle_minus.period]) == [1, 4]
    assert rec.cycle_plus.on_circle and rec.cycle_minus.on_circle


def test_capture_suspect_flag():
    rec = classify_parameter(1.52 + 0.325j)
    assert rec.label is Label.TONGUE_ADJACENT and rec.capture_suspect


def test_record_round_trip():
    rec = classify_parameter(-3.22271 + 5.58189j)
    assert ParamClassRecord.from_dict(rec.to_dict()) == rec


def check_record_invariants(rec):
    if rec.label is Label.TONGUE_ADJACENT:
        assert rec.cycle_plus.on_circle
        assert not rec.swapping
    if rec.label in (Label.SWAPPING_BITRANSITIVE,) or (rec.label is Label.BITRANSITIVE and abs(rec.a) > 2):
        assert rec.cycle_plus.self_symmetric and not rec.cycle_plus.on_circle
    if rec.label in (Label.DISJOINT, Label.SWAPPING_DISJOINT) and abs(rec.a) > 2:
        assert abs(rec.cycle_minus.multiplier - rec.cycle_plus.multiplier.conjugate()) < 1e-8
    if rec.swapping:
        assert abs(rec.a) > 2 and rec.entered_disk >= 1
    if rec.label in SWAPPING_LABELS:
        assert rec.period >= 3
    if rec.label is Label.SWAPPING_BITRANSITIVE:
        assert rec.period % 2 == 0
        assert abs(rec.multiplier.imag) < 1e-6 and rec.multiplier.real >= -1e-9
    assert not (rec.label is Label.ESCAPING_IMMEDIATE and rec.connectivity is Connectivity.CONNECTED)


big = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(2.01, 8), st.floats(0, 2 * math.pi))
anywhere = st.builds(complex, st.floats(-8, 8), st.floats(-8, 8))


@settings(max_examples=80)
@given(big)
def test_record_invariants(a):
    check_record_invariants(classify_parameter(a, GRID))


@settings(max_examples=60)
@given(anywhere)
def test_conjugation_and_rotation_symmetry(a):
    base = classify_parameter(a, GRID)
    conj = classify_parameter(a.conjugate(), GRID)
    rot = classify_parameter(XI * a, GRID)
    assert conj.label is base.label
    assert rot.label is base.label
    if base.multiplier is not None and base.label in ATTRACTING_LABELS and abs(a) > 2:
        assert abs(conj.multiplier - base.multiplier.conjugate()) < 1e-8
        assert abs(rot.multiplier - base.multiplier) < 1e-8


def test_swapping_examples_satisfy_invariants():
    for a in (-3.22271 + 5.58189j, -3.22278 + 5.58202j, 5.25, 2.5, 4):
        check_record_invariants(classify_parameter(a))


def test_plane_spec_geometry():
    w = PlaneSpec.from_bounds(-8, 8, -8, 8, 4)
    assert w.shape == (4, 4)
    assert np.allclose(w.row(0), [-6 + 6j, -2 + 6j, 2 + 6j, 6 + 6j])
    assert w.locate(-7 + 7j) == (0, 0)
    assert w.locate(7 - 7j) == (3, 3)
    assert w.locate(9) is None
    with pytest.raises(ValueError):
        PlaneSpec(0, -1, 1, (2, 2))
    with pytest.raises(ValueError):
        PlaneSpec(0, 1, 1, (0, 2))


def test_grid_pixel_at_two_point_five_is_tongue():
    w = PlaneSpec.from_bounds(-8, 8, -8, 8, 200)
    i, j = w.locate(2.5 + 0j)
    centre = w.row(i)[j]
    assert abs(centre - 2.5) < 0.06
    assert classify_parameter(centre, GRID).label is Label.TONGUE_ADJACENT


def test_grid_is_row_major_and_thread_independent():
    w = PlaneSpec(complex(0, 0), 12, 12, (9, 7))
    g1 = param_plane_grid(w, 1)
    g3 = param_plane_grid(w, 3)
    assert g1.records == g3.records
    assert g1.labels().shape == (7, 9)
    assert g1.at(2, 5).a == w.row(2)[5]


def test_tricorn_window_has_both_swapping_labels():
    w = PlaneSpec.from_bounds(-3.22295, -3.22249, 5.58172, 5.58218, 40)
    labels = set(param_plane_grid(w).labels().ravel())
    assert {"swapping-bitransitive", "swapping-disjoint"} <= labels


def test_dyn_plane_at_four_has_all_basins():
    g = dyn_plane_grid(4, PlaneSpec(0, 4, 4, (80, 80)))
    present = {c for c in g.classes.ravel()}
    assert {DynClass.ESCAPE_INF, DynClass.ESCAPE_ZERO, DynClass.PLUS_BASIN, DynClass.MINUS_BASIN} <= present
    assert g.iterations.shape == (80, 80)
