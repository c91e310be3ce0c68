import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from blaschke_atlas import Family, FateTag, MatchError, OrbitSpec, PlaneSpec, PolyFamilyMember, match_cubic_multiplier, poly_classify
from blaschke_atlas.polys import PolyClass, coarse_seed, poly_eval, poly_jet, poly_plane_grid

small = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


def member(fam, c):
    return PolyFamilyMember(Family(fam), c)


def test_family_metadata():
    assert Family.CUBIC_M.free_critical_point == 2 / 3
    assert Family.ANTIQUADRATIC.free_critical_point == 0
    assert not Family.ANTIQUADRATIC.holomorphic
    assert member("quadratic", 0.5).escape_radius() == 4.0
    assert member("cubic", -5.5).escape_radius() == 13.0


def test_poly_eval_examples():
    assert poly_eval(member("cubic", 3 + 1j), 0) == 0
    assert poly_eval(member("antiquadratic", 0), 1j) == -1
    assert poly_eval(member("quadratic", 2), 2) == 6


@given(small, small)
def test_squared_is_two_antiquadratic_steps(c, z):
    once = poly_eval(member("antiquadratic", c), z)
    twice = poly_eval(member("antiquadratic", c), once)
    assert abs(poly_eval(member("antiquadratic-squared", c), z) - twice) <= 1e-12 * max(1, abs(twice))


@given(small)
def test_cubic_critical_points(b):
    m = member("cubic", b)
    for z in (0, 2 / 3):
        _, dz, dzbar = poly_jet(m, z)
        assert abs(dz) < 1e-15 and dzbar == 0


@given(small, small)
def test_antiholomorphic_jet_matches_finite_differences(c, z):
    m = member("antiquadratic", c)
    w, dz, dzbar = poly_jet(m, z, 3)
    if abs(w) > 1e6:
        return
    h = 1e-6
    fx = (poly_jet(m, z + h, 3)[0] - poly_jet(m, z - h, 3)[0]) / (2 * h)
    fy = (poly_jet(m, z + 1j * h, 3)[0] - poly_jet(m, z - 1j * h, 3)[0]) / (2 * h)
    scale = max(1, abs(dz) + abs(dzbar))
    assert abs((fx - 1j * fy) / 2 - dz) < 1e-6 * scale
    assert abs((fx + 1j * fy) / 2 - dzbar) < 1e-6 * scale


def test_cubic_period_two():
    f = poly_classify(member("cubic", -5.5))
    assert f.cycle.period == 2 and f.attracting
    assert abs(f.cycle.multiplier - 0.2403729291481395) < 1e-12


def test_antiquadratic_zero_and_quadratic_escape():
    f = poly_classify(member("antiquadratic", 0))
    assert f.cycle.period == 1 and f.cycle.multiplier == 0 and f.cycle.points[0] == 0
    assert poly_classify(member("quadratic", 2)).tag is FateTag.ESCAPE_INF


def test_antiquadratic_multiplier_frozen():
    f = poly_classify(member("antiquadratic", 0.1 + 0.2j))
    assert abs(f.cycle.multiplier - (0.1510189125427109 - 0.34751818205694096j)) < 1e-12
    g = poly_classify(member("antiquadratic-squared", 0.1 + 0.2j))
    assert abs(g.cycle.multiplier - abs(f.cycle.multiplier) ** 2) < 1e-12


@settings(max_examples=60)
@given(st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 1.8), st.floats(0, 2 * math.pi)))
def test_odd_period_antiquadratic_relation(c):
    spec = OrbitSpec(max_iter=20000)
    f = poly_classify(member("antiquadratic", c), spec)
    if not f.attracting or f.cycle.period % 2 == 0:
        return
    g = poly_classify(member("antiquadratic-squared", c), spec)
    assert g.attracting and g.cycle.period == f.cycle.period
    lam = g.cycle.multiplier
    assert abs(lam.imag) < 1e-8 and lam.real >= -1e-12
    assert abs(lam - abs(f.cycle.multiplier) ** 2) < 1e-8


def test_match_cubic_at_five_and_a_quarter():
    b, res = match_cubic_multiplier(5.25, -5.5)
    assert res < 1e-8
    assert abs(b - (-5.557516927310446)) < 1e-9
    f = poly_classify(member("cubic", b))
    assert f.cycle.period == 2


def test_match_from_matched_seed_is_immediate():
    b, _ = match_cubic_multiplier(5.25, -5.5)
    b2, res = match_cubic_multiplier(5.25, b)
    assert b2 == b and res < 1e-12


def test_match_at_four_from_coarse_scan():
    seed = coarse_seed(4, PlaneSpec.from_bounds(-8, 8, -8, 8, 40))
    b, res = match_cubic_multiplier(4, seed)
    assert res < 1e-6
    assert abs(b - (-4.5)) < 1e-8


def test_match_errors():
    with pytest.raises(MatchError):
        match_cubic_multiplier(-0.87 + 2.05333j, -5.5)  # no attracting cycle
    with pytest.raises(MatchError):
        match_cubic_multiplier(-3.22271 + 5.58189j, -5.5)  # swapping, not exterior
    with pytest.raises(MatchError, match="period"):
        match_cubic_multiplier(4, -5.5)


def test_poly_grid_classes():
    w = PlaneSpec(-3, 12, 12, (30, 30))
    g = poly_plane_grid("cubic", w)
    classes = {g.pixel_class(f) for f in g.fates}
    assert {PolyClass.ESCAPE, PolyClass.ZERO, PolyClass.BOUNDED} <= classes
    assert poly_plane_grid("cubic", w, 4).fates == g.fates
