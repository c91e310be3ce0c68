import cmath
import math

import pytest

from blaschke_atlas import (
    BlaschkeParam,
    OutsideHyperbolicComponentError,
    PreconditionError,
    SolveReport,
    critical_points,
    find_superattracting,
    multiplier_at,
    solve_multiplier,
)
from blaschke_atlas import _kernels as K

SEED = 5.25
CENTRE = 5.243767771392311


def test_multiplier_at_examples():
    assert abs(multiplier_at(2)) < 1e-12
    assert abs(multiplier_at(SEED) - (-0.026208938559198)) < 1e-12
    lam = multiplier_at(2.5)
    assert abs(lam.imag) < 1e-12 and -1 < lam.real < 1


def test_multiplier_at_outside_component():
    with pytest.raises(OutsideHyperbolicComponentError, match="outside hyperbolic component"):
        multiplier_at(-0.87 + 2.05333j)
    with pytest.raises(OutsideHyperbolicComponentError):
        multiplier_at(0.5)


def test_identity_solve():
    r = solve_multiplier(SEED, multiplier_at(SEED))
    assert r.a_star == SEED and r.steps == 0 and not r.failed


@pytest.mark.parametrize("k", range(8))
def test_round_trip_targets(k):
    target = 0.5 * cmath.exp(2j * math.pi * k / 8)
    r = solve_multiplier(SEED, target)
    assert not r.failed, r.message
    assert r.residual < 1e-8
    assert r.residual == abs(r.achieved - r.target)
    assert r.period == 2
    assert abs(multiplier_at(r.a_star) - target) < 1e-8


def test_injectivity_probe():
    r1 = solve_multiplier(SEED, 0.5)
    r2 = solve_multiplier(SEED, 0.5j)
    assert abs(r1.a_star - r2.a_star) > 10 * max(r1.residual, r2.residual, 1e-15)


def test_centre_from_zero_target():
    r = solve_multiplier(SEED, 0)
    assert abs(r.a_star - CENTRE) < 1e-9
    p = BlaschkeParam(r.a_star)
    c = critical_points(p).c_plus
    w, _, _, _ = K.iterate_with_jet(K.FAM_BLASCHKE, p.a, c, 2)
    assert abs(w - c) < 1e-10


def test_find_superattracting_agrees():
    r = find_superattracting(SEED, 2)
    assert not r.failed and r.orbit_residual < 1e-10
    assert abs(r.a_star - solve_multiplier(SEED, 0).a_star) < 1e-7


def test_conjugate_seed_gives_conjugate_centre():
    xi = cmath.exp(2j * math.pi / 3)
    seed = xi * SEED
    r = find_superattracting(seed, 2)
    rc = find_superattracting(seed.conjugate(), 2)
    assert not r.failed and not rc.failed
    assert abs(r.a_star - xi * CENTRE) < 1e-8
    assert abs(rc.a_star - r.a_star.conjugate()) < 1e-9


def test_escaping_seed_is_not_reported_as_success():
    r = find_superattracting(3.5 + 3j, 1)
    assert r.failed or abs(r.a_star) > 2


@pytest.mark.parametrize(
    "seed, target",
    [(1.07398 + 0.5579j, 0), (SEED, 1.0), (SEED, 2j), (-3.22271 + 5.58189j, 0), (2.5, 0.1)],
)
def test_preconditions(seed, target):
    with pytest.raises(PreconditionError):
        solve_multiplier(seed, target)


def test_find_superattracting_precondition():
    with pytest.raises(PreconditionError):
        find_superattracting(1.07398 + 0.5579j, 1)
    with pytest.raises(ValueError):
        find_superattracting(SEED, 0)


def test_report_json_round_trip():
    r = solve_multiplier(SEED, 0.25)
    assert SolveReport.from_dict(r.to_dict()).to_dict() == r.to_dict()
    failed = SolveReport(SEED, 0.5, complex("nan"), float("inf"), 3, float("nan"), 2, True, "x")
    back = SolveReport.from_dict(failed.to_dict())
    assert back.failed and back.residual == float("inf") and math.isnan(back.orbit_residual)
    assert "NaN" not in failed.to_json()
