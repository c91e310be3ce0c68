"""The multiplier map on disjoint hyperbolic components with |a| > 2:
evaluation, inversion by continuation, and superattracting centres.

B_a depends on conj(a), so every solve here is a genuine two-real-variable
problem with a finite-difference Jacobian.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .errors import OutsideHyperbolicComponentError, PreconditionError
from .family import BlaschkeParam, critical_points
from .orbit import CycleRecord, OrbitSpec, classify_fate

HOMOTOPY_STEPS = 32
MAX_CONDITION = 1e8
FINAL_TOL = 1e-12


@dataclass
class SolveReport:
    a_star: complex
    target: complex
    achieved: complex
    residual: float
    steps: int
    jacobian_conditioning: float
    period: int = 0
    failed: bool = False
    message: str = ""
    orbit_residual: float = float("nan")

    def to_dict(self) -> dict:
        """Plain JSON types; non-finite numbers become null."""
        d = asdict(self)
        for key in ("a_star", "target", "achieved"):
            v = complex(d[key])
            d[key] = [_finite(v.real), _finite(v.imag)]
        for key in ("residual", "jacobian_conditioning", "orbit_residual"):
            d[key] = _finite(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict) -> "SolveReport":
        d = dict(d)
        for key in ("a_star", "target", "achieved"):
            d[key] = complex(*(_unfinite(x) for x in d[key]))
        for key in ("residual", "jacobian_conditioning", "orbit_residual"):
            d[key] = _unfinite(d[key], math.inf if key == "residual" else math.nan)
        return cls(**d)


def _finite(x: float) -> Optional[float]:
    return float(x) if math.isfinite(x) else None


def _unfinite(x, missing: float = math.nan) -> float:
    return missing if x is None else float(x)


def _attracting_cycle(a: complex, spec: OrbitSpec) -> CycleRecord:
    p = BlaschkeParam(a)
    if p.degenerate or p.modulus < 1.0:
        raise OutsideHyperbolicComponentError("outside hyperbolic component")
    fate = classify_fate(p, critical_points(p).c_plus, spec)
    if not fate.attracting:
        raise OutsideHyperbolicComponentError("outside hyperbolic component")
    return fate.cycle


def multiplier_at(a: complex, spec: Optional[OrbitSpec] = None) -> complex:
    """Multiplier of the attracting cycle that attracts c_+."""
    return _attracting_cycle(complex(a), spec or OrbitSpec()).multiplier


def _tracked(a: complex, z: complex, period: int):
    """Cycle of B_a continued from a nearby point z: (multiplier, point) or None."""
    zp, res, ok = K.polish(K.FAM_BLASCHKE, a, z, period, 60)
    if not ok:
        return None
    for d in range(1, period):
        if period % d == 0:
            w, _, _, _ = K.iterate_with_jet(K.FAM_BLASCHKE, a, zp, d)
            if abs(w - zp) < 1e-9 * max(1.0, abs(zp)):
                return None  # collapsed onto a lower period
    _, da, _, _ = K.iterate_with_jet(K.FAM_BLASCHKE, a, zp, period)
    return complex(da), zp


def _fd_jacobian(fn, a: complex):
    h = 1e-6 * max(1.0, abs(a))
    cols = []
    for d in (h, 1j * h):
        fp, fm = fn(a + d), fn(a - d)
        if fp is None or fm is None:
            return None
        cols.append((fp - fm) / (2 * h))
    return np.array([[cols[0].real, cols[1].real], [cols[0].imag, cols[1].imag]])


class _Failure(Exception):
    def __init__(self, message, cond=float("nan"), a=None):
        super().__init__(message)
        self.cond = cond
        self.a = a  # best iterate reached, when there is one


def _newton(fn, a: complex, goal: complex, tol: float, max_steps: int = 40):
    """Damped Newton for fn(a) = goal in (Re a, Im a). Returns (a, value, steps, cond)."""
    val = fn(a)
    if val is None:
        raise _Failure("cycle lost at the starting point")
    res = abs(val - goal)
    cond = 1.0
    steps = 0
    while res > tol and steps < max_steps:
        jac = _fd_jacobian(fn, a)
        if jac is None:
            raise _Failure("cycle lost while differentiating", cond, a)
        cond = float(np.linalg.cond(jac))
        if not math.isfinite(cond) or cond > MAX_CONDITION:
            raise _Failure(f"Jacobian conditioning {cond:.3g} too large", cond, a)
        r = val - goal
        du, dv = np.linalg.solve(jac, [-r.real, -r.imag])
        t = 1.0
        for _ in range(30):
            an = a + t * complex(du, dv)
            vn = fn(an)
            if vn is not None and abs(vn - goal) < res:
                a, val, res = an, vn, abs(vn - goal)
                break
            t *= 0.5
        else:
            raise _Failure(f"residual stagnated at {res:.3g}", cond, a)
        steps += 1
    if res > tol:
        raise _Failure(f"no convergence after {steps} steps (residual {res:.3g})", cond, a)
    return a, val, steps, cond


def solve_multiplier(a_seed: complex, target: complex, spec: Optional[OrbitSpec] = None,
                     homotopy_steps: int = HOMOTOPY_STEPS) -> SolveReport:
    """Find a* in the seed's component whose attracting cycle has multiplier target.

    Continuation runs along the segment from the seed's multiplier to the
    target; the cycle period is held fixed and any step that loses or
    changes the cycle is rejected.
    """
    spec = spec or OrbitSpec()
    a_seed, target = complex(a_seed), complex(target)
    if abs(a_seed) <= 2.0:
        raise PreconditionError("the multiplier map is studied for |a| > 2 only")
    if abs(target) >= 1.0:
        raise PreconditionError("target multiplier must lie in the open unit disk")
    cyc = _attracting_cycle(a_seed, spec)
    if cyc.self_symmetric or cyc.on_circle:
        raise PreconditionError("seed is not in a disjoint component")
    period = cyc.period
    lam0 = cyc.multiplier
    if abs(lam0 - target) <= FINAL_TOL:
        return SolveReport(a_seed, target, lam0, abs(lam0 - target), 0, 1.0, period)

    state = {"z": cyc.points[0]}

    def fn(a):
        out = _tracked(a, state["z"], period)
        return None if out is None else out[0]

    a = a_seed
    total = 0
    cond = 1.0
    n = max(1, min(homotopy_steps, math.ceil(abs(target - lam0) / 0.05)))
    try:
        for j in range(1, n + 1):
            goal = lam0 + (target - lam0) * j / n
            a, _, steps, c = _newton(fn, a, goal, FINAL_TOL if j == n else 1e-9)
            total += steps
            cond = max(cond, c)
            state["z"] = _tracked(a, state["z"], period)[1]
    except _Failure as exc:
        return SolveReport(a, target, fn(a) or complex("nan"), float("inf"), total,
                           exc.cond, period, failed=True, message=str(exc))
    return _verify(a, target, period, total, cond, spec)


def _verify(a: complex, target: complex, period: int, steps: int, cond: float,
            spec: OrbitSpec, orbit_residual: float = float("nan")) -> SolveReport:
    """Re-derive the multiplier at a from the critical orbit itself."""
    if abs(a) <= 2.0:
        return SolveReport(a, target, complex("nan"), float("inf"), steps, cond, period,
                           failed=True, message="solution left the region |a| > 2",
                           orbit_residual=orbit_residual)
    try:
        cyc = _attracting_cycle(a, spec)
    except OutsideHyperbolicComponentError:
        return SolveReport(a, target, complex("nan"), float("inf"), steps, cond, period,
                           failed=True, message="c_+ is not attracted at the solution",
                           orbit_residual=orbit_residual)
    if cyc.period != period:
        return SolveReport(a, target, cyc.multiplier, abs(cyc.multiplier - target), steps, cond,
                           period, failed=True, message=f"period changed to {cyc.period}",
                           orbit_residual=orbit_residual)
    res = abs(cyc.multiplier - target)
    return SolveReport(a, target, cyc.multiplier, res, steps, cond, period,
                       failed=res >= 1e-8, message="" if res < 1e-8 else "residual above 1e-8",
                       orbit_residual=orbit_residual)


def _center_residual(a: complex, period: int) -> Optional[complex]:
    p = BlaschkeParam(a)
    c = critical_points(p).c_plus
    w, _, _, pole = K.iterate_with_jet(K.FAM_BLASCHKE, p.a, c, period)
    return None if pole else w - c


def find_superattracting(a_seed: complex, period: int, spec: Optional[OrbitSpec] = None) -> SolveReport:
    """Solve B_a^p(c_+(a)) = c_+(a) for a near the seed.

    When the seed's own cycle has period p the start point is first moved
    to the lambda = 0 solution of the multiplier map, which keeps Newton in
    the seed's component.
    """
    spec = spec or OrbitSpec()
    a_seed = complex(a_seed)
    if abs(a_seed) <= 2.0:
        raise PreconditionError("the multiplier map is studied for |a| > 2 only")
    if period < 1:
        raise ValueError("period must be positive")
    a = a_seed
    steps = 0
    cond = 1.0
    try:
        cyc = _attracting_cycle(a_seed, spec)
    except OutsideHyperbolicComponentError:
        cyc = None
    if cyc is not None and cyc.period == period and not (cyc.self_symmetric or cyc.on_circle):
        pre = solve_multiplier(a_seed, 0j, spec)
        if not pre.failed:
            a, steps, cond = pre.a_star, pre.steps, pre.jacobian_conditioning
    try:
        a, g, more, c = _newton(lambda x: _center_residual(x, period), a, 0j, 1e-14)
    except _Failure as exc:
        # stagnation just above the target tolerance is round-off, not failure
        a = exc.a if exc.a is not None else a
        g = _center_residual(a, period)
        if g is None or abs(g) > 1e-10:
            return SolveReport(a, 0j, complex("nan"), float("inf"), steps, exc.cond, period,
                               failed=True, message=str(exc))
        more, c = 0, exc.cond
    return _verify(a, 0j, period, steps + more, max(cond, c), spec, orbit_residual=abs(g))
