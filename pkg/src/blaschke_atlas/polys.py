"""Comparison families: the cubic M_b(z) = b z^2 (z - 1), the antiquadratic
p_c(z) = conj(z)^2 + c, its second iterate, and the quadratic z^2 + c."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .atlas import PlaneSpec, classify_parameter
from .errors import MatchError
from .orbit import Fate, FateTag, OrbitSpec, _run_scan
from .parallel import map_ordered


class Family(str, enum.Enum):
    CUBIC_M = "cubic"
    ANTIQUADRATIC = "antiquadratic"
    ANTIQUADRATIC_SQUARED = "antiquadratic-squared"
    QUADRATIC = "quadratic"

    @property
    def code(self) -> int:
        return _CODES[self]

    @property
    def free_critical_point(self) -> complex:
        return 2.0 / 3.0 + 0j if self is Family.CUBIC_M else 0j

    @property
    def holomorphic(self) -> bool:
        return self is not Family.ANTIQUADRATIC


_CODES = {
    Family.CUBIC_M: K.FAM_CUBIC,
    Family.ANTIQUADRATIC: K.FAM_ANTI,
    Family.ANTIQUADRATIC_SQUARED: K.FAM_ANTI_SQUARED,
    Family.QUADRATIC: K.FAM_QUADRATIC,
}


@dataclass(frozen=True)
class PolyFamilyMember:
    family: Family
    parameter: complex

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "parameter", complex(self.parameter))

    def escape_radius(self) -> float:
        return max(4.0, 2.0 * (abs(self.parameter) + 1.0))


def poly_eval(m: PolyFamilyMember, z: complex) -> complex:
    w, _ = K.step(m.family.code, m.parameter, complex(z))
    return w


def poly_jet(m: PolyFamilyMember, z: complex, n: int = 1) -> tuple[complex, complex, complex]:
    """f^n(z) with its Wirtinger derivatives d/dz and d/dzbar."""
    w, da, dc, _ = K.iterate_with_jet(m.family.code, m.parameter, complex(z), n)
    return w, da, dc


def poly_classify(m: PolyFamilyMember, spec: Optional[OrbitSpec] = None, z0: Optional[complex] = None) -> Fate:
    """Fate of the free critical orbit (or of z0 when given).

    For an antiholomorphic composite the reported multiplier is the
    d/dzbar derivative of the first return map.
    """
    spec = spec or OrbitSpec()
    start = m.family.free_critical_point if z0 is None else complex(z0)
    return _run_scan(m.family.code, m.parameter, start, spec, m.escape_radius(), 0.0, False)


def _exterior_cycle(a: complex, spec: OrbitSpec):
    rec = classify_parameter(a, spec)
    cyc = rec.cycle_plus
    if cyc is None or abs(a) <= 2.0:
        raise MatchError(f"no attracting cycle for c_+ at a={a}")
    if rec.swapping or rec.entered_disk or any(abs(z) <= 1.0 for z in cyc.points):
        raise MatchError(f"the attracting cycle at a={a} is not exterior to the closed disk")
    return cyc


def match_cubic_multiplier(a: complex, b_seed: complex, spec: Optional[OrbitSpec] = None,
                           tol: float = 1e-12, max_steps: int = 60) -> tuple[complex, float]:
    """Find b near b_seed with mult(M_b) = mult(B_a) for their attracting cycles.

    The cubic cycle is tracked by Newton polishing as b moves, and b is
    updated by two-variable Newton with a central-difference Jacobian.
    """
    spec = spec or OrbitSpec()
    target = _exterior_cycle(complex(a), spec)
    m0 = PolyFamilyMember(Family.CUBIC_M, b_seed)
    fate = poly_classify(m0, spec)
    if not fate.attracting:
        raise MatchError(f"no attracting cycle for M_b at b={b_seed}")
    if fate.cycle.period != target.period:
        raise MatchError(
            f"period mismatch: B_a has {target.period}, M_b has {fate.cycle.period}"
        )
    period = target.period
    goal = target.multiplier

    def mult(b, z):
        zp, res, ok = K.polish(K.FAM_CUBIC, b, z, period, 60)
        if not ok:
            return None, z
        _, da, _, _ = K.iterate_with_jet(K.FAM_CUBIC, b, zp, period)
        return complex(da), zp

    b = complex(b_seed)
    z = fate.cycle.points[0]
    lam, z = mult(b, z)
    best = abs(lam - goal)
    for _ in range(max_steps):
        if best < tol:
            break
        h = 1e-6 * max(1.0, abs(b))
        cols = []
        for d in (h, 1j * h):
            lp, _ = mult(b + d, z)
            lm, _ = mult(b - d, z)
            if lp is None or lm is None:
                raise MatchError("cycle lost while differentiating", best)
            cols.append((lp - lm) / (2 * h))
        jac = np.array([[cols[0].real, cols[1].real], [cols[0].imag, cols[1].imag]])
        r = lam - goal
        try:
            du, dv = np.linalg.solve(jac, [-r.real, -r.imag])
        except np.linalg.LinAlgError:
            raise MatchError("singular Jacobian", best) from None
        t = 1.0
        for _h in range(30):
            bn = b + t * complex(du, dv)
            ln, zn = mult(bn, z)
            if ln is not None and abs(ln - goal) < best:
                b, z, lam, best = bn, zn, ln, abs(ln - goal)
                break
            t *= 0.5
        else:
            break
    if best > 1e-8:
        raise MatchError(f"no convergence (residual {best:.3g})", best)
    return b, best


def coarse_seed(a: complex, window: PlaneSpec, spec: Optional[OrbitSpec] = None) -> complex:
    """Scan a b-plane window for the parameter whose attracting cubic cycle has
    the period of B_a's exterior cycle and the closest multiplier."""
    spec = spec or OrbitSpec()
    target = _exterior_cycle(complex(a), spec)
    best, best_b = np.inf, None
    for b in window.pixel_centers().ravel():
        f = poly_classify(PolyFamilyMember(Family.CUBIC_M, complex(b)), window.orbit_spec)
        if f.attracting and f.cycle.period == target.period and abs(f.cycle.points[0]) > 1e-8:
            d = abs(f.cycle.multiplier - target.multiplier)
            if d < best:
                best, best_b = d, complex(b)
    if best_b is None:
        raise MatchError("no cubic parameter with a matching period in the window")
    return best_b


class PolyClass(str, enum.Enum):
    ESCAPE = "escape"
    ZERO = "zero"  # critical orbit attracted to the superattracting fixed point 0 of M_b
    BOUNDED = "bounded"
    UNDECIDED = "undecided"


@dataclass
class PolyGrid:
    window: PlaneSpec
    family: Family
    fates: list  # row-major Fate

    @property
    def shape(self) -> tuple[int, int]:
        return self.window.shape

    def pixel_class(self, fate: Fate) -> PolyClass:
        if fate.tag is FateTag.ESCAPE_INF:
            return PolyClass.ESCAPE
        if fate.tag is FateTag.CYCLE:
            c = fate.cycle
            if self.family is Family.CUBIC_M and c.period == 1 and abs(c.points[0]) < 1e-8:
                return PolyClass.ZERO
            return PolyClass.BOUNDED
        return PolyClass.UNDECIDED


def poly_plane_grid(family, window: PlaneSpec, workers: Optional[int] = None) -> PolyGrid:
    """Fate of the free critical orbit for every parameter of a window."""
    family = Family(family)
    spec = window.orbit_spec

    def do_row(i):
        return [poly_classify(PolyFamilyMember(family, complex(c)), spec) for c in window.row(i)]

    rows = map_ordered(do_row, window.resolution[1], workers)
    return PolyGrid(window, family, [f for row in rows for f in row])
