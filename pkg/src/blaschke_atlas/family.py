"""The Blaschke family B_a(z) = z^3 (z - a) / (1 - conj(a) z) on the Riemann sphere."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateParameterError, PoleError

DEGENERATE_TOL = 1e-12
POLE_TOL = 1e-300
XI = cmath.exp(2j * math.pi / 3)


class _PointAtInfinity:
    """The point at infinity of the Riemann sphere (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_PointAtInfinity, ())


INFINITY = _PointAtInfinity()
ExtComplex = Union[complex, _PointAtInfinity]


def is_infinity(z) -> bool:
    return z is INFINITY


def as_ext(z) -> ExtComplex:
    """Coerce a number to a sphere point, rejecting NaN."""
    if z is INFINITY:
        return z
    z = complex(z)
    if math.isnan(z.real) or math.isnan(z.imag):
        raise ValueError("NaN is not a point of the sphere")
    if math.isinf(z.real) or math.isinf(z.imag):
        return INFINITY
    return z


@dataclass(frozen=True)
class BlaschkeParam:
    """A member of the family B_{a,t}, stored in normalized form (t = 0).

    B_{a,t} is conjugate to B_{a e^{2 pi i t / 3}, 0} by a rotation, so the
    rotation is folded into a once at construction.
    """

    a: complex
    t: float = 0.0
    degenerate: bool = field(init=False)

    def __post_init__(self):
        a = complex(self.a)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError(f"parameter must be finite, got {a!r}")
        t = float(self.t)
        if t:
            a = a * cmath.exp(2j * math.pi * t / 3)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "t", 0.0)
        object.__setattr__(self, "degenerate", abs(abs(a) - 1.0) < DEGENERATE_TOL)

    @property
    def modulus(self) -> float:
        return abs(self.a)

    @property
    def zero(self) -> complex:
        return self.a

    @property
    def pole(self) -> ExtComplex:
        return INFINITY if self.a == 0 else 1.0 / self.a.conjugate()


def _param(p) -> BlaschkeParam:
    return p if isinstance(p, BlaschkeParam) else BlaschkeParam(p)


@dataclass(frozen=True)
class CriticalData:
    c_plus: complex
    c_minus: complex
    zero: complex
    pole: complex


def evaluate(p, z) -> ExtComplex:
    """B_a(z) on the sphere. Degenerate parameters (|a| = 1) use -a z^3."""
    p = _param(p)
    z = as_ext(z)
    if z is INFINITY:
        return INFINITY
    a = p.a
    if p.degenerate:
        w = -a * z**3
    else:
        den = 1.0 - a.conjugate() * z
        if a != 0 and abs(z - p.pole) < POLE_TOL * max(1.0, abs(p.pole)):
            return INFINITY
        if den == 0:
            return INFINITY
        w = z**3 * (z - a) / den
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return INFINITY
    return w


def derivative(p, z: complex) -> complex:
    """dB_a/dz by the quotient rule."""
    p = _param(p)
    if z is INFINITY:
        raise PoleError("derivative at pole")
    z = complex(z)
    a = p.a
    if p.degenerate:
        return -3.0 * a * z * z
    ac = a.conjugate()
    den = 1.0 - ac * z
    if den == 0 or (a != 0 and abs(z - p.pole) < POLE_TOL * max(1.0, abs(p.pole))):
        raise PoleError("derivative at pole")
    num = -3.0 * ac * z * z + (4.0 + 2.0 * abs(a) ** 2) * z - 3.0 * a
    return z * z * num / (den * den)


def critical_points(p) -> CriticalData:
    """The two free critical points c_+ (|c_+| >= 1) and c_- (|c_-| <= 1)."""
    p = _param(p)
    if p.degenerate:
        raise DegenerateParameterError("degenerate parameter")
    a = p.a
    r2 = abs(a) ** 2
    if r2 == 0.0:
        # c_+ escapes to infinity and c_- collapses onto 0 as a -> 0
        return CriticalData(INFINITY, 0j, 0j, INFINITY)
    radicand = (r2 - 4.0) * (r2 - 1.0)
    root = math.sqrt(radicand) if radicand >= 0 else 1j * math.sqrt(-radicand)
    scale = a / (3.0 * r2)
    c_plus = scale * (2.0 + r2 + root)
    c_minus = scale * (2.0 + r2 - root)
    return CriticalData(c_plus, c_minus, a, 1.0 / a.conjugate())


def critical_points_numeric(p) -> tuple[complex, complex]:
    """Roots of the derivative numerator -3 conj(a) z^2 + (4 + 2|a|^2) z - 3a.

    Independent of the closed form; sorted so the first root has the larger modulus.
    """
    p = _param(p)
    a = p.a
    roots = np.roots([-3.0 * a.conjugate(), 4.0 + 2.0 * abs(a) ** 2, -3.0 * a])
    roots = sorted((complex(r) for r in roots), key=abs, reverse=True)
    return roots[0], roots[1]


def reflect(z) -> ExtComplex:
    """Reflection 1/conj(z) in the unit circle."""
    z = as_ext(z)
    if z is INFINITY:
        return 0j
    if z == 0:
        return INFINITY
    return 1.0 / z.conjugate()


def rotate_param(a: complex, k: int = 1) -> complex:
    """a -> xi^k a with xi a primitive third root of unity."""
    return complex(a) * XI**k
