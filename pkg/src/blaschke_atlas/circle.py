"""The circle map B_a restricted to the unit circle, its lift, and the
semiconjugacy H to the doubling map (valid for |a| >= 2)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import LiftUndefinedError
from .family import BlaschkeParam, _param, critical_points
from .orbit import FateTag, OrbitSpec, classify_fate

MIN_GRID = 256


def circle_angle(p: BlaschkeParam, x: np.ndarray) -> np.ndarray:
    """arg(B_a(e^{2 pi i x})) / 2pi, reduced to [0, 1)."""
    a = p.a
    z = np.exp(2j * np.pi * np.asarray(x, dtype=float))
    w = z**3 * (z - a) / (1.0 - np.conj(a) * z)
    return np.mod(np.angle(w) / (2 * np.pi), 1.0)


@dataclass(frozen=True)
class LiftTable:
    """Samples of a lift F of the degree-2 circle map on [0, 1], F(0) in [0, 1)."""

    a: complex
    xs: np.ndarray
    values: np.ndarray

    @property
    def base_anchor(self) -> float:
        return float(self.values[0])

    @property
    def winding(self) -> float:
        return float(self.values[-1] - self.values[0])

    def __call__(self, x) -> np.ndarray:
        """Evaluate F exactly at arbitrary real x.

        The angle is recomputed from the map; the table only picks the integer
        branch, so no interpolation error enters the value.
        """
        x = np.asarray(x, dtype=float)
        whole = np.floor(x)
        frac = x - whole
        guess = np.interp(frac, self.xs, self.values)
        theta = circle_angle(BlaschkeParam(self.a), frac)
        return theta + np.round(guess - theta) + 2.0 * whole


def build_lift(p, grid_size: int = 1024) -> LiftTable:
    p = _param(p)
    if p.modulus < 2.0:
        raise LiftUndefinedError("lift undefined below modulus 2")
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be at least {MIN_GRID}")
    xs = np.arange(grid_size + 1) / grid_size
    theta = circle_angle(p, xs)
    values = np.empty_like(theta)
    values[0] = theta[0]
    for k in range(1, len(xs)):
        predicted = values[k - 1] if k == 1 else 2 * values[k - 1] - values[k - 2]
        values[k] = theta[k] + np.round(predicted - theta[k])
    if abs((values[-1] - values[0]) - 2.0) > 1e-9:
        raise LiftUndefinedError(
            f"lift winding {values[-1] - values[0]:.6g} != 2; increase grid_size"
        )
    values[-1] = values[0] + 2.0
    return LiftTable(p.a, xs, values)


@dataclass(frozen=True)
class SemiconjugacySample:
    depth: int
    xs: np.ndarray
    values: np.ndarray
    defect: float
    offset: float  # integer shift fixing H(0) in [0, 1)

    def is_monotone(self, slack: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.values) >= -slack))


def _h_series(lift: LiftTable, x: np.ndarray, depth: int) -> np.ndarray:
    """F^depth(x) / 2^depth computed as x + sum_k phi(y_k) / 2^{k+1}.

    phi(y) = F(y) - 2y is 1-periodic, so the orbit is carried modulo 1 and the
    sum never sees the 2^depth growth of the raw iterate.
    """
    x = np.asarray(x, dtype=float)
    whole = np.floor(x)
    y = x - whole
    total = np.zeros_like(y)
    weight = 0.5
    for _ in range(depth):
        fy = lift(y)
        total += (fy - 2.0 * y) * weight
        y = np.mod(fy, 1.0)
        weight *= 0.5
    return x + total


def semiconjugacy(p, lift: LiftTable, depth: int = 40, grid_size: Optional[int] = None) -> SemiconjugacySample:
    """H_n = F^n / 2^n on a uniform grid, with the defect of H(F(x)) = 2H(x) mod 1."""
    p = _param(p)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if complex(p.a) != complex(lift.a):
        raise ValueError("lift was built for a different parameter")
    n = grid_size or (len(lift.xs) - 1)
    xs = np.arange(n + 1) / n
    h = _h_series(lift, xs, depth)
    offset = -math.floor(h[0])
    h = h + offset
    hf = _h_series(lift, lift(xs), depth) + offset
    gap = hf - 2.0 * h
    defect = float(np.max(np.abs(gap - np.round(gap))))
    return SemiconjugacySample(depth, xs, h, defect, float(offset))


def h_at(lift: LiftTable, sample: SemiconjugacySample, x) -> np.ndarray:
    """H_n at arbitrary real x, consistent with a computed sample."""
    return _h_series(lift, np.asarray(x, dtype=float), sample.depth) + sample.offset


@dataclass(frozen=True)
class TongueVerdict:
    member: bool
    undecided: bool = False

    def __bool__(self) -> bool:
        return self.member


def tongue_membership(p, spec: Optional[OrbitSpec] = None) -> TongueVerdict:
    """True iff c_+ is attracted to an attracting cycle lying on the circle."""
    p = _param(p)
    if p.modulus < 2.0:
        raise LiftUndefinedError("tongues are defined for |a| >= 2 only")
    fate = classify_fate(p, critical_points(p).c_plus, spec)
    if fate.tag is FateTag.UNDECIDED:
        return TongueVerdict(False, undecided=True)
    return TongueVerdict(fate.attracting and fate.cycle.on_circle)


def dump_csv(path, lift: LiftTable, sample: SemiconjugacySample) -> None:
    """Write (x, F(x), H_n(x)) rows on the sample grid."""
    path = Path(path)
    fx = lift(sample.xs)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "F", "H"])
            for x, f, h in zip(sample.xs, fx, sample.values):
                w.writerow([repr(float(x)), repr(float(f)), repr(float(h))])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
