"""Orbit classification: escape to 0 or infinity, attracting cycles, multipliers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import CycleNotClosedError
from .family import INFINITY, BlaschkeParam, _param, as_ext, derivative, reflect

PARABOLIC_BAND = 1e-3
MAX_PERIOD = 512


@dataclass(frozen=True)
class OrbitSpec:
    """Numeric budget for following one orbit.

    The escape radius is escape_factor * (|a| + 1); since |B_a(z)| > 2|z| beyond
    it, crossing it (or its reflection 1/R) decides the fate.
    """

    max_iter: int = 100_000
    eps_cycle: float = 1e-9
    eps_circle: float = 1e-6
    escape_factor: float = 2.0
    warmup: int = 200
    max_period: int = MAX_PERIOD
    parabolic_band: float = PARABOLIC_BAND

    def __post_init__(self):
        if self.max_iter <= 0 or self.warmup < 0 or self.max_period <= 0:
            raise ValueError("iteration budgets must be positive")
        if self.eps_cycle <= 0 or self.eps_circle <= 0 or self.parabolic_band <= 0:
            raise ValueError("tolerances must be positive")
        if self.escape_factor <= 1:
            raise ValueError("escape_factor must exceed 1")

    @classmethod
    def for_grids(cls, **overrides) -> "OrbitSpec":
        return cls(**{"max_iter": 5_000, **overrides})

    def escape_radius(self, a: complex) -> float:
        return self.escape_factor * (abs(a) + 1.0)

    def with_(self, **changes) -> "OrbitSpec":
        return replace(self, **changes)


class FateTag(str, enum.Enum):
    ESCAPE_ZERO = "escape-zero"
    ESCAPE_INF = "escape-inf"
    CYCLE = "cycle"
    UNDECIDED = "undecided"


class CycleKind(str, enum.Enum):
    ATTRACTING = "attracting"
    PARABOLIC_SUSPECT = "parabolic-suspect"
    REPELLING = "repelling"


@dataclass(frozen=True)
class CycleRecord:
    period: int
    points: tuple
    multiplier: complex
    on_circle: bool
    self_symmetric: bool
    half_period: Optional[int]
    disk_pattern: str  # '1' where the point lies inside the unit disk
    kind: CycleKind

    @property
    def attracting(self) -> bool:
        return self.kind is CycleKind.ATTRACTING

    def contains(self, z: complex, tol: float) -> bool:
        return any(abs(z - w) < tol * max(1.0, abs(w)) for w in self.points)

    def phase_of(self, z: complex) -> int:
        """Index of the cycle point closest to z."""
        return int(np.argmin([abs(z - w) for w in self.points]))

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "points": [[w.real, w.imag] for w in self.points],
            "multiplier": [self.multiplier.real, self.multiplier.imag],
            "on_circle": self.on_circle,
            "self_symmetric": self.self_symmetric,
            "half_period": self.half_period,
            "disk_pattern": self.disk_pattern,
            "kind": self.kind.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CycleRecord":
        return cls(
            period=int(d["period"]),
            points=tuple(complex(x, y) for x, y in d["points"]),
            multiplier=complex(*d["multiplier"]),
            on_circle=bool(d["on_circle"]),
            self_symmetric=bool(d["self_symmetric"]),
            half_period=d["half_period"],
            disk_pattern=d["disk_pattern"],
            kind=CycleKind(d["kind"]),
        )


@dataclass(frozen=True)
class Fate:
    tag: FateTag
    iterations_used: int
    entered_disk: int = 0
    left_disk: int = 0
    cycle: Optional[CycleRecord] = None

    @property
    def attracting(self) -> bool:
        return self.cycle is not None and self.cycle.attracting

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "iterations_used": self.iterations_used,
            "entered_disk": self.entered_disk,
            "left_disk": self.left_disk,
            "cycle": None if self.cycle is None else self.cycle.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Fate":
        return cls(
            tag=FateTag(d["tag"]),
            iterations_used=int(d["iterations_used"]),
            entered_disk=int(d["entered_disk"]),
            left_disk=int(d["left_disk"]),
            cycle=None if d["cycle"] is None else CycleRecord.from_dict(d["cycle"]),
        )


_TAGS = {
    K.TAG_UNDECIDED: FateTag.UNDECIDED,
    K.TAG_ESCAPE_ZERO: FateTag.ESCAPE_ZERO,
    K.TAG_ESCAPE_INF: FateTag.ESCAPE_INF,
    K.TAG_CYCLE: FateTag.CYCLE,
}


def cycle_kind(multiplier: complex, band: float = PARABOLIC_BAND) -> CycleKind:
    m = abs(multiplier)
    if m < 1.0 - band:
        return CycleKind.ATTRACTING
    if m <= 1.0 + band:
        return CycleKind.PARABOLIC_SUSPECT
    return CycleKind.REPELLING


def cycle_symmetry(points: Sequence[complex], eps: float) -> tuple[bool, Optional[int]]:
    """Whether the cycle is invariant under reflection, and its half period.

    The half period is the least k >= 1 with reflect(z_k) close to z_0.
    """
    if not points:
        raise ValueError("empty cycle")
    pts = [complex(z) for z in points]

    def close(u, v):
        return abs(u - v) < eps * max(1.0, abs(v))

    mirrored = [reflect(z) for z in pts]
    self_symmetric = all(
        m is not INFINITY and any(close(m, w) for w in pts) for m in mirrored
    )
    half = None
    for k in range(1, len(pts)):
        m = mirrored[k]
        if m is not INFINITY and close(m, pts[0]):
            half = k
            break
    return self_symmetric, half


def cycle_multiplier(p, points: Sequence[complex], eps: float = 1e-9) -> complex:
    """Product of B_a' along a cycle, after checking the cycle closes."""
    p = _param(p)
    pts = [complex(z) for z in points]
    if not pts:
        raise ValueError("empty cycle")
    a = p.a
    fam = K.FAM_DEGENERATE if p.degenerate else K.FAM_BLASCHKE
    for i, z in enumerate(pts):
        w, pole = K.step(fam, a, z)
        nxt = pts[(i + 1) % len(pts)]
        if pole or abs(w - nxt) > eps * max(1.0, abs(nxt)):
            raise CycleNotClosedError(f"cycle does not close at index {i}")
    lam = 1.0 + 0j
    for z in pts:
        lam *= derivative(p, z)
    return lam


def _minimal_period(fam: int, a: complex, z: complex, period: int, eps: float) -> int:
    for d in range(1, period):
        if period % d:
            continue
        w, _, _, pole = K.iterate_with_jet(fam, a, z, d)
        if not pole and abs(w - z) < eps * max(1.0, abs(z)):
            return d
    return period


def build_cycle(fam: int, a: complex, z: complex, period: int, spec: OrbitSpec) -> CycleRecord:
    """Polish a near-return into a cycle record (points, multiplier, symmetry)."""
    zp, res, ok = K.polish(fam, a, complex(z), period, 60)
    if ok and abs(zp - z) < 1e-4 * max(1.0, abs(z)):
        z = zp
    period = _minimal_period(fam, a, z, period, spec.eps_cycle)
    pts = [z]
    for _ in range(period - 1):
        w, _ = K.step(fam, a, pts[-1])
        pts.append(w)
    _, da, dc, _ = K.iterate_with_jet(fam, a, z, period)
    lam = complex(dc if da == 0 and dc != 0 else da)
    on_circle = all(abs(abs(w) - 1.0) < spec.eps_circle for w in pts)
    if fam in (K.FAM_BLASCHKE, K.FAM_DEGENERATE):
        sym, half = cycle_symmetry(pts, spec.eps_cycle)
    else:
        sym, half = False, None
    if half is not None and period != 2 * half:
        half = None
    pattern = "".join("1" if abs(w) < 1.0 - spec.eps_circle else "0" for w in pts)
    return CycleRecord(
        period=period,
        points=tuple(pts),
        multiplier=lam,
        on_circle=on_circle,
        self_symmetric=sym,
        half_period=half,
        disk_pattern=pattern,
        kind=cycle_kind(lam, spec.parabolic_band),
    )


def _on_circle_start(z: complex) -> bool:
    return abs(abs(z) - 1.0) < 1e-12


def classify_fate(p, z0, spec: Optional[OrbitSpec] = None, *, project: Optional[bool] = None) -> Fate:
    """Follow the orbit of z0 under B_a and report where it goes.

    Orbits that start on the unit circle are renormalised onto it at every
    step (the circle is invariant), unless ``project`` says otherwise.
    """
    p = _param(p)
    spec = spec or OrbitSpec()
    z0 = as_ext(z0)
    if z0 is INFINITY:
        return Fate(FateTag.ESCAPE_INF, 0)
    if project is None:
        project = _on_circle_start(z0)
    fam = K.FAM_DEGENERATE if p.degenerate else K.FAM_BLASCHKE
    R = spec.escape_radius(p.a)
    return _run_scan(fam, p.a, z0, spec, R, 1.0 / R, project)


def _run_scan(fam, a, z0, spec, r_out, r_in, project) -> Fate:
    tag, n, entered, left, period, zl = K.scan(
        fam, complex(a), complex(z0), spec.max_iter, spec.eps_cycle, spec.eps_circle,
        r_out, r_in, spec.warmup, project, spec.max_period,
    )
    cycle = None
    if tag == K.TAG_CYCLE:
        cycle = build_cycle(fam, complex(a), zl, int(period), spec)
    return Fate(_TAGS[int(tag)], int(n), int(entered), int(left), cycle)


def mirror_fate(p, fate: Fate, spec: Optional[OrbitSpec] = None) -> Fate:
    """The fate of the reflected start point, derived from the symmetry B = I o B o I.

    The mirrored cycle's points are reflected and its multiplier recomputed
    from them (so conjugacy of the two multipliers is checked, not assumed).
    """
    p = _param(p)
    spec = spec or OrbitSpec()
    swap = {FateTag.ESCAPE_ZERO: FateTag.ESCAPE_INF, FateTag.ESCAPE_INF: FateTag.ESCAPE_ZERO}
    tag = swap.get(fate.tag, fate.tag)
    cycle = None
    if fate.cycle is not None:
        c = fate.cycle
        pts = tuple(reflect(z) for z in c.points)
        lam = cycle_multiplier(p, pts, eps=max(spec.eps_cycle, 1e-9))
        cycle = replace(
            c,
            points=pts,
            multiplier=lam,
            disk_pattern="".join("1" if abs(w) < 1.0 - spec.eps_circle else "0" for w in pts),
            kind=cycle_kind(lam, spec.parabolic_band),
        )
    return Fate(tag, fate.iterations_used, fate.left_disk, fate.entered_disk, cycle)


def scan_points(p, zs: np.ndarray, spec: OrbitSpec) -> dict:
    """Raw fates for an array of start points (no cycle polishing).

    Returns arrays ``tag``, ``iters``, ``entered``, ``left``, ``period``, ``z``.
    """
    p = _param(p)
    zs = np.ascontiguousarray(zs, dtype=np.complex128).ravel()
    n = zs.shape[0]
    fam = K.FAM_DEGENERATE if p.degenerate else K.FAM_BLASCHKE
    R = spec.escape_radius(p.a)
    out = {
        "tag": np.zeros(n, np.int64),
        "iters": np.zeros(n, np.int64),
        "entered": np.zeros(n, np.int64),
        "left": np.zeros(n, np.int64),
        "period": np.zeros(n, np.int64),
        "z": np.zeros(n, np.complex128),
    }
    K.scan_many(
        fam, np.full(n, p.a, np.complex128), zs, spec.max_iter, spec.eps_cycle, spec.eps_circle,
        np.full(n, R), np.full(n, 1.0 / R), spec.warmup, False, spec.max_period,
        out["tag"], out["iters"], out["entered"], out["left"], out["period"], out["z"],
    )
    return out
