"""Per-parameter classification of the Blaschke family and grids over windows
of the parameter and dynamical planes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels as K
from .family import BlaschkeParam, critical_points
from .orbit import CycleRecord, Fate, FateTag, OrbitSpec, classify_fate, mirror_fate, scan_points
from .parallel import map_ordered

SAME_CYCLE_TOL = 1e-6
CAPTURE_LAG_PERIODS = 3


class Label(str, enum.Enum):
    DISK_ESCAPE = "disk-escape"
    DEGENERATE = "degenerate"
    NON_HYPERBOLIC_CIRCLE = "non-hyperbolic-circle"
    TONGUE_ADJACENT = "tongue-adjacent"
    BITRANSITIVE = "bitransitive"
    CAPTURE = "capture"
    DISJOINT = "disjoint"
    ESCAPING_IMMEDIATE = "escaping-immediate"
    ESCAPING_DELAYED = "escaping-delayed"
    ESCAPING_ZERO = "escaping-zero"
    SWAPPING_BITRANSITIVE = "swapping-bitransitive"
    SWAPPING_DISJOINT = "swapping-disjoint"
    UNDECIDED = "undecided"


ATTRACTING_LABELS = frozenset({
    Label.TONGUE_ADJACENT, Label.BITRANSITIVE, Label.CAPTURE, Label.DISJOINT,
    Label.SWAPPING_BITRANSITIVE, Label.SWAPPING_DISJOINT,
})
SWAPPING_LABELS = frozenset({Label.SWAPPING_BITRANSITIVE, Label.SWAPPING_DISJOINT})


class Connectivity(str, enum.Enum):
    CIRCLE_JULIA = "circle-julia"
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ParamClassRecord:
    a: complex
    label: Label
    cycle_plus: Optional[CycleRecord] = None
    cycle_minus: Optional[CycleRecord] = None
    swapping: bool = False
    connectivity: Connectivity = Connectivity.UNKNOWN
    iterations: int = 0
    entered_disk: int = 0
    capture_suspect: bool = False

    @property
    def period(self) -> Optional[int]:
        return None if self.cycle_plus is None else self.cycle_plus.period

    @property
    def multiplier(self) -> Optional[complex]:
        return None if self.cycle_plus is None else self.cycle_plus.multiplier

    def to_dict(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "label": self.label.value,
            "cycle_plus": None if self.cycle_plus is None else self.cycle_plus.to_dict(),
            "cycle_minus": None if self.cycle_minus is None else self.cycle_minus.to_dict(),
            "swapping": self.swapping,
            "connectivity": self.connectivity.value,
            "iterations": self.iterations,
            "entered_disk": self.entered_disk,
            "capture_suspect": self.capture_suspect,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParamClassRecord":
        return cls(
            a=complex(*d["a"]),
            label=Label(d["label"]),
            cycle_plus=None if d["cycle_plus"] is None else CycleRecord.from_dict(d["cycle_plus"]),
            cycle_minus=None if d["cycle_minus"] is None else CycleRecord.from_dict(d["cycle_minus"]),
            swapping=bool(d["swapping"]),
            connectivity=Connectivity(d["connectivity"]),
            iterations=int(d["iterations"]),
            entered_disk=int(d["entered_disk"]),
            capture_suspect=bool(d.get("capture_suspect", False)),
        )


def connectivity_verdict(record: ParamClassRecord) -> Connectivity:
    """Julia-set connectivity from c_+ membership in the immediate basin of infinity.

    "Escapes without ever entering the closed disk" stands in for c_+ in A*(inf).
    """
    r = abs(record.a)
    if record.label is Label.DISK_ESCAPE:
        return Connectivity.CIRCLE_JULIA
    if r < 2.0 or record.label in (Label.UNDECIDED, Label.DEGENERATE):
        return Connectivity.UNKNOWN
    if record.label is Label.ESCAPING_IMMEDIATE:
        return Connectivity.DISCONNECTED
    if record.label in ATTRACTING_LABELS or record.label in (Label.ESCAPING_DELAYED, Label.ESCAPING_ZERO):
        return Connectivity.CONNECTED
    return Connectivity.UNKNOWN


def _same_cycle(c1: CycleRecord, c2: CycleRecord) -> bool:
    return c1.period == c2.period and all(c1.contains(w, SAME_CYCLE_TOL) for w in c2.points)


def _phase_compare(p: BlaschkeParam, crit, fp: Fate, fm: Fate) -> tuple[bool, bool]:
    """Whether both critical orbits shadow the same cycle point at equal times,
    and whether their convergence lags differ by more than a few periods."""
    cyc = fp.cycle
    pts = np.array(cyc.points, dtype=np.complex128)
    n = max(fp.iterations_used, fm.iterations_used) + cyc.period
    zp, lag_p = K.track(K.FAM_BLASCHKE, p.a, crit.c_plus, n, True, pts, SAME_CYCLE_TOL)
    zm, lag_m = K.track(K.FAM_BLASCHKE, p.a, crit.c_minus, n, True, pts, SAME_CYCLE_TOL)
    same_phase = cyc.phase_of(zp) == cyc.phase_of(zm)
    suspect = lag_p >= 0 and lag_m >= 0 and abs(lag_p - lag_m) > CAPTURE_LAG_PERIODS * cyc.period
    return same_phase, suspect


def classify_parameter(a, spec: Optional[OrbitSpec] = None) -> ParamClassRecord:
    """Place a parameter in the hyperbolic taxonomy and attach its cycle data."""
    spec = spec or OrbitSpec()
    p = BlaschkeParam(complex(a))
    a = p.a
    r = p.modulus
    if p.degenerate:
        return _finish(ParamClassRecord(a, Label.DEGENERATE))
    if r < 1.0:
        return _finish(ParamClassRecord(a, Label.DISK_ESCAPE))
    crit = critical_points(p)
    if r < 2.0:
        fp = classify_fate(p, crit.c_plus, spec, project=True)
        fm = classify_fate(p, crit.c_minus, spec, project=True)
        cp = fp.cycle if fp.attracting else None
        cm = fm.cycle if fm.attracting else None
        suspect = False
        if cp is None or cm is None:
            label = Label.NON_HYPERBOLIC_CIRCLE
        elif not _same_cycle(cp, cm):
            label = Label.DISJOINT
        else:
            same_phase, suspect = _phase_compare(p, crit, fp, fm)
            # a long lag means one orbit wandered before landing, so its phase
            # says nothing about immediate-basin components
            label = Label.TONGUE_ADJACENT if same_phase or suspect else Label.BITRANSITIVE
        return _finish(ParamClassRecord(
            a, label, cp, cm, False, iterations=fp.iterations_used, capture_suspect=suspect,
        ))

    fp = classify_fate(p, crit.c_plus, spec)
    swapping = r > 2.0 and fp.entered_disk >= 1
    cp = cm = None
    if fp.tag is FateTag.ESCAPE_INF:
        label = Label.ESCAPING_IMMEDIATE if fp.entered_disk == 0 else Label.ESCAPING_DELAYED
    elif fp.tag is FateTag.ESCAPE_ZERO:
        label = Label.ESCAPING_ZERO
    elif fp.attracting:
        cp = fp.cycle
        cm = mirror_fate(p, fp, spec).cycle
        if cp.on_circle:
            label = Label.TONGUE_ADJACENT
        elif cp.self_symmetric:
            label = Label.SWAPPING_BITRANSITIVE if swapping else Label.BITRANSITIVE
        else:
            label = Label.SWAPPING_DISJOINT if swapping else Label.DISJOINT
    else:
        label = Label.UNDECIDED
    return _finish(ParamClassRecord(
        a, label, cp, cm, swapping, iterations=fp.iterations_used, entered_disk=fp.entered_disk,
    ))


def _finish(record: ParamClassRecord) -> ParamClassRecord:
    return replace(record, connectivity=connectivity_verdict(record))


@dataclass(frozen=True)
class PlaneSpec:
    """A rectangular window of the complex plane sampled at pixel centres."""

    center: complex
    width: float
    height: float
    resolution: tuple[int, int]  # (nx, ny)
    orbit_spec: OrbitSpec = field(default_factory=OrbitSpec.for_grids)

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("window extents must be positive")
        nx, ny = self.resolution
        if nx <= 0 or ny <= 0:
            raise ValueError("resolution must be positive")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "resolution", (int(nx), int(ny)))

    @classmethod
    def from_bounds(cls, re_min, re_max, im_min, im_max, resolution, orbit_spec=None) -> "PlaneSpec":
        if isinstance(resolution, int):
            resolution = (resolution, resolution)
        return cls(
            complex((re_min + re_max) / 2, (im_min + im_max) / 2),
            re_max - re_min,
            im_max - im_min,
            resolution,
            orbit_spec or OrbitSpec.for_grids(),
        )

    @property
    def shape(self) -> tuple[int, int]:
        nx, ny = self.resolution
        return ny, nx

    def row(self, i: int) -> np.ndarray:
        """Pixel centres of image row i (row 0 is the top edge)."""
        nx, ny = self.resolution
        re = self.center.real - self.width / 2 + (np.arange(nx) + 0.5) * (self.width / nx)
        im = self.center.imag + self.height / 2 - (i + 0.5) * (self.height / ny)
        return re + 1j * im

    def pixel_centers(self) -> np.ndarray:
        return np.stack([self.row(i) for i in range(self.resolution[1])])

    def locate(self, z: complex) -> Optional[tuple[int, int]]:
        """(row, col) of the pixel containing z, or None outside the window."""
        nx, ny = self.resolution
        col = math.floor((z.real - (self.center.real - self.width / 2)) / (self.width / nx))
        row = math.floor(((self.center.imag + self.height / 2) - z.imag) / (self.height / ny))
        if 0 <= col < nx and 0 <= row < ny:
            return row, col
        return None


@dataclass
class ClassGrid:
    window: PlaneSpec
    records: list  # row-major ParamClassRecord

    @property
    def shape(self) -> tuple[int, int]:
        return self.window.shape

    def at(self, row: int, col: int) -> ParamClassRecord:
        return self.records[row * self.window.resolution[0] + col]

    def labels(self) -> np.ndarray:
        return np.array([r.label.value for r in self.records], dtype=object).reshape(self.shape)


def param_plane_grid(window: PlaneSpec, workers: Optional[int] = None) -> ClassGrid:
    """Classify every pixel centre of a parameter-plane window (row-major)."""
    spec = window.orbit_spec

    def do_row(i):
        return [classify_parameter(complex(a), spec) for a in window.row(i)]

    rows = map_ordered(do_row, window.resolution[1], workers)
    return ClassGrid(window, [rec for row in rows for rec in row])


class DynClass(str, enum.Enum):
    ESCAPE_INF = "escape-inf"
    ESCAPE_ZERO = "escape-zero"
    PLUS_BASIN = "plus-basin"
    MINUS_BASIN = "minus-basin"
    OTHER = "other"


@dataclass
class DynGrid:
    window: PlaneSpec
    record: ParamClassRecord
    classes: np.ndarray  # (ny, nx) of DynClass values
    iterations: np.ndarray  # (ny, nx) escape times

    @property
    def shape(self) -> tuple[int, int]:
        return self.window.shape


def dyn_plane_grid(a, window: PlaneSpec, workers: Optional[int] = None,
                   record: Optional[ParamClassRecord] = None) -> DynGrid:
    """Fate of every pixel of a dynamical-plane window of B_a, coloured by basin."""
    spec = window.orbit_spec
    p = BlaschkeParam(complex(a))
    record = record or classify_parameter(p.a, spec.with_(max_iter=max(spec.max_iter, 100_000)))

    def do_row(i):
        out = scan_points(p, window.row(i), spec)
        classes = []
        for tag, z in zip(out["tag"], out["z"]):
            if tag == K.TAG_ESCAPE_INF:
                classes.append(DynClass.ESCAPE_INF)
            elif tag == K.TAG_ESCAPE_ZERO:
                classes.append(DynClass.ESCAPE_ZERO)
            elif tag == K.TAG_CYCLE and record.cycle_plus is not None and record.cycle_plus.contains(z, SAME_CYCLE_TOL):
                classes.append(DynClass.PLUS_BASIN)
            elif tag == K.TAG_CYCLE and record.cycle_minus is not None and record.cycle_minus.contains(z, SAME_CYCLE_TOL):
                classes.append(DynClass.MINUS_BASIN)
            else:
                classes.append(DynClass.OTHER)
        return classes, out["iters"]

    rows = map_ordered(do_row, window.resolution[1], workers)
    classes = np.array([c for c, _ in rows], dtype=object)
    iters = np.array([it for _, it in rows], dtype=np.int64)
    return DynGrid(window, record, classes, iters)
