"""Palettes and binary PPM (P6) output for parameter, dynamical and polynomial grids."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .atlas import ClassGrid, DynClass, DynGrid, Label
from .polys import PolyClass, PolyGrid

RGB = tuple

RED = (255, 0, 0)
BLACK = (0, 0, 0)
GREEN = (0, 200, 0)
PINK = (255, 105, 180)
BLUE = (0, 0, 255)
YELLOW = (255, 230, 0)
ORANGE = (255, 165, 0)


class ParamClass(str, enum.Enum):
    ESCAPE_INF = "escape-inf"
    ESCAPE_ZERO = "escape-zero"
    CIRCLE_CYCLE = "circle-cycle"
    BITRANSITIVE = "bitransitive"
    DISJOINT = "disjoint"
    OTHER = "other"


_ESCAPE_INF_LABELS = {Label.DISK_ESCAPE, Label.ESCAPING_IMMEDIATE, Label.ESCAPING_DELAYED}
_OTHER_LABELS = {Label.DEGENERATE, Label.NON_HYPERBOLIC_CIRCLE, Label.UNDECIDED}


def param_pixel_class(label, a: complex) -> ParamClass:
    """Colour class of a parameter-plane pixel; cycles for 1 < |a| < 2 live on the circle."""
    label = Label(label)
    if label in _ESCAPE_INF_LABELS:
        return ParamClass.ESCAPE_INF
    if label is Label.ESCAPING_ZERO:
        return ParamClass.ESCAPE_ZERO
    if label in _OTHER_LABELS:
        return ParamClass.OTHER
    if label in (Label.TONGUE_ADJACENT, Label.CAPTURE) or abs(a) < 2.0:
        return ParamClass.CIRCLE_CYCLE
    if label in (Label.BITRANSITIVE, Label.SWAPPING_BITRANSITIVE):
        return ParamClass.BITRANSITIVE
    if label in (Label.DISJOINT, Label.SWAPPING_DISJOINT):
        return ParamClass.DISJOINT
    raise ValueError(f"no colour class for label {label!r}")


@dataclass(frozen=True)
class Palette:
    name: str
    kind: str  # "param", "dyn" or "poly"
    colors: Mapping[str, RGB]
    scaled: frozenset = field(default_factory=frozenset)
    scale_to: RGB = None

    def color(self, key, iters: int = 0) -> RGB:
        key = getattr(key, "value", key)
        base = self.colors[key]
        if key not in self.scaled:
            return base
        t = min(int(iters), 64) / 64.0
        if self.scale_to is None:
            return (int(round(base[0] * (1.0 - 0.75 * t))), base[1], base[2])
        return tuple(int(round(b + (s - b) * t)) for b, s in zip(base, self.scale_to))


PALETTES = {
    "atlas": Palette("atlas", "param", {
        "escape-inf": RED, "escape-zero": BLACK, "circle-cycle": GREEN,
        "bitransitive": PINK, "disjoint": PINK, "other": BLUE,
    }),
    "swapping": Palette("swapping", "param", {
        "escape-inf": RED, "escape-zero": BLACK, "circle-cycle": PINK,
        "bitransitive": GREEN, "disjoint": YELLOW, "other": BLUE,
    }),
    "dynamical": Palette("dynamical", "dyn", {
        "escape-inf": RED, "escape-zero": BLACK, "plus-basin": GREEN,
        "minus-basin": YELLOW, "other": BLUE,
    }, frozenset({"escape-inf"})),
    "cubic": Palette("cubic", "poly", {
        "escape": GREEN, "zero": BLACK, "bounded": RED, "undecided": RED,
    }, frozenset({"escape"}), ORANGE),
    "poly": Palette("poly", "poly", {
        "escape": RED, "zero": BLACK, "bounded": BLACK, "undecided": BLACK,
    }, frozenset({"escape"})),
}

_DEFAULT = {"param": "atlas", "dyn": "dynamical", "poly": "poly"}


def _kind(grid) -> str:
    if isinstance(grid, ClassGrid):
        return "param"
    if isinstance(grid, DynGrid):
        return "dyn"
    if isinstance(grid, PolyGrid):
        return "poly"
    raise TypeError(f"cannot render {type(grid).__name__}")


def get_palette(name, kind: str) -> Palette:
    if name is None:
        name = _DEFAULT[kind]
    pal = name if isinstance(name, Palette) else PALETTES.get(name)
    if pal is None:
        raise KeyError(f"unknown palette {name!r}")
    if pal.kind != kind:
        raise ValueError(f"palette {pal.name!r} is for {pal.kind} grids, not {kind}")
    return pal


def pixel_buffer(grid, palette=None) -> np.ndarray:
    """(ny, nx, 3) uint8 image, row 0 at the top of the window."""
    kind = _kind(grid)
    pal = get_palette(palette, kind)
    ny, nx = grid.shape
    buf = np.zeros((ny, nx, 3), dtype=np.uint8)
    if kind == "param":
        for idx, rec in enumerate(grid.records):
            buf[idx // nx, idx % nx] = pal.color(param_pixel_class(rec.label, rec.a))
    elif kind == "dyn":
        for i in range(ny):
            for j in range(nx):
                buf[i, j] = pal.color(grid.classes[i, j], grid.iterations[i, j])
    else:
        for idx, fate in enumerate(grid.fates):
            buf[idx // nx, idx % nx] = pal.color(grid.pixel_class(fate), fate.iterations_used)
    return buf


def encode_ppm(buf: np.ndarray) -> bytes:
    ny, nx, _ = buf.shape
    return b"P6\n%d %d\n255\n" % (nx, ny) + np.ascontiguousarray(buf, dtype=np.uint8).tobytes()


def decode_ppm(data: bytes) -> np.ndarray:
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6" or int(parts[3]) != 255:
        raise ValueError("not an 8-bit P6 image")
    nx, ny = int(parts[1]), int(parts[2])
    pixels = np.frombuffer(parts[4], dtype=np.uint8, count=nx * ny * 3)
    return pixels.reshape(ny, nx, 3)


def render_image(grid, palette=None) -> bytes:
    return encode_ppm(pixel_buffer(grid, palette))


def write_image(path, grid, palette=None) -> bytes:
    data = render_image(grid, palette)
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc}") from exc
    return data
