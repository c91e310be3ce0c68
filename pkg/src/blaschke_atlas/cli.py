"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numeric failure.  Query commands
print JSON to stdout; plane commands write a P6 image and/or CSV and print a
JSON summary.
"""

from __future__ import annotations

import argparse
import enum
import json
import re
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import export, render
from .atlas import PlaneSpec, classify_parameter, dyn_plane_grid, param_plane_grid
from .circle import build_lift, semiconjugacy
from .errors import AtlasError
from .family import BlaschkeParam, critical_points
from .multiplier import HOMOTOPY_STEPS, find_superattracting, solve_multiplier
from .orbit import OrbitSpec, classify_fate
from .polys import Family, poly_plane_grid

MAX_RESOLUTION = 4096

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class Mode(str, enum.Enum):
    PARAM = "param"
    DYN = "dyn"
    TRICORN = "tricorn"
    CUBIC = "cubic"
    MANDELBROT = "mandelbrot"


# small swapping copies in the parameter plane, rendered with the swapping palette
PRESET_WINDOWS = {
    Mode.TRICORN: (-3.22295, -3.22249, 5.58172, 5.58218),
    Mode.MANDELBROT: (2.080306, 2.080311, 1.9339165, 1.9339215),
}


@dataclass(frozen=True)
class RenderJob:
    mode: Mode
    window: PlaneSpec
    palette: Optional[str] = None
    image_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    json_path: Optional[Path] = None
    a: Optional[complex] = None
    family: Optional[Family] = None

    def validate(self, max_resolution: int = MAX_RESOLUTION) -> None:
        if max(self.window.resolution) > max_resolution:
            raise UsageError(f"resolution {self.window.resolution} exceeds the maximum {max_resolution}")
        for path in (self.image_path, self.csv_path, self.json_path):
            if path is not None and not Path(path).resolve().parent.is_dir():
                raise UsageError(f"output directory of {path} does not exist")
        if self.mode is Mode.DYN and self.a is None:
            raise UsageError("dyn-plane needs --a")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_complex(text: str) -> complex:
    parts = [t.strip() for t in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(parts[0].replace("i", "j")) if "i" in parts[0] or "j" in parts[0] else complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot read {text!r} as a complex number (use re,im)")


def parse_resolution(text) -> tuple[int, int]:
    parts = str(text).split(",")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad resolution {text!r}") from None
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2 or min(vals) <= 0:
        raise UsageError(f"bad resolution {text!r}")
    return vals[0], vals[1]


def read_config(path) -> dict:
    """Flat key=value file; '#' starts a comment; keys use '-' or '_'."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_VALUE_FLAGS = {"--a", "--z", "--center", "--target", "--width", "--height"}
_NUMBERISH = re.compile(r"^-[\d.]")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Let '--a -0.87,2.05' through: argparse would read the value as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NUMBERISH.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--max-iter", type=int)
    common.add_argument("--eps-cycle", type=float)
    common.add_argument("--threads", type=int)

    plane = _Parser(add_help=False)
    plane.add_argument("--center")
    plane.add_argument("--width", type=float)
    plane.add_argument("--height", type=float)
    plane.add_argument("--res")
    plane.add_argument("--out", help="P6 image path")
    plane.add_argument("--csv", help="grid CSV path")
    plane.add_argument("--json", help="grid JSON path")
    plane.add_argument("--palette", choices=sorted(render.PALETTES))

    parser = _Parser(prog="blaschke-atlas", description="Dynamics and parameter atlas of the Blaschke family.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="classify one parameter")
    p.add_argument("--a")
    p.add_argument("--json", help="also write the record here")

    p = sub.add_parser("orbit", parents=[common], help="fate of one orbit")
    p.add_argument("--a")
    p.add_argument("--z", help="start point re,im, or c_plus / c_minus (default c_plus)")

    p = sub.add_parser("param-plane", parents=[common, plane], help="render the parameter plane")
    p.add_argument("--mode", choices=[Mode.PARAM.value, Mode.TRICORN.value, Mode.MANDELBROT.value])
    p.add_argument("--from-csv", help="re-render a cached grid CSV without recomputing")

    p = sub.add_parser("dyn-plane", parents=[common, plane], help="render a dynamical plane")
    p.add_argument("--a")

    p = sub.add_parser("poly-plane", parents=[common, plane], help="render a comparison family")
    p.add_argument("--family", choices=["blaschke"] + [f.value for f in Family])

    p = sub.add_parser("lift", parents=[common], help="circle lift and semiconjugacy")
    p.add_argument("--a")
    p.add_argument("--grid-size", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--csv", help="write (x, F, H) rows here")

    p = sub.add_parser("solve-multiplier", parents=[common], help="invert the multiplier map")
    p.add_argument("--a", help="seed parameter")
    p.add_argument("--target")
    p.add_argument("--homotopy-steps", type=int)
    p.add_argument("--json")

    p = sub.add_parser("center", parents=[common], help="superattracting centre near a seed")
    p.add_argument("--a", help="seed parameter")
    p.add_argument("--period", type=int)
    p.add_argument("--json")
    return parser


class _Options:
    """Flags layered over config values layered over defaults."""

    def __init__(self, ns: argparse.Namespace, config: dict):
        self._ns = ns
        self._config = config

    def get(self, key: str, default=None, conv=None):
        value = getattr(self._ns, key, None)
        if value is None and key in self._config:
            value = self._config[key]
            if conv is not None:
                try:
                    value = conv(value)
                except ValueError:
                    raise UsageError(f"config value {key}={value!r} is invalid") from None
        return default if value is None else value

    def require(self, key: str, conv=None):
        value = self.get(key, conv=conv)
        if value is None:
            raise UsageError(f"--{key.replace('_', '-')} is required")
        return value


def _orbit_spec(opts: _Options, base: OrbitSpec) -> OrbitSpec:
    changes = {}
    for key, conv in (("max_iter", int), ("eps_cycle", float), ("eps_circle", float), ("warmup", int)):
        v = opts.get(key, conv=conv)
        if v is not None:
            changes[key] = conv(v)
    try:
        return base.with_(**changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _window(opts: _Options, spec: OrbitSpec, preset=None) -> PlaneSpec:
    res = parse_resolution(opts.get("res", 400))
    if preset is not None and opts.get("center") is None:
        return PlaneSpec.from_bounds(*preset, res, spec)
    center = parse_complex(opts.get("center", "0,0"))
    width = float(opts.get("width", 16.0, float))
    height = float(opts.get("height", width * res[1] / res[0], float))
    try:
        return PlaneSpec(center, width, height, res, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _path(value) -> Optional[Path]:
    return None if value is None else Path(value)


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2))


def _summary(job: RenderJob, labels) -> dict:
    nx, ny = job.window.resolution
    return {
        "mode": job.mode.value,
        "resolution": [nx, ny],
        "center": [job.window.center.real, job.window.center.imag],
        "width": job.window.width,
        "height": job.window.height,
        "counts": dict(sorted(Counter(labels).items())),
        "image": None if job.image_path is None else str(job.image_path),
        "csv": None if job.csv_path is None else str(job.csv_path),
    }


def run_job(job: RenderJob, workers: Optional[int] = None, from_csv=None) -> dict:
    """Compute (or reload) the grid of a job, write its outputs and return a summary."""
    if job.mode is Mode.DYN:
        grid = dyn_plane_grid(job.a, job.window, workers)
        labels = [c.value for c in grid.classes.ravel()]
    elif job.mode is Mode.CUBIC or job.family is not None:
        grid = poly_plane_grid(job.family or Family.CUBIC_M, job.window, workers)
        labels = [grid.pixel_class(f).value for f in grid.fates]
    else:
        grid = export.grid_from_csv(from_csv, job.window) if from_csv else param_plane_grid(job.window, workers)
        labels = [getattr(r.label, "value", r.label) for r in grid.records]
    if job.image_path is not None:
        render.write_image(job.image_path, grid, job.palette)
    if job.csv_path is not None:
        export.export_records(grid, job.csv_path, "csv")
    if job.json_path is not None:
        export.export_records(grid, job.json_path, "json")
    out = _summary(job, labels)
    if job.mode is Mode.DYN:
        out["a"] = [job.a.real, job.a.imag]
        out["label"] = grid.record.label.value
    if job.family is not None:
        out["family"] = job.family.value
    return out


def _cmd_classify(opts):
    spec = _orbit_spec(opts, OrbitSpec())
    rec = classify_parameter(parse_complex(opts.require("a")), spec)
    d = rec.to_dict()
    m = rec.multiplier
    d["period"] = rec.period
    d["multiplier"] = None if m is None else [m.real, m.imag]
    if opts.get("json"):
        export.write_json(opts.get("json"), d)
    _emit(d)
    return EXIT_OK


def _cmd_orbit(opts):
    spec = _orbit_spec(opts, OrbitSpec())
    p = BlaschkeParam(parse_complex(opts.require("a")))
    z = opts.get("z", "c_plus")
    if z in ("c_plus", "c_minus"):
        z0 = getattr(critical_points(p), z)
    else:
        z0 = parse_complex(z)
    fate = classify_fate(p, z0, spec)
    d = fate.to_dict()
    d["a"] = [p.a.real, p.a.imag]
    d["start"] = [complex(z0).real, complex(z0).imag]
    _emit(d)
    return EXIT_OK


def _plane_job(opts, mode: Mode, **extra) -> RenderJob:
    spec = _orbit_spec(opts, OrbitSpec.for_grids())
    window = _window(opts, spec, PRESET_WINDOWS.get(mode))
    palette = opts.get("palette")
    if palette is None and mode in PRESET_WINDOWS:
        palette = "swapping"
    return RenderJob(mode, window, palette, _path(opts.get("out")), _path(opts.get("csv")),
                     _path(opts.get("json")), **extra)


def _workers(opts):
    return opts.get("threads", None, int)


def _run(opts, job, **kw):
    job.validate(int(opts.get("max_res", MAX_RESOLUTION, int)))
    try:
        _emit(run_job(job, _workers(opts), **kw))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, AtlasError):
            raise
        raise UsageError(str(exc)) from exc
    return EXIT_OK


def _cmd_param_plane(opts):
    mode = Mode(opts.get("mode", "param"))
    return _run(opts, _plane_job(opts, mode), from_csv=opts.get("from_csv"))


def _cmd_dyn_plane(opts):
    a = parse_complex(opts.require("a"))
    return _run(opts, _plane_job(opts, Mode.DYN, a=a))


def _cmd_poly_plane(opts):
    fam = opts.get("family", "cubic")
    if fam == "blaschke":
        return _run(opts, _plane_job(opts, Mode.PARAM))
    family = Family(fam)
    job = _plane_job(opts, Mode.CUBIC, family=family)
    if job.palette is None:
        job = RenderJob(job.mode, job.window, "cubic" if family is Family.CUBIC_M else "poly",
                        job.image_path, job.csv_path, job.json_path, family=family)
    return _run(opts, job)


def _cmd_lift(opts):
    p = BlaschkeParam(parse_complex(opts.require("a")))
    lift = build_lift(p, int(opts.get("grid_size", 1024, int)))
    sample = semiconjugacy(p, lift, int(opts.get("depth", 40, int)))
    if opts.get("csv"):
        from .circle import dump_csv
        dump_csv(opts.get("csv"), lift, sample)
    _emit({
        "a": [p.a.real, p.a.imag],
        "base_anchor": lift.base_anchor,
        "winding": lift.winding,
        "depth": sample.depth,
        "grid_size": len(sample.xs),
        "defect": sample.defect,
        "monotone": sample.is_monotone(1e-12),
        "offset": sample.offset,
    })
    return EXIT_OK


def _report(opts, report):
    d = report.to_dict()
    if opts.get("json"):
        export.write_json(opts.get("json"), d)
    _emit(d)
    return EXIT_NUMERIC if report.failed else EXIT_OK


def _cmd_solve(opts):
    spec = _orbit_spec(opts, OrbitSpec())
    report = solve_multiplier(parse_complex(opts.require("a")), parse_complex(opts.require("target")), spec,
                              int(opts.get("homotopy_steps", HOMOTOPY_STEPS, int)))
    return _report(opts, report)


def _cmd_center(opts):
    spec = _orbit_spec(opts, OrbitSpec())
    period = int(opts.require("period", int))
    if period < 1:
        raise UsageError("--period must be positive")
    return _report(opts, find_superattracting(parse_complex(opts.require("a")), period, spec))


COMMANDS = {
    "classify": _cmd_classify,
    "orbit": _cmd_orbit,
    "param-plane": _cmd_param_plane,
    "dyn-plane": _cmd_dyn_plane,
    "poly-plane": _cmd_poly_plane,
    "lift": _cmd_lift,
    "solve-multiplier": _cmd_solve,
    "center": _cmd_center,
}


def run(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_join_negative_values(argv))
        config = read_config(ns.config) if ns.config else {}
        return COMMANDS[ns.command](_Options(ns, config))
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr, end="")
        return EXIT_USAGE
    except (AtlasError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
