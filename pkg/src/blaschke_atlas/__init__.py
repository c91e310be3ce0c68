"""Dynamics and parameter atlas of the Blaschke family B_a(z) = z^3 (z - a) / (1 - conj(a) z)."""

from .atlas import (
    ClassGrid,
    Connectivity,
    DynClass,
    DynGrid,
    Label,
    ParamClassRecord,
    PlaneSpec,
    classify_parameter,
    connectivity_verdict,
    dyn_plane_grid,
    param_plane_grid,
)
from .circle import (
    LiftTable,
    SemiconjugacySample,
    TongueVerdict,
    build_lift,
    semiconjugacy,
    tongue_membership,
)
from .errors import (
    AtlasError,
    CycleNotClosedError,
    DegenerateParameterError,
    LiftUndefinedError,
    MatchError,
    OutsideHyperbolicComponentError,
    PoleError,
    PreconditionError,
)
from .export import export_records, read_csv
from .family import (
    INFINITY,
    BlaschkeParam,
    CriticalData,
    critical_points,
    critical_points_numeric,
    derivative,
    evaluate,
    reflect,
    rotate_param,
)
from .multiplier import SolveReport, find_superattracting, multiplier_at, solve_multiplier
from .orbit import CycleKind, CycleRecord, Fate, FateTag, OrbitSpec, classify_fate, cycle_multiplier, cycle_symmetry
from .polys import Family, PolyFamilyMember, match_cubic_multiplier, poly_classify, poly_plane_grid
from .render import PALETTES, render_image

__version__ = "0.1.0"
