"""Optimal transition coefficients for frequency sampling FIR filters.

Typical use::

    >>> from fsfdesign import FilterSpec, optimize
    >>> res = optimize(FilterSpec(n=16, bw=4, t=1))
    >>> round(res.coefficients[0], 6), round(res.psl_db, 3)
    (0.404741, -41.664)
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BandRegion,
    FilterSpec,
    SampleLayout,
    Slot,
    check_assignment,
    layout,
    stopband_region,
)
from .errors import (  # noqa: E402
    AllZeroResponse,
    ArityMismatch,
    BadAssignment,
    FsfError,
    GridTooFine,
    Infeasible,
    NoConvergence,
    ParseError,
    SpecInfeasible,
    TooManyVariables,
    Unbounded,
    UnknownPreset,
)
from .lp import LpProblem, LpSolution, solve_lp  # noqa: E402
from .optimizer import (  # noqa: E402
    DesignResult,
    SolveOptions,
    brute_force,
    exchange,
    grid_sweep,
    optimize,
)
from .response import (  # noqa: E402
    AmplitudeModel,
    FrequencyGrid,
    ImpulseResponse,
    PslReport,
    ResponseCurve,
    amplitude_at,
    build_grid,
    build_model,
    psl,
    response_curve,
    stopband_model,
    synthesize,
)
from .tables import (  # noqa: E402
    PRESETS,
    PublishedFixture,
    TableRowResult,
    comparison_report,
    load_fixtures,
    run_preset,
    verify_fixture,
)

__all__ = [
    "__version__",
    "BandRegion",
    "FilterSpec",
    "SampleLayout",
    "Slot",
    "check_assignment",
    "layout",
    "stopband_region",
    "AllZeroResponse",
    "ArityMismatch",
    "BadAssignment",
    "FsfError",
    "GridTooFine",
    "Infeasible",
    "NoConvergence",
    "ParseError",
    "SpecInfeasible",
    "TooManyVariables",
    "Unbounded",
    "UnknownPreset",
    "LpProblem",
    "LpSolution",
    "solve_lp",
    "DesignResult",
    "SolveOptions",
    "brute_force",
    "exchange",
    "grid_sweep",
    "optimize",
    "AmplitudeModel",
    "FrequencyGrid",
    "ImpulseResponse",
    "PslReport",
    "ResponseCurve",
    "amplitude_at",
    "build_grid",
    "build_model",
    "psl",
    "response_curve",
    "stopband_model",
    "synthesize",
    "PRESETS",
    "PublishedFixture",
    "TableRowResult",
    "comparison_report",
    "load_fixtures",
    "run_preset",
    "verify_fixture",
]
