"""Minimax transition-coefficient design by linear programming.

The stopband amplitude is affine in the transition values,
``A(w) = a0(w) + K(w) @ T``, so minimising its peak magnitude is the LP::

    minimize delta  s.t.  -delta <= a0(w_j) + K(w_j) @ T <= delta

over the stopband grid.  Grids reach ~10**6 points, so the LP is solved on
a working set that starts from a strided seed and grows by the violated
local maxima of the full-grid error until none remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import FilterSpec
from .errors import NoConvergence, SpecInfeasible, TooManyVariables
from .lp import LpProblem, solve_lp
from .response import (
    DEFAULT_G,
    DEFAULT_MAX_POINTS,
    AmplitudeModel,
    psl,
    segment_local_maxima,
    stopband_model,
)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SolveOptions:
    g: float = DEFAULT_G
    seed_stride: int = 64
    violation_tol: float = 1e-12
    max_exchange_iters: int = 100
    bounds_enabled: bool = True
    extremal_tol: float = 1e-9
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.seed_stride < 1:
            raise ValueError("seed_stride must be >= 1")
        if not (self.violation_tol > 0 and self.extremal_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class DesignResult:
    """Outcome of :func:`optimize`.

    ``delta`` is the peak stopband magnitude reached on the design grid and
    ``stopband_db`` its level in dB.  ``psl_db`` is the measured PSL of the
    coefficients, which also counts sidelobe peaks left in the gap between
    the outermost transition sample and the first zero sample; the two agree
    unless such a peak rises above the stopband.
    """

    spec: FilterSpec
    coefficients: tuple[float, ...]
    delta: float
    stopband_db: float
    psl_db: float
    extremal_omegas: tuple[float, ...]
    iterations: int
    active_constraints: int
    grid_points: int
    g: float
    lp_delta: float = field(repr=False, default=float("nan"))

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "coefficients": list(self.coefficients),
            "delta": self.delta,
            "stopband_db": self.stopband_db,
            "psl_db": self.psl_db,
            "extremal_omegas": list(self.extremal_omegas),
            "iterations": self.iterations,
            "active_constraints": self.active_constraints,
            "grid": {"g": self.g, "points": self.grid_points},
        }


def _lp_for(model: AmplitudeModel, rows: np.ndarray, bounded: bool) -> LpProblem:
    m = model.basis.shape[1]
    K = model.basis[rows]
    a0 = model.a0[rows]
    ones = np.ones((rows.size, 1))
    A = np.vstack([np.hstack([K, -ones]), np.hstack([-K, -ones])])
    b = np.concatenate([-a0, a0])
    c = np.zeros(m + 1)
    c[-1] = 1.0
    tb = (0.0, 1.0) if bounded else (-np.inf, np.inf)
    return LpProblem(c, A, b, tuple([tb] * m) + ((0.0, np.inf),))


def _seed_rows(model: AmplitudeModel, stride: int) -> np.ndarray:
    idx = [np.arange(0, len(model.grid), stride)]
    for a, b in model.grid.segments:
        idx.append(np.array([a, b - 1]))
    return np.unique(np.concatenate(idx))


def exchange(model: AmplitudeModel, opts: SolveOptions) -> tuple[np.ndarray, float, int, int]:
    """Constraint-exchange LP on a tabulated model.

    Returns ``(T, lp_delta, iterations, working_set_size)``.
    """
    working = _seed_rows(model, opts.seed_stride)
    segments = model.grid.segments
    for it in range(1, opts.max_exchange_iters + 1):
        sol = solve_lp(_lp_for(model, working, opts.bounds_enabled))
        T, delta = sol.x[:-1], max(float(sol.x[-1]), 0.0)
        err = np.abs(model.evaluate(T))
        # rounding in a0 + K@T is ~eps * sum|terms|; deep stopbands need the floor
        floor = 64 * _EPS * float(np.max(model.scale(T)))
        peaks = segment_local_maxima(err, segments)
        viol = peaks[err[peaks] > delta * (1 + opts.violation_tol) + floor]
        viol = np.setdiff1d(viol, working, assume_unique=False)
        if viol.size == 0:
            return T, delta, it, working.size
        working = np.union1d(working, viol)
    raise NoConvergence(
        f"{opts.max_exchange_iters} exchange iterations left {viol.size} violated maxima"
    )


def _result(spec: FilterSpec, model: AmplitudeModel, T: np.ndarray, lp_delta: float,
            iterations: int, active: int, opts: SolveOptions) -> DesignResult:
    T = np.clip(T, 0.0, 1.0) if opts.bounds_enabled else T
    err = np.abs(model.evaluate(T))
    delta = float(err.max())
    floor = 64 * _EPS * float(np.max(model.scale(T)))
    ext = model.grid.points[err >= delta * (1 - opts.extremal_tol) - floor]
    coeffs = tuple(float(v) for v in T)
    if np.all((T >= 0) & (T <= 1)):
        measured = psl(spec, coeffs, opts.g, opts.max_points).psl_db
    else:
        measured = 20 * math.log10(delta)
    return DesignResult(
        spec=spec,
        coefficients=coeffs,
        delta=delta,
        stopband_db=20 * math.log10(delta),
        psl_db=measured,
        extremal_omegas=tuple(float(w) for w in ext),
        iterations=iterations,
        active_constraints=active,
        grid_points=len(model.grid),
        g=opts.g,
        lp_delta=lp_delta,
    )


def optimize(spec: FilterSpec, opts: SolveOptions | None = None, **kw) -> DesignResult:
    """Transition values minimising the peak stopband magnitude of ``spec``.

    Keyword arguments override fields of ``opts``.
    """
    opts = replace(opts or SolveOptions(), **kw)
    if spec.t < 1:
        raise SpecInfeasible("optimize needs at least one transition sample; use psl() for t=0")
    model = stopband_model(spec, opts.g, opts.max_points)
    T, lp_delta, it, active = exchange(model, opts)
    return _result(spec, model, T, lp_delta, it, active, opts)


def grid_sweep(spec: FilterSpec, g_values, opts: SolveOptions | None = None):
    """One :func:`optimize` run per grid density, in input order.

    Returns a list of ``(g, coefficients, psl_db)``.
    """
    g_values = [float(g) for g in g_values]
    if any(g <= 0 for g in g_values):
        raise ValueError("grid densities must be positive")
    base = opts or SolveOptions()
    out = []
    for g in g_values:
        r = optimize(spec, replace(base, g=g))
        out.append((g, r.coefficients, r.psl_db))
    return out


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _peak_over(model: AmplitudeModel, fixed: np.ndarray, axis_vals: np.ndarray) -> np.ndarray:
    """Max |a0 + K@T| for each candidate of the last variable, earlier ones fixed."""
    base = model.a0 + (model.basis[:, :-1] @ fixed if fixed.size else 0.0)
    k_last = model.basis[:, -1]
    out = np.empty(axis_vals.size)
    step = max(1, (1 << 23) // max(1, base.size))
    for s in range(0, axis_vals.size, step):
        v = axis_vals[s:s + step]
        out[s:s + step] = np.abs(base[:, None] + k_last[:, None] * v[None, :]).max(axis=0)
    return out


def _lattice(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(math.floor((hi - lo) / step + 1e-9))
    pts = lo + step * np.arange(count + 1)
    if hi - pts[-1] > 1e-12:
        pts = np.append(pts, hi)
    return pts


def _golden(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; the ends are candidates too."""
    a, b = lo, hi
    c, d = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    cands = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    best, x = min(cands)
    return x, best


def _line_search(scan, point, resolution: float, tol: float) -> tuple[float, float]:
    """Lattice scan of [0, 1] to bracket the minimum, then golden section."""
    axis = _lattice(0.0, 1.0, resolution)
    i = int(np.argmin(scan(axis)))
    lo, hi = axis[max(0, i - 1)], axis[min(axis.size - 1, i + 1)]
    return _golden(point, float(lo), float(hi), tol)


def brute_force(spec: FilterSpec, resolution: float = 0.05, g: float = DEFAULT_G,
                max_points: int = DEFAULT_MAX_POINTS, tol: float = 1e-10) -> tuple[float, ...]:
    """Search-based minimax transition values, independent of the LP path.

    The stopband peak is convex in the transition values, and so is its
    minimum over the last variable.  Each coordinate is therefore found by a
    lattice scan of ``[0, 1]`` at ``resolution`` to bracket the minimum and a
    golden-section search down to ``tol``; for two variables the search over
    the second is nested inside the first.

    Parameters
    ----------
    spec : FilterSpec
        At most two free variables.
    resolution : float
        Bracketing lattice step.  Convexity makes any step valid; a finer
        one only costs time.
    g : float
        Stopband grid density.
    tol : float
        Final bracket width of each golden-section search.

    Returns
    -------
    tuple of float
    """
    m = spec.num_variables
    if m > 2:
        raise TooManyVariables(f"brute force handles at most 2 variables, spec has {m}")
    if m == 0:
        return ()
    if not resolution > 0 or not tol > 0:
        raise ValueError("resolution and tol must be positive")
    model = stopband_model(spec, g, max_points)

    def inner(fixed: np.ndarray) -> tuple[float, float]:
        base = model.a0 + (model.basis[:, :-1] @ fixed if fixed.size else 0.0)
        k = model.basis[:, -1]
        return _line_search(lambda v: _peak_over(model, fixed, v),
                            lambda x: float(np.abs(base + k * x).max()), resolution, tol)

    if m == 1:
        return (inner(np.zeros(0))[0],)
    outer = lambda t1: inner(np.array([t1]))[1]  # noqa: E731
    t1, _ = _line_search(lambda axis: np.array([outer(x) for x in axis]), outer, resolution, tol)
    return (t1, inner(np.array([t1]))[0])
