"""Impulse-response synthesis, amplitude evaluation and PSL measurement."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .core import FilterSpec, BandRegion, layout, check_assignment, stopband_region
from .errors import AllZeroResponse, GridTooFine

DEFAULT_G = 0.001
DEFAULT_MAX_POINTS = 5_000_000
# cos-matrix rows per evaluation block; keeps temporaries near 64 MB at n=256
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ImpulseResponse:
    taps: np.ndarray

    @property
    def n(self) -> int:
        return len(self.taps)

    def to_csv(self, dest=None) -> str:
        """Write ``index,value`` rows; returns the text when ``dest`` is None."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "value"])
        for i, v in enumerate(self.taps):
            w.writerow([i, _fmt(v)])
        return _emit(buf.getvalue(), dest)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, dest):
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)
    return text


def _synth(spec: FilterSpec, mags: np.ndarray) -> np.ndarray:
    n = spec.n
    k = np.arange(n)
    kap = k + (0.5 if spec.expansion == "sine" else 0.0)
    H = np.zeros(n, dtype=complex)
    for kk in range(spec.half + 1):
        H[kk] = mags[kk] * np.exp(-1j * np.pi * kap[kk] * (n - 1) / n)
        pk = spec.pairing(kk)
        if pk != kk:
            H[pk] = np.conj(H[kk])
    h = np.fft.ifft(H)
    if spec.expansion == "sine":
        h = h * np.exp(1j * np.pi * k / n)
    resid = np.max(np.abs(h.imag)) if n else 0.0
    if resid > 1e-12:
        raise ArithmeticError(f"synthesis left imaginary residue {resid:.3g}")
    return h.real.copy()


def synthesize(spec: FilterSpec, values=None) -> ImpulseResponse:
    """Linear-phase taps whose response passes through the sample magnitudes.

    The lower-half samples get phase ``exp(-j*pi*kappa*(n-1)/n)`` with
    ``kappa = k`` (cosine) or ``k + 1/2`` (sine), the upper half is filled by
    conjugate symmetry, and the taps are the (offset) inverse DFT.
    """
    mags = layout(spec).magnitudes(values)
    return ImpulseResponse(_synth(spec, mags))


def _amplitudes(taps: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """Zero-phase amplitude of one or more tap vectors.

    ``taps`` is (n,) or (n, r); result is (len(omegas),) or (len(omegas), r).
    Symmetric taps are folded so each cosine is evaluated once.
    """
    taps = np.asarray(taps, dtype=float)
    single = taps.ndim == 1
    if single:
        taps = taps[:, None]
    n = taps.shape[0]
    half = n // 2
    d = (n - 1) / 2.0 - np.arange(half)
    coef = 2.0 * taps[:half]
    mid = taps[half] if n % 2 else None
    omegas = np.asarray(omegas, dtype=float).ravel()
    out = np.empty((omegas.size, taps.shape[1]))
    for s in range(0, omegas.size, _CHUNK):
        w = omegas[s:s + _CHUNK]
        block = np.cos(np.multiply.outer(w, d)) @ coef
        if mid is not None:
            block += mid
        out[s:s + _CHUNK] = block
    return out[:, 0] if single else out


def amplitude_at(h: ImpulseResponse | np.ndarray, omega):
    """``A(w) = sum_m h[m] cos(w*((n-1)/2 - m))``; scalar in, scalar out."""
    taps = h.taps if isinstance(h, ImpulseResponse) else np.asarray(h, dtype=float)
    out = _amplitudes(taps, np.atleast_1d(omega))
    return float(out[0]) if np.ndim(omega) == 0 else out


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform points over each interval, endpoints always included.

    ``segments`` holds ``(start, stop)`` index ranges into ``points``, one
    per interval, so local maxima never straddle two intervals.
    """

    points: np.ndarray
    g: float
    n: int
    segments: tuple[tuple[int, int], ...]

    @property
    def spacing(self) -> float:
        return self.g / self.n

    def __len__(self) -> int:
        return self.points.size


def _interval_points(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    pts = lo + step * np.arange(count)
    if hi - pts[-1] > 1e-9 * step:
        pts = np.append(pts, hi)
    else:
        pts[-1] = hi
    return pts


def _grid(intervals, n: int, g: float, max_points: int) -> FrequencyGrid:
    if not g > 0:
        raise ValueError(f"grid density must be positive, got {g}")
    step = g / n
    estimate = sum(int((hi - lo) / step) + 2 for lo, hi in intervals)
    if estimate > max_points:
        raise GridTooFine(f"grid needs about {estimate} points, cap is {max_points}")
    parts, segs, start = [], [], 0
    for lo, hi in intervals:
        p = _interval_points(lo, hi, step)
        parts.append(p)
        segs.append((start, start + p.size))
        start += p.size
    pts = np.concatenate(parts) if parts else np.zeros(0)
    return FrequencyGrid(pts, float(g), n, tuple(segs))


def build_grid(spec: FilterSpec, region: BandRegion | None = None, g: float = DEFAULT_G,
               max_points: int = DEFAULT_MAX_POINTS) -> FrequencyGrid:
    """Stopband grid with spacing ``g / n`` radians."""
    region = stopband_region(spec) if region is None else region
    return _grid(region.stopbands, spec.n, g, max_points)


@dataclass(frozen=True)
class AmplitudeModel:
    """``A(w) = a0(w) + sum_i T_i * K_i(w)`` tabulated on ``grid``.

    ``basis`` has shape (len(grid), variables).
    """

    grid: FrequencyGrid
    a0: np.ndarray
    basis: np.ndarray

    def evaluate(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            return self.a0.copy()
        return self.a0 + self.basis @ values

    def scale(self, values) -> np.ndarray:
        """Pointwise sum of term magnitudes; bounds the rounding error of evaluate()."""
        values = np.abs(np.asarray(values, dtype=float).ravel())
        s = np.abs(self.a0)
        if values.size:
            s = s + np.abs(self.basis) @ values
        return s


def basis_taps(spec: FilterSpec) -> np.ndarray:
    """(n, 1 + variables) taps: fixed unity part, then one column per variable."""
    lay = layout(spec)
    cols = [_synth(spec, lay.magnitudes(np.zeros(spec.num_variables)))]
    for i in range(spec.num_variables):
        mags = np.zeros(spec.n)
        mags[lay.variable_slots(i)] = 1.0
        cols.append(_synth(spec, mags))
    return np.column_stack(cols)


def build_model(spec: FilterSpec, grid: FrequencyGrid) -> AmplitudeModel:
    """Affine amplitude model of ``spec`` on ``grid``."""
    if len(grid) == 0:
        raise ValueError("grid is empty")
    amps = _amplitudes(basis_taps(spec), grid.points)
    return AmplitudeModel(grid, amps[:, 0].copy(), np.ascontiguousarray(amps[:, 1:]))


@lru_cache(maxsize=8)
def stopband_model(spec: FilterSpec, g: float = DEFAULT_G,
                   max_points: int = DEFAULT_MAX_POINTS) -> AmplitudeModel:
    """Cached :func:`build_model` on the default stopband grid of ``spec``.

    Designing a filter and measuring its PSL use the same grid, so the dense
    cosine evaluation is shared.  The arrays are read-only.
    """
    model = build_model(spec, build_grid(spec, g=g, max_points=max_points))
    for arr in (model.grid.points, model.a0, model.basis):
        arr.setflags(write=False)
    return model


def to_db(x):
    """``20*log10(|x|)`` with exact zeros mapped to ``-inf``."""
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(x)


def segment_local_maxima(mag: np.ndarray, segments) -> np.ndarray:
    """Indices of local maxima of ``mag`` inside each segment.

    Segment endpoints count when they are not below their single neighbour.
    """
    found = []
    for a, b in segments:
        seg = mag[a:b]
        if seg.size == 0:
            continue
        if seg.size == 1:
            found.append(np.array([a]))
            continue
        left = np.empty(seg.size, dtype=bool)
        right = np.empty(seg.size, dtype=bool)
        left[0] = True
        left[1:] = seg[1:] > seg[:-1]
        right[-1] = True
        right[:-1] = seg[:-1] >= seg[1:]
        found.append(a + np.flatnonzero(left & right))
    return np.concatenate(found) if found else np.zeros(0, dtype=int)


def _gap_sidelobes(mag: np.ndarray) -> np.ndarray:
    """Sidelobe peaks in a gap ordered from the nonzero sample outwards.

    A peak counts only once the main lobe has decayed to a first local
    minimum; the final point (the zero sample) belongs to the stopband.
    """
    m = mag.size
    if m < 3:
        return np.zeros(0, dtype=int)
    inner = np.arange(1, m - 1)
    dips = inner[(mag[1:-1] < mag[:-2]) & (mag[1:-1] <= mag[2:])]
    if dips.size == 0:
        return np.zeros(0, dtype=int)
    after = inner[inner > dips[0]]
    peaks = after[(mag[after] > mag[after - 1]) & (mag[after] >= mag[after + 1])]
    return peaks


@dataclass(frozen=True)
class PslReport:
    """Peak sidelobe level of one coefficient set.

    ``psl_db`` is the larger of the stopband maximum and any sidelobe peak in
    the gap between the outermost nonzero sample and the first zero sample.
    """

    psl_db: float
    peak_omega: float
    peak_amplitude: float
    stopband_db: float
    all_local_maxima: tuple[tuple[float, float], ...]
    grid_points: int

    def to_dict(self) -> dict:
        return {
            "psl_db": self.psl_db,
            "peak_omega": self.peak_omega,
            "peak_amplitude": self.peak_amplitude,
            "stopband_db": self.stopband_db,
            "local_maxima": [list(p) for p in self.all_local_maxima],
            "grid_points": self.grid_points,
        }


def psl(spec: FilterSpec, values=None, g: float = DEFAULT_G,
        max_points: int = DEFAULT_MAX_POINTS) -> PslReport:
    """Measure the PSL of ``values`` on a grid of density ``g``."""
    values = check_assignment(spec, values)
    taps = _synth(spec, layout(spec).magnitudes(values))
    region = stopband_region(spec)
    model = stopband_model(spec, float(g), int(max_points))
    grid = model.grid
    # by linearity this is the amplitude of ``taps`` on the grid
    mag = np.abs(model.evaluate(values))
    j = int(np.argmax(mag))
    stop_peak = float(mag[j])
    peak, peak_w = stop_peak, float(grid.points[j])
    maxima = [(float(grid.points[i]), float(mag[i])) for i in segment_local_maxima(mag, grid.segments)]

    for lo, hi, outward in region.gaps:
        pts = _interval_points(lo, hi, grid.spacing)
        gmag = np.abs(_amplitudes(taps, pts))
        order = slice(None) if outward else slice(None, None, -1)
        peaks = _gap_sidelobes(gmag[order])
        if not outward:
            peaks = pts.size - 1 - peaks
        for i in peaks:
            maxima.append((float(pts[i]), float(gmag[i])))
            if gmag[i] > peak:
                peak, peak_w = float(gmag[i]), float(pts[i])

    if peak == 0.0:
        raise AllZeroResponse(f"{spec.describe()}: stopband response is identically zero")
    maxima.sort()
    return PslReport(
        psl_db=float(to_db(peak)),
        peak_omega=peak_w,
        peak_amplitude=peak,
        stopband_db=float(to_db(stop_peak)),
        all_local_maxima=tuple((w, float(to_db(a))) for w, a in maxima),
        grid_points=len(grid),
    )


@dataclass(frozen=True)
class ResponseCurve:
    omega: np.ndarray
    amplitude: np.ndarray

    @property
    def db(self) -> np.ndarray:
        return to_db(self.amplitude)

    def rows(self):
        for w, a, d in zip(self.omega, self.amplitude, self.db):
            yield float(w), float(a), float(d)

    def to_csv(self, dest=None, units: str = "rad") -> str:
        """Write ``omega_rad,amplitude,db``; ``-inf`` dB becomes an empty field."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["omega_rad" if units == "rad" else "omega_cycles", "amplitude", "db"])
        scale = 1.0 if units == "rad" else 1.0 / (2.0 * np.pi)
        for om, a, d in self.rows():
            w.writerow([_fmt(om * scale), _fmt(a), "" if np.isneginf(d) else _fmt(d)])
        return _emit(buf.getvalue(), dest)


def response_curve(spec: FilterSpec, values=None, delta_omega: float = 1e-3,
                   omega_range: tuple[float, float] = (0.0, math.pi)) -> ResponseCurve:
    """Unnormalised amplitude on a uniform grid, for plotting or export.

    Never divide by the passband peak: normalising would flatter the PSL.
    """
    if not delta_omega > 0:
        raise ValueError(f"delta_omega must be positive, got {delta_omega}")
    lo, hi = omega_range
    pts = _interval_points(float(lo), float(hi), delta_omega)
    h = synthesize(spec, values)
    return ResponseCurve(pts, _amplitudes(h.taps, pts))
