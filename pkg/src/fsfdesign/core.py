"""Filter specifications and the frequency-sample geometry they imply.

A frequency sampling filter of length ``n`` is fixed by ``n`` samples of its
zero-phase amplitude on a uniform grid.  Cosine expansion puts sample ``k`` at
``2*pi*k/n``; sine expansion uses the half-bin offset grid
``2*pi*(k + 1/2)/n``.  Only the lower half of the spectrum is free, the upper
half mirrors it through the conjugate pairing map.

Lowpass geometry (``bw`` unity samples, ``t`` transition samples)::

    k:     0 .. bw-1 | bw .. bw+t-1 | bw+t .. half
    role:  unity     | T1 .. Tt     | zero

Bandpass geometry follows the tabulation convention where ``m1`` is the index
of the last zero sample below the lower transition band::

    k:     0 .. m1 | m1+1 .. m1+t | .. bw unity .. | m1+t+bw+1 .. m1+2t+bw | rest
    role:  zero    | Tt .. T1     | unity          | T1 .. Tt              | zero

Transition position 1 always abuts the passband.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import BadAssignment, ArityMismatch, SpecInfeasible

Kind = Literal["lowpass", "bandpass"]
Expansion = Literal["cosine", "sine"]
Binding = Literal["symmetric", "independent"]

MAX_TRANSITIONS = 4


@dataclass(frozen=True)
class FilterSpec:
    """Complete statement of a frequency sampling design problem.

    Parameters
    ----------
    n : int
        Filter length, equal to the number of frequency samples.
    bw : int
        Number of consecutive unity-magnitude samples.
    t : int
        Transition samples per band edge (0 to 4).
    kind : {"lowpass", "bandpass"}
    expansion : {"cosine", "sine"}
    m1 : int
        Bandpass only: index of the last zero sample below the lower
        transition band, so the first transition sample sits at ``m1 + 1``.
    binding : {"symmetric", "independent"}
        Bandpass only: whether both edges share the same transition values.
    """

    n: int
    bw: int
    t: int = 1
    kind: Kind = "lowpass"
    expansion: Expansion = "cosine"
    m1: int = 0
    binding: Binding = "symmetric"

    def __post_init__(self) -> None:
        if self.kind not in ("lowpass", "bandpass"):
            raise SpecInfeasible(f"unknown filter kind {self.kind!r}")
        if self.expansion not in ("cosine", "sine"):
            raise SpecInfeasible(f"unknown expansion {self.expansion!r}")
        if self.binding not in ("symmetric", "independent"):
            raise SpecInfeasible(f"unknown binding {self.binding!r}")
        if int(self.n) != self.n or self.n < 4:
            raise SpecInfeasible(f"n must be an integer >= 4, got {self.n}")
        if int(self.bw) != self.bw or self.bw < 1:
            raise SpecInfeasible(f"bw must be an integer >= 1, got {self.bw}")
        if int(self.t) != self.t or not 0 <= self.t <= MAX_TRANSITIONS:
            raise SpecInfeasible(f"t must be in 0..{MAX_TRANSITIONS}, got {self.t}")
        if self.kind == "lowpass":
            if self.m1 != 0:
                raise SpecInfeasible("m1 applies to bandpass filters only")
            if self.binding != "symmetric":
                raise SpecInfeasible("lowpass filters have a single band edge")
            last = self.bw + self.t - 1
        else:
            if int(self.m1) != self.m1 or self.m1 < 0:
                raise SpecInfeasible(f"m1 must be an integer >= 0, got {self.m1}")
            last = self.m1 + 2 * self.t + self.bw
        if last + 1 > self.half:
            raise SpecInfeasible(
                f"{self.describe()}: nonzero samples reach k={last} but the half "
                f"spectrum ends at k={self.half}; no zero sample remains above "
                "the transition band"
            )

    @property
    def half(self) -> int:
        """Largest sample index in the lower half spectrum."""
        if self.expansion == "cosine":
            return self.n // 2
        return (self.n - 1) // 2

    @property
    def num_variables(self) -> int:
        if self.kind == "bandpass" and self.binding == "independent":
            return 2 * self.t
        return self.t

    def omega(self, k) -> np.ndarray | float:
        """Radian frequency of sample index ``k`` (scalar or array)."""
        offset = 0.5 if self.expansion == "sine" else 0.0
        return 2.0 * np.pi * (np.asarray(k, dtype=float) + offset) / self.n

    def pairing(self, k: int) -> int:
        """Index of the conjugate partner of sample ``k``."""
        if self.expansion == "cosine":
            return (self.n - k) % self.n
        return self.n - 1 - k

    def describe(self) -> str:
        s = f"n={self.n} {self.kind} bw={self.bw}"
        if self.kind == "bandpass":
            s += f" m1={self.m1}"
        s += f" t={self.t} {self.expansion}"
        if self.kind == "bandpass":
            s += f" {self.binding}"
        return s

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "expansion": self.expansion,
            "bw": self.bw,
            "m1": self.m1 if self.kind == "bandpass" else None,
            "t": self.t,
            "binding": self.binding,
        }


@dataclass(frozen=True)
class Slot:
    k: int
    omega: float
    role: Literal["unity", "zero", "transition"]
    edge: Literal["lower", "upper"] | None = None
    position: int | None = None
    variable: int | None = None


@dataclass(frozen=True)
class SampleLayout:
    """Role of every one of the ``n`` frequency samples.

    ``slots[k]`` describes sample ``k``; slots in the upper half carry the
    same role as their conjugate partner.
    """

    spec: FilterSpec
    slots: tuple[Slot, ...]
    variables: int

    def magnitudes(self, values=None) -> np.ndarray:
        """Sample magnitudes for the given transition values."""
        values = check_assignment(self.spec, values)
        mags = np.zeros(self.spec.n)
        for s in self.slots:
            if s.role == "unity":
                mags[s.k] = 1.0
            elif s.role == "transition":
                mags[s.k] = values[s.variable]
        return mags

    def variable_slots(self, i: int) -> list[int]:
        """Indices of every sample driven by free variable ``i``."""
        return [s.k for s in self.slots if s.variable == i]

    def unity_slots(self) -> list[int]:
        return [s.k for s in self.slots if s.role == "unity"]


def _half_roles(spec: FilterSpec) -> dict[int, tuple]:
    """Role tuples (role, edge, position, variable) for k = 0..half."""
    roles: dict[int, tuple] = {k: ("zero", None, None, None) for k in range(spec.half + 1)}
    t = spec.t
    if spec.kind == "lowpass":
        for k in range(spec.bw):
            roles[k] = ("unity", None, None, None)
        for i in range(t):
            roles[spec.bw + i] = ("transition", "lower", i + 1, i)
        return roles
    first = spec.m1 + 1
    independent = spec.binding == "independent"
    for j in range(t):
        position = t - j
        var = j if independent else position - 1
        roles[first + j] = ("transition", "lower", position, var)
    for k in range(first + t, first + t + spec.bw):
        roles[k] = ("unity", None, None, None)
    upper = first + t + spec.bw
    for j in range(t):
        var = t + j if independent else j
        roles[upper + j] = ("transition", "upper", j + 1, var)
    return roles


def layout(spec: FilterSpec) -> SampleLayout:
    """Map a specification to its explicit slot layout.

    Variables are numbered T1..Tt (position order) for lowpass and symmetric
    bandpass designs; independent bandpass designs number their ``2t``
    variables in ascending frequency.
    """
    roles = _half_roles(spec)
    slots = []
    for k in range(spec.n):
        base = k if k <= spec.half else spec.pairing(k)
        role, edge, position, var = roles[base]
        slots.append(Slot(k, float(spec.omega(k)), role, edge, position, var))
    return SampleLayout(spec, tuple(slots), spec.num_variables)


def check_assignment(spec: FilterSpec, values) -> np.ndarray:
    """Validate transition values against ``spec`` and return them as an array."""
    if values is None:
        values = ()
    arr = np.atleast_1d(np.asarray(values, dtype=float)).ravel()
    if spec.num_variables == 0 and arr.size == 0:
        return np.zeros(0)
    if arr.size != spec.num_variables:
        raise ArityMismatch(
            f"{spec.describe()} has {spec.num_variables} free variable(s), "
            f"got {arr.size} value(s)"
        )
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise BadAssignment(f"transition values must lie in [0, 1], got {arr.tolist()}")
    return arr


@dataclass(frozen=True)
class BandRegion:
    """Tagged, sorted, disjoint frequency intervals within [0, pi]."""

    intervals: tuple[tuple[float, float, str], ...]
    gaps: tuple[tuple[float, float, bool], ...] = field(default=())

    def tagged(self, tag: str) -> list[tuple[float, float]]:
        return [(lo, hi) for lo, hi, t in self.intervals if t == tag]

    @property
    def stopbands(self) -> list[tuple[float, float]]:
        return self.tagged("stopband")


def stopband_region(spec: FilterSpec) -> BandRegion:
    """Band intervals of ``spec``.

    Stopbands start and end exactly on the zero samples bordering each
    transition band.  ``gaps`` holds the stretch between the outermost
    nonzero sample and the first zero sample of each edge, flagged True when
    the nonzero sample is the lower end; only true sidelobe peaks there count
    towards the PSL.
    """
    # clamp: 2*pi*k/n can round a hair above pi when k = n/2
    w = lambda k: min(float(spec.omega(k)), math.pi)  # noqa: E731
    t = spec.t
    if spec.kind == "lowpass":
        first_zero = spec.bw + t
        items = [
            (0.0, w(spec.bw - 1), "passband"),
            (w(spec.bw - 1), w(first_zero), "transition"),
            (w(first_zero), math.pi, "stopband"),
        ]
        gaps = ((w(first_zero - 1), w(first_zero), True),)
    else:
        lo_zero = spec.m1
        first_unity = spec.m1 + 1 + t
        last_unity = first_unity + spec.bw - 1
        hi_zero = last_unity + t + 1
        items = [
            (0.0, w(lo_zero), "stopband"),
            (w(lo_zero), w(first_unity), "transition"),
            (w(first_unity), w(last_unity), "passband"),
            (w(last_unity), w(hi_zero), "transition"),
            (w(hi_zero), math.pi, "stopband"),
        ]
        gaps = ((w(lo_zero), w(lo_zero + 1), False), (w(hi_zero - 1), w(hi_zero), True))
    return BandRegion(tuple(items), gaps)
