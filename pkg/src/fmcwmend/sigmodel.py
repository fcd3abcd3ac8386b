"""Domain types for FMCW beat-signal processing.

All values are immutable; every operation in the package is a pure function
over these types, so instances are safe to share across threads.

Conventions used throughout the package:

* sample ``k`` of a sweep corresponds to time ``t = t0 + k*dt`` with ``t0 = 0``
  for a sweep;
* a stationary target at beat frequency ``f_b`` contributes
  ``a * exp(-2j*pi*f_b*t)``, i.e. its pole is ``z = exp(-2j*pi*f_b*dt)`` and
  ranges map back through ``d = c*|angle(z)| / (2*pi*dt*2*K)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

# Propagation speed used for all range/beat-frequency conversions (m/s).
SPEED_OF_LIGHT = 3.0e8


@dataclass(frozen=True)
class RadarParams:
    """Linear-FMCW sweep parameters of the victim radar.

    ``n_samples`` may be omitted, in which case it is derived as
    ``round(sample_rate * sweep_time)``.
    """

    f0: float
    bandwidth: float
    sweep_time: float
    sample_rate: float
    n_samples: int = 0

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise DataError("bandwidth must be positive")
        if self.sweep_time <= 0:
            raise DataError("sweep_time must be positive")
        if self.sample_rate <= 0:
            raise DataError("sample_rate must be positive")
        expected = int(round(self.sample_rate * self.sweep_time))
        if self.n_samples == 0:
            object.__setattr__(self, "n_samples", expected)
        elif self.n_samples != expected:
            raise DataError(
                f"n_samples={self.n_samples} inconsistent with "
                f"round(sample_rate*sweep_time)={expected}"
            )

    @property
    def chirp_rate(self) -> float:
        """Sweep slope K = B/T in Hz/s."""
        return self.bandwidth / self.sweep_time

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def unambiguous_range(self) -> float:
        """Largest range whose beat frequency stays below fs/2."""
        return SPEED_OF_LIGHT * (self.sample_rate / 2.0) / (2.0 * self.chirp_rate)


@dataclass(frozen=True)
class Target:
    """Point scatterer: range, complex amplitude, optional radial velocity."""

    range_m: float
    amplitude: complex
    velocity: float = 0.0

    def __post_init__(self):
        if self.range_m < 0:
            raise DataError("target range must be non-negative")
        if not np.isfinite(self.amplitude):
            raise DataError("target amplitude must be finite")


@dataclass(frozen=True)
class InterferenceParams:
    """Interfering FMCW sweep as seen by the victim receiver.

    ``delay`` is the interferer sweep start relative to the victim sweep
    start; negative values mean the interferer started earlier (time
    advancement).  ``bandwidth_i`` is signed, so an opposite-slope interferer
    carries ``bandwidth_i < 0`` and hence a negative chirp rate.
    """

    fI0: float
    bandwidth_i: float
    sweep_time_i: float
    delay: float = 0.0
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.sweep_time_i <= 0:
            raise DataError("interferer sweep time must be positive")

    @property
    def chirp_rate(self) -> float:
        """Interferer sweep slope K_I = B_I/T_I (sign free)."""
        return self.bandwidth_i / self.sweep_time_i


@dataclass(frozen=True)
class ComplexSeries:
    """Uniformly sampled complex baseband sweep."""

    samples: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.complex128, order="C", copy=True)
        if arr.ndim != 1:
            raise DataError("samples must be one-dimensional")
        if self.dt <= 0:
            raise DataError("dt must be positive")
        if arr.size and not np.all(np.isfinite(arr)):
            raise DataError("samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.samples.size) * self.dt

    def power(self) -> float:
        """Mean |s|^2 per sample."""
        if not self.samples.size:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))

    def with_samples(self, samples: np.ndarray) -> "ComplexSeries":
        return ComplexSeries(samples, self.dt, self.t0)

    def slice(self, gap: "GapSpec") -> "ComplexSeries":
        """Samples inside the gap, keeping the time base."""
        return ComplexSeries(
            self.samples[gap.n1 : gap.n2 + 1], self.dt, self.t0 + gap.n1 * self.dt
        )


@dataclass(frozen=True)
class GapSpec:
    """Inclusive index interval [n1, n2] of excised samples.

    ``n2 == n1 - 1`` is the empty gap; mitigation treats it as a no-op.
    """

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0:
            raise DataError("gap start must be non-negative")
        if self.n2 < self.n1 - 1:
            raise DataError(f"invalid gap ({self.n1}, {self.n2})")

    @property
    def length(self) -> int:
        return self.n2 - self.n1 + 1

    @property
    def is_empty(self) -> bool:
        return self.n2 < self.n1

    def widened(self, guard: int, n_samples: int) -> "GapSpec":
        """Widen by ``guard`` samples each side, clamped to [0, n_samples-1]."""
        if self.is_empty:
            return self
        return GapSpec(max(0, self.n1 - guard), min(n_samples - 1, self.n2 + guard))

    def validate_for(self, n_samples: int) -> None:
        if self.n2 > n_samples - 1:
            raise DataError(f"gap ({self.n1}, {self.n2}) exceeds series of {n_samples}")


@dataclass(frozen=True)
class ExpSumModel:
    """Exponential-sum signal model: s[k] = sum_i amplitudes[i]*poles[i]**k."""

    order: int
    poles: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        poles = np.asarray(self.poles, dtype=np.complex128).reshape(-1).copy()
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1).copy()
        if len(poles) != self.order or len(amps) != self.order:
            raise DataError("model order must match pole/amplitude counts")
        poles.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "amplitudes", amps)


class MitigationMethod(enum.Enum):
    ZEROING = "zero"
    MP = "mp"
    BURG = "burg"


@dataclass
class MitigationReport:
    """Diagnostics of one mitigation run."""

    order_used: int
    pencil_L: int
    epsilon_history: list[float] = field(default_factory=list)
    iterations: int = 0
    method: MitigationMethod = MitigationMethod.MP
    # extras beyond the minimum contract: final model and index of the
    # epsilon-minimal iterate, so callers can verify the returned splice
    model: ExpSumModel | None = None
    best_index: int = -1


def split_at_gap(series: ComplexSeries, gap: GapSpec) -> tuple[ComplexSeries, ComplexSeries]:
    """Split a sweep into the segments before and after an excised gap.

    The front segment has length ``n1`` and the back segment
    ``len(series) - n2 - 1``; either may be empty for edge gaps.
    """
    n = len(series)
    gap.validate_for(n)
    if gap.n1 == 0 and gap.n2 == n - 1:
        raise DataError("gap covers the whole sweep: no interference-free data")
    front = ComplexSeries(series.samples[: gap.n1], series.dt, series.t0)
    back = ComplexSeries(
        series.samples[gap.n2 + 1 :], series.dt, series.t0 + (gap.n2 + 1) * series.dt
    )
    return front, back


def splice(front: ComplexSeries, gap_fill: ComplexSeries, back: ComplexSeries) -> ComplexSeries:
    """Concatenate front segment, gap fill and back segment into one sweep."""
    for name, a, b in (("front/gap", front, gap_fill), ("gap/back", gap_fill, back)):
        if len(a) and len(b) and abs(a.dt - b.dt) > 1e-12 * a.dt:
            raise DataError(f"sample interval mismatch at {name}")
    samples = np.concatenate([front.samples, gap_fill.samples, back.samples])
    dt = front.dt if len(front) else gap_fill.dt
    t0 = front.t0 if len(front) else gap_fill.t0
    return ComplexSeries(samples, dt, t0)
