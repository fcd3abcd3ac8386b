"""Range profiles, range-Doppler maps, and CPI-level mitigation.

Transform conventions: all DFTs are unitary so Parseval holds exactly.
Because a target at positive range contributes ``exp(-2j*pi*f_b*t)``, the
fast-time (range) transform uses the positive-exponent kernel, which places
positive beat frequencies on non-negative bins; the slow-time (Doppler)
transform is the standard negative-exponent DFT, so a per-sweep rotation
``exp(+1j*w*m)`` lands on Doppler bin ``w*P/(2*pi)``.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError, EstimationError
from .mitigate import MpConfig, reconstruct_burg, reconstruct_mp, zero_gap
from .sigmodel import (
    ComplexSeries,
    GapSpec,
    MitigationMethod,
    MitigationReport,
    RadarParams,
    SPEED_OF_LIGHT,
)

DB_FLOOR = -200.0


class Window(enum.Enum):
    RECT = "rect"
    HANN = "hann"
    HAMMING = "hamming"


def _window_values(window: Window, n: int) -> np.ndarray:
    if window is Window.RECT:
        return np.ones(n)
    if window is Window.HANN:
        return np.hanning(n)
    if window is Window.HAMMING:
        return np.hamming(n)
    raise DataError(f"unknown window {window!r}")


def to_db(magnitude: np.ndarray, ref: float | None = None) -> np.ndarray:
    """20*log10(|x|/ref), floored at DB_FLOOR; ref defaults to the maximum."""
    mag = np.abs(magnitude)
    if ref is None:
        ref = float(mag.max()) if mag.size else 1.0
    if ref <= 0.0:
        ref = 1.0
    floor = ref * 10.0 ** (DB_FLOOR / 20.0)
    return 20.0 * np.log10(np.maximum(mag, floor) / ref)


@dataclass(frozen=True)
class RangeProfile:
    """Windowed range spectrum of one sweep."""

    magnitude: np.ndarray
    ranges_m: np.ndarray

    def db(self, ref: float | None = None) -> np.ndarray:
        return to_db(self.magnitude, ref)

    def peak_range(self) -> float:
        return float(self.ranges_m[int(np.argmax(self.magnitude))])


def range_profile(
    series: ComplexSeries,
    params: RadarParams,
    window: Window = Window.RECT,
    nfft: int | None = None,
) -> RangeProfile:
    """Range compression of a beat sweep by windowed DFT.

    Bin ``b`` maps to range ``c*(b*fs/nfft)/(2*K)``; bins past ``nfft/2``
    correspond to beat frequencies beyond fs/2 (ranges past the unambiguous
    limit) and are returned as-is for the caller to slice.
    """
    n = len(series)
    if nfft is None:
        nfft = n
    if nfft < n:
        raise DataError(f"nfft={nfft} smaller than the sweep length {n}")
    w = _window_values(window, n)
    spectrum = np.fft.ifft(series.samples * w, n=nfft) * np.sqrt(nfft)
    bins = np.arange(nfft)
    freqs = bins * (1.0 / (nfft * series.dt))
    ranges = SPEED_OF_LIGHT * freqs / (2.0 * params.chirp_rate)
    return RangeProfile(np.abs(spectrum), ranges)


@dataclass(frozen=True)
class RDMap:
    """Range-Doppler spectrum of one CPI (complex, unitary transforms)."""

    spectrum: np.ndarray  # [n_doppler, n_range]
    ranges_m: np.ndarray
    doppler_bins: np.ndarray

    @property
    def power_db(self) -> np.ndarray:
        return to_db(self.spectrum)

    def power(self) -> np.ndarray:
        return np.abs(self.spectrum) ** 2


def range_doppler(
    cpi: np.ndarray,
    params: RadarParams,
    window: tuple[Window, Window] = (Window.RECT, Window.RECT),
) -> RDMap:
    """Slow-time then fast-time unitary DFT of a rectangular CPI matrix."""
    cpi = np.asarray(cpi)
    if cpi.ndim != 2:
        raise DataError("CPI must be a 2-D [n_sweeps, n_samples] matrix")
    n_sweeps, n_samples = cpi.shape
    w_slow = _window_values(window[0], n_sweeps)[:, np.newaxis]
    w_fast = _window_values(window[1], n_samples)[np.newaxis, :]
    slow = np.fft.fft(cpi * w_slow, axis=0, norm="ortho")
    spec = np.fft.ifft(slow * w_fast, axis=1) * np.sqrt(n_samples)
    freqs = np.arange(n_samples) * (params.sample_rate / n_samples)
    ranges = SPEED_OF_LIGHT * freqs / (2.0 * params.chirp_rate)
    return RDMap(spec, ranges, np.arange(n_sweeps))


def mitigate_cpi(
    cpi: np.ndarray,
    gap: GapSpec,
    cfg: MpConfig | None = None,
    method: MitigationMethod = MitigationMethod.MP,
    burg_order: int = 3,
    workers: int = 1,
    on_error: str = "zero",
) -> tuple[np.ndarray, list[MitigationReport]]:
    """Mitigate a CPI whose sweeps share one interference interval.

    The CPI is transformed along slow time first, the time signal of every
    Doppler bin is mitigated independently, and the result is transformed
    back to the sweep domain.  Only fast-time columns inside the gap are
    modified; columns outside are returned bit-identical.  A per-bin
    estimator failure falls back to zeroing that bin (``on_error="zero"``)
    or re-raises (``on_error="raise"``).
    """
    cpi = np.asarray(cpi, dtype=np.complex128)
    if cpi.ndim != 2:
        raise DataError("CPI must be a 2-D [n_sweeps, n_samples] matrix")
    n_sweeps, n_samples = cpi.shape
    gap.validate_for(n_samples)
    if gap.is_empty:
        return cpi.copy(), []
    cfg = cfg or MpConfig()

    doppler = np.fft.fft(cpi, axis=0, norm="ortho")
    cleaned = doppler.copy()

    def _one_bin(b: int) -> MitigationReport:
        series = ComplexSeries(doppler[b], 1.0)
        try:
            if method is MitigationMethod.MP:
                out, report = reconstruct_mp(series, gap, cfg)
            elif method is MitigationMethod.BURG:
                out = reconstruct_burg(series, gap, burg_order)
                report = MitigationReport(burg_order, 0, [], 0, MitigationMethod.BURG)
            else:
                out = zero_gap(series, gap)
                report = MitigationReport(0, 0, [], 0, MitigationMethod.ZEROING)
        except EstimationError:
            if on_error != "zero":
                raise
            out = zero_gap(series, gap)
            report = MitigationReport(0, 0, [], 0, MitigationMethod.ZEROING)
        cleaned[b] = out.samples
        return report

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_one_bin, range(n_sweeps)))
    else:
        reports = [_one_bin(b) for b in range(n_sweeps)]

    out = np.fft.ifft(cleaned, axis=0, norm="ortho")
    # the inverse transform touches every column; restore the untouched ones
    # bit-exactly (they are unchanged analytically)
    out[:, : gap.n1] = cpi[:, : gap.n1]
    out[:, gap.n2 + 1 :] = cpi[:, gap.n2 + 1 :]
    return out, reports
