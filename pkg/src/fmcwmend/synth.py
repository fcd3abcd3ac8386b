"""Scenario synthesis: clean beat signals, interference beats, noisy sweeps.

The dechirped beat of a point target is a constant-frequency complex tone;
an FMCW interferer with a different slope dechirps to a chirp whose
instantaneous beat frequency sweeps through the receiver band, so after
low-pass filtering it occupies a short time window inside the sweep.  The
low-pass filter is realized as an analytic time mask on the interference
chirp (the stationary-phase surrogate of an ideal brick-wall filter at
``f_lp``), which makes the contaminated window exactly computable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .sigmodel import (
    SPEED_OF_LIGHT,
    ComplexSeries,
    GapSpec,
    InterferenceParams,
    RadarParams,
    Target,
)

DEFAULT_LOWPASS_FRACTION = 1.0 / 3.0  # f_lp = fs/3 unless a scenario overrides it


class GhostTargetWarning(UserWarning):
    """Interferer with the victim's own slope lands in-band as a fake tone."""


def gen_target_beat(params: RadarParams, targets: list[Target] | tuple[Target, ...]) -> ComplexSeries:
    """Sum-of-tones beat signal for a set of point scatterers.

    Moving targets contribute through the time-varying delay
    ``t_i(t) = 2*(d_i0 + v_i*t)/c``; within one sweep this is a slow linear
    range migration.  Targets whose beat frequency exceeds fs/2 are outside
    the unambiguous range and rejected.
    """
    n = params.n_samples
    t = np.arange(n) / params.sample_rate
    k = params.chirp_rate
    out = np.zeros(n, dtype=np.complex128)
    for i, tgt in enumerate(targets):
        worst_range = tgt.range_m + max(0.0, tgt.velocity) * params.sweep_time
        f_beat_max = k * 2.0 * worst_range / SPEED_OF_LIGHT
        if f_beat_max >= params.sample_rate / 2.0:
            raise DataError(
                f"target {i} at {tgt.range_m} m is beyond the unambiguous range "
                f"({params.unambiguous_range:.1f} m)"
            )
        f_beat = k * 2.0 * (tgt.range_m + tgt.velocity * t) / SPEED_OF_LIGHT
        out += tgt.amplitude * np.exp(-2j * np.pi * f_beat * t)
    return ComplexSeries(out, params.dt)


def instantaneous_intf_freq(params: RadarParams, intf: InterferenceParams, t):
    """Instantaneous beat frequency of the dechirped interferer, K1*t + K2."""
    k1 = params.chirp_rate - intf.chirp_rate
    k2 = params.f0 - intf.fI0 + intf.chirp_rate * intf.delay
    return k1 * np.asarray(t, dtype=float) + k2


def _interference_mask(params: RadarParams, intf: InterferenceParams, f_lp: float) -> np.ndarray:
    t = np.arange(params.n_samples) / params.sample_rate
    active = (t >= intf.delay) & (t <= intf.delay + intf.sweep_time_i)
    inband = np.abs(instantaneous_intf_freq(params, intf, t)) <= f_lp
    return active & inband


def gen_interference_beat(
    params: RadarParams, intf: InterferenceParams, f_lp: float | None = None
) -> ComplexSeries:
    """Dechirped, low-pass-masked interference beat signal.

    Nonzero only where the interferer is active and its instantaneous beat
    frequency lies within ``f_lp`` (default fs/3).  An interferer with the
    victim's own slope whose constant beat frequency falls in band is still
    generated but flagged with :class:`GhostTargetWarning`.
    """
    if f_lp is None:
        f_lp = DEFAULT_LOWPASS_FRACTION * params.sample_rate
    n = params.n_samples
    t = np.arange(n) / params.sample_rate
    k = params.chirp_rate
    ki = intf.chirp_rate
    k1 = k - ki
    k2 = params.f0 - intf.fI0 + ki * intf.delay
    if k1 == 0.0 and abs(k2) <= f_lp:
        warnings.warn(
            "interferer matches the victim sweep slope and lands in-band: "
            "it dechirps to a constant tone (ghost target)",
            GhostTargetWarning,
            stacklevel=2,
        )
    mask = _interference_mask(params, intf, f_lp)
    # a_I carries the interferer's start-phase terms; the quadratic/linear
    # phase is the dechirp residue
    a_i = intf.amplitude * np.exp(
        2j * np.pi * (0.5 * ki * intf.delay**2 - intf.fI0 * intf.delay)
    )
    phase = 2.0 * np.pi * (0.5 * (ki - k) * t**2 + (intf.fI0 - params.f0 - ki * intf.delay) * t)
    out = np.where(mask, a_i * np.exp(1j * phase), 0.0 + 0.0j)
    return ComplexSeries(out, params.dt)


def predicted_gap(
    params: RadarParams,
    intf: InterferenceParams,
    f_lp: float | None = None,
    guard: int = 0,
) -> GapSpec:
    """Analytic ground-truth gap: sample support of the masked interference.

    Returns the smallest index interval containing every sample where the
    interferer is active and in-band, widened by ``guard`` samples each side
    and clamped to the sweep.
    """
    if f_lp is None:
        f_lp = DEFAULT_LOWPASS_FRACTION * params.sample_rate
    mask = _interference_mask(params, intf, f_lp)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        raise DataError("interference outside band: no contaminated samples")
    gap = GapSpec(int(hits[0]), int(hits[-1]))
    return gap.widened(guard, params.n_samples)


def add_noise(series: ComplexSeries, snr_db: float, seed: int) -> ComplexSeries:
    """Add circularly-symmetric complex white Gaussian noise at a given SNR.

    ``snr_db = inf`` returns the series unchanged.  Deterministic for a
    given seed.
    """
    if np.isposinf(snr_db):
        return series
    p_sig = series.power()
    if p_sig == 0.0:
        raise DataError("cannot set an SNR on an all-zero series")
    p_noise = p_sig / (10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    scale = np.sqrt(p_noise / 2.0)
    noise = scale * (
        rng.standard_normal(len(series)) + 1j * rng.standard_normal(len(series))
    )
    return series.with_samples(series.samples + noise)


@dataclass(frozen=True)
class ExtendedTargetConfig:
    """Random cluster of closely spaced scatterers, drawn from the scenario seed."""

    n_scatterers: int = 15
    range_start_m: float = 3000.0
    spacing_min_m: float = 1.0
    spacing_max_m: float = 1.8
    amplitude_max: float = 0.05


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulated sweep.

    ``targets`` holds explicit scatterers; ``extended`` draws them from the
    seed instead.  When ``intf_amp_factor`` is set, the interferer amplitude
    is ``factor * max|target amplitude|`` (amplitude-domain SIR), overriding
    ``interference.amplitude``.
    """

    radar: RadarParams
    targets: tuple[Target, ...] = ()
    extended: ExtendedTargetConfig | None = None
    interference: InterferenceParams | None = None
    snr_db: float = 15.0
    f_lp: float | None = None
    intf_amp_factor: float | None = 20.0
    seed: int = 0
    n_sweeps: int = 1


def _draw_extended_targets(cfg: ExtendedTargetConfig, rng: np.random.Generator) -> tuple[Target, ...]:
    spacings = rng.uniform(cfg.spacing_min_m, cfg.spacing_max_m, cfg.n_scatterers - 1)
    ranges = cfg.range_start_m + np.concatenate([[0.0], np.cumsum(spacings)])
    amps = rng.uniform(0.0, cfg.amplitude_max, cfg.n_scatterers)
    phases = rng.uniform(0.0, 2.0 * np.pi, cfg.n_scatterers)
    return tuple(
        Target(float(r), complex(a * np.exp(1j * p)))
        for r, a, p in zip(ranges, amps, phases)
    )


def resolve_targets(cfg: ScenarioConfig) -> tuple[Target, ...]:
    """Concrete target set of a scenario (draws extended clusters from the seed)."""
    if cfg.extended is not None:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0x7A26]))
        return _draw_extended_targets(cfg.extended, rng)
    return tuple(cfg.targets)


def _resolve_interference(cfg: ScenarioConfig, targets: tuple[Target, ...]) -> InterferenceParams | None:
    intf = cfg.interference
    if intf is None:
        return None
    if cfg.intf_amp_factor is not None and targets:
        strongest = max(abs(t.amplitude) for t in targets)
        intf = replace(intf, amplitude=complex(cfg.intf_amp_factor * strongest))
    return intf


def _noise_seed(seed: int, stream: int) -> int:
    return int(np.random.SeedSequence([seed, 0x51EE, stream]).generate_state(1)[0])


def build_scenario(cfg: ScenarioConfig) -> tuple[ComplexSeries, ComplexSeries, GapSpec]:
    """Build one contaminated sweep plus its interference-free reference.

    Returns ``(contaminated, reference, truth_gap)`` where ``reference`` is
    the noisy target beat, ``contaminated = reference + interference`` and
    ``truth_gap`` is the analytic support of the masked interference.
    """
    targets = resolve_targets(cfg)
    reference = gen_target_beat(cfg.radar, list(targets))
    reference = add_noise(reference, cfg.snr_db, _noise_seed(cfg.seed, 0))
    intf = _resolve_interference(cfg, targets)
    if intf is None:
        raise DataError("scenario has no interference; nothing to mitigate")
    beat_i = gen_interference_beat(cfg.radar, intf, cfg.f_lp)
    contaminated = reference.with_samples(reference.samples + beat_i.samples)
    truth_gap = predicted_gap(cfg.radar, intf, cfg.f_lp)
    return contaminated, reference, truth_gap


def clean_reference(cfg: ScenarioConfig) -> ComplexSeries:
    """Noise-free, interference-free beat signal of a scenario."""
    return gen_target_beat(cfg.radar, list(resolve_targets(cfg)))


def gen_cpi(
    cfg: ScenarioConfig,
    intf_phase_jitter: bool = True,
) -> tuple[np.ndarray, np.ndarray, GapSpec]:
    """Coherent processing interval: ``cfg.n_sweeps`` consecutive sweeps.

    Per sweep ``m`` each target advances by ``v * m * T`` and picks up the
    carrier Doppler rotation ``exp(-4j*pi*f0*v*m*T/c)``.  The interferer hits
    the same sample interval in every sweep; with ``intf_phase_jitter`` its
    start phase is randomized per sweep, which spreads it over all Doppler
    bins (one coherent repeat would collapse into the zero-Doppler bin).

    Returns ``(contaminated, reference, truth_gap)`` as
    ``[n_sweeps, n_samples]`` arrays.
    """
    if cfg.n_sweeps < 1:
        raise DataError("n_sweeps must be >= 1")
    params = cfg.radar
    targets = resolve_targets(cfg)
    intf = _resolve_interference(cfg, targets)
    if intf is None:
        raise DataError("scenario has no interference; nothing to mitigate")
    t_sweep = params.sweep_time
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xC91]))
    beat_i = gen_interference_beat(params, intf, cfg.f_lp).samples
    truth_gap = predicted_gap(params, intf, cfg.f_lp)

    reference = np.empty((cfg.n_sweeps, params.n_samples), dtype=np.complex128)
    contaminated = np.empty_like(reference)
    tvec = np.arange(params.n_samples) / params.sample_rate
    for m in range(cfg.n_sweeps):
        sweep = np.zeros(params.n_samples, dtype=np.complex128)
        for tgt in targets:
            carrier = np.exp(
                -4j * np.pi * params.f0 * tgt.velocity * m * t_sweep / SPEED_OF_LIGHT
            )
            d = tgt.range_m + tgt.velocity * (m * t_sweep + tvec)
            f_beat = params.chirp_rate * 2.0 * d / SPEED_OF_LIGHT
            sweep += tgt.amplitude * carrier * np.exp(-2j * np.pi * f_beat * tvec)
        noisy = add_noise(
            ComplexSeries(sweep, params.dt), cfg.snr_db, _noise_seed(cfg.seed, m + 1)
        ).samples
        reference[m] = noisy
        jitter = np.exp(2j * np.pi * rng.uniform()) if intf_phase_jitter else 1.0
        contaminated[m] = noisy + jitter * beat_i
    return contaminated, reference, truth_gap


def point_target_scenario(seed: int = 0, snr_db: float = 15.0) -> ScenarioConfig:
    """Three point targets at 2/5/5.1 km with an opposite-slope interferer.

    The interferer shares the victim's center frequency, sweeps with the
    opposite slope and starts 70 us early; with a 7.98 MHz low-pass cutoff
    its dechirped support is samples 1982..3178 (165.1-264.9 us), i.e. a
    ~20% contamination window centered at 215 us.
    """
    radar = RadarParams(
        f0=2.98e9, bandwidth=40e6, sweep_time=500e-6, sample_rate=12e6
    )
    targets = (
        Target(2000.0, 1.0 + 0.0j),
        Target(5000.0, 0.2 + 0.0j),
        Target(5100.0, 0.1 + 0.0j),
    )
    interference = InterferenceParams(
        fI0=3.02e9, bandwidth_i=-40e6, sweep_time_i=500e-6, delay=-70e-6
    )
    return ScenarioConfig(
        radar=radar,
        targets=targets,
        interference=interference,
        snr_db=snr_db,
        f_lp=7.98e6,
        intf_amp_factor=20.0,
        seed=seed,
    )


def extended_target_scenario(seed: int = 0, snr_db: float = 15.0) -> ScenarioConfig:
    """Fifteen closely spaced scatterers near 3 km, interferer slope -0.98K.

    The cutoff is chosen so the contaminated window covers ~24.3% of the
    sweep.
    """
    radar = RadarParams(
        f0=2.98e9, bandwidth=40e6, sweep_time=500e-6, sample_rate=12e6
    )
    interference = InterferenceParams(
        fI0=3.0196e9, bandwidth_i=-39.2e6, sweep_time_i=500e-6, delay=-70e-6
    )
    return ScenarioConfig(
        radar=radar,
        extended=ExtendedTargetConfig(),
        interference=interference,
        snr_db=snr_db,
        f_lp=9.6228e6,
        intf_amp_factor=20.0,
        seed=seed,
    )
