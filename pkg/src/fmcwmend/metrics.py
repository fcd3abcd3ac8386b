"""Reconstruction-quality metrics and the gap-duration/SNR Monte Carlo study.

RSNR compares a reconstruction against the clean (noise- and
interference-free) reference: ``20*log10(||s0|| / ||s0 - s_hat||)``.  The
correlation coefficient is the normalized inner product
``rho = <s_hat, s0> / (||s0||*||s_hat||)`` whose modulus measures similarity
and whose argument is the global phase rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError, EstimationError
from .mitigate import MpConfig, reconstruct_burg, reconstruct_mp, zero_gap
from .sigmodel import ComplexSeries, MitigationMethod
from .synth import (
    ScenarioConfig,
    build_scenario,
    clean_reference,
    point_target_scenario,
)

RSNR_CAP_DB = 300.0


def rsnr(reference: ComplexSeries, estimate: ComplexSeries) -> float:
    """Relative SNR in dB, capped at 300 dB for exact reconstructions."""
    if len(reference) != len(estimate):
        raise DataError(
            f"length mismatch: reference {len(reference)}, estimate {len(estimate)}"
        )
    ref_norm = np.linalg.norm(reference.samples)
    if ref_norm == 0.0:
        raise DataError("reference signal is identically zero")
    err_norm = np.linalg.norm(reference.samples - estimate.samples)
    if err_norm == 0.0:
        return RSNR_CAP_DB
    return float(min(20.0 * np.log10(ref_norm / err_norm), RSNR_CAP_DB))


def corr_coeff(reference: ComplexSeries, estimate: ComplexSeries) -> complex:
    """Normalized complex inner product <estimate, reference>, |rho| <= 1."""
    if len(reference) != len(estimate):
        raise DataError(
            f"length mismatch: reference {len(reference)}, estimate {len(estimate)}"
        )
    ref_norm = np.linalg.norm(reference.samples)
    est_norm = np.linalg.norm(estimate.samples)
    if ref_norm == 0.0 or est_norm == 0.0:
        raise DataError("correlation undefined for a zero-norm signal")
    return complex(np.vdot(estimate.samples, reference.samples) / (ref_norm * est_norm))


@dataclass(frozen=True)
class SweepStudyConfig:
    """Grid study over SNR and relative interference duration.

    Per cell, ``trials`` independent scenarios are drawn; the interferer
    low-pass cutoff is adjusted so the contaminated window covers exactly the
    requested fraction of the sweep.  Per-trial seeds derive from
    ``(base_seed, snr_index, gap_index, trial_index)`` so any cell is
    reproducible in isolation.
    """

    snr_grid_db: tuple[float, ...] = (-30.0, -20.0, -10.0, 0.0, 10.0)
    gap_fractions: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5)
    trials: int = 100
    base_seed: int = 0
    methods: tuple[MitigationMethod, ...] = (
        MitigationMethod.MP,
        MitigationMethod.BURG,
        MitigationMethod.ZEROING,
    )
    scenario: ScenarioConfig = field(default_factory=point_target_scenario)
    mp: MpConfig = field(default_factory=lambda: MpConfig(order=3))
    burg_order: int = 3


@dataclass(frozen=True)
class StatsRow:
    snr_db: float
    gap_pct: float
    method: str
    trials: int
    failures: int
    mean_rsnr_db: float
    mean_abs_rho: float
    mean_arg_rho_rad: float


CSV_HEADER = "snr_db,gap_pct,method,trials,failures,mean_rsnr_db,mean_abs_rho,mean_arg_rho_rad"


@dataclass
class StatsTable:
    rows: list[StatsRow]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.snr_db:.10g},{r.gap_pct:.10g},{r.method},{r.trials},"
                f"{r.failures},{r.mean_rsnr_db:.10g},{r.mean_abs_rho:.10g},"
                f"{r.mean_arg_rho_rad:.10g}"
            )
        return "\n".join(lines) + "\n"

    def cell(self, snr_db: float, gap_pct: float, method: str) -> StatsRow:
        for r in self.rows:
            if (
                r.method == method
                and abs(r.snr_db - snr_db) < 1e-9
                and abs(r.gap_pct - gap_pct) < 1e-9
            ):
                return r
        raise KeyError((snr_db, gap_pct, method))


def _trial_seed(base_seed: int, i_snr: int, i_gap: int, trial: int) -> int:
    ss = np.random.SeedSequence([base_seed, i_snr, i_gap, trial])
    return int(ss.generate_state(1)[0])


def _study_scenario(cfg: SweepStudyConfig, snr_db: float, frac: float, seed: int) -> ScenarioConfig:
    base = cfg.scenario
    if base.interference is None:
        raise DataError("study scenario needs an interferer")
    k1 = abs(base.radar.chirp_rate - base.interference.chirp_rate)
    f_lp = 0.5 * k1 * frac * base.radar.sweep_time
    return replace(base, snr_db=snr_db, f_lp=f_lp, seed=seed)


def _reconstruct(method, contaminated, gap, cfg: SweepStudyConfig) -> ComplexSeries:
    if method is MitigationMethod.MP:
        return reconstruct_mp(contaminated, gap, cfg.mp)[0]
    if method is MitigationMethod.BURG:
        return reconstruct_burg(contaminated, gap, cfg.burg_order)
    return zero_gap(contaminated, gap)


def monte_carlo(cfg: SweepStudyConfig) -> StatsTable:
    """Mean RSNR and correlation per (SNR, gap fraction, method) cell.

    Failed trials are counted per cell and excluded from the means; a cell
    with no surviving trial reports NaN means.  Deterministic for a given
    ``base_seed``.
    """
    if cfg.trials < 1:
        raise DataError("trials must be >= 1")
    rows: list[StatsRow] = []
    for i_snr, snr_db in enumerate(cfg.snr_grid_db):
        for i_gap, frac in enumerate(cfg.gap_fractions):
            per_method = {
                m: {"rsnr": [], "rho": [], "failures": 0} for m in cfg.methods
            }
            for trial in range(cfg.trials):
                seed = _trial_seed(cfg.base_seed, i_snr, i_gap, trial)
                scen = _study_scenario(cfg, snr_db, frac, seed)
                contaminated, _, gap = build_scenario(scen)
                s0 = clean_reference(scen)
                for method in cfg.methods:
                    acc = per_method[method]
                    try:
                        est = _reconstruct(method, contaminated, gap, cfg)
                    except EstimationError:
                        acc["failures"] += 1
                        continue
                    acc["rsnr"].append(rsnr(s0, est))
                    acc["rho"].append(corr_coeff(s0, est))
            for method in cfg.methods:
                acc = per_method[method]
                vals = np.asarray(acc["rsnr"], dtype=float)
                rhos = np.asarray(acc["rho"], dtype=complex)
                rows.append(
                    StatsRow(
                        snr_db=float(snr_db),
                        gap_pct=float(100.0 * frac),
                        method=method.value,
                        trials=cfg.trials,
                        failures=acc["failures"],
                        mean_rsnr_db=float(vals.mean()) if vals.size else float("nan"),
                        mean_abs_rho=float(np.abs(rhos).mean()) if rhos.size else float("nan"),
                        mean_arg_rho_rad=float(np.angle(rhos).mean()) if rhos.size else float("nan"),
                    )
                )
    return StatsTable(rows)
