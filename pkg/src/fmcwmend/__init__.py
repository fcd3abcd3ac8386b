"""FMCW radar interference mitigation via matrix-pencil gap reconstruction."""

from .errors import (
    ConfigError,
    DataError,
    EstimationError,
    FmcwMendError,
    NoInterferenceError,
)
from .metrics import (
    StatsRow,
    StatsTable,
    SweepStudyConfig,
    corr_coeff,
    monte_carlo,
    rsnr,
)
from .mitigate import (
    MpConfig,
    burg_ar_fit,
    detect_interference,
    reconstruct_burg,
    reconstruct_mp,
    zero_gap,
)
from .pencil import (
    build_model,
    estimate_poles,
    fit_amplitudes,
    hankel_pair,
    mp_contiguous,
    select_order_sv,
    stacked_pencil,
    synthesize,
)
from .sigmodel import (
    SPEED_OF_LIGHT,
    ComplexSeries,
    ExpSumModel,
    GapSpec,
    InterferenceParams,
    MitigationMethod,
    MitigationReport,
    RadarParams,
    Target,
    split_at_gap,
    splice,
)
from .spectra import (
    RangeProfile,
    RDMap,
    Window,
    mitigate_cpi,
    range_doppler,
    range_profile,
    to_db,
)
from .synth import (
    ExtendedTargetConfig,
    GhostTargetWarning,
    ScenarioConfig,
    add_noise,
    build_scenario,
    clean_reference,
    extended_target_scenario,
    gen_cpi,
    gen_interference_beat,
    gen_target_beat,
    instantaneous_intf_freq,
    point_target_scenario,
    predicted_gap,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "ComplexSeries",
    "ConfigError",
    "DataError",
    "EstimationError",
    "ExpSumModel",
    "ExtendedTargetConfig",
    "FmcwMendError",
    "GapSpec",
    "GhostTargetWarning",
    "InterferenceParams",
    "MitigationMethod",
    "MitigationReport",
    "MpConfig",
    "NoInterferenceError",
    "RDMap",
    "RadarParams",
    "RangeProfile",
    "ScenarioConfig",
    "StatsRow",
    "StatsTable",
    "SweepStudyConfig",
    "Target",
    "Window",
    "add_noise",
    "build_model",
    "build_scenario",
    "burg_ar_fit",
    "clean_reference",
    "corr_coeff",
    "detect_interference",
    "estimate_poles",
    "extended_target_scenario",
    "fit_amplitudes",
    "gen_cpi",
    "gen_interference_beat",
    "gen_target_beat",
    "hankel_pair",
    "instantaneous_intf_freq",
    "mitigate_cpi",
    "monte_carlo",
    "mp_contiguous",
    "point_target_scenario",
    "predicted_gap",
    "range_doppler",
    "range_profile",
    "reconstruct_burg",
    "reconstruct_mp",
    "rsnr",
    "select_order_sv",
    "splice",
    "split_at_gap",
    "stacked_pencil",
    "synthesize",
    "to_db",
    "zero_gap",
]
