"""Uplink OFDMA pilot allocation: overlapped phase-shifted block pilots
(PS-ISAC) versus interleaved combs (CI-ISAC)."""

from ._core import (
    ChannelRealization,
    ComplexityReport,
    ConfigError,
    EstimationResult,
    ExperimentSpec,
    MaskSpec,
    MaskViolation,
    PilotGrid,
    PowerMode,
    RangeConfig,
    ResultRow,
    RngStream,
    Scheme,
    SystemConfig,
    add_cp,
    apply_channel,
    complex_gaussian,
    complexity,
    dft,
    draw_channel,
    dump_cir_snapshot,
    emit_tables,
    estimate_ci_isac,
    generate_pilots,
    grid_point_config,
    idft,
    load_experiment_spec,
    load_mask,
    ls_estimate,
    mask_check,
    mask_limit_at,
    max_unambiguous_range,
    modulate_tx,
    mse,
    phase_shift,
    power_mode_from_string,
    psd,
    remove_cp,
    run_experiment,
    run_receiver,
    run_trial,
    scheme_from_string,
    separate_ps_isac,
    superpose_and_add_noise,
    to_string,
)

__all__ = [name for name in dir() if not name.startswith("_")]
