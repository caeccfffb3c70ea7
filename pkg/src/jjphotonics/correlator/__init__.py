from .chain import DEFAULT_FIR, ChainModel, band_limited_noise, on_off_input, simulate_chain
from .demod import EnvelopeRecord, demodulate_envelopes, fir_response
from .correlate import (
    CorrelationResult,
    CorrelatorAccumulator,
    RawCorrelators,
    assemble_g1_g2,
    block_statistics,
    direct_correlators,
    gamma1_cross,
    gamma2_cross,
)
from .endtoend import EndToEndConfig, run_source_through_chain
from .pulsed import PulsedCorrelationResult, pulsed_correlators
from .calibrate import CalibrationRecord, calibrate, drift_compensate, s_in_photons
from .records import read_record, write_record

__all__ = [
    "DEFAULT_FIR",
    "EndToEndConfig",
    "CalibrationRecord",
    "ChainModel",
    "CorrelationResult",
    "CorrelatorAccumulator",
    "EnvelopeRecord",
    "PulsedCorrelationResult",
    "RawCorrelators",
    "assemble_g1_g2",
    "band_limited_noise",
    "block_statistics",
    "calibrate",
    "demodulate_envelopes",
    "direct_correlators",
    "drift_compensate",
    "fir_response",
    "gamma1_cross",
    "gamma2_cross",
    "on_off_input",
    "pulsed_correlators",
    "read_record",
    "run_source_through_chain",
    "s_in_photons",
    "simulate_chain",
    "write_record",
]
