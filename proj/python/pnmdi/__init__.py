"""Photon-number MDI key distribution simulator (compiled core)."""

from ._core import (
    ChannelParams,
    DetectorParams,
    KeyRateBreakdown,
    KeyRateRow,
    OptimizationResult,
    SweepRow,
    bound_point,
    charlie_marginals,
    charlie_povm_resolution,
    check_state_statistics,
    classical_charlie_prob,
    conditional_state,
    distance_sweep,
    eve_bound_from_tomography,
    exact_statistics,
    fixture_coefficients,
    key_rate,
    optimize_coefficients,
    optimize_gamma,
    plob_bound,
    realistic_key_rate,
    reconstruct_state,
    reverse_coherent_information,
    sample_statistics,
    single_repeater_bound,
    transmissivity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
