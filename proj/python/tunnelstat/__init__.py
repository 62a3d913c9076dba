"""Scattering statistics of two fermionised cold atoms on 1D barriers."""

from ._tunnelstat import (
    AmplitudePair,
    AmplitudeTable,
    ActionExpansion,
    BarrierSpec,
    Dataset,
    GaussianPacket,
    OracleOutcome,
    OutcomeStats,
    Resonance,
    StatisticsKind,
    action_expansion,
    amplitudes,
    breit_wigner_transparency,
    broad_barrier_ptt,
    build_table,
    delta_comb,
    exchange_ratio,
    exchange_term,
    figure_tags,
    find_resonances,
    gaussian_decay_coefficient,
    initial_overlap_decay,
    log_transparency,
    mean_transmitted_number,
    mirrored,
    momentum_amplitude,
    momentum_density,
    narrowing_check,
    one_particle_probabilities,
    outcome_probabilities,
    piecewise_constant,
    position_wavefunction,
    rectangular,
    run_figure,
    run_sweep_config,
    single_resonance_ptt,
    transparency,
    two_particle_outcomes,
    two_resonance_delta_p,
)

__all__ = [name for name in dir() if not name.startswith("_")]
