"""Expected transmission phases and outage capacity for incremental relaying
with noisy one-bit ACK/NACK feedback."""

from ._core import (
    CapacityResult,
    ChannelParams,
    Conditioning,
    FeedbackObservation,
    InternalError,
    LevelEstimate,
    ProfileEstimate,
    SimReport,
    SolverError,
    Strategy,
    baf_capacity,
    decode_profile,
    decode_threshold,
    df_capacity,
    empirical_decode_profile,
    expected_phases,
    expected_phases_one_relay,
    expected_phases_tree,
    outage_probability_empirical,
    phase_derivative_sign,
    phase_tree_leaves,
    simulate,
    source_outage_prob,
)

__all__ = [
    "CapacityResult",
    "ChannelParams",
    "Conditioning",
    "FeedbackObservation",
    "InternalError",
    "LevelEstimate",
    "ProfileEstimate",
    "SimReport",
    "SolverError",
    "Strategy",
    "baf_capacity",
    "decode_profile",
    "decode_threshold",
    "df_capacity",
    "empirical_decode_profile",
    "expected_phases",
    "expected_phases_one_relay",
    "expected_phases_tree",
    "outage_probability_empirical",
    "phase_derivative_sign",
    "phase_tree_leaves",
    "simulate",
    "source_outage_prob",
]

__version__ = "0.1.0"
