"""Finite-dimensional brute-force checks of the channel constructions."""

from .channels import (
    attenuator,
    dephasing_channel,
    identity_channel,
    nsplitter_gaps,
    nsplitter_reduce,
    random_channel,
    rng,
    tmsv_overlap_check,
)
from .choi import (
    FChoiState,
    PovmDistanceReport,
    MPConstruction,
    TruncationCheck,
    f_choi,
    fragment_channel,
    povm_distance_probe,
    choi_diamond_bound,
    mp_construct,
    sampled_diamond_lower,
    truncation_check,
)
from .info import discord_numeric, mutual_information
from .linalg import DensityOperator, KrausChannel, Povm, partial_trace, trace_norm
from .suite import SuiteResult, run_suites

__all__ = [
    "DensityOperator",
    "FChoiState",
    "KrausChannel",
    "PovmDistanceReport",
    "MPConstruction",
    "Povm",
    "SuiteResult",
    "TruncationCheck",
    "attenuator",
    "dephasing_channel",
    "discord_numeric",
    "f_choi",
    "fragment_channel",
    "identity_channel",
    "povm_distance_probe",
    "choi_diamond_bound",
    "mp_construct",
    "mutual_information",
    "nsplitter_gaps",
    "nsplitter_reduce",
    "partial_trace",
    "random_channel",
    "rng",
    "run_suites",
    "sampled_diamond_lower",
    "tmsv_overlap_check",
    "trace_norm",
    "truncation_check",
]
