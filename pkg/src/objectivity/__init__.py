"""Objectivity bounds for quantum channels whose input has an arbitrary discrete spectrum."""

__version__ = "0.1.0"

from .bounds import (
    ObjectivityParams,
    ZetaBreakdown,
    optimize_d,
    pureloss_envelope,
    qi_ranard,
    qr_threshold,
    zeta_exact_m,
    zeta_general,
    zeta_special,
)
from .discord import SlackInputs, convergence_profile, slack
from .errors import (
    ConvergenceFailure,
    EnergyTooLow,
    NotSummable,
    ObjectivityError,
    OracleAssertionError,
    RegimeViolation,
)
from .gibbs import GibbsSolution, binary_entropy, gibbs_entropy, solve_beta
from .pureloss import LowerBoundResult, lower_bound, optimal_r, tmsv_overlap
from .report import SweepReport
from .spectra import Family, Spectrum, local_entropy, parse_spectrum, tail_epsilon

__all__ = [
    "ConvergenceFailure",
    "EnergyTooLow",
    "Family",
    "GibbsSolution",
    "LowerBoundResult",
    "NotSummable",
    "ObjectivityError",
    "ObjectivityParams",
    "OracleAssertionError",
    "RegimeViolation",
    "SlackInputs",
    "Spectrum",
    "SweepReport",
    "ZetaBreakdown",
    "binary_entropy",
    "convergence_profile",
    "gibbs_entropy",
    "local_entropy",
    "lower_bound",
    "optimal_r",
    "optimize_d",
    "parse_spectrum",
    "pureloss_envelope",
    "qi_ranard",
    "qr_threshold",
    "slack",
    "solve_beta",
    "tail_epsilon",
    "tmsv_overlap",
    "zeta_exact_m",
    "zeta_general",
    "zeta_special",
]
