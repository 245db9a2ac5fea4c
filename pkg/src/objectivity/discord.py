"""Slack in the discord continuity bound and its decay with the fragment count."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import ObjectivityParams, optimize_d
from .errors import RegimeViolation
from .gibbs import binary_entropy, gibbs_entropy
from .report import SweepReport
from .spectra import Spectrum


@dataclass(frozen=True)
class SlackInputs:
    zeta: float
    delta: float
    spec_A: Spectrum
    E_A: float

    def __post_init__(self):
        if self.zeta < 0:
            raise ValueError("zeta must be nonnegative")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.E_A > 0:
            raise ValueError("E_A must be positive")

    @property
    def eps_prime(self) -> float:
        return self.zeta / self.delta

    @property
    def Delta(self) -> float:
        e = self.eps_prime
        return 0.5 * e / (1.0 + e)

    @property
    def regime_valid(self) -> bool:
        return self.eps_prime <= 1.0


def slack(inp: SlackInputs) -> float:
    """``(2e + 4D) S(gamma(E_A/D)) + (1+e) h(e/(1+e)) + 2 h(D)`` in bits.

    ``e = zeta/delta`` and ``D = e / (2(1+e))``.  Zero when ``zeta = 0``.
    """
    if not inp.regime_valid:
        raise RegimeViolation(f"eps' = {inp.eps_prime} exceeds 1")
    e, dd = inp.eps_prime, inp.Delta
    if e == 0.0:
        return 0.0
    s_gibbs = gibbs_entropy(inp.spec_A, inp.E_A / dd)
    return (2.0 * e + 4.0 * dd) * s_gibbs + (1.0 + e) * binary_entropy(e / (1.0 + e)) + 2.0 * binary_entropy(dd)


PROFILE_COLUMNS = ("N", "d_opt", "zeta", "delta", "eps_prime", "regime_valid", "slack", "excess")


def convergence_profile(spec_B: Spectrum, spec_A: Spectrum, E_A: float, E_B: float, N_grid, S_A: float | None = None) -> SweepReport:
    """Sweep the averaged mutual-information excess with ``delta = sqrt(zeta)``.

    For each ``N``, ``zeta`` is optimised over ``d`` for ``spec_B`` at energy
    ``E_B``.  The averaged excess ``E_j I(A:B_j) - I(A:B_a)`` is at most
    ``(1 - delta) slack + 2 delta S_A``; the ``excess`` column reports the
    looser ``slack + 2 delta S_A``, which is monotone in ``N`` because both
    terms are.  ``S_A`` defaults to the Gibbs entropy of ``spec_A`` at
    ``E_A``, the largest entropy compatible with that energy.
    Rows with ``eps' > 1`` carry ``nan`` for slack and excess.
    """
    grid = sorted(float(n) for n in N_grid)
    if not grid:
        raise ValueError("N grid must be nonempty")
    if S_A is None:
        S_A = gibbs_entropy(spec_A, E_A)
    header = {
        "command": "discord-slack",
        "spec_A": str(spec_A),
        "spec_B": str(spec_B),
        "E_A": E_A,
        "E_B": E_B,
        "S_A": S_A,
    }
    report = SweepReport(header, PROFILE_COLUMNS)
    for N in grid:
        # delta only rescales the bound, so any admissible value works here
        best = optimize_d(spec_B, ObjectivityParams(E_B, 0.5, N))
        zeta = best.zeta
        delta = math.sqrt(zeta)
        valid = 0.0 < delta < 1.0
        s = excess = math.nan
        if valid:
            s = slack(SlackInputs(zeta, delta, spec_A, E_A))
            excess = s + 2.0 * delta * S_A
        report.rows.append(
            {
                "N": N,
                "d_opt": best.d,
                "zeta": zeta,
                "delta": delta,
                "eps_prime": delta,
                "regime_valid": valid,
                "slack": s,
                "excess": excess,
            }
        )
    return report
