"""Lower bound on the distance between an N-splitter output and any measure-and-prepare channel.

The witness pair is a two-mode squeezed vacuum input ``psi_r`` and a
squeezed-vacuum test vector ``phi_s``.  In ``t = tanh(s)^2`` the quantity to
maximise is ``g(t) = t (1 - t) / (N - t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OracleAssertionError


@dataclass(frozen=True)
class LowerBoundResult:
    N: int
    t_star: float
    s_star: float
    E_bar: float
    value: float


def _check_n(N):
    if int(N) != N or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N}")


def tmsv_overlap(N: int, r: float, s: float) -> float:
    """``<phi_s| (id x L_{1/N})[psi_r] |phi_s>`` for the transmissivity-1/N attenuator L."""
    _check_n(N)
    if r < 0 or s < 0:
        raise ValueError("squeezing parameters must be nonnegative")
    den = math.sqrt(N) * math.cosh(r) * math.cosh(s) - math.sinh(r) * math.sinh(s)
    return N / den**2


def optimal_r(N: int, s: float) -> float:
    """Input squeezing maximising :func:`tmsv_overlap` at fixed ``s``.

    ``sinh(r)^2 = t / (N - t)`` with ``t = tanh(s)^2``.
    """
    _check_n(N)
    if s < 0:
        raise ValueError("s must be nonnegative")
    t = math.tanh(s) ** 2
    return math.asinh(math.sqrt(t / (N - t)))


def lower_bound(N: int) -> LowerBoundResult:
    """Closed-form ``2 sup_t g(t)``.

    The maximiser ``t* = N - sqrt(N^2 - N)`` is evaluated as
    ``1 / (1 + sqrt(1 - 1/N))`` and the value as ``2 / (N (1 + sqrt(1 - 1/N))^2)``;
    both forms are free of cancellation for any ``N``.
    """
    _check_n(N)
    u = math.sqrt(1.0 - 1.0 / N)
    t_star = 1.0 / (1.0 + u)
    value = 2.0 / (N * (1.0 + u) ** 2)
    # value exceeds 1/(2N-1) by a relative 1/(8N^2) or so; allow a few ulps
    floor = 1.0 / (2 * N - 1)
    if value < floor * (1.0 - 8.0 * 2.0**-52):
        raise OracleAssertionError(f"lower bound {value} fell below 1/(2N-1) = {floor}")
    return LowerBoundResult(
        N=int(N),
        t_star=t_star,
        s_star=math.atanh(math.sqrt(t_star)),
        E_bar=t_star / (N - t_star),
        value=value,
    )
