"""Gibbs states of a discrete spectrum and the binary entropy.

All entropies are in bits.  Sums over infinite spectra are truncated once a
ratio-test remainder bound drops below the spectrum's series tolerance
(relative to the running sum); the harmonic spectrum uses its geometric
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, EnergyTooLow
from .spectra import Family, Spectrum

LOG2E = 1.0 / math.log(2.0)
ENERGY_RTOL = 1e-12
MAX_BISECTIONS = 200
# bracketing halves/doubles beta; enough steps to reach the float range limits
MAX_BRACKET_STEPS = 1000


@dataclass(frozen=True)
class GibbsSolution:
    beta: float
    Z: float
    entropy_bits: float
    E: float
    mean_energy: float


def _log_weights_moments(spec: Spectrum, beta: float):
    """Return ``(ln Z, <H>)`` at inverse temperature ``beta``."""
    if spec.family is Family.HARMONIC:
        # Z = e^-b / (1 - e^-b),  <H> = 1 / (1 - e^-b)
        one_minus = -math.expm1(-beta)
        return -beta - math.log(one_minus), 1.0 / one_minus
    e0 = spec.ground_energy
    if spec.family is Family.CUSTOM:
        f = np.asarray(spec.values)
        w = np.exp(-beta * (f - e0))
        zs = math.fsum(w)
        return -beta * e0 + math.log(zs), math.fsum(w * f) / zs

    tol = spec.series_tolerance
    z_parts, e_parts = [], []
    start = 0
    chunk = 256
    while True:
        f = spec.levels(start + chunk)[start:]
        w = np.exp(-beta * (f - e0))
        z_parts.append(math.fsum(w))
        e_parts.append(math.fsum(np.where(w > 0, w * np.where(np.isfinite(f), f, 0.0), 0.0)))
        start += chunk
        zs, es = math.fsum(z_parts), math.fsum(e_parts)
        # terms are log-concave in j beyond the flat part; bound the rest by a
        # geometric series using the last ratio
        f_last, f_next, f_after = spec.levels(start + 2)[start - 1 :]
        t_next = math.exp(-beta * (f_next - e0))
        if t_next == 0.0:
            return -beta * e0 + math.log(zs), es / zs
        rho = math.exp(-beta * (f_after - f_next)) * (f_after / f_next)
        if f_next > f_last and rho < 1.0:
            rem_z = t_next / (1.0 - rho)
            rem_e = t_next * f_next / (1.0 - rho)
            if rem_z <= tol * zs and rem_e <= tol * es:
                return -beta * e0 + math.log(zs), es / zs
        chunk = min(chunk * 2, 1 << 18)


def partition_function(spec: Spectrum, beta: float) -> float:
    """``Z(beta) = sum_j exp(-beta f_j)``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return math.exp(_log_weights_moments(spec, beta)[0])


def mean_energy(spec: Spectrum, beta: float) -> float:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return _log_weights_moments(spec, beta)[1]


def _maximally_mixed(spec: Spectrum, E: float) -> GibbsSolution:
    n = spec.num_levels
    f = np.asarray(spec.values)
    return GibbsSolution(beta=0.0, Z=float(n), entropy_bits=math.log2(n), E=E, mean_energy=float(f.mean()))


def solve_beta(spec: Spectrum, E: float) -> GibbsSolution:
    """Inverse temperature of the Gibbs state with mean energy ``E`` (bisection).

    For a finite spectrum with ``E`` at or above the mean level the
    entropy maximiser under ``Tr rho H <= E`` is the maximally mixed state,
    returned with ``beta = 0``.
    """
    e0 = spec.ground_energy
    if spec.family is Family.CUSTOM:
        f = np.asarray(spec.values)
        if np.all(f == f[0]):
            if E < f[0]:
                raise EnergyTooLow(f"E={E} below the degenerate level {f[0]}")
            return _maximally_mixed(spec, E)
        if E >= f.mean():
            return _maximally_mixed(spec, E)
    if not E > e0:
        raise EnergyTooLow(f"E={E} must exceed the ground energy {e0}")

    def residual(b):
        return _log_weights_moments(spec, b)[1] - E

    lo, hi = 1.0, 1.0
    for _ in range(MAX_BRACKET_STEPS):
        if residual(hi) < 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceFailure(f"could not bracket beta from above for E={E}")
    for _ in range(MAX_BRACKET_STEPS):
        if residual(lo) > 0:
            break
        lo /= 2.0
    else:
        raise ConvergenceFailure(f"could not bracket beta from below for E={E}")

    tol = ENERGY_RTOL * max(1.0, E)
    mid = lo
    for _ in range(MAX_BISECTIONS):
        mid = math.sqrt(lo * hi) if hi > 2.0 * lo else 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) <= tol or mid in (lo, hi):
            break
        if r > 0:
            lo = mid
        else:
            hi = mid
    log_z, u = _log_weights_moments(spec, mid)
    if abs(u - E) > 1e-10 * E:
        raise ConvergenceFailure(f"bisection stalled at beta={mid}: <H>={u}, target {E}")
    entropy = log_z * LOG2E + mid * E * LOG2E
    return GibbsSolution(beta=mid, Z=math.exp(log_z), entropy_bits=entropy, E=E, mean_energy=u)


def gibbs_entropy(spec: Spectrum, E: float) -> float:
    """Entropy in bits of the Gibbs state with mean energy ``E``."""
    return solve_beta(spec, E).entropy_bits


def binary_entropy(x: float) -> float:
    """``h(x) = -x log2 x - (1-x) log2(1-x)``, with ``h(0) = h(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)
