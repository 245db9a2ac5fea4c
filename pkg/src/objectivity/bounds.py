"""Objectivity bounds ``zeta`` and their optimisation over the truncation dimension.

``zeta`` is delta-free; the bound on the energy-constrained diamond distance
between a fragment subchannel and its measure-and-prepare approximation is
``zeta / delta`` (valid for a fraction ``1 - delta`` of fragments).  Values
above 2 are still reported but flagged as trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import optimize

from .spectra import Family, Spectrum, bridge_entropy_nats, local_entropy, tail_sum, trigamma

LN2 = math.log(2.0)
KAPPA = 3.0 * (16.0 * LN2) ** (1.0 / 3.0)
LAMBDA = KAPPA
ALPHA = (12.0 * math.pi**4) ** (1.0 / 3.0)
BETA_BOX = math.sqrt(8.0 * math.pi**2 / 3.0)
MU = 5.0 * LAMBDA**0.2
TRIVIAL_DISTANCE = 2.0

SPECIAL_FAMILIES = ("box", "bridge", "bridge_limit", "harmonic")

# exhaustive integer scans are done in one shot below this bracket width
_EXHAUSTIVE_WIDTH = 1 << 20
_SCAN_CHUNK = 1 << 18


@dataclass(frozen=True)
class ObjectivityParams:
    E: float
    delta: float
    N: float

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError(f"energy cap must be positive, got {self.E}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.N >= 2:
            raise ValueError(f"need at least two fragments, got N={self.N}")


@dataclass(frozen=True)
class ZetaBreakdown:
    first_term: float
    tail_term: float
    d: int
    m_opt: int | Literal["analytic"]
    zeta: float
    bound: float

    @property
    def trivial(self) -> bool:
        return self.bound > TRIVIAL_DISTANCE


def _breakdown(first, tail, d, p, m_opt="analytic"):
    first, tail = float(first), float(tail)
    zeta = first + tail
    return ZetaBreakdown(first, tail, int(d), m_opt, zeta, zeta / p.delta)


def _check_d(d, d_min=1):
    if int(d) != d or d < d_min:
        raise ValueError(f"truncation dimension must be an integer >= {d_min}, got {d}")


# --- vectorised term evaluators ---------------------------------------------


def _general_terms(spec: Spectrum, p: ObjectivityParams):
    summary = local_entropy(spec)
    cf = summary.c_f
    coeff = KAPPA * (p.E**2 * summary.sigma_bits / (p.N * cf**4)) ** (1.0 / 3.0)

    def terms(d):
        d = np.asarray(d, dtype=float)
        return coeff * d, 4.0 * p.E / cf * np.sqrt(tail_sum(spec, d))

    return terms


def _special_terms(family: str, p: ObjectivityParams, D=None, omega=None):
    E, N = p.E, p.N
    if family == "box":
        s = local_entropy(Spectrum.box()).s_nats
        coeff = ALPHA * (s * E**2 / N) ** (1.0 / 3.0)

        def terms(d):
            d = np.asarray(d, dtype=float)
            return coeff * d, BETA_BOX * E * np.sqrt(trigamma(d + 1.0))

        return terms
    if family == "bridge":
        if D is None or omega is None:
            raise ValueError("bridge family needs D and omega")
        norm = D + math.exp(-omega * D)
        s = bridge_entropy_nats(D, omega)
        coeff = (432.0 * E**2 * norm**2 * s / N) ** (1.0 / 3.0)

        def terms(d):
            d = np.asarray(d, dtype=float)
            return coeff * d, 4.0 * E * np.sqrt(norm * np.exp(-omega * d))

        return terms
    if family == "bridge_limit":
        if D is None:
            raise ValueError("bridge_limit family needs D")
        coeff = (432.0 * E**2 * D**2 * math.log(D) / N) ** (1.0 / 3.0)

        def terms(d):
            d = np.asarray(d, dtype=float)
            return coeff * d, np.zeros_like(d)

        return terms
    if family == "harmonic":

        def terms(d):
            d = np.asarray(d, dtype=float)
            return LAMBDA * (d**5 * np.log2(d) / N) ** (1.0 / 3.0), 4.0 * np.sqrt(E / d)

        return terms
    raise ValueError(f"unknown family {family!r}; expected one of {SPECIAL_FAMILIES}")


def _special_d_min(family, D):
    if family in ("bridge", "bridge_limit"):
        return int(D)
    if family == "harmonic":
        return 2
    return 1


# --- single-d evaluations ----------------------------------------------------


def zeta_general(spec: Spectrum, p: ObjectivityParams, d: int) -> ZetaBreakdown:
    """``zeta = kappa d (E^2 sigma / (N c_f^4))^{1/3} + (4E/c_f^2) eps_d`` with sigma in bits."""
    _check_d(d)
    first, tail = _general_terms(spec, p)(d)
    return _breakdown(first, tail, d, p)


def zeta_exact_m(spec: Spectrum, p: ObjectivityParams, d: int) -> ZetaBreakdown:
    """Same bound before the real relaxation: minimise over integer ``1 <= m <= N``.

    ``g(m) = a/sqrt(m) + (4E/c_f^2) eps_d + 2m/N`` with
    ``a = sqrt(32 ln2 E^2 d^3 sigma / c_f^4)``; the integer minimum sits at
    the floor or ceiling of the real stationary point ``(aN/4)^{2/3}``.
    """
    _check_d(d)
    summary = local_entropy(spec)
    cf = summary.c_f
    a = math.sqrt(32.0 * LN2 * p.E**2 * d**3 * summary.sigma_bits / cf**4)
    tail = 4.0 * p.E / cf * math.sqrt(tail_sum(spec, d))
    m_real = (a * p.N / 4.0) ** (2.0 / 3.0)
    m_max = max(1, math.floor(p.N))
    candidates = {min(max(1, c), m_max) for c in (math.floor(m_real), math.ceil(m_real))}
    best = min(candidates, key=lambda m: (a / math.sqrt(m) + 2.0 * m / p.N, m))
    return _breakdown(a / math.sqrt(best) + 2.0 * best / p.N, tail, d, p, m_opt=best)


def zeta_special(family: str, p: ObjectivityParams, d: int, *, D: int | None = None, omega: float | None = None) -> ZetaBreakdown:
    """Closed forms for the box, bridge, infinite-omega bridge and harmonic cases.

    ``bridge`` and ``bridge_limit`` need ``d >= D``; ``harmonic`` needs ``d >= 2``.
    """
    _check_d(d, _special_d_min(family, D if D is not None else 1))
    first, tail = _special_terms(family, p, D, omega)(d)
    return _breakdown(first, tail, d, p)


# --- optimisation over d ------------------------------------------------------


def _scan(terms, lo, hi):
    best_d, best_z = None, math.inf
    for start in range(lo, hi + 1, _SCAN_CHUNK):
        ds = np.arange(start, min(hi, start + _SCAN_CHUNK - 1) + 1, dtype=np.int64)
        f, t = terms(ds)
        z = f + t
        i = int(np.argmin(z))
        if z[i] < best_z:
            best_d, best_z = int(ds[i]), float(z[i])
    return best_d


def _argmin_d(terms: Callable, d_min: int, d_cap: int | None) -> int:
    """Integer minimiser of ``first + tail`` over ``d >= d_min`` (and ``<= d_cap``).

    Doubling pass until the first term dominates and zeta has risen on
    three consecutive doublings past the running best; the minimiser then
    lies between the neighbours of the best sample.  That bracket is scanned
    exhaustively, after an integer ternary search when it is very wide.
    """
    if d_cap is not None:
        return _scan(terms, d_min, d_cap)
    d = d_min
    best_d, best_z, rises = d_min, math.inf, 0
    while True:
        f, t = (float(x[0]) for x in terms(np.array([d])))
        if f + t < best_z:
            best_d, best_z, rises = d, f + t, 0
        else:
            rises += 1
        if rises >= 3 and f > t:
            break
        d *= 2
    lo, hi = max(d_min, best_d // 2), best_d * 2

    def z(x):
        f, t = terms(np.array([x]))
        return float(f[0] + t[0])

    while hi - lo > _EXHAUSTIVE_WIDTH:
        third = (hi - lo) // 3
        m1, m2 = lo + third, hi - third
        if z(m1) <= z(m2):
            hi = m2
        else:
            lo = m1
    return _scan(terms, lo, hi)


def optimize_d(target: Spectrum | str, p: ObjectivityParams, *, D: int | None = None, omega: float | None = None) -> ZetaBreakdown:
    """Minimise ``zeta`` over the integer truncation dimension.

    ``target`` is either a :class:`Spectrum` (evaluated with
    :func:`zeta_general`; a harmonic spectrum falls back to its dedicated
    closed form) or one of the family names accepted by :func:`zeta_special`.
    """
    if isinstance(target, Spectrum):
        if target.family is Family.HARMONIC:
            return optimize_d("harmonic", p)
        terms = _general_terms(target, p)
        d_min, d_cap = 1, target.num_levels
    else:
        terms = _special_terms(target, p, D, omega)
        d_min, d_cap = _special_d_min(target, D), None
    d = _argmin_d(terms, d_min, d_cap)
    f, t = terms(np.array([d]))
    return _breakdown(f[0], t[0], d, p)


# --- finite-dimensional comparison -------------------------------------------


def qi_ranard(D: int, N: float, delta: float, variant: int) -> float:
    """Qi-Ranard bounds: ``b1 = (2D^6 lnD/(N delta))^{1/2}``, ``b2 = 4(2D^5 lnD/(N delta))^{1/2}``."""
    if D < 2:
        raise ValueError("Qi-Ranard comparison needs D >= 2 (ln D = 0 is degenerate)")
    if variant == 1:
        return math.sqrt(2.0 * D**6 * math.log(D) / (N * delta))
    if variant == 2:
        return 4.0 * math.sqrt(2.0 * D**5 * math.log(D) / (N * delta))
    raise ValueError(f"variant must be 1 or 2, got {variant}")


def finite_dimensional_bound(D: int, N: float, delta: float) -> float:
    """``b = zeta/delta`` from the infinite-omega bridge with ``d = D`` and ``E = 1``."""
    return zeta_special("bridge_limit", ObjectivityParams(1.0, delta, N), D, D=D).bound


def qr_threshold(D: int, delta: float) -> float:
    """Fragment count above which ``b < 2``: ``54 D^5 lnD / delta^3``."""
    if D < 2:
        raise ValueError("threshold needs D >= 2")
    return 54.0 * D**5 * math.log(D) / delta**3


def qr_threshold_by_bisection(D: int, delta: float) -> float:
    """Root of ``b(N) = 2`` found by bisection in ``log10 N``."""

    def excess(log_n):
        return finite_dimensional_bound(D, 10.0**log_n, delta) - TRIVIAL_DISTANCE

    lo, hi = math.log10(2.0), 1.0
    while excess(hi) > 0:
        hi *= 2.0
    return 10.0 ** optimize.bisect(excess, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)


@dataclass(frozen=True)
class QrComparison:
    D: int
    delta: float
    N: float
    b: float
    b1: float
    b2: float
    threshold: float

    @property
    def b_nontrivial(self) -> bool:
        return self.b < TRIVIAL_DISTANCE

    @property
    def b_beats_b1(self) -> bool:
        return self.b < self.b1

    @property
    def b_beats_b2(self) -> bool:
        return self.b < self.b2


def qr_compare(D: int, delta: float, N: float) -> QrComparison:
    return QrComparison(
        D=D,
        delta=delta,
        N=N,
        b=finite_dimensional_bound(D, N, delta),
        b1=qi_ranard(D, N, delta, 1),
        b2=qi_ranard(D, N, delta, 2),
        threshold=qr_threshold(D, delta),
    )


# --- pure-loss envelope and Markov step ---------------------------------------


def pureloss_envelope(E: float, N: float) -> float:
    """``mu (E^6/N)^{1/15}`` with ``mu = 5 lambda^{1/5}``.

    Real-``d`` minimum of ``lambda (d^6/N)^{1/3} + 4 sqrt(E/d)``, the harmonic
    bound after relaxing ``log d <= d``.
    """
    if not N >= 2:
        raise ValueError("need N >= 2")
    return MU * (E**6 / N) ** (1.0 / 15.0)


def markov_exceedance(values, delta: float) -> float:
    """Fraction of ``values`` strictly above ``mean / delta``."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0 or np.any(arr < 0):
        raise ValueError("need a nonempty sample of nonnegative values")
    return float(np.mean(arr > arr.mean() / delta))
