"""Hamiltonian eigenvalue sequences and the state-tail quantities built on them.

A spectrum ``f = {f_j}`` defines the weighted entangled state
``|phi> = c_f sum_j f_j^{-1/2} |j, j>``.  Everything downstream needs three
numbers from it: the normalisation ``c_f``, the truncation tail ``eps_d`` and
the local entropy ``sigma`` (in bits) of ``|phi>``.

Index conventions: ``box`` and ``harmonic`` levels start at ``j = 1`` (so the
ground energy stays positive), ``bridge`` and ``custom`` start at ``j = 0``.
A truncation to ``d`` levels always keeps the first ``d`` labels counted from
the start index.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotSummable

DEFAULT_SERIES_TOLERANCE = 1e-12
LN2 = math.log(2.0)

__all__ = [
    "Family",
    "Spectrum",
    "SpectrumSummary",
    "SummabilityReport",
    "eigenvalue",
    "normalization",
    "tail_sum",
    "tail_epsilon",
    "local_entropy",
    "check_summability",
    "bridge_entropy_nats",
    "trigamma",
    "parse_spectrum",
]


class Family(str, enum.Enum):
    BOX = "box"
    HARMONIC = "harmonic"
    BRIDGE = "bridge"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Spectrum:
    """An eigenvalue sequence of a Hamiltonian with discrete spectrum.

    Use the constructors :meth:`box`, :meth:`harmonic`, :meth:`bridge`,
    :meth:`custom` or :func:`parse_spectrum` rather than the raw fields.
    """

    family: Family
    D: int | None = None
    omega: float | None = None
    values: tuple[float, ...] | None = None
    series_tolerance: float = DEFAULT_SERIES_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not self.series_tolerance > 0:
            raise ValueError("series_tolerance must be positive")
        if self.family is Family.BRIDGE:
            if self.D is None or self.omega is None:
                raise ValueError("bridge spectrum needs D and omega")
            if int(self.D) != self.D or self.D < 1:
                raise ValueError(f"bridge D must be a positive integer, got {self.D}")
            if not self.omega > 0:
                raise ValueError(f"bridge omega must be positive, got {self.omega}")
            object.__setattr__(self, "D", int(self.D))
            object.__setattr__(self, "omega", float(self.omega))
        elif self.family is Family.CUSTOM:
            if not self.values:
                raise ValueError("custom spectrum needs at least one level")
            vals = tuple(float(v) for v in self.values)
            if any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("custom levels must be finite and positive")
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError("custom levels must be nondecreasing")
            object.__setattr__(self, "values", vals)

    @classmethod
    def box(cls, series_tolerance=DEFAULT_SERIES_TOLERANCE):
        return cls(Family.BOX, series_tolerance=series_tolerance)

    @classmethod
    def harmonic(cls, series_tolerance=DEFAULT_SERIES_TOLERANCE):
        return cls(Family.HARMONIC, series_tolerance=series_tolerance)

    @classmethod
    def bridge(cls, D, omega, series_tolerance=DEFAULT_SERIES_TOLERANCE):
        return cls(Family.BRIDGE, D=D, omega=omega, series_tolerance=series_tolerance)

    @classmethod
    def custom(cls, values, series_tolerance=DEFAULT_SERIES_TOLERANCE):
        return cls(Family.CUSTOM, values=tuple(values), series_tolerance=series_tolerance)

    @property
    def start_index(self) -> int:
        return 1 if self.family in (Family.BOX, Family.HARMONIC) else 0

    @property
    def num_levels(self) -> int | None:
        """Number of levels, or ``None`` for an infinite spectrum."""
        return len(self.values) if self.family is Family.CUSTOM else None

    @property
    def summable(self) -> bool:
        return self.family is not Family.HARMONIC

    @property
    def ground_energy(self) -> float:
        if self.family is Family.CUSTOM:
            return self.values[0]
        return 1.0

    def levels(self, n: int) -> np.ndarray:
        """The first ``n`` eigenvalues, counted from the start index (``inf`` past overflow)."""
        with np.errstate(divide="ignore"):
            return 1.0 / self.inverse_levels(n)

    def inverse_levels(self, n: int) -> np.ndarray:
        """``1/f_j`` for the first ``n`` levels (overflow-free for bridge)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        if self.num_levels is not None and n > self.num_levels:
            raise IndexError(f"spectrum has only {self.num_levels} levels, asked for {n}")
        k = np.arange(n, dtype=float)
        if self.family is Family.BOX:
            return 1.0 / (k + 1.0) ** 2
        if self.family is Family.HARMONIC:
            return 1.0 / (k + 1.0)
        if self.family is Family.BRIDGE:
            out = np.ones(n)
            hi = k >= self.D
            out[hi] = -math.expm1(-self.omega) * np.exp(-self.omega * k[hi])
            return out
        return 1.0 / np.asarray(self.values[:n])

    def __str__(self):
        if self.family is Family.BRIDGE:
            return f"bridge:D={self.D},omega={self.omega!r}"
        if self.family is Family.CUSTOM:
            return "custom:" + ",".join(repr(v) for v in self.values)
        return self.family.value


@dataclass(frozen=True)
class SpectrumSummary:
    c_f: float
    sigma_bits: float
    s_nats: float
    summable: bool = True


@dataclass(frozen=True)
class SummabilityReport:
    inverse_sum_converges: bool
    entropy_sum_converges: bool
    ground_energy: float
    ground_energy_positive: bool
    reason: str

    @property
    def ok(self) -> bool:
        return self.inverse_sum_converges and self.entropy_sum_converges and self.ground_energy_positive


def parse_spectrum(text: str) -> Spectrum:
    """Parse ``box``, ``harmonic``, ``bridge:D=<int>,omega=<float>`` or ``custom:<floats>``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head in ("box", "harmonic") and not rest:
        return Spectrum(Family(head))
    if head == "bridge":
        kv = {}
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed bridge parameter {item!r}")
            kv[key.strip().lower()] = val.strip()
        if set(kv) != {"d", "omega"}:
            raise ValueError("bridge spectrum needs exactly D=<int>,omega=<float>")
        return Spectrum.bridge(int(kv["d"]), float(kv["omega"]))
    if head == "custom" and rest:
        return Spectrum.custom(float(v) for v in rest.split(","))
    raise ValueError(f"cannot parse spectrum {text!r}")


def eigenvalue(spec: Spectrum, j: int) -> float:
    """The eigenvalue ``f_j`` with label ``j`` (labels start at ``spec.start_index``)."""
    if j < spec.start_index:
        raise ValueError(f"level {j} below start index {spec.start_index} for {spec.family.value}")
    if spec.family is Family.BOX:
        return float(j) ** 2
    if spec.family is Family.HARMONIC:
        return float(j)
    if spec.family is Family.BRIDGE:
        if j <= spec.D - 1:
            return 1.0
        return math.exp(spec.omega * j) / -math.expm1(-spec.omega)
    if j >= len(spec.values):
        raise IndexError(f"level {j} out of range for {len(spec.values)}-level spectrum")
    return spec.values[j]


# --- special functions -----------------------------------------------------

_TRIGAMMA_SHIFT = 20.0


def trigamma(x):
    """Trigamma function ``psi'(x)`` for ``x > 0``.

    Upward recurrence ``psi'(x) = psi'(x+1) + 1/x^2`` until ``x >= 20``,
    then the asymptotic Bernoulli series (truncation error below 1e-20).
    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("trigamma is implemented for positive arguments only")
    y = arr.copy()
    acc = np.zeros_like(y)
    low = y < _TRIGAMMA_SHIFT
    while np.any(low):
        acc[low] += 1.0 / y[low] ** 2
        y[low] += 1.0
        low = y < _TRIGAMMA_SHIFT
    inv = 1.0 / y
    inv2 = inv * inv
    bern = 1 / 6 - inv2 * (1 / 30 - inv2 * (1 / 42 - inv2 * (1 / 30 - inv2 * (5 / 66 - inv2 * (691 / 2730 - inv2 * 7 / 6)))))
    out = acc + inv + 0.5 * inv2 + inv * inv2 * bern
    return float(out) if np.ndim(x) == 0 else out


# Bernoulli numbers B_2, B_4, ..., B_10
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66)


def _log_over_square_derivative(n, x):
    # d^n/dx^n [ln x / x^2] = (-1)^n (n+1)! x^{-n-2} (ln x - (H_{n+1} - 1))
    harmonic = sum(1.0 / k for k in range(1, n + 2))
    return (-1) ** n * math.factorial(n + 1) * x ** (-n - 2) * (math.log(x) - (harmonic - 1.0))


def _log_over_square_sum(tol):
    """``sum_{j>=1} ln(j)/j^2`` by direct summation plus an Euler-Maclaurin tail.

    The tail keeps the B_2, B_4, B_6 corrections; the first omitted (B_8)
    term bounds the remainder and must fall below ``tol``.
    """
    J = 32
    while True:
        corr = 0.0
        for k in range(1, 4):
            corr -= _BERNOULLI[k - 1] / math.factorial(2 * k) * _log_over_square_derivative(2 * k - 1, J)
        remainder = abs(_BERNOULLI[3] / math.factorial(8) * _log_over_square_derivative(7, J))
        if remainder < tol:
            break
        J *= 2
    j = np.arange(2, J, dtype=float)
    head = math.fsum(np.log(j) / j**2)
    integral = (math.log(J) + 1.0) / J
    return head + integral + 0.5 * math.log(J) / J**2 + corr


def _sum_log_concave_tail(term, ratio_bound, j0, tol):
    """Sum ``term(j)`` for ``j >= j0`` until the ratio-test remainder is below ``tol``.

    ``ratio_bound(j)`` must bound ``term(k+1)/term(k)`` for every ``k >= j``
    and be < 1 there.
    """
    total = 0.0
    j = j0
    chunk = 64
    while True:
        js = np.arange(j, j + chunk, dtype=float)
        total = math.fsum([total, *term(js)])
        j += chunk
        rho = ratio_bound(j)
        nxt = float(term(np.array([float(j)]))[0])
        if rho < 1.0 and nxt / (1.0 - rho) < tol:
            return total
        chunk = min(chunk * 2, 1 << 16)


# --- summaries -------------------------------------------------------------


def _require_summable(spec):
    if not spec.summable:
        raise NotSummable(f"sum of 1/f_j diverges for the {spec.family.value} spectrum")


@functools.lru_cache(maxsize=256)
def _inverse_sum(spec: Spectrum) -> float:
    _require_summable(spec)
    if spec.family is Family.BOX:
        return trigamma(1.0)
    if spec.family is Family.CUSTOM:
        return math.fsum(1.0 / v for v in spec.values)
    w = spec.omega
    scale = -math.expm1(-w)
    tail = _sum_log_concave_tail(
        lambda js: scale * np.exp(-w * js),
        lambda j: math.exp(-w),
        spec.D,
        spec.series_tolerance,
    )
    return spec.D + tail


def normalization(spec: Spectrum) -> float:
    """``c_f = (sum_j 1/f_j)^{-1/2}``."""
    return _inverse_sum(spec) ** -0.5


def tail_sum(spec: Spectrum, d):
    """``sum`` of ``1/f_j`` over the levels beyond the first ``d`` (vectorised in ``d``)."""
    _require_summable(spec)
    darr = np.asarray(d)
    if np.any(darr < 0):
        raise ValueError("truncation dimension must be non-negative")
    darr = darr.astype(float)
    if spec.family is Family.BOX:
        out = trigamma(darr + 1.0)
    elif spec.family is Family.BRIDGE:
        D, w = spec.D, spec.omega
        out = np.where(darr >= D, np.exp(-w * darr), (D - np.minimum(darr, D)) + math.exp(-w * D))
    else:
        inv = 1.0 / np.asarray(spec.values)
        suffix = np.concatenate([np.cumsum(inv[::-1])[::-1], [0.0]])
        out = suffix[np.minimum(darr, len(inv)).astype(int)]
    return float(out) if np.ndim(d) == 0 else np.asarray(out, dtype=float)


def tail_epsilon(spec: Spectrum, d):
    """Norm of the part of ``|phi>`` outside the first ``d`` levels: ``c_f sqrt(tail_sum)``."""
    return normalization(spec) * np.sqrt(tail_sum(spec, d))


def bridge_entropy_nats(D: int, omega: float) -> float:
    """Closed-form local entropy ``s = ln(2) sigma`` of the bridge spectrum, in nats."""
    em = math.exp(-omega)
    emD = math.exp(-omega * D)
    first = math.log(D + emD)
    second = omega * (em * (1 - D) + D) * emD / (-math.expm1(-omega) * (D + emD))
    third = -math.log1p(-em) * emD / (emD + D)
    return first + second + third


@functools.lru_cache(maxsize=256)
def _entropy_nats(spec: Spectrum) -> float:
    _require_summable(spec)
    cf2 = 1.0 / _inverse_sum(spec)
    tol = spec.series_tolerance
    if spec.family is Family.BOX:
        # -sum p ln p with p_j = cf2/j^2 = -ln(cf2) + 2 cf2 sum ln(j)/j^2
        return -math.log(cf2) + 2.0 * cf2 * _log_over_square_sum(tol)
    if spec.family is Family.CUSTOM:
        p = cf2 / np.asarray(spec.values)
        return -math.fsum(p * np.log(p))
    D, w = spec.D, spec.omega
    head = -D * cf2 * math.log(cf2)
    # p_j = cf2 (1 - e^-w) e^{-w j}, -p ln p = p (a + w j)
    scale = cf2 * -math.expm1(-w)
    a = -math.log(scale)

    def term(js):
        return scale * np.exp(-w * js) * (a + w * js)

    def ratio(j):
        return math.exp(-w) * (1.0 + w / max(a + w * j, 1e-300))

    return head + _sum_log_concave_tail(term, ratio, D, tol)


def local_entropy(spec: Spectrum) -> SpectrumSummary:
    """``c_f`` and the entanglement entropy ``sigma`` of ``|phi>`` (bits and nats)."""
    report = check_summability(spec)
    if not report.ok:
        raise NotSummable(report.reason)
    s = _entropy_nats(spec)
    return SpectrumSummary(c_f=normalization(spec), sigma_bits=s / LN2, s_nats=s)


def check_summability(spec: Spectrum) -> SummabilityReport:
    """Convergence of ``sum 1/f_j`` and ``sum (1/f_j) log(1/f_j)``, plus ``E0 > 0``."""
    e0 = spec.ground_energy
    if spec.family is Family.BOX:
        return SummabilityReport(True, True, e0, e0 > 0, "p-series with p=2 converges")
    if spec.family is Family.HARMONIC:
        return SummabilityReport(False, False, e0, e0 > 0, "harmonic series sum 1/j diverges")
    if spec.family is Family.BRIDGE:
        return SummabilityReport(True, True, e0, e0 > 0, "geometric tail converges for omega > 0")
    return SummabilityReport(True, True, e0, e0 > 0, "finite spectrum")
