"""f-weighted Choi states and brute-force checks of the bounds built on them.

Levels enter through a finite truncation of a :class:`Spectrum`; ``c_f`` is
renormalised over the retained levels.  Fragments are indexed from 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..errors import OracleAssertionError
from ..spectra import Spectrum
from .channels import haar_isometry, rng
from .linalg import TOL, DensityOperator, KrausChannel, Povm, hermitian_part, partial_trace, trace_norm


def truncated_levels(spec: Spectrum, n: int) -> np.ndarray:
    """First ``n`` levels of ``spec``; all must be finite and positive."""
    f = spec.levels(n)
    if not np.all(np.isfinite(f) & (f > 0)):
        raise ValueError("truncated levels must be finite and positive")
    return f


def truncated_cf(levels) -> float:
    return 1.0 / math.sqrt(float(np.sum(1.0 / np.asarray(levels))))


def truncated_tail(levels, d: int) -> float:
    """``eps_d`` over the truncated spectrum: ``c_f sqrt(sum_{j >= d} 1/f_j)``."""
    levels = np.asarray(levels)
    return truncated_cf(levels) * math.sqrt(float(np.sum(1.0 / levels[d:])))


def phi_vector(levels) -> np.ndarray:
    """``c_f sum_j f_j^{-1/2} |jj>`` on ``n x n``."""
    n = len(levels)
    amps = truncated_cf(levels) / np.sqrt(np.asarray(levels, dtype=float))
    v = np.zeros(n * n, dtype=complex)
    v[np.arange(n) * (n + 1)] = amps
    return v


@dataclass(frozen=True)
class FChoiState:
    spec: Spectrum
    dim_A: int
    dim_B: int
    state: DensityOperator

    def __post_init__(self):
        f = truncated_levels(self.spec, self.dim_A)
        marginal = partial_trace(self.state.matrix, [self.dim_A, self.dim_B], [0])
        expected = np.diag(truncated_cf(f) ** 2 / f)
        if not np.allclose(marginal, expected, atol=TOL, rtol=0):
            raise ValueError("reference marginal of the f-Choi state is not diag(c_f^2/f_j)")

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix


def f_choi(ch: KrausChannel, spec: Spectrum) -> FChoiState:
    """``(id x ch)|phi><phi|`` with the f-weighted entangled vector over ``dim_in`` levels."""
    f = truncated_levels(spec, ch.dim_in)
    v = phi_vector(f)
    rho = ch.apply_second(np.outer(v, v.conj()), ch.dim_in)
    return FChoiState(spec, ch.dim_in, ch.dim_out, DensityOperator(hermitian_part(rho)))


@dataclass(frozen=True)
class TruncationCheck:
    passed: bool
    distance: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.distance


def truncation_check(ch: KrausChannel, spec: Spectrum, d: int) -> TruncationCheck:
    """``||rho - (P_d x I) rho (P_d x I)||_1 <= 2 eps_d`` for ``rho`` the f-Choi state.

    Raises :class:`OracleAssertionError` on a violation beyond 1e-10.
    """
    if not 1 <= d <= ch.dim_in:
        raise ValueError(f"d must lie in [1, {ch.dim_in}], got {d}")
    rho = f_choi(ch, spec).matrix
    proj = np.kron(np.diag((np.arange(ch.dim_in) < d).astype(float)), np.eye(ch.dim_out))
    distance = trace_norm(rho - proj @ rho @ proj)
    bound = 2.0 * truncated_tail(truncated_levels(spec, ch.dim_in), d)
    result = TruncationCheck(distance <= bound + TOL, distance, bound)
    if not result.passed:
        raise OracleAssertionError(f"truncation bound violated: {distance} > {bound}")
    return result


# --- measure-and-prepare construction ------------------------------------------


@dataclass(frozen=True)
class MPConstruction:
    povm: Povm
    prepared: tuple
    probabilities: tuple
    channel: KrausChannel
    completeness_error: float
    choi_error: float


def _kraus_from_mp(povm_elements, states, dim_in, dim_out):
    ops = []
    for m, tau in zip(povm_elements, states):
        mu, mv = np.linalg.eigh(hermitian_part(m))
        tw, tv = np.linalg.eigh(hermitian_part(tau))
        for a in range(dim_in):
            if mu[a] <= 1e-15:
                continue
            for b in range(dim_out):
                if tw[b] <= 1e-15:
                    continue
                ops.append(math.sqrt(mu[a] * tw[b]) * np.outer(tv[:, b], mv[:, a].conj()))
    return KrausChannel(dim_in, dim_out, tuple(ops))


def mp_construct(lam: KrausChannel, spec: Spectrum, fragment_dims, measured, bases, target: int) -> MPConstruction:
    """Measure-and-prepare approximation of fragment ``target`` from measurements on ``measured``.

    ``lam`` maps the system into the product of fragments with dimensions
    ``fragment_dims``.  ``bases`` maps each measured fragment to a unitary
    whose columns form the projective measurement basis (``None`` means the
    computational basis).  Conditioning the global f-Choi state on outcome
    ``z`` gives ``p(z)``, ``rho_A^z`` and ``rho_target^z``; the POVM is
    ``c_f^-2 p(z) H^{1/2} (rho_A^z)^T H^{1/2}``.  Both completeness and the
    identity ``J_f(E) = sum_z p(z) rho_A^z x rho_target^z`` are asserted to 1e-10.
    """
    dims_b = [int(x) for x in fragment_dims]
    if int(np.prod(dims_b)) != lam.dim_out:
        raise ValueError(f"fragment dimensions {dims_b} do not multiply to {lam.dim_out}")
    measured = list(measured)
    n_frag = len(dims_b)
    if target in measured or not 0 <= target < n_frag:
        raise ValueError(f"target {target} must be an unmeasured fragment index")
    if any(not 0 <= j < n_frag for j in measured) or len(set(measured)) != len(measured):
        raise ValueError(f"measured fragments {measured} are not distinct valid indices")
    bases = dict(bases or {})
    if set(bases) - set(measured):
        raise ValueError("bases given for fragments that are not measured")
    dim_a = lam.dim_in
    f = truncated_levels(spec, dim_a)
    cf = truncated_cf(f)
    rho = f_choi(lam, spec).matrix
    dims = [dim_a] + dims_b

    vectors = []
    for j in measured:
        u = np.asarray(bases.get(j, np.eye(dims_b[j])), dtype=complex)
        if u.shape != (dims_b[j], dims_b[j]) or not np.allclose(u.conj().T @ u, np.eye(dims_b[j]), atol=TOL):
            raise ValueError(f"basis for fragment {j} is not a unitary of size {dims_b[j]}")
        vectors.append(u)

    sqrt_h = np.diag(np.sqrt(f))
    povm, prepared, probs, joint = [], [], [], np.zeros((dim_a * dims_b[target],) * 2, dtype=complex)
    for outcome in itertools.product(*(range(dims_b[j]) for j in measured)):
        proj = np.eye(1)
        for k in range(len(dims)):
            if k >= 1 and (k - 1) in measured:
                col = vectors[measured.index(k - 1)][:, outcome[measured.index(k - 1)]]
                factor = np.outer(col, col.conj())
            else:
                factor = np.eye(dims[k])
            proj = np.kron(proj, factor)
        cond = proj @ rho @ proj
        p = float(np.trace(cond).real)
        if p <= 1e-14:
            continue
        rho_a = partial_trace(cond, dims, [0]) / p
        rho_t = partial_trace(cond, dims, [target + 1]) / p
        povm.append(p * sqrt_h @ rho_a.T @ sqrt_h / cf**2)
        prepared.append(rho_t)
        probs.append(p)
        joint += p * np.kron(rho_a, rho_t)

    completeness = float(np.abs(sum(povm) - np.eye(dim_a)).max())
    if completeness > TOL:
        raise OracleAssertionError(f"POVM completeness error {completeness}")
    povm = [hermitian_part(m) for m in povm]
    channel = _kraus_from_mp(povm, prepared, dim_a, dims_b[target])
    choi_error = float(np.abs(f_choi(channel, spec).matrix - joint).max())
    if choi_error > TOL:
        raise OracleAssertionError(f"Choi identity error {choi_error}")
    return MPConstruction(
        povm=Povm(dim_a, tuple(povm)),
        prepared=tuple(DensityOperator(hermitian_part(t)) for t in prepared),
        probabilities=tuple(probs),
        channel=channel,
        completeness_error=completeness,
        choi_error=choi_error,
    )


def fragment_channel(lam: KrausChannel, fragment_dims, j: int) -> KrausChannel:
    """Reduced channel onto fragment ``j`` (other fragments traced out)."""
    dims_b = [int(x) for x in fragment_dims]
    ops = []
    left = int(np.prod(dims_b[:j]))
    right = int(np.prod(dims_b[j + 1 :]))
    for k in lam.kraus_ops:
        t = k.reshape(left, dims_b[j], right, lam.dim_in)
        for a in range(left):
            for c in range(right):
                ops.append(t[a, :, c, :])
    return KrausChannel(lam.dim_in, dims_b[j], tuple(ops))


# --- energy-constrained diamond distance ---------------------------------------


def _energy(vec_matrix, f):
    # coefficient matrix psi[i, j] for |i>_ancilla |j>_input
    return float(np.sum(np.abs(vec_matrix) ** 2 * f[None, :]))


def _witnesses(f, E):
    n = len(f)
    out = []
    for q in (1.0, 0.7, 0.5, 0.3, 0.1, 0.0):
        amps = f**-0.5 * q ** np.arange(n) if q > 0 else (np.arange(n) == 0).astype(float)
        psi = np.diag(amps / np.linalg.norm(amps)).astype(complex)
        if _energy(psi, f) <= E:
            out.append(psi)
    return out


def sampled_diamond_lower(ch0: KrausChannel, ch1: KrausChannel, spec: Spectrum, E: float, samples: int, seed: int) -> float:
    """Largest ``||(id x (ch0 - ch1))[psi]||_1`` over sampled admissible pure inputs.

    Inputs are energy-tilted Gaussian states on ``ancilla x input`` (ancilla
    dimension ``dim_in``), kept when ``sum_j f_j <j|rho_in|j> <= E``, plus a
    deterministic family of f-weighted maximally correlated states.  Every
    input is admissible, so the result lower-bounds the constrained diamond
    distance.
    """
    if ch0.dim_in != ch1.dim_in or ch0.dim_out != ch1.dim_out:
        raise ValueError("channels must share input and output dimensions")
    n = ch0.dim_in
    f = truncated_levels(spec, n)
    if E < f[0]:
        raise ValueError(f"E={E} is below the ground energy {f[0]}; no admissible input")
    gen = rng(seed)
    inputs = _witnesses(f, E)
    scale = f - f[0]
    for _ in range(samples):
        tilt = gen.exponential(1.0 / max(E - f[0], 1e-12) + 1e-12)
        g = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        g *= np.exp(-0.5 * tilt * scale)[None, :]
        g /= np.linalg.norm(g)
        if _energy(g, f) <= E:
            inputs.append(g)
    best = 0.0
    for psi in inputs:
        v = psi.reshape(-1)
        x = np.outer(v, v.conj())
        diff = ch0.apply_second(x, n) - ch1.apply_second(x, n)
        best = max(best, trace_norm(hermitian_part(diff)))
    return best


def choi_diamond_bound(ch0: KrausChannel, ch1: KrausChannel, spec: Spectrum, E: float) -> float:
    """``(E / c_f^2) ||J_f(ch0) - J_f(ch1)||_1`` over the truncated spectrum."""
    cf = truncated_cf(truncated_levels(spec, ch0.dim_in))
    return E / cf**2 * trace_norm(f_choi(ch0, spec).matrix - f_choi(ch1, spec).matrix)


# --- measured-norm probe -------------------------------------------------------


@dataclass(frozen=True)
class PovmDistanceReport:
    lhs: float
    measured_max: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + TOL


def _measured_norm(L, dim_a, elements):
    total = 0.0
    for n_el in elements:
        block = partial_trace(L @ np.kron(np.eye(dim_a), n_el), [dim_a, 2], [0])
        total += trace_norm(hermitian_part(block))
    return total


def _bloch_projector(theta, phi):
    v = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    p = np.outer(v, v.conj())
    return [p, np.eye(2) - p]


def povm_distance_probe(ch0: KrausChannel, ch1: KrausChannel, spec: Spectrum, d: int, restarts: int, seed: int) -> PovmDistanceReport:
    """Heuristic check of ``||L||_1 <= 4 d^{3/2} max_M ||(id x M) L||_1 + 4 eps_d``.

    ``L`` is the difference of f-Choi states and ``M`` ranges over
    measurements on a qubit output.  The maximum is searched over two-outcome
    projective measurements (multi-start local search on Bloch angles) and
    random rank-one POVMs, so the found value is only a lower estimate; a
    failed report is inconclusive rather than a counterexample.
    """
    if ch0.dim_out != 2 or ch1.dim_out != 2:
        raise ValueError("povm_distance_probe needs a qubit output")
    if ch0.dim_in != ch1.dim_in:
        raise ValueError("channels must share the input dimension")
    dim_a = ch0.dim_in
    L = f_choi(ch0, spec).matrix - f_choi(ch1, spec).matrix
    gen = rng(seed)

    def neg(x):
        return -_measured_norm(L, dim_a, _bloch_projector(x[0], x[1]))

    best = 0.0
    for _ in range(restarts):
        x0 = [gen.uniform(0, math.pi), gen.uniform(0, 2 * math.pi)]
        res = optimize.minimize(neg, x0, method="Nelder-Mead", options={"xatol": 1e-8, "fatol": 1e-12})
        best = max(best, -float(res.fun), -neg(x0))
        k = int(gen.integers(2, 5))
        v = haar_isometry(k, 2, gen)
        elements = [np.outer(v[l].conj(), v[l]) for l in range(k)]
        best = max(best, _measured_norm(L, dim_a, elements))
    eps = truncated_tail(truncated_levels(spec, dim_a), d)
    return PovmDistanceReport(trace_norm(L), best, 4.0 * d**1.5 * best + 4.0 * eps)
