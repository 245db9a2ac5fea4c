"""Concrete channels: random Stinespring channels, Fock-space attenuators and the N-splitter."""

from __future__ import annotations

import math

import numpy as np
from scipy import linalg as sla
from scipy.special import comb

from ..errors import OracleAssertionError
from .linalg import DensityOperator, KrausChannel, partial_trace


def rng(seed: int) -> np.random.Generator:
    """Counter-based generator used by every seeded oracle routine."""
    return np.random.Generator(np.random.Philox(seed))


def haar_isometry(rows: int, cols: int, gen: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns, Haar distributed."""
    if rows < cols:
        raise ValueError(f"cannot embed dimension {cols} into {rows}")
    g = gen.standard_normal((rows, cols)) + 1j * gen.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_channel(dim_in: int, dim_out: int, env_dim: int, seed: int) -> KrausChannel:
    """Channel from a Haar-random Stinespring isometry into ``out x env``."""
    if dim_out * env_dim < dim_in:
        raise ValueError(f"dim_out * env_dim = {dim_out * env_dim} < dim_in = {dim_in}")
    v = haar_isometry(dim_out * env_dim, dim_in, rng(seed)).reshape(dim_out, env_dim, dim_in)
    return KrausChannel(dim_in, dim_out, tuple(v[:, e, :] for e in range(env_dim)))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, dim, (np.eye(dim),))


def dephasing_channel(dim: int) -> KrausChannel:
    """Complete dephasing in the computational basis."""
    return KrausChannel(dim, dim, tuple(np.diag(np.eye(dim)[k]) for k in range(dim)))


def attenuator(eta: float, cutoff: int) -> KrausChannel:
    """Pure-loss channel of transmissivity ``eta`` on Fock levels ``0 .. cutoff-1``.

    ``A_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|``.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"transmissivity must lie in (0, 1], got {eta}")
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    ops = []
    for k in range(cutoff):
        a = np.zeros((cutoff, cutoff))
        for n in range(k, cutoff):
            a[n - k, n] = math.sqrt(comb(n, k, exact=True) * eta ** (n - k) * (1.0 - eta) ** k)
        ops.append(a)
    return KrausChannel(cutoff, cutoff, tuple(ops))


def _lowering(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


def splitter_unitary(N: int, cutoff: int) -> np.ndarray:
    """Passive ``N``-mode unitary whose mode matrix is the discrete Fourier transform.

    Built as ``expm(i sum h_lm a_l^dag a_m)`` with ``e^{ih} = V``.  Mode 0
    couples to every output with the real amplitude ``1/sqrt(N)``.  Exact on
    states with fewer than ``cutoff`` photons in total.
    """
    idx = np.arange(N)
    v = np.exp(2j * np.pi * np.outer(idx, idx) / N) / math.sqrt(N)
    h = -1j * sla.logm(v)
    h = 0.5 * (h + h.conj().T)
    if not np.allclose(sla.expm(1j * h), v, atol=1e-12):
        raise OracleAssertionError("mode-matrix logarithm failed")
    a = _lowering(cutoff)
    eye = np.eye(cutoff)

    def mode_op(op, j):
        out = np.ones((1, 1))
        for k in range(N):
            out = np.kron(out, op if k == j else eye)
        return out

    lowers = [mode_op(a, j) for j in range(N)]
    gen = sum(h[l, m] * lowers[l].conj().T @ lowers[m] for l in range(N) for m in range(N))
    return sla.expm(1j * gen)


def _splitter_outputs(rho: np.ndarray, N: int, cutoff: int) -> list[np.ndarray]:
    vac = np.zeros((cutoff, cutoff))
    vac[0, 0] = 1.0
    full = rho
    for _ in range(N - 1):
        full = np.kron(full, vac)
    u = splitter_unitary(N, cutoff)
    out = u @ full @ u.conj().T
    return [partial_trace(out, [cutoff] * N, [j]) for j in range(N)]


def nsplitter_gaps(rho_A: DensityOperator, N: int, cutoff: int) -> tuple[float, float]:
    """``(max output asymmetry, max gap to the attenuator path)`` in max-abs entry norm."""
    if rho_A.dim != cutoff:
        raise ValueError(f"input dimension {rho_A.dim} != cutoff {cutoff}")
    outs = _splitter_outputs(rho_A.matrix, N, cutoff)
    reference = attenuator(1.0 / N, cutoff).apply_matrix(rho_A.matrix)
    symmetry = max(float(np.abs(o - outs[0]).max()) for o in outs)
    path = max(float(np.abs(o - reference).max()) for o in outs)
    return symmetry, path


def nsplitter_reduce(rho_A: DensityOperator, N: int, cutoff: int, full_path_limit: int = 4096) -> list[DensityOperator]:
    """Reduced output state of every port of the N-splitter with vacuum ancillas.

    When ``cutoff**N <= full_path_limit`` the outputs come from the full
    unitary and are checked against each other (1e-10) and against
    ``attenuator(1/N)`` (1e-8); otherwise the attenuator path alone is used.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if rho_A.dim != cutoff:
        raise ValueError(f"input dimension {rho_A.dim} != cutoff {cutoff}")
    single = attenuator(1.0 / N, cutoff).apply_matrix(rho_A.matrix)
    if cutoff**N > full_path_limit:
        return [DensityOperator(single) for _ in range(N)]
    outs = _splitter_outputs(rho_A.matrix, N, cutoff)
    symmetry = max(float(np.abs(o - outs[0]).max()) for o in outs)
    path = max(float(np.abs(o - single).max()) for o in outs)
    if symmetry > 1e-10:
        raise OracleAssertionError(f"splitter outputs differ by {symmetry}")
    if path > 1e-8:
        raise OracleAssertionError(f"splitter and attenuator paths differ by {path}")
    return [DensityOperator(o) for o in outs]


def tmsv_overlap_check(N: int, r: float, s: float, cutoff: int) -> float:
    """``<phi_s| (id x attenuator(1/N)) [psi_r] |phi_s>`` on a Fock truncation.

    Works with vectors: the overlap is ``sum_k |<phi_s| (I x A_k) |psi_r>|^2``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    for x in (r, s):
        if not 0 <= x <= 0.5:
            raise ValueError("squeezing parameters must lie in [0, 0.5]")
    for x in (r, s):
        if math.tanh(x) ** (2 * cutoff) >= 1e-12:
            raise ValueError(f"cutoff {cutoff} leaves a squeezed-vacuum tail above 1e-12")
    n = np.arange(cutoff)
    psi = np.diag(math.tanh(r) ** n / math.cosh(r))
    phi = np.diag(math.tanh(s) ** n / math.cosh(s))
    total = 0.0
    for a in attenuator(1.0 / N, cutoff).kraus_ops:
        # (I x A)|psi> has coefficient matrix psi @ A^T
        total += abs(np.vdot(phi, psi @ a.T)) ** 2
    return float(total)
