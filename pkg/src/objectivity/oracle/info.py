"""Mutual information and two-qubit-side discord for small states (bits)."""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize

from .linalg import DensityOperator, entropy_bits, partial_trace


def _dims(rho: DensityOperator, dim_A: int):
    if dim_A < 1 or rho.dim % dim_A:
        raise ValueError(f"dimension {rho.dim} does not factor with dim_A={dim_A}")
    return [dim_A, rho.dim // dim_A]


def mutual_information(rho_AB: DensityOperator, dim_A: int) -> float:
    """``S(A) + S(B) - S(AB)``."""
    dims = _dims(rho_AB, dim_A)
    m = rho_AB.matrix
    value = entropy_bits(partial_trace(m, dims, [0])) + entropy_bits(partial_trace(m, dims, [1])) - entropy_bits(m)
    return max(0.0, value)


def _classical_information(m, dim_A, theta, phi):
    """Mutual information left after measuring B along the Bloch direction (theta, phi)."""
    v = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    w = np.array([-np.exp(-1j * phi) * math.sin(theta / 2), math.cos(theta / 2)])
    s_a = entropy_bits(partial_trace(m, [dim_A, 2], [0]))
    cond = 0.0
    for u in (v, w):
        k = np.kron(np.eye(dim_A), u.conj()[None, :])
        block = k @ m @ k.conj().T
        p = float(np.trace(block).real)
        if p > 1e-15:
            cond += p * entropy_bits(block / p)
    return s_a - cond


def discord_numeric(rho_AB: DensityOperator, dim_A: int, grid: int = 12, starts: int = 4) -> float:
    """``I(A:B) - max_Pi I(A:B)`` after a rank-one projective measurement on qubit B.

    Coarse Bloch-sphere grid followed by Nelder-Mead from the best grid
    points.  Restricted to projective measurements.
    """
    dims = _dims(rho_AB, dim_A)
    if dims[1] != 2:
        raise ValueError("discord_numeric needs a qubit B")
    m = rho_AB.matrix
    thetas = np.linspace(0.0, math.pi, grid + 1)
    phis = np.linspace(0.0, 2 * math.pi, 2 * grid, endpoint=False)
    scored = sorted(((_classical_information(m, dim_A, t, p), t, p) for t in thetas for p in phis), reverse=True)
    best = scored[0][0]
    for _, t, p in scored[:starts]:
        res = optimize.minimize(
            lambda x: -_classical_information(m, dim_A, x[0], x[1]),
            [t, p],
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-13},
        )
        best = max(best, -float(res.fun))
    return max(0.0, mutual_information(rho_AB, dim_A) - best)
