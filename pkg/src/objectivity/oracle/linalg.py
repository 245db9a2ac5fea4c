"""Validated immutable matrix types and small linear-algebra helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-10


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


def _square(m, what):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    return m


def hermitian_part(m):
    m = np.asarray(m)
    return 0.5 * (m + m.conj().T)


def trace_norm(m) -> float:
    """Sum of singular values; Hermitian inputs use eigenvalue magnitudes."""
    m = _square(m, "trace_norm input")
    if not np.all(np.isfinite(m)):
        raise ValueError("trace_norm input has non-finite entries")
    if np.allclose(m, m.conj().T, atol=1e-14, rtol=0):
        return float(np.abs(np.linalg.eigvalsh(hermitian_part(m))).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def partial_trace(m, dims, keep) -> np.ndarray:
    """Trace out every tensor factor of ``m`` whose index is not in ``keep``.

    ``dims`` lists the factor dimensions; the kept factors stay in order.
    """
    dims = [int(x) for x in dims]
    keep = sorted(set(keep))
    n = len(dims)
    m = np.asarray(m).reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise ValueError("too many tensor factors")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, m)
    k = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(k, k)


def entropy_bits(m) -> float:
    """von Neumann entropy in bits, with ``0 log 0 = 0``."""
    w = np.linalg.eigvalsh(hermitian_part(m))
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())


def psd_sqrt(m) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix (checked to 1e-10)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _square(self.matrix, "density operator")
        if not np.allclose(m, m.conj().T, atol=TOL, rtol=0):
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(m) - 1.0) > TOL:
            raise ValueError(f"density operator trace is {np.trace(m).real}, not 1")
        if np.linalg.eigvalsh(hermitian_part(m)).min() < -TOL:
            raise ValueError("density operator is not positive semidefinite")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vec) -> DensityOperator:
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    dim_in: int
    dim_out: int
    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(_frozen(k) for k in self.kraus_ops)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise ValueError(f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})")
        total = sum(k.conj().T @ k for k in ops)
        if not np.allclose(total, np.eye(self.dim_in), atol=TOL, rtol=0):
            raise ValueError("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus_ops", ops)

    @classmethod
    def from_ops(cls, ops) -> KrausChannel:
        ops = [np.asarray(k) for k in ops]
        return cls(ops[0].shape[1], ops[0].shape[0], tuple(ops))

    def apply_matrix(self, x) -> np.ndarray:
        """Image of an arbitrary operator ``x`` (linear extension)."""
        return sum(k @ x @ k.conj().T for k in self.kraus_ops)

    def apply(self, rho: DensityOperator) -> DensityOperator:
        return DensityOperator(self.apply_matrix(rho.matrix))

    def apply_second(self, x, dim_first: int) -> np.ndarray:
        """``(id_{dim_first} x channel)(x)`` for ``x`` on ``first x input``."""
        eye = np.eye(dim_first)
        return sum(np.kron(eye, k) @ x @ np.kron(eye, k).conj().T for k in self.kraus_ops)


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to the identity (checked to 1e-10)."""

    dim: int
    elements: tuple

    def __post_init__(self):
        els = tuple(_frozen(e) for e in self.elements)
        if not els:
            raise ValueError("POVM needs at least one element")
        for e in els:
            if e.shape != (self.dim, self.dim):
                raise ValueError(f"POVM element shape {e.shape} != ({self.dim}, {self.dim})")
            if not np.allclose(e, e.conj().T, atol=TOL, rtol=0):
                raise ValueError("POVM element is not Hermitian")
            if np.linalg.eigvalsh(hermitian_part(e)).min() < -TOL:
                raise ValueError("POVM element is not positive semidefinite")
        if not np.allclose(sum(els), np.eye(self.dim), atol=TOL, rtol=0):
            raise ValueError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)
