"""Dense complex-matrix helpers and the validated :class:`DensityMatrix`.

Operators are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Subsystem index 0 is the first tensor factor (A), index 1 the second (B).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import ValidationError

DEFAULT_TOL = 1e-10

ComplexMatrix = np.ndarray


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state with its subsystem dimensions.

    Build instances through :func:`as_density`; the constructor only checks
    shapes. The stored matrix is a read-only copy.
    """

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("shape", 0, f"expected square matrix, got {m.shape}")
        if not dims or any(d < 1 for d in dims) or prod(dims) != m.shape[0]:
            raise ValidationError("shape", 0, f"dims {dims} do not match size {m.shape[0]}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


def kron(a, b) -> np.ndarray:
    """Tensor product ``a ⊗ b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_defect(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def eig_hermitian(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Orthonormal eigenvectors as columns.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def trace_norm(m) -> float:
    """Sum of singular values, ``tr sqrt(m† m)``."""
    m = np.asarray(m, dtype=complex)
    return float(np.linalg.svd(m, compute_uv=False).sum())


def hermitian_trace_norm(stack) -> np.ndarray:
    # batched trace norm for stacks of Hermitian matrices
    return np.abs(np.linalg.eigvalsh(stack)).sum(axis=-1)


def as_density(m, dims: Sequence[int] | None = None, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Validate ``m`` as a density matrix.

    Checks hermiticity, unit trace and positivity against ``tol`` in that
    order. Eigenvalues in ``[-tol, 0)`` are clipped to zero and the trace is
    renormalised.

    Raises
    ------
    ValidationError
        Names the failed invariant and the size of the violation.
    """
    if isinstance(m, DensityMatrix):
        dims = m.dims if dims is None else dims
        m = m.matrix
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("shape", 0, f"expected square matrix, got {m.shape}")
    if dims is None:
        dims = (m.shape[0],)
    if prod(dims) != m.shape[0]:
        raise ValidationError("shape", 0, f"dims {tuple(dims)} do not match size {m.shape[0]}")

    diff = np.abs(m - m.conj().T)
    if diff.size and diff.max() > tol:
        i, j = np.unravel_index(np.argmax(diff), diff.shape)
        raise ValidationError("hermiticity", diff.max(), f"entries ({i},{j}) and ({j},{i})")
    h = 0.5 * (m + m.conj().T)

    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > tol:
        raise ValidationError("trace", abs(tr - 1.0), f"trace is {tr:.12g}")

    w, v = np.linalg.eigh(h)
    if w[0] < -tol:
        raise ValidationError("positivity", -w[0], f"smallest eigenvalue {w[0]:.3e}")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        h = (v * w) @ v.conj().T
        h = 0.5 * (h + h.conj().T)
        h /= np.trace(h).real
    return DensityMatrix(h, tuple(dims))


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state on subsystem ``keep``, tracing out all the others."""
    dims = rho.dims
    if len(dims) < 2:
        raise ValueError("partial trace needs at least two subsystems")
    if not isinstance(keep, (int, np.integer)) or not 0 <= keep < len(dims):
        raise ValueError(f"invalid subsystem index {keep!r} for dims {dims}")
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # move kept row/col axes to the front, then trace the rest pairwise
    t = np.moveaxis(t, (keep, n + keep), (0, 1))
    rest = prod(dims) // dims[keep]
    t = t.reshape(dims[keep], dims[keep], rest, rest)
    reduced = np.einsum("abii->ab", t)
    return as_density(reduced, (dims[keep],))


def reduced_states(rho: DensityMatrix) -> tuple[DensityMatrix, DensityMatrix]:
    """``(rho_A, rho_B)`` of a bipartite state."""
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    return partial_trace(rho, 0), partial_trace(rho, 1)


def pure_state(psi, dims: Sequence[int] | None = None) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return as_density(np.outer(psi, psi.conj()), dims)
