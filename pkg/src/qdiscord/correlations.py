"""Entropies, mutual information, entropic and geometric discord, concurrence.

All logarithms are base 2. ``side`` names the measured subsystem: ``"A"`` is
the first tensor factor, ``"B"`` the second.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .basis_search import (
    SIGMA_Y,
    MeasurementBasis,
    SearchConfig,
    grid_minimize,
    mc_minimize,
    measurement_qubit,
    qubit_projectors,
)
from .densmat import DensityMatrix, as_density, hermitian_trace_norm, partial_trace, trace_norm
from .errors import NumericalError

EIG_FLOOR = 1e-12
PROB_FLOOR = 1e-12
CLAMP = 1e-6


class MeasuredSide(str, Enum):
    A = "A"
    B = "B"

    @property
    def index(self) -> int:
        return 0 if self is MeasuredSide.A else 1


def _side(side) -> MeasuredSide:
    try:
        return MeasuredSide(side.value if isinstance(side, MeasuredSide) else str(side).upper())
    except ValueError:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}") from None


@dataclass(frozen=True)
class OptimizerInfo:
    method: str
    evaluations: int
    resolution: tuple | None = None
    samples: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class DiscordResult:
    value: float
    optimal_basis: MeasurementBasis = field(repr=False)
    optimizer: OptimizerInfo
    side: MeasuredSide = MeasuredSide.B


# ------------------------------------------------------------------ entropy

def shannon_entropy(p, base: float = 2.0) -> float:
    """``-Σ p_i log_base p_i`` with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float).ravel()
    if base <= 1:
        raise ValueError("base must be > 1")
    if np.any(p < 0):
        raise ValueError(f"negative probability {p.min()}")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    p = p[p > 0]
    return float(-(p * np.log(p)).sum() / np.log(base))


def _xlogx_sum(w):
    # -Σ w log2 w over the last axis, ignoring entries below the floor
    w = np.where(w > EIG_FLOOR, w, 1.0)
    return -(w * np.log2(w)).sum(axis=-1)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    w = np.linalg.eigvalsh(rho.matrix)
    w = np.where(w < EIG_FLOOR, 0.0, w)
    return shannon_entropy(w / w.sum())


def _bipartite(rho):
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    return rho.dims


def mutual_information(rho: DensityMatrix) -> float:
    _bipartite(rho)
    return (
        von_neumann_entropy(partial_trace(rho, 0))
        + von_neumann_entropy(partial_trace(rho, 1))
        - von_neumann_entropy(rho)
    )


# ------------------------------------------------------- measured ensembles

def _padded(proj, dims, side):
    other = np.eye(dims[1 - side.index])
    return np.kron(proj, other) if side is MeasuredSide.A else np.kron(other, proj)


def _check_basis(basis, dims, side):
    if basis.dim != dims[side.index]:
        raise ValueError(
            f"basis acts on dimension {basis.dim}, measured subsystem has {dims[side.index]}"
        )
    basis.check()


def post_measurement_ensemble(rho: DensityMatrix, basis: MeasurementBasis, side="B"):
    """List of ``(p_i, rho_i)`` after measuring ``basis`` on ``side``.

    Outcomes with ``p_i < 1e-12`` are reported with probability 0 and
    state ``None``.
    """
    side = _side(side)
    dims = _bipartite(rho)
    _check_basis(basis, dims, side)
    out = []
    for proj in basis.projectors:
        big = _padded(proj, dims, side)
        unnorm = big @ rho.matrix @ big
        p = float(np.trace(unnorm).real)
        if p < PROB_FLOOR:
            out.append((0.0, None))
        else:
            out.append((p, as_density(unnorm / p, dims, tol=1e-9)))
    return out


def conditional_entropy(rho: DensityMatrix, basis: MeasurementBasis, side="B") -> float:
    """``Σ p_i S(rho_i)`` over the post-measurement ensemble."""
    return float(
        sum(p * von_neumann_entropy(r) for p, r in post_measurement_ensemble(rho, basis, side) if p > 0)
    )


def _conditional_blocks(rho, proj, side):
    """Unnormalised conditional states on the unmeasured side.

    ``proj`` has shape ``(..., k, d, d)``; the result ``(..., k, e, e)``.
    """
    dA, dB = rho.dims
    t = rho.matrix.reshape(dA, dB, dA, dB)
    if side is MeasuredSide.B:
        # Tr_B[(I ⊗ P) rho][a, c] = Σ_{b,d} P[d, b] rho[a b, c d]
        kernel = t.transpose(0, 2, 3, 1).reshape(dA * dA, dB * dB)
        d_meas, d_other = dB, dA
    else:
        # Tr_A[(P ⊗ I) rho][b, d] = Σ_{a,c} P[c, a] rho[a b, c d]
        kernel = t.transpose(1, 3, 2, 0).reshape(dB * dB, dA * dA)
        d_meas, d_other = dA, dB
    flat = proj.reshape(proj.shape[:-2] + (d_meas * d_meas,))
    return (flat @ kernel.T).reshape(proj.shape[:-2] + (d_other, d_other))


def _eigvalsh(stack):
    if stack.shape[-1] != 2:
        return np.linalg.eigvalsh(stack)
    a = stack[..., 0, 0].real
    d = stack[..., 1, 1].real
    half = 0.5 * (a + d)
    r = np.sqrt(0.25 * (a - d) ** 2 + np.abs(stack[..., 0, 1]) ** 2)
    return np.stack([half - r, half + r], axis=-1)


def _conditional_entropy_batch(rho, proj, side):
    blocks = _conditional_blocks(rho, proj, side)
    w = _eigvalsh(blocks)
    p = np.trace(blocks, axis1=-2, axis2=-1).real
    # Σ_i p_i S(σ_i / p_i) = -Σ λ log λ + Σ p log p
    return _xlogx_sum(w).sum(axis=-1) - _xlogx_sum(p)


def _classicalize_batch(rho, proj, side):
    blocks = _conditional_blocks(rho, proj, side)
    n = rho.dim
    lead = proj.shape[:-3]
    k, dm = proj.shape[-3], proj.shape[-1]
    do = blocks.shape[-1]
    # Σ_k P_k ⊗ σ_k as a contraction over k
    left = proj.reshape(lead + (k, dm * dm)).swapaxes(-1, -2)
    right = blocks.reshape(lead + (k, do * do))
    out = (left @ right).reshape(lead + (dm, dm, do, do))
    if side is MeasuredSide.A:
        out = out.swapaxes(-3, -2)  # (a, c, b, d) -> rows (a c), cols (b d)
    else:
        out = np.moveaxis(out, (-4, -3, -2, -1), (-3, -1, -4, -2))
    return out.reshape(lead + (n, n))


def classicalized_state(rho: DensityMatrix, basis: MeasurementBasis, side="A") -> DensityMatrix:
    """``Σ_i Π_i ⊗ Tr_measured[(Π_i) rho]`` in the original factor order.

    The conditionals use the same (rotated) projectors as the outer factor,
    so the result is the classical-quantum state induced by ``basis``.
    """
    side = _side(side)
    dims = _bipartite(rho)
    _check_basis(basis, dims, side)
    return as_density(_classicalize_batch(rho, basis.projectors, side), dims, tol=1e-9)


# ------------------------------------------------------------------ discord

def _finalize(value, label):
    if value < -CLAMP:
        raise NumericalError(f"{label} evaluated to {value:.3e} < 0")
    return max(value, 0.0)


def _search(rho, side, search, batch_objective):
    """Run the configured optimiser; returns (value, basis, OptimizerInfo)."""
    search = search or SearchConfig()
    d = rho.dims[side.index]
    if search.method == "grid":
        if d != 2:
            raise ValueError(f"grid search needs a qubit on the measured side, got d={d}")
        res = grid_minimize(lambda t, p: batch_objective(qubit_projectors(t, p)), search)
        info = OptimizerInfo(
            "grid", res.evaluations,
            resolution=(search.grid_steps_theta, search.grid_steps_phi, search.refine_levels),
        )
        return res.value, measurement_qubit(res.theta, res.phi), info
    res = mc_minimize(batch_objective, d, search, vectorized=True)
    info = OptimizerInfo("monte-carlo", res.evaluations, samples=search.samples, seed=search.seed)
    return res.value, res.basis, info


def entropic_discord(rho: DensityMatrix, side="B", search: SearchConfig | None = None) -> DiscordResult:
    """One-way entropic discord with measurement on ``side`` (bits).

    ``S(rho_measured) - S(rho) + min_basis Σ p_i S(rho_i)``. Grid search is
    available when the measured subsystem is a qubit; Monte Carlo for any
    dimension.
    """
    side = _side(side)
    _bipartite(rho)
    base = von_neumann_entropy(partial_trace(rho, side.index)) - von_neumann_entropy(rho)
    cond, basis, info = _search(rho, side, search, lambda P: _conditional_entropy_batch(rho, P, side))
    return DiscordResult(_finalize(base + cond, "entropic discord"), basis, info, side)


def geometric_discord(rho: DensityMatrix, side="A", search: SearchConfig | None = None) -> DiscordResult:
    """Trace-norm distance to the nearest classical state induced by a
    projective measurement on ``side``; unnormalised."""
    side = _side(side)
    _bipartite(rho)

    def objective(P):
        return hermitian_trace_norm(rho.matrix - _classicalize_batch(rho, P, side))

    value, basis, info = _search(rho, side, search, objective)
    return DiscordResult(_finalize(value, "geometric discord"), basis, info, side)


def geometric_distance(rho: DensityMatrix, basis: MeasurementBasis, side="A") -> float:
    """``||rho - classicalized_state(rho, basis, side)||_1`` for one basis."""
    return trace_norm(rho.matrix - classicalized_state(rho, basis, side).matrix)


# --------------------------------------------------------------- concurrence

def concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence from the spin-flipped spectrum."""
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"concurrence needs a 2x2 state, got dims {rho.dims}")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    m = rho.matrix
    r = m @ yy @ m.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1:].sum()))
