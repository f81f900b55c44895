"""Amplitude damping and the weak-measurement / reversal protocol.

Closed forms for the decohered state ``rho_d`` and the protected state
``rho_r`` are authoritative; the Kraus/filter circuit is kept as an
independent path for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densmat import DensityMatrix, as_density, kron
from .errors import FilterError

FILTER_FLOOR = 1e-14


def _strength(name, x):
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def reversal_strength(p: float, D: float) -> float:
    """Reversing-measurement strength ``(1 - D) p + D``."""
    p = _strength("p", p)
    D = _strength("D", D)
    return (1.0 - D) * p + D


@dataclass(frozen=True)
class ProtocolParams:
    """Input amplitudes, damping strengths and weak-measurement strengths.

    Qubit 1 is Bob's (first factor), qubit 2 Charlie's.
    """

    alpha: complex
    beta: complex
    D1: float = 0.0
    D2: float = 0.0
    p1: float = 0.0
    p2: float = 0.0

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm}, expected 1")
        for name in ("D1", "D2", "p1", "p2"):
            object.__setattr__(self, name, _strength(name, getattr(self, name)))

    @classmethod
    def from_alpha(cls, alpha: float, **kw) -> "ProtocolParams":
        """Real amplitudes with ``beta = sqrt(1 - alpha^2)``."""
        return cls(alpha, np.sqrt(max(0.0, 1.0 - alpha**2)), **kw)

    @property
    def pr1(self) -> float:
        return reversal_strength(self.p1, self.D1)

    @property
    def pr2(self) -> float:
        return reversal_strength(self.p2, self.D2)

    @property
    def Dbar1(self) -> float:
        return 1.0 - self.D1

    @property
    def Dbar2(self) -> float:
        return 1.0 - self.D2

    @property
    def pbar1(self) -> float:
        return 1.0 - self.p1

    @property
    def pbar2(self) -> float:
        return 1.0 - self.p2

    @property
    def A(self) -> float:
        b2 = abs(self.beta) ** 2
        return 1.0 + (self.pbar1 * self.D1 * (1 + self.pbar2 * self.D2) + self.pbar2 * self.D2) * b2

    @property
    def success_probability(self) -> float:
        """Probability that both filters of the protocol succeed."""
        return self.pbar1 * self.pbar2 * self.Dbar1 * self.Dbar2 * self.A


def kraus_ad(D: float):
    """Amplitude-damping Kraus pair ``(K0, K1)`` for decay probability ``D``."""
    D = _strength("D", D)
    k0 = np.diag([1.0, np.sqrt(1.0 - D)]).astype(complex)
    k1 = np.array([[0.0, np.sqrt(D)], [0.0, 0.0]], dtype=complex)
    return k0, k1


def initial_state(alpha, beta) -> DensityMatrix:
    """``|Φ> = α|00> + β|11>`` as a density matrix."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise ValueError("initial state amplitudes are not normalised")
    psi = np.array([alpha, 0, 0, beta], dtype=complex)
    return as_density(np.outer(psi, psi.conj()), (2, 2))


def apply_local_channels(rho: DensityMatrix, D1: float, D2: float) -> DensityMatrix:
    """Independent amplitude damping on each qubit."""
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")
    out = np.zeros((4, 4), dtype=complex)
    for ka in kraus_ad(D1):
        for kb in kraus_ad(D2):
            k = kron(ka, kb)
            out += k @ rho.matrix @ k.conj().T
    return as_density(out, (2, 2))


def rho_d(alpha, beta, D1: float, D2: float) -> DensityMatrix:
    """Closed-form two-qubit state after damping ``|Φ>``."""
    D1 = _strength("D1", D1)
    D2 = _strength("D2", D2)
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise ValueError("initial state amplitudes are not normalised")
    a2, b2 = abs(alpha) ** 2, abs(beta) ** 2
    db1, db2 = 1.0 - D1, 1.0 - D2
    c = np.sqrt(db1 * db2) * alpha * np.conj(beta)
    m = np.diag([a2 + D1 * D2 * b2, D1 * db2 * b2, db1 * D2 * b2, db1 * db2 * b2]).astype(complex)
    m[0, 3] = c
    m[3, 0] = np.conj(c)
    return as_density(m, (2, 2))


def m_weak(p1: float, p2: float) -> np.ndarray:
    p1 = _strength("p1", p1)
    p2 = _strength("p2", p2)
    return kron(np.diag([1.0, np.sqrt(1 - p1)]), np.diag([1.0, np.sqrt(1 - p2)]))


def m_rev(pr1: float, pr2: float) -> np.ndarray:
    pr1 = _strength("pr1", pr1)
    pr2 = _strength("pr2", pr2)
    return kron(np.diag([np.sqrt(1 - pr1), 1.0]), np.diag([np.sqrt(1 - pr2), 1.0]))


def apply_filter(rho: DensityMatrix, M) -> tuple[float, DensityMatrix]:
    """Apply a non-unitary filter and renormalise.

    Returns the success probability ``Tr(M rho M†)`` and the filtered state.
    """
    M = np.asarray(M, dtype=complex)
    out = M @ rho.matrix @ M.conj().T
    q = float(np.trace(out).real)
    if q < FILTER_FLOOR:
        raise FilterError(f"filter success probability {q:.3e} is below {FILTER_FLOOR:g}")
    return q, as_density(out / q, rho.dims)


def rho_r(params: ProtocolParams) -> DensityMatrix:
    """Closed-form protected state after weak measurement, damping and reversal."""
    a, b = params.alpha, params.beta
    b2 = abs(b) ** 2
    m = np.diag([
        abs(a) ** 2 + params.pbar1 * params.pbar2 * params.D1 * params.D2 * b2,
        params.pbar1 * params.D1 * b2,
        params.pbar2 * params.D2 * b2,
        b2,
    ]).astype(complex)
    m[0, 3] = a * np.conj(b)
    m[3, 0] = np.conj(a) * b
    return as_density(m / params.A, (2, 2))


def rho_r_circuit(params: ProtocolParams) -> tuple[float, DensityMatrix]:
    """Protected state built step by step: filter, channels, filter.

    Returns the overall success probability and the final state.
    """
    rho = initial_state(params.alpha, params.beta)
    q1, rho = apply_filter(rho, m_weak(params.p1, params.p2))
    rho = apply_local_channels(rho, params.D1, params.D2)
    q2, rho = apply_filter(rho, m_rev(params.pr1, params.pr2))
    return q1 * q2, rho
