"""Measurement parameterisation and the two basis optimisers.

Qubit measurements are indexed by two angles ``(theta, phi)`` and searched on
a nested grid. Qudit measurements are drawn by Monte Carlo: a generalised
Bloch vector is sampled, turned into a state with the Gell-Mann expansion,
filtered for positivity, and its eigenbasis is used as the projective
measurement.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import NumericalError, SamplingError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

_ANGLE_SLACK = 1e-12
MAX_REJECTIONS = 10**6
# samples drawn per seed stream in Monte Carlo search
MC_CHUNK = 4096


@dataclass(frozen=True)
class SearchConfig:
    """Optimiser settings shared by the discord searches."""

    method: str = "grid"
    grid_steps_theta: int = 181
    grid_steps_phi: int = 361
    refine_levels: int = 2
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("grid", "monte-carlo"):
            raise ValueError(f"unknown search method {self.method!r}")
        for name in ("grid_steps_theta", "grid_steps_phi", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.refine_levels < 0:
            raise ValueError("refine_levels must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """A complete set of orthogonal projectors on one subsystem.

    ``projectors`` has shape ``(n_outcomes, d, d)``. Qubit bases built from
    angles keep ``theta`` and ``phi``; sampled qudit bases leave them ``None``.
    """

    projectors: np.ndarray
    theta: float | None = None
    phi: float | None = None

    def __post_init__(self):
        p = np.array(self.projectors, dtype=complex)
        if p.ndim != 3 or p.shape[1] != p.shape[2]:
            raise ValueError(f"projector stack has bad shape {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "projectors", p)

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]

    def check(self, tol: float = 1e-10):
        """Raise ``ValueError`` unless the projectors are Hermitian, idempotent,
        mutually orthogonal and complete."""
        p = self.projectors
        herm = np.abs(p - np.conj(np.swapaxes(p, 1, 2))).max()
        prods = np.einsum("iab,jbc->ijac", p, p)
        n = len(p)
        expected = np.zeros_like(prods)
        for i in range(n):
            expected[i, i] = p[i]
        ortho = np.abs(prods - expected).max()
        comp = np.abs(p.sum(axis=0) - np.eye(self.dim)).max()
        worst = max(herm, ortho, comp)
        if worst > tol:
            raise ValueError(
                f"not an orthogonal projective measurement "
                f"(hermiticity {herm:.2e}, orthogonality {ortho:.2e}, completeness {comp:.2e})"
            )
        return self

    def digest(self) -> str:
        """Short stable identifier for reports."""
        data = np.round(self.projectors, 9) + 0.0  # normalise -0.0
        return hashlib.sha256(data.tobytes()).hexdigest()[:12]


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    dim: int
    symmetric: np.ndarray
    antisymmetric: np.ndarray
    diagonal: np.ndarray
    matrices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "matrices", np.concatenate([self.symmetric, self.antisymmetric, self.diagonal])
        )

    def __len__(self):
        return len(self.matrices)


@dataclass(frozen=True, eq=False)
class BlochVector:
    dim: int
    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if c.shape != (self.dim**2 - 1,):
            raise ValueError(f"Bloch vector for d={self.dim} needs {self.dim**2 - 1} components")
        object.__setattr__(self, "components", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


# --------------------------------------------------------------------- qubits

def projectors_qubit():
    """Computational-basis projectors ``(|0><0|, |1><1|)``."""
    return (np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex))


def bloch_axis(theta, phi):
    """Unit vector ``(sinθ cosφ, sinθ sinφ, cosθ)``; broadcasts."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _check_angles(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(~np.isfinite(theta)) or np.any(~np.isfinite(phi)):
        raise ValueError("angles must be finite")
    if np.any(theta < -_ANGLE_SLACK) or np.any(theta > np.pi + _ANGLE_SLACK):
        raise ValueError(f"theta outside [0, pi]: {theta}")
    if np.any(phi < -_ANGLE_SLACK) or np.any(phi > 2 * np.pi + _ANGLE_SLACK):
        raise ValueError(f"phi outside [0, 2pi]: {phi}")
    return theta, phi


def rotation(theta, phi) -> np.ndarray:
    """``V = (I - i a·σ)/√2`` for the unit axis ``a(θ, φ)``.

    Accepts scalars or equally-shaped arrays; the result has shape
    ``theta.shape + (2, 2)``.
    """
    theta, phi = _check_angles(theta, phi)
    a = bloch_axis(theta, phi)
    a_sigma = np.einsum("...k,kij->...ij", a, PAULI)
    return (np.eye(2) - 1j * a_sigma) / np.sqrt(2)


def qubit_projectors(theta, phi) -> np.ndarray:
    """Stack of ``V† Π_i V`` with shape ``theta.shape + (2, 2, 2)``."""
    v = rotation(theta, phi)
    vh = np.conj(np.swapaxes(v, -1, -2))
    pis = np.stack(projectors_qubit())
    return np.einsum("...ab,ibc,...cd->...iad", vh, pis, v)


def measurement_qubit(theta: float, phi: float) -> MeasurementBasis:
    """Projective qubit measurement ``{V† Π_0 V, V† Π_1 V}``."""
    return MeasurementBasis(qubit_projectors(theta, phi), float(theta), float(phi))


# --------------------------------------------------------------- grid search

class GridMinimum(NamedTuple):
    value: float
    theta: float
    phi: float
    evaluations: int


def _evaluate(objective, theta, phi, vectorized):
    if vectorized:
        vals = np.asarray(objective(theta, phi), dtype=float)
        vals = np.broadcast_to(vals, theta.shape)
    else:
        vals = np.array([objective(t, p) for t, p in zip(theta, phi)], dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise NumericalError(
            f"objective is not finite at theta={theta[k]!r}, phi={phi[k]!r}",
            theta=float(theta[k]), phi=float(phi[k]),
        )
    return vals


def _pick(vals, theta, phi):
    # lowest value; ties go to smallest theta, then smallest phi
    vmin = vals.min()
    idx = np.flatnonzero(vals == vmin)
    order = np.lexsort((phi[idx], theta[idx]))
    k = idx[order[0]]
    return float(vals[k]), float(theta[k]), float(phi[k])


def grid_minimize(
    objective: Callable,
    cfg: SearchConfig | None = None,
    vectorized: bool = True,
    zoom_halfwidth: int = 2,
) -> GridMinimum:
    """Minimise ``objective(theta, phi)`` over ``[0, π] × [0, 2π]``.

    A coarse uniform grid is scanned first, then each refinement level scans
    a window of ``±zoom_halfwidth`` previous steps around the incumbent at a
    ten times finer step. The incumbent always stays a candidate, so extra
    levels can only lower the result.

    With ``vectorized=True`` the objective receives flat arrays of angles and
    must return an array of values; otherwise it is called per point.
    """
    cfg = cfg or SearchConfig()
    nt, npf = cfg.grid_steps_theta, cfg.grid_steps_phi
    thetas = np.linspace(0.0, np.pi, nt) if nt > 1 else np.zeros(1)
    phis = np.linspace(0.0, 2 * np.pi, npf) if npf > 1 else np.zeros(1)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    vals = _evaluate(objective, tt, pp, vectorized)
    best = _pick(vals, tt, pp)
    evaluations = vals.size

    dt = np.pi / max(nt - 1, 1)
    dp = 2 * np.pi / max(npf - 1, 1)
    span = np.arange(-10 * zoom_halfwidth, 10 * zoom_halfwidth + 1)
    for _ in range(cfg.refine_levels):
        dt, dp = dt / 10, dp / 10
        _, t0, p0 = best
        ts = np.unique(np.clip(t0 + span * dt, 0.0, np.pi))
        ps = np.unique(np.mod(p0 + span * dp, 2 * np.pi))
        tt, pp = np.meshgrid(ts, ps, indexing="ij")
        tt = np.append(tt.ravel(), t0)
        pp = np.append(pp.ravel(), p0)
        vals = _evaluate(objective, tt[:-1], pp[:-1], vectorized)
        evaluations += vals.size
        vals = np.append(vals, best[0])
        best = _pick(vals, tt, pp)
    return GridMinimum(best[0], best[1], best[2], evaluations)


# ----------------------------------------------------------------- Gell-Mann

@lru_cache(maxsize=None)
def gellmann(d: int) -> GellMannBasis:
    """Generalised Gell-Mann matrices of dimension ``d``.

    Ordered symmetric, antisymmetric, diagonal; for ``d = 2`` this is
    ``(σx, σy, σz)``. Every matrix is Hermitian, traceless and normalised to
    ``Tr(Λ_i Λ_j) = 2 δ_ij``.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"Gell-Mann basis needs d >= 2, got {d}")
    d = int(d)
    sym, anti = [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1
            sym.append(s)
            a = np.zeros((d, d), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            anti.append(a)
    diag = []
    for l in range(1, d):
        entries = np.zeros(d)
        entries[:l] = 1
        entries[l] = -l
        diag.append(np.sqrt(2 / (l * (l + 1))) * np.diag(entries).astype(complex))
    out = GellMannBasis(d, np.array(sym), np.array(anti), np.array(diag))
    out.matrices.setflags(write=False)
    return out


def _bloch_components(rng, d, n):
    m = d * d - 1
    nu = rng.uniform(-1.0, 1.0, size=(n, m))
    r = rng.uniform(0.0, 1.0, size=n)
    sq = np.einsum("ij,ij->i", nu, nu)
    ok = sq > 0
    nu, r, sq = nu[ok], r[ok], sq[ok]
    return np.sqrt(r / sq)[:, None] * nu


def sample_bloch(d: int, rng: np.random.Generator) -> BlochVector:
    """Draw ``b = sqrt(r/|ν|²) ν`` with ``ν_i ~ U[-1, 1]`` and ``r ~ U[0, 1]``."""
    while True:
        b = _bloch_components(rng, d, 1)
        if len(b):
            return BlochVector(d, b[0])


def bloch_to_state(b) -> np.ndarray:
    """``(I + √d b·Λ)/d``. Hermitian with unit trace, not necessarily positive.

    ``b`` may be a :class:`BlochVector` or an array whose last axis holds the
    components.
    """
    comps = b.components if isinstance(b, BlochVector) else np.asarray(b, dtype=float)
    m = comps.shape[-1]
    d = int(round(np.sqrt(m + 1)))
    if d * d - 1 != m:
        raise ValueError(f"{m} components is not d^2 - 1 for any d")
    lam = gellmann(d).matrices
    return (np.eye(d) + np.sqrt(d) * np.einsum("...k,kij->...ij", comps, lam)) / d


def _eig_projectors(vecs):
    # (..., d, d) eigenvector columns -> (..., d, d, d) rank-1 projectors
    return np.einsum("...ak,...bk->...kab", vecs, vecs.conj())


def _sample_states(rng, d, n, batch=64, max_rejections=MAX_REJECTIONS):
    """Draw ``n`` positive Bloch states. Returns (b, V, eigvecs, drawn).

    Candidates are drawn in fixed-size batches so that the k-th accepted
    sample does not depend on ``n``.
    """
    bs, vs, us, masks = [], [], [], []
    have, rejected = 0, 0
    while have < n:
        b = _bloch_components(rng, d, batch)
        v = bloch_to_state(b)
        w, u = np.linalg.eigh(v)
        ok = w[:, 0] >= 0.0
        rejected += len(ok) - int(ok.sum())
        if rejected > max_rejections and have + ok.sum() < n:
            raise SamplingError(
                f"positivity filter rejected more than {max_rejections} draws at d={d}"
            )
        bs.append(b[ok])
        vs.append(v[ok])
        us.append(u[ok])
        masks.append(ok)
        have += int(ok.sum())
    # candidates consumed up to and including the n-th acceptance
    drawn = int(np.flatnonzero(np.concatenate(masks))[n - 1]) + 1
    b = np.concatenate(bs)[:n]
    v = np.concatenate(vs)[:n]
    u = np.concatenate(us)[:n]
    return b, v, u, drawn


def sample_basis_qudit(d: int, rng: np.random.Generator) -> MeasurementBasis:
    """Projective measurement given by the eigenbasis of a sampled positive state."""
    _, _, u, _ = _sample_states(rng, d, 1)
    return MeasurementBasis(_eig_projectors(u[0]))


def _chunk_rng(seed, chunk):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


@lru_cache(maxsize=8)
def sampled_projectors(d: int, samples: int, seed: int) -> np.ndarray:
    """``samples`` Monte Carlo measurement bases as a ``(samples, d, d, d)`` stack.

    Sample ``i`` is drawn from the seed stream ``(seed, i // MC_CHUNK)``, so
    results do not depend on how chunks are scheduled.
    """
    out = []
    for chunk, start in enumerate(range(0, samples, MC_CHUNK)):
        n = min(MC_CHUNK, samples - start)
        _, _, u, _ = _sample_states(_chunk_rng(seed, chunk), d, n, batch=MC_CHUNK)
        out.append(_eig_projectors(u))
    p = np.concatenate(out)
    p.setflags(write=False)
    return p


def sample_states_report(d: int, samples: int, seed: int) -> dict:
    """Draw ``samples`` accepted states and count invariant violations."""
    drawn = 0
    violations = 0
    gm = gellmann(d)
    for chunk, start in enumerate(range(0, samples, MC_CHUNK)):
        n = min(MC_CHUNK, samples - start)
        b, v, u, k = _sample_states(_chunk_rng(seed, chunk), d, n, batch=MC_CHUNK)
        drawn += k
        w = np.linalg.eigvalsh(v)
        tr = np.trace(v, axis1=1, axis2=2)
        herm = np.abs(v - np.conj(np.swapaxes(v, 1, 2))).max(axis=(1, 2))
        proj = _eig_projectors(u)
        comp = np.abs(proj.sum(axis=1) - np.eye(d)).max(axis=(1, 2))
        idem = np.abs(np.einsum("nkab,nkbc->nkac", proj, proj) - proj).max(axis=(1, 2, 3))
        bad = (
            (w[:, 0] < -1e-10)
            | (np.abs(tr - 1) > 1e-12)
            | (herm > 1e-12)
            | (np.linalg.norm(b, axis=1) > 1.0)
            | (comp > 1e-10)
            | (idem > 1e-10)
        )
        violations += int(bad.sum())
    return {
        "d": d,
        "gellmann_count": len(gm),
        "samples": samples,
        "seed": seed,
        "drawn": drawn,
        "acceptance_rate": samples / drawn,
        "violations": violations,
    }


class MCMinimum(NamedTuple):
    value: float
    basis: MeasurementBasis
    evaluations: int


def mc_minimize(
    objective: Callable,
    d: int,
    cfg: SearchConfig | None = None,
    vectorized: bool = False,
) -> MCMinimum:
    """Minimise ``objective`` over ``cfg.samples`` sampled measurement bases.

    The objective takes a :class:`MeasurementBasis`, or with
    ``vectorized=True`` the full ``(samples, d, d, d)`` projector stack.
    Ties go to the lowest sample index.
    """
    cfg = cfg or SearchConfig(method="monte-carlo")
    if cfg.samples < 1:
        raise ValueError("samples must be >= 1")
    stack = sampled_projectors(int(d), int(cfg.samples), int(cfg.seed))
    if vectorized:
        vals = np.asarray(objective(stack), dtype=float)
    else:
        vals = np.array([objective(MeasurementBasis(p)) for p in stack], dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        raise NumericalError(f"objective is not finite for sample {int(np.flatnonzero(bad)[0])}")
    k = int(np.argmin(vals))
    return MCMinimum(float(vals[k]), MeasurementBasis(stack[k]), int(vals.size))
