"""Entropic and geometric quantum discord with measurement-basis search,
plus the amplitude-damping / weak-measurement reversal protocol."""
from .basis_search import (
    BlochVector,
    GellMannBasis,
    MeasurementBasis,
    SearchConfig,
    bloch_to_state,
    gellmann,
    grid_minimize,
    mc_minimize,
    measurement_qubit,
    projectors_qubit,
    rotation,
    sample_basis_qudit,
    sample_bloch,
)
from .correlations import (
    DiscordResult,
    MeasuredSide,
    classicalized_state,
    concurrence,
    conditional_entropy,
    entropic_discord,
    geometric_discord,
    mutual_information,
    post_measurement_ensemble,
    shannon_entropy,
    von_neumann_entropy,
)
from .damping import (
    ProtocolParams,
    apply_filter,
    apply_local_channels,
    initial_state,
    kraus_ad,
    m_rev,
    m_weak,
    reversal_strength,
    rho_d,
    rho_r,
    rho_r_circuit,
)
from .densmat import DensityMatrix, as_density, eig_hermitian, kron, partial_trace, trace_norm
from .errors import FilterError, NumericalError, SamplingError, ValidationError

__version__ = "0.1.0"
