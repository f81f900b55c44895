"""
Entropic and geometric discord of simple two-qubit states
=========================================================

Discord is computed by searching over projective measurements on one side.
For qubits the measurement is labelled by two angles and found on a nested
grid.
"""

import numpy as np

from qdiscord import (
    SearchConfig,
    as_density,
    concurrence,
    entropic_discord,
    geometric_discord,
    initial_state,
    mutual_information,
)

# A Bell state, a classically correlated mixture and a separable state
# that still carries discord (|0><0|⊗|0><0| mixed with |+><+|⊗|1><1|).
bell = initial_state(1 / np.sqrt(2), 1 / np.sqrt(2))
classical = as_density(np.diag([0.5, 0, 0, 0.5]), (2, 2))
plus = np.full((2, 2), 0.5)
sep = as_density(0.5 * np.kron(np.diag([1, 0]), np.diag([1, 0])) + 0.5 * np.kron(plus, np.diag([0, 1])), (2, 2))

for name, rho in [("Bell", bell), ("classical", classical), ("separable", sep)]:
    ent = entropic_discord(rho, side="B")
    geo = geometric_discord(rho, side="A")
    print(f"{name:>10}: I = {mutual_information(rho):.4f}  "
          f"D = {ent.value:.4f}  D_G = {geo.value:.4f}  C = {concurrence(rho):.4f}")

# Measured on B the separable state is classical: B's conditional states
# |0> and |1> are orthogonal, so a z measurement loses nothing.
print("D measured on B:", entropic_discord(sep, side="B").value)

# Discord is asymmetric. Measured on A the conditional states |0> and |+>
# are not orthogonal, so the unentangled state still has discord.
res = entropic_discord(sep, side="A")
print("D measured on A:", res.value)
print("optimal angles on A:", res.optimal_basis.theta, res.optimal_basis.phi)
print("optimizer:", res.optimizer)

# A coarser grid is faster and still close.
coarse = SearchConfig(grid_steps_theta=37, grid_steps_phi=73, refine_levels=1)
print("coarse grid:", entropic_discord(sep, side="A", search=coarse).value)
