"""
Monte Carlo discord for qudits
==============================

For a measured subsystem of dimension d > 2 the measurement is drawn at
random: sample a generalised Bloch vector, expand it in the Gell-Mann basis,
keep it if the result is a valid state, and measure in its eigenbasis.
"""

import numpy as np

from qdiscord import SearchConfig, as_density, entropic_discord, gellmann, geometric_discord
from qdiscord.basis_search import sample_states_report

# The d^2 - 1 Gell-Mann matrices are orthogonal under the trace inner product.
for d in (2, 3, 4):
    lam = gellmann(d).matrices
    gram = np.einsum("iab,jba->ij", lam, lam).real
    print(f"d={d}: {len(lam)} matrices, Gram = 2 I: {np.allclose(gram, 2 * np.eye(len(lam)))}")

# Not every Bloch vector gives a positive state; the filter keeps a fraction.
for d in (2, 3, 4):
    rep = sample_states_report(d, 5000, seed=1)
    print(f"d={d}: acceptance {rep['acceptance_rate']:.3f}, violations {rep['violations']}")

# Two-qutrit isotropic state: (1 - w) I/9 + w |psi><psi| with |psi> maximally entangled.
psi = np.zeros(9)
psi[[0, 4, 8]] = 1 / np.sqrt(3)
cfg = SearchConfig(method="monte-carlo", samples=20_000, seed=7)
for w in (0.0, 0.3, 0.6, 1.0):
    rho = as_density((1 - w) * np.eye(9) / 9 + w * np.outer(psi, psi), (3, 3))
    print(f"w={w:.1f}: entropic {entropic_discord(rho, 'B', cfg).value:.4f}  "
          f"geometric {geometric_discord(rho, 'A', cfg).value:.4f}")

# For a qubit the Monte Carlo estimate agrees with grid search.
bell = as_density(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2, (2, 2))
print("Bell, grid:", entropic_discord(bell).value,
      " MC:", entropic_discord(bell, search=SearchConfig(method="monte-carlo", samples=5000)).value)
