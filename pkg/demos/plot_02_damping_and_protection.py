"""
Discord under amplitude damping and its protection
==================================================

Theory curves for the state alpha|00> + beta|11> sent through two amplitude
damping channels, with and without weak measurement before the channel and
a reversing measurement after it.
"""

import numpy as np

from qdiscord import (
    ProtocolParams,
    concurrence,
    entropic_discord,
    geometric_discord,
    rho_d,
    rho_r,
)

alphas = {"|a|=|b|": 1 / np.sqrt(2), "a=0.42": 0.42}

# Decay with D1 = D2 = D. Concurrence for alpha = 0.42 drops to zero at a
# finite D while both discords survive until D = 1.
Ds = np.linspace(0, 1, 11)
for label, a in alphas.items():
    b = np.sqrt(1 - a * a)
    print(f"\n{label}   D   entropic  geometric  concurrence")
    for D in Ds:
        rho = rho_d(a, b, D, D)
        print(f"      {D:4.2f}  {entropic_discord(rho).value:8.4f}  "
              f"{geometric_discord(rho).value:9.4f}  {concurrence(rho):11.4f}")

# Protection at D1 = 0.6, D2 = 0.8: weak measurement strength p with the
# reversing strength (1 - D) p + D. The price is a lower success probability.
ps = np.linspace(0, 0.999, 11)
for label, a in alphas.items():
    b = np.sqrt(1 - a * a)
    print(f"\n{label}   p      entropic  success")
    for p in ps:
        pp = ProtocolParams(a, b, 0.6, 0.8, p, p)
        print(f"      {p:5.3f}  {entropic_discord(rho_r(pp)).value:8.4f}  {pp.success_probability:.2e}")

# Plot the entropic curves if matplotlib is around.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    for label, a in alphas.items():
        b = np.sqrt(1 - a * a)
        ax1.plot(Ds, [entropic_discord(rho_d(a, b, D, D)).value for D in Ds], label=label)
        ax1.plot(Ds, [concurrence(rho_d(a, b, D, D)) for D in Ds], "--", color=ax1.lines[-1].get_color())
        ax2.plot(ps, [entropic_discord(rho_r(ProtocolParams(a, b, 0.6, 0.8, p, p))).value for p in ps], label=label)
    ax1.set_xlabel("D")
    ax1.set_ylabel("entropic discord / concurrence")
    ax2.set_xlabel("p  (D1=0.6, D2=0.8)")
    ax1.legend()
    fig.tight_layout()
    fig.savefig("damping_and_protection.png", dpi=120)
    print("\nwrote damping_and_protection.png")
