"""Gibbs states of a four-level ladder: energy, heat capacity and the entropy inversion."""

import math

import numpy as np

from corrwork.thermo import beta_from_entropy, c_max, gibbs_point, thermal_at_entropy

levels = [0.0, 1.0, 2.0, 3.0]

print("beta     E        S        C")
for beta in (0.0, 0.5, 1.0, 2.0, 5.0):
    g = gibbs_point(levels, beta)
    print(f"{beta:<8.2f} {g.energy:<8.4f} {g.entropy:<8.4f} {g.heat_capacity:.4f}")

print("\nentropy -> (thermal energy, heat capacity, beta)")
for s in np.linspace(0.0, math.log(4), 6):
    e, c, beta = thermal_at_entropy(levels, s)
    print(f"s={s:.4f}  E={e:.4f}  C={c:.4f}  beta={beta:.4f}")

s = gibbs_point(levels, 1.3).entropy
print(f"\nround trip at beta=1.3: {beta_from_entropy(levels, s):.12f}")
print(f"largest heat capacity for entropies up to ln 4: {c_max(levels, 4):.6f}")
