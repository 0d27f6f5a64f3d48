"""Fisher information of a Gaussian on a periodic grid.

Compares the grid value with the line closed form and with the exact value
for the torus, and shows how the gap closes as the period grows.
"""
import math

import numpy as np

from fisherinfo import GridSpec, KineticSpec, fisher_info, gaussian_density, gaussian_fisher_info

grid = GridSpec(d=1, n_particles=1, m=64, period=16.0)
mu = gaussian_density(grid, mean=8.0, sigma2=1.0)

for s in (0.25, 0.5, 0.75, 1.0):
    value = fisher_info(mu, KineticSpec(s)).value
    line = gaussian_fisher_info(1, 1.0, s)
    # modes of the torus are 2 pi q / L; sqrt(mu) has power e^{-2 k^2}
    k = 2 * np.pi * np.arange(-4000, 4001) / grid.period
    torus = np.sum(np.abs(k) ** (2 * s) * np.exp(-2 * k**2)) / np.sum(np.exp(-2 * k**2))
    print(f"s={s:4}: grid {value:.10f}  torus {torus:.10f}  line {line:.10f}")

# at s = 1/2 the |k| kink at k = 0 is sampled with spacing 2 pi / L, so the
# torus value approaches the line value only like L^-2
print()
for L in (16.0, 32.0, 64.0, 128.0):
    g = GridSpec(1, 1, int(4 * L), L)
    value = fisher_info(gaussian_density(g, L / 2, 1.0), KineticSpec(0.5)).value
    rel = (value - 1 / math.sqrt(2 * math.pi)) * math.sqrt(2 * math.pi)
    print(f"L={L:6}: I_1/2 = {value:.8f}  relative error {rel:+.2e}")

# the lattice symbol trades spectral accuracy for exact positivity preservation
print()
for m in (32, 64, 128):
    g = GridSpec(1, 1, m, 16.0)
    rho = gaussian_density(g, 8.0, 1.0)
    print(f"m={m:4}: spectral {fisher_info(rho, KineticSpec(1.0)).value:.12f}  "
          f"lattice {fisher_info(rho, KineticSpec(1.0, method='lattice')).value:.12f}")
