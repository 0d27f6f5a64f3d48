"""The double-integral form of I_s, its calibration and the s -> 1 limit.

The constant in front of the pair integral is fitted on a reference
Gaussian and checked on random densities. With the exponent d + 2s it
matches the continuum normalizing constant; with d + s it does not fit.
"""
import math

from fisherinfo import (
    GridSpec,
    KineticSpec,
    bbm_scan,
    calibrate_limit_constant,
    calibrate_singular_constant,
    fisher_info,
    random_density,
    salem_variant_info,
    singular_form,
)

grid = GridSpec(1, 1, 64, 16.0)

for s in (0.3, 0.5, 0.7):
    exact = s * 4**s * math.gamma(0.5 + s) / (2 * math.sqrt(math.pi) * math.gamma(1 - s))
    print(f"s={s}: C(2s) = {calibrate_singular_constant(grid, s, '2s'):.6f}  continuum {exact:.6f}"
          f"   C(s) = {calibrate_singular_constant(grid, s, 's'):.6f}")

print()
for seed in range(3):
    mu = random_density(grid, seed)
    spectral = fisher_info(mu, KineticSpec(0.5)).value
    for offset in ("s", "2s"):
        est = calibrate_singular_constant(grid, 0.5, offset) * singular_form(mu, 0.5, offset)
        print(f"seed {seed} offset {offset:2s}: relative error {abs(est - spectral) / spectral:.2e}")

print()
mu = random_density(grid, 11)
C = calibrate_limit_constant(grid)
print(f"I_1 = {fisher_info(mu, KineticSpec(1.0)).value:.6f}")
for row in bbm_scan(mu, [0.5, 0.8, 0.9, 0.95, 0.99]):
    print(f"s={row.s:4}: I_s {row.spectral:.6f}  C_lim (1-s) singular {C * row.scaled_singular:.6f}")

print()
for s in (0.3, 0.5):
    print(f"s={s}: log-difference form {salem_variant_info(mu, s):.4f} >= 4 x pair form {4 * singular_form(mu, s):.4f}")
