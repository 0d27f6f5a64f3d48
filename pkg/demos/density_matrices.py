"""Reduced density matrices of sqrt(mu) and what they carry.

The diagonal of the one-particle matrix is the marginal; its spectrum tells
how far the state is from a product; the kinetic trace over one- and
two-particle matrices splits I_s exactly.
"""
import numpy as np

from fisherinfo import (
    GridSpec,
    KineticSpec,
    eigendecompose,
    hoffmann_ostenhof_density,
    kinetic_trace,
    marginal,
    monomial_trace,
    random_density,
    reduced_density_matrix,
    split_identity_check,
    sqrt_density,
)

mu = random_density(GridSpec(1, 3, 16, 8.0), 4, smoothness=0.7)
psi = sqrt_density(mu)

gamma1 = reduced_density_matrix(psi, 1)
dec = eigendecompose(gamma1)
print("trace", gamma1.trace)
print("leading occupations", np.round(dec.eigenvalues[:5], 6))

rho1 = hoffmann_ostenhof_density(dec)
print("max |sum lambda |u|^2 - mu^(1)|", np.abs(rho1.values - marginal(mu, 1).values).max())

phi = np.cos(2 * np.pi * gamma1.grid.nodes / gamma1.grid.period)
print("tr(phi G) =", monomial_trace(gamma1, phi), " int phi mu^(1) =", marginal(mu, 1).integrate(phi))

for s in (0.5, 1.0):
    lhs, rhs = split_identity_check(mu, 1, KineticSpec(s))
    print(f"s={s}: I_s = {lhs:.12f}  tr(H_1 G1) + tr(H_2 G2) = {rhs:.12f}")
    print(f"      tr(H_1 G1) alone = {kinetic_trace(dec, KineticSpec(s)):.6f}")
