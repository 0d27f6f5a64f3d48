"""Mean Fisher information of de Finetti mixtures.

For mu_n = sum_i w_i rho_i^(x)n the sequence I_s[mu_n] / n climbs toward
the weighted average of the single-particle informations. The defect
shrinks roughly geometrically, at a rate set by the overlap of the atoms.
"""
from fisherinfo import GridSpec, KineticSpec, MixingMeasure, gaussian_density, mean_info_sequence
from fisherinfo.harness import affine_value

grid = GridSpec(1, 1, 16, 16.0)
L = grid.period

for frac in (1 / 12, 1 / 10, 1 / 8):
    sigma2 = (frac * L) ** 2
    P = MixingMeasure((0.5, 0.5), (gaussian_density(grid, L / 4, sigma2), gaussian_density(grid, 3 * L / 4, sigma2)))
    for s in (0.5, 1.0):
        spec = KineticSpec(s)
        affine = affine_value(P, spec)
        defects = [affine - g for _, g in mean_info_sequence(P, spec, 6)]
        print(f"sigma=L*{frac:.3f} s={s}: " + "  ".join(f"{d:.2e}" for d in defects))
