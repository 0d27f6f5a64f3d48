"""Fisher informations as kinetic energies of ``sqrt(mu)`` on a periodic grid.

Fourier convention: for a block of ``d`` axes, ``F(k) = sum_x f(x) exp(-i k.x)``
with modes ``k = 2*pi*q/L``, ``q`` in ``{-m/2, ..., m/2 - 1}^d`` (numpy's FFT
ordering). With cell-volume weights, discrete Plancherel reads

    h^(dN) * sum_x |f(x)|^2 = h^(dN) / m^d * sum_{k, rest} |F(k, rest)|^2

exactly, so ``sum_k |k|^(2s) |F|^2`` with that weight is the discrete
quadratic form of ``(-Delta)^s`` on one particle block. The zero mode of
``|k|^(2s)`` is taken as 0.

Besides the spectral form, the module evaluates the classical gradient form
``(1/4) int |grad mu|^2 / mu`` with centred differences and the singular
double-integral form, whose normalizing constant is obtained by calibration
against a reference Gaussian rather than from a closed formula.

The ``lattice`` symbol replaces ``|k|^2`` by the nearest-neighbour
difference symbol ``4 sin^2(k h / 2) / h^2`` before taking the power ``s``.
It converges only at second order, but as a fractional power of a Markov
generator its kernel has nonpositive off-diagonal entries for every
``s`` in ``(0, 1]``, so positivity preservation and convexity hold exactly
on the grid rather than up to discretization error.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.fft
from scipy.special import zeta

from .density import (
    POSITIVITY_FLOOR,
    Density,
    GridSpec,
    gaussian_density,
    torus_distance,
)
from .errors import ConfigError

log = logging.getLogger(__name__)

METHODS = ("spectral", "lattice", "gradient", "singular")
#: methods evaluated as a Fourier multiplier on sqrt(mu)
SYMBOLS = ("spectral", "lattice")
OFFSETS = ("s", "2s")
NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex (or real) grid function with unit weighted L2 norm."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.grid.shape:
            raise ConfigError(f"values have shape {values.shape}, grid expects {self.grid.shape}")
        if not np.iscomplexobj(values):
            values = values.astype(np.float64, copy=False)
        object.__setattr__(self, "values", values)

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume)

    def modulus(self) -> "WaveFunction":
        return WaveFunction(self.grid, np.abs(self.values))


@dataclass(frozen=True)
class KineticSpec:
    """Order ``s``, optional cutoff exponent ``gamma`` and evaluation method."""

    s: float
    gamma: float | None = None
    method: str = "spectral"
    exponent_offset: str = "2s"

    def __post_init__(self):
        if not 0 < self.s <= 1:
            raise ConfigError(f"s must lie in (0, 1], got {self.s}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.method == "gradient" and self.s != 1:
            raise ConfigError("method 'gradient' is only defined for s = 1")
        if self.method == "singular" and not self.s < 1:
            raise ConfigError("method 'singular' needs 0 < s < 1")
        if self.gamma is not None and not self.gamma < 0:
            raise ConfigError(f"gamma must be negative, got {self.gamma}")
        if self.exponent_offset not in OFFSETS:
            raise ConfigError(f"exponent_offset must be one of {OFFSETS}")


@dataclass(frozen=True)
class FisherResult:
    value: float
    s: float
    method: str
    grid: GridSpec
    per_axis: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "s": self.s,
            "method": self.method,
            "grid": self.grid.to_dict(),
            "per_axis": list(self.per_axis),
        }


def sqrt_density(mu: Density) -> WaveFunction:
    return WaveFunction(mu.grid, np.sqrt(mu.values))


def wave_numbers(grid: GridSpec) -> np.ndarray:
    """Angular wave numbers ``2*pi*q/L`` along one axis in FFT order."""
    return 2 * np.pi * np.fft.fftfreq(grid.m, d=grid.h)


def mode_indices(grid: GridSpec) -> np.ndarray:
    """Integer mode indices ``q`` along one axis in FFT order."""
    return np.fft.fftfreq(grid.m, d=1.0 / grid.m).astype(int)


def fractional_multiplier(grid: GridSpec, s: float, symbol: str = "spectral") -> np.ndarray:
    """``|k|^(2s)`` on the modes of one particle block, shape ``(m,)*d``, FFT order.

    ``symbol="lattice"`` uses ``(sum_a 4 sin^2(k_a h / 2) / h^2)^s`` instead.
    """
    if not 0 < s <= 1:
        raise ConfigError(f"s must lie in (0, 1], got {s}")
    if symbol not in SYMBOLS:
        raise ConfigError(f"unknown symbol {symbol!r}; choose from {SYMBOLS}")
    k = wave_numbers(grid)
    if symbol == "lattice":
        k = 2 * np.sin(k * grid.h / 2) / grid.h
    k2 = np.zeros((grid.m,) * grid.d)
    for ax in range(grid.d):
        shape = [1] * grid.d
        shape[ax] = grid.m
        k2 = k2 + (k**2).reshape(shape)
    out = np.zeros_like(k2)
    nonzero = k2 > 0
    out[nonzero] = k2[nonzero] ** s
    return out


def _block_multiplier(grid: GridSpec, s: float, j: int, symbol: str = "spectral") -> np.ndarray:
    mult = fractional_multiplier(grid, s, symbol)
    shape = [1] * grid.n_axes
    for ax in grid.block_axes(j):
        shape[ax] = grid.m
    return mult.reshape(shape)


def block_energy(
    values: np.ndarray, grid: GridSpec, s: float, j: int, symbol: str = "spectral"
) -> float:
    """``<f, (-Delta_{x_j})^s f>`` for an arbitrary (unnormalized) grid function."""
    F = scipy.fft.fftn(values, axes=grid.block_axes(j))
    weight = grid.cell_volume / grid.m**grid.d
    power = F.real**2 + F.imag**2
    return float(np.sum(_block_multiplier(grid, s, j, symbol) * power) * weight)


def apply_fractional_laplacian(
    values: np.ndarray, grid: GridSpec, s: float, j: int, symbol: str = "spectral"
) -> np.ndarray:
    """``(-Delta_{x_j})^s f`` evaluated on the grid."""
    axes = grid.block_axes(j)
    F = scipy.fft.fftn(values, axes=axes)
    out = scipy.fft.ifftn(_block_multiplier(grid, s, j, symbol) * F, axes=axes)
    return out if np.iscomplexobj(values) else out.real


def _check_normalized(psi: WaveFunction) -> None:
    if abs(psi.norm2 - 1.0) > NORM_TOL:
        raise ConfigError(f"wave function has squared norm {psi.norm2!r}, expected 1")


def kinetic_energies(
    psi: WaveFunction, s: float, symmetric: bool = False, symbol: str = "spectral"
) -> list[float]:
    """Per-particle energies ``<psi, (-Delta_{x_j})^s psi>``, ``j = 1..N``.

    With ``symmetric=True`` only the first block is transformed and its value
    is repeated, which is exact for permutation-symmetric ``psi``.
    """
    N = psi.grid.n_particles
    if symmetric:
        return [block_energy(psi.values, psi.grid, s, 0, symbol)] * N
    return [block_energy(psi.values, psi.grid, s, j, symbol) for j in range(N)]


def kinetic_form(psi: WaveFunction, spec: KineticSpec, symmetric: bool = False) -> float:
    """``<psi, sum_j (-Delta_{x_j})^s psi>`` with the spectral or lattice symbol."""
    if spec.method not in SYMBOLS:
        raise ConfigError(f"kinetic_form evaluates the methods {SYMBOLS} only")
    _check_normalized(psi)
    return math.fsum(kinetic_energies(psi, spec.s, symmetric, spec.method))


# -- gradient form -----------------------------------------------------------


def _gradient_per_axis(mu: Density) -> list[float]:
    grid = mu.grid
    values = mu.values
    live = values >= POSITIVITY_FLOOR * values.max()
    safe = np.where(live, values, 1.0)
    out = []
    for j in range(grid.n_particles):
        acc = 0.0
        for ax in grid.block_axes(j):
            diff = (np.roll(values, -1, axis=ax) - np.roll(values, 1, axis=ax)) / (2 * grid.h)
            acc += float(np.sum(np.where(live, diff**2 / safe, 0.0)))
        out.append(0.25 * acc * grid.cell_volume)
    return out


def spectral_gradient_form(psi: WaveFunction) -> float:
    """``int |grad psi|^2`` with spectral differentiation (multiplier ``i k``)."""
    grid = psi.grid
    k = wave_numbers(grid)
    total = 0.0
    for ax in range(grid.n_axes):
        shape = [1] * grid.n_axes
        shape[ax] = grid.m
        F = scipy.fft.fft(psi.values, axis=ax)
        deriv = scipy.fft.ifft(1j * k.reshape(shape) * F, axis=ax)
        total += float(np.sum(np.abs(deriv) ** 2))
    return total * grid.cell_volume


# -- singular (Gagliardo-type) forms -----------------------------------------


def _offset_value(s: float, exponent_offset) -> float:
    if exponent_offset == "s":
        return s
    if exponent_offset == "2s":
        return 2 * s
    raise ConfigError(f"exponent_offset must be 's' or '2s', got {exponent_offset!r}")


KERNELS = ("periodic", "minimum_image")


def _pair_kernel(grid: GridSpec, exponent: float, kernel: str) -> np.ndarray:
    """Interaction ``K(x, y)`` between nodes of one block, zero on the diagonal.

    ``periodic`` sums the power law over all periodic images (Hurwitz zeta,
    ``d = 1`` only); ``minimum_image`` uses ``1/dist^exponent`` with the
    torus distance.
    """
    n = grid.m**grid.d
    out = np.zeros((n, n))
    off = ~np.eye(n, dtype=bool)
    if kernel == "periodic":
        if grid.d != 1:
            raise ConfigError("the periodic kernel is implemented for d = 1 only")
        L = grid.period
        t = ((grid.nodes[None, :] - grid.nodes[:, None]) % L)[off] / L
        out[off] = L**-exponent * (zeta(exponent, t) + zeta(exponent, 1 - t))
        return out
    if kernel != "minimum_image":
        raise ConfigError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    axes = np.meshgrid(*([grid.nodes] * grid.d), indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=1)
    dist2 = np.zeros((n, n))
    for c in range(grid.d):
        dist2 += torus_distance(pts[:, c][:, None], pts[:, c][None, :], grid.period) ** 2
    out[off] = dist2[off] ** (-exponent / 2)
    return out


def _pairwise_sum(
    grid: GridSpec, f: np.ndarray, s: float, exponent_offset, pair_term, kernel: str
) -> float:
    """``N * sum_{x != y} K(x, y) sum_rest pair_term(f(x, rest), f(y, rest))`` with weights.

    For the periodic kernel the excluded diagonal cell is compensated by the
    leading generalized Euler-Maclaurin term: a lattice sum of
    ``|r|^(2-a)`` misses ``2 zeta(a-2) h^(3-a)`` against the integral, and
    near the diagonal the pair term behaves like ``r^2`` times its
    nearest-neighbour value over ``h^2``.
    """
    exponent = grid.d + _offset_value(s, exponent_offset)
    K = _pair_kernel(grid, exponent, kernel)
    block = grid.m**grid.d
    flat = f.reshape(block, -1)
    total = 0.0
    for x in range(block):
        rows = pair_term(flat[x][None, :], flat)
        total += float(K[x] @ rows.sum(axis=1))
    h = grid.h
    total *= h ** (2 * grid.d)
    if kernel == "periodic":
        neighbour = pair_term(np.roll(f, -1, axis=0), f)
        total -= 2 * zeta(exponent - 2) * h ** (3 - exponent) * float(neighbour.sum()) / h**2 * h
    return grid.n_particles * total * h ** (grid.d * (grid.n_particles - 1))


def singular_form(mu: Density, s: float, exponent_offset="2s", kernel: str = "periodic") -> float:
    """Uncalibrated ``N * sum |sqrt mu(x,.) - sqrt mu(y,.)|^2 K(x, y)``.

    ``K`` is the power law ``|x - y|^-(d+a)`` with ``a`` equal to ``s`` or
    ``2s`` per ``exponent_offset``, diagonal excluded. Only the first particle
    block is differenced; symmetry supplies the factor ``N``.
    """
    if not 0 < s < 1:
        raise ConfigError(f"singular_form needs 0 < s < 1, got {s}")
    return _pairwise_sum(
        mu.grid, np.sqrt(mu.values), s, exponent_offset, lambda a, b: (a - b) ** 2, kernel
    )


def salem_phi(a, b):
    """``(a - b) * (log a - log b)``, with ``Phi(a, a) = 0``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (a - b) * (np.log(a) - np.log(b))


def salem_variant_info(
    mu: Density, s: float, exponent_offset="2s", argument: str = "density", kernel: str = "periodic"
) -> float:
    """Entropy-dissipation variant ``N * sum Phi(f(x,.), f(y,.)) / |x-y|^(d+a)``.

    ``argument="density"`` takes ``f = mu`` (the entropy dissipation along the
    fractional heat flow); ``argument="sqrt"`` takes ``f = sqrt(mu)``.
    Only the first block is differenced, as in :func:`singular_form`.
    """
    if not 0 < s < 1:
        raise ConfigError(f"salem_variant_info needs 0 < s < 1, got {s}")
    if argument not in ("density", "sqrt"):
        raise ConfigError(f"argument must be 'density' or 'sqrt', got {argument!r}")
    values = mu.values
    if values.min() < POSITIVITY_FLOOR * values.max() or values.min() <= 0:
        raise ConfigError("salem_variant_info needs a strictly positive density")
    f = values if argument == "density" else np.sqrt(values)
    return _pairwise_sum(mu.grid, f, s, exponent_offset, salem_phi, kernel)


def reference_gaussian(grid_1p: GridSpec) -> Density:
    """Centred wrapped Gaussian with ``sigma = L/16`` used for calibration."""
    L = grid_1p.period
    return gaussian_density(grid_1p, np.full(grid_1p.d, L / 2), (L / 16) ** 2)


@functools.lru_cache(maxsize=256)
def _calibration(d: int, m: int, period: float, s: float, exponent_offset: str, kernel: str) -> float:
    grid = GridSpec(d, 1, m, period)
    ref = reference_gaussian(grid)
    spectral = kinetic_form(sqrt_density(ref), KineticSpec(s))
    singular = singular_form(ref, s, exponent_offset, kernel)
    if singular <= 0:
        raise ConfigError("degenerate calibration: singular form of the reference vanished")
    return spectral / singular


def calibrate_singular_constant(
    grid_1p: GridSpec, s: float, exponent_offset="2s", kernel: str = "periodic"
) -> float:
    """Constant ``C`` with ``I_s ~ C * singular_form``, fitted on the reference Gaussian.

    Cached per ``(d, m, L, s, exponent_offset, kernel)``.
    """
    _offset_value(s, exponent_offset)
    return _calibration(grid_1p.d, grid_1p.m, grid_1p.period, float(s), exponent_offset, kernel)


# -- cutoff variant ----------------------------------------------------------


def cutoff_weight(grid: GridSpec, gamma: float, center) -> np.ndarray:
    """``chi(x) = (1 + |x - center|^2)^(2 gamma)`` on one block, torus distance."""
    center = np.broadcast_to(np.asarray(center, dtype=float), (grid.d,))
    r2 = np.zeros(())
    for c in center:
        r2 = np.add.outer(r2, torus_distance(grid.nodes, c, grid.period) ** 2)
    return (1.0 + r2) ** (2 * gamma)


def cutoff_fisher_info(
    mu: Density, s: float, gamma: float, center=0.0, symmetric: bool = False
) -> float:
    """``sum_j <sqrt mu | chi(x_j) (-Delta_{x_j})^s chi(x_j) | sqrt mu>``.

    ``gamma = 0`` is accepted as a test mode where ``chi = 1`` and the result
    reduces to the spectral Fisher information.
    """
    if not 0 < s <= 1:
        raise ConfigError(f"s must lie in (0, 1], got {s}")
    if gamma > 0:
        raise ConfigError(f"gamma must be negative, got {gamma}")
    if gamma == 0:
        log.info("cutoff_fisher_info called with gamma = 0: identity cutoff (test mode)")
    grid = mu.grid
    psi = np.sqrt(mu.values)
    chi = cutoff_weight(grid, gamma, center)
    blocks = [0] if symmetric else range(grid.n_particles)
    energies = []
    for j in blocks:
        shape = [1] * grid.n_axes
        for ax in grid.block_axes(j):
            shape[ax] = grid.m
        energies.append(block_energy(chi.reshape(shape) * psi, grid, s, j))
    if symmetric:
        energies = energies * grid.n_particles
    return math.fsum(energies)


# -- front door --------------------------------------------------------------


def fisher_info(mu: Density, spec: KineticSpec, symmetric: bool = False) -> FisherResult:
    """Fisher information of order ``spec.s`` by the requested method."""
    grid = mu.grid
    N = grid.n_particles
    if spec.gamma is not None:
        value = cutoff_fisher_info(mu, spec.s, spec.gamma, symmetric=symmetric)
        return FisherResult(value, spec.s, "cutoff", grid, (value / N,) * N)
    if spec.method in SYMBOLS:
        per_axis = kinetic_energies(sqrt_density(mu), spec.s, symmetric, spec.method)
    elif spec.method == "gradient":
        per_axis = _gradient_per_axis(mu)
    else:
        C = calibrate_singular_constant(grid.single(), spec.s, spec.exponent_offset)
        value = C * singular_form(mu, spec.s, spec.exponent_offset)
        per_axis = [value / N] * N
    value = math.fsum(per_axis)
    if value < -1e-12:
        raise ArithmeticError(f"negative Fisher information {value!r}")
    return FisherResult(max(value, 0.0), spec.s, spec.method, grid, tuple(per_axis))


def gaussian_fisher_info(d: int, sigma2: float, s: float) -> float:
    """Continuum ``I_s`` of an isotropic Gaussian: ``(2 sigma^2)^(-s) Gamma(d/2+s)/Gamma(d/2)``."""
    return (1 / (2 * sigma2)) ** s * math.gamma(d / 2 + s) / math.gamma(d / 2)


# -- Bourgain-Brezis-Mironescu scan -------------------------------------------


class BBMRow(NamedTuple):
    s: float
    spectral: float
    scaled_singular: float


def bbm_scan(
    mu: Density, s_values: Sequence[float], exponent_offset="2s", kernel: str = "periodic"
) -> list[BBMRow]:
    """Rows ``(s, I_s spectral, (1-s) * singular_form)`` for ascending ``s < 1``."""
    s_values = [float(s) for s in s_values]
    if any(b <= a for a, b in zip(s_values, s_values[1:])):
        raise ConfigError("s_values must be strictly ascending")
    if any(not 0 < s < 1 for s in s_values):
        raise ConfigError("s_values must lie in (0, 1)")
    psi = sqrt_density(mu)
    rows = []
    for s in s_values:
        spectral = kinetic_form(psi, KineticSpec(s))
        scaled = (1 - s) * singular_form(mu, s, exponent_offset, kernel)
        rows.append(BBMRow(s, spectral, scaled))
    return rows


def calibrate_limit_constant(
    grid_1p: GridSpec, s: float = 0.99, exponent_offset="2s", kernel: str = "periodic"
) -> float:
    """Empirical limit constant ``I_1 / ((1 - s) * singular_form)`` on the reference Gaussian."""
    ref = reference_gaussian(grid_1p)
    i1 = kinetic_form(sqrt_density(ref), KineticSpec(1.0))
    return i1 / ((1 - s) * singular_form(ref, s, exponent_offset, kernel))
