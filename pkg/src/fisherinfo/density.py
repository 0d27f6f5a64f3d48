"""Symmetric probability densities on periodic tensor grids.

A configuration of ``N`` particles in ``d`` dimensions lives on the torus
``[0, L)^(d*N)`` sampled at ``m`` nodes per axis. Arrays are stored row-major
with axis order ``x_1, ..., x_N`` and ``d`` contiguous sub-axes per particle,
so an ``N``-particle density has shape ``(m,) * (d*N)``.

Integrals are plain Riemann sums, node value times cell volume. This is the
quadrature for which discrete Plancherel is exact, which the spectral module
relies on.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .budget import check_budget
from .errors import ConfigError, FormatError

MASS_TOL = 1e-12
SYMMETRY_TOL = 1e-12
#: relative floor applied by :func:`random_density` and used by the gradient form
POSITIVITY_FLOOR = 1e-12
MAX_SYMMETRIZE_PARTICLES = 6


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid for ``n_particles`` particles in ``d`` dimensions."""

    d: int
    n_particles: int
    m: int
    period: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError(f"d must be a positive integer, got {self.d}")
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ConfigError(f"n_particles must be a positive integer, got {self.n_particles}")
        if int(self.m) != self.m or self.m < 2:
            raise ConfigError(f"m must be an integer >= 2, got {self.m}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ConfigError(f"period must be positive, got {self.period}")
        object.__setattr__(self, "period", float(self.period))

    @property
    def h(self) -> float:
        """Grid spacing ``L / m``."""
        return self.period / self.m

    @property
    def n_axes(self) -> int:
        return self.d * self.n_particles

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.m,) * self.n_axes

    @property
    def size(self) -> int:
        return self.m**self.n_axes

    @property
    def cell_volume(self) -> float:
        return self.h**self.n_axes

    @property
    def nodes(self) -> np.ndarray:
        """Node coordinates ``i * L / m`` along a single axis."""
        return np.arange(self.m) * self.h

    def with_particles(self, n: int) -> "GridSpec":
        return GridSpec(self.d, n, self.m, self.period)

    def single(self) -> "GridSpec":
        return self.with_particles(1)

    def block_axes(self, j: int) -> tuple[int, ...]:
        """Array axes belonging to particle ``j`` (0-based)."""
        return tuple(range(j * self.d, (j + 1) * self.d))

    def to_dict(self) -> dict:
        return {"d": self.d, "n_particles": self.n_particles, "m": self.m, "period": self.period}


def torus_distance(x, y, period: float):
    """Minimum-image distance on a circle of length ``period`` (elementwise)."""
    diff = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) % period
    return np.minimum(diff, period - diff)


def _permute_blocks(values: np.ndarray, grid: GridSpec, perm: Sequence[int]) -> np.ndarray:
    axes = [ax for j in perm for ax in grid.block_axes(j)]
    return np.transpose(values, axes)


def symmetry_defect(values: np.ndarray, grid: GridSpec) -> float:
    """Largest change of ``values`` under a swap of adjacent particle blocks.

    Adjacent transpositions generate the symmetric group, so a zero defect
    means full permutation symmetry.
    """
    worst = 0.0
    for j in range(grid.n_particles - 1):
        perm = list(range(grid.n_particles))
        perm[j], perm[j + 1] = perm[j + 1], perm[j]
        swapped = _permute_blocks(values, grid, perm)
        worst = max(worst, float(np.max(np.abs(values - swapped))))
    return worst


@dataclass(frozen=True, eq=False)
class Density:
    """Nonnegative, unit-mass, permutation-symmetric grid function.

    Construction validates all three invariants; pass ``check=False`` only
    from builders whose output is symmetric by construction.
    """

    grid: GridSpec
    values: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            raise ConfigError(f"values have shape {values.shape}, grid expects {self.grid.shape}")
        values = values.view()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if not np.all(np.isfinite(values)) or values.min() < 0:
            raise ConfigError("density values must be finite and nonnegative")
        if abs(self.mass - 1.0) > MASS_TOL:
            raise ConfigError(f"density mass is {self.mass!r}, expected 1")
        if self.check:
            scale = max(1.0, float(values.max()))
            defect = symmetry_defect(values, self.grid)
            if defect > SYMMETRY_TOL * scale:
                raise ConfigError(f"density is not permutation symmetric (defect {defect:.3e})")

    @property
    def n_particles(self) -> int:
        return self.grid.n_particles

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.grid.cell_volume)

    def integrate(self, phi) -> float:
        """Riemann sum of ``phi * density`` over the grid."""
        return float(np.sum(np.asarray(phi) * self.values) * self.grid.cell_volume)

    def __repr__(self):
        return f"Density({self.grid!r})"


def _normalized(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    total = values.sum() * grid.cell_volume
    if not total > 0:
        raise ConfigError("density has zero total mass")
    return values / total


def uniform_density(grid: GridSpec) -> Density:
    check_budget(grid.size, what="uniform density")
    return Density(grid, np.full(grid.shape, 1.0 / grid.period**grid.n_axes), check=False)


def gaussian_density(grid_1p: GridSpec, mean, sigma2: float) -> Density:
    """Wrapped isotropic Gaussian on a single-particle grid.

    The nearest periodic images are summed and the result is renormalized to
    unit discrete mass. ``sigma2`` may not exceed ``(L/8)**2``; beyond that
    the truncation of the image sum would no longer be negligible.
    """
    if grid_1p.n_particles != 1:
        raise ConfigError("gaussian_density needs a single-particle grid")
    mean = np.broadcast_to(np.asarray(mean, dtype=float), (grid_1p.d,))
    if not sigma2 > 0:
        raise ConfigError(f"sigma2 must be positive, got {sigma2}")
    if sigma2 > (grid_1p.period / 8) ** 2:
        raise ConfigError(
            f"sigma2={sigma2} is too large for period {grid_1p.period}; need sigma2 <= (L/8)^2"
        )
    L = grid_1p.period
    x = grid_1p.nodes
    values = np.ones(())
    for c in mean:
        offset = (x - c + L / 2) % L - L / 2
        profile = sum(np.exp(-((offset + k * L) ** 2) / (2 * sigma2)) for k in (-1, 0, 1))
        values = np.multiply.outer(values, profile)
    return Density(grid_1p, _normalized(values, grid_1p), check=False)


def product_density(rho: Density, n: int) -> Density:
    """The tensor power ``rho(x_1) * ... * rho(x_n)``."""
    if rho.n_particles != 1:
        raise ConfigError("product_density needs a single-particle density")
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    grid = rho.grid.with_particles(n)
    check_budget(grid.size, what=f"{n}-particle product density")
    values = rho.values
    for _ in range(n - 1):
        values = np.multiply.outer(values, rho.values)
    return Density(grid, _normalized(values, grid), check=False)


@dataclass(frozen=True)
class MixingMeasure:
    """Finitely supported de Finetti measure ``sum_i w_i delta_{rho_i}``."""

    weights: tuple[float, ...]
    atoms: tuple[Density, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        atoms = tuple(self.atoms)
        if not atoms:
            raise ConfigError("mixing measure has no atoms")
        if len(weights) != len(atoms):
            raise ConfigError("weights and atoms differ in length")
        if any(not w > 0 for w in weights):
            raise ConfigError("mixing weights must be positive")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise ConfigError(f"mixing weights sum to {math.fsum(weights)!r}, expected 1")
        grid = atoms[0].grid
        if grid.n_particles != 1 or any(a.grid != grid for a in atoms):
            raise ConfigError("atoms must be single-particle densities on one shared grid")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_pairs(cls, pairs) -> "MixingMeasure":
        pairs = list(pairs)
        return cls(tuple(w for w, _ in pairs), tuple(r for _, r in pairs))

    @property
    def grid(self) -> GridSpec:
        return self.atoms[0].grid

    def __iter__(self):
        return iter(zip(self.weights, self.atoms))

    def __len__(self):
        return len(self.atoms)


def mixture_product_density(P: MixingMeasure, n: int) -> Density:
    """``sum_i w_i rho_i^{(x)n}`` for a finitely supported mixing measure."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    grid = P.grid.with_particles(n)
    check_budget(2 * grid.size, what=f"{n}-particle mixture density")
    values = np.zeros(grid.shape)
    for w, rho in P:
        values += w * product_density(rho, n).values
    return Density(grid, _normalized(values, grid), check=False)


def marginal(mu: Density, n: int) -> Density:
    """Integrate out the last ``N - n`` particles."""
    N = mu.n_particles
    if not 1 <= n < N:
        raise ConfigError(f"marginal order must satisfy 1 <= n < {N}, got {n}")
    grid = mu.grid.with_particles(n)
    trailing = tuple(range(grid.n_axes, mu.grid.n_axes))
    weight = mu.grid.h ** len(trailing)
    values = mu.values.sum(axis=trailing) * weight
    return Density(grid, values / (values.sum() * grid.cell_volume), check=False)


def symmetrize(values, grid: GridSpec) -> Density:
    """Average over all permutations of particle blocks, then renormalize."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape:
        raise ConfigError(f"values have shape {values.shape}, grid expects {grid.shape}")
    if values.min() < 0:
        raise ConfigError("cannot symmetrize negative values")
    N = grid.n_particles
    if N > MAX_SYMMETRIZE_PARTICLES:
        raise ConfigError(f"symmetrize supports at most {MAX_SYMMETRIZE_PARTICLES} particles")
    if symmetry_defect(values, grid) == 0.0:
        out = values
    else:
        out = np.zeros_like(values)
        for perm in itertools.permutations(range(N)):
            out += _permute_blocks(values, grid, perm)
        out /= math.factorial(N)
    return Density(grid, _normalized(out, grid))


def _band_limited_noise(grid: GridSpec, rng: np.random.Generator, smoothness: float) -> np.ndarray:
    q = np.fft.fftfreq(grid.m, 1.0 / grid.m)
    qq = np.zeros(grid.shape)
    for ax in range(grid.n_axes):
        shape = [1] * grid.n_axes
        shape[ax] = grid.m
        qq = qq + (q**2).reshape(shape)
    amplitude = np.exp(-smoothness * np.sqrt(qq))
    amplitude.flat[0] = 0.0
    coeffs = amplitude * (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    field_ = np.fft.ifftn(coeffs).real
    std = field_.std()
    return field_ / std if std > 0 else field_


def random_density(
    grid: GridSpec, seed: int, smoothness: float = 1.0, amplitude: float = 1.0
) -> Density:
    """Smooth, strictly positive random symmetric density.

    A Gaussian random field whose Fourier amplitudes decay like
    ``exp(-smoothness * |q|)`` is scaled to standard deviation ``amplitude``,
    exponentiated, symmetrized and clamped below at
    ``POSITIVITY_FLOOR * max`` before normalization. Output depends only on
    the arguments.
    """
    if not smoothness > 0:
        raise ConfigError(f"smoothness must be positive, got {smoothness}")
    check_budget(4 * grid.size, what="random density")
    rng = np.random.default_rng(seed)
    values = np.exp(amplitude * _band_limited_noise(grid, rng, smoothness))
    mu = symmetrize(values, grid)
    values = np.maximum(mu.values, POSITIVITY_FLOOR * mu.values.max())
    return Density(grid, _normalized(values, grid))


# -- file format ------------------------------------------------------------

HEADER_SUFFIX = ".fkh"
PAYLOAD_SUFFIX = ".fkd"


def _paths(path) -> tuple[Path, Path]:
    path = Path(path)
    if path.suffix in (HEADER_SUFFIX, PAYLOAD_SUFFIX):
        path = path.with_suffix("")
    return path.with_name(path.name + HEADER_SUFFIX), path.with_name(path.name + PAYLOAD_SUFFIX)


def save_density(mu: Density, path) -> tuple[Path, Path]:
    """Write ``<path>.fkh`` (JSON header) and ``<path>.fkd`` (little-endian f64 payload)."""
    header_path, payload_path = _paths(path)
    header = dict(mu.grid.to_dict(), dtype="f64", order="row-major")
    header_path.write_text(json.dumps(header, indent=2) + "\n")
    payload_path.write_bytes(np.ascontiguousarray(mu.values, dtype="<f8").tobytes())
    return header_path, payload_path


def load_density(path) -> Density:
    header_path, payload_path = _paths(path)
    try:
        header = json.loads(header_path.read_text())
        payload = payload_path.read_bytes()
    except FileNotFoundError as exc:
        raise FormatError(f"missing density file: {exc.filename}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{header_path}: header is not valid JSON ({exc})") from exc
    if not isinstance(header, dict):
        raise FormatError(f"{header_path}: header must be a JSON object")
    missing = {"d", "n_particles", "m", "period", "dtype", "order"} - header.keys()
    if missing:
        raise FormatError(f"{header_path}: header lacks {sorted(missing)}")
    if header["dtype"] != "f64" or header["order"] != "row-major":
        raise FormatError(f"{header_path}: unsupported dtype/order {header['dtype']}/{header['order']}")
    try:
        grid = GridSpec(int(header["d"]), int(header["n_particles"]), int(header["m"]), float(header["period"]))
    except (ConfigError, TypeError, ValueError) as exc:
        raise FormatError(f"{header_path}: invalid grid ({exc})") from exc
    if len(payload) != 8 * grid.size:
        raise FormatError(f"{payload_path}: expected {8 * grid.size} bytes, found {len(payload)}")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(grid.shape)
    try:
        return Density(grid, values)
    except ConfigError as exc:
        raise FormatError(f"{payload_path}: payload is not a valid density ({exc})") from exc
