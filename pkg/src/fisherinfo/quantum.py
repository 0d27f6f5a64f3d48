"""Reduced density matrices of ``Psi_N = sqrt(mu_N)`` and their spectral data.

Matrices are stored densely in the node basis of the ``n``-particle grid.
The stored kernel ``G(X, Y)`` carries continuum units; the operator acting
on grid functions is ``(G f)(X) = sum_Y G(X, Y) f(Y) h^(dn)``, so traces and
inner products pick up a cell-volume factor ``h^(dn)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .budget import check_budget
from .density import Density, GridSpec, marginal
from .errors import BudgetError, ConfigError
from .spectral import (
    SYMBOLS,
    KineticSpec,
    WaveFunction,
    fractional_multiplier,
    kinetic_form,
    sqrt_density,
)

#: largest one-sided matrix dimension ``m^(dn)`` accepted by default
MAX_MATRIX_DIM = 4096
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """``n``-particle density matrix on the grid of ``grid`` (single-particle part)."""

    grid: GridSpec
    n_particles: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = self.grid.m ** (self.grid.d * self.n_particles)
        if self.matrix.shape != (dim, dim):
            raise ConfigError(f"matrix has shape {self.matrix.shape}, expected {(dim, dim)}")

    @property
    def full_grid(self) -> GridSpec:
        return self.grid.with_particles(self.n_particles)

    @property
    def weight(self) -> float:
        return self.full_grid.cell_volume

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)) * self.weight)

    def diagonal(self) -> np.ndarray:
        """``G(X, X)`` reshaped onto the ``n``-particle grid."""
        return np.real(np.diag(self.matrix)).reshape(self.full_grid.shape)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """``Gamma = sum_j lambda_j |u_j><u_j|`` with grid-orthonormal ``u_j``.

    ``eigenvectors[:, j]`` holds ``u_j`` flattened over the ``n``-particle grid.
    """

    grid: GridSpec
    n_particles: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def full_grid(self) -> GridSpec:
        return self.grid.with_particles(self.n_particles)

    def vector(self, j: int) -> WaveFunction:
        return WaveFunction(self.full_grid, self.eigenvectors[:, j].reshape(self.full_grid.shape))

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _check_dim(grid: GridSpec, n: int, max_dim: int) -> int:
    dim = grid.m ** (grid.d * n)
    if dim > max_dim:
        raise BudgetError(f"{n}-particle density matrix has dimension {dim} > {max_dim}")
    check_budget(dim * dim, itemsize=16, what=f"{n}-particle density matrix")
    return dim


def reduced_density_matrix(
    psi: WaveFunction, n: int, max_dim: int = MAX_MATRIX_DIM
) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` over the last ``N - n`` particles."""
    grid = psi.grid
    N = grid.n_particles
    if not 1 <= n < N:
        raise ConfigError(f"reduced density matrix order must satisfy 1 <= n < {N}, got {n}")
    dim = _check_dim(grid, n, max_dim)
    A = psi.values.reshape(dim, -1)
    traced = grid.h ** (grid.d * (N - n))
    G = (A @ A.conj().T) * traced
    return DensityMatrix(grid.single(), n, G)


def full_density_matrix(psi: WaveFunction, max_dim: int = MAX_MATRIX_DIM) -> DensityMatrix:
    """``|psi><psi|`` itself, i.e. the ``n = N`` case."""
    grid = psi.grid
    dim = _check_dim(grid, grid.n_particles, max_dim)
    v = psi.values.reshape(dim)
    return DensityMatrix(grid.single(), grid.n_particles, np.outer(v, v.conj()))


def partial_trace(gamma: DensityMatrix, n: int) -> DensityMatrix:
    """Trace out the last ``gamma.n_particles - n`` particles of a density matrix."""
    k = gamma.n_particles
    if not 1 <= n < k:
        raise ConfigError(f"partial trace order must satisfy 1 <= n < {k}, got {n}")
    grid = gamma.grid
    a = grid.m ** (grid.d * n)
    b = grid.m ** (grid.d * (k - n))
    G = gamma.matrix.reshape(a, b, a, b)
    return DensityMatrix(grid, n, np.einsum("ibjb->ij", G) * grid.h ** (grid.d * (k - n)))


def eigendecompose(gamma: DensityMatrix) -> SpectralDecomposition:
    """Eigen-decomposition in the cell-volume weighted inner product.

    Eigenvalues come out nonincreasing; roundoff negatives down to
    ``-PSD_TOL`` are clipped to zero. Within a degenerate cluster any
    orthonormal basis is returned.
    """
    scale = max(1.0, float(np.max(np.abs(gamma.matrix))))
    if gamma.hermitian_defect() > HERMITIAN_TOL * scale:
        raise ConfigError(f"density matrix is not Hermitian (defect {gamma.hermitian_defect():.3e})")
    w = gamma.weight
    A = 0.5 * (gamma.matrix + gamma.matrix.conj().T) * w
    lam, V = np.linalg.eigh(A)
    lam, V = lam[::-1], V[:, ::-1]
    if lam[-1] < -PSD_TOL:
        raise ConfigError(f"density matrix is not positive (eigenvalue {lam[-1]:.3e})")
    lam = np.clip(lam, 0.0, None)
    return SpectralDecomposition(gamma.grid, gamma.n_particles, lam, V / math.sqrt(w))


def hoffmann_ostenhof_density(decomp: SpectralDecomposition) -> Density:
    """``rho_n = sum_j lambda_j |u_j|^2`` as a density on the ``n``-particle grid."""
    grid = decomp.full_grid
    values = (np.abs(decomp.eigenvectors) ** 2) @ decomp.eigenvalues
    values = values.reshape(grid.shape)
    return Density(grid, values / (values.sum() * grid.cell_volume))


def _energies(vectors: np.ndarray, grid: GridSpec, s: float, symbol: str) -> np.ndarray:
    """Kinetic energy of every column of ``vectors`` (unnormalized grid functions)."""
    stacked = vectors.reshape(grid.shape + (vectors.shape[1],))
    mult = fractional_multiplier(grid, s, symbol)
    out = np.zeros(vectors.shape[1])
    weight = grid.cell_volume / grid.m**grid.d
    for j in range(grid.n_particles):
        axes = grid.block_axes(j)
        F = scipy.fft.fftn(stacked, axes=axes)
        shape = [1] * (grid.n_axes + 1)
        for ax in axes:
            shape[ax] = grid.m
        power = mult.reshape(shape) * (F.real**2 + F.imag**2)
        out += power.reshape(-1, vectors.shape[1]).sum(axis=0) * weight
    return out


def _check_symbol(spec: KineticSpec) -> None:
    if spec.method not in SYMBOLS:
        raise ConfigError(f"kinetic traces support the methods {SYMBOLS} only")


def kinetic_trace(gamma, spec: KineticSpec) -> float:
    """``tr(H_n Gamma)`` as ``sum_j lambda_j <u_j, H_n u_j>``.

    Accepts a :class:`DensityMatrix` or an existing :class:`SpectralDecomposition`.
    """
    _check_symbol(spec)
    decomp = gamma if isinstance(gamma, SpectralDecomposition) else eigendecompose(gamma)
    energies = _energies(decomp.eigenvectors, decomp.full_grid, spec.s, spec.method)
    return float(math.fsum(decomp.eigenvalues * energies))


def modulus_kinetic_trace(decomp: SpectralDecomposition, spec: KineticSpec) -> float:
    """``sum_j lambda_j <|u_j|, H_n |u_j|>``, the middle term of the superadditivity chain."""
    _check_symbol(spec)
    energies = _energies(np.abs(decomp.eigenvectors), decomp.full_grid, spec.s, spec.method)
    return float(math.fsum(decomp.eigenvalues * energies))


def split_identity_check(mu: Density, n: int, spec: KineticSpec) -> tuple[float, float]:
    """``(I_s[mu], tr(H_n G^(n)) + tr(H_(N-n) G^(N-n)))``; equal up to roundoff."""
    N = mu.n_particles
    if not 1 <= n < N:
        raise ConfigError(f"split order must satisfy 1 <= n < {N}, got {n}")
    psi = sqrt_density(mu)
    lhs = kinetic_form(psi, spec)
    rhs = kinetic_trace(reduced_density_matrix(psi, n), spec)
    rhs += kinetic_trace(reduced_density_matrix(psi, N - n), spec)
    return lhs, rhs


@dataclass(frozen=True)
class ChainTerms:
    """Terms of ``tr(H G) >= sum lambda <|u|,H|u|> >= I_s[rho_n]`` for one marginal order."""

    n: int
    trace: float
    modulus: float
    marginal_info: float
    ho_error: float

    @property
    def diamagnetic_gap(self) -> float:
        return self.trace - self.modulus

    @property
    def convexity_gap(self) -> float:
        return self.modulus - self.marginal_info


def hoffmann_ostenhof_chain(mu: Density, n: int, spec: KineticSpec) -> ChainTerms:
    """Evaluate each link of the chain for the ``n``-particle reduced matrix of ``sqrt(mu)``.

    ``ho_error`` is the largest pointwise gap between ``sum lambda_j |u_j|^2``
    and the marginal ``mu^(n)``.
    """
    psi = sqrt_density(mu)
    decomp = eigendecompose(reduced_density_matrix(psi, n))
    rho_n = hoffmann_ostenhof_density(decomp)
    mu_n = marginal(mu, n)
    ho_error = float(np.max(np.abs(rho_n.values - mu_n.values)))
    return ChainTerms(
        n=n,
        trace=kinetic_trace(decomp, spec),
        modulus=modulus_kinetic_trace(decomp, spec),
        marginal_info=kinetic_form(sqrt_density(rho_n), spec),
        ho_error=ho_error,
    )


def monomial_trace(gamma: DensityMatrix, phi) -> float:
    """``tr(phi Gamma)`` for multiplication by a bounded real grid function ``phi``."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != gamma.full_grid.shape:
        raise ConfigError(f"phi has shape {phi.shape}, expected {gamma.full_grid.shape}")
    return float(np.sum(phi * gamma.diagonal()) * gamma.weight)

