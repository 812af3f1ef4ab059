"""Closed-form volumes, spectral densities, and metric quantities for mixed states.

The distance notion throughout is the Bures one: its squared line element on
density matrices is

    dB^2 = (1/2) sum_jk |<j|drho|k>|^2 / (lambda_j + lambda_k)

in the eigenbasis of rho. The eigenvalue part of the corresponding volume
element carries the factor prod_{j<k} (lambda_j - lambda_k)^2 / (lambda_j +
lambda_k) over 2^(N-2) sqrt(lambda_1 ... lambda_N); the angular part is the
flag-manifold volume computed here in two common normalizations.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    InvalidStateError,
    NotHermitianError,
    RankDeficiencyError,
    ShapeError,
)
from .linalg import adjoint, as_complex_matrix, hermitian_eig, matmul

#: Absolute tolerance on the eigenvalue sum of a spectrum.
SPECTRUM_SUM_TOL = 1e-12

#: Eigenvalues this far below zero are rejected; anything in between is clamped.
NEGATIVE_EIGENVALUE_TOL = -1e-12

#: Absolute Hermiticity and reconstruction tolerances for stored states.
STATE_HERM_TOL = 1e-12
STATE_RECON_TOL = 1e-10

#: Eigenvalue pairs closer than this count as degenerate.
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a density matrix, stored in descending order.

    The constructor accepts the values in any order, checks that they are
    nonnegative (to NEGATIVE_EIGENVALUE_TOL) and sum to one, clamps any tiny
    negative rounding residue to zero, and sorts.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 1:
            raise ShapeError("a spectrum needs at least one eigenvalue")
        if not np.all(np.isfinite(values)):
            raise ShapeError("eigenvalues must be finite")
        if np.any(values < NEGATIVE_EIGENVALUE_TOL):
            raise InvalidStateError(f"negative eigenvalue {values.min():.6g}")
        if abs(values.sum() - 1.0) > SPECTRUM_SUM_TOL:
            raise InvalidStateError(f"eigenvalues sum to {values.sum():.17g}, not 1")
        values = np.sort(np.clip(values, 0.0, None))[::-1].copy()
        object.__setattr__(self, "values", values)

    @property
    def n_levels(self) -> int:
        return self.values.size

    def ascending_diagonal(self) -> np.ndarray:
        """The eigenvalues in ascending order, as placed on the model diagonal."""
        return self.values[::-1].copy()

    def num_zero(self, tol: float = DEGENERACY_TOL) -> int:
        return int(np.count_nonzero(self.values <= tol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, trace-one matrix with eigensystem attached.

    ``basis`` columns are unit eigenvectors ordered to match the descending
    ``spectrum``, so matrix = basis @ diag(spectrum.values) @ basis† up to
    STATE_RECON_TOL.
    """

    matrix: np.ndarray
    spectrum: Spectrum
    basis: np.ndarray

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix)
        basis = as_complex_matrix(self.basis)
        n = self.spectrum.n_levels
        if matrix.shape != (n, n) or basis.shape != (n, n):
            raise ShapeError(
                f"matrix {matrix.shape} and basis {basis.shape} must both be {(n, n)}"
            )
        if np.linalg.norm(matrix - matrix.conj().T) > STATE_HERM_TOL:
            raise NotHermitianError("density matrix is not Hermitian to tolerance")
        tr = complex(np.trace(matrix))
        if abs(tr - 1.0) > STATE_HERM_TOL:
            raise InvalidStateError(f"trace is {tr.real:.17g}{tr.imag:+.3g}j, not 1")
        if np.linalg.norm(basis.conj().T @ basis - np.eye(n)) > STATE_RECON_TOL:
            raise InvalidStateError("eigenbasis is not unitary to tolerance")
        recon = (basis * self.spectrum.values) @ basis.conj().T
        if np.linalg.norm(recon - matrix) > STATE_RECON_TOL:
            raise InvalidStateError("matrix does not match its eigensystem")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        """Validate a raw matrix and eigendecompose it."""
        m = as_complex_matrix(m)
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got {m.shape}")
        eig = hermitian_eig(m)
        spectrum = Spectrum(eig.eigenvalues[::-1])
        return cls(m, spectrum, eig.eigenvectors[:, ::-1])

    @classmethod
    def from_eigensystem(cls, spectrum: Spectrum, basis) -> "DensityMatrix":
        """Assemble basis @ diag(spectrum.values) @ basis† from a unitary basis.

        Column j of ``basis`` is taken as the eigenvector of the j-th largest
        eigenvalue.
        """
        basis = as_complex_matrix(basis)
        raw = (basis * spectrum.values) @ basis.conj().T
        return cls((raw + raw.conj().T) / 2, spectrum, basis)

    @property
    def n_levels(self) -> int:
        return self.spectrum.n_levels


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n: 2 pi^(n/2) / (n Gamma(n/2))."""
    if n < 1:
        raise ValueError("ball dimension must be a positive integer")
    return 2.0 * math.pi ** (n / 2.0) / (n * math.gamma(n / 2.0))


def flag_volume(n_levels: int) -> float:
    """Volume of the full flag manifold of C^N: pi^(N(N-1)/2) / prod_{j<=N} Gamma(j).

    Equals the product of the even ball volumes Vol(B^2) ... Vol(B^(2(N-1))),
    which is how the layered coset construction reproduces it.
    """
    if n_levels < 2:
        raise ValueError("flag volumes need at least 2 levels")
    denom = math.prod(math.gamma(j) for j in range(1, n_levels + 1))
    return math.pi ** (n_levels * (n_levels - 1) / 2.0) / denom


def flag_volume_sz(n_levels: int) -> float:
    """Flag-manifold volume in the 2 pi per pair normalization used in tabulations.

    Exceeds ``flag_volume`` by 2^(N(N-1)/2).
    """
    if n_levels < 2:
        raise ValueError("flag volumes need at least 2 levels")
    denom = math.prod(math.gamma(j) for j in range(1, n_levels + 1))
    return (2.0 * math.pi) ** (n_levels * (n_levels - 1) / 2.0) / denom


def lambda_factor(lam_j: float, lam_k: float) -> float:
    """Eigenvalue-pair weight (lam_j - lam_k)^2 / (lam_j + lam_k)."""
    if lam_j < 0 or lam_k < 0:
        raise ValueError("eigenvalues must be nonnegative")
    if lam_j + lam_k <= 0:
        raise DegenerateSpectrumError("both eigenvalues vanish; pair weight undefined")
    return (lam_j - lam_k) ** 2 / (lam_j + lam_k)


def eigenvalue_density(spectrum: Spectrum) -> float:
    """Unnormalized eigenvalue density of the Bures volume element.

    prod_{j<k} lambda_factor over 2^(N-2) sqrt(prod lambda). Defined for full
    rank, nondegenerate spectra only.
    """
    vals = spectrum.values
    n = vals.size
    if n < 2:
        raise ValueError("eigenvalue density needs at least 2 levels")
    if np.any(vals <= 0.0):
        raise DegenerateSpectrumError("zero eigenvalue makes the density singular")
    if np.min(np.abs(np.diff(vals))) < DEGENERACY_TOL:
        raise DegenerateSpectrumError("degenerate eigenvalues make the density vanish")
    prod = 1.0
    for j in range(n):
        for k in range(j + 1, n):
            prod *= lambda_factor(vals[j], vals[k])
    return prod / (2.0 ** (n - 2) * math.sqrt(math.prod(vals.tolist())))


def bures_quadratic(rho: DensityMatrix, drho) -> float:
    """Squared Bures line element (1/2) sum |<j|drho|k>|^2 / (lambda_j + lambda_k).

    ``drho`` is a Hermitian perturbation expressed in the same basis as
    ``rho.matrix``; it is rotated into the eigenbasis internally. Terms with
    lambda_j + lambda_k below 1e-14 are dropped when their numerator vanishes
    (perturbation tangent to the rank surface) and rejected otherwise.
    """
    drho = as_complex_matrix(drho)
    n = rho.n_levels
    if drho.shape != (n, n):
        raise ShapeError(f"perturbation shape {drho.shape} does not match {(n, n)}")
    scale = max(1.0, float(np.linalg.norm(drho)))
    if np.linalg.norm(drho - drho.conj().T) > 1e-10 * scale:
        raise NotHermitianError("perturbation must be Hermitian")
    m = matmul(matmul(adjoint(rho.basis), drho), rho.basis)
    lam = rho.spectrum.values
    denom = lam[:, None] + lam[None, :]
    amp2 = np.abs(m) ** 2
    tiny = denom < 1e-14
    if np.any(amp2[tiny] >= 1e-24):
        raise RankDeficiencyError("perturbation pushes off the kernel; line element diverges")
    safe = np.where(tiny, 1.0, denom)
    return float(0.5 * np.sum(np.where(tiny, 0.0, amp2 / safe)))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    if rho.n_levels != sigma.n_levels:
        raise ShapeError(f"dimension mismatch: {rho.n_levels} vs {sigma.n_levels}")
    root = (rho.basis * np.sqrt(rho.spectrum.values)) @ rho.basis.conj().T
    inner = root @ sigma.matrix @ root
    eig = hermitian_eig((inner + inner.conj().T) / 2)
    vals = eig.eigenvalues
    if np.any(vals < NEGATIVE_EIGENVALUE_TOL):
        raise InvalidStateError(f"product operator has eigenvalue {vals.min():.6g} < 0")
    total = float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)
    return min(max(total, 0.0), 1.0)
