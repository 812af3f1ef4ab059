"""Seeded samplers: ball points, Haar unitaries, and fixed-spectrum states.

Randomness comes from counter-based Philox streams keyed by (seed,
stream_index), so every record of a batch owns an independent stream and the
output is reproducible bit for bit regardless of execution order or thread
count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coset import BallPoint, DegeneracyPattern, FlagChart, coset_layers_for, flag_unitary
from .errors import ShapeError, SingularMatrixError, UnsupportedPatternError
from .linalg import qr_decompose
from .measures import DEGENERACY_TOL, DensityMatrix, Spectrum

_SQRT_HALF = 1.0 / math.sqrt(2.0)

#: Default squared-radius margin kept between sampled points and the ball edge
#: when the points feed finite-difference Jacobian checks.
INTERIOR_MARGIN = 1e-2


class RngStream:
    """Counter-based random stream keyed by (seed, stream_index).

    The same key always reproduces the same draw sequence. Distinct stream
    indices under one seed give statistically independent streams, which is
    how batches assign one stream per record.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        self.seed = int(seed) % 2**64
        self.stream_index = int(stream_index) % 2**64
        key = np.array([self.seed, self.stream_index], dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    def standard_normal(self, size=None):
        return self._generator.standard_normal(size)

    def uniform(self) -> float:
        return float(self._generator.random())

    def complex_normal(self, shape) -> np.ndarray:
        """Standard complex Gaussian draws: (X + iY)/sqrt(2), real block first."""
        re = self._generator.standard_normal(shape)
        im = self._generator.standard_normal(shape)
        return (re + 1j * im) * _SQRT_HALF


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """One sampled state plus its scalar observables.

    ``observables`` maps labels like "rho_33" to the matching real diagonal
    entries of the state; consistency is checked at construction.
    """

    method: str
    index: int
    rho: DensityMatrix
    observables: dict

    def __post_init__(self):
        if self.method not in ("haar", "coset"):
            raise ValueError(f"unknown sampling method {self.method!r}")
        for j in range(1, self.rho.n_levels + 1):
            label = f"rho_{j}{j}"
            if label not in self.observables:
                raise ValueError(f"missing observable {label}")
            if abs(self.observables[label] - self.rho.matrix[j - 1, j - 1].real) > 1e-12:
                raise ValueError(f"observable {label} inconsistent with the state")


def _observables(rho: DensityMatrix) -> dict:
    return {
        f"rho_{j}{j}": float(rho.matrix[j - 1, j - 1].real)
        for j in range(1, rho.n_levels + 1)
    }


def sample_ball(dim: int, rng: RngStream) -> BallPoint:
    """Uniform point of the closed ball B^dim (dim even).

    Gaussian direction, then radius u^(1/dim); the direction is drawn first,
    which fixes the stream layout that reproducibility tests rely on.
    """
    if dim < 2 or dim % 2:
        raise ShapeError("ball dimension must be even and at least 2")
    direction = rng.standard_normal(dim)
    norm = float(np.linalg.norm(direction))
    while norm < 1e-300:
        direction = rng.standard_normal(dim)
        norm = float(np.linalg.norm(direction))
    radius = rng.uniform() ** (1.0 / dim)
    return BallPoint(direction * (radius / norm))


def sample_interior_point(dim: int, rng: RngStream, margin: float = INTERIOR_MARGIN) -> BallPoint:
    """Uniform ball point conditioned on radius_sq <= 1 - margin.

    Finite-difference Jacobian checks need clearance from the edge; rejection
    keeps the conditional law exactly uniform on the retained region.
    """
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie strictly between 0 and 1")
    while True:
        point = sample_ball(dim, rng)
        if point.radius_sq <= 1.0 - margin:
            return point


def sample_haar_unitary(n_levels: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The QR phases are fixed by rescaling each column with the phase of the
    matching diagonal entry of R, which makes the factorization unique and
    the resulting distribution exactly invariant.
    """
    if n_levels < 1:
        raise ShapeError("need at least one level")
    last_error = None
    for _ in range(2):
        z = rng.complex_normal((n_levels, n_levels))
        try:
            q, r = qr_decompose(z)
        except SingularMatrixError as exc:
            last_error = exc
            continue
        d = np.diagonal(r)
        return q * (d / np.abs(d))
    raise SingularMatrixError("repeated singular Ginibre draws") from last_error


def _state_from_unitary(spectrum: Spectrum, unitary: np.ndarray) -> DensityMatrix:
    """State whose ascending-ordered diagonal model is conjugated by ``unitary``."""
    return DensityMatrix.from_eigensystem(spectrum, unitary[:, ::-1])


def pattern_for_spectrum(spectrum: Spectrum) -> DegeneracyPattern:
    """Infer the degeneracy pattern: m-fold zero block when m >= 2, generic otherwise."""
    zeros = spectrum.num_zero()
    return DegeneracyPattern(spectrum.n_levels, zeros if zeros >= 2 else 0)


def _check_pattern(spectrum: Spectrum, pattern: DegeneracyPattern) -> None:
    if pattern.n_levels != spectrum.n_levels:
        raise UnsupportedPatternError(
            f"pattern is for {pattern.n_levels} levels, spectrum has {spectrum.n_levels}"
        )
    zeros = spectrum.num_zero()
    if pattern.zero_block >= 2 and zeros != pattern.zero_block:
        raise UnsupportedPatternError(
            f"pattern expects a {pattern.zero_block}-fold zero eigenvalue, spectrum has {zeros}"
        )
    if pattern.zero_block < 2 and zeros >= 2:
        raise UnsupportedPatternError(
            f"spectrum has a {zeros}-fold zero eigenvalue; use the matching pattern"
        )
    nonzero = spectrum.values[spectrum.values > DEGENERACY_TOL]
    if nonzero.size >= 2 and np.min(np.abs(np.diff(nonzero))) < DEGENERACY_TOL:
        raise UnsupportedPatternError(
            "repeated nonzero eigenvalues have no coset chart here"
        )


def sample_flag_chart(pattern: DegeneracyPattern, rng: RngStream) -> FlagChart:
    """Independent uniform ball points for each layer of the pattern's ladder."""
    layers = tuple(sample_ball(dim, rng) for dim in coset_layers_for(pattern))
    return FlagChart(pattern.n_levels, layers)


def state_from_chart(spectrum: Spectrum, chart: FlagChart) -> DensityMatrix:
    """Deterministic state for explicit chart coordinates (diagnostics and tests)."""
    if chart.n_levels != spectrum.n_levels:
        raise ShapeError(
            f"chart is for {chart.n_levels} levels, spectrum has {spectrum.n_levels}"
        )
    return _state_from_unitary(spectrum, flag_unitary(chart))


def sample_state_haar(spectrum: Spectrum, rng: RngStream) -> SampleRecord:
    """Fixed-spectrum state conjugated by a Haar unitary."""
    rho = _state_from_unitary(spectrum, sample_haar_unitary(spectrum.n_levels, rng))
    return SampleRecord("haar", rng.stream_index, rho, _observables(rho))


def sample_state_coset(
    spectrum: Spectrum, pattern: DegeneracyPattern, rng: RngStream
) -> SampleRecord:
    """Fixed-spectrum state conjugated by a layered coset unitary.

    Layer points are uniform on their balls, which by the unit-Jacobian
    property of the coset coordinates reproduces the unitary part of the
    Bures measure for the given spectrum.
    """
    _check_pattern(spectrum, pattern)
    rho = state_from_chart(spectrum, sample_flag_chart(pattern, rng))
    return SampleRecord("coset", rng.stream_index, rho, _observables(rho))


def batch_sample(
    method: str,
    spectrum: Spectrum,
    pattern,
    count: int,
    seed: int,
    *,
    max_workers=None,
    zero_layers: bool = False,
):
    """List of ``count`` records, record i drawn from stream (seed, i).

    ``pattern`` may be None, in which case it is inferred from the spectrum.
    ``max_workers`` > 1 fans the records out over a thread pool; the output is
    identical to the sequential run because the streams are keyed, not shared.
    ``zero_layers`` pins every coset layer at the ball center (smoke-test
    hook: the sampled states all equal the diagonal model exactly).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if method not in ("haar", "coset"):
        raise ValueError(f"unknown sampling method {method!r}")
    if zero_layers and method != "coset":
        raise ValueError("zero_layers only applies to the coset method")
    if pattern is None:
        pattern = pattern_for_spectrum(spectrum)
    if method == "coset":
        _check_pattern(spectrum, pattern)
    dims = coset_layers_for(pattern)

    def make(index: int) -> SampleRecord:
        rng = RngStream(seed, index)
        if method == "haar":
            return sample_state_haar(spectrum, rng)
        if zero_layers:
            chart = FlagChart(spectrum.n_levels, tuple(BallPoint.zero(d) for d in dims))
            rho = state_from_chart(spectrum, chart)
            return SampleRecord("coset", index, rho, _observables(rho))
        return sample_state_coset(spectrum, pattern, rng)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(make, range(count)))
    return [make(i) for i in range(count)]
