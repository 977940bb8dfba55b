"""Mode decomposition and state metrics.

The Schmidt decomposition is the SVD of the quadrature-weighted amplitude
matrix ``sqrt(dws*dwi) * A``; mode functions carry the inverse weight so
they are orthonormal under the rectangle rule. The effective mode count is
``K = 1 / sum(c_k^4)`` for coefficients with ``sum(c_k^2) = 1``.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractError,
    DegenerateStateError,
    InvalidArgumentError,
    NumericError,
    WavelengthRangeError,
)
from .nli import SimulationSetup
from .spectral import (
    C,
    TWO_PI,
    JointAmplitude,
    SpectralFunction,
    intensity,
    normalize,
)

__all__ = [
    "SchmidtDecomposition",
    "LossSweepRow",
    "schmidt_decompose",
    "schmidt_values",
    "schmidt_number",
    "reconstruct",
    "intensity_overlap",
    "project_signal",
    "loss_sweep",
    "DEFAULT_RANK_TOLERANCE",
]

DEFAULT_RANK_TOLERANCE = 1e-6
_NORMALIZATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Descending mode coefficients with paired signal/idler mode functions."""

    coefficients: np.ndarray
    signal_modes: tuple[SpectralFunction, ...]
    idler_modes: tuple[SpectralFunction, ...]

    @property
    def rank(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class LossSweepRow:
    """One loss setting of a sweep: mode count and overlap diagnostics."""

    x_db: float
    schmidt_number: float
    overlap_with_lossless: float
    overlap_with_unmodulated: float


def _require_normalized(a: JointAmplitude):
    n2 = a.norm_squared()
    if abs(n2 - 1.0) > _NORMALIZATION_TOLERANCE:
        raise ContractError(f"state must be normalized (got integral {n2!r})")


def schmidt_values(a: JointAmplitude) -> np.ndarray:
    """Schmidt coefficients only (no mode functions); descending."""
    _require_normalized(a)
    weighted = a.values * np.sqrt(a.cell_area)
    try:
        return np.linalg.svd(weighted, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc


def schmidt_decompose(a: JointAmplitude, rank_cutoff: int | float = DEFAULT_RANK_TOLERANCE) -> SchmidtDecomposition:
    """Decompose a normalized joint amplitude into paired spectral modes.

    Args:
        a: normalized amplitude (rectangle-rule integral of 1).
        rank_cutoff: an ``int`` keeps at most that many modes; a ``float``
            keeps modes until the cumulative squared coefficients reach
            ``1 - rank_cutoff``.

    Each mode's arbitrary phase is fixed by making the largest-magnitude
    sample of the signal function real-positive, so decompositions are
    reproducible run to run.
    """
    if isinstance(rank_cutoff, bool) or not isinstance(rank_cutoff, (int, float)):
        raise InvalidArgumentError("rank_cutoff must be an int or a float")
    if isinstance(rank_cutoff, int) and rank_cutoff < 1:
        raise InvalidArgumentError("integer rank_cutoff must be >= 1")
    if isinstance(rank_cutoff, float) and not 0.0 < rank_cutoff < 1.0:
        raise InvalidArgumentError("float rank_cutoff must lie in (0, 1)")

    _require_normalized(a)
    weighted = a.values * np.sqrt(a.cell_area)
    try:
        u, s, vh = np.linalg.svd(weighted, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc

    if isinstance(rank_cutoff, int):
        keep = min(rank_cutoff, s.size)
    else:
        cum = np.cumsum(s**2)
        keep = min(int(np.searchsorted(cum, 1.0 - rank_cutoff) + 1), s.size)

    inv_ws = 1.0 / np.sqrt(a.grid_s.spacing)
    inv_wi = 1.0 / np.sqrt(a.grid_i.spacing)
    signal_modes = []
    idler_modes = []
    for k in range(keep):
        psi = u[:, k] * inv_ws
        phi = vh[k, :] * inv_wi
        pivot = psi[np.argmax(np.abs(psi))]
        rot = np.conj(pivot) / np.abs(pivot) if pivot != 0 else 1.0
        signal_modes.append(SpectralFunction(a.grid_s, psi * rot))
        idler_modes.append(SpectralFunction(a.grid_i, phi * np.conj(rot)))
    return SchmidtDecomposition(
        coefficients=s[:keep].copy(),
        signal_modes=tuple(signal_modes),
        idler_modes=tuple(idler_modes),
    )


def schmidt_number(d: SchmidtDecomposition | np.ndarray) -> float:
    """Effective mode count ``1 / sum(c_k^4)``.

    Equals 1 exactly when a single coefficient carries all the weight.
    """
    c = d.coefficients if isinstance(d, SchmidtDecomposition) else np.asarray(d, dtype=float)
    total = float(np.sum(c**2))
    if abs(total - 1.0) > 1e-6:
        raise ContractError(f"coefficients must satisfy sum(c^2) = 1 (got {total!r})")
    return float(1.0 / np.sum(c**4))


def reconstruct(d: SchmidtDecomposition) -> JointAmplitude:
    """Rebuild the amplitude ``sum_k c_k psi_k(w_s) phi_k(w_i)``."""
    if d.rank == 0:
        raise InvalidArgumentError("empty decomposition")
    grid_s = d.signal_modes[0].grid
    grid_i = d.idler_modes[0].grid
    values = np.zeros((grid_s.n_points, grid_i.n_points), dtype=np.complex128)
    for c, psi, phi in zip(d.coefficients, d.signal_modes, d.idler_modes):
        values += c * np.outer(psi.values, phi.values)
    return JointAmplitude(grid_s, grid_i, values)


def intensity_overlap(a: JointAmplitude, b: JointAmplitude) -> float:
    """Cosine-normalized similarity of two joint intensity distributions.

    ``<Ia, Ib> / sqrt(<Ia, Ia> <Ib, Ib>)`` over the shared grid, which puts
    self-overlap at exactly 1 and disjoint supports at 0.
    """
    if a.grid_s != b.grid_s or a.grid_i != b.grid_i:
        raise InvalidArgumentError("overlap requires matching grids")
    ia = intensity(a)
    ib = intensity(b)
    saa = float(np.sum(ia * ia))
    sbb = float(np.sum(ib * ib))
    if saa == 0.0 or sbb == 0.0:
        raise DegenerateStateError("overlap of an all-zero state is undefined")
    if a.values is b.values or np.array_equal(a.values, b.values):
        return 1.0
    return float(np.sum(ia * ib) / np.sqrt(saa * sbb))


def project_signal(a: JointAmplitude, lambda_s: float) -> SpectralFunction:
    """Idler spectrum heralded by detecting the signal at ``lambda_s`` (m).

    The measurement bin is one grid cell: the amplitude row at the grid
    frequency nearest ``2*pi*c/lambda_s``, normalized. The caller can
    report ``a.grid_s.spacing`` as the bin width.
    """
    if not lambda_s > 0:
        raise InvalidArgumentError("lambda_s must be positive")
    omega = TWO_PI * C / lambda_s
    if not a.grid_s.contains(omega):
        raise WavelengthRangeError(
            f"lambda_s = {lambda_s * 1e9:.3f} nm maps to {omega:.6e} rad/s, "
            f"outside the signal grid [{a.grid_s.omega_min:.6e}, {a.grid_s.omega_max:.6e}]"
        )
    row = a.values[a.grid_s.nearest_index(omega), :]
    return SpectralFunction(a.grid_i, row).normalized()


def _sweep_point(setup: SimulationSetup, x_db: float, lossless: JointAmplitude, unmod: JointAmplitude) -> LossSweepRow:
    state = lossless if x_db == 0.0 else setup.with_loss(x_db).assemble()
    k = schmidt_number(schmidt_values(state))
    return LossSweepRow(
        x_db=x_db,
        schmidt_number=k,
        overlap_with_lossless=intensity_overlap(state, lossless),
        overlap_with_unmodulated=intensity_overlap(state, unmod),
    )


def loss_sweep(setup: SimulationSetup, x_values) -> list[LossSweepRow]:
    """Assemble and score the state across interface-loss settings.

    Rows come back in input order; evaluation may run in parallel since
    every point is independent of the others.
    """
    xs = [float(x) for x in x_values]
    if any(x < 0 for x in xs):
        raise InvalidArgumentError("loss values must be non-negative")
    lossless = setup.with_loss(0.0).assemble()
    unmod = normalize(setup.unmodulated())
    workers = min(4, os.cpu_count() or 1)
    if workers > 1 and len(xs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: _sweep_point(setup, x, lossless, unmod), xs))
    else:
        rows = [_sweep_point(setup, x, lossless, unmod) for x in xs]
    return rows
