"""Frequency grids and joint-amplitude containers.

All frequencies are angular (rad/s); wavelengths appear only at the I/O
boundary. Quadrature is the rectangle rule on uniform grids throughout.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateStateError, InvalidArgumentError

C = 299792458.0  # vacuum speed of light, m/s
TWO_PI = 2.0 * np.pi

__all__ = [
    "C",
    "FrequencyGrid",
    "JointAmplitude",
    "SpectralFunction",
    "wavelength_to_omega",
    "omega_to_wavelength",
    "make_grid",
    "normalize",
    "intensity",
]


def wavelength_to_omega(wavelength):
    """Convert vacuum wavelength (m) to angular frequency (rad/s)."""
    return TWO_PI * C / (np.asarray(wavelength) if np.ndim(wavelength) else wavelength)


def omega_to_wavelength(omega):
    """Convert angular frequency (rad/s) to vacuum wavelength (m)."""
    return TWO_PI * C / (np.asarray(omega) if np.ndim(omega) else omega)


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform 1-D sampling of angular frequency.

    Attributes:
        omega_min: lowest sample (rad/s).
        omega_max: highest sample (rad/s).
        n_points: number of samples, at least 2.
    """

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if not (self.omega_min > 0 and np.isfinite(self.omega_min)):
            raise InvalidArgumentError("omega_min must be positive and finite")
        if not self.omega_max > self.omega_min:
            raise InvalidArgumentError("omega_max must exceed omega_min")
        if self.n_points < 2:
            raise InvalidArgumentError("a grid needs at least 2 points")

    @property
    def spacing(self) -> float:
        """Sample spacing (rad/s)."""
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @cached_property
    def omegas(self) -> np.ndarray:
        """Strictly increasing samples, shape ``(n_points,)``."""
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    @property
    def wavelengths(self) -> np.ndarray:
        """Vacuum wavelengths (m) of the samples; decreasing."""
        return TWO_PI * C / self.omegas

    def contains(self, omega: float) -> bool:
        return self.omega_min <= omega <= self.omega_max

    def nearest_index(self, omega: float) -> int:
        """Index of the sample closest to ``omega``."""
        idx = round((omega - self.omega_min) / self.spacing)
        return int(min(max(idx, 0), self.n_points - 1))


def make_grid(center_wavelength: float, span_wavelength: float, n_points: int) -> FrequencyGrid:
    """Build a grid spanning ``center ± span/2`` in wavelength.

    The wavelength window is converted to angular frequency via
    ``omega = 2*pi*c/lambda`` and sampled uniformly in omega, ascending.

    Args:
        center_wavelength: window center (m).
        span_wavelength: full window width (m); must be positive and
            smaller than twice the center.
        n_points: number of samples, at least 2.
    """
    if not center_wavelength > 0:
        raise InvalidArgumentError("center_wavelength must be positive")
    if not span_wavelength > 0:
        raise InvalidArgumentError("span_wavelength must be positive")
    if span_wavelength >= 2 * center_wavelength:
        raise InvalidArgumentError("span_wavelength must be below 2*center_wavelength")
    if n_points < 2:
        raise InvalidArgumentError("n_points must be at least 2")
    lam_lo = center_wavelength - span_wavelength / 2
    lam_hi = center_wavelength + span_wavelength / 2
    return FrequencyGrid(TWO_PI * C / lam_hi, TWO_PI * C / lam_lo, int(n_points))


@dataclass(frozen=True)
class JointAmplitude:
    """Complex amplitude over a signal/idler frequency-grid pair.

    ``values[i, j]`` is the amplitude at ``grid_s.omegas[i]``,
    ``grid_i.omegas[j]``.
    """

    grid_s: FrequencyGrid
    grid_i: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid_s.n_points, self.grid_i.n_points):
            raise InvalidArgumentError(
                f"values shape {vals.shape} does not match grids "
                f"({self.grid_s.n_points}, {self.grid_i.n_points})"
            )
        object.__setattr__(self, "values", vals)

    @property
    def cell_area(self) -> float:
        """Quadrature cell area d(omega_s) * d(omega_i)."""
        return self.grid_s.spacing * self.grid_i.spacing

    def norm_squared(self) -> float:
        """Rectangle-rule integral of the intensity."""
        return float(np.sum(np.abs(self.values) ** 2) * self.cell_area)


@dataclass(frozen=True)
class SpectralFunction:
    """Complex single-photon spectral amplitude on a grid."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n_points,):
            raise InvalidArgumentError("values length does not match grid")
        object.__setattr__(self, "values", vals)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)

    def normalized(self) -> "SpectralFunction":
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise DegenerateStateError("cannot normalize an all-zero spectral function")
        return SpectralFunction(self.grid, self.values / np.sqrt(n2))


def _fix_global_phase(values: np.ndarray) -> np.ndarray:
    """Rotate a complex array so its largest-magnitude entry is real-positive."""
    flat = values.ravel()
    k = int(np.argmax(np.abs(flat)))
    pivot = flat[k]
    return values * (np.conj(pivot) / np.abs(pivot))


def normalize(a: JointAmplitude) -> JointAmplitude:
    """Rescale so the intensity integrates to one under the rectangle rule.

    The global phase is fixed by making the largest-magnitude element
    real-positive, which keeps repeated runs byte-comparable.

    Raises:
        DegenerateStateError: if the amplitude is identically zero.
    """
    n2 = a.norm_squared()
    if n2 == 0.0:
        raise DegenerateStateError("cannot normalize an all-zero amplitude")
    if not np.isfinite(n2):
        raise DegenerateStateError("amplitude norm is not finite")
    vals = a.values / np.sqrt(n2)
    return JointAmplitude(a.grid_s, a.grid_i, _fix_global_phase(vals))


def intensity(a: JointAmplitude) -> np.ndarray:
    """Elementwise squared modulus of the amplitude."""
    return np.abs(a.values) ** 2
