"""Assembly of modulated joint spectral amplitudes.

A cascade of N identical crystals emits one photon pair with amplitude
proportional to the single-crystal joint amplitude times a modulation sum:
each crystal contributes a unit phasor built from the pump delays upstream
of it and the signal/idler delays downstream of it, optionally damped by
interface loss. Two delay presets are provided: one arranges the joint
intensity into a lattice of peaks ("grid"), the other into a chain of
islands along the anti-diagonal ("hde").
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .dispersion import (
    CrystalConfig,
    Material,
    PhaseMatchingType,
    install_poling_period,
    pack_axis_coefficients,
    photon_index,
)
from .errors import InvalidArgumentError
from .spectral import (
    C,
    TWO_PI,
    FrequencyGrid,
    JointAmplitude,
    make_grid,
    normalize,
    wavelength_to_omega,
)

__all__ = [
    "PumpConfig",
    "DelaySchedule",
    "LossModel",
    "SimulationSetup",
    "pump_envelope",
    "unmodulated_amplitude",
    "modulation_term",
    "modulation_sum",
    "grid_modulation_closed_form",
    "hde_modulation_closed_form",
    "assemble_amplitude",
    "preset",
    "phase_term_table",
    "GRID_TAU",
    "HDE_TAU",
]

GRID_TAU = 8.3e-12
HDE_TAU = 1.0e-12


@dataclass(frozen=True)
class PumpConfig:
    """Gaussian pump spectrum.

    ``sigma`` is the standard deviation of the *intensity* spectrum in
    wavelength, so the intensity FWHM is ``2*sqrt(2*ln 2)*sigma``.
    """

    center_wavelength: float
    sigma: float

    def __post_init__(self):
        if not (self.center_wavelength > 0 and self.sigma > 0):
            raise InvalidArgumentError("pump wavelength and width must be positive")

    @property
    def center_omega(self) -> float:
        return TWO_PI * C / self.center_wavelength

    @property
    def sigma_omega(self) -> float:
        """Intensity-spectrum standard deviation in angular frequency."""
        return TWO_PI * C * self.sigma / self.center_wavelength**2

    @property
    def fwhm(self) -> float:
        return 2.0 * math.sqrt(2.0 * math.log(2.0)) * self.sigma


@dataclass(frozen=True)
class DelaySchedule:
    """Per-crystal time delays applied to pump, signal, and idler (s).

    Negative entries are allowed (relative path differences); the three
    sequences must have equal length N >= 1.
    """

    tau_p: tuple[float, ...]
    tau_s: tuple[float, ...]
    tau_i: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "tau_p", tuple(float(t) for t in self.tau_p))
        object.__setattr__(self, "tau_s", tuple(float(t) for t in self.tau_s))
        object.__setattr__(self, "tau_i", tuple(float(t) for t in self.tau_i))
        n = len(self.tau_p)
        if n < 1 or len(self.tau_s) != n or len(self.tau_i) != n:
            raise InvalidArgumentError("delay sequences must share one length N >= 1")

    @property
    def n_crystals(self) -> int:
        return len(self.tau_p)

    @classmethod
    def grid(cls, tau: float) -> "DelaySchedule":
        """Four-crystal sequence producing the lattice ("grid") modulation."""
        return cls((0.0, tau, 0.0, tau), (tau, tau / 2, 0.0, 0.0), (0.0, tau / 2, tau, 0.0))

    @classmethod
    def hde(cls, tau: float) -> "DelaySchedule":
        """Four-crystal sequence producing the anti-diagonal island modulation."""
        return cls((0.0, tau, tau / 2, 0.0), (0.0, tau, 0.0, 0.0), (2 * tau, 0.0, 0.0, 0.0))


@dataclass(frozen=True)
class LossModel:
    """Flat amplitude loss of ``x_db`` dB at every free-space/fiber interface.

    The pair amplitude from crystal mu traverses ``2*mu - 1`` interfaces,
    so it is damped by ``(10**(-x_db/20))**(2*mu - 1)``; zero loss leaves
    every crystal weight at exactly one.
    """

    x_db: float = 0.0

    def __post_init__(self):
        if self.x_db < 0:
            raise InvalidArgumentError("loss must be non-negative")

    def weight(self, mu: int) -> float:
        """Amplitude weight of crystal ``mu`` (1-based)."""
        return (10.0 ** (-self.x_db / 20.0)) ** (2 * mu - 1)

    def weights(self, n_crystals: int) -> np.ndarray:
        return np.array([self.weight(mu) for mu in range(1, n_crystals + 1)])


def pump_envelope(pump: PumpConfig, omega_p):
    """Gaussian pump amplitude, peaking at 1 on the pump center.

    ``exp(-(w - w0)^2 / (4*sigma_w^2))`` so the squared modulus has
    standard deviation ``sigma_w``.
    """
    if np.any(np.asarray(omega_p) <= 0):
        raise InvalidArgumentError("omega_p must be positive")
    d = (np.asarray(omega_p) - pump.center_omega) / (2.0 * pump.sigma_omega)
    env = np.exp(-d * d)
    return float(env) if np.ndim(omega_p) == 0 else env


def _check_dispersion_window(crystal: CrystalConfig, grid_s: FrequencyGrid, grid_i: FrequencyGrid):
    """Fail fast if any grid point needs an index outside Sellmeier validity."""
    for role, omegas in (
        ("signal", (grid_s.omega_min, grid_s.omega_max)),
        ("idler", (grid_i.omega_min, grid_i.omega_max)),
        ("pump", (grid_s.omega_min + grid_i.omega_min, grid_s.omega_max + grid_i.omega_max)),
    ):
        for omega in omegas:
            photon_index(crystal, role, TWO_PI * C / omega)


def modulation_term(schedule: DelaySchedule, mu: int, omega_s, omega_i):
    """Unit-modulus phasor contributed by crystal ``mu`` (1-based).

    The pump phase accumulates over crystals up to and including ``mu``;
    the signal and idler phases accumulate from ``mu`` to the end.
    """
    n = schedule.n_crystals
    if not 1 <= mu <= n:
        raise InvalidArgumentError(f"crystal index {mu} outside 1..{n}")
    p_sum = sum(schedule.tau_p[:mu])
    s_sum = sum(schedule.tau_s[mu - 1 :])
    i_sum = sum(schedule.tau_i[mu - 1 :])
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    phase = (omega_s + omega_i) * p_sum + omega_s * s_sum + omega_i * i_sum
    out = np.exp(1j * phase)
    return complex(out) if out.ndim == 0 else out


def modulation_sum(schedule: DelaySchedule, loss: LossModel, omega_s, omega_i):
    """Loss-weighted coherent sum of the per-crystal modulation phasors."""
    total = None
    for mu in range(1, schedule.n_crystals + 1):
        term = loss.weight(mu) * modulation_term(schedule, mu, omega_s, omega_i)
        total = term if total is None else total + term
    return total


def grid_modulation_closed_form(tau: float, omega_s, omega_i):
    """Closed form of the four-crystal grid modulation sum (lossless)."""
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    out = (
        4.0
        * np.exp(1.5j * omega_s * tau)
        * np.exp(2.0j * omega_i * tau)
        * np.cos((omega_s + omega_i) * tau / 4.0)
        * np.cos((omega_s - omega_i) * tau / 4.0)
    )
    return complex(out) if out.ndim == 0 else out


def hde_modulation_closed_form(tau: float, omega_s, omega_i):
    """Closed form of the four-crystal island modulation sum (lossless)."""
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    out = 4.0 * np.exp(1.5j * (omega_s + omega_i) * tau) * np.cos((omega_s - omega_i) * tau / 4.0) ** 2
    return complex(out) if out.ndim == 0 else out


def phase_term_table() -> dict[str, tuple[tuple[float, float], ...]]:
    """Analytic per-crystal phase coefficients for the two presets.

    For crystal mu the lossless phasor is
    ``exp(i*(s_coef*omega_s + i_coef*omega_i)*tau)``; these pairs are the
    hand-derived expected values used to cross-check the delay-sum rule.
    """
    return {
        "grid": ((1.5, 1.5), (1.5, 2.5), (1.0, 2.0), (2.0, 2.0)),
        "hde": ((1.0, 2.0), (2.0, 1.0), (1.5, 1.5), (1.5, 1.5)),
    }


def unmodulated_amplitude(
    pump: PumpConfig,
    crystal: CrystalConfig,
    grid_s: FrequencyGrid,
    grid_i: FrequencyGrid,
) -> JointAmplitude:
    """Single-crystal joint amplitude: pump envelope times phase matching.

    Not normalized; the peak modulus is 1 where the pump is centered and
    the mismatch vanishes simultaneously.
    """
    _check_dispersion_window(crystal, grid_s, grid_i)
    values = backend.amplitude_matrix(
        grid_s.omegas,
        grid_i.omegas,
        pump.center_omega,
        pump.sigma_omega,
        crystal.length,
        _grating_k(crystal),
        pack_axis_coefficients(crystal, "pump"),
        pack_axis_coefficients(crystal, "signal"),
        pack_axis_coefficients(crystal, "idler"),
        (0.0,),
        (0.0,),
        (0.0,),
        (1.0,),
    )
    return JointAmplitude(grid_s, grid_i, values)


def _grating_k(crystal: CrystalConfig) -> float:
    if crystal.pm_type is not PhaseMatchingType.TYPE2_QPM:
        return 0.0
    if crystal.poling_period is None:
        raise InvalidArgumentError("poling_period is unset; solve it first")
    return crystal.grating_sign * TWO_PI / crystal.poling_period


def assemble_amplitude(
    pump: PumpConfig,
    crystal: CrystalConfig,
    schedule: DelaySchedule,
    loss: LossModel,
    grid_s: FrequencyGrid,
    grid_i: FrequencyGrid,
) -> JointAmplitude:
    """Normalized joint amplitude of the modulated cascade.

    Deterministic for a fixed configuration: the same inputs produce a
    bitwise-identical matrix.
    """
    _check_dispersion_window(crystal, grid_s, grid_i)
    values = backend.amplitude_matrix(
        grid_s.omegas,
        grid_i.omegas,
        pump.center_omega,
        pump.sigma_omega,
        crystal.length,
        _grating_k(crystal),
        pack_axis_coefficients(crystal, "pump"),
        pack_axis_coefficients(crystal, "signal"),
        pack_axis_coefficients(crystal, "idler"),
        schedule.tau_p,
        schedule.tau_s,
        schedule.tau_i,
        loss.weights(schedule.n_crystals),
    )
    return normalize(JointAmplitude(grid_s, grid_i, values))


@dataclass(frozen=True)
class SimulationSetup:
    """Everything needed to assemble one state."""

    pump: PumpConfig
    crystal: CrystalConfig
    schedule: DelaySchedule
    grid_s: FrequencyGrid
    grid_i: FrequencyGrid
    loss: LossModel = field(default_factory=LossModel)
    name: str = "custom"

    def assemble(self) -> JointAmplitude:
        return assemble_amplitude(
            self.pump, self.crystal, self.schedule, self.loss, self.grid_s, self.grid_i
        )

    def unmodulated(self) -> JointAmplitude:
        return unmodulated_amplitude(self.pump, self.crystal, self.grid_s, self.grid_i)

    def with_loss(self, x_db: float) -> "SimulationSetup":
        from dataclasses import replace

        return replace(self, loss=LossModel(x_db))


_PUMP = PumpConfig(center_wavelength=775e-9, sigma=2.0e-9)


def preset(kind: str) -> SimulationSetup:
    """Built-in configurations.

    ``grid``: ppKTP (type-II, x -> xz), L = 1 mm, poling period solved for
    degenerate 775 nm -> 2 x 1550 nm, tau = 8.3 ps, 512-point grids
    spanning 80 nm around 1550 nm.

    ``hde``: angle-tuned LiNbO3 (type-II eoe, theta = 30 deg), L = 1 mm,
    tau = 1.0 ps, 512-point grids spanning 120 nm around 1550 nm.
    """
    degenerate = wavelength_to_omega(1550e-9)
    if kind == "grid":
        crystal = CrystalConfig(
            material=Material.KTP,
            pm_type=PhaseMatchingType.TYPE2_QPM,
            length=1.0e-3,
            axes=("x", "x", "z"),
        )
        crystal = install_poling_period(crystal, degenerate, degenerate)
        grid = make_grid(1550e-9, 80e-9, 512)
        return SimulationSetup(
            pump=_PUMP,
            crystal=crystal,
            schedule=DelaySchedule.grid(GRID_TAU),
            grid_s=grid,
            grid_i=grid,
            name="grid",
        )
    if kind == "hde":
        crystal = CrystalConfig(
            material=Material.LINBO3,
            pm_type=PhaseMatchingType.TYPE2_ANGLE,
            length=1.0e-3,
            axes=("e", "o", "e"),
            theta=math.radians(30.0),
        )
        grid = make_grid(1550e-9, 120e-9, 512)
        return SimulationSetup(
            pump=_PUMP,
            crystal=crystal,
            schedule=DelaySchedule.hde(HDE_TAU),
            grid_s=grid,
            grid_i=grid,
            name="hde",
        )
    raise InvalidArgumentError(f"unknown preset '{kind}' (expected 'grid' or 'hde')")


def modulation_intensity_pseudonormalized(
    schedule: DelaySchedule,
    loss: LossModel,
    grid_s: FrequencyGrid,
    grid_i: FrequencyGrid,
) -> np.ndarray:
    """Squared-modulus modulation map scaled to a unit maximum (plot aid)."""
    m = backend.modulation_matrix(
        grid_s.omegas,
        grid_i.omegas,
        schedule.tau_p,
        schedule.tau_s,
        schedule.tau_i,
        loss.weights(schedule.n_crystals),
    )
    m2 = np.abs(m) ** 2
    peak = m2.max()
    if peak == 0.0:
        return m2
    return m2 / peak
