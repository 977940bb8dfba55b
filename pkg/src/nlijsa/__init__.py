"""Joint-spectral-state engineering in a four-crystal nonlinear interferometer.

Modulated joint spectral amplitudes from per-photon time-delay schedules,
an interface-loss model, and Schmidt-mode diagnostics, with a config-driven
CLI for exporting every dataset as CSV.
"""

from .analysis import (
    LossSweepRow,
    SchmidtDecomposition,
    intensity_overlap,
    loss_sweep,
    project_signal,
    reconstruct,
    schmidt_decompose,
    schmidt_number,
    schmidt_values,
)
from .backend import BACKEND
from .dispersion import (
    CrystalConfig,
    Material,
    PhaseMatchingType,
    SellmeierCoefficients,
    SellmeierSet,
    angle_tuned_index,
    delta_k,
    install_poling_period,
    load_sellmeier_file,
    phase_matching_function,
    photon_index,
    refractive_index,
    solve_poling_period,
    wavevector,
)
from .errors import (
    ConfigError,
    ContractError,
    DegenerateStateError,
    InvalidArgumentError,
    NumericError,
    SimulationError,
    WavelengthRangeError,
)
from .nli import (
    DelaySchedule,
    LossModel,
    PumpConfig,
    SimulationSetup,
    assemble_amplitude,
    grid_modulation_closed_form,
    hde_modulation_closed_form,
    modulation_sum,
    modulation_term,
    preset,
    pump_envelope,
    unmodulated_amplitude,
)
from .spectral import (
    C,
    FrequencyGrid,
    JointAmplitude,
    SpectralFunction,
    intensity,
    make_grid,
    normalize,
    omega_to_wavelength,
    wavelength_to_omega,
)

__version__ = "0.1.0"
