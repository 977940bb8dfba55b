"""TOML run-configuration files.

Sections and units::

    [pump]     center_nm, sigma_nm
    [crystal]  material ("KTP" | "LiNbO3"), phase_matching ("qpm" | "angle"),
               length_mm, axes = [pump, signal, idler],
               poling_period_um (optional; solved at the degenerate pump
               point when omitted), theta_deg (angle tuning only)
    [delays]   pump_ps, signal_ps, idler_ps  (equal-length lists)
    [loss]     x_db
    [grid]     center_nm, span_nm, points
    [sellmeier] file = "coeffs.toml"   (optional coefficient override)

Wavelengths in nm, lengths in mm, delays in ps, loss in dB.
"""

import math
from pathlib import Path

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from .dispersion import (
    CrystalConfig,
    Material,
    PhaseMatchingType,
    install_poling_period,
    load_sellmeier_file,
)
from .errors import ConfigError, SimulationError
from .nli import DelaySchedule, LossModel, PumpConfig, SimulationSetup
from .spectral import make_grid, wavelength_to_omega

_MATERIALS = {m.value: m for m in Material}
_PM_TYPES = {"qpm": PhaseMatchingType.TYPE2_QPM, "angle": PhaseMatchingType.TYPE2_ANGLE}


def _section(data: dict, name: str) -> dict:
    if name not in data:
        raise ConfigError(f"missing [{name}] section", key=name)
    if not isinstance(data[name], dict):
        raise ConfigError(f"[{name}] must be a table", key=name)
    return data[name]


def _number(section: dict, section_name: str, key: str, default=None):
    if key not in section:
        if default is not None:
            return default
        raise ConfigError(f"missing key '{section_name}.{key}'", key=f"{section_name}.{key}")
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{section_name}.{key}' must be a number", key=f"{section_name}.{key}")
    return float(value)


def _float_list(section: dict, section_name: str, key: str) -> list[float]:
    if key not in section:
        raise ConfigError(f"missing key '{section_name}.{key}'", key=f"{section_name}.{key}")
    value = section[key]
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise ConfigError(f"'{section_name}.{key}' must be a list of numbers", key=f"{section_name}.{key}")
    return [float(v) for v in value]


def load_config(path) -> SimulationSetup:
    """Parse and validate a configuration file into a ready setup.

    Raises:
        ConfigError: naming the offending key on any structural or
            validation problem.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file is not valid TOML: {exc}") from exc

    pump_tab = _section(data, "pump")
    crystal_tab = _section(data, "crystal")
    delays_tab = _section(data, "delays")
    grid_tab = _section(data, "grid")
    loss_tab = data.get("loss", {})

    sellmeier = None
    if "sellmeier" in data:
        ref = data["sellmeier"].get("file")
        if not isinstance(ref, str):
            raise ConfigError("'sellmeier.file' must be a path string", key="sellmeier.file")
        sell_path = Path(ref)
        if not sell_path.is_absolute():
            sell_path = path.parent / sell_path
        try:
            sets = load_sellmeier_file(sell_path)
        except FileNotFoundError:
            raise ConfigError(
                f"'sellmeier.file' not found: {sell_path}", key="sellmeier.file"
            ) from None
        material_name = crystal_tab.get("material")
        if material_name in sets:
            sellmeier = sets[material_name]

    try:
        pump = PumpConfig(
            center_wavelength=_number(pump_tab, "pump", "center_nm") * 1e-9,
            sigma=_number(pump_tab, "pump", "sigma_nm") * 1e-9,
        )
    except SimulationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad [pump] section: {exc}", key="pump") from exc

    material_name = crystal_tab.get("material")
    if material_name not in _MATERIALS:
        raise ConfigError(
            f"'crystal.material' must be one of {sorted(_MATERIALS)}", key="crystal.material"
        )
    pm_name = crystal_tab.get("phase_matching")
    if pm_name not in _PM_TYPES:
        raise ConfigError(
            f"'crystal.phase_matching' must be one of {sorted(_PM_TYPES)}", key="crystal.phase_matching"
        )
    axes = crystal_tab.get("axes")
    if not (isinstance(axes, list) and len(axes) == 3 and all(isinstance(a, str) for a in axes)):
        raise ConfigError("'crystal.axes' must list the pump, signal, idler axes", key="crystal.axes")

    pm_type = _PM_TYPES[pm_name]
    theta = None
    if pm_type is PhaseMatchingType.TYPE2_ANGLE:
        theta = math.radians(_number(crystal_tab, "crystal", "theta_deg"))
    poling = None
    if "poling_period_um" in crystal_tab:
        poling = _number(crystal_tab, "crystal", "poling_period_um") * 1e-6

    try:
        crystal = CrystalConfig(
            material=_MATERIALS[material_name],
            pm_type=pm_type,
            length=_number(crystal_tab, "crystal", "length_mm") * 1e-3,
            axes=(axes[0], axes[1], axes[2]),
            poling_period=poling,
            theta=theta,
            sellmeier=sellmeier,
        )
    except SimulationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad [crystal] section: {exc}", key="crystal") from exc

    if pm_type is PhaseMatchingType.TYPE2_QPM and poling is None:
        degenerate = wavelength_to_omega(2.0 * pump.center_wavelength)
        crystal = install_poling_period(crystal, degenerate, degenerate)

    taus = {key: _float_list(delays_tab, "delays", key) for key in ("pump_ps", "signal_ps", "idler_ps")}
    lengths = {len(v) for v in taus.values()}
    if len(lengths) != 1:
        raise ConfigError("the [delays] lists must have equal length", key="delays")
    try:
        schedule = DelaySchedule(
            tau_p=tuple(t * 1e-12 for t in taus["pump_ps"]),
            tau_s=tuple(t * 1e-12 for t in taus["signal_ps"]),
            tau_i=tuple(t * 1e-12 for t in taus["idler_ps"]),
        )
    except SimulationError as exc:
        raise ConfigError(f"bad [delays] section: {exc}", key="delays") from exc

    try:
        loss = LossModel(x_db=_number(loss_tab, "loss", "x_db", default=0.0))
    except SimulationError as exc:
        raise ConfigError(f"bad [loss] section: {exc}", key="loss.x_db") from exc

    points = grid_tab.get("points", 512)
    if isinstance(points, bool) or not isinstance(points, int):
        raise ConfigError("'grid.points' must be an integer", key="grid.points")
    try:
        grid = make_grid(
            _number(grid_tab, "grid", "center_nm") * 1e-9,
            _number(grid_tab, "grid", "span_nm") * 1e-9,
            points,
        )
    except SimulationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad [grid] section: {exc}", key="grid") from exc

    return SimulationSetup(
        pump=pump,
        crystal=crystal,
        schedule=schedule,
        grid_s=grid,
        grid_i=grid,
        loss=loss,
        name=path.stem,
    )


def describe(setup: SimulationSetup) -> dict:
    """JSON-ready echo of every physical parameter of a setup."""
    crystal = setup.crystal
    return {
        "name": setup.name,
        "pump": {
            "center_nm": setup.pump.center_wavelength * 1e9,
            "sigma_nm": setup.pump.sigma * 1e9,
            "intensity_fwhm_nm": setup.pump.fwhm * 1e9,
        },
        "crystal": {
            "material": crystal.material.value,
            "phase_matching": crystal.pm_type.value,
            "length_mm": crystal.length * 1e3,
            "axes": list(crystal.axes),
            "poling_period_um": None if crystal.poling_period is None else crystal.poling_period * 1e6,
            "grating_sign": crystal.grating_sign,
            "theta_deg": None if crystal.theta is None else math.degrees(crystal.theta),
            "sellmeier_sources": crystal.sellmeier.sources,
        },
        "delays_ps": {
            "pump": [t * 1e12 for t in setup.schedule.tau_p],
            "signal": [t * 1e12 for t in setup.schedule.tau_s],
            "idler": [t * 1e12 for t in setup.schedule.tau_i],
        },
        "loss_db": setup.loss.x_db,
        "grid": {
            "points": setup.grid_s.n_points,
            "omega_min_rad_s": setup.grid_s.omega_min,
            "omega_max_rad_s": setup.grid_s.omega_max,
            "spacing_rad_s": setup.grid_s.spacing,
        },
    }
