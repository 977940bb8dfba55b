"""Material dispersion, wavevector mismatch, and phase matching.

Sellmeier coefficients are embedded for the two supported crystals and can
be overridden from a TOML file with the same schema (see
``load_sellmeier_file``). Each coefficient set records its literature
source so output manifests can identify the dispersion data in use.

The generic index form, with wavelength in micrometers, is

    n^2 = A + sum_j B_j * lam^p_j / (lam^2 - C_j) + D * lam^2,   p_j in {0, 2}

which covers the usual one- and two-pole fits as well as the
``B*lam^2/(lam^2 - C)`` resonance style.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError, WavelengthRangeError
from .spectral import C, TWO_PI

__all__ = [
    "Material",
    "PhaseMatchingType",
    "SellmeierCoefficients",
    "SellmeierSet",
    "CrystalConfig",
    "DEFAULT_SELLMEIER",
    "load_sellmeier_file",
    "refractive_index",
    "angle_tuned_index",
    "photon_index",
    "wavevector",
    "delta_k",
    "solve_poling_period",
    "install_poling_period",
    "phase_matching_function",
]


class Material(str, Enum):
    KTP = "KTP"
    LINBO3 = "LiNbO3"


class PhaseMatchingType(str, Enum):
    """Type-II phase matching, either quasi-phase-matched by a poling
    grating or critically matched by angle tuning the extraordinary axis."""

    TYPE2_QPM = "type2_qpm"
    TYPE2_ANGLE = "type2_angle"


@dataclass(frozen=True)
class SellmeierCoefficients:
    """One axis of a Sellmeier fit.

    Attributes:
        constant: additive constant A.
        poles: tuple of ``(B, C, p)`` resonance terms; C in um^2, p in {0, 2}.
        lambda_sq: coefficient D of the lam^2 term (often negative).
        valid_range: wavelength validity window (m).
        source: literature reference for the fit.
    """

    constant: float
    poles: tuple[tuple[float, float, int], ...]
    lambda_sq: float
    valid_range: tuple[float, float]
    source: str

    def index(self, wavelength):
        """Refractive index at a vacuum wavelength (m); scalar or array.

        Raises:
            WavelengthRangeError: outside the validity window.
        """
        lam = np.asarray(wavelength, dtype=float)
        lo, hi = self.valid_range
        if np.any(lam < lo) or np.any(lam > hi):
            raise WavelengthRangeError(
                f"wavelength outside validity range [{lo * 1e9:.0f}, {hi * 1e9:.0f}] nm "
                f"of coefficient set ({self.source})"
            )
        lam_um = lam * 1e6
        l2 = lam_um * lam_um
        n2 = self.constant + self.lambda_sq * l2
        for b, c, p in self.poles:
            n2 = n2 + b * (l2 if p == 2 else 1.0) / (l2 - c)
        n = np.sqrt(n2)
        return float(n) if np.ndim(wavelength) == 0 else n


@dataclass(frozen=True)
class SellmeierSet:
    """Named per-axis coefficient collection for one material."""

    name: str
    axes: Mapping[str, SellmeierCoefficients]

    def axis(self, label: str) -> SellmeierCoefficients:
        try:
            return self.axes[label]
        except KeyError:
            raise InvalidArgumentError(
                f"coefficient set '{self.name}' has no axis '{label}' "
                f"(available: {sorted(self.axes)})"
            ) from None

    @property
    def sources(self) -> dict[str, str]:
        return {label: coeffs.source for label, coeffs in self.axes.items()}


_KTP_SOURCE = "Kato & Takaoka, Appl. Opt. 41, 5040 (2002)"
_LN_SOURCE = "Zelmon, Small & Jundt, J. Opt. Soc. Am. B 14, 3319 (1997)"

DEFAULT_SELLMEIER: dict[Material, SellmeierSet] = {
    Material.KTP: SellmeierSet(
        name="KTP",
        axes={
            "x": SellmeierCoefficients(
                constant=3.29100,
                poles=((0.04140, 0.03978, 0), (9.35522, 31.45571, 0)),
                lambda_sq=0.0,
                valid_range=(430e-9, 3540e-9),
                source=_KTP_SOURCE,
            ),
            "z": SellmeierCoefficients(
                constant=4.59423,
                poles=((0.06206, 0.04763, 0), (110.80672, 86.12171, 0)),
                lambda_sq=0.0,
                valid_range=(430e-9, 3540e-9),
                source=_KTP_SOURCE,
            ),
        },
    ),
    Material.LINBO3: SellmeierSet(
        name="LiNbO3",
        axes={
            "o": SellmeierCoefficients(
                constant=1.0,
                poles=((2.6734, 0.01764, 2), (1.2290, 0.05914, 2), (12.614, 474.60, 2)),
                lambda_sq=0.0,
                valid_range=(400e-9, 5000e-9),
                source=_LN_SOURCE,
            ),
            "e": SellmeierCoefficients(
                constant=1.0,
                poles=((2.9804, 0.02047, 2), (0.5981, 0.0666, 2), (8.9543, 416.08, 2)),
                lambda_sq=0.0,
                valid_range=(400e-9, 5000e-9),
                source=_LN_SOURCE,
            ),
        },
    ),
}


def load_sellmeier_file(path) -> dict[str, SellmeierSet]:
    """Read coefficient sets from a TOML file.

    Schema, one table per material::

        [KTP]
        source = "..."
        [KTP.axes.x]
        constant = 3.291
        lambda_sq = 0.0
        valid_range_nm = [430.0, 3540.0]
        poles = [[0.0414, 0.03978, 0], [9.35522, 31.45571, 0]]

    A per-axis ``source`` overrides the material-level one.
    """
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    from .errors import ConfigError

    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    sets: dict[str, SellmeierSet] = {}
    for name, body in data.items():
        if "axes" not in body:
            raise ConfigError(f"material '{name}' has no [{name}.axes] tables", key=name)
        default_source = body.get("source", "user supplied")
        axes = {}
        for label, coeffs in body["axes"].items():
            keypath = f"{name}.axes.{label}"
            try:
                lo_nm, hi_nm = coeffs["valid_range_nm"]
                poles = tuple((float(b), float(c), int(p)) for b, c, p in coeffs["poles"])
                axes[label] = SellmeierCoefficients(
                    constant=float(coeffs["constant"]),
                    poles=poles,
                    lambda_sq=float(coeffs.get("lambda_sq", 0.0)),
                    valid_range=(lo_nm * 1e-9, hi_nm * 1e-9),
                    source=str(coeffs.get("source", default_source)),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad Sellmeier entry under '{keypath}': {exc}", key=keypath) from exc
            for _, c, p in axes[label].poles:
                if p not in (0, 2):
                    raise ConfigError(f"pole power must be 0 or 2 under '{keypath}'", key=keypath)
        sets[name] = SellmeierSet(name=name, axes=axes)
    return sets


@dataclass(frozen=True)
class CrystalConfig:
    """Geometry and phase-matching description of one crystal.

    ``axes`` assigns a coefficient-set axis label to (pump, signal, idler)
    in that order. Under angle tuning, the label ``"e"`` selects the
    angle-mixed extraordinary index built from the ``"o"`` and ``"e"``
    table entries; every other label is a direct table lookup.

    ``poling_period`` may be left unset so a solver can fill it in;
    operations that need the grating reject such configs.
    """

    material: Material
    pm_type: PhaseMatchingType
    length: float
    axes: tuple[str, str, str]
    poling_period: float | None = None
    grating_sign: int = 1
    theta: float | None = None
    sellmeier: SellmeierSet | None = None

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidArgumentError("crystal length must be positive")
        if self.sellmeier is None:
            object.__setattr__(self, "sellmeier", DEFAULT_SELLMEIER[Material(self.material)])
        if self.poling_period is not None and not self.poling_period > 0:
            raise InvalidArgumentError("poling_period must be positive when given")
        if self.grating_sign not in (-1, 1):
            raise InvalidArgumentError("grating_sign must be +1 or -1")
        if self.pm_type is PhaseMatchingType.TYPE2_ANGLE:
            if self.theta is None or not 0.0 < self.theta < np.pi / 2:
                raise InvalidArgumentError("angle tuning requires theta in (0, pi/2)")
        if len(self.axes) != 3:
            raise InvalidArgumentError("axes must name (pump, signal, idler)")
        for label in self.axes:
            self.sellmeier.axis(label)  # fails fast on unknown labels

    @property
    def mixes_angle(self) -> bool:
        return self.pm_type is PhaseMatchingType.TYPE2_ANGLE


def refractive_index(sset: SellmeierSet, axis: str, wavelength):
    """Index of one axis of a coefficient set at a wavelength (m)."""
    return sset.axis(axis).index(wavelength)


def angle_tuned_index(n_o, n_e90, theta: float):
    """Extraordinary index at propagation angle ``theta`` from the optic axis.

    Evaluates ``(cos^2(theta)/n_o^2 + sin^2(theta)/n_e90^2)^(-1/2)``; the
    result lies between ``n_o`` and ``n_e90`` and meets them at
    ``theta = 0`` and ``pi/2`` exactly.
    """
    if np.any(np.asarray(n_o) <= 1) or np.any(np.asarray(n_e90) <= 1):
        raise InvalidArgumentError("indices must exceed 1")
    if not 0.0 <= theta <= np.pi / 2:
        raise InvalidArgumentError("theta must lie in [0, pi/2]")
    if theta == 0.0:
        return n_o
    if theta == np.pi / 2:
        return n_e90
    c2 = np.cos(theta) ** 2
    s2 = np.sin(theta) ** 2
    return (c2 / np.asarray(n_o) ** 2 + s2 / np.asarray(n_e90) ** 2) ** -0.5


_ROLES = {"pump": 0, "signal": 1, "idler": 2}


def photon_index(config: CrystalConfig, role: str, wavelength):
    """Refractive index seen by the pump, signal, or idler photon."""
    label = config.axes[_ROLES[role]]
    if config.mixes_angle and label == "e":
        n_o = refractive_index(config.sellmeier, "o", wavelength)
        n_e90 = refractive_index(config.sellmeier, "e", wavelength)
        return angle_tuned_index(n_o, n_e90, config.theta)
    return refractive_index(config.sellmeier, label, wavelength)


def wavevector(n, omega):
    """Wavenumber k = n * omega / c (rad/m)."""
    if np.any(np.asarray(omega) <= 0):
        raise InvalidArgumentError("omega must be positive")
    return np.asarray(n) * np.asarray(omega) / C


def _bare_mismatch(config: CrystalConfig, omega_s, omega_i):
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    omega_p = omega_s + omega_i
    k_s = wavevector(photon_index(config, "signal", TWO_PI * C / omega_s), omega_s)
    k_i = wavevector(photon_index(config, "idler", TWO_PI * C / omega_i), omega_i)
    k_p = wavevector(photon_index(config, "pump", TWO_PI * C / omega_p), omega_p)
    return k_s + k_i - k_p


def delta_k(config: CrystalConfig, omega_s, omega_i):
    """Wavevector mismatch ``k_s + k_i - k_p`` (rad/m), broadcasting over
    frequency arrays.

    For quasi-phase-matched configs the signed grating term
    ``grating_sign * 2*pi/poling_period`` is subtracted, so the mismatch
    vanishes at the design point the grating was solved for.
    """
    dk = _bare_mismatch(config, omega_s, omega_i)
    if config.pm_type is PhaseMatchingType.TYPE2_QPM:
        if config.poling_period is None:
            raise InvalidArgumentError(
                "poling_period is unset; solve it first (see solve_poling_period)"
            )
        dk = dk - config.grating_sign * TWO_PI / config.poling_period
    if np.ndim(omega_s) == 0 and np.ndim(omega_i) == 0:
        return float(dk)
    return dk


def solve_poling_period(config: CrystalConfig, omega_s0: float, omega_i0: float) -> float | None:
    """Poling period that cancels the bare mismatch at one target point.

    Returns:
        ``2*pi/|k_s + k_i - k_p|`` in meters, or ``None`` when the bare
        mismatch already vanishes and no grating is needed.
    """
    dk = float(_bare_mismatch(config, omega_s0, omega_i0))
    k_scale = float(
        wavevector(photon_index(config, "signal", TWO_PI * C / omega_s0), omega_s0)
        + wavevector(photon_index(config, "idler", TWO_PI * C / omega_i0), omega_i0)
    )
    if abs(dk) < 1e-12 * k_scale:
        return None
    return TWO_PI / abs(dk)


def install_poling_period(config: CrystalConfig, omega_s0: float, omega_i0: float) -> CrystalConfig:
    """Return a copy of ``config`` with the solved grating installed.

    The grating sign follows the sign of the bare mismatch so ``delta_k``
    vanishes at the target with a positive period.
    """
    period = solve_poling_period(config, omega_s0, omega_i0)
    if period is None:
        return replace(config, poling_period=None, grating_sign=1)
    sign = 1 if float(_bare_mismatch(config, omega_s0, omega_i0)) > 0 else -1
    return replace(config, poling_period=period, grating_sign=sign)


def phase_matching_function(config: CrystalConfig, omega_s, omega_i):
    """Complex phase-matching factor ``sinc(dk*L/2) * exp(i*dk*L/2)``.

    ``sinc(x) = sin(x)/x`` with ``sinc(0) = 1``; the modulus is bounded by
    one everywhere.
    """
    x = delta_k(config, omega_s, omega_i) * (config.length / 2.0)
    return np.sinc(np.asarray(x) / np.pi) * np.exp(1j * np.asarray(x))


def pack_axis_coefficients(config: CrystalConfig, role: str) -> np.ndarray:
    """Flatten one photon's index model for the numeric kernels.

    Layout (32 float64): ``[cos^2, sin^2, block_a(15), block_b(15)]`` where
    each block is ``[A, D, n_poles, (B, C, p) * 4]``. Unmixed axes carry
    ``cos^2 = 1`` and duplicate their block so the kernels can evaluate the
    angle-mix formula unconditionally.
    """
    label = config.axes[_ROLES[role]]

    def block(coeffs: SellmeierCoefficients) -> list[float]:
        if len(coeffs.poles) > 4:
            raise InvalidArgumentError("kernels support at most 4 Sellmeier poles")
        out = [coeffs.constant, coeffs.lambda_sq, float(len(coeffs.poles))]
        for b, c, p in coeffs.poles:
            out += [b, c, float(p)]
        out += [0.0] * (3 * (4 - len(coeffs.poles)))
        return out

    if config.mixes_angle and label == "e":
        c2 = float(np.cos(config.theta) ** 2)
        s2 = float(np.sin(config.theta) ** 2)
        a = block(config.sellmeier.axis("o"))
        b = block(config.sellmeier.axis("e"))
    else:
        c2, s2 = 1.0, 0.0
        a = block(config.sellmeier.axis(label))
        b = a
    return np.array([c2, s2] + a + b, dtype=np.float64)
