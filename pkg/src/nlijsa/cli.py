"""Command-line application.

Subcommands::

    nlijsa simulate   --preset grid | --config run.toml  [--out DIR]
    nlijsa project    --preset grid --lambda-s 1550      [--out DIR]
    nlijsa loss-sweep --preset hde  [--x-range 0:20:41]  [--out DIR]
    nlijsa verify     [--seed 123]

Exit codes: 0 success, 1 verification failure, 2 configuration or argument
error, 3 numeric failure.

Matrix CSVs carry a leading row and column of wavelengths in nm (matrix
rows are signal, columns idler); every number is printed with 17
significant digits so files round-trip exactly.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, backend
from .analysis import (
    intensity_overlap,
    loss_sweep,
    project_signal,
    schmidt_decompose,
)
from .configio import describe, load_config
from .errors import (
    ConfigError,
    ContractError,
    DegenerateStateError,
    InvalidArgumentError,
    NumericError,
    WavelengthRangeError,
)
from .nli import (
    DelaySchedule,
    LossModel,
    SimulationSetup,
    grid_modulation_closed_form,
    hde_modulation_closed_form,
    modulation_intensity_pseudonormalized,
    modulation_sum,
    modulation_term,
    phase_term_table,
    preset,
    pump_envelope,
)
from .dispersion import phase_matching_function
from .spectral import intensity, normalize

MODE_FILE_LIMIT = 8
SWEEP_MODE_DUMP_X = (0.0, 1.0, 3.0, 4.0, 10.0)
VERIFY_TOLERANCE = 1e-12

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % x


def _write_matrix_csv(path: Path, grid_s, grid_i, matrix: np.ndarray):
    lam_s = grid_s.wavelengths * 1e9
    lam_i = grid_i.wavelengths * 1e9
    with open(path, "w", newline="") as fh:
        fh.write("nm," + ",".join(_fmt(x) for x in lam_i) + "\n")
        for lam, row in zip(lam_s, matrix):
            fh.write(_fmt(lam) + "," + ",".join(_fmt(x) for x in row) + "\n")


def _write_table_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _finish_manifest(out_dir: Path, manifest: dict, outputs: list[str], started: float) -> dict:
    manifest["outputs"] = outputs
    manifest["wall_time_s"] = time.perf_counter() - started
    for name in outputs:
        target = out_dir / name
        if not target.is_file() or target.stat().st_size == 0:
            raise NumericError(f"output file missing or empty: {target}")
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


def _base_manifest(command: str, setup: SimulationSetup) -> dict:
    return {
        "command": command,
        "version": __version__,
        "backend": backend.BACKEND,
        "config": describe(setup),
    }


def _mode_files(out_dir: Path, decomposition, suffix: str = "") -> list[str]:
    names = []
    for k in range(min(MODE_FILE_LIMIT, decomposition.rank)):
        for label, mode in (
            ("signal", decomposition.signal_modes[k]),
            ("idler", decomposition.idler_modes[k]),
        ):
            name = f"mode{k}_{label}{suffix}.csv"
            _write_table_csv(
                out_dir / name,
                ["wavelength_nm", "re", "im", "abs_sq"],
                [
                    mode.grid.wavelengths * 1e9,
                    mode.values.real,
                    mode.values.imag,
                    np.abs(mode.values) ** 2,
                ],
            )
            names.append(name)
    return names


def run_simulate(setup: SimulationSetup, out_dir) -> dict:
    """Assemble the state and export every figure-equivalent dataset."""
    started = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    state = setup.assemble()
    unmod = normalize(setup.unmodulated())
    ws = setup.grid_s.omegas[:, None]
    wi = setup.grid_i.omegas[None, :]
    pump_map = np.abs(pump_envelope(setup.pump, ws + wi)) ** 2
    pmf_map = np.abs(phase_matching_function(setup.crystal, ws, wi)) ** 2
    modulation_map = modulation_intensity_pseudonormalized(
        setup.schedule, setup.loss, setup.grid_s, setup.grid_i
    )
    decomposition = schmidt_decompose(state)

    outputs = []

    def matrix(name, m):
        _write_matrix_csv(out_dir / name, setup.grid_s, setup.grid_i, m)
        outputs.append(name)

    matrix("pump_intensity.csv", pump_map)
    matrix("phase_matching_intensity.csv", pmf_map)
    matrix("jsi_unmodulated.csv", intensity(unmod))
    matrix("modulation_pseudonormalized.csv", modulation_map)
    matrix("jsi.csv", intensity(state))
    matrix("jsa_real.csv", state.values.real)
    matrix("jsa_imag.csv", state.values.imag)

    coeffs = decomposition.coefficients
    _write_table_csv(
        out_dir / "schmidt_coefficients.csv",
        ["mode_index", "coefficient", "coefficient_sq", "cumulative_sq"],
        [np.arange(coeffs.size), coeffs, coeffs**2, np.cumsum(coeffs**2)],
    )
    outputs.append("schmidt_coefficients.csv")
    outputs.extend(_mode_files(out_dir, decomposition))

    manifest = _base_manifest("simulate", setup)
    manifest["schmidt_number"] = float(1.0 / np.sum(coeffs**4))
    manifest["overlap_with_unmodulated"] = intensity_overlap(state, unmod)
    return _finish_manifest(out_dir, manifest, outputs, started)


def run_project(setup: SimulationSetup, lambda_s_nm: float, out_dir) -> dict:
    """Export the heralded idler spectrum for a signal detection wavelength."""
    started = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    state = setup.assemble()
    projected = project_signal(state, lambda_s_nm * 1e-9)
    _write_table_csv(
        out_dir / "idler_projection.csv",
        ["wavelength_nm", "intensity"],
        [projected.grid.wavelengths * 1e9, np.abs(projected.values) ** 2],
    )

    manifest = _base_manifest("project", setup)
    manifest["lambda_s_nm"] = lambda_s_nm
    manifest["bin_width_rad_s"] = setup.grid_s.spacing
    manifest["bin_width_nm"] = setup.grid_s.spacing * (lambda_s_nm * 1e-9) ** 2 / (2 * np.pi * 299792458.0) * 1e9
    return _finish_manifest(out_dir, manifest, ["idler_projection.csv"], started)


def run_loss_sweep(setup: SimulationSetup, x_min: float, x_max: float, n_steps: int, out_dir) -> dict:
    """Sweep interface loss; export the metric table and selected mode sets."""
    started = time.perf_counter()
    if n_steps < 2:
        raise InvalidArgumentError("a loss sweep needs at least 2 steps")
    if not 0 <= x_min <= x_max:
        raise InvalidArgumentError("loss range must satisfy 0 <= min <= max")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    xs = np.linspace(x_min, x_max, n_steps)
    rows = loss_sweep(setup, xs)
    _write_table_csv(
        out_dir / "loss_sweep.csv",
        ["x_db", "schmidt_number", "overlap_with_lossless", "overlap_with_unmodulated"],
        [
            np.array([r.x_db for r in rows]),
            np.array([r.schmidt_number for r in rows]),
            np.array([r.overlap_with_lossless for r in rows]),
            np.array([r.overlap_with_unmodulated for r in rows]),
        ],
    )
    outputs = ["loss_sweep.csv"]

    dump_xs = [x for x in SWEEP_MODE_DUMP_X if x_min <= x <= x_max]
    for x in dump_xs:
        tag = f"_x{x:g}dB"
        lossy = setup.with_loss(x).assemble()
        name = f"jsi{tag}.csv"
        _write_matrix_csv(out_dir / name, setup.grid_s, setup.grid_i, intensity(lossy))
        outputs.append(name)
        decomposition = schmidt_decompose(lossy, rank_cutoff=2)
        outputs.extend(_mode_files(out_dir, decomposition, suffix=tag))

    manifest = _base_manifest("loss-sweep", setup)
    manifest["x_range_db"] = [x_min, x_max, n_steps]
    manifest["mode_dump_x_db"] = dump_xs
    return _finish_manifest(out_dir, manifest, outputs, started)


def run_verify(
    seed: int = 2024,
    n_points: int = 10000,
    n_taus: int = 10,
    grid_schedule=None,
    hde_schedule=None,
    stream=None,
) -> bool:
    """Check the delay-sum machinery against its closed forms.

    Every per-crystal phasor is compared with its analytic expression, and
    the full four-crystal sums are compared with the boxed closed forms,
    over randomized frequencies and base delays. Passes when every
    residual is below 1e-12 (relative to the coherent amplitude scale).
    """
    stream = stream or sys.stdout
    grid_schedule = grid_schedule or DelaySchedule.grid
    hde_schedule = hde_schedule or DelaySchedule.hde
    rng = np.random.default_rng(seed)
    omega = lambda n: rng.uniform(1.10e15, 1.35e15, size=n)
    taus = rng.uniform(0.05e-12, 0.40e-12, size=n_taus)

    checks = []
    per_crystal = phase_term_table()
    for family, build in (("grid", grid_schedule), ("hde", hde_schedule)):
        for mu in range(1, 5):
            worst = 0.0
            for tau in taus:
                ws, wi = omega(max(1, n_points // n_taus)), omega(max(1, n_points // n_taus))
                got = modulation_term(build(tau), mu, ws, wi)
                s_coef, i_coef = per_crystal[family][mu - 1]
                expected = np.exp(1j * (s_coef * ws + i_coef * wi) * tau)
                worst = max(worst, float(np.max(np.abs(got - expected))))
            checks.append((f"{family} crystal {mu} phasor", worst))

    closed = {"grid": grid_modulation_closed_form, "hde": hde_modulation_closed_form}
    for family, build in (("grid", grid_schedule), ("hde", hde_schedule)):
        worst = 0.0
        for tau in taus:
            ws, wi = omega(n_points), omega(n_points)
            got = modulation_sum(build(tau), LossModel(0.0), ws, wi)
            expected = closed[family](tau, ws, wi)
            worst = max(worst, float(np.max(np.abs(got - expected))) / 4.0)
        checks.append((f"{family} closed-form sum", worst))

    all_ok = True
    for name, residual in checks:
        ok = residual < VERIFY_TOLERANCE
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name:<24s} max residual {residual:.3e}", file=stream)
    print(f"verify: {'all checks passed' if all_ok else 'FAILURES detected'} "
          f"(tolerance {VERIFY_TOLERANCE:g}, seed {seed})", file=stream)
    return all_ok


def _parse_x_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidArgumentError("--x-range must look like min:max:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidArgumentError("--x-range must look like min:max:steps") from None
    return lo, hi, steps


def _setup_from_args(args) -> SimulationSetup:
    if args.config and args.preset:
        raise InvalidArgumentError("give either --preset or --config, not both")
    if args.config:
        return load_config(args.config)
    if args.preset:
        return preset(args.preset)
    raise InvalidArgumentError("one of --preset or --config is required")


def _add_source_args(sub):
    sub.add_argument("--preset", choices=["grid", "hde"], help="built-in configuration")
    sub.add_argument("--config", metavar="PATH", help="TOML configuration file")
    sub.add_argument("--out", metavar="DIR", default="out", help="output directory (default: ./out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlijsa",
        description="Four-crystal nonlinear-interferometer joint-spectral simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="assemble a state and export its datasets")
    _add_source_args(sim)

    proj = subs.add_parser("project", help="heralded idler spectrum at a signal wavelength")
    _add_source_args(proj)
    proj.add_argument("--lambda-s", type=float, required=True, metavar="NM",
                      help="signal detection wavelength in nm")

    sweep = subs.add_parser("loss-sweep", help="scan interface loss and export metrics")
    _add_source_args(sweep)
    sweep.add_argument("--x-range", default="0:20:41", metavar="MIN:MAX:STEPS",
                       help="loss scan in dB (default 0:20:41)")

    ver = subs.add_parser("verify", help="check delay sums against closed forms")
    ver.add_argument("--seed", type=int, default=2024, help="RNG seed for the randomized checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return 0 if run_verify(seed=args.seed) else 1
        setup = _setup_from_args(args)
        if args.command == "simulate":
            run_simulate(setup, args.out)
        elif args.command == "project":
            run_project(setup, args.lambda_s, args.out)
        elif args.command == "loss-sweep":
            lo, hi, steps = _parse_x_range(args.x_range)
            run_loss_sweep(setup, lo, hi, steps, args.out)
        return 0
    except (ConfigError, InvalidArgumentError, WavelengthRangeError, ContractError) as exc:
        key = f" (key: {exc.key})" if isinstance(exc, ConfigError) and exc.key else ""
        print(f"error: {exc}{key}", file=sys.stderr)
        return 2
    except (NumericError, DegenerateStateError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
