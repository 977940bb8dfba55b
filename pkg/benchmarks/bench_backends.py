"""Timing comparison of the compiled kernel against the NumPy fallback.

Usage: python benchmarks/bench_backends.py [--points N] [--repeats R]

Times the two hot kernels (modulation matrix and full amplitude assembly)
for both presets on an N x N grid, plus the downstream SVD for scale.
"""

import argparse
import time

import numpy as np

from nlijsa import LossModel, make_grid, preset
from nlijsa.backend import available_backends
from nlijsa.dispersion import pack_axis_coefficients


def timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(sorted(backends))}   grid: {args.points}^2")
    header = f"{'case':<34s}" + "".join(f"{name:>14s}" for name in sorted(backends))
    print(header)
    print("-" * len(header))

    for kind in ("grid", "hde"):
        setup = preset(kind)
        span = 80e-9 if kind == "grid" else 120e-9
        grid = make_grid(1550e-9, span, args.points)
        weights = LossModel(0.0).weights(4)
        crystal = setup.crystal
        grating = 0.0
        if crystal.poling_period is not None:
            grating = crystal.grating_sign * 2 * np.pi / crystal.poling_period
        amp_args = (
            grid.omegas, grid.omegas,
            setup.pump.center_omega, setup.pump.sigma_omega,
            crystal.length, grating,
            pack_axis_coefficients(crystal, "pump"),
            pack_axis_coefficients(crystal, "signal"),
            pack_axis_coefficients(crystal, "idler"),
            setup.schedule.tau_p, setup.schedule.tau_s, setup.schedule.tau_i,
            weights,
        )
        mod_args = (grid.omegas, grid.omegas, setup.schedule.tau_p,
                    setup.schedule.tau_s, setup.schedule.tau_i, weights)

        for label, call_args, attr in (
            (f"{kind}: modulation matrix", mod_args, "modulation_matrix"),
            (f"{kind}: amplitude assembly", amp_args, "amplitude_matrix"),
        ):
            times = []
            for name in sorted(backends):
                fn = getattr(backends[name], attr)
                times.append(timeit(lambda: fn(*call_args), args.repeats))
            print(f"{label:<34s}" + "".join(f"{t * 1e3:>12.1f}ms" for t in times))

    reference = backends[sorted(backends)[0]].amplitude_matrix(*amp_args)
    svd_time = timeit(lambda: np.linalg.svd(reference, compute_uv=False), max(1, args.repeats // 2))
    print(f"{'(svd of one assembled state)':<34s}{svd_time * 1e3:>12.1f}ms")


if __name__ == "__main__":
    main()
