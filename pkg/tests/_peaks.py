"""Peak-extraction helpers used by the structural tests.

Kept independent of the package internals: everything works on plain
intensity arrays so these measurements stay a separate route from the
code under test.
"""

import numpy as np


def local_maxima_2d(intensity: np.ndarray, rel_threshold: float) -> np.ndarray:
    """Boolean mask of interior 8-neighbourhood maxima above a relative height.

    Ties along a two-cell plateau keep exactly one member (strict on the
    north/west side, non-strict on the south/east side).
    """
    z = intensity
    core = z[1:-1, 1:-1]
    mask = (
        (core > z[:-2, 1:-1])
        & (core >= z[2:, 1:-1])
        & (core > z[1:-1, :-2])
        & (core >= z[1:-1, 2:])
        & (core > z[:-2, :-2])
        & (core > z[:-2, 2:])
        & (core >= z[2:, :-2])
        & (core >= z[2:, 2:])
        & (core > rel_threshold * z.max())
    )
    out = np.zeros_like(z, dtype=bool)
    out[1:-1, 1:-1] = mask
    return out


def cluster_positions(positions: np.ndarray, heights: np.ndarray, radius: float) -> np.ndarray:
    """Collapse nearby 1-D positions, keeping the highest member of each group."""
    order = np.argsort(positions)
    positions = positions[order]
    heights = heights[order]
    reps = []
    start = 0
    for k in range(1, len(positions) + 1):
        if k == len(positions) or positions[k] - positions[k - 1] > radius:
            group = slice(start, k)
            reps.append(positions[group][np.argmax(heights[group])])
            start = k
    return np.asarray(reps)


def antidiagonal_peak_positions(omegas_s, omegas_i, intensity, rel_threshold=0.2, cluster_cells=3.0):
    """Positions of JSI peaks along the difference coordinate (w_s - w_i)/sqrt(2).

    Peaks from every lattice row project onto a single comb in this
    coordinate; nearby projections are merged within ``cluster_cells``
    sample spacings.
    """
    mask = local_maxima_2d(intensity, rel_threshold)
    ii, jj = np.nonzero(mask)
    if ii.size == 0:
        return np.array([])
    v = (omegas_s[ii] - omegas_i[jj]) / np.sqrt(2.0)
    cell_v = (omegas_s[1] - omegas_s[0]) / np.sqrt(2.0)
    return cluster_positions(v, intensity[ii, jj], cluster_cells * cell_v)


def peak_indices_1d(y: np.ndarray, rel_threshold: float) -> np.ndarray:
    """Interior strict local maxima of a 1-D profile above a relative height."""
    mid = y[1:-1]
    mask = (mid > y[:-2]) & (mid >= y[2:]) & (mid > rel_threshold * y.max())
    return np.nonzero(mask)[0] + 1
