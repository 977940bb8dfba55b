"""NumPy implementation of the hot kernels.

This is the fallback selected when the compiled extension is unavailable;
both implementations must produce the same numbers. The per-crystal phase
factorizes into signal-only and idler-only exponentials (pump delay sums
fold into both), so a modulation matrix is a short sum of outer products.
"""

import numpy as np

from .spectral import C, TWO_PI


def _delay_sums(tau_p, tau_s, tau_i):
    """Per-crystal signal/idler phase-delay coefficients.

    For crystal mu (0-based): a[mu] = sum(tau_p[:mu+1]) + sum(tau_s[mu:]),
    b[mu] likewise with the idler delays.
    """
    tau_p = np.asarray(tau_p, dtype=float)
    tau_s = np.asarray(tau_s, dtype=float)
    tau_i = np.asarray(tau_i, dtype=float)
    pump_cum = np.cumsum(tau_p)
    s_suffix = np.cumsum(tau_s[::-1])[::-1]
    i_suffix = np.cumsum(tau_i[::-1])[::-1]
    return pump_cum + s_suffix, pump_cum + i_suffix


def modulation_matrix(omega_s, omega_i, tau_p, tau_s, tau_i, weights):
    """Loss-weighted sum of per-crystal modulation phasors on a grid pair.

    Args:
        omega_s, omega_i: 1-D angular-frequency samples (rad/s).
        tau_p, tau_s, tau_i: per-crystal delays (s), equal lengths.
        weights: per-crystal real amplitude weights.

    Returns:
        Complex matrix of shape ``(len(omega_s), len(omega_i))``.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    a, b = _delay_sums(tau_p, tau_s, tau_i)
    weights = np.asarray(weights, dtype=float)
    out = np.zeros((omega_s.size, omega_i.size), dtype=np.complex128)
    for w, a_mu, b_mu in zip(weights, a, b):
        out += w * np.outer(np.exp(1j * omega_s * a_mu), np.exp(1j * omega_i * b_mu))
    return out


def _block_n2(coeff, offset, l2):
    n2 = coeff[offset] + coeff[offset + 1] * l2
    n_poles = int(coeff[offset + 2])
    for j in range(n_poles):
        base = offset + 3 + 3 * j
        b, c, p = coeff[base], coeff[base + 1], coeff[base + 2]
        n2 = n2 + b * (l2 if p == 2.0 else 1.0) / (l2 - c)
    return n2


def _axis_index(coeff, lam_um):
    """Refractive index from a packed 32-float axis block (angle-mix form)."""
    l2 = lam_um * lam_um
    inv = coeff[0] / _block_n2(coeff, 2, l2) + coeff[1] / _block_n2(coeff, 17, l2)
    return inv ** -0.5


def amplitude_matrix(
    omega_s,
    omega_i,
    pump_omega0,
    pump_sigma_omega,
    length,
    grating_k,
    coeff_p,
    coeff_s,
    coeff_i,
    tau_p,
    tau_s,
    tau_i,
    weights,
):
    """Unnormalized modulated joint amplitude over a grid pair.

    Elementwise product of the Gaussian pump envelope, the crystal
    phase-matching factor ``sinc(dk*L/2)*exp(i*dk*L/2)`` and the weighted
    modulation sum. ``grating_k`` is the signed grating wavevector
    (0 for non-poled crystals); ``coeff_*`` are packed axis blocks from
    ``dispersion.pack_axis_coefficients``.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)

    lam_s_um = TWO_PI * C / omega_s * 1e6
    lam_i_um = TWO_PI * C / omega_i * 1e6
    k_s = _axis_index(coeff_s, lam_s_um) * omega_s / C
    k_i = _axis_index(coeff_i, lam_i_um) * omega_i / C

    omega_p = omega_s[:, None] + omega_i[None, :]
    lam_p_um = TWO_PI * C / omega_p * 1e6
    k_p = _axis_index(coeff_p, lam_p_um) * omega_p / C

    x = (k_s[:, None] + k_i[None, :] - k_p - grating_k) * (length / 2.0)
    pmf = np.sinc(x / np.pi) * np.exp(1j * x)

    d = (omega_p - pump_omega0) / (2.0 * pump_sigma_omega)
    pump = np.exp(-d * d)

    return pump * pmf * modulation_matrix(omega_s, omega_i, tau_p, tau_s, tau_i, weights)
