# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of ``_core_py``: tight C loops over the grid cells.

Kept formula-identical with the NumPy fallback so the two backends agree
to rounding error; equivalence is enforced by tests.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, sin, sqrt

cnp.import_array()

DEF TWO_PI = 6.283185307179586476925286766559
DEF C_LIGHT = 299792458.0


cdef inline double _block_n2(const double[::1] coeff, Py_ssize_t offset, double l2) nogil:
    cdef double n2 = coeff[offset] + coeff[offset + 1] * l2
    cdef Py_ssize_t n_poles = <Py_ssize_t> coeff[offset + 2]
    cdef Py_ssize_t j, base
    cdef double num
    for j in range(n_poles):
        base = offset + 3 + 3 * j
        num = coeff[base] * (l2 if coeff[base + 2] == 2.0 else 1.0)
        n2 += num / (l2 - coeff[base + 1])
    return n2


cdef inline double _axis_index(const double[::1] coeff, double lam_um) nogil:
    cdef double l2 = lam_um * lam_um
    cdef double inv = coeff[0] / _block_n2(coeff, 2, l2) + coeff[1] / _block_n2(coeff, 17, l2)
    return 1.0 / sqrt(inv)


cdef inline double _sinc(double x) nogil:
    if fabs(x) < 1e-9:
        return 1.0 - x * x / 6.0
    return sin(x) / x


def modulation_matrix(omega_s, omega_i, tau_p, tau_s, tau_i, weights):
    """See ``_core_py.modulation_matrix``."""
    cdef double[::1] ws = np.ascontiguousarray(omega_s, dtype=np.float64)
    cdef double[::1] wi = np.ascontiguousarray(omega_i, dtype=np.float64)
    cdef double[::1] tp = np.ascontiguousarray(tau_p, dtype=np.float64)
    cdef double[::1] ts = np.ascontiguousarray(tau_s, dtype=np.float64)
    cdef double[::1] ti = np.ascontiguousarray(tau_i, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)

    cdef Py_ssize_t n_cry = tp.shape[0], ns = ws.shape[0], ni = wi.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((ns, ni), dtype=np.complex128)
    cdef double complex[:, ::1] o = out

    a_arr = np.empty(n_cry)
    b_arr = np.empty(n_cry)
    cdef double[::1] a = a_arr, b = b_arr
    cdef Py_ssize_t mu, m, i, j
    cdef double pump_cum = 0.0, suf
    for mu in range(n_cry):
        pump_cum += tp[mu]
        suf = 0.0
        for m in range(mu, n_cry):
            suf += ts[m]
        a[mu] = pump_cum + suf
        suf = 0.0
        for m in range(mu, n_cry):
            suf += ti[m]
        b[mu] = pump_cum + suf

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] ps = np.empty((n_cry, ns), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] pi = np.empty((n_cry, ni), dtype=np.complex128)
    cdef double complex[:, ::1] psv = ps, piv = pi
    cdef double ph
    with nogil:
        for mu in range(n_cry):
            for i in range(ns):
                ph = ws[i] * a[mu]
                psv[mu, i] = cos(ph) + 1j * sin(ph)
            for j in range(ni):
                ph = wi[j] * b[mu]
                piv[mu, j] = cos(ph) + 1j * sin(ph)
        for i in range(ns):
            for j in range(ni):
                for mu in range(n_cry):
                    o[i, j] = o[i, j] + w[mu] * psv[mu, i] * piv[mu, j]
    return out


def amplitude_matrix(
    omega_s,
    omega_i,
    double pump_omega0,
    double pump_sigma_omega,
    double length,
    double grating_k,
    coeff_p,
    coeff_s,
    coeff_i,
    tau_p,
    tau_s,
    tau_i,
    weights,
):
    """See ``_core_py.amplitude_matrix``."""
    cdef double[::1] ws = np.ascontiguousarray(omega_s, dtype=np.float64)
    cdef double[::1] wi = np.ascontiguousarray(omega_i, dtype=np.float64)
    cdef double[::1] cp = np.ascontiguousarray(coeff_p, dtype=np.float64)
    cdef double[::1] cs = np.ascontiguousarray(coeff_s, dtype=np.float64)
    cdef double[::1] ci = np.ascontiguousarray(coeff_i, dtype=np.float64)

    cdef Py_ssize_t ns = ws.shape[0], ni = wi.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] beta = modulation_matrix(
        omega_s, omega_i, tau_p, tau_s, tau_i, weights
    )
    cdef double complex[:, ::1] out = beta  # modulated in place

    k_s_arr = np.empty(ns)
    k_i_arr = np.empty(ni)
    cdef double[::1] k_s = k_s_arr, k_i = k_i_arr
    cdef Py_ssize_t i, j
    cdef double lam_um, wp, x, d, envelope, half_l = length / 2.0
    cdef double complex pmf
    with nogil:
        for i in range(ns):
            lam_um = TWO_PI * C_LIGHT / ws[i] * 1e6
            k_s[i] = _axis_index(cs, lam_um) * ws[i] / C_LIGHT
        for j in range(ni):
            lam_um = TWO_PI * C_LIGHT / wi[j] * 1e6
            k_i[j] = _axis_index(ci, lam_um) * wi[j] / C_LIGHT
        for i in range(ns):
            for j in range(ni):
                wp = ws[i] + wi[j]
                lam_um = TWO_PI * C_LIGHT / wp * 1e6
                x = (k_s[i] + k_i[j] - _axis_index(cp, lam_um) * wp / C_LIGHT - grating_k) * half_l
                pmf = _sinc(x) * (cos(x) + 1j * sin(x))
                d = (wp - pump_omega0) / (2.0 * pump_sigma_omega)
                envelope = exp(-d * d)
                out[i, j] = out[i, j] * pmf * envelope
    return beta
