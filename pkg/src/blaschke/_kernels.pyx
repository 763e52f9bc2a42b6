# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled iteration kernels; contracts match _kernels_py exactly."""

import numpy as np

from libc.math cimport atan, floor, fmax, fmin, tan, M_PI

cimport cython

cdef double TWO_PI = 2.0 * M_PI
cdef double SINGULAR_TOL = 1e-12


def orbit_psi_checkpoints(m, rot_arg, zero_r, zero_theta, offsets, theta0, checkpoints):
    cdef long[::1] m_v = np.ascontiguousarray(m, dtype=np.int64)
    cdef double[::1] rot_v = np.ascontiguousarray(rot_arg, dtype=np.float64)
    cdef double[::1] zr_v = np.ascontiguousarray(zero_r, dtype=np.float64)
    cdef double[::1] zt_v = np.ascontiguousarray(zero_theta, dtype=np.float64)
    cdef long[::1] off_v = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef long[::1] cp_v = np.ascontiguousarray(checkpoints, dtype=np.int64)

    theta_arr = np.remainder(np.asarray(theta0, dtype=np.float64), TWO_PI).copy()
    cdef double[::1] theta = theta_arr
    cdef Py_ssize_t k = theta.shape[0]
    cdef Py_ssize_t ncp = cp_v.shape[0]
    cdef Py_ssize_t n_steps = cp_v[ncp - 1] if ncp else 0

    if n_steps > m_v.shape[0]:
        raise ValueError("checkpoint beyond the generator sequence")
    cdef Py_ssize_t j
    if ncp:
        if cp_v[0] < 1:
            raise ValueError("checkpoints must be strictly increasing and >= 1")
        for j in range(1, ncp):
            if cp_v[j] <= cp_v[j - 1]:
                raise ValueError("checkpoints must be strictly increasing and >= 1")

    beta_arr = (1.0 - np.asarray(zero_r, dtype=np.float64)) / (1.0 + np.asarray(zero_r, dtype=np.float64))
    cdef double[::1] beta = np.ascontiguousarray(beta_arr)

    psi_arr = np.zeros(k)
    wmin_arr = np.zeros(k)
    wmax_arr = np.zeros(k)
    psi_cp_arr = np.empty((ncp, k))
    osc_cp_arr = np.empty((ncp, k))
    theta_cp_arr = np.empty((ncp, k))
    cdef double[::1] psi = psi_arr
    cdef double[::1] wmin = wmin_arr
    cdef double[::1] wmax = wmax_arr
    cdef double[:, ::1] psi_cp = psi_cp_arr
    cdef double[:, ::1] osc_cp = osc_cp_arr
    cdef double[:, ::1] theta_cp = theta_cp_arr

    cdef Py_ssize_t n, i, l, cp_idx = 0
    cdef long sing_step = -1, sing_node = -1
    cdef double d, delta, t, mn

    for n in range(n_steps):
        mn = <double> m_v[n]
        for i in range(k):
            delta = rot_v[n] + (mn - 1.0) * theta[i]
            for l in range(off_v[n], off_v[n + 1]):
                d = theta[i] - zt_v[l]
                d = d - TWO_PI * floor((d + M_PI) / TWO_PI)
                if d < SINGULAR_TOL and d > -SINGULAR_TOL:
                    sing_step = n + 1
                    sing_node = i
                    break
                t = tan(0.5 * d)
                delta = delta - 2.0 * atan(beta[l] / t)
            if sing_step >= 0:
                break
            psi[i] = psi[i] + delta
            theta[i] = theta[i] + delta
            theta[i] = theta[i] - TWO_PI * floor(theta[i] / TWO_PI)
            wmin[i] = fmin(wmin[i], psi[i])
            wmax[i] = fmax(wmax[i], psi[i])
        if sing_step >= 0:
            raise ValueError(f"singular boundary angle at step {sing_step}, node {sing_node}")
        if n + 1 == cp_v[cp_idx]:
            for i in range(k):
                psi_cp[cp_idx, i] = psi[i]
                osc_cp[cp_idx, i] = wmax[i] - wmin[i]
                theta_cp[cp_idx, i] = theta[i]
                wmin[i] = psi[i]
                wmax[i] = psi[i]
            cp_idx += 1
    return psi_cp_arr, osc_cp_arr, theta_cp_arr


def disc_forward_checkpoints(m, rot, zeros, offsets, z0, checkpoints):
    cdef long[::1] m_v = np.ascontiguousarray(m, dtype=np.int64)
    cdef double complex[::1] rot_v = np.ascontiguousarray(rot, dtype=np.complex128)
    cdef double complex[::1] zero_v = np.ascontiguousarray(zeros, dtype=np.complex128)
    cdef long[::1] off_v = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef long[::1] cp_v = np.ascontiguousarray(checkpoints, dtype=np.int64)

    z_arr = np.asarray(z0, dtype=np.complex128).copy()
    cdef double complex[::1] z = z_arr.ravel()
    cdef Py_ssize_t p = z.shape[0]
    cdef Py_ssize_t ncp = cp_v.shape[0]
    cdef Py_ssize_t n_steps = cp_v[ncp - 1] if ncp else 0

    if n_steps > m_v.shape[0]:
        raise ValueError("checkpoint beyond the generator sequence")
    cdef Py_ssize_t j
    if ncp:
        if cp_v[0] < 1:
            raise ValueError("checkpoints must be strictly increasing and >= 1")
        for j in range(1, ncp):
            if cp_v[j] <= cp_v[j - 1]:
                raise ValueError("checkpoints must be strictly increasing and >= 1")

    u_arr = np.abs(np.asarray(zeros, dtype=np.complex128)) / np.asarray(zeros, dtype=np.complex128) if len(zeros) else np.zeros(0, dtype=np.complex128)
    cdef double complex[::1] u = np.ascontiguousarray(u_arr, dtype=np.complex128)

    vals_cp_arr = np.empty((ncp, p), dtype=np.complex128)
    gauge_cp_arr = np.empty(ncp)
    cdef double complex[:, ::1] vals_cp = vals_cp_arr
    cdef double[::1] gauge_cp = gauge_cp_arr

    cdef Py_ssize_t n, i, l, q, cp_idx = 0
    cdef double complex val, zi
    cdef double gauge, diff
    cdef long mn

    for n in range(n_steps):
        mn = m_v[n]
        gauge = 0.0
        for i in range(p):
            zi = z[i]
            val = rot_v[n]
            for q in range(mn):
                val = val * zi
            for l in range(off_v[n], off_v[n + 1]):
                val = val * (u[l] * (zero_v[l] - zi) / (1.0 - zero_v[l].conjugate() * zi))
            if n + 1 == cp_v[cp_idx]:
                diff = abs(val - zi)
                if diff > gauge:
                    gauge = diff
                vals_cp[cp_idx, i] = val
            z[i] = val
        if n + 1 == cp_v[cp_idx]:
            gauge_cp[cp_idx] = gauge
            cp_idx += 1
    return vals_cp_arr.reshape((ncp,) + z_arr.shape), gauge_cp_arr
