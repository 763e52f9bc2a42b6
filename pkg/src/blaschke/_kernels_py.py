"""Pure-numpy implementations of the hot iteration kernels.

Both kernels run the forward composition sequentially over generators while
vectorizing over the batch axis (boundary angles, disc grid points).  The
compiled extension in ``_kernels.pyx`` implements the same contracts; import
selection happens in ``kernels.py``.

Generator data arrives flattened: per-generator origin multiplicity and
rotation argument, plus packed per-zero arrays (modulus, argument / complex
value) addressed by an offsets array.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi
SINGULAR_TOL = 1e-12


def orbit_psi_checkpoints(m, rot_arg, zero_r, zero_theta, offsets, theta0, checkpoints):
    """Iterate boundary angles, accumulating the unreduced arg displacement.

    Per step the displacement of angle t under generator n is

        (m_n - 1) t + rot_arg_n - 2 sum_l atan(beta_l / tan((t - theta_l)/2)),

    beta_l = (1-r_l)/(1+r_l); the new reduced angle adds t back.  Returns, at
    each checkpoint, the accumulated displacement (psi), the max-min range of
    psi over the steps since the previous checkpoint (osc), and the reduced
    angle.

    Raises ValueError on an exact singular hit (angle equals a zero argument
    to within 1e-12) identifying the step and node; callers offset their nodes.
    """
    m = np.asarray(m, dtype=np.int64)
    rot_arg = np.asarray(rot_arg, dtype=float)
    zero_r = np.asarray(zero_r, dtype=float)
    zero_theta = np.asarray(zero_theta, dtype=float)
    offsets = np.asarray(offsets, dtype=np.int64)
    theta = np.remainder(np.asarray(theta0, dtype=float), TWO_PI).copy()
    checkpoints = np.asarray(checkpoints, dtype=np.int64)

    n_steps = int(checkpoints[-1]) if checkpoints.size else 0
    if n_steps > len(m):
        raise ValueError("checkpoint beyond the generator sequence")
    if checkpoints.size and (checkpoints[0] < 1 or np.any(np.diff(checkpoints) <= 0)):
        raise ValueError("checkpoints must be strictly increasing and >= 1")

    beta = (1.0 - zero_r) / (1.0 + zero_r)
    k = theta.shape[0]
    psi = np.zeros(k)
    win_min = np.zeros(k)
    win_max = np.zeros(k)
    psi_cp = np.empty((checkpoints.size, k))
    osc_cp = np.empty((checkpoints.size, k))
    theta_cp = np.empty((checkpoints.size, k))

    cp_idx = 0
    for n in range(n_steps):
        delta = np.full(k, rot_arg[n])
        if m[n] != 1:
            delta = delta + (m[n] - 1) * theta
        for l in range(offsets[n], offsets[n + 1]):
            d = theta - zero_theta[l]
            d = d - TWO_PI * np.floor((d + np.pi) / TWO_PI)
            if np.any(np.abs(d) < SINGULAR_TOL):
                node = int(np.argmax(np.abs(d) < SINGULAR_TOL))
                raise ValueError(f"singular boundary angle at step {n + 1}, node {node}")
            with np.errstate(divide="ignore"):
                delta = delta - 2.0 * np.arctan(beta[l] / np.tan(0.5 * d))
        psi = psi + delta
        theta = np.remainder(theta + delta, TWO_PI)
        np.minimum(win_min, psi, out=win_min)
        np.maximum(win_max, psi, out=win_max)
        if n + 1 == checkpoints[cp_idx]:
            psi_cp[cp_idx] = psi
            osc_cp[cp_idx] = win_max - win_min
            theta_cp[cp_idx] = theta
            win_min = psi.copy()
            win_max = psi.copy()
            cp_idx += 1
    return psi_cp, osc_cp, theta_cp


def disc_forward_checkpoints(m, rot, zeros, offsets, z0, checkpoints):
    """Iterate disc points through the composition, recording checkpoint values.

    Returns (values at each checkpoint [ncp, npts], per-step sup gauge at each
    checkpoint [ncp]) where the gauge at checkpoint c is
    max_i |B_c(z_i) - B_{c-1}(z_i)|.
    """
    m = np.asarray(m, dtype=np.int64)
    rot = np.asarray(rot, dtype=complex)
    zeros = np.asarray(zeros, dtype=complex)
    offsets = np.asarray(offsets, dtype=np.int64)
    z = np.asarray(z0, dtype=complex).copy()
    checkpoints = np.asarray(checkpoints, dtype=np.int64)

    n_steps = int(checkpoints[-1]) if checkpoints.size else 0
    if n_steps > len(m):
        raise ValueError("checkpoint beyond the generator sequence")
    if checkpoints.size and (checkpoints[0] < 1 or np.any(np.diff(checkpoints) <= 0)):
        raise ValueError("checkpoints must be strictly increasing and >= 1")

    u = np.abs(zeros) / zeros
    zc = np.conj(zeros)
    vals_cp = np.empty((checkpoints.size,) + z.shape, dtype=complex)
    gauge_cp = np.empty(checkpoints.size)

    cp_idx = 0
    for n in range(n_steps):
        val = np.full(z.shape, rot[n], dtype=complex)
        if m[n] == 1:
            val = val * z
        elif m[n] > 1:
            val = val * z ** int(m[n])
        for l in range(offsets[n], offsets[n + 1]):
            val = val * (u[l] * (zeros[l] - z) / (1.0 - zc[l] * z))
        if n + 1 == checkpoints[cp_idx]:
            gauge_cp[cp_idx] = float(np.max(np.abs(val - z)))
            vals_cp[cp_idx] = val
            cp_idx += 1
        z = val
    return vals_cp, gauge_cp
