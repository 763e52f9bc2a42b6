"""Boundary circle-map machinery for Blaschke products fixing the origin.

The boundary extension of b(z) = rotation * z * prod_i f_{z_i}(z) moves the
angle theta by a closed-form displacement

    shift(theta) = arg(rotation) - 2 sum_i atan( (1-|z_i|) / ((1+|z_i|) tan((theta - theta_i)/2)) ),

with theta_i = arg z_i and principal-branch arctangents.  Summing per-factor
arctan terms (each in (-pi, pi)) instead of taking args of evaluated values
sidesteps branch-cut unwrapping entirely; every accumulated-arg quantity here
is built from these shifts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from .composition import CompositionSequence
from .core import BlaschkeProduct, product_eval, reduce_angle
from .diagnostics import classification_sum, convergence_verdict
from .errors import SingularAngleError, UsageError
from .kernels import generator_arrays, orbit_psi_checkpoints

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
SINGULAR_TOL = 1e-12

# per-zero constant in the L1 estimate: (2 + log 2 pi^2) (1-|z|) + 2 (1-|z|) log 1/(1-|z|)
RYBKIN_CONSTANT = 2.0 + np.log(2.0 * np.pi**2)


class PsiSample(NamedTuple):
    """One orbit step: reduced angle and unreduced accumulated arg displacement."""

    theta: float
    psi_arg: float


def _shift_terms(zeros, theta):
    """Arctan displacement sum for the nonzero zeros at (array) angles theta."""
    zeros = np.asarray(zeros, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    if zeros.size == 0:
        return np.zeros(theta.shape)
    r = np.abs(zeros).reshape((-1,) + (1,) * theta.ndim)
    tz = np.remainder(np.angle(zeros), TWO_PI).reshape((-1,) + (1,) * theta.ndim)
    d = theta - tz
    d = d - TWO_PI * np.floor((d + np.pi) / TWO_PI)
    if np.any(np.abs(d) < SINGULAR_TOL):
        raise SingularAngleError("angle coincides with a zero argument")
    with np.errstate(divide="ignore"):
        return np.sum(-2.0 * np.arctan((1.0 - r) / ((1.0 + r) * np.tan(0.5 * d))), axis=0)


def boundary_arg_shift(b: BlaschkeProduct, theta):
    """Signed arg displacement of the boundary map of b at angle theta.

    Requires origin multiplicity 1.  The rotation argument is included, so
    e^{i (theta + shift)} = b(e^{i theta}) exactly.  For a degree-(d+1)
    product the result lies in (-pi d - pi, pi d + pi).
    """
    if b.origin_multiplicity != 1:
        raise UsageError("boundary_arg_shift requires origin multiplicity 1")
    out = _shift_terms(b.zero_array(), theta) + np.angle(b.rotation)
    return float(out) if np.ndim(out) == 0 else out


def boundary_map_angles(P: BlaschkeProduct, theta, *, nudge=1e-9):
    """Push angles through the boundary map; singular hits are nudged by `nudge`.

    Returns reduced angles of P(e^{i theta}).  Used for measure-preservation
    sampling where an exact zero-argument hit is statistically immaterial.
    """
    if not P.fixes_origin:
        raise UsageError("boundary_map_angles requires a product fixing the origin")
    theta = np.asarray(theta, dtype=float)
    zeros = P.zero_array()
    if zeros.size:
        tz = np.remainder(np.angle(zeros), TWO_PI)
        for t in tz:
            d = theta - t
            d = d - TWO_PI * np.floor((d + np.pi) / TWO_PI)
            bad = np.abs(d) < SINGULAR_TOL
            if np.any(bad):
                theta = np.where(bad, theta + nudge, theta)
    new = P.origin_multiplicity * theta + _shift_terms(zeros, theta) + np.angle(P.rotation)
    return reduce_angle(new)


def circle_orbit(seq: CompositionSequence, theta0: float, n: int):
    """Forward boundary orbit of theta0 through b_1..b_n, one PsiSample per step.

    psi_arg accumulates the per-step displacements without reduction; for
    generators with origin multiplicity 1 it equals the unreduced arg of
    B_n(e^{i theta0}) / e^{i theta0}.
    """
    if n > len(seq.generators):
        raise UsageError("orbit length exceeds the generator sequence")
    theta = float(reduce_angle(theta0))
    psi = 0.0
    out = []
    for step, g in enumerate(seq.generators[:n], start=1):
        try:
            delta = (
                (g.origin_multiplicity - 1) * theta
                + _shift_terms(g.zero_array(), theta)
                + np.angle(g.rotation)
            )
        except SingularAngleError as exc:
            raise SingularAngleError(
                f"orbit hit a zero argument at step {step}", step=step
            ) from exc
        psi += float(delta)
        theta = float(reduce_angle(theta + delta))
        out.append(PsiSample(theta=theta, psi_arg=psi))
    return out


def orbit_series(seq: CompositionSequence, theta0: float, n: int):
    """Per-step orbit rows (n, theta, psi_arg, shift) for CSV emission."""
    samples = circle_orbit(seq, theta0, n)
    rows = []
    prev = 0.0
    for k, s in enumerate(samples, start=1):
        rows.append((k, s.theta, s.psi_arg, s.psi_arg - prev))
        prev = s.psi_arg
    return rows


def _orbit_psi_at(seq, theta_nodes, checkpoints):
    """Accumulated psi at the given step checkpoints for a batch of angles.

    Nodes whose orbit hits a zero argument exactly are offset by half the node
    spacing (then quarter, ...) and rerun; the offset count is returned.
    """
    arrays = generator_arrays(seq)
    theta_nodes = np.array(theta_nodes, dtype=float)
    spacing = TWO_PI / max(len(theta_nodes), 1)
    offsets_applied = 0
    for attempt in range(6):
        try:
            psi_cp, _, _ = orbit_psi_checkpoints(
                arrays.m,
                arrays.rot_arg,
                arrays.zero_r,
                arrays.zero_theta,
                arrays.offsets,
                theta_nodes,
                np.asarray(checkpoints, dtype=np.int64),
            )
            return psi_cp, offsets_applied
        except ValueError as exc:
            msg = str(exc)
            if "singular" not in msg:
                raise
            node = int(msg.rsplit("node", 1)[1])
            theta_nodes[node] += spacing / 2.0 ** (attempt + 1)
            offsets_applied += 1
            logger.debug("quadrature node %d offset off a zero argument (%s)", node, msg)
    raise SingularAngleError("could not displace quadrature node off singularities")


def psi_l1_distance(seq: CompositionSequence, n: int, m: int, nodes: int = 4096) -> float:
    """Midpoint-quadrature estimate of (1/2pi) int |psi_{n+m} - psi_n| dtheta.

    psi_k(e^{i theta}) = B_k(e^{i theta}) / e^{i theta}; the integrand is the
    chord distance |e^{i a} - e^{i b}| of the accumulated args.  Midpoint
    nodes (powers of two recommended) avoid landing on the integrable jumps.
    """
    if m < 0 or n < 0:
        raise UsageError("n and m must be nonnegative")
    if m == 0:
        return 0.0
    if n + m > len(seq.generators):
        raise UsageError("n + m exceeds the generator sequence")
    theta_nodes = (np.arange(nodes) + 0.5) * (TWO_PI / nodes)
    checkpoints = [n, n + m] if n >= 1 else [n + m]
    psi_cp, _ = _orbit_psi_at(seq, theta_nodes, checkpoints)
    delta = psi_cp[-1] - (psi_cp[0] if n >= 1 else 0.0)
    chord = np.abs(np.exp(1j * delta) - 1.0)
    return float(np.mean(chord))


def rybkin_bound(zeros) -> float:
    """Per-zero L1 displacement budget: sum of
    (2 + log 2 pi^2)(1-|z|) + 2(1-|z|) log(1/(1-|z|))."""
    zeros = np.asarray(zeros, dtype=complex)
    if zeros.size == 0:
        return 0.0
    t = 1.0 - np.abs(zeros)
    if np.any(t <= 0):
        raise UsageError("zeros must lie strictly inside the disc")
    return float(np.sum(RYBKIN_CONSTANT * t + 2.0 * t * np.log(1.0 / t)))


def rybkin_bound_span(seq: CompositionSequence, n: int, m: int) -> float:
    """Per-zero bound over the zeros of generators n+1..n+m."""
    zs = [z for g in seq.generators[n : n + m] for z in g.zeros]
    return rybkin_bound(zs)


def rybkin_bound_smallest_zero(seq: CompositionSequence, n: int, m: int, cap=None) -> float:
    """Smallest-zero variant: max generator degree-offset M times the budget of
    the smallest nonzero zero z*_{n+i} of each generator in the span."""
    gens = seq.generators[n : n + m]
    if not gens:
        return 0.0
    M = max(len(g.zeros) for g in gens) if cap is None else cap
    total = 0.0
    for g in gens:
        if not g.zeros:
            continue
        t = 1.0 - min(abs(z) for z in g.zeros)
        total += RYBKIN_CONSTANT * t + 2.0 * t * np.log(1.0 / t)
    return M * total


def smallest_nonzero_zero(P: BlaschkeProduct):
    """|z*|, the modulus of the smallest nonzero zero (None when there is none)."""
    return min(abs(z) for z in P.zeros) if P.zeros else None


def measure_preservation_test(P: BlaschkeProduct, sample_count=10**6, seed=None, grid=False):
    """Kolmogorov-Smirnov distance between the pushforward of uniform angles
    under the boundary map and the uniform distribution on [0, 2pi).

    ``grid=True`` uses an exact uniform grid (deterministic); otherwise a
    seeded generator draws the samples.
    """
    if sample_count < 10**4:
        raise UsageError("sample_count must be at least 1e4 for a meaningful statistic")
    if grid:
        theta = np.arange(sample_count) * (TWO_PI / sample_count)
    else:
        rng = np.random.default_rng(seed)
        theta = rng.uniform(0.0, TWO_PI, sample_count)
    pushed = boundary_map_angles(P, theta)
    return float(stats.kstest(pushed / TWO_PI, "uniform").statistic)


@dataclass
class IdentityConvergence:
    """Per-angle chord distances |b_n(e^{i theta})/e^{i theta} - 1| for n <= N."""

    thetas: np.ndarray
    distances: np.ndarray  # shape (N, len(thetas))
    hypothesis_ok: bool

    def max_at(self, n: int) -> float:
        return float(self.distances[n - 1].max())

    def below(self, tol: float) -> bool:
        return self.max_at(self.distances.shape[0]) < tol


def identity_convergence_check(seq: CompositionSequence, thetas, N: int) -> IdentityConvergence:
    """Check that the generators' boundary maps approach the identity.

    The guarantee needs the contraction sum sum (1 - |b_n'(0)|) to converge;
    a heuristic tail flag is attached (values are reported either way).
    """
    if N > len(seq.generators):
        raise UsageError("N exceeds the generator sequence")
    thetas = np.asarray(thetas, dtype=float)
    partials = classification_sum(seq, N)
    hypothesis_ok = convergence_verdict(np.diff(np.concatenate([[0.0], partials]))) == "convergent"
    dist = np.empty((N, thetas.size))
    for idx, g in enumerate(seq.generators[:N]):
        if g.origin_multiplicity != 1:
            dist[idx] = 2.0  # map cannot approach the identity at any angle
            continue
        shift = boundary_arg_shift(g, thetas)
        dist[idx] = np.abs(np.exp(1j * shift) - 1.0)
    return IdentityConvergence(thetas=thetas, distances=dist, hypothesis_ok=hypothesis_ok)


def radial_limit_probe(P: BlaschkeProduct, theta: float, deltas):
    """Values P((1-delta) e^{i theta}) along the radius, one per delta."""
    deltas = np.asarray(deltas, dtype=float)
    if np.any((deltas <= 0) | (deltas > 0.1)):
        raise UsageError("deltas must lie in (0, 0.1]")
    pts = (1.0 - deltas) * np.exp(1j * theta)
    return product_eval(P, pts)


def boundary_winding(P: BlaschkeProduct, n_nodes=None) -> float:
    """Total accumulated boundary arg over one sweep; equals 2 pi deg(P).

    The sweep accumulates angle increments wrapped to [-pi, pi), which is
    exact once the node spacing resolves the fastest boundary derivative
    (~ (1+r)/(1-r) per zero).
    """
    if n_nodes is None:
        zs = np.abs(P.zero_array()) if P.zeros else np.zeros(0)
        rate = P.origin_multiplicity + float(np.sum((1 + zs) / (1 - zs))) if zs.size else P.degree
        n_nodes = int(2 ** np.ceil(np.log2(max(4096, 16 * rate))))
    phis = (np.arange(n_nodes + 1) + 0.5) * (TWO_PI / n_nodes)
    for attempt in range(4):
        try:
            args = P.origin_multiplicity * phis + _shift_terms(P.zero_array(), phis)
            break
        except SingularAngleError:
            phis = phis + 1e-7 * (attempt + 1)
    else:
        raise SingularAngleError("sweep nodes could not avoid zero arguments")
    d = np.diff(args)
    d = d - TWO_PI * np.floor((d + np.pi) / TWO_PI)
    return float(np.sum(d))
