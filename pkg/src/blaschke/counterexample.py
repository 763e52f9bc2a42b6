"""Sequences whose interior iterates settle while boundary args keep drifting.

The construction: pick radii r_n in (0,1) with sum (1-r_n) finite but the
Frostman sum divergent, place the n-th zero at angle theta_n equal to the n-th
Frostman partial sum, and compose the degree-2 generators

    b_n(z) = z * (|z_n|/z_n) (z_n - z) / (1 - conj(z_n) z),   z_n = r_n e^{i theta_n}.

The composites converge locally uniformly inside the disc, but the slowly
winding zero angles keep re-aligning with every boundary point, so the
boundary args never settle.  At desk scale the observable is a contrast: the
per-step interior gauge collapses while the windowed boundary oscillation
stays on a positive floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .composition import CompositionSequence
from .core import single_zero_product
from .diagnostics import frostman_terms, polar_grid
from .errors import UsageError
from .kernels import disc_forward_checkpoints, generator_arrays, orbit_psi_checkpoints

TWO_PI = 2.0 * np.pi

REPORT_GRID = (16, 64)


@dataclass(frozen=True)
class RadiiSpec:
    """Radius family for the construction: the default slow family or explicit radii."""

    kind: str = "default"
    offset: int = 2
    explicit: tuple = ()

    def gaps(self, n: int) -> np.ndarray:
        """1 - r_k for k = 1..n."""
        if self.kind == "default":
            k = np.arange(1, n + 1, dtype=float) + self.offset
            return 1.0 / (k * np.log(k) ** 2)
        if self.kind == "explicit":
            radii = np.asarray(self.explicit, dtype=float)[:n]
            if len(radii) < n:
                raise UsageError(f"explicit radii list shorter than n = {n}")
            if np.any((radii <= 0.0) | (radii >= 1.0)):
                raise UsageError("explicit radii must lie in (0, 1)")
            return 1.0 - radii
        raise UsageError(f"unknown radii kind {self.kind!r}")

    def radii(self, n: int) -> np.ndarray:
        return 1.0 - self.gaps(n)


def default_radii(n: int) -> np.ndarray:
    """The canonical slow family 1 - r_k = 1/((k+2) log^2(k+2)).

    The gap series converges (integral test) while its Frostman companion
    sum (1-r) log 1/(1-r) ~ sum 1/((k+2) log(k+2)) diverges.
    """
    if n < 1:
        raise UsageError("n must be >= 1")
    return RadiiSpec().radii(n)


def zero_angles(radii) -> np.ndarray:
    """Unreduced zero angles: running Frostman partial sums of the radii."""
    return np.cumsum(frostman_terms(np.asarray(radii, dtype=float)))


def build_sequence(radii, n=None, degree_cap=4096) -> CompositionSequence:
    """Degree-2 generator sequence for the given radii (array or RadiiSpec).

    Generator k has its single zero at r_k e^{i theta_k}, theta_k reduced for
    storage; b_k'(0) has modulus r_k exactly.  Construction is hypothesis
    agnostic: diagnostics flag families that break the two-series condition.
    """
    if isinstance(radii, RadiiSpec):
        if n is None:
            raise UsageError("n is required with a RadiiSpec")
        radii = radii.radii(n)
    radii = np.asarray(radii, dtype=float)
    if n is not None:
        radii = radii[:n]
    if np.any((radii <= 0.0) | (radii >= 1.0)):
        raise UsageError("radii must lie in (0, 1)")
    thetas = np.remainder(zero_angles(radii), TWO_PI)
    zeros = radii * np.exp(1j * thetas)
    return CompositionSequence(tuple(single_zero_product(z) for z in zeros), degree_cap=degree_cap)


@dataclass
class DivergenceReport:
    """Checkpointed contrast series: interior per-step gauge vs boundary oscillation."""

    checkpoints: np.ndarray  # step indices
    thetas: np.ndarray  # sampled boundary angles
    interior_gauge: np.ndarray  # per-step sup gauge at each checkpoint
    boundary_osc: np.ndarray  # (ncp, nangles) windowed psi range
    psi: np.ndarray  # (ncp, nangles) accumulated boundary args
    radius: float
    meta: dict = field(default_factory=dict)

    def rows(self):
        """CSV rows (n, theta, interior_gauge, boundary_osc)."""
        for i, n in enumerate(self.checkpoints):
            for j, theta in enumerate(self.thetas):
                yield (int(n), float(theta), float(self.interior_gauge[i]), float(self.boundary_osc[i, j]))

    def min_osc_from(self, start_checkpoint: int) -> np.ndarray:
        """Per-angle minimum oscillation over checkpoints >= start_checkpoint."""
        mask = self.checkpoints >= start_checkpoint
        return self.boundary_osc[mask].min(axis=0)


def divergence_report(
    seq: CompositionSequence,
    thetas,
    n_steps: int,
    window: int,
    radius: float = 0.5,
    grid=REPORT_GRID,
) -> DivergenceReport:
    """Run the boundary orbits and the interior forward pass side by side.

    Checkpoints sit every ``window`` steps.  Boundary oscillation at a
    checkpoint is the max-min range of the accumulated arg over the trailing
    window; the interior gauge is sup_z |B_n(z) - B_{n-1}(z)| over a polar
    grid of the given radius.
    """
    if not 2 <= window <= n_steps:
        raise UsageError("need n_steps >= window >= 2")
    if n_steps > len(seq.generators):
        raise UsageError("n_steps exceeds the generator sequence")
    thetas = np.asarray(thetas, dtype=float)
    checkpoints = np.arange(window, n_steps + 1, window, dtype=np.int64)
    if checkpoints[-1] != n_steps:
        checkpoints = np.concatenate([checkpoints, [n_steps]])
    arrays = generator_arrays(seq)

    psi_cp, osc_cp, _ = orbit_psi_checkpoints(
        arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta, arrays.offsets, thetas, checkpoints
    )

    pts = polar_grid(radius, *grid)
    _, gauge_cp = disc_forward_checkpoints(
        arrays.m, arrays.rot, arrays.zeros, arrays.offsets, pts, checkpoints
    )

    return DivergenceReport(
        checkpoints=checkpoints,
        thetas=thetas,
        interior_gauge=gauge_cp,
        boundary_osc=osc_cp,
        psi=psi_cp,
        radius=radius,
        meta={"n_steps": n_steps, "window": window, "grid": grid},
    )
