"""Convergence criteria and bounds for forward composition sequences.

Three summability gauges drive everything:

  * contraction sum      sum_n (1 - |b_n'(0)|)        -- finite iff the interior
    limit is non-constant (given locally uniform convergence);
  * Frostman sum         sum_n (1 - b_n'(0)) log 1/(1 - b_n'(0)) -- finite implies
    L1 convergence of the boundary extensions (bounded degrees);
  * Blaschke sum         sum (1 - |z|) over a zero multiset.

Verdicts attached to partial sums are heuristic tail flags; the underlying
dichotomies are asymptotic and cannot be decided from finitely many terms, so
reports always carry the raw partials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .composition import CompositionSequence
from .core import BlaschkeProduct, derivative_at_origin
from .errors import DegreeCollapseError, DomainError, UsageError
from .kernels import disc_forward_checkpoints, generator_arrays

CONVERGENT_TAIL_THRESHOLD = 1e-6
DEFAULT_GRID = (64, 256)


def _origin_derivatives(seq_or_values):
    if isinstance(seq_or_values, CompositionSequence):
        return np.array([abs(derivative_at_origin(g)) for g in seq_or_values.generators])
    if isinstance(seq_or_values, BlaschkeProduct):
        return np.array([abs(derivative_at_origin(seq_or_values))])
    return np.abs(np.asarray(seq_or_values, dtype=complex)).astype(float)


def classification_sum(seq, N=None):
    """Partial sums of 1 - |b_n'(0)| up to N (nondecreasing).

    Accepts a CompositionSequence or a plain array of origin derivatives,
    which keeps million-term family studies cheap.
    """
    lam = _origin_derivatives(seq)
    if N is not None:
        lam = lam[:N]
    return np.cumsum(1.0 - lam)


def frostman_terms(lam):
    """Terms (1-lam) log(1/(1-lam)) with the lam = 1 case defined as 0."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0.0):
        raise DegreeCollapseError(
            "generator with b'(0) = 0: Frostman term undefined (origin multiplicity > 1)"
        )
    t = 1.0 - lam
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = t[pos] * np.log(1.0 / t[pos])
    return out


def frostman_sum(seq, N=None):
    """Partial Frostman sums up to N (nondecreasing).

    Generators are expected normalized so b_n'(0) is in (0, 1]; the modulus is
    used, which coincides under that normalization.
    """
    lam = _origin_derivatives(seq)
    if N is not None:
        lam = lam[:N]
    return np.cumsum(frostman_terms(lam))


def blaschke_sum(zeros) -> float:
    """Sum of 1 - |z| over a zero multiset."""
    zeros = np.asarray(zeros, dtype=complex)
    if zeros.size == 0:
        return 0.0
    return float(np.sum(1.0 - np.abs(zeros)))


def schwarz_lower_bound(lam: float, z):
    """Lower bound |g(z)| >= |z| (1 - (1-lam)(1+|z|)/(1-|z|)) for |g'(0)| = lam.

    Valid for self-maps fixing 0 with |z| <= lam; may be negative (vacuous),
    returned as-is.  Accepts scalars or arrays of points.
    """
    if not 0.0 < lam <= 1.0:
        raise DomainError("lam must lie in (0, 1]")
    r = np.abs(np.asarray(z))
    if np.any(r >= 1.0):
        raise DomainError("point must lie inside the unit disc")
    out = r * (1.0 - (1.0 - lam) * (1.0 + r) / (1.0 - r))
    return float(out) if out.ndim == 0 else out


def polar_grid(radius: float, n_radii: int, n_angles: int):
    """Deterministic polar grid on the closed disc of the given radius."""
    radii = radius * (np.arange(1, n_radii + 1) / n_radii)
    angles = np.arange(n_angles) * (2.0 * np.pi / n_angles)
    return (radii[:, None] * np.exp(1j * angles[None, :])).ravel()


def interior_cauchy_gauge(seq, n: int, m: int, radius: float = 0.5, grid=DEFAULT_GRID) -> float:
    """sup over a polar grid of |B_{n+m}(z) - B_n(z)|, via nested evaluation.

    Works past any materialization cap; cost is one forward pass of n+m steps
    over the grid.
    """
    if radius >= 1.0:
        raise DomainError("radius must be < 1")
    if m == 0 or n + m == 0:
        return 0.0
    if isinstance(seq, CompositionSequence) and n + m > len(seq.generators):
        raise UsageError("n + m exceeds the generator sequence")
    arrays = generator_arrays(seq)
    pts = polar_grid(radius, *grid)
    checkpoints = [n, n + m] if n >= 1 else [n + m]
    vals, _ = disc_forward_checkpoints(
        arrays.m, arrays.rot, arrays.zeros, arrays.offsets, pts, np.asarray(checkpoints)
    )
    base = vals[0] if n >= 1 else pts
    return float(np.max(np.abs(vals[-1] - base)))


def decade_stats(terms):
    """(max per-step increment, total increase) over the trailing decade n > N/10."""
    terms = np.asarray(terms, dtype=float)
    lo = len(terms) // 10
    tail = terms[lo:]
    return float(tail.max()), float(tail.sum())


def convergence_verdict(terms, threshold=CONVERGENT_TAIL_THRESHOLD) -> str:
    """Heuristic tail flag: 'convergent' when the final per-step increment of
    the partial sums falls below the threshold."""
    terms = np.asarray(terms, dtype=float)
    if terms.size == 0:
        return "convergent"
    return "convergent" if terms[-1] < threshold else "divergent"


@dataclass
class DiagnosticsReport:
    """Partial sums, gauges and heuristic verdicts for one sequence."""

    classification_partials: np.ndarray
    frostman_partials: np.ndarray | None
    blaschke_total: float
    interior_gauges: list = field(default_factory=list)  # (n, m, radius, gauge)
    verdicts: dict = field(default_factory=dict)

    def to_kv(self):
        """Flat key-value lines (the serialization consumed by the CLI)."""
        lines = []
        n = len(self.classification_partials)
        lines.append(("generators", n))
        lines.append(("classification_partial_final", self.classification_partials[-1] if n else 0.0))
        if self.frostman_partials is not None and len(self.frostman_partials):
            lines.append(("frostman_partial_final", self.frostman_partials[-1]))
        lines.append(("blaschke_sum", self.blaschke_total))
        for gn, gm, rad, gauge in self.interior_gauges:
            lines.append((f"interior_gauge_n{gn}_m{gm}_r{rad:g}", gauge))
        for key, val in sorted(self.verdicts.items()):
            lines.append((f"verdict_{key}", val))
        return lines


def build_report(seq, gauge_pairs=(), radius=0.5, grid=DEFAULT_GRID) -> DiagnosticsReport:
    """Assemble a DiagnosticsReport for a desk-scale sequence."""
    lam = _origin_derivatives(seq)
    class_partials = np.cumsum(1.0 - lam)
    try:
        frost_partials = np.cumsum(frostman_terms(lam))
        frost_verdict = convergence_verdict(frostman_terms(lam))
    except DegreeCollapseError:
        frost_partials = None
        frost_verdict = "undefined (degree collapse)"
    zeros = [z for g in seq.generators for z in g.zeros]
    gauges = [
        (n, m, radius, interior_cauchy_gauge(seq, n, m, radius, grid)) for n, m in gauge_pairs
    ]
    verdicts = {
        "classification": convergence_verdict(1.0 - lam),
        "frostman": frost_verdict,
    }
    return DiagnosticsReport(
        classification_partials=class_partials,
        frostman_partials=frost_partials,
        blaschke_total=blaschke_sum(zeros),
        interior_gauges=gauges,
        verdicts=verdicts,
    )
