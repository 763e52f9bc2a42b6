"""Zero-tracked composition of finite Blaschke products.

Composites B_n = b_n o ... o b_1 stay finite Blaschke products; their zeros
are the preimages, under the running composite, of the zeros of the next
generator.  This module materializes composites explicitly (degree permitting)
and provides the cheap nested evaluator used everywhere the degree explodes.

Preimage solving never touches the coefficients of the degree-D polynomial
N(z) - w Q(z) (hopelessly ill-conditioned once zeros crowd the circle).
Instead it continues the exactly-known preimages of 0 -- the stored zero
multiset -- along the path t w, t: 0 -> 1, correcting at each step with a
simultaneous Ehrlich-Aberth iteration on the factored form and finishing with
plain Newton polish.  An exact Vieta sum of the preimages, available in
closed form from the top two coefficients, guards against path jumping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    IDENTITY,
    ZERO_CLUSTER_TOL,
    BlaschkeProduct,
    cluster_points,
    product_eval,
    require_in_disc,
    sort_zeros,
)
from .errors import (
    CapacityError,
    ConsistencyError,
    DivergentProductError,
    RootFindingError,
    UsageError,
)

DEFAULT_DEGREE_CAP = 4096

# coefficient convolution switches to extended precision above this degree
LONGDOUBLE_MIN_DEGREE = 512

PREIMAGE_RESIDUAL_TOL = 1e-10
BOUNDARY_GUARD = 1e-12
NEWTON_STEPS = 3
ROTATION_MATCH_TOL = 1e-10
PROBE_POINTS = (0.1 + 0.0j, 0.1 + 0.07j, -0.06 + 0.11j, 0.13 - 0.05j)

# iterates are confined just inside the disc: true preimages of |w| < 1 live
# there, and the confinement keeps Newton clear of the poles at 1/conj(z_i)
CLAMP_MARGIN = 1e-13


def _convolve_factors(factors, extended):
    """Multiply linear polynomials (ascending coefficients) by pairwise convolution."""
    dtype = np.clongdouble if extended else complex
    polys = [np.asarray(f, dtype=dtype) for f in factors]
    if not polys:
        return np.ones(1, dtype=dtype)
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            nxt.append(np.convolve(polys[i], polys[i + 1]))
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def numerator_denominator(P: BlaschkeProduct):
    """Ascending-power coefficients (N, Q) with B = N/Q.

    N(z) = rotation * z^m * prod u_i (z_i - z),  Q(z) = prod (1 - conj(z_i) z),
    where u_i = |z_i|/z_i.
    """
    extended = P.degree > LONGDOUBLE_MIN_DEGREE
    num_factors = []
    den_factors = []
    for z in P.zeros:
        u = abs(z) / z
        num_factors.append([u * z, -u])
        den_factors.append([1.0, -np.conj(z)])
    num = _convolve_factors(num_factors, extended)
    den = _convolve_factors(den_factors, extended)
    num = np.concatenate([np.zeros(P.origin_multiplicity, dtype=num.dtype), num])
    num = num * np.asarray(P.rotation, dtype=num.dtype)
    return num, den


def _log_derivative(P: BlaschkeProduct, z):
    """B'(z)/B(z) via the factored form; callers keep z away from zeros of B."""
    zs = P.zero_array()
    out = np.zeros_like(np.asarray(z, dtype=complex))
    if P.origin_multiplicity:
        out = out + P.origin_multiplicity / z
    if len(zs):
        zcol = zs.reshape((-1,) + (1,) * np.ndim(z))
        out = out + np.sum(-1.0 / (zcol - z) + np.conj(zcol) / (1.0 - np.conj(zcol) * z), axis=0)
    return out


def _clamp_into_disc(x, margin=CLAMP_MARGIN):
    mod = np.abs(x)
    return np.where(mod < 1.0 - margin, x, x / np.where(mod == 0, 1.0, mod) * (1.0 - margin))


def _newton_ratio(P, w, x):
    """(B(x) - w) / B'(x) on the factored form, with guards off the zero set."""
    val = product_eval(P, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        nr = (val - w) / (val * _log_derivative(P, x))
    return np.where(np.isfinite(nr), nr, 0.0), val


def vieta_preimage_sum(P: BlaschkeProduct, w):
    """Exact sum of all preimages of w, from the top two coefficients of N - wQ.

    Only the leading coefficients are needed and they collapse to closed
    forms in the zeros, so no (ill-conditioned) convolution is involved.
    """
    zs = P.zero_array()
    e1 = complex(np.sum(zs))
    lead_n = P.rotation * complex(np.prod(np.abs(zs) / zs)) * (-1.0) ** len(zs) if len(zs) else P.rotation
    cq = complex(np.prod(-np.conj(zs))) if len(zs) else 1.0
    m = P.origin_multiplicity
    if m >= 2:
        return e1
    if m == 1:
        return e1 + w * cq / lead_n
    f1 = complex(np.sum(1.0 / np.conj(zs))) if len(zs) else 0.0
    return (lead_n * e1 - w * cq * f1) / (lead_n - w * cq)


def _split_seeds(P: BlaschkeProduct, target):
    """Starting roots for B(z) = target, splitting each zero by its multiplicity.

    Near a zero cluster of multiplicity k at z0, B(z) ~ C (z - z0)^k, so the k
    branches start at z0 + (target/C)^{1/k} times the k-th roots of unity.
    """
    zs = P.zero_array()
    clusters = cluster_points(P.zeros)
    if P.origin_multiplicity:
        clusters.insert(0, (0.0 + 0.0j, P.origin_multiplicity))
    seeds = []
    for center, mult in clusters:
        coeff = P.rotation
        if center == 0:
            # remaining factors at the origin evaluate to |z_i|
            coeff *= complex(np.prod(np.abs(zs))) if len(zs) else 1.0
        else:
            if P.origin_multiplicity:
                coeff *= center**P.origin_multiplicity
            consumed = 0
            for z in zs:
                if consumed < mult and abs(z - center) <= ZERO_CLUSTER_TOL:
                    coeff *= -(abs(z) / z) / (1.0 - abs(z) ** 2)  # factor slope at its zero
                    consumed += 1
                else:
                    coeff *= (abs(z) / z) * (z - center) / (1.0 - np.conj(z) * center)
        ring = (target / coeff) ** (1.0 / mult) * np.exp(2j * np.pi * np.arange(mult) / mult)
        seeds.extend((center + ring).tolist())
    return np.asarray(seeds, dtype=complex)


def preimages(P: BlaschkeProduct, w, *, residual_tol=PREIMAGE_RESIDUAL_TOL):
    """All degree(P) solutions of P(z) = w with |w| < 1, multiplicities included.

    The solver is a homotopy continuation: the preimages of 0 are the stored
    zero multiset (exactly), and the target is moved along t w, t: 0 -> 1,
    tracking all roots simultaneously with Newton steps on the factored form.
    Coefficient-based eigensolves are useless here: for larger |w| the
    preimages cluster within ~(1 - |z_i|) of near-boundary zeros, far below
    the conditioning floor of the degree-D coefficient polynomial.

    Returns a sorted tuple of complex roots; multiple roots are clustered at
    tolerance 1e-9 and reported by repetition.  Raises RootFindingError when
    continuation or polishing fails, and ConsistencyError when a root escapes
    the disc or the multiset sum disagrees with the exact Vieta sum.
    """
    w = complex(w)
    require_in_disc(w, "preimage target")
    if P.degree < 1:
        raise UsageError("preimages requires degree >= 1")
    if w == 0:
        return sort_zeros((0.0,) * P.origin_multiplicity + P.zeros)

    zs_conj = np.conj(P.zero_array()).reshape((-1, 1))

    def qlog(x):
        # Q'/Q for the denominator polynomial prod (1 - conj(z_i) z)
        if zs_conj.size == 0:
            return np.zeros_like(x)
        return np.sum(-zs_conj / (1.0 - zs_conj * x), axis=0)

    def aberth_to(target, x, tol, iters=24):
        # corrector with Ehrlich-Aberth repulsion: simultaneous iterates cannot
        # merge onto one root, which plain Newton continuation is prone to when
        # the path skirts a critical value
        for _ in range(iters):
            nr, val = _newton_ratio(P, target, x)
            if np.abs(val - target).max() < tol:
                return x, True
            with np.errstate(divide="ignore", invalid="ignore"):
                full_nr = 1.0 / (1.0 / nr + qlog(x))
                diff = x.reshape((-1, 1)) - x.reshape((1, -1))
                np.fill_diagonal(diff, np.inf)
                repulsion = np.sum(1.0 / diff, axis=1)
                delta = full_nr / (1.0 - full_nr * repulsion)
            delta = np.where(np.isfinite(delta), delta, nr)
            x = _clamp_into_disc(x - delta)
        _, val = _newton_ratio(P, target, x)
        return x, bool(np.abs(val - target).max() < tol)

    # first hop: scale so the local linearizations behind _split_seeds hold
    lam = float(np.prod(np.abs(P.zero_array()))) if P.zeros else 1.0
    t = min(1.0, 0.05 * max(lam, 1e-6) / abs(w))
    roots, ok = aberth_to(t * w, _clamp_into_disc(_split_seeds(P, t * w)), 1e-11)
    halvings = 0
    while not ok:
        t /= 2.0
        halvings += 1
        if halvings > 60:
            raise RootFindingError("continuation could not leave the zero multiset")
        roots, ok = aberth_to(t * w, _clamp_into_disc(_split_seeds(P, t * w)), 1e-11)

    dt = t
    while t < 1.0:
        dt = min(2.0 * dt, 1.0 - t)
        nxt, ok = aberth_to((t + dt) * w, roots, 1e-11)
        while not ok:
            dt /= 2.0
            if dt < 1e-12:
                raise RootFindingError(f"continuation stalled at t = {t:.6f}")
            nxt, ok = aberth_to((t + dt) * w, roots, 1e-11)
        roots = nxt
        t += dt

    for _ in range(NEWTON_STEPS):
        nr, _ = _newton_ratio(P, w, roots)
        roots = _clamp_into_disc(roots - nr)

    residuals = np.abs(product_eval(P, roots) - w)
    if residuals.max() > residual_tol:
        raise RootFindingError(
            f"root polishing stalled: worst residual {residuals.max():.3e}",
            worst_residual=float(residuals.max()),
        )
    if np.any(np.abs(roots) >= 1.0 - BOUNDARY_GUARD):
        raise ConsistencyError("preimage escaped the open disc; numerical breakdown")
    vieta = vieta_preimage_sum(P, w)
    if abs(np.sum(roots) - vieta) > 1e-6 * max(1.0, P.degree):
        raise ConsistencyError("preimage multiset sum disagrees with the exact Vieta sum")

    clustered = []
    for center, mult in cluster_points(roots):
        clustered.extend([center] * mult)
    return sort_zeros(clustered)


def compose_step(b: BlaschkeProduct, B: BlaschkeProduct, *, degree_cap=None) -> BlaschkeProduct:
    """Explicit product form of b o B.

    Zeros of the composite are the zeros of B (with multiplicity scaled by
    b's origin multiplicity) together with the B-preimages of each nonzero
    zero of b.  The rotation is recovered by matching a nested evaluation at
    a probe point.
    """
    if not b.fixes_origin:
        raise UsageError("compose_step requires the outer generator to fix the origin")
    target_degree = b.degree * B.degree
    if degree_cap is not None and target_degree > degree_cap:
        raise CapacityError(
            f"composite degree {target_degree} exceeds cap {degree_cap}; use nested_eval"
        )
    k = b.origin_multiplicity
    origin = k * B.origin_multiplicity
    zeros = list(B.zeros) * k
    for w in b.zeros:
        zeros.extend(preimages(B, w))
    zeros = sort_zeros(zeros)

    unrotated = BlaschkeProduct(1.0, origin, zeros)
    rotation = None
    for p in PROBE_POINTS:
        nested = product_eval(b, product_eval(B, p))
        base = product_eval(unrotated, p)
        if abs(base) > 1e-8 and abs(nested) > 1e-12:
            ratio = nested / base
            if abs(abs(ratio) - 1.0) > ROTATION_MATCH_TOL:
                raise ConsistencyError(
                    f"rotation recovery mismatch at probe {p}: |ratio| = {abs(ratio)}"
                )
            rotation = ratio / abs(ratio)
            break
    if rotation is None:
        raise ConsistencyError("no usable probe point for rotation recovery")

    C = BlaschkeProduct(rotation, origin, zeros)
    if C.degree != target_degree:
        raise ConsistencyError("composite degree mismatch")
    return C


@dataclass
class CompositionSequence:
    """Ordered generators b_1, b_2, ... with lazily materialized composites.

    Every generator must fix the origin.  Composites beyond ``degree_cap``
    are never materialized; long-run queries go through ``nested_eval``.
    """

    generators: tuple
    degree_cap: int = DEFAULT_DEGREE_CAP
    _materialized: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        for i, g in enumerate(gens):
            if not isinstance(g, BlaschkeProduct):
                raise UsageError(f"generator {i} is not a BlaschkeProduct")
            if not g.fixes_origin:
                raise UsageError(f"generator {i} must fix the origin")
        self.generators = gens

    def __len__(self):
        return len(self.generators)

    def degrees(self):
        """Exact integer degrees of B_1..B_n."""
        out = []
        d = 1
        for g in self.generators:
            d *= g.degree
            out.append(d)
        return out

    def composite(self, n: int) -> BlaschkeProduct:
        """Materialized B_n (B_0 is the identity)."""
        if n < 0 or n > len(self.generators):
            raise UsageError(f"composite index {n} out of range")
        if n == 0:
            return IDENTITY
        while len(self._materialized) < n:
            prev = self._materialized[-1] if self._materialized else IDENTITY
            step = compose_step(
                self.generators[len(self._materialized)], prev, degree_cap=self.degree_cap
            )
            self._materialized.append(step)
        return self._materialized[n - 1]


def nested_eval(seq: CompositionSequence, n: int, z):
    """b_n(...b_1(z)...) by direct iteration; n = 0 is the identity."""
    if n < 0 or n > len(seq.generators):
        raise UsageError(f"nested_eval index {n} out of range")
    out = np.asarray(z, dtype=complex)
    for g in seq.generators[:n]:
        out = product_eval(g, out)
    return complex(out) if np.ndim(out) == 0 else out


def blaschke_partial_sum(zeros):
    return float(np.sum(1.0 - np.abs(np.asarray(zeros, dtype=complex)))) if len(zeros) else 0.0


def truncation_tail_bound(tail_sum: float, r: float) -> float:
    """Sup over |z| <= r of the change from dropping factors with Blaschke mass tail_sum."""
    return 2.0 * tail_sum / (1.0 - r) ** 2


def partial_limit_eval(zeros, z, n_terms=None, origin_multiplicity=1, *, max_blaschke_sum=50.0):
    """Truncated infinite product z^m * prod_{i<=N} f_{z_i}(z).

    Refuses when the partial Blaschke sum of the used zeros exceeds
    ``max_blaschke_sum`` (the truncations would be meaningless: the product
    is collapsing to zero rather than converging to a Blaschke product).
    """
    zs = tuple(complex(p) for p in zeros)
    if n_terms is not None:
        zs = zs[:n_terms]
    require_in_disc(np.asarray(z), "evaluation point")
    partial = blaschke_partial_sum(zs)
    if partial > max_blaschke_sum:
        raise DivergentProductError(
            f"Blaschke partial sum {partial:.3f} exceeds {max_blaschke_sum}; "
            "sequence looks divergent"
        )
    P = BlaschkeProduct(1.0, origin_multiplicity, zs)
    return product_eval(P, z)
