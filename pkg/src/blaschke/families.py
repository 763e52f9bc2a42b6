"""Named generator families used by tests, the CLI and the acceptance suite."""

from __future__ import annotations

import numpy as np

from .composition import DEFAULT_DEGREE_CAP, CompositionSequence
from .core import single_zero_product

# angular step that keeps successive zeros well spread on the circle
GOLDEN_ANGLE = 2.0 * np.pi * (1.0 - 2.0 / (1.0 + np.sqrt(5.0)))


def geometric_sequence(n, ratio=0.5, angle_step=GOLDEN_ANGLE, degree_cap=DEFAULT_DEGREE_CAP):
    """Single-zero generators with 1 - b_k'(0) = ratio**k, zeros spread by angle_step."""
    ks = np.arange(1, n + 1)
    radii = 1.0 - ratio**ks
    zeros = radii * np.exp(1j * angle_step * ks)
    gens = tuple(single_zero_product(z) for z in zeros)
    return CompositionSequence(gens, degree_cap=degree_cap)


def constant_sequence(n, radius=0.6, angle=0.9, degree_cap=DEFAULT_DEGREE_CAP):
    """All generators share one zero; every summability gauge diverges."""
    z = radius * np.exp(1j * angle)
    return CompositionSequence(tuple(single_zero_product(z) for _ in range(n)), degree_cap=degree_cap)


def identity_sequence(n, degree_cap=DEFAULT_DEGREE_CAP):
    from .core import IDENTITY

    return CompositionSequence((IDENTITY,) * n, degree_cap=degree_cap)


def random_degree2_sequence(n, seed, r_low=0.15, r_high=0.85, degree_cap=DEFAULT_DEGREE_CAP):
    """Seeded degree-2 generators with uniformly drawn zero moduli and angles."""
    rng = np.random.default_rng(seed)
    radii = rng.uniform(r_low, r_high, n)
    angles = rng.uniform(0.0, 2.0 * np.pi, n)
    gens = tuple(single_zero_product(r * np.exp(1j * a)) for r, a in zip(radii, angles))
    return CompositionSequence(gens, degree_cap=degree_cap)


def random_product(rng, degree, r_low=0.15, r_high=0.85):
    """One random product fixing the origin with the given degree (>= 2)."""
    from .core import BlaschkeProduct

    n_zeros = degree - 1
    radii = rng.uniform(r_low, r_high, n_zeros)
    angles = rng.uniform(0.0, 2.0 * np.pi, n_zeros)
    zeros = tuple(r * np.exp(1j * a) for r, a in zip(radii, angles))
    return BlaschkeProduct(rotation=1.0, origin_multiplicity=1, zeros=zeros)
