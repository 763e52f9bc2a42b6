"""Domain types for finite Blaschke products on the unit disc.

A Blaschke factor with zero a (0 < |a| < 1) is the disc automorphism

    f_a(z) = (|a|/a) * (a - z) / (1 - conj(a) z),

normalized so that f_a(0) = |a| >= 0.  A finite Blaschke product is

    B(z) = rotation * z**m * prod_i f_{z_i}(z),

with |rotation| = 1, origin multiplicity m >= 0 and nonzero zeros z_i.
All types are immutable values; evaluation is pure and accepts scalars or
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, UsageError

TWO_PI = 2.0 * math.pi

POLE_TOL = 1e-15
ROTATION_TOL = 1e-14
ZERO_CLUSTER_TOL = 1e-9

# pairwise factor multiplication above this degree to keep rounding growth O(log n)
PAIRWISE_MIN_DEGREE = 64


def reduce_angle(theta):
    """Reduce an angle (scalar or array) to [0, 2*pi)."""
    return np.remainder(theta, TWO_PI)


def circle_distance(a, b):
    """Shorter arc length between two angles."""
    d = np.abs(reduce_angle(a) - reduce_angle(b))
    return np.minimum(d, TWO_PI - d)


def unit(theta):
    """Point e^{i theta} on the unit circle."""
    theta = np.asarray(theta, dtype=float)
    w = np.exp(1j * theta)
    return complex(w) if w.ndim == 0 else w


def require_in_disc(z, what="point"):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError(f"{what} must have modulus < 1")


@dataclass(frozen=True)
class BlaschkeFactor:
    """One degree-1 factor, parameterized by its zero a with 0 < |a| < 1."""

    zero: complex

    def __post_init__(self):
        a = complex(self.zero)
        if not 0.0 < abs(a) < 1.0:
            raise DomainError(f"factor zero must satisfy 0 < |a| < 1, got |a| = {abs(a)}")
        object.__setattr__(self, "zero", a)


def factor_eval(a, z):
    """Evaluate a normalized Blaschke factor at z (|z| <= 1, scalar or array).

    Guards the pole 1 - conj(a) z = 0, which cannot occur for valid inputs
    but catches malformed ones.
    """
    av = a.zero if isinstance(a, BlaschkeFactor) else complex(a)
    z = np.asarray(z, dtype=complex)
    denom = 1.0 - np.conj(av) * z
    if np.any(np.abs(denom) < POLE_TOL):
        raise DomainError("evaluation at a pole of the factor")
    out = (abs(av) / av) * (av - z) / denom
    return complex(out) if out.ndim == 0 else out


def _pairwise_prod(values):
    # tree reduction over the factor axis (axis 0)
    while values.shape[0] > 1:
        k = values.shape[0] // 2
        head = values[: 2 * k : 2] * values[1 : 2 * k : 2]
        if values.shape[0] % 2:
            head = np.concatenate([head, values[-1:]])
        values = head
    return values[0]


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product: rotation * z**m * product of normalized factors.

    ``zeros`` is the multiset of nonzero zeros, multiplicities by repetition.
    """

    rotation: complex = 1.0 + 0.0j
    origin_multiplicity: int = 0
    zeros: tuple = ()

    def __post_init__(self):
        rot = complex(self.rotation)
        if abs(abs(rot) - 1.0) > ROTATION_TOL:
            raise DomainError(f"|rotation| must be 1 within {ROTATION_TOL}, got {abs(rot)}")
        if self.origin_multiplicity < 0:
            raise DomainError("origin multiplicity must be >= 0")
        zs = tuple(complex(z) for z in self.zeros)
        for z in zs:
            if not 0.0 < abs(z) < 1.0:
                raise DomainError(f"every zero must satisfy 0 < |z| < 1, got |z| = {abs(z)}")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "origin_multiplicity", int(self.origin_multiplicity))
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return self.origin_multiplicity + len(self.zeros)

    @property
    def fixes_origin(self) -> bool:
        return self.origin_multiplicity >= 1

    def zero_array(self):
        return np.asarray(self.zeros, dtype=complex)


IDENTITY = BlaschkeProduct(rotation=1.0, origin_multiplicity=1, zeros=())


def single_zero_product(zero, rotation=1.0 + 0.0j) -> BlaschkeProduct:
    """Degree-2 building block z * f_zero(z), the shape used by generator families."""
    return BlaschkeProduct(rotation=rotation, origin_multiplicity=1, zeros=(complex(zero),))


def product_eval(P: BlaschkeProduct, z):
    """Evaluate the product at z (|z| <= 1, scalar or array)."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, P.rotation, dtype=complex)
    if P.origin_multiplicity:
        out = out * z**P.origin_multiplicity
    if P.zeros:
        zs = P.zero_array().reshape((-1,) + (1,) * z.ndim)
        denom = 1.0 - np.conj(zs) * z
        if np.any(np.abs(denom) < POLE_TOL):
            raise DomainError("evaluation at a pole of the product")
        vals = (np.abs(zs) / zs) * (zs - z) / denom
        if len(P.zeros) > PAIRWISE_MIN_DEGREE:
            out = out * _pairwise_prod(vals)
        else:
            out = out * np.prod(vals, axis=0)
    return complex(out) if out.ndim == 0 else out


def derivative_at_origin(P: BlaschkeProduct):
    """B'(0) for a product fixing the origin.

    Zero when the origin multiplicity exceeds 1; otherwise
    rotation * prod |z_i|, whose modulus is prod |z_i|.
    """
    if not P.fixes_origin:
        raise UsageError("derivative_at_origin requires a product fixing the origin")
    if P.origin_multiplicity > 1:
        return 0.0 + 0.0j
    return P.rotation * float(np.prod(np.abs(P.zero_array())))


def normalize_rotation(P: BlaschkeProduct) -> BlaschkeProduct:
    """Rotate the product so that B'(0) is real and positive.

    Since B'(0) = rotation * prod |z_i| with prod |z_i| > 0, this amounts to
    setting the rotation to 1; zeros are untouched.  Idempotent.
    """
    if P.origin_multiplicity != 1:
        raise UsageError("cannot normalize: derivative at the origin vanishes unless m = 1")
    if P.rotation == 1.0 + 0.0j:
        return P
    return replace(P, rotation=1.0 + 0.0j)


def cluster_points(points, tol=ZERO_CLUSTER_TOL):
    """Group nearly identical complex points; returns list of (center, multiplicity).

    Greedy pass over lexicographically sorted points; adequate for the tiny
    tolerances used for zero multisets.
    """
    pts = sorted((complex(p) for p in points), key=lambda c: (c.real, c.imag))
    clusters = []
    for p in pts:
        for idx, (c, k) in enumerate(clusters):
            if abs(p - c) <= tol:
                clusters[idx] = ((c * k + p) / (k + 1), k + 1)
                break
        else:
            clusters.append((p, 1))
    return clusters


def same_zero_multiset(a, b, tol=ZERO_CLUSTER_TOL) -> bool:
    """Compare two zero multisets up to the clustering tolerance."""
    a = sorted((complex(p) for p in a), key=lambda c: (c.real, c.imag))
    b = sorted((complex(p) for p in b), key=lambda c: (c.real, c.imag))
    if len(a) != len(b):
        return False
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def sort_zeros(points):
    """Deterministic ordering for zero multisets."""
    return tuple(sorted((complex(p) for p in points), key=lambda c: (c.real, c.imag)))


def finite_difference_derivative(f, z0, h=1e-6):
    """Central finite difference used as an independent derivative oracle."""
    return (f(z0 + h) - f(z0 - h)) / (2.0 * h)
