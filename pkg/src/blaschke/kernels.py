"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set BLASCHKE_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the parity tests).
"""

from __future__ import annotations

import os

import numpy as np

from .core import BlaschkeProduct

if os.environ.get("BLASCHKE_PURE_PYTHON"):
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        COMPILED = False

orbit_psi_checkpoints = _impl.orbit_psi_checkpoints
disc_forward_checkpoints = _impl.disc_forward_checkpoints


class GeneratorArrays:
    """Flattened generator data consumed by the kernels."""

    __slots__ = ("m", "rot", "rot_arg", "zeros", "zero_r", "zero_theta", "offsets")

    def __init__(self, generators):
        gens = list(generators)
        self.m = np.array([g.origin_multiplicity for g in gens], dtype=np.int64)
        self.rot = np.array([g.rotation for g in gens], dtype=complex)
        self.rot_arg = np.angle(self.rot)
        counts = np.array([len(g.zeros) for g in gens], dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        flat = [z for g in gens for z in g.zeros]
        self.zeros = np.asarray(flat, dtype=complex)
        self.zero_r = np.abs(self.zeros)
        self.zero_theta = np.angle(self.zeros) % (2.0 * np.pi)

    def __len__(self):
        return len(self.m)


def generator_arrays(seq_or_generators) -> GeneratorArrays:
    gens = getattr(seq_or_generators, "generators", seq_or_generators)
    if isinstance(gens, BlaschkeProduct):
        gens = (gens,)
    cached = getattr(seq_or_generators, "_gen_arrays", None)
    if cached is not None:
        return cached
    arrays = GeneratorArrays(gens)
    try:
        object.__setattr__(seq_or_generators, "_gen_arrays", arrays)
    except (AttributeError, TypeError):
        pass
    return arrays
