import math

import numpy as np
import pytest

import blaschke as bl
from blaschke.counterexample import RadiiSpec
from blaschke.diagnostics import decade_stats, frostman_terms
from blaschke.families import geometric_sequence, identity_sequence


def test_default_radii_first_gap():
    # direct arithmetic oracle: 1 - r_1 = 1/(3 ln^2 3)
    r = bl.default_radii(1)
    assert 1.0 - r[0] == pytest.approx(1.0 / (3.0 * math.log(3.0) ** 2), abs=1e-15)


def test_default_radii_partial_sums_slow_convergence():
    # summation oracle values; the gap series converges but only at ~1/log n
    gaps = RadiiSpec().gaps(10**6)
    S = np.cumsum(gaps)
    assert S[10**5 - 1] == pytest.approx(0.9821996029624044, abs=1e-9)
    assert S[-1] == pytest.approx(0.9966759101815621, abs=1e-9)
    # the decade increase is still visible at the second decimal
    assert S[-1] - S[10**5 - 1] == pytest.approx(0.014476, abs=1e-4)


def test_default_radii_frostman_partials_keep_growing():
    gaps = RadiiSpec().gaps(10**6)
    F = np.cumsum(frostman_terms(1.0 - gaps))
    marks = [F[10**k - 1] for k in (3, 4, 5, 6)]
    assert marks == sorted(marks)
    diffs = np.diff(marks)
    assert diffs.min() > 0.25  # no plateau across decades
    assert F[-1] == pytest.approx(4.183103308839697, abs=1e-9)


def test_hypothesis_split_at_1e6():
    # per-step increments of the gap series collapse below 1e-6 over the last
    # decade while the Frostman series keeps climbing by more than 10x that
    gaps = RadiiSpec().gaps(10**6)
    class_max_step, class_increase = decade_stats(gaps)
    frost_max_step, frost_increase = decade_stats(frostman_terms(1.0 - gaps))
    assert class_max_step < 1e-6
    assert frost_increase > 10.0 * class_max_step
    assert frost_max_step > 10.0 * class_max_step  # holds per-step as well


def test_radii_spec_explicit_and_errors():
    spec = RadiiSpec(kind="explicit", explicit=(0.5, 0.75))
    assert np.allclose(spec.radii(2), [0.5, 0.75])
    with pytest.raises(bl.UsageError):
        spec.radii(3)
    with pytest.raises(bl.UsageError):
        RadiiSpec(kind="explicit", explicit=(1.5,)).radii(1)
    with pytest.raises(bl.UsageError):
        RadiiSpec(kind="nope").gaps(1)


def test_build_sequence_zero_angles_match_frostman_partials():
    radii = bl.default_radii(200)
    seq = bl.build_sequence(radii)
    partials = bl.frostman_sum(radii)
    # same summation code path: the unreduced angles equal the partials exactly
    unreduced = bl.zero_angles(radii)
    assert np.abs(unreduced - partials).max() < 1e-12
    stored = np.array([np.angle(g.zeros[0]) % (2 * np.pi) for g in seq.generators])
    assert np.abs(stored - np.remainder(unreduced, 2 * np.pi)).max() < 1e-12


def test_build_sequence_first_zero():
    radii = bl.default_radii(1)
    seq = bl.build_sequence(radii)
    g = 1.0 - radii[0]
    theta1 = g * math.log(1.0 / g)
    z = seq.generators[0].zeros[0]
    assert abs(z) == pytest.approx(radii[0])
    assert np.angle(z) % (2 * np.pi) == pytest.approx(theta1)


def test_build_sequence_derivative_moduli_exact():
    # |r e^{i theta}| recovers r to the last ulp
    radii = bl.default_radii(50)
    seq = bl.build_sequence(radii)
    for r, g in zip(radii, seq.generators):
        assert abs(bl.derivative_at_origin(g)) == pytest.approx(r, rel=4e-16)


def test_build_sequence_constant_radii_allowed_but_flagged():
    seq = bl.build_sequence(np.full(30, 0.6))
    report = bl.build_report(seq)
    assert report.verdicts["classification"] == "divergent"


def test_build_sequence_validates_radii():
    with pytest.raises(bl.UsageError):
        bl.build_sequence(np.array([0.5, 1.1]))


def test_divergence_report_identity_generators():
    seq = identity_sequence(100)
    rep = bl.divergence_report(seq, np.linspace(0.1, 6.0, 8), 100, 10, grid=(4, 8))
    assert rep.boundary_osc.max() == 0.0
    assert rep.interior_gauge.max() == 0.0


def test_divergence_report_geometric_contrast_case():
    seq = geometric_sequence(50)
    rep = bl.divergence_report(seq, np.linspace(0.1, 6.0, 8), 50, 5, grid=(4, 8))
    # contraction-dominated family: windowed boundary oscillation dies out
    assert rep.boundary_osc[-1].max() < 1e-9
    assert rep.boundary_osc[-1].max() < rep.boundary_osc[0].max()


def test_divergence_report_contrast_smoke():
    # desk-scale shadow of the full contrast experiment
    seq = bl.build_sequence(bl.default_radii(3000))
    angles = (np.arange(16) + 0.5) * (2 * np.pi / 16)
    rep = bl.divergence_report(seq, angles, 3000, 300, grid=(6, 24))
    assert rep.interior_gauge[-1] < rep.interior_gauge[0]
    assert rep.boundary_osc[-1].min() > 0.0
    rows = list(rep.rows())
    assert len(rows) == len(rep.checkpoints) * 16


def test_divergence_report_interior_gauge_monotone():
    seq = bl.build_sequence(bl.default_radii(2000))
    rep = bl.divergence_report(seq, np.array([1.0]), 2000, 100, grid=(6, 24))
    after_burn_in = rep.interior_gauge[rep.checkpoints >= 200]
    assert np.all(np.diff(after_burn_in) <= 1e-12)


def test_divergence_report_validates_window():
    seq = identity_sequence(10)
    with pytest.raises(bl.UsageError):
        bl.divergence_report(seq, np.array([1.0]), 10, 1)
    with pytest.raises(bl.UsageError):
        bl.divergence_report(seq, np.array([1.0]), 20, 5)


def test_min_osc_from_selects_checkpoints():
    seq = bl.build_sequence(bl.default_radii(1000))
    rep = bl.divergence_report(seq, np.array([1.0, 2.0]), 1000, 100, grid=(4, 8))
    sub = rep.boundary_osc[rep.checkpoints >= 500]
    assert np.allclose(rep.min_osc_from(500), sub.min(axis=0))
