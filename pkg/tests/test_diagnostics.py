import math

import numpy as np
import pytest

import blaschke as bl
from blaschke.counterexample import RadiiSpec
from blaschke.diagnostics import decade_stats, frostman_terms, polar_grid
from blaschke.families import (
    constant_sequence,
    geometric_sequence,
    identity_sequence,
    random_degree2_sequence,
    random_product,
)


def test_classification_power_map_partials():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    seq = bl.CompositionSequence((sq,) * 5)
    partials = bl.classification_sum(seq)
    assert np.allclose(partials, [1, 2, 3, 4, 5])


def test_classification_geometric_limit():
    seq = geometric_sequence(50)
    partials = bl.classification_sum(seq)
    assert abs(partials[-1] - 1.0) < 1e-12  # sum of 2^-k
    assert np.all(np.diff(partials) >= 0)


def test_classification_default_family_at_1e6():
    # summation oracle: exactly rounded fsum of the same terms
    gaps = RadiiSpec().gaps(10**6)
    partials = bl.classification_sum(1.0 - gaps)
    oracle = math.fsum(gaps.tolist())
    assert abs(partials[-1] - oracle) < 1e-9
    assert abs(oracle - 0.9966759101815621) < 1e-12  # frozen oracle value


def test_frostman_arithmetico_geometric_limit():
    seq = geometric_sequence(50)
    partials = bl.frostman_sum(seq)
    assert abs(partials[-1] - 2 * math.log(2.0)) < 1e-12
    assert np.all(np.diff(partials) >= 0)


def test_frostman_term_at_unit_derivative():
    assert bl.frostman_sum(np.array([1.0]))[-1] == 0.0


def test_frostman_degree_collapse():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    with pytest.raises(bl.DegreeCollapseError):
        bl.frostman_sum(bl.CompositionSequence((sq,)))


def test_frostman_default_family_at_1e6():
    gaps = RadiiSpec().gaps(10**6)
    partials = bl.frostman_sum(1.0 - gaps)
    oracle = math.fsum((g * math.log(1.0 / g) for g in gaps.tolist()))
    assert abs(partials[-1] - oracle) < 1e-9
    assert abs(oracle - 4.183103308839697) < 1e-12  # frozen oracle value


def test_blaschke_sum_trivial():
    assert bl.blaschke_sum(()) == 0.0
    assert bl.blaschke_sum((0.5, 0.5)) == pytest.approx(1.0)


def test_blaschke_sum_tracked_vs_stepwise():
    # additive bookkeeping: zeros of B_8 = zeros of B_7 plus fresh preimages
    seq = random_degree2_sequence(8, seed=42)
    B7, B8 = seq.composite(7), seq.composite(8)
    w = seq.generators[7].zeros[0]
    fresh = bl.preimages(B7, w)
    lhs = bl.blaschke_sum(B8.zeros)
    rhs = bl.blaschke_sum(B7.zeros) + bl.blaschke_sum(fresh)
    assert abs(lhs - rhs) < 1e-9
    # and every tracked zero is a genuine zero
    assert np.abs(bl.product_eval(B8, B8.zero_array())).max() < 1e-8


def test_schwarz_lower_bound_rotation_case():
    assert bl.schwarz_lower_bound(1.0, 0.3 + 0.4j) == pytest.approx(0.5)


def test_schwarz_lower_bound_direct_value():
    assert bl.schwarz_lower_bound(0.9, 0.5) == pytest.approx(0.35)


def test_schwarz_lower_bound_domain():
    with pytest.raises(bl.DomainError):
        bl.schwarz_lower_bound(0.9, 1.0)
    with pytest.raises(bl.DomainError):
        bl.schwarz_lower_bound(0.0, 0.5)


def test_schwarz_lower_bound_sampling_oracle():
    rng = np.random.default_rng(21)
    for _ in range(10):
        g = random_product(rng, int(rng.integers(2, 5)))
        lam = abs(bl.derivative_at_origin(g))
        pts = lam * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(1j * rng.uniform(0, 2 * np.pi, 200))
        vals = np.abs(bl.product_eval(g, pts))
        bounds = np.array([bl.schwarz_lower_bound(lam, z) for z in pts])
        assert (vals - bounds).min() >= -1e-12


def test_interior_gauge_trivial_cases():
    seq = geometric_sequence(20)
    assert bl.interior_cauchy_gauge(seq, 5, 0) == 0.0
    ident = identity_sequence(20)
    assert bl.interior_cauchy_gauge(ident, 5, 10) == 0.0


def test_interior_gauge_geometric_and_oracle():
    seq = geometric_sequence(20)
    grid = (8, 32)
    gauge = bl.interior_cauchy_gauge(seq, 10, 10, radius=0.5, grid=grid)
    assert gauge < 1e-2
    # independent evaluation oracle over the same grid
    pts = polar_grid(0.5, *grid)
    direct = np.abs(bl.nested_eval(seq, 20, pts) - bl.nested_eval(seq, 10, pts)).max()
    assert gauge == pytest.approx(direct, abs=1e-13)


def test_interior_gauge_monotone_partials_consistency():
    seq = random_degree2_sequence(6, seed=5)
    partials = bl.classification_sum(seq)
    assert np.all(np.diff(partials) >= 0)
    # recompute via materialized derivative ratios
    derivs = [bl.derivative_at_origin(seq.composite(n)) for n in range(1, 7)]
    ratios = np.abs(np.array(derivs)) / np.concatenate([[1.0], np.abs(np.array(derivs[:-1]))])
    alt = np.cumsum(1.0 - ratios)
    assert np.abs(alt - partials).max() < 1e-9


def test_decade_stats_and_verdicts():
    gaps = RadiiSpec().gaps(10**5)
    max_step, increase = decade_stats(gaps)
    assert max_step == pytest.approx(gaps[10**4], rel=1e-12)  # first step of the decade
    assert increase == pytest.approx(np.sum(gaps[10**4:]), rel=1e-9)
    assert bl.convergence_verdict(gaps) == "convergent"
    assert bl.convergence_verdict(np.ones(30)) == "divergent"


def test_constant_family_flags_hypothesis_failure():
    seq = constant_sequence(30)
    report = bl.build_report(seq)
    assert report.verdicts["classification"] == "divergent"
    assert report.verdicts["frostman"] == "divergent"


def test_report_kv_serialization():
    seq = geometric_sequence(10)
    report = bl.build_report(seq, gauge_pairs=((2, 2),), grid=(4, 8))
    keys = [k for k, _ in report.to_kv()]
    assert "classification_partial_final" in keys
    assert "verdict_classification" in keys
    assert any(k.startswith("interior_gauge_n2_m2") for k in keys)


def test_frostman_terms_shape():
    terms = frostman_terms(np.array([0.5, 0.75, 1.0]))
    assert terms[2] == 0.0
    assert terms[0] == pytest.approx(0.5 * math.log(2.0))
