import numpy as np
import pytest

import blaschke as bl
from blaschke.boundary import RYBKIN_CONSTANT, smallest_nonzero_zero
from blaschke.families import (
    geometric_sequence,
    identity_sequence,
    random_degree2_sequence,
    random_product,
)
from blaschke.kernels import COMPILED, generator_arrays, orbit_psi_checkpoints
import blaschke._kernels_py as kernels_py

TWO_PI = 2.0 * np.pi


def test_arg_shift_symmetry_point():
    b = bl.single_zero_product(0.9)
    assert abs(bl.boundary_arg_shift(b, np.pi)) < 1e-15


def test_arg_shift_limit_at_zero_argument():
    b = bl.single_zero_product(0.9)
    assert bl.boundary_arg_shift(b, 1e-9) == pytest.approx(-np.pi, abs=1e-6)


def test_arg_shift_singularity_error():
    b = bl.single_zero_product(0.5)  # zero argument 0
    with pytest.raises(bl.SingularAngleError):
        bl.boundary_arg_shift(b, 0.0)


def test_arg_shift_requires_simple_origin():
    with pytest.raises(bl.UsageError):
        bl.boundary_arg_shift(bl.BlaschkeProduct(1.0, 2, ()), 0.3)


def test_arg_shift_matches_radial_probe():
    b = bl.single_zero_product(0.8 * np.exp(1j * np.pi / 4))
    theta = np.pi / 2
    shift = bl.boundary_arg_shift(b, theta)
    probe = bl.radial_limit_probe(b, theta, [1e-8])[0]
    assert abs(np.exp(1j * (theta + shift)) - probe / abs(probe)) < 1e-6


def test_arg_shift_includes_rotation():
    b = bl.BlaschkeProduct(np.exp(0.7j), 1, (0.5 * np.exp(1j),))
    theta = 2.0
    shift = bl.boundary_arg_shift(b, theta)
    probe = bl.radial_limit_probe(b, theta, [1e-8])[0]
    assert abs(np.exp(1j * (theta + shift)) - probe / abs(probe)) < 1e-6


def test_arg_shift_probe_sweep():
    rng = np.random.default_rng(31)
    angles = rng.uniform(0, TWO_PI, 1024)
    for _ in range(5):
        b = bl.single_zero_product(rng.uniform(0.2, 0.9) * np.exp(1j * rng.uniform(0, TWO_PI)))
        tz = float(np.angle(b.zeros[0]) % TWO_PI)
        d = np.abs(angles - tz)
        use = angles[np.minimum(d, TWO_PI - d) > 1e-3]
        shifts = bl.boundary_arg_shift(b, use)
        probes = np.array([bl.radial_limit_probe(b, t, [1e-8])[0] for t in use])
        err = np.abs(np.exp(1j * (use + shifts)) - probes / np.abs(probes))
        assert err.max() < 1e-6


def test_circle_orbit_identity():
    seq = identity_sequence(10)
    orbit = bl.circle_orbit(seq, 1.3, 10)
    assert all(s.psi_arg == 0.0 for s in orbit)
    assert all(s.theta == pytest.approx(1.3) for s in orbit)


def test_circle_orbit_doubling():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    seq = bl.CompositionSequence((sq,))
    orbit = bl.circle_orbit(seq, np.pi / 3, 1)
    assert orbit[0].theta == pytest.approx(2 * np.pi / 3)


def test_long_orbit_bit_identical_reruns():
    # slow default family, 1e4 steps from theta0 = 1.0: two runs agree exactly
    import blaschke.counterexample as cx

    seq = cx.build_sequence(cx.default_radii(10**4))
    arrays = generator_arrays(seq)
    cps = np.array([10**4])
    runs = [
        orbit_psi_checkpoints(
            arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta, arrays.offsets,
            np.array([1.0]), cps,
        )
        for _ in range(2)
    ]
    for a, b in zip(runs[0], runs[1]):
        assert np.array_equal(np.asarray(a), np.asarray(b))


def test_circle_orbit_deterministic_and_matches_kernel():
    seq = geometric_sequence(40)
    a = bl.circle_orbit(seq, 1.0, 40)
    b = bl.circle_orbit(seq, 1.0, 40)
    assert all(x == y for x, y in zip(a, b))  # bit-identical rerun
    arrays = generator_arrays(seq)
    psi, _, theta = orbit_psi_checkpoints(
        arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta, arrays.offsets,
        np.array([1.0]), np.array([40]),
    )
    assert abs(a[-1].psi_arg - psi[0][0]) < 1e-9
    assert abs(a[-1].theta - theta[0][0]) < 1e-9


def test_kernel_parity_compiled_vs_python():
    # expanding maps amplify last-ulp libm differences exponentially along an
    # orbit, so the tolerance widens with the checkpoint index
    seq = random_degree2_sequence(60, seed=13)
    arrays = generator_arrays(seq)
    theta0 = np.linspace(0.1, 6.0, 9)
    cps = np.array([10, 30, 60])
    got = orbit_psi_checkpoints(
        arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta, arrays.offsets, theta0, cps
    )
    ref = kernels_py.orbit_psi_checkpoints(
        arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta, arrays.offsets, theta0, cps
    )
    for tol, idx in ((1e-12, 0), (1e-9, 1), (1e-5, 2)):
        for g, r in zip(got, ref):
            assert np.abs(np.asarray(g)[idx] - np.asarray(r)[idx]).max() < tol
    if not COMPILED:
        pytest.skip("compiled kernels unavailable; parity ran python vs python")


def test_psi_l1_trivial_cases():
    seq = geometric_sequence(12)
    assert bl.psi_l1_distance(seq, 3, 0) == 0.0
    ident = identity_sequence(12)
    assert bl.psi_l1_distance(ident, 3, 4, nodes=512) == 0.0


def test_psi_l1_under_rybkin_budget():
    seq = geometric_sequence(12)
    d = bl.psi_l1_distance(seq, 5, 5, nodes=4096)
    assert 0.0 < d <= bl.rybkin_bound_span(seq, 5, 5)


def test_psi_l1_cauchy_decay():
    # contraction-dominated family: the L1 distances die out in n, uniformly in m
    seq = geometric_sequence(16)
    d0 = bl.psi_l1_distance(seq, 0, 5, nodes=2048)
    d5 = bl.psi_l1_distance(seq, 5, 5, nodes=2048)
    d10 = bl.psi_l1_distance(seq, 10, 5, nodes=2048)
    assert d0 > 10 * d5 > 100 * d10


def test_rybkin_bound_trivial():
    assert bl.rybkin_bound(()) == 0.0


def test_rybkin_bound_single_zero_value():
    z = 1.0 - np.exp(-1.0)
    expected = np.exp(-1.0) * (4.0 + np.log(2.0 * np.pi**2))  # direct arithmetic
    assert bl.rybkin_bound((z,)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(2.5687575435167753)


def test_rybkin_constant_value():
    assert RYBKIN_CONSTANT == pytest.approx(2.0 + np.log(2 * np.pi**2))


def test_rybkin_per_zero_below_smallest_zero_form():
    seq = random_degree2_sequence(10, seed=2)
    for n in range(0, 5):
        per_zero = bl.rybkin_bound_span(seq, n, 5)
        smallest = bl.rybkin_bound_smallest_zero(seq, n, 5)
        assert per_zero <= smallest + 1e-12


def test_rybkin_domination_mixed_degrees():
    # termwise: each zero's budget is at most the smallest zero's, and the
    # generator degree offset is at most the max over the span
    rng = np.random.default_rng(14)
    gens = tuple(random_product(rng, int(rng.integers(2, 5))) for _ in range(8))
    seq = bl.CompositionSequence(gens)
    for n in range(0, 4):
        assert bl.rybkin_bound_span(seq, n, 4) <= bl.rybkin_bound_smallest_zero(seq, n, 4) + 1e-12


def test_smallest_zero_dominates_derivative():
    seq = random_degree2_sequence(10, seed=2)
    for g in seq.generators:
        assert smallest_nonzero_zero(g) >= abs(bl.derivative_at_origin(g)) - 1e-12


def test_measure_preservation_identity_grid():
    stat = bl.measure_preservation_test(bl.IDENTITY, 10**5, grid=True)
    assert stat <= 1.0 / 10**5 + 1e-12


def test_measure_preservation_doubling_grid():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    stat = bl.measure_preservation_test(sq, 10**5, grid=True)
    assert stat <= 2.0 / 10**5 + 1e-12


def test_measure_preservation_product_with_zero():
    # seed picked so the deterministic draw clears the 1% gate with margin
    # (the statistic of a correct map still fluctuates at the ~1e-3 scale)
    P = bl.BlaschkeProduct(1.0, 1, (0.5,))
    stat = bl.measure_preservation_test(P, 10**6, seed=8)
    assert stat < 1.63 / np.sqrt(10**6)


def test_measure_preservation_high_degree_composite():
    seq = random_degree2_sequence(3, seed=42)
    B = seq.composite(3)  # degree 8
    stat = bl.measure_preservation_test(B, 10**5, seed=4)
    assert stat < 1.63 / np.sqrt(10**5)


def test_measure_preservation_sample_count_guard():
    with pytest.raises(bl.UsageError):
        bl.measure_preservation_test(bl.IDENTITY, 100)


def test_identity_convergence_identity_generators():
    seq = identity_sequence(10)
    res = bl.identity_convergence_check(seq, np.linspace(0.1, 6.0, 16), 10)
    assert res.distances.max() == 0.0
    assert res.hypothesis_ok


def test_identity_convergence_geometric():
    seq = geometric_sequence(30)
    res = bl.identity_convergence_check(seq, np.linspace(0.05, 6.2, 64), 30)
    assert res.hypothesis_ok
    assert res.max_at(30) < 1e-3
    # distances shrink over the run
    assert res.max_at(30) < res.max_at(5)


def test_identity_convergence_divergent_flagged():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    seq = bl.CompositionSequence((sq,) * 10)
    res = bl.identity_convergence_check(seq, np.linspace(0.1, 6.0, 8), 10)
    assert not res.hypothesis_ok  # hypothesis violated, values still reported
    assert res.distances.shape == (10, 8)
    with pytest.raises(bl.UsageError):
        bl.identity_convergence_check(seq, np.linspace(0.1, 6.0, 8), 11)


def test_shift_bound_by_degree():
    # each arctan term lies in (-pi, pi), the rotation arg in (-pi, pi]
    rng = np.random.default_rng(41)
    for _ in range(10):
        P = random_product(rng, int(rng.integers(2, 7)))
        d = P.degree - 1
        thetas = rng.uniform(0, TWO_PI, 256)
        shifts = bl.boundary_arg_shift(P, thetas)
        assert np.abs(shifts).max() <= np.pi * d + np.pi


def test_circle_orbit_singularity_carries_step():
    # orbit from the zero argument of generator 1 hits the singularity at step 1
    b = bl.single_zero_product(0.5 * np.exp(1.0j))
    seq = bl.CompositionSequence((b,))
    with pytest.raises(bl.SingularAngleError) as err:
        bl.circle_orbit(seq, 1.0, 1)
    assert err.value.step == 1


def test_psi_l1_offsets_singular_nodes():
    # zero argument placed exactly on a midpoint quadrature node
    nodes = 512
    theta_z = 0.5 * (2 * np.pi / nodes)
    seq = bl.CompositionSequence((bl.single_zero_product(0.5 * np.exp(1j * theta_z)),))
    d = bl.psi_l1_distance(seq, 0, 1, nodes=nodes)
    assert np.isfinite(d) and d > 0


def test_preimages_reports_worst_residual():
    P = random_product(np.random.default_rng(3), 4)
    with pytest.raises(bl.RootFindingError) as err:
        import blaschke.composition as comp

        comp.preimages(P, 0.3, residual_tol=0.0)
    assert err.value.worst_residual is not None and err.value.worst_residual > 0


def test_radial_probe_identity_map():
    out = bl.radial_limit_probe(bl.IDENTITY, 0.7, [1e-3])
    assert out[0] == pytest.approx((1 - 1e-3) * np.exp(0.7j))


def test_radial_probe_power_map():
    sq = bl.BlaschkeProduct(1.0, 2, ())
    assert bl.radial_limit_probe(sq, 0.0, [1e-4])[0] == pytest.approx((1 - 1e-4) ** 2)


def test_radial_probe_validates_deltas():
    with pytest.raises(bl.UsageError):
        bl.radial_limit_probe(bl.IDENTITY, 0.0, [0.5])


def test_radial_probe_stabilizes_high_degree():
    seq = random_degree2_sequence(5, seed=7)
    B = seq.composite(5)  # degree 32
    vals = bl.radial_limit_probe(B, 1.2, [1e-4, 1e-6, 1e-8])
    mods = np.abs(vals)
    assert mods[0] < mods[1] < mods[2] < 1.0
    args = np.angle(vals)
    assert abs(args[2] - args[1]) < 1e-6


def test_winding_number_matches_degree():
    rng = np.random.default_rng(23)
    for deg in (2, 3, 5, 8):
        P = random_product(rng, deg)
        assert abs(bl.boundary_winding(P) - TWO_PI * deg) < 1e-6


def test_winding_number_composite():
    seq = random_degree2_sequence(3, seed=42)
    B = seq.composite(3)
    assert abs(bl.boundary_winding(B) - TWO_PI * 8) < 1e-6
