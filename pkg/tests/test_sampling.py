"""Zero-grid sampling and the reconstruction series."""

import cmath

import numpy as np
import pytest

from polar_olct import (
    OffsetParams,
    ReconstructionReport,
    SampleGrid,
    ZeroTable,
    default_m_sum,
    random_spectrum,
    reconstruct_coefficient,
    reconstruct_field,
    reconstruct_isotropic,
    reconstruct_spectrum,
    sample_count,
    sample_field,
    stark_interpolate,
    stark_kernel,
    synthesize,
    synthesize_sonine,
    theta_kernel,
)


def rel_err(x, truth):
    return float(np.max(np.abs(x - truth))) / (float(np.max(np.abs(truth))) or 1.0)


# --------------------------------------------------------------------------
# azimuthal interpolation
# --------------------------------------------------------------------------

def test_stark_kronecker():
    for K in (0, 1, 3, 5):
        nodes = 2.0 * np.pi * np.arange(2 * K + 1) / (2 * K + 1)
        for l in range(2 * K + 1):
            vals = stark_kernel(nodes, l, K)
            assert abs(vals[l] - 1.0) < 1e-12
            others = np.delete(vals, l)
            if others.size:
                assert np.max(np.abs(others)) < 1e-12


def test_stark_partition_of_unity():
    rng = np.random.default_rng(1)
    for K in (1, 2, 5):
        th = rng.uniform(-np.pi, np.pi, 200)
        total = sum(stark_kernel(th, l, K) for l in range(2 * K + 1))
        assert np.max(np.abs(total - 1.0)) < 1e-12


def test_stark_exact_on_band_limited_polynomials():
    rng = np.random.default_rng(2)
    for K in (1, 2, 3, 5):
        nodes = 2.0 * np.pi * np.arange(2 * K + 1) / (2 * K + 1)
        c = rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1)
        poly = lambda t: sum(c[K + n] * np.exp(1j * n * np.asarray(t))
                             for n in range(-K, K + 1))
        th = rng.uniform(-np.pi, np.pi, 200)
        interp = stark_interpolate(poly(nodes), th, K)
        assert np.max(np.abs(interp - poly(th))) < 1e-12


def test_stark_interpolate_basics():
    K = 3
    nodes = 2.0 * np.pi * np.arange(2 * K + 1) / (2 * K + 1)
    const = stark_interpolate(np.full(2 * K + 1, 2.5 + 0j), 1.234, K)
    assert abs(const - 2.5) < 1e-12
    vals = np.exp(1j * K * nodes)
    probe = stark_interpolate(vals, 0.37, K)
    assert abs(probe - cmath.exp(1j * K * 0.37)) < 1e-12
    reproduced = stark_interpolate(vals, nodes, K)
    assert np.max(np.abs(reproduced - vals)) < 1e-12
    with pytest.raises(ValueError):
        stark_interpolate(np.ones(4), 0.0, K)
    with pytest.raises(ValueError):
        stark_kernel(0.1, 7, K)


def test_stark_moment_identity_by_quadrature():
    # integral of o_l(t) e^{-i n t} over the circle, |n| <= K
    K, l, n = 2, 1, -1
    th = -np.pi + 2.0 * np.pi * np.arange(8192) / 8192
    quad = np.sum(stark_kernel(th, l, K) * np.exp(-1j * n * th)) * (2.0 * np.pi / 8192)
    target = (2.0 * np.pi / (2 * K + 1)) * cmath.exp(-1j * n * 2.0 * np.pi * l / (2 * K + 1))
    assert abs(quad - target) < 1e-10


# --------------------------------------------------------------------------
# radial interpolation
# --------------------------------------------------------------------------

def test_theta_kernel_at_its_sample(rot, offset_params):
    z = ZeroTable.for_order(0, 3).zeros
    for params in (rot, offset_params):
        omega = np.pi
        alpha = params.b * z[0] / omega
        assert theta_kernel(alpha, alpha, z[0], 0, params, omega) == 1.0
        # two-sided probes just outside the switch radius extrapolate to 1
        lo = theta_kernel(alpha * (1 - 1e-5), alpha, z[0], 0, params, omega)
        hi = theta_kernel(alpha * (1 + 1e-5), alpha, z[0], 0, params, omega)
        assert abs(0.5 * (lo + hi) - 1.0) < 1e-8


def test_theta_kernel_vanishes_at_other_zeros(rot):
    z = ZeroTable.for_order(1, 6).zeros
    omega = np.pi
    alphas = rot.b * z / omega
    for jp in (1, 3, 5):
        assert abs(theta_kernel(alphas[jp], alphas[0], z[0], 1, rot, omega)) < 1e-12


def test_theta_kernel_matches_direct_formula():
    params = OffsetParams(1.0, 1.0, 0.0, 1.0, (0.5, 0.0), (0.0, 0.0))
    assert abs(params.mu2 - 0.5) < 1e-15
    z = ZeroTable.for_order(0, 2).zeros
    omega, b = np.pi, params.b
    alpha = b * z[0] / omega
    r = 0.3
    from polar_olct import bessel_j
    num = 2 * b * (params.mu2 + alpha) * bessel_j(0, omega * r / b)
    den = omega * bessel_j(1, z[0]) * (alpha ** 2 - r ** 2 + 2 * params.mu2 * (alpha - r))
    assert abs(theta_kernel(r, alpha, z[0], 0, params, omega) - num / den) < 1e-14
    # continuity across the sample point
    lo = theta_kernel(alpha * (1 - 2e-6), alpha, z[0], 0, params, omega)
    hi = theta_kernel(alpha * (1 + 2e-6), alpha, z[0], 0, params, omega)
    assert abs(0.5 * (lo + hi) - 1.0) < 1e-8
    with pytest.raises(ValueError):
        theta_kernel(r, 1.1 * alpha, z[0], 0, params, omega)


def test_default_m_sum(rot, offset_params):
    assert default_m_sum(rot, 1.0, 10.0) == 0
    m = default_m_sum(offset_params, 1.0, 10.0)
    assert m >= 20 and m == int(np.ceil(max(offset_params.mu1, offset_params.mu2) * 10.0)) + 20


# --------------------------------------------------------------------------
# grids, sample sets, counts
# --------------------------------------------------------------------------

def test_sample_counts_match_budget_formulas(rot):
    assert sample_count(2, 10, "theorem1") == 2500
    assert sample_count(2, 10, "theorem2") == 500
    assert sample_count(1, 10, "theorem1") == 900
    assert sample_count(1, 10, "theorem2") == 300
    for k in range(0, 4):
        for n in (10, 20, 40):
            ratio = sample_count(k, n, "theorem1") / sample_count(k, n, "theorem2")
            assert ratio == 2 * k + 1
    with pytest.raises(ValueError):
        sample_count(2, 10, "corollary1")
    with pytest.raises(ValueError):
        sample_count(-1, 10, "theorem1")


def test_sample_field_counts_and_zero_field(rot):
    g1 = SampleGrid.theorem1(rot, np.pi, 2, 10)
    g2 = SampleGrid.theorem2(rot, np.pi, 2, 10)
    zero = lambda r, t: np.zeros(np.broadcast(r, t).shape, complex)
    s1 = sample_field(zero, g1)
    s2 = sample_field(zero, g2)
    assert s1.total_count == 2500
    assert s2.total_count == 500
    assert all(np.max(np.abs(s1.slab(n))) == 0.0 for n in range(-2, 3))
    assert g1.thetas.size == 5 and g2.thetas.size == 5


def test_grid_validation(rot):
    with pytest.raises(ValueError):
        SampleGrid("bogus", rot, 1.0, 1, {0: 0}, {0: np.array([1.0])})


# --------------------------------------------------------------------------
# reconstruction: isotropic and coefficients
# --------------------------------------------------------------------------

def _fixed_order_profile(params, omega, order, seed):
    spec = random_spectrum(omega, 0, 3, seed=seed, order_map="fixed", fixed_order=order)
    return synthesize(spec, params).coefficient(0)


def test_reconstruct_isotropic_classical_reduction(rot):
    omega = np.pi
    prof = _fixed_order_profile(rot, omega, 0, seed=41)
    zeros = ZeroTable.for_order(0, 40).zeros[:40]
    alphas = rot.b * zeros / omega
    samples = prof(alphas)
    r = np.linspace(0.05, 0.9 * alphas[-1], 150)
    rec = reconstruct_isotropic(samples, 0, rot, omega, 0, r)
    assert rel_err(rec, prof(r)) <= 1e-6


def test_reconstruct_isotropic_kronecker_at_samples(rot, lct):
    omega = np.pi
    for params in (rot, lct):
        for order in (0, 1):
            prof = _fixed_order_profile(params, omega, order, seed=42 + order)
            zeros = ZeroTable.for_order(order, 25).zeros[:25]
            alphas = params.b * zeros / omega
            samples = prof(alphas)
            rec = reconstruct_isotropic(samples, order, params, omega, 0, alphas[4])
            assert abs(rec - samples[4]) <= 1e-9 * max(np.max(np.abs(samples)), 1e-30)


def test_reconstruct_isotropic_zero_samples(rot):
    rec = reconstruct_isotropic(np.zeros(10), 0, rot, 1.0, 0, np.linspace(0.1, 2.0, 5))
    assert np.max(np.abs(rec)) == 0.0


def test_alternating_prefactor_flips_odd_orders(lct):
    omega = np.pi
    prof = _fixed_order_profile(lct, omega, 1, seed=43)
    zeros = ZeroTable.for_order(1, 25).zeros[:25]
    alphas = lct.b * zeros / omega
    samples = prof(alphas)
    r = np.linspace(0.05, 0.9 * alphas[-1], 120)
    unit = reconstruct_isotropic(samples, 1, lct, omega, 0, r)
    alt = reconstruct_isotropic(samples, 1, lct, omega, 0, r, prefactor="alternating")
    assert rel_err(unit, prof(r)) <= 1e-6
    assert np.max(np.abs(alt + unit)) < 1e-12 * max(np.max(np.abs(unit)), 1e-30)


def test_reconstruct_coefficient_order_one(rot):
    omega = np.pi
    spec = random_spectrum(omega, 1, 3, seed=44)
    field = synthesize(spec, rot)
    zeros = ZeroTable.for_order(1, 40).zeros[:40]
    alphas = rot.b * zeros / omega
    samples = field.coefficient(1)(alphas)
    r = np.linspace(0.05, 0.9 * alphas[-1], 150)
    rec = reconstruct_coefficient(samples, 1, rot, omega, 0, r)
    assert rel_err(rec, field.coefficient(1)(r)) <= 1e-6
    rec_at = reconstruct_coefficient(samples, 1, rot, omega, 0, alphas[7])
    assert abs(rec_at - samples[7]) <= 1e-9 * max(np.max(np.abs(samples)), 1e-30)


# --------------------------------------------------------------------------
# reconstruction: full fields
# --------------------------------------------------------------------------

def test_reconstruct_field_zero_samples(rot):
    grid = SampleGrid.theorem1(rot, np.pi, 1, 4)
    zero = lambda r, t: np.zeros(np.broadcast(r, t).shape, complex)
    samples = sample_field(zero, grid)
    out = reconstruct_field(samples, "theorem1", rot, 0, np.array([0.4]), np.array([0.2]))
    assert np.max(np.abs(out)) == 0.0


def test_reconstruct_field_mode_mismatch(rot):
    grid = SampleGrid.theorem1(rot, np.pi, 1, 4)
    zero = lambda r, t: np.zeros(np.broadcast(r, t).shape, complex)
    samples = sample_field(zero, grid)
    with pytest.raises(ValueError):
        reconstruct_field(samples, "theorem2", rot, 0, np.array([0.4]), np.array([0.2]))
    with pytest.raises(ValueError):
        reconstruct_spectrum(samples, "corollary1", rot, 0, np.array([0.4]), np.array([0.2]))


def test_reconstruct_field_both_modes_reduction(rot, probe_mesh):
    omega = np.pi
    spec1 = random_spectrum(omega, 2, 3, seed=45)
    f1 = synthesize(spec1, rot)
    g1 = SampleGrid.theorem1(rot, omega, 2, 6)
    s1 = sample_field(f1, g1)
    r_hi = 0.9 * float(g1.alphas(0)[-1])
    R, TH = probe_mesh(0.05, r_hi, 20)
    rec1 = reconstruct_field(s1, "theorem1", rot, 0, R, TH)
    assert rel_err(rec1, f1.evaluate(R, TH)) <= 1e-5

    spec2 = random_spectrum(omega, 2, 3, seed=46, order_map="fixed", fixed_order=0)
    f2 = synthesize(spec2, rot)
    g2 = SampleGrid.theorem2(rot, omega, 2, 6)
    s2 = sample_field(f2, g2)
    rec2 = reconstruct_field(s2, "theorem2", rot, 0, R, TH)
    assert rel_err(rec2, f2.evaluate(R, TH)) <= 1e-5


def test_theorem_modes_agree_for_isotropic_fields(rot):
    omega = np.pi
    spec = random_spectrum(omega, 0, 3, seed=47)
    f = synthesize(spec, rot)
    g1 = SampleGrid.theorem1(rot, omega, 0, 5)
    g2 = SampleGrid.theorem2(rot, omega, 0, 5)
    s1 = sample_field(f, g1)
    s2 = sample_field(f, g2)
    r = np.linspace(0.05, 0.9 * float(g1.alphas(0)[-1]), 60)
    th = np.full_like(r, 0.3)
    rec1 = reconstruct_field(s1, "theorem1", rot, 0, r, th)
    rec2 = reconstruct_field(s2, "theorem2", rot, 0, r, th)
    assert np.max(np.abs(rec1 - rec2)) <= 1e-9 * max(np.max(np.abs(rec1)), 1e-30)
    # K=0 fixed-order reconstruction degenerates to the isotropic series
    iso = reconstruct_isotropic(s2.slab(0)[:, 0], 0, rot, omega, 0, r)
    assert np.max(np.abs(rec2 - iso)) <= 1e-12 * max(np.max(np.abs(iso)), 1e-30)


def test_node_consistency_at_grid_points(rot):
    omega = np.pi
    spec = random_spectrum(omega, 2, 3, seed=48)
    f = synthesize(spec, rot)
    grid = SampleGrid.theorem1(rot, omega, 2, 5)
    samples = sample_field(f, grid)
    al = grid.alphas(2)
    th = grid.thetas
    probe_r = np.array([al[3], al[7]])
    probe_t = np.array([th[1], th[4]])
    rec = reconstruct_field(samples, "theorem1", rot, 0, probe_r, probe_t)
    truth = f.evaluate(probe_r, probe_t)
    assert np.max(np.abs(rec - truth)) <= 1e-9 * max(np.max(np.abs(truth)), 1e-30)


def test_truncation_error_decreases_with_resolution(rot, probe_mesh):
    # non-terminating spectra make the truncation honest
    omega = np.pi
    weights = {n: (0.5 + 0.4j if n else 1.0) for n in (-1, 0, 1)}
    f = synthesize_sonine(weights, rot, omega, order_map="fixed", fixed_order=0)
    zeros_min = ZeroTable.for_order(0, 9).zeros
    r_hi = 0.9 * rot.b * zeros_min[-1] / omega
    R, TH = probe_mesh(0.05, r_hi, 12)
    truth = f.evaluate(R, TH)
    errs = []
    for n_res in (3, 6, 12):
        grid = SampleGrid.theorem2(rot, omega, 1, n_res)
        samples = sample_field(f, grid)
        rec = reconstruct_field(samples, "theorem2", rot, 0, R, TH)
        errs.append(rel_err(rec, truth))
    assert errs[0] > 1e-5  # under-resolved case is visibly wrong
    assert errs[1] < 0.2 * errs[0]
    assert errs[2] < 0.2 * errs[1]


# --------------------------------------------------------------------------
# reconstruction: spectra
# --------------------------------------------------------------------------

def test_reconstruct_spectrum_reduction(lct, probe_mesh):
    omega = 1.0
    spec = random_spectrum(omega, 2, 3, seed=49)
    f = synthesize(spec, lct)
    grid = SampleGrid.corollary1(lct, 400.0, 2, omega)
    samples = sample_field(f.spectrum_values, grid)
    rho = np.linspace(0.02, 0.9 * omega, 20)
    phi = np.linspace(-np.pi, np.pi, 20, endpoint=False)
    PH, RH = np.meshgrid(phi, rho)
    rec = reconstruct_spectrum(samples, "corollary1", lct, 0, RH, PH)
    truth = f.spectrum_values(RH, PH)
    assert rel_err(rec, truth) <= 1e-5
    # the alternate inner chirp is inconsistent once a != d
    bad = reconstruct_spectrum(samples, "corollary1", lct, 0, RH, PH, inner_chirp="spatial")
    assert rel_err(bad, truth) > 1e-3


def test_reconstruct_spectrum_fixed_order(lct):
    omega = 1.0
    spec = random_spectrum(omega, 2, 3, seed=50, order_map="fixed", fixed_order=0)
    f = synthesize(spec, lct)
    grid = SampleGrid.corollary2(lct, 400.0, 2, omega)
    samples = sample_field(f.spectrum_values, grid)
    rho = np.linspace(0.02, 0.9 * omega, 15)
    phi = np.linspace(-np.pi, np.pi, 15, endpoint=False)
    PH, RH = np.meshgrid(phi, rho)
    rec = reconstruct_spectrum(samples, "corollary2", lct, 0, RH, PH)
    truth = f.spectrum_values(RH, PH)
    assert rel_err(rec, truth) <= 1e-5


def test_reconstruct_spectrum_grid_point_interpolation(lct):
    omega = 1.0
    spec = random_spectrum(omega, 1, 3, seed=51, order_map="fixed", fixed_order=0)
    f = synthesize(spec, lct)
    grid = SampleGrid.corollary2(lct, 400.0, 1, omega)
    samples = sample_field(f.spectrum_values, grid)
    al = grid.alphas(0)
    th = grid.thetas
    rec = reconstruct_spectrum(samples, "corollary2", lct, 0,
                               np.array([al[5]]), np.array([th[1]]))
    sample_val = samples.slab(0)[5, 1]
    assert abs(rec[0] - sample_val) <= 1e-8 * max(abs(sample_val), 1e-30)


def test_reconstruct_spectrum_zero_input(lct):
    grid = SampleGrid.corollary1(lct, 100.0, 1, 1.0)
    zero = lambda r, p: np.zeros(np.broadcast(r, p).shape, complex)
    samples = sample_field(zero, grid)
    out = reconstruct_spectrum(samples, "corollary1", lct, 0,
                               np.array([0.4]), np.array([0.1]))
    assert np.max(np.abs(out)) == 0.0


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def test_reconstruction_report(rot):
    grid = SampleGrid.theorem2(rot, np.pi, 1, 4)
    zero = lambda r, t: np.zeros(np.broadcast(r, t).shape, complex)
    samples = sample_field(zero, grid)
    truth = np.zeros(144, complex)
    recon = np.full(144, 1e-8 + 0j)
    rep = ReconstructionReport.from_run("theorem2", samples, 0, truth, recon, 0.5,
                                        details={"note": "zeros"})
    assert rep.n_probes == 144
    assert rep.max_abs_error == pytest.approx(1e-8)
    assert rep.sample_total == samples.total_count
    with pytest.raises(ValueError):
        ReconstructionReport.from_run("theorem2", samples, 0, truth[:50], recon[:50], 0.1)
