"""Jacobi polynomial machinery and the moment-to-distribution round trip."""
import math

import numpy as np
import pytest

from metadist.jacobi import (
    DegenerateMomentsError,
    JacobiBasis,
    ReconstructedDistribution,
    convergence_diagnostic,
    eval_cdf,
    eval_pdf,
    fourier_jacobi_coeffs,
    jacobi_poly,
    jacobi_poly_explicit,
    meta_reliability,
    modified_moments,
    moment_match_basis,
    norm_h,
    reconstruct,
)
from metadist.moments import METHOD_EMPIRICAL, MomentSequence, SystemParams, moment_sequence
from metadist.quadrature import integrate_finite
from metadist.specfun import reg_inc_beta, rising_factorial

from oracles import beta_moments

BASES = [(0.0, 0.0), (-0.4354, 0.1118), (0.3, 1.7), (2.0, 0.5)]


def _beta_27_13_distribution(order=10):
    seq = MomentSequence(beta_moments(2.7, 1.3, order), METHOD_EMPIRICAL)
    basis = moment_match_basis(seq[1], seq[2], order=order)
    return fourier_jacobi_coeffs(seq, basis)


class TestJacobiPoly:
    def test_degree_zero_is_one(self):
        for al, be in BASES:
            assert jacobi_poly(al, be, 0, 0.37) == 1.0

    def test_shifted_legendre_degree_one(self):
        for x in np.linspace(0.0, 1.0, 11):
            assert jacobi_poly(0.0, 0.0, 1, float(x)) == pytest.approx(
                2.0 * x - 1.0, abs=1e-14
            )

    def test_value_at_one(self):
        for al, be in BASES:
            for n in range(13):
                expected = rising_factorial(al + 1.0, n) / math.factorial(n)
                assert jacobi_poly(al, be, n, 1.0) == pytest.approx(expected, rel=1e-11)

    def test_recurrence_matches_explicit_sum(self):
        xs = np.linspace(0.0, 1.0, 101)
        for al, be in BASES:
            for n in range(13):
                explicit = np.array([jacobi_poly_explicit(al, be, n, float(x)) for x in xs])
                recur = jacobi_poly(al, be, n, xs)
                scale = max(1.0, float(np.max(np.abs(explicit))))
                assert np.max(np.abs(recur - explicit)) <= 1e-10 * scale

    def test_vectorized_matches_scalar(self):
        xs = np.linspace(0.05, 0.95, 7)
        vec = jacobi_poly(0.3, 1.7, 5, xs)
        assert vec == pytest.approx([jacobi_poly(0.3, 1.7, 5, float(x)) for x in xs])

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            jacobi_poly(0.0, 0.0, -1, 0.5)


class TestNormH:
    def test_legendre_values(self):
        for n in range(13):
            assert norm_h(0.0, 0.0, n) == pytest.approx(1.0 / (2.0 * n + 1.0), abs=1e-12)

    def test_n0_is_beta_normalization(self):
        for al, be in BASES:
            expected = math.exp(
                math.lgamma(al + 1.0) + math.lgamma(be + 1.0) - math.lgamma(al + be + 2.0)
            )
            assert norm_h(al, be, 0) == pytest.approx(expected, rel=1e-13)

    def test_chebyshev_weight_mass(self):
        assert norm_h(-0.5, -0.5, 0) == pytest.approx(math.pi, rel=1e-13)

    def test_direct_substitution_case(self):
        assert norm_h(1.0, 0.0, 1) == pytest.approx(0.25, rel=1e-12)

    def test_against_quadrature(self):
        for al, be in [(0.3, 1.7), (1.0, 0.0)]:
            for n in (1, 4, 8):
                f = lambda x: jacobi_poly(al, be, n, x) ** 2 * (1 - x) ** al * x**be
                val = integrate_finite(f, 0.0, 1.0, 1e-11, max_intervals=4000).value
                assert val == pytest.approx(norm_h(al, be, n), rel=1e-9)


class TestOrthogonality:
    def test_cross_terms_vanish(self):
        for al, be in [(0.0, 0.0), (0.3, 1.7)]:
            for m in range(7):
                for n in range(m + 1, 8):
                    f = (
                        lambda x: jacobi_poly(al, be, m, x)
                        * jacobi_poly(al, be, n, x)
                        * (1 - x) ** al
                        * x**be
                    )
                    val = integrate_finite(f, 0.0, 1.0, 1e-10, max_intervals=4000).value
                    assert abs(val) <= 1e-9

    def test_chebyshev_pair_at_float_floor(self):
        # (1-x)^(-1/2) mass within one ulp of x = 1 is ~2e-8 and cannot be
        # resolved in float64, so this singular pair is checked at 1e-7.
        al = be = -0.5
        for m in range(5):
            for n in range(m, 5):
                f = (
                    lambda x: jacobi_poly(al, be, m, x)
                    * jacobi_poly(al, be, n, x)
                    * (1 - x) ** al
                    * x**be
                )
                val = integrate_finite(f, 0.0, 1.0, 1e-7, max_intervals=4000).value
                expected = norm_h(al, be, n) if m == n else 0.0
                assert val == pytest.approx(expected, abs=2e-7)


class TestRodriguesAntiderivative:
    def test_identity(self):
        for al, be in BASES:
            for n in range(1, 9):
                for x in (0.2, 0.5, 0.8):
                    f = lambda t: (1 - t) ** al * t**be * jacobi_poly(al, be, n, t)
                    lhs = integrate_finite(f, 0.0, x, 1e-11, max_intervals=4000).value
                    rhs = (
                        -(1.0 / n)
                        * (1.0 - x) ** (al + 1.0)
                        * x ** (be + 1.0)
                        * jacobi_poly(al + 1.0, be + 1.0, n - 1, x)
                    )
                    assert lhs == pytest.approx(rhs, abs=1e-8)


class TestModifiedMoments:
    def test_base_cases(self):
        seq = MomentSequence((1.0, 0.6, 0.4), METHOD_EMPIRICAL)
        assert modified_moments(seq, 0, 0) == 1.0
        assert modified_moments(seq, 1, 1) == pytest.approx(0.6)
        assert modified_moments(seq, 1, 0) == pytest.approx(0.6 - 1.0)

    def test_insufficient_moments(self):
        seq = MomentSequence((1.0, 0.6), METHOD_EMPIRICAL)
        with pytest.raises(ValueError):
            modified_moments(seq, 2, 0)

    def test_invalid_ell(self):
        seq = MomentSequence((1.0, 0.6, 0.4), METHOD_EMPIRICAL)
        with pytest.raises(ValueError):
            modified_moments(seq, 1, 2)


class TestCoefficients:
    def test_a0_is_inverse_h0(self):
        seq = MomentSequence(beta_moments(2.0, 3.0, 4), METHOD_EMPIRICAL)
        for al, be in BASES:
            dist = fourier_jacobi_coeffs(seq, JacobiBasis(al, be, 4))
            assert dist.coefficients[0] == pytest.approx(1.0 / norm_h(al, be, 0), rel=1e-12)

    def test_beta_moments_kill_corrections(self):
        dist = _beta_27_13_distribution()
        assert max(abs(c) for c in dist.coefficients[1:]) < 1e-8

    def test_matched_basis_zeroes_first_two(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        a0 = dist.coefficients[0]
        assert abs(dist.coefficients[1]) < 1e-9 * abs(a0)
        assert abs(dist.coefficients[2]) < 1e-9 * abs(a0)

    def test_insufficient_moments(self):
        seq = MomentSequence((1.0, 0.6, 0.4), METHOD_EMPIRICAL)
        with pytest.raises(ValueError):
            fourier_jacobi_coeffs(seq, JacobiBasis(0.0, 0.0, 5))


class TestMomentMatching:
    def test_beta22(self):
        basis = moment_match_basis(0.5, 0.3, order=0)
        assert basis.alpha == pytest.approx(1.0, abs=1e-12)
        assert basis.beta == pytest.approx(1.0, abs=1e-12)

    def test_uniform(self):
        basis = moment_match_basis(0.5, 1.0 / 3.0, order=0)
        assert basis.alpha == pytest.approx(0.0, abs=1e-12)
        assert basis.beta == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_rejected(self):
        with pytest.raises(DegenerateMomentsError):
            moment_match_basis(0.5, 0.25)

    def test_bad_mu1_rejected(self):
        with pytest.raises(DegenerateMomentsError):
            moment_match_basis(1.0, 0.5)

    def test_mu2_above_mu1_rejected(self):
        with pytest.raises(DegenerateMomentsError):
            moment_match_basis(0.5, 0.6)


class TestBasisValidation:
    def test_weight_integrability(self):
        with pytest.raises(ValueError):
            JacobiBasis(-1.0, 0.0, 3)
        with pytest.raises(ValueError):
            JacobiBasis(0.0, -1.5, 3)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            JacobiBasis(0.0, 0.0, 21)

    def test_precision_warning(self):
        with pytest.warns(UserWarning):
            JacobiBasis(0.0, 0.0, 15)


class TestPdf:
    def test_beta_round_trip(self):
        dist = _beta_27_13_distribution()
        basis = dist.basis
        xs = np.linspace(0.01, 0.99, 99)
        vals = eval_pdf(dist, xs)
        ref = (1 - xs) ** basis.alpha * xs**basis.beta / norm_h(basis.alpha, basis.beta, 0)
        assert np.max(np.abs(vals - ref)) < 1e-8

    def test_order_zero_is_beta_density(self, paper_params):
        seq = moment_sequence(paper_params, 2)
        dist = reconstruct(seq, order=0)
        basis = dist.basis
        x = 0.37
        expected = (
            (1 - x) ** basis.alpha * x**basis.beta / norm_h(basis.alpha, basis.beta, 0)
        )
        assert eval_pdf(dist, x) == pytest.approx(expected, rel=1e-12)

    def test_unit_mass(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        mass = integrate_finite(
            lambda x: eval_pdf(dist, x), 0.0, 1.0, 1e-9, max_intervals=4000
        ).value
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_open_interval_only(self):
        dist = _beta_27_13_distribution()
        with pytest.raises(ValueError):
            eval_pdf(dist, 0.0)
        with pytest.raises(ValueError):
            eval_pdf(dist, 1.0)


class TestCdf:
    def test_endpoints(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        assert eval_cdf(dist, 0.0) == 0.0
        assert eval_cdf(dist, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_beta_round_trip(self):
        dist = _beta_27_13_distribution()
        xs = np.linspace(0.0, 1.0, 101)
        vals = eval_cdf(dist, xs)
        ref = np.array([reg_inc_beta(float(x), 2.7, 1.3) for x in xs])
        assert np.max(np.abs(vals - ref)) < 1e-8

    def test_derivative_recovers_pdf(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        h = 1e-5
        for x in (0.25, 0.5, 0.75):
            num = (eval_cdf(dist, x + h) - eval_cdf(dist, x - h)) / (2.0 * h)
            assert num == pytest.approx(eval_pdf(dist, x), abs=1e-7)

    def test_monotone_on_poisson_grid(self):
        scenarios = [
            SystemParams(1e-3, 5.0, 1.0, 1.0, 1e-10),
            SystemParams(1e-3, 3.0, 1.0, 1.0, 1e-10),
            SystemParams(1e-3, 4.0, 0.1, 1.0, 1e-10),
            SystemParams(5e-3, 5.0, 10.0, 1.0, 1e-10),
        ]
        xs = np.linspace(0.0, 1.0, 1001)
        for p in scenarios:
            dist = reconstruct(moment_sequence(p, 10), order=10)
            cdf = eval_cdf(dist, xs)
            assert np.min(np.diff(cdf)) >= -1e-6

    def test_domain(self):
        dist = _beta_27_13_distribution()
        with pytest.raises(ValueError):
            eval_cdf(dist, -0.01)
        with pytest.raises(ValueError):
            eval_cdf(dist, 1.01)


class TestReliability:
    def test_endpoints(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        assert meta_reliability(dist, 0.0) == 1.0
        assert meta_reliability(dist, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_integral_recovers_mean_coverage(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        integral = integrate_finite(
            lambda x: meta_reliability(dist, x), 0.0, 1.0, 1e-8, max_intervals=4000
        ).value
        assert integral == pytest.approx(seq[1], abs=2e-3)

    def test_clamped_to_unit_interval(self):
        dist = _beta_27_13_distribution()
        xs = np.linspace(0.0, 1.0, 101)
        rel = meta_reliability(dist, xs)
        assert np.all((rel >= 0.0) & (rel <= 1.0))


class TestProjectionConsistency:
    def test_coefficients_are_fixed_point(self, paper_params):
        seq = moment_sequence(paper_params, 10)
        dist = reconstruct(seq, order=10)
        raw = [
            integrate_finite(
                lambda x, k=k: x**k * eval_pdf(dist, x), 0.0, 1.0, 1e-10,
                max_intervals=4000,
            ).value
            for k in range(11)
        ]
        seq2 = MomentSequence(tuple(m / raw[0] for m in raw), METHOD_EMPIRICAL)
        dist2 = fourier_jacobi_coeffs(seq2, dist.basis)
        dev = max(abs(a - b) for a, b in zip(dist.coefficients, dist2.coefficients))
        assert dev < 1e-6


class TestConvergenceDiagnostic:
    def test_beta_round_trip_converges(self):
        # |a_n| sits at the float64 cancellation floor (~1e-9 by n = 10); the
        # diagnostic weights it by e^(alpha n) ~ e^3, hence the 5e-8 ceiling.
        dist = _beta_27_13_distribution()
        report = convergence_diagnostic(dist)
        assert not report.warning
        assert max(report.decay_terms[1:]) < 5e-8

    def test_order_zero_trivial(self, paper_params):
        seq = moment_sequence(paper_params, 2)
        dist = reconstruct(seq, order=0)
        report = convergence_diagnostic(dist)
        assert not report.warning
        assert len(report.decay_terms) == 1

    def test_flat_coefficients_warn(self):
        seq = MomentSequence(beta_moments(2.0, 2.0, 10), METHOD_EMPIRICAL)
        dist = ReconstructedDistribution(
            basis=JacobiBasis(0.5, 0.5, 10),
            coefficients=tuple([1.0] * 11),
            source_moments=seq,
        )
        report = convergence_diagnostic(dist)
        assert report.warning
