"""Cosine expansion: coefficients, evaluation, and error measurement."""

import math

import numpy as np
import pytest

from cosadmit.cos_engine import (
    CosExpansion,
    build_expansion,
    cf_coeff_F,
    evaluate,
    evaluate_grid,
    exact_coeff_A,
    expansion_to_csv,
    mass,
    measure_error,
    prefix,
    truncated_cf,
)
from cosadmit.densities import (
    catalog,
    laplace,
    normal,
    student_t,
    student_t_cf,
    tail_mass,
    uniform,
)
from cosadmit.errors import DomainError

# oracle: closed-form antiderivative of e^-x cos(w x); A_2 at L=4 equals
# -(1/4) * int_0^4 e^-x cos(pi x/4) dx * 2 * (1/2).
LAPLACE_A2_L4 = -0.15745360819601143


class TestExactCoeffs:
    def test_a0_is_reciprocal_L_for_contained_support(self):
        assert exact_coeff_A(uniform(), 2.0, 0) == pytest.approx(0.5, rel=1e-12)
        assert exact_coeff_A(uniform(), 4.0, 0) == pytest.approx(0.25, rel=1e-12)

    def test_even_density_kills_odd_modes(self):
        assert abs(exact_coeff_A(normal(), 8.0, 1)) <= 1e-12

    def test_laplace_vs_antiderivative_oracle(self):
        assert exact_coeff_A(laplace(), 4.0, 2) == pytest.approx(
            LAPLACE_A2_L4, rel=1e-10)

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            exact_coeff_A(normal(), 0.0, 1)
        with pytest.raises(DomainError):
            exact_coeff_A(normal(), 4.0, -1)


class TestCfCoeffs:
    def test_f0_from_cf_normalization(self):
        for f in (normal(), uniform(), student_t(0.4)):
            assert cf_coeff_F(f, 4.0, 0) == 0.25

    def test_odd_modes_exactly_zero_for_even_density(self):
        for k in (1, 3, 5, 17, 1001):
            assert cf_coeff_F(normal(), 8.0, k) == 0.0

    def test_normal_k2_closed_form(self):
        # cos(pi) = -1 flips the sign of phi(pi/8)/8
        ref = -(1.0 / 8.0) * math.exp(-0.5 * (math.pi / 8.0) ** 2)
        assert cf_coeff_F(normal(), 8.0, 2) == pytest.approx(ref, rel=1e-14)

    def test_uniform_sinc_values(self):
        # phi(w) = sin(w)/w at w = k pi / 4, times cos(k pi / 2) / L
        f = uniform()
        e = build_expansion(f, 2.0, 4)
        w2 = 2 * math.pi / 4
        assert e.coeffs[0] == pytest.approx(0.5)
        assert e.coeffs[1] == 0.0
        assert e.coeffs[2] == pytest.approx(-0.5 * math.sin(w2) / w2, rel=1e-14)
        assert e.coeffs[3] == 0.0

    def test_coefficients_match_exact_for_contained_support(self):
        f = uniform()
        for k in range(8):
            assert cf_coeff_F(f, 2.0, k) == pytest.approx(
                exact_coeff_A(f, 2.0, k), abs=1e-12)

    def test_aliasing_gap_bounded_by_tail_mass(self):
        for f in (student_t(0.4), laplace()):
            L = 4.0
            gap_cap = 2.0 * tail_mass(f, L)
            for k in range(0, 32, 4):
                assert abs(cf_coeff_F(f, L, k) - exact_coeff_A(f, L, k)) <= gap_cap


class TestExpansion:
    def test_single_mode_is_constant(self):
        e = build_expansion(normal(), 8.0, 1)
        assert e.coeffs.tolist() == [0.125]
        assert evaluate(e, 0.0) == pytest.approx(1.0 / 16.0)
        assert evaluate(e, -5.5) == pytest.approx(1.0 / 16.0)

    def test_student_t_large_N_finite(self):
        e = build_expansion(student_t(0.4), 16.0, 256)
        assert np.all(np.isfinite(e.coeffs))
        assert e.coeffs[0] == pytest.approx(1.0 / 16.0)

    def test_mass_is_one_for_all_catalog_densities(self):
        for f in catalog():
            for L in (2.0, 8.0):
                assert mass(build_expansion(f, L, 32)) == pytest.approx(
                    1.0, abs=1e-15)

    def test_mass_independent_of_N_and_linear(self):
        e1 = build_expansion(normal(), 4.0, 8)
        e2 = build_expansion(normal(), 4.0, 64)
        assert mass(e1) == mass(e2) == 1.0
        scaled = CosExpansion(L=4.0, N=8, coeffs=2.0 * e1.coeffs, source="scaled")
        assert mass(scaled) == pytest.approx(2.0)

    def test_prefix_shares_coefficients(self):
        e = build_expansion(normal(), 8.0, 64)
        p = prefix(e, 16)
        np.testing.assert_array_equal(p.coeffs, e.coeffs[:16])
        with pytest.raises(DomainError):
            prefix(e, 0)
        with pytest.raises(DomainError):
            prefix(e, 65)

    def test_reconstruction_hits_analytic_pdf(self):
        e = build_expansion(normal(), 8.0, 128)
        assert evaluate(e, 0.0) == pytest.approx(
            1.0 / math.sqrt(2 * math.pi), abs=1e-8)

    def test_even_symmetry_of_reconstruction(self):
        e = build_expansion(normal(), 8.0, 128)
        assert abs(evaluate(e, 3.0) - evaluate(e, -3.0)) <= 1e-12

    def test_evaluate_outside_interval_is_error(self):
        e = build_expansion(normal(), 8.0, 16)
        with pytest.raises(DomainError, match="outside"):
            evaluate(e, 8.5)
        with pytest.raises(DomainError):
            evaluate_grid(e, np.array([0.0, -9.0]))

    def test_grid_matches_scalar_evaluation(self):
        e = build_expansion(laplace(), 4.0, 100)
        xs = np.linspace(-4, 4, 17)
        grid_vals = evaluate_grid(e, xs)
        for x, v in zip(xs, grid_vals):
            assert v == pytest.approx(evaluate(e, float(x)), abs=1e-13)


class TestTruncatedCf:
    def test_contained_support_equals_full_cf(self):
        f = uniform()
        for w in (0.3, 1.7, 6.0):
            full = math.sin(w) / w
            assert truncated_cf(f, 2.0, w).real == pytest.approx(full, abs=1e-11)

    def test_zero_frequency_gives_interior_mass(self):
        for f in (normal(), student_t(0.4)):
            v = truncated_cf(f, 4.0, 0.0)
            assert 0.0 < v.real <= 1.0
            assert v.imag == pytest.approx(0.0, abs=1e-12)

    def test_heavy_tail_keeps_visible_aliasing_gap(self):
        f = student_t(0.4)
        gap = abs(complex(student_t_cf(0.4, 1.0)) - truncated_cf(f, 8.0, 1.0))
        assert gap > 1e-3
        # oracle: the gap is exactly the tail Fourier integral, below the
        # tail mass in magnitude
        assert gap <= tail_mass(f, 8.0)


class TestMeasureError:
    def test_normal_l2_small_at_modest_N(self):
        f = normal()
        rep = measure_error(f, build_expansion(f, 8.0, 128), 401)
        assert rep.l2_error <= 1e-8
        assert rep.sup_error <= 1e-8
        assert rep.grid_points == 401

    def test_l2_non_increasing_in_N(self):
        f = normal()
        e = build_expansion(f, 8.0, 128)
        l2_64 = measure_error(f, prefix(e, 64), 201).l2_error
        l2_128 = measure_error(f, e, 201).l2_error
        assert l2_128 <= l2_64 + 1e-12

    @pytest.mark.parametrize("f", [laplace(), student_t(0.4)],
                             ids=lambda f: f.label)
    def test_l2_non_increasing_in_N_with_aliasing(self, f):
        e = build_expansion(f, 4.0, 256)
        vals = [measure_error(f, prefix(e, n), 101).l2_error
                for n in (16, 32, 64, 128, 256)]
        for a, b in zip(vals, vals[1:]):
            assert b <= a + 1e-12

    def test_uniform_gibbs_report_only(self):
        # Discontinuous target: the error is Gibbs-limited; just report.
        f = uniform()
        rep = measure_error(f, build_expansion(f, 2.0, 512), 101)
        assert rep.l2_error < 0.1

    def test_error_floor_decreases_in_L_for_heavy_tail(self):
        f = student_t(0.4)
        floors = []
        for L in (4.0, 8.0, 16.0):
            e = build_expansion(f, L, 1024)
            floors.append(min(measure_error(f, prefix(e, n), 101).l2_error
                              for n in (256, 512, 1024)))
        assert floors[0] > floors[1] > floors[2]

    def test_rejects_tiny_grid(self):
        with pytest.raises(DomainError):
            measure_error(normal(), build_expansion(normal(), 4.0, 8), 1)


class TestCsvExport:
    def test_header_and_shape(self):
        e = build_expansion(normal(), 8.0, 4)
        text = expansion_to_csv(e)
        lines = text.strip().split("\n")
        assert lines[0] == "k,F_k"
        assert len(lines) == 5
        ks = [int(line.split(",")[0]) for line in lines[1:]]
        assert ks == [0, 1, 2, 3]

    def test_roundtrip_precision(self):
        e = build_expansion(student_t(0.4), 8.0, 16)
        lines = expansion_to_csv(e).strip().split("\n")[1:]
        back = np.array([float(line.split(",")[1]) for line in lines])
        np.testing.assert_array_equal(back, e.coeffs)
