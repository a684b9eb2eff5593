"""Linear combinations via characteristic-function inversion.

Every numerical check here runs against an independent route: chi-squared
closed forms, the exact single-distribution analytics, cumulant additivity,
or Monte Carlo sampling.  The inversion code must agree with those routes;
it never gets to certify itself.
"""
import math

import numpy as np
import pytest

from conftest import EX4_Q95, example4_combination
from lwchi2 import (
    ConvergenceError,
    DomainError,
    LWChiSquared,
    LinearCombination,
    QuadratureSettings,
    Term,
    chi2_quantile,
    combo_cdf,
    combo_cf,
    combo_cumulants,
    combo_pdf,
    combo_quantile,
    lw_cdf,
    lw_chi2_cf,
    lw_chi2_cumulants,
    lw_pdf,
    lw_quantile,
    reg_lower_inc_gamma,
    sample_combination,
    standard_lw_chi2,
)
from lwchi2.oracle import SampleSpec


def single_chi2(nu, coefficient=1.0):
    return LinearCombination((Term("chi2", nu, coefficient),))


def single_lw(nu, coefficient=1.0):
    return LinearCombination(
        (Term("lw_chi2", standard_lw_chi2(nu), coefficient),))


class TestTerm:
    def test_fields(self):
        d = standard_lw_chi2(2.0)
        t = Term("lw_chi2", d, -1.5)
        assert t.kind == "lw_chi2" and t.dist is d and t.coefficient == -1.5
        assert Term("chi2", 3.0).coefficient == 1.0

    def test_chi2_coercion(self):
        t = Term("chi2", 4)
        assert t.dist == 4.0

    def test_validation(self):
        d = standard_lw_chi2(2.0)
        with pytest.raises(DomainError):
            Term("normal", d)
        with pytest.raises(DomainError):
            Term("lw_chi2", 3.0)
        with pytest.raises(DomainError):
            Term("chi2", -1.0)
        with pytest.raises(DomainError):
            Term("chi2", d)
        with pytest.raises(DomainError):
            Term("lw_chi2", d, 0.0)
        with pytest.raises(DomainError):
            Term("lw_chi2", d, float("inf"))


class TestLinearCombination:
    def test_terms_stored_as_tuple(self):
        combo = LinearCombination([Term("chi2", 1.0), Term("chi2", 2.0)])
        assert isinstance(combo.terms, tuple)
        assert len(combo.terms) == 2

    def test_single_term_accepted_bare(self):
        t = Term("chi2", 3.0)
        assert combo_cumulants(t, max_order=1).kappa[0] == pytest.approx(3.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            LinearCombination(())
        with pytest.raises(DomainError):
            LinearCombination((Term("chi2", 1.0), "x"))
        with pytest.raises(DomainError):
            LinearCombination("chi2")


class TestQuadratureSettings:
    def test_defaults(self):
        s = QuadratureSettings()
        assert s.abs_tol == 1e-10
        assert s.max_nodes == 1_000_000
        assert s.truncation_cf_floor == 1e-14

    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureSettings(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSettings(abs_tol=0.5)
        with pytest.raises(DomainError):
            QuadratureSettings(max_nodes=10)
        with pytest.raises(DomainError):
            QuadratureSettings(max_nodes=2.5)
        with pytest.raises(DomainError):
            QuadratureSettings(truncation_cf_floor=0.0)
        with pytest.raises(DomainError):
            QuadratureSettings(truncation_cf_floor=1e-3)


class TestComboCf:
    def test_single_term_matches_exact(self):
        d = standard_lw_chi2(3.0)
        combo = single_lw(3.0)
        t = np.linspace(-8.0, 8.0, 81)
        assert np.max(np.abs(combo_cf(combo, t) - lw_chi2_cf(d, t))) <= 1e-14

    def test_chi2_product_closed_form(self):
        combo = LinearCombination((Term("chi2", 1.0), Term("chi2", 1.0)))
        t = np.linspace(-10.0, 10.0, 201)
        ref = (1.0 - 2.0j * t) ** -1.0
        assert np.max(np.abs(combo_cf(combo, t) - ref)) <= 1e-14

    def test_coefficient_scaling(self):
        d = standard_lw_chi2(2.0)
        combo = LinearCombination((Term("lw_chi2", d, 2.5),))
        t = np.linspace(-3.0, 3.0, 31)
        assert np.max(
            np.abs(combo_cf(combo, t) - lw_chi2_cf(d, 2.5 * t))) <= 1e-14

    def test_at_zero_and_bounded(self):
        combo = example4_combination()
        assert combo_cf(combo, 0.0) == 1.0 + 0.0j
        assert abs(combo_cf(combo, 0.1)) < 1.0
        t = np.linspace(-5.0, 5.0, 51)
        assert np.all(np.abs(combo_cf(combo, t)) <= 1.0 + 1e-12)


class TestComboCdf:
    def test_chi2_closed_form(self):
        combo = single_chi2(10.0)
        y = np.array([0.5, 2.0, 5.0, 9.34, 18.0, 30.0])
        got = combo_cdf(combo, y)
        ref = reg_lower_inc_gamma(5.0, y / 2.0)
        assert np.max(np.abs(got - ref)) <= 1e-8

    def test_chi2_quantile_spot(self):
        combo = single_chi2(10.0)
        assert combo_cdf(combo, 18.307038053275146) == pytest.approx(
            0.95, abs=1e-3)

    def test_single_lw_duality(self):
        # inversion route vs the exact incomplete-gamma route
        d = standard_lw_chi2(5.0)
        combo = single_lw(5.0)
        lo = d.y_min + 2e-3
        hi = lw_quantile(d, 1.0 - 1e-4)
        y = np.linspace(lo, hi, 40)
        got = combo_cdf(combo, y)
        ref = lw_cdf(d, y)
        assert np.max(np.abs(got - ref)) <= 1e-8

    def test_batch_matches_pointwise(self):
        # the batch path shares one frequency grid across all points, so
        # agreement is to quadrature accuracy rather than bit identity
        combo = single_chi2(4.0)
        y = np.array([1.0, 4.0, 9.0])
        batch = combo_cdf(combo, y)
        for yi, pi in zip(y, batch):
            assert combo_cdf(combo, float(yi)) == pytest.approx(pi, abs=1e-12)

    def test_range_and_monotonicity(self):
        combo = LinearCombination(
            (Term("lw_chi2", standard_lw_chi2(1.0)), Term("chi2", 2.0)))
        y = np.linspace(0.05, 35.0, 30)
        p = combo_cdf(combo, y)
        assert np.all((p >= 0.0) & (p <= 1.0))
        assert np.all(np.diff(p) >= -1e-10)

    def test_validation(self):
        combo = single_chi2(2.0)
        with pytest.raises(DomainError):
            combo_cdf(combo, float("nan"))
        with pytest.raises(DomainError):
            combo_cdf(combo, float("inf"))
        with pytest.raises(DomainError):
            combo_cdf(combo, 1.0, settings="fast")

    def test_max_nodes_exhaustion(self):
        combo = single_chi2(10.0)
        with pytest.raises(ConvergenceError):
            combo_cdf(combo, 18.307, QuadratureSettings(max_nodes=1000))


class TestComboPdf:
    def test_chi2_2_closed_form(self):
        combo = single_chi2(2.0)
        y = np.linspace(0.1, 20.0, 25)
        ref = 0.5 * np.exp(-y / 2.0)
        assert np.max(np.abs(combo_pdf(combo, y) - ref)) <= 1e-8

    def test_chi2_1_conditionally_convergent_tail(self):
        # one-dof density decays only like |t|^(-1/2) in frequency, the
        # hardest case for the oscillatory tail accelerator
        got = combo_pdf(single_chi2(1.0), 1.0)
        ref = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
        assert got == pytest.approx(ref, abs=1e-8)

    def test_single_lw_duality(self):
        d = standard_lw_chi2(3.0)
        combo = single_lw(3.0)
        y = np.linspace(d.y_min + 0.05, d.y_min + 12.0, 20)
        assert np.max(np.abs(combo_pdf(combo, y) - lw_pdf(d, y))) <= 1e-8

    def test_nonnegative_up_to_tolerance(self):
        combo = LinearCombination(
            (Term("lw_chi2", standard_lw_chi2(2.0)), Term("chi2", 3.0)))
        y = np.linspace(0.2, 30.0, 25)
        f = combo_pdf(combo, y)
        assert np.all(f >= -1e-10)

    def test_phase_anchor_refused(self):
        with pytest.raises(ConvergenceError):
            combo_pdf(single_chi2(1.0), 0.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            combo_pdf(single_chi2(1.0), float("nan"))


class TestComboQuantile:
    def test_chi2_10_quantile(self):
        q = combo_quantile(single_chi2(10.0), 0.95)
        assert q == pytest.approx(18.307038053275146, abs=1e-3)

    def test_single_lw_quantile(self):
        q = combo_quantile(single_lw(1.0), 0.95)
        assert q == pytest.approx(4.760554811451584, abs=1e-3)

    def test_round_trip(self):
        combo = LinearCombination(
            (Term("lw_chi2", standard_lw_chi2(2.0)), Term("chi2", 3.0)))
        for p in (0.01, 0.1, 0.5, 0.9, 0.99):
            q = combo_quantile(combo, p)
            assert combo_cdf(combo, q) == pytest.approx(p, abs=2e-10)

    def test_validation(self):
        combo = single_chi2(2.0)
        for bad in (0.0, 1.0, -0.5, float("nan")):
            with pytest.raises(DomainError):
                combo_quantile(combo, bad)


class TestComboCumulants:
    def test_single_term_matches_exact(self):
        d = standard_lw_chi2(4.0)
        got = combo_cumulants(single_lw(4.0), max_order=4)
        ref = lw_chi2_cumulants(d, max_order=4)
        for g, r in zip(got.kappa, ref.kappa):
            assert g == pytest.approx(r, rel=1e-13)

    def test_chi2_closed_form(self):
        nu = 7.0
        got = combo_cumulants(single_chi2(nu), max_order=8)
        for j, g in enumerate(got.kappa, start=1):
            ref = 2.0 ** (j - 1) * math.factorial(j - 1) * nu
            assert g == pytest.approx(ref, rel=1e-13), f"order {j}"

    def test_additivity(self):
        d1 = standard_lw_chi2(2.0)
        combo = LinearCombination(
            (Term("lw_chi2", d1), Term("chi2", 5.0)))
        got = combo_cumulants(combo, max_order=4)
        lw = lw_chi2_cumulants(d1, max_order=4)
        for j in range(4):
            chi_part = 2.0 ** j * math.factorial(j) * 5.0
            assert got.kappa[j] == pytest.approx(
                lw.kappa[j] + chi_part, rel=1e-13)

    def test_coefficient_powers(self):
        lam = -1.7
        got = combo_cumulants(single_chi2(3.0, lam), max_order=3)
        base = combo_cumulants(single_chi2(3.0), max_order=3)
        for j in range(3):
            assert got.kappa[j] == pytest.approx(
                lam ** (j + 1) * base.kappa[j], rel=1e-13)

    def test_example_combination_against_sampling(self):
        combo = example4_combination()
        cs = combo_cumulants(combo, max_order=2)
        summary = sample_combination(
            combo, SampleSpec(count=100_000, seed=991))
        se = math.sqrt(cs.kappa[1] / 100_000.0)
        assert summary.mean == pytest.approx(cs.kappa[0], abs=3.0 * se)

    def test_order_validation(self):
        with pytest.raises(DomainError):
            combo_cumulants(single_chi2(1.0), max_order=0)
        with pytest.raises(DomainError):
            combo_cumulants(single_chi2(1.0), max_order=9)


class TestNegativeCoefficients:
    def test_difference_of_chi2(self):
        combo = LinearCombination(
            (Term("chi2", 5.0), Term("chi2", 3.0, -1.0)))
        cs = combo_cumulants(combo, max_order=2)
        assert cs.kappa[0] == pytest.approx(2.0, rel=1e-13)
        assert cs.kappa[1] == pytest.approx(2.0 * 5.0 + 2.0 * 3.0, rel=1e-13)

    def test_cdf_spans_real_line(self):
        combo = LinearCombination(
            (Term("chi2", 5.0), Term("chi2", 3.0, -1.0)))
        y = np.linspace(-15.0, 20.0, 15)
        p = combo_cdf(combo, y)
        assert np.all(np.diff(p) >= -1e-10)
        assert p[0] < 0.01 and p[-1] > 0.97
        assert combo_cdf(combo, -30.0) < 1e-3

    def test_quantile_round_trip(self):
        combo = LinearCombination(
            (Term("chi2", 5.0), Term("chi2", 3.0, -1.0)))
        q = combo_quantile(combo, 0.5)
        assert combo_cdf(combo, q) == pytest.approx(0.5, abs=2e-10)
