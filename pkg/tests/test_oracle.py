"""Monte Carlo reference sampler: determinism, correctness, independence.

The samplers must reproduce the analytic distributions they claim to draw
from; the Kolmogorov-Smirnov checks compare them against closed forms that
never touch the sampling code.
"""
import math

import numpy as np
import pytest

from conftest import example4_combination
from lwchi2 import (
    DomainError,
    EmpiricalSummary,
    LinearCombination,
    SampleSpec,
    Term,
    combo_cumulants,
    ks_statistic,
    lw_cdf,
    reg_lower_inc_gamma,
    sample_chi2,
    sample_combination,
    sample_lw,
    standard_lw_chi2,
)


class TestSampleSpec:
    def test_fields(self):
        s = SampleSpec(count=100, seed=7)
        assert s.count == 100 and s.seed == 7 and s.target is None

    def test_validation(self):
        with pytest.raises(DomainError):
            SampleSpec(count=0, seed=1)
        with pytest.raises(DomainError):
            SampleSpec(count=True, seed=1)
        with pytest.raises(DomainError):
            SampleSpec(count=2.5, seed=1)
        with pytest.raises(DomainError):
            SampleSpec(count=10, seed=-1)
        with pytest.raises(DomainError):
            SampleSpec(count=10, seed=2 ** 64)
        with pytest.raises(DomainError):
            SampleSpec(count=10, seed=1, target="normal")


class TestEmpiricalSummary:
    def test_count_property(self):
        xs = np.array([1.0, 2.0, 3.0])
        s = EmpiricalSummary(xs, 2.0, 1.0)
        assert s.count == 3

    def test_validation(self):
        with pytest.raises(DomainError):
            EmpiricalSummary(np.array([2.0, 1.0]), 1.5, 0.5)  # unsorted
        with pytest.raises(DomainError):
            EmpiricalSummary(np.array([]), 0.0, 0.0)  # empty
        with pytest.raises(DomainError):
            EmpiricalSummary(np.array([[1.0]]), 1.0, 0.0)  # not 1-d
        with pytest.raises(DomainError):
            EmpiricalSummary(np.array([1.0, 2.0]), 1.5, -1.0)  # neg var


class TestDeterminism:
    def test_lw_repeatable(self):
        d = standard_lw_chi2(2.0)
        spec = SampleSpec(count=5000, seed=314)
        a = sample_lw(d, spec)
        b = sample_lw(d, spec)
        assert np.array_equal(a.sorted_samples, b.sorted_samples)
        assert a.mean == b.mean and a.variance == b.variance

    def test_combination_repeatable(self):
        combo = example4_combination()
        spec = SampleSpec(count=2000, seed=555)
        a = sample_combination(combo, spec)
        b = sample_combination(combo, spec)
        assert np.array_equal(a.sorted_samples, b.sorted_samples)

    def test_seed_changes_stream(self):
        d = standard_lw_chi2(2.0)
        a = sample_lw(d, SampleSpec(count=1000, seed=1))
        b = sample_lw(d, SampleSpec(count=1000, seed=2))
        assert not np.array_equal(a.sorted_samples, b.sorted_samples)

    def test_single_term_combination_matches_direct(self):
        # a unit-coefficient single-term combination must consume the
        # per-term stream exactly like the direct sampler's stream 0
        d = standard_lw_chi2(3.0)
        combo = LinearCombination((Term("lw_chi2", d),))
        direct = sample_lw(d, SampleSpec(count=4000, seed=42))
        viacombo = sample_combination(combo, SampleSpec(count=4000, seed=42))
        assert np.array_equal(direct.sorted_samples, viacombo.sorted_samples)


class TestSampleChi2:
    def test_moments(self):
        s = sample_chi2(2.0, SampleSpec(count=1_000_000, seed=99))
        assert s.mean == pytest.approx(2.0, abs=0.006)
        assert s.variance == pytest.approx(4.0, abs=0.03)

    def test_support(self):
        s = sample_chi2(1.0, SampleSpec(count=100_000, seed=7))
        assert s.sorted_samples[0] >= 0.0

    def test_ks_against_closed_form(self):
        for nu in (1.0, 2.0, 10.0, 100.0):
            s = sample_chi2(nu, SampleSpec(count=1_000_000, seed=1000 + int(nu)))
            ks = ks_statistic(s, lambda x: reg_lower_inc_gamma(nu / 2.0, x / 2.0))
            assert ks <= 0.002, f"nu={nu}: ks={ks}"

    def test_validation(self):
        with pytest.raises(DomainError):
            sample_chi2(0.0, SampleSpec(count=10, seed=1))
        with pytest.raises(DomainError):
            sample_chi2(1.0, "spec")


class TestSampleLw:
    def test_support_bound(self):
        d = standard_lw_chi2(1.0)
        s = sample_lw(d, SampleSpec(count=100_000, seed=11))
        assert s.sorted_samples[0] >= 0.0
        from lwchi2 import LWChiSquared
        g = LWChiSquared(4.0, (2.0, 1.5, 0.7))
        sg = sample_lw(g, SampleSpec(count=50_000, seed=12))
        assert sg.sorted_samples[0] >= g.y_min

    def test_mean_standard_nu2(self):
        s = sample_lw(standard_lw_chi2(2.0), SampleSpec(count=1_000_000, seed=8))
        assert s.mean == pytest.approx(1.1544313298030657, abs=0.005)

    def test_ks_against_analytic_cdf(self):
        d = standard_lw_chi2(5.0)
        s = sample_lw(d, SampleSpec(count=1_000_000, seed=314159))
        ks = ks_statistic(s, lambda y: lw_cdf(d, y))
        assert ks <= 0.002


class TestSampleCombination:
    def test_moments_match_cumulants(self):
        combo = example4_combination()
        cs = combo_cumulants(combo, max_order=2)
        s = sample_combination(combo, SampleSpec(count=100_000, seed=777))
        se_mean = math.sqrt(cs.kappa[1] / 100_000.0)
        assert s.mean == pytest.approx(cs.kappa[0], abs=3.0 * se_mean)
        assert s.variance == pytest.approx(cs.kappa[1], rel=0.05)

    def test_negative_coefficient(self):
        combo = LinearCombination((Term("chi2", 5.0), Term("chi2", 3.0, -1.0)))
        s = sample_combination(combo, SampleSpec(count=200_000, seed=31))
        assert s.mean == pytest.approx(2.0, abs=0.05)
        assert s.sorted_samples[0] < 0.0  # the difference takes negatives

    def test_term_streams_are_uncorrelated(self):
        # two unit chi2 terms drawn for the same spec must come from
        # distinct Philox spawn streams
        c1 = LinearCombination((Term("chi2", 1.0),))
        c2 = LinearCombination(
            (Term("chi2", 1.0), Term("chi2", 1.0, -1.0)))
        one = sample_combination(c1, SampleSpec(count=1_000_000, seed=64))
        diff = sample_combination(c2, SampleSpec(count=1_000_000, seed=64))
        # if the streams coincided the difference would be identically 0
        assert np.std(diff.sorted_samples) > 0.5
        # and the first-term marginal stays intact: diff + term2 = term1
        # can't be reconstructed post-sort, so check via variances:
        # var(X1 - X2) = 4 when independent, 0 when identical
        assert diff.variance == pytest.approx(4.0, rel=0.02)
        assert one.variance == pytest.approx(2.0, rel=0.02)

    def test_bare_term_accepted(self):
        s = sample_combination(Term("chi2", 2.0),
                               SampleSpec(count=1000, seed=5))
        assert s.count == 1000


class TestKsStatistic:
    def test_single_sample_at_median(self):
        s = EmpiricalSummary(np.array([0.0]), 0.0, 0.0)
        ks = ks_statistic(s, lambda x: np.full(np.shape(x), 0.5))
        assert ks == pytest.approx(0.5)

    def test_degenerate_cdfs(self):
        s = EmpiricalSummary(np.array([1.0, 2.0, 3.0]), 2.0, 0.5)
        assert ks_statistic(s, lambda x: np.zeros(np.shape(x))) == pytest.approx(1.0)
        assert ks_statistic(s, lambda x: np.ones(np.shape(x))) == pytest.approx(1.0)

    def test_exact_two_sided_value(self):
        # hand-computable case: samples at the 1/4 and 3/4 quantiles of U(0,1)
        s = EmpiricalSummary(np.array([0.25, 0.75]), 0.5, 0.0625)
        ks = ks_statistic(s, lambda x: np.clip(x, 0.0, 1.0))
        # F(0.25)=0.25 vs i/n=0.5 -> 0.25; F(0.75)=0.75 vs (i-1)/n=0.5 -> 0.25
        assert ks == pytest.approx(0.25)

    def test_validation(self):
        with pytest.raises(DomainError):
            ks_statistic("not a summary", lambda x: x)
        s = EmpiricalSummary(np.array([1.0, 2.0]), 1.5, 0.25)
        with pytest.raises(DomainError):
            ks_statistic(s, lambda x: np.full(np.shape(x), 1.5))  # out of range
        with pytest.raises(DomainError):
            ks_statistic(s, lambda x: np.zeros((3, 3)))  # wrong shape
