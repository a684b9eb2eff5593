"""Seeded Monte Carlo verification: sampling, empirical summaries, KS.

Brute-force counterpart to the analytic machinery: draw chi-squared
variables, push them through the transform, sum weighted independent
terms, and compare empirical distributions against any CDF via the exact
two-sided Kolmogorov-Smirnov statistic.

Reproducibility contract: all randomness comes from the counter-based
Philox generator keyed by ``(seed, stream_index)``.  Stream index j feeds
term j of a combination; plain single-variable sampling uses stream 0, so
a one-term combination with unit coefficient reproduces ``sample_lw``
bit for bit.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from .convolve import LinearCombination, Term
from .errors import DomainError
from .lwdist import LWChiSquared, transform, _positive_real

__all__ = [
    "SampleSpec",
    "EmpiricalSummary",
    "sample_chi2",
    "sample_lw",
    "sample_combination",
    "ks_statistic",
]


@dataclass(frozen=True)
class SampleSpec:
    """What to draw, how many, and from which seed.

    ``target`` is carried for bookkeeping (an LWChiSquared, a chi-squared
    degrees-of-freedom number, a LinearCombination, or None); the sampling
    functions take their distribution explicitly.
    """

    count: int
    seed: int
    target: object = None

    def __post_init__(self):
        if (isinstance(self.count, bool)
                or not isinstance(self.count, numbers.Integral)
                or int(self.count) < 1):
            raise DomainError(f"count must be a positive integer, got {self.count!r}")
        object.__setattr__(self, "count", int(self.count))
        if (isinstance(self.seed, bool)
                or not isinstance(self.seed, numbers.Integral)
                or not 0 <= int(self.seed) < 2 ** 64):
            raise DomainError(
                f"seed must be a 64-bit unsigned integer, got {self.seed!r}"
            )
        object.__setattr__(self, "seed", int(self.seed))
        tgt = self.target
        if tgt is not None and not isinstance(tgt, (LWChiSquared, LinearCombination)):
            if isinstance(tgt, bool) or not isinstance(tgt, numbers.Real):
                raise DomainError(
                    "target must be None, an LWChiSquared, a LinearCombination "
                    f"or a chi-squared dof number, got {tgt!r}"
                )
            object.__setattr__(self, "target", _positive_real("target", tgt))


@dataclass(frozen=True)
class EmpiricalSummary:
    """Sorted sample with first two moments and an optional KS distance."""

    sorted_samples: np.ndarray
    mean: float
    variance: float
    ks_vs: float | None = None

    def __post_init__(self):
        arr = np.asarray(self.sorted_samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("sorted_samples must be a nonempty 1-d array")
        if np.any(np.diff(arr) < 0.0):
            raise DomainError("sorted_samples must be sorted ascending")
        if not np.isnan(self.variance) and self.variance < 0.0:
            raise DomainError("variance must be nonnegative")
        object.__setattr__(self, "sorted_samples", arr)

    @property
    def count(self):
        return int(self.sorted_samples.size)


def _stream(seed, index):
    """Philox generator for sub-stream `index` of `seed`."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def _chi2_draws(rng, nu, n):
    return 2.0 * rng.standard_gamma(0.5 * nu, size=n)


def _summarize(values):
    values = np.sort(values)
    n = values.size
    mean = float(np.mean(values))
    var = float(np.var(values, ddof=1)) if n > 1 else 0.0
    return EmpiricalSummary(sorted_samples=values, mean=mean, variance=var)


def sample_chi2(nu, spec):
    """Draw chi-squared(nu) samples per `spec` and summarize them."""
    nu = _positive_real("nu", nu)
    if not isinstance(spec, SampleSpec):
        raise DomainError(f"expected SampleSpec, got {spec!r}")
    rng = _stream(spec.seed, 0)
    return _summarize(_chi2_draws(rng, nu, spec.count))


def sample_lw(d, spec):
    """Draw from the transform law: chi-squared draws pushed through g."""
    if not isinstance(d, LWChiSquared):
        raise DomainError(f"expected LWChiSquared, got {d!r}")
    if not isinstance(spec, SampleSpec):
        raise DomainError(f"expected SampleSpec, got {spec!r}")
    rng = _stream(spec.seed, 0)
    x = _chi2_draws(rng, d.nu, spec.count)
    return _summarize(transform(d.theta, x))


def sample_combination(c, spec):
    """Draw the weighted sum, one independent sub-stream per term."""
    if isinstance(c, Term):
        c = LinearCombination((c,))
    if not isinstance(c, LinearCombination):
        raise DomainError(f"expected LinearCombination, got {c!r}")
    if not isinstance(spec, SampleSpec):
        raise DomainError(f"expected SampleSpec, got {spec!r}")
    total = np.zeros(spec.count)
    for j, term in enumerate(c.terms):
        rng = _stream(spec.seed, j)
        if term.kind == "lw_chi2":
            draws = transform(term.dist.theta, _chi2_draws(rng, term.dist.nu, spec.count))
        else:
            draws = _chi2_draws(rng, term.dist, spec.count)
        total += term.coefficient * draws
    return _summarize(total)


def ks_statistic(samples, cdf):
    """Exact two-sided Kolmogorov-Smirnov distance to a supplied CDF.

    ``max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`` over the sorted
    sample, i running 1..n.
    """
    if not isinstance(samples, EmpiricalSummary):
        raise DomainError(f"expected EmpiricalSummary, got {samples!r}")
    x = samples.sorted_samples
    n = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    if f.shape != x.shape:
        raise DomainError("cdf must return one probability per sample")
    if np.any(np.isnan(f)) or np.any(f < 0.0) or np.any(f > 1.0):
        raise DomainError("cdf values must lie in [0, 1]")
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - f, f - (i - 1) / n)))
