import math

import numpy as np
import pytest

from mspacings import GammaKernel
from mspacings.numerics import composite_simpson


# closed-form oracles, written independently of the kernel internals
def oracle_cdf(m: int, t: float) -> float:
    if t <= 0.0:
        return 0.0
    acc = 0.0
    for k in range(m):
        acc += t**k / math.factorial(k)
    return 1.0 - math.exp(-t) * acc


def oracle_pdf(m: int, t: float) -> float:
    if t < 0.0:
        return 0.0
    if t == 0.0:
        return 1.0 if m == 1 else 0.0
    return t ** (m - 1) * math.exp(-t) / math.factorial(m - 1)


def oracle_quantile(m: int, p: float) -> float:
    lo, hi = 0.0, 1.0
    while oracle_cdf(m, hi) < p:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if oracle_cdf(m, mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestPdf:
    def test_m1_at_zero(self):
        assert GammaKernel(1).pdf(0.0) == 1.0

    def test_m2_at_zero(self):
        assert GammaKernel(2).pdf(0.0) == 0.0

    def test_m2_at_one(self):
        assert GammaKernel(2).pdf(1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)

    def test_negative_argument(self):
        assert GammaKernel(3).pdf(-0.5) == 0.0

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_matches_oracle(self, m):
        ts = np.linspace(0.0, 20.0, 101)
        got = GammaKernel(m).pdf(ts)
        want = np.array([oracle_pdf(m, t) for t in ts])
        np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-300)


class TestCdf:
    def test_m1_at_one(self):
        assert GammaKernel(1).cdf(1.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)

    def test_m2_at_one(self):
        assert GammaKernel(2).cdf(1.0) == pytest.approx(1.0 - 2.0 * math.exp(-1.0), rel=1e-13)

    def test_m3_at_zero(self):
        assert GammaKernel(3).cdf(0.0) == 0.0

    def test_negative(self):
        assert GammaKernel(2).cdf(-3.0) == 0.0

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_matches_oracle_and_monotone(self, m):
        k = GammaKernel(m)
        ts = np.linspace(0.0, 40.0, 400)
        got = k.cdf(ts)
        want = np.array([oracle_cdf(m, t) for t in ts])
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-15)
        assert np.all(np.diff(got) >= 0.0)
        assert np.all((got >= 0.0) & (got <= 1.0))

    @pytest.mark.parametrize("m", [1, 3, 5])
    def test_small_t_relative_accuracy(self, m):
        # the series path must keep relative accuracy where 1 - sf cancels
        k = GammaKernel(m)
        for t in (1e-8, 1e-4, 1e-2):
            exact = oracle_cdf(m, t)
            if exact == 0.0:
                exact = t**m / math.factorial(m)
            assert k.cdf(t) == pytest.approx(exact, rel=1e-9)


class TestQuantile:
    def test_m1_median(self):
        assert GammaKernel(1).quantile(0.5) == pytest.approx(math.log(2.0), abs=1e-11)

    def test_zero(self):
        for m in (1, 2, 5):
            assert GammaKernel(m).quantile(0.0) == 0.0

    def test_round_trip_value(self):
        k = GammaKernel(2)
        p = k.cdf(3.7)
        assert k.quantile(p) == pytest.approx(3.7, abs=1e-10)

    def test_rejects_bad_probabilities(self):
        k = GammaKernel(2)
        with pytest.raises(ValueError):
            k.quantile(1.0)
        with pytest.raises(ValueError):
            k.quantile(1.5)
        with pytest.raises(ValueError):
            k.quantile(-0.1)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_round_trip_grid(self, m):
        k = GammaKernel(m)
        ps = np.linspace(0.0, 1.0 - 1e-6, 1000)
        err = np.abs(k.cdf(k.quantile(ps)) - ps)
        assert np.max(err) <= 10.0 * k.quantile_tolerance

    @pytest.mark.parametrize("m", [1, 3])
    def test_monotone_and_matches_bisection(self, m):
        k = GammaKernel(m)
        ps = np.linspace(0.001, 0.999, 57)
        qs = k.quantile(ps)
        assert np.all(np.diff(qs) > 0.0)
        for p, q in zip(ps[::8], qs[::8]):
            assert q == pytest.approx(oracle_quantile(m, p), abs=1e-9)


class TestPhi:
    def test_m1_value(self):
        # phi_1(t) = (1 - t) * (-log(1 - t))
        assert GammaKernel(1).phi(0.5) == pytest.approx(0.5 * math.log(2.0), abs=1e-10)

    def test_zero(self):
        for m in (1, 2, 4):
            assert GammaKernel(m).phi(0.0) == 0.0

    def test_m2_against_oracle(self):
        q = oracle_quantile(2, 0.9)
        want = oracle_pdf(2, q) * q
        assert GammaKernel(2).phi(0.9) == pytest.approx(want, rel=1e-8)

    def test_vanishes_toward_one(self):
        k = GammaKernel(2)
        assert k.phi(1.0 - 1e-9) < 1e-6

    def test_rejects_one(self):
        with pytest.raises(ValueError):
            GammaKernel(2).phi(1.0)

    def test_nonnegative(self):
        k = GammaKernel(3)
        ts = np.linspace(0.0, 1.0 - 1e-6, 200)
        assert np.all(k.phi(ts) >= 0.0)


class TestKernelInvariants:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_central_difference_matches_pdf(self, m):
        k = GammaKernel(m)
        h = 1e-4
        ts = np.linspace(0.1, 10.0, 100)
        approx = (k.cdf(ts + h) - k.cdf(ts - h)) / (2.0 * h)
        np.testing.assert_allclose(approx, k.pdf(ts), rtol=1e-6)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_exponential_tail_bound_beyond_onset(self, m):
        k = GammaKernel(m)
        onset = k.tail_bound_onset()
        ts = np.linspace(onset, 50.0, 2001)
        assert np.all(k.sf(ts) <= 2.0 * np.exp(-ts / 2.0) + 1e-300)

    def test_tail_bound_onset_grows_with_m(self):
        onsets = [GammaKernel(m).tail_bound_onset() for m in (1, 2, 3, 4, 5)]
        assert onsets == sorted(onsets)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_mean_identity(self, m):
        # integral of the survival function equals the mean m
        k = GammaKernel(m)
        upper = k.truncation_point(1e-13)
        integral = composite_simpson(k.sf, 0.0, upper, 1 << 15)
        assert integral == pytest.approx(m, rel=1e-6)

    def test_truncation_point(self):
        k = GammaKernel(3)
        t = k.truncation_point(1e-8)
        assert k.sf(t) <= 1e-8 + 1e-12


class TestValidation:
    def test_rejects_nonpositive_m(self):
        with pytest.raises(ValueError):
            GammaKernel(0)
        with pytest.raises(ValueError):
            GammaKernel(-2)

    def test_rejects_non_integer_m(self):
        with pytest.raises(TypeError):
            GammaKernel(1.5)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            GammaKernel(1, quantile_tolerance=0.0)
        with pytest.raises(ValueError):
            GammaKernel(1, quantile_tolerance=1e-3)
