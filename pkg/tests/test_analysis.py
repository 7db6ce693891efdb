import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dunkldisk import analysis as an
from dunkldisk.basis import CoeffSeries
from dunkldisk.operators import disk_moment_constant
from dunkldisk.quadrature import as_lambda, build_circle_rule, default_circle_rule, default_disk_rule


def test_p_mean_constant_and_basis(lam):
    cr = default_circle_rule(lam)
    one = CoeffSeries(lam, [1.0])
    for p in (as_lambda(lam).p0 or 0.5, 1, 2, 4, math.inf):
        assert an.p_mean(one, p, 0.7, cr) == pytest.approx(1.0)
    # M_2(phi_n; r) = r^n by orthonormality and homogeneity
    assert an.p_mean(CoeffSeries.unit(lam, 5), 2, 0.6, cr) == pytest.approx(0.6**5, rel=1e-12)


def test_p_below_threshold_rejected():
    f = CoeffSeries(1.0, [1.0])
    with pytest.raises(an.ExponentBelowThreshold):
        an.p_mean(f, 0.5, 0.5)  # p0 = 2/3 at lam = 1


@settings(max_examples=20)
@given(seed=st.integers(0, 2**32 - 1), lam=st.sampled_from([0.0, 0.5, 1.0, 2.5]))
def test_parseval(seed, lam):
    f = an.random_series(lam, 10, np.random.default_rng(seed))
    assert an.hardy_norm(f, 2, default_circle_rule(lam)) ** 2 == pytest.approx(
        np.sum(np.abs(f.coeffs) ** 2), rel=1e-10)
    assert an.bergman_norm(f, 2, default_disk_rule(lam)) ** 2 == pytest.approx(
        an.bergman_norm_coeff(f) ** 2, rel=1e-10)


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_means_nondecreasing(seed, p):
    f = an.random_series(0.5, 8, np.random.default_rng(seed))
    assert an.mean_profile(f, p, rule=default_circle_rule(0.5)).is_nondecreasing()


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1))
def test_quasi_monotone_below_one(seed):
    lam = 2.5
    p = 0.9  # p0 = 5/6
    f = an.random_series(lam, 8, np.random.default_rng(seed))
    prof = an.mean_profile(f, p, rule=default_circle_rule(lam))
    assert prof.quasi_monotone_ratio() <= 2 ** (2 / p - 1)


def test_hardy_norm_equals_boundary_norm():
    lam = 1.0
    f = an.random_series(lam, 8, np.random.default_rng(3))
    cr = default_circle_rule(lam)
    for p in (1, 2, 4):
        res = an.hardy_norm(f, p, cr, full_output=True)
        assert res.value == pytest.approx(an.boundary_norm(f, p, cr), rel=1e-10)
        assert res.at_0999 <= res.value * (1 + 1e-12)
        assert res.richardson == pytest.approx(res.value, rel=1e-3)


def test_norm_coefficient_formulas():
    f = CoeffSeries(0.5, [1, 2j])
    assert an.hardy_norm_coeff(f) == pytest.approx(math.sqrt(5))
    want = math.sqrt(1 * disk_moment_constant(0.5, 0) + 4 * disk_moment_constant(0.5, 1))
    assert an.bergman_norm_coeff(f) == pytest.approx(want)


def test_kernel_series_is_kernel():
    lam, w = 1.0, 0.5 + 0.3j
    k = an.kernel_series("cauchy", lam, w)
    from dunkldisk.kernels import cauchy_kernel
    assert k(0.2j) == pytest.approx(cauchy_kernel(lam, 0.2j, w), abs=1e-13)


def test_growth_profile_bergman_kernel_family():
    lam = 1.0
    k = an.kernel_series("cauchy", lam, 0.99)
    rep = an.growth_exponent_check(k, 2.0, math.inf, space="bergman", rule=default_circle_rule(lam),
                                   disk_rule=default_disk_rule(lam), norm=an.bergman_norm_coeff(k))
    assert rep.ok and rep.tail_growth <= an.GROWTH_LIMIT and rep.lower_bound_estimate
    assert np.all(np.isfinite(rep.ratios)) and rep.max_ratio > 0


def test_growth_profile_classical_hardy():
    # f = sum_{n<=200} z^n in H^1 against M_2 growth (1-r)^{-1/2}
    f = CoeffSeries(0.0, np.ones(201))
    rep = an.growth_exponent_check(f, 1.0, 2.0, space="hardy", rule=build_circle_rule(0.0, 1024))
    assert rep.ok


def test_point_bound_profile(lam):
    f = an.random_series(lam, 16, np.random.default_rng(0))
    rep = an.point_bound_check(f, max(1.0, as_lambda(lam).p0), "hardy", rule=default_circle_rule(lam))
    assert rep.ok and rep.non_increasing_tail


def test_growth_arguments():
    f = CoeffSeries(1.0, [1.0])
    with pytest.raises(ValueError):
        an.growth_exponent_check(f, 2.0, 1.0)
    with pytest.raises(ValueError):
        an.point_bound_check(f, 2.0, "sobolev")


def test_radial_integral_constant():
    # M_p of the constant 1 is 1, so int_0^1 M^p dr / int_0^1 M^p r^(2lam+1) dr = 2 lam + 2
    f = CoeffSeries(1.0, [1.0])
    rep = an.radial_integral_check(f, 2.0, rule=default_circle_rule(1.0))
    assert rep.mean_ratio == pytest.approx(4.0, rel=1e-12) and rep.hardy_ratio is None
    rep = an.radial_integral_check(f, 2.0, 4.0, 2.0, default_circle_rule(1.0))
    assert rep.hardy_ratio > 0


@pytest.mark.parametrize("s", [0.5, 0.9])
def test_dilation_bound(s):
    f = an.random_series(0.5, 10, np.random.default_rng(5))
    for p in (0.5, 1, 2, 4):
        lhs, rhs = an.dilation_bound_check(f, p, s, default_circle_rule(0.5))
        assert lhs <= rhs


def test_norm_equivalence_band_is_positive():
    r = an.norm_equivalence_band(1.0, 2.0, 5, 12, np.random.default_rng(0), default_disk_rule(1.0))
    assert r.shape == (5,) and np.all(np.isfinite(r)) and np.all(r > 0)
