import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import disk_points
from dunkldisk import _core
from dunkldisk.basis import (
    CoeffSeries,
    DomainError,
    LambdaMismatch,
    LambdaZeroUnsupported,
    StepTooSmall,
    dunkl_dz,
    dunkl_dzbar,
    dz_series,
    dz_shifted_series,
    dzbar_residual,
    partial_sum,
    phi,
    phi_integral_oracle,
    phi_polar,
    phi_table,
)
from dunkldisk.quadrature import build_circle_rule, build_disk_rule

mpmath.mp.dps = 30


def mp_phi(n, lam, z):
    """Defining sum in extended precision."""
    z = mpmath.mpc(z)
    eps = mpmath.sqrt(mpmath.factorial(n) / mpmath.rf(2 * lam + 1, n))
    s = sum(mpmath.rf(lam, j) * mpmath.rf(lam + 1, n - j) / (mpmath.factorial(j) * mpmath.factorial(n - j))
            * mpmath.conj(z) ** j * z ** (n - j) for j in range(n + 1))
    return complex(eps * s)


@pytest.mark.parametrize("n", [0, 1, 2, 7, 24])
def test_phi_matches_extended_precision(lam, n, rng):
    for z in disk_points(rng, 5, 1.0):
        assert abs(phi(n, lam, z) - mp_phi(n, lam, z)) < 1e-13


def test_phi_low_degree_closed_forms():
    lam, z = 1.5, 0.3 + 0.4j
    eps1 = np.sqrt(1 / (2 * lam + 1))
    assert phi(1, lam, z) == pytest.approx(eps1 * ((lam + 1) * z + lam * np.conj(z)))
    assert phi(0, lam, z) == 1


def test_phi_lambda_zero_is_monomial(rng):
    z = disk_points(rng, 50, 1.0)
    for n in range(25):
        assert np.allclose(phi(n, 0.0, z), z**n, rtol=0, atol=1e-15)


def test_three_paths_agree(rng):
    z = disk_points(rng, 40, 1.0)
    for lam in (0.5, 1.0, 2.5):
        for n in range(1, 25):
            a = phi(n, lam, z)
            assert np.allclose(a, phi_polar(n, lam, np.abs(z), np.angle(z)), atol=1e-12)
            assert np.allclose(a, phi_integral_oracle(n, lam, z), atol=1e-12)
            assert np.allclose(a, phi_table(n, lam, z)[:, n], atol=1e-12)


def test_polar_lambda_zero_unsupported():
    with pytest.raises(LambdaZeroUnsupported):
        phi_polar(3, 0.0, 0.5, 0.1)
    with pytest.raises(LambdaZeroUnsupported):
        phi_integral_oracle(3, 0.0, 0.5)


def test_phi_domain():
    with pytest.raises(DomainError):
        phi(2, 1.0, 1.2)
    with pytest.raises(ValueError):
        phi(-1, 1.0, 0.1)
    # the closed disk is allowed
    assert np.isfinite(phi(3, 1.0, np.exp(0.3j)))


@given(n=st.integers(0, 30), x=st.floats(-1, 1), y=st.floats(-1, 1))
def test_phi_reflection_symmetry(n, x, y):
    # phi_n(conj z) = conj(phi_n(z)) since all coefficients are real
    z = complex(x, y)
    if abs(z) > 1:
        z /= abs(z)
    assert abs(phi(n, 1.5, np.conj(z)) - np.conj(phi(n, 1.5, z))) < 1e-12


@given(n=st.integers(0, 30), theta=st.floats(-np.pi, np.pi), r=st.floats(0, 1))
def test_phi_homogeneous(n, theta, r):
    z = np.exp(1j * theta)
    assert abs(phi(n, 0.5, r * z) - r**n * phi(n, 0.5, z)) < 1e-12


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.5, 10.0])
def test_backends_agree(lam, rng):
    z = disk_points(rng, 64, 1.0)
    a = _core.fallback.phi_table(z, lam, 40)
    b = _core.phi_table(z, lam, 40)
    # |phi_n| reaches ~5e6 at lam = 10, so compare relative to max(1, |phi_n|)
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) < 1e-13


def test_circle_orthonormality_small_rule():
    # degree-24 Gram matrix with the default-size rule is exact to rounding
    for lam in (0.0, 0.5, 1.0, 2.5):
        cr = build_circle_rule(lam, 128)
        tab = phi_table(24, lam, cr.points)
        gram = (tab * cr.weights[:, None]).T @ tab.conj()
        assert np.max(np.abs(gram - np.eye(25))) < 1e-12


def test_bergman_normalization(lam):
    dr = build_disk_rule(lam, 40, 40)
    tab = phi_table(20, lam, dr.points)
    got = np.einsum("ij,ijn->n", dr.weights, np.abs(tab) ** 2)
    n = np.arange(21)
    assert np.allclose(got, (lam + 1) / (n + lam + 1), atol=1e-13)


# -- coefficient series -------------------------------------------------------

def test_series_arithmetic():
    f = CoeffSeries(1.0, [1, 2])
    g = CoeffSeries(1.0, [0, 1, 3j])
    h = f + 2 * g - f
    assert h.allclose(CoeffSeries(1.0, [0, 2, 6j]))
    assert (f * 0.5).coeffs[1] == 1.0
    with pytest.raises(LambdaMismatch):
        f + CoeffSeries(2.0, [1])
    with pytest.raises(ValueError):
        f.coeffs[0] = 3  # read-only storage


def test_series_json_roundtrip():
    f = CoeffSeries(2.5, [1 + 2j, -0.5, 1e-300j])
    g = CoeffSeries.from_json(f.to_json())
    assert g.lam == 2.5 and np.array_equal(g.coeffs, f.coeffs)
    assert json.loads(f.to_json())["coeffs"][0] == [1.0, 2.0]


def test_series_eval_matches_sum(rng):
    c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    f = CoeffSeries(0.5, c)
    z = disk_points(rng, 10, 1.0)
    want = sum(c[n] * phi(n, 0.5, z) for n in range(9))
    assert np.allclose(f(z), want, atol=1e-13)
    assert np.allclose(f.dilate(0.5)(z), f(0.5 * z), atol=1e-13)
    assert partial_sum(f, 3).degree == 3


# -- Dunkl operators ----------------------------------------------------------

def test_dz_ladder_coefficients(lam):
    for n in range(1, 25):
        d = dz_series(CoeffSeries.unit(lam, n))
        assert d.degree == n - 1
        assert d.coeffs[-1] == pytest.approx(np.sqrt(n * (n + 2 * lam)), rel=1e-15)
        assert np.count_nonzero(d.coeffs) == 1
    assert dz_series(CoeffSeries(lam, [3.0])).allclose(CoeffSeries(lam, [0.0]))


def test_pointwise_dz_matches_ladder(rng):
    lam = 1.5
    z = disk_points(rng, 10, 0.8) + 0.02j
    for n in range(1, 8):
        f = CoeffSeries.unit(lam, n)
        got = dunkl_dz(f, z, lam)
        want = np.sqrt(n * (n + 2 * lam)) * phi(n - 1, lam, z)
        assert np.allclose(got, want, atol=1e-7)


def test_pointwise_dz_on_real_axis():
    # on the axis the reflection quotient is replaced by its limit -i d_y f
    lam = 1.0
    f = CoeffSeries.unit(lam, 3)
    x = np.array([0.1, -0.4, 0.6])
    want = np.sqrt(3 * (3 + 2 * lam)) * phi(2, lam, x)
    assert np.allclose(dunkl_dz(f, x, lam), want, atol=1e-7)


def test_shifted_dz_is_dz_of_zf(rng):
    # D_z(z f) computed pointwise on z * f(z) agrees with the coefficient map
    lam = 1.0
    f = CoeffSeries(lam, rng.standard_normal(6))
    z = disk_points(rng, 8, 0.7) + 0.05j
    got = dunkl_dz(lambda u: u * f(u), z, lam)
    assert np.allclose(got, dz_shifted_series(f)(z), atol=1e-7)


def test_dzbar_residual(lam, rng):
    f = CoeffSeries(lam, rng.standard_normal(9) + 1j * rng.standard_normal(9))
    z = disk_points(rng, 20, 0.9)
    z = z[np.abs(z.imag) > 1e-3]
    assert np.max(np.abs(dzbar_residual(f, z, lam))) < 1e-7


def test_dzbar_detects_conj():
    # conj(z) is not lambda-analytic; at lam = 0 D_zbar conj(z) = 1
    assert dunkl_dzbar(np.conj, 0.3 + 0.2j, 0.0) == pytest.approx(1.0)
    assert abs(dunkl_dzbar(np.conj, 0.3 + 0.2j, 1.0)) > 0.5


def test_step_too_small():
    with pytest.raises(StepTooSmall):
        dunkl_dz(np.exp, 0.1j, 1.0, h=1e-12)
