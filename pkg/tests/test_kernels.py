import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import disk_points
from dunkldisk import kernels
from dunkldisk.basis import DomainError, phi
from dunkldisk.kernels import (
    Adaptive,
    KernelEval,
    KernelKind,
    KernelMismatch,
    bergman_kernel,
    cauchy_kernel,
    conjugate_poisson_kernel,
    evaluate,
    kernel_bound_majorant,
    kernel_on_nodes,
    kernel_weights,
    p0_kernel,
    poisson_kernel,
    q1_kernel,
    tilde_w2_kernel,
    truncation_terms,
    weighted_bergman_kernel,
)
from dunkldisk.quadrature import build_circle_rule, build_disk_rule
from dunkldisk.specfun import NonConvergence

mpmath.mp.dps = 30


def brute(kind, lam, z, w, N=400):
    wt = kernel_weights(kind, lam, N)
    return sum(wt[n] * phi(n, lam, z) * np.conj(phi(n, lam, w)) for n in range(N + 1))


def test_cauchy_closed_form_lambda_half():
    # series against a brute-force sum with an independent loop over phi
    z, w = 0.3 + 0.2j, -0.1 + 0.5j
    for lam in (0.5, 1.0, 2.5):
        assert cauchy_kernel(lam, z, w) == pytest.approx(brute("cauchy", lam, z, w, 120), rel=1e-12)
        assert cauchy_kernel(lam, z, w, strategy="closed_form") == pytest.approx(
            cauchy_kernel(lam, z, w), rel=1e-10)


def test_dual_paths_random(lam, rng):
    z = disk_points(rng, 300, 0.95)
    w = disk_points(rng, 300, 0.95)
    for kind in ("cauchy", "poisson"):
        s = evaluate(KernelEval(kind, lam), z, w)
        c = evaluate(KernelEval(kind, lam, "closed_form"), z, w)
        assert np.max(np.abs(s - c) / np.abs(c)) < 1e-8


def test_p0_against_mpmath_both_lines():
    lam, z, w = 1.5, 0.4 + 0.3j, -0.2 + 0.6j
    a = 4 * z.imag * w.imag / abs(1 - z * w) ** 2
    v1 = abs(1 - z * w) ** (-2 * lam) * mpmath.hyp2f1(lam, lam, 2 * lam + 1, a)
    b = -4 * z.imag * w.imag / abs(1 - z * np.conj(w)) ** 2
    v2 = abs(1 - z * np.conj(w)) ** (-2 * lam) * mpmath.hyp2f1(lam, lam + 1, 2 * lam + 1, b)
    assert float(v1) == pytest.approx(float(v2), rel=1e-20)
    assert p0_kernel(lam, z, w) == pytest.approx(float(v1), rel=1e-11)


def test_p0_check_flag_runs_both_lines(rng):
    z = disk_points(rng, 50, 0.9)
    w = disk_points(rng, 50, 0.9)
    assert np.allclose(p0_kernel(2.5, z, w, check=True), p0_kernel(2.5, z, w, check=False))


def test_kernel_mismatch_is_raised(monkeypatch):
    # corrupt one line and the cross-check must notice
    orig = kernels.hyp2f1
    monkeypatch.setattr(kernels, "hyp2f1", lambda a, b, c, x, **k: orig(a, b, c, x) * (1 + 1e-6 * (b == a)))
    with pytest.raises(KernelMismatch):
        p0_kernel(1.0, 0.3 + 0.4j, 0.2 + 0.5j, check=True)


def test_classical_reductions(rng):
    z = disk_points(rng, 200, 0.95)
    w = disk_points(rng, 200, 0.95)
    x = z * np.conj(w)
    assert np.allclose(cauchy_kernel(0, z, w), 1 / (1 - x), rtol=1e-10)
    assert np.allclose(bergman_kernel(0, z, w), (1 - x) ** -2, rtol=1e-10)
    u = np.exp(1j * np.angle(w))
    pk = (1 - abs(z) ** 2) / abs(1 - z * np.conj(u)) ** 2
    assert np.allclose(poisson_kernel(0, z, u), pk, rtol=1e-10)
    assert np.max(np.abs(q1_kernel(0, z, u))) < 1e-12
    # classical weighted kernels: sum (n+1)(n+2) x^n = 2 (1-x)^-3, sum (n+1)(n+2)(n+3)/2 x^n = 3 (1-x)^-4
    assert np.allclose(weighted_bergman_kernel("bergman_w1", 0, z, w), 2 * (1 - x) ** -3, rtol=1e-10)
    assert np.allclose(weighted_bergman_kernel("bergman_w2", 0, z, w), 3 * (1 - x) ** -4, rtol=1e-10)


def test_weights_table():
    lam = 1.5
    n = np.arange(6)
    assert np.allclose(kernel_weights("bergman", lam, 5), (n + lam + 1) / (lam + 1))
    assert np.allclose(kernel_weights("bergman_w1", lam, 5), (n + lam + 2) * (n + lam + 1) / (lam + 1))
    assert np.allclose(kernel_weights("tilde", lam, 5), (n + lam + 2) / (lam + 1))
    assert np.allclose(kernel_weights("tilde_w1", lam, 5), (n + lam + 3) * (n + lam + 2) / (2 * lam + 2))
    assert np.allclose(kernel_weights("bergman_w2", lam, 5), (n + lam + 1) * (n + lam + 2) * (n + lam + 3) / (2 * lam + 2))


def test_tilde_w2_factor(rng):
    z, w = disk_points(rng, 10, 0.8), disk_points(rng, 10, 0.8)
    want = (1 - abs(z) ** 2) * (1 - abs(w) ** 2) * weighted_bergman_kernel("bergman_w2", 1.0, z, w)
    assert np.allclose(tilde_w2_kernel(1.0, z, w), want)


def test_adaptive_tail_is_certified(rng):
    for lam in (0.5, 2.5):
        z = 0.9 * np.exp(0.3j)
        w = 0.95 * np.exp(-1.1j)
        ref = brute("bergman", lam, z, w, 2000)
        res = evaluate(KernelEval("bergman", lam, truncation=Adaptive(1e-10)), z, w, full_output=True)
        assert abs(res.value - ref) < 1e-10
        assert res.terms_used > 10


def test_fixed_truncation_and_terms():
    ev = KernelEval("cauchy", 1.0, truncation=5)
    res = evaluate(ev, 0.5, 0.5, full_output=True)
    assert res.terms_used == 6
    assert res.value == pytest.approx(brute("cauchy", 1.0, 0.5, 0.5, 5))


def test_truncation_budget():
    with pytest.raises(NonConvergence):
        truncation_terms("bergman_w2", 2.5, 1 - 1e-6, 1e-14, budget=1000)


def test_series_edge_domain():
    with pytest.raises(DomainError):
        cauchy_kernel(1.0, 0.99999999, 0.99999999)


def test_closed_form_not_available():
    with pytest.raises(ValueError):
        KernelEval("bergman", 1.0, "closed_form")


def test_poisson_mass_and_positivity(lam):
    cr = build_circle_rule(lam, 512)
    for z in (0.0, 0.5j, 0.9 * np.exp(2j), -0.95):
        vals, _ = kernel_on_nodes("poisson", lam, z, cr)
        assert np.sum(vals * cr.weights) == pytest.approx(1.0, abs=1e-10)
        assert vals.real.min() > -1e-12


def test_q1_and_conjugate_poisson(rng):
    lam = 1.0
    z = disk_points(rng, 5, 0.8)
    u = np.exp(1j * (2 * rng.random(5) - 1) * np.pi)
    # Q1(z, w) = sum_{n>=1} 2 lam / sqrt(n (n + 2 lam)) phi_n(z) w phi_{n-1}(w), summed directly
    want = sum(2 * lam / np.sqrt(n * (n + 2 * lam)) * phi(n, lam, z) * u * phi(n - 1, lam, u)
               for n in range(1, 200))
    assert np.allclose(q1_kernel(lam, z, u), want, atol=1e-10)
    # Q = -i (2C - P - 1 - Q1)
    q = conjugate_poisson_kernel(lam, z, u)
    ref = -1j * (2 * cauchy_kernel(lam, z, u) - poisson_kernel(lam, z, u) - 1 - want)
    assert np.allclose(q, ref, atol=1e-10)


@pytest.mark.parametrize("kind", [k.value for k in KernelKind])
def test_kernel_on_nodes_matches_evaluate(kind):
    lam, z = 1.0, 0.6 * np.exp(0.7j)
    rule = build_disk_rule(lam, 16, 16)
    vals, _ = kernel_on_nodes(kind, lam, z, rule)
    direct = evaluate(KernelEval(kind, lam), np.full(rule.shape, z), rule.points)
    assert np.allclose(vals, direct, rtol=1e-11, atol=1e-11)


def test_majorant_at_origin():
    # Bergman majorant at z = 0 is 2^(1 - 2 lam); 2 in the classical case
    assert kernel_bound_majorant("bergman", 0.0, 0.0, 0.3) == pytest.approx(2.0)
    assert kernel_bound_majorant("bergman", 1.0, 0.0, 0.3) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        kernel_bound_majorant("q1", 1.0, 0.1, 0.2)


@given(x=st.floats(-0.9, 0.9), y=st.floats(-0.9, 0.9), u=st.floats(-0.9, 0.9), v=st.floats(-0.9, 0.9))
def test_hermitian_symmetry(x, y, u, v):
    z, w = complex(x, y) * 0.7, complex(u, v) * 0.7
    for kind in ("cauchy", "bergman", "bergman_w1"):
        a = evaluate(KernelEval(kind, 1.5), z, w)
        b = evaluate(KernelEval(kind, 1.5), w, z)
        assert abs(a - np.conj(b)) <= 1e-11 * max(1.0, abs(a))
