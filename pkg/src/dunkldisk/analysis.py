"""Integral means, Hardy and Bergman norms, and growth-estimate checkers.

Checkers report empirical constants.  A report is flagged ``ok = False``
only when the quantity the estimate bounds visibly grows, i.e. the ratio at
the last radii rises by more than ``GROWTH_LIMIT``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import CoeffSeries, check_disk_point, eval_series, phi_table
from .kernels import KernelKind, kernel_weights, truncation_terms
from .operators import derivative_char_map, disk_moment_constant
from .quadrature import CircleRule, DiskRule, as_lambda, default_circle_rule, default_disk_rule, gauss_jacobi

__all__ = [
    "GEOMETRIC_RADII",
    "GROWTH_LIMIT",
    "ExponentBelowThreshold",
    "MeanProfile",
    "BoundReport",
    "RadialReport",
    "HardyNorm",
    "p_mean",
    "mean_profile",
    "hardy_norm",
    "boundary_norm",
    "bergman_norm",
    "disk_lp_norm",
    "hardy_norm_coeff",
    "bergman_norm_coeff",
    "growth_exponent_check",
    "point_bound_check",
    "radial_integral_check",
    "dilation_bound_check",
    "norm_equivalence_ratio",
    "norm_equivalence_band",
    "random_series",
    "kernel_series",
]

GEOMETRIC_RADII = tuple(1.0 - 2.0 ** (-k) for k in range(11))
GROWTH_LIMIT = 2.0


class ExponentBelowThreshold(ValueError):
    """p lies below p0 = 2 lam / (2 lam + 1)."""


def _check_p(p, lam, allow_inf=True):
    p = float(p)
    if math.isinf(p):
        if not allow_inf:
            raise ValueError("p = inf is not allowed here")
        return p
    p0 = as_lambda(lam).p0
    if p <= 0 or p < p0 - 1e-15:
        raise ExponentBelowThreshold(f"p = {p} is below p0 = {p0:.6g}")
    return p


def _evaluate(f, z):
    if isinstance(f, CoeffSeries):
        return np.asarray(eval_series(f, z))
    return np.asarray(f(z), dtype=complex)


def _lam_of(f, rule):
    return rule.lam if rule is not None else f.lam


def _lp(vals, weights, p):
    a = np.abs(vals)
    if math.isinf(p):
        return float(a.max())
    return float(np.sum(weights * a**p) ** (1.0 / p))


# -- integral means -----------------------------------------------------------

def p_mean(f, p, r: float, rule: CircleRule | None = None) -> float:
    """M_p(f; r) = (int |f(r e^{i theta})|^p dm_lam)^(1/p); p = inf gives the node max.

    The node max is a lower bound for the true supremum.
    """
    rule = rule or default_circle_rule(f.lam)
    p = _check_p(p, rule.lam)
    if not 0.0 <= r <= 1.0:
        raise ValueError("radius must lie in [0, 1]")
    vals = _evaluate(f, r * rule.points)
    if not np.all(np.isfinite(vals)):
        from .quadrature import NonFiniteIntegrand
        raise NonFiniteIntegrand("function is not finite on the circle")
    return _lp(vals, rule.weights, p)


@dataclass
class MeanProfile:
    lam: float
    p: float
    radii: np.ndarray
    means: np.ndarray

    def is_nondecreasing(self, slack: float = 1e-9) -> bool:
        """Monotonicity of means of lambda-harmonic functions, p >= 1."""
        d = np.diff(self.means)
        return bool(np.all(d >= -slack * np.maximum(1.0, self.means[1:])))

    def quasi_monotone_ratio(self) -> float:
        """max over r' < r of M_p(r') / M_p(r); bounded by 2^(2/p-1) for p0 <= p < 1."""
        m = self.means
        worst = 0.0
        for i in range(len(m)):
            if m[i] > 0:
                worst = max(worst, float(np.max(m[: i + 1]) / m[i]))
        return worst


def mean_profile(f, p, radii=GEOMETRIC_RADII, rule: CircleRule | None = None) -> MeanProfile:
    rule = rule or default_circle_rule(f.lam)
    radii = np.asarray(radii, dtype=float)
    means = np.array([p_mean(f, p, r, rule) for r in radii])
    return MeanProfile(rule.lam, float(p), radii, means)


@dataclass
class HardyNorm:
    value: float
    at_0999: float
    richardson: float
    boundary: float | None
    profile: MeanProfile


def _richardson_zero(h, vals):
    """Lagrange extrapolation of vals(h) to h = 0."""
    out = 0.0
    for i, hi in enumerate(h):
        li = np.prod([hj / (hj - hi) for j, hj in enumerate(h) if j != i])
        out += li * vals[i]
    return float(out)


def hardy_norm(f, p, rule: CircleRule | None = None, *, full_output: bool = False):
    """sup_r M_p(f; r) over r = 1 - 2^-k, k = 0..10, and r = 0.999.

    Coefficient series are polynomials, continuous up to the circle, so the
    boundary mean M_p(f; 1) also enters the supremum; it is the limit of the
    means as r -> 1.  The r = 0.999 mean and a Richardson extrapolation
    from the last three grid radii are reported alongside.
    """
    rule = rule or default_circle_rule(f.lam)
    radii = np.array(sorted(set(GEOMETRIC_RADII) | {0.999}))
    prof = mean_profile(f, p, radii, rule)
    boundary = p_mean(f, p, 1.0, rule) if isinstance(f, CoeffSeries) else None
    h = 1.0 - prof.radii[-3:]
    rich = _richardson_zero(h, prof.means[-3:])
    value = float(prof.means.max())
    if boundary is not None:
        value = max(value, boundary)
    at = float(prof.means[np.argmin(np.abs(prof.radii - 0.999))])
    res = HardyNorm(value, at, rich, boundary, prof)
    return res if full_output else value


def boundary_norm(f, p, rule: CircleRule | None = None) -> float:
    """(int |f(e^{i theta})|^p dm_lam)^(1/p)."""
    return p_mean(f, p, 1.0, rule)


def disk_lp_norm(vals: np.ndarray, p, rule: DiskRule) -> float:
    """L^p(dsigma_lam) norm of node samples on ``rule``."""
    p = _check_p(p, rule.lam) if not math.isinf(float(p)) else float(p)
    return _lp(np.asarray(vals), rule.weights, p)


def bergman_norm(f, p, rule: DiskRule | None = None) -> float:
    """L^p(dsigma_lam) norm of f by disk quadrature."""
    rule = rule or default_disk_rule(f.lam)
    p = _check_p(p, rule.lam)
    return _lp(_evaluate(f, rule.points), rule.weights, p)


def hardy_norm_coeff(f: CoeffSeries) -> float:
    """H^2 norm from coefficients: sqrt(sum |c_n|^2)."""
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2)))


def bergman_norm_coeff(f: CoeffSeries) -> float:
    """A^2 norm from coefficients: sqrt(sum |c_n|^2 (lam+1)/(n+lam+1))."""
    n = np.arange(f.coeffs.size)
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * disk_moment_constant(f.lam, n))))


# -- test families ------------------------------------------------------------

def random_series(lam, degree: int, rng: np.random.Generator) -> CoeffSeries:
    """Series with independent standard complex Gaussian coefficients."""
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return CoeffSeries(lam, c / math.sqrt(2))


def kernel_series(kind, lam, w: complex, tol: float = 1e-14, radius: float = 1.0) -> CoeffSeries:
    """z -> K(z, w) as a coefficient series, accurate for |z| <= radius."""
    lam = float(as_lambda(lam))
    N = int(truncation_terms(kind, lam, abs(w) * radius, tol)[0])
    coef = kernel_weights(kind, lam, N) * phi_table(N, lam, complex(w)).conj()
    return CoeffSeries(lam, coef)


# -- bound checkers -----------------------------------------------------------

@dataclass
class BoundReport:
    """Normalised ratios along a radius grid and the derived verdict."""

    name: str
    params: dict
    radii: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    tail_growth: float
    non_increasing_tail: bool
    ok: bool
    lower_bound_estimate: bool = False
    notes: list = field(default_factory=list)


def _tail_verdict(ratios):
    tail = np.asarray(ratios[-3:])
    finite = bool(np.all(np.isfinite(ratios)))
    growth = float(tail.max() / tail[0]) if tail[0] > 0 else (math.inf if tail.max() > 0 else 1.0)
    nonincr = bool(np.all(np.diff(tail) <= 1e-12 * max(1.0, tail.max())))
    return growth, nonincr, finite and growth <= GROWTH_LIMIT


def growth_exponent_check(f, p, ell, radii=GEOMETRIC_RADII, space: str = "bergman",
                          rule: CircleRule | None = None, disk_rule: DiskRule | None = None,
                          norm: float | None = None) -> BoundReport:
    """Normalised ratio of M_ell(f; r) to its predicted growth.

    Bergman: M_ell(f;r) (1-r)^(delta (2lam+1) + 1/p) / ||f||_{A^p}.
    Hardy:   M_ell(f;r) (1-r)^(delta (2lam+1)) / ||f||_{H^p}.
    delta = 1/p - 1/ell.
    """
    rule = rule or default_circle_rule(f.lam)
    lam = rule.lam
    p = _check_p(p, lam, allow_inf=False)
    ell = float(ell)
    if ell < p:
        raise ValueError("need p <= ell")
    delta = 1.0 / p - (0.0 if math.isinf(ell) else 1.0 / ell)
    if space == "bergman":
        expo = delta * (2 * lam + 1) + 1.0 / p
        if norm is None:
            norm = bergman_norm(f, p, disk_rule or default_disk_rule(lam))
    elif space == "hardy":
        expo = delta * (2 * lam + 1)
        if norm is None:
            norm = hardy_norm(f, p, rule)
    else:
        raise ValueError("space must be 'bergman' or 'hardy'")
    radii = np.asarray(radii, dtype=float)
    means = np.array([p_mean(f, ell, r, rule) for r in radii])
    ratios = means * (1 - radii) ** expo / norm
    growth, nonincr, ok = _tail_verdict(ratios)
    return BoundReport(
        name=f"growth.{space}",
        params={"lambda": lam, "p": p, "ell": ell, "exponent": expo},
        radii=radii, ratios=ratios, max_ratio=float(ratios.max()), tail_growth=growth,
        non_increasing_tail=nonincr, ok=ok, lower_bound_estimate=math.isinf(ell),
    )


def point_bound_check(f, p, space: str = "bergman", radii=GEOMETRIC_RADII, n_angles: int = 64,
                      rule: CircleRule | None = None, disk_rule: DiskRule | None = None,
                      norm: float | None = None) -> BoundReport:
    """max over angles of |f(z)| (1-|z|)^(k/p) |1-z^2|^(2lam/p) / ||f||.

    k = 1 for Hardy and 2 for Bergman.  Angles are equispaced and include
    0 and pi, where |1 - z^2| is smallest.
    """
    lam = _lam_of(f, rule)
    p = _check_p(p, lam, allow_inf=False)
    if space == "bergman":
        k = 2
        if norm is None:
            norm = bergman_norm(f, p, disk_rule or default_disk_rule(lam))
    elif space == "hardy":
        k = 1
        if norm is None:
            norm = hardy_norm(f, p, rule or default_circle_rule(lam))
    else:
        raise ValueError("space must be 'bergman' or 'hardy'")
    radii = np.asarray(radii, dtype=float)
    theta = np.linspace(-np.pi, np.pi, 2 * n_angles, endpoint=False)
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    vals = np.abs(_evaluate(f, z))
    ratio = vals * (1 - np.abs(z)) ** (k / p) * np.abs(1 - z**2) ** (2 * lam / p) / norm
    per_r = ratio.max(axis=1)
    growth, nonincr, ok = _tail_verdict(per_r)
    return BoundReport(
        name=f"point.{space}", params={"lambda": lam, "p": p, "k": k},
        radii=radii, ratios=per_r, max_ratio=float(per_r.max()), tail_growth=growth,
        non_increasing_tail=nonincr, ok=ok, lower_bound_estimate=True,
    )


@dataclass
class RadialReport:
    lam: float
    p: float
    ell: float | None
    k: float | None
    hardy_ratio: float | None
    mean_lhs: float
    mean_rhs: float
    mean_ratio: float


def _unit_interval_rule(n: int, a: float = 0.0, b: float = 0.0):
    """Gauss rule for (1-r)^a r^b dr on [0, 1]."""
    x, w = gauss_jacobi(n, a, b)
    return 0.5 * (1 + x), w * 2.0 ** (-(a + b + 1))


def radial_integral_check(f, p, ell=None, k=None, rule: CircleRule | None = None,
                          n_radial: int = 64) -> RadialReport:
    """Both sides of the radial integral estimates for M_ell and M_p.

    With ell and k given (p0 < p < ell, p <= k), reports
    (int_0^1 (1-r)^(k delta (2lam+1) - 1) M_ell(f;r)^k dr)^(1/k) / ||f||_{H^p}.
    Always reports int_0^1 M_p^p dr / int_0^1 M_p^p r^(2lam+1) dr.
    """
    rule = rule or default_circle_rule(f.lam)
    lam = rule.lam
    p = _check_p(p, lam, allow_inf=False)
    hardy_ratio = None
    if ell is not None:
        ell = float(ell)
        k = float(k if k is not None else p)
        if not (as_lambda(lam).p0 < p < ell) or k < p:
            raise ValueError("need p0 < p < ell and k >= p")
        delta = 1.0 / p - (0.0 if math.isinf(ell) else 1.0 / ell)
        r, w = _unit_interval_rule(n_radial, k * delta * (2 * lam + 1) - 1.0)
        means = np.array([p_mean(f, ell, ri, rule) for ri in r])
        lhs = float(np.sum(w * means**k) ** (1.0 / k))
        hardy_ratio = lhs / hardy_norm(f, p, rule)
    r, w = _unit_interval_rule(n_radial)
    mp = np.array([p_mean(f, p, ri, rule) for ri in r]) ** p
    lhs0 = float(np.sum(w * mp))
    rhs0 = float(np.sum(w * mp * r ** (2 * lam + 1)))
    return RadialReport(lam, p, ell, k, hardy_ratio, lhs0, rhs0, lhs0 / rhs0)


def dilation_bound_check(f: CoeffSeries, p, s: float, rule: CircleRule | None = None):
    """(||f_s||_{H^p}, 2^(2/p) M_p(f; s)); the first must not exceed the second."""
    rule = rule or default_circle_rule(f.lam)
    return hardy_norm(f.dilate(s), p, rule), 2.0 ** (2.0 / p) * p_mean(f, p, s, rule)


# -- derivative characterisation ---------------------------------------------

def norm_equivalence_ratio(f: CoeffSeries, p, rule: DiskRule | None = None) -> float:
    """||f||_{A^p} / ||(1-|z|^2) D_z(z f)||_{L^p}."""
    rule = rule or default_disk_rule(f.lam)
    num = bergman_norm(f, p, rule)
    den = disk_lp_norm(derivative_char_map(f, rule.points), p, rule)
    return num / den


def norm_equivalence_band(lam, p, n_series: int, degree: int, rng: np.random.Generator,
                          rule: DiskRule | None = None):
    """Ratios over a random family; returns the array of ratios."""
    rule = rule or default_disk_rule(lam)
    return np.array([norm_equivalence_ratio(random_series(lam, degree, rng), p, rule)
                     for _ in range(n_series)])
