"""Poisson and Szego integrals, Bergman-type projections and coefficient maps.

All operators integrate against a truncated kernel series with the
supplied quadrature rule.  The sum over nodes is reordered into moments

    mu_m = sum_nodes weight * f(w) * conj(phi_m(w)),

so the result is sum_m kernel_weight_m mu_m phi_m(z).  This is the same
number as the node sum of f(w) K_M(z, w), where K_M is the kernel cut at
index M.  M is the smaller of the adaptive tail bound at |z| and the
highest degree the rule resolves.  As a result, polynomial inputs are
reproduced to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .basis import CoeffSeries, DomainError, check_disk_point, dz_shifted_series, eval_series, phi_table
from .kernels import KernelKind, kernel_on_nodes, kernel_weights, truncation_terms
from .quadrature import CircleRule, DiskRule, NonFiniteIntegrand, as_lambda, build_disk_rule

__all__ = [
    "MAX_DISK_RADIUS",
    "MAX_CIRCLE_RADIUS",
    "RadiusCapExceeded",
    "BoundaryFunction",
    "DiskFunction",
    "PROJECTIONS",
    "poisson_integral",
    "szego_transform",
    "szego_orthogonality_check",
    "bergman_project",
    "weighted_project",
    "project_to_series",
    "coeff_from_boundary",
    "coeff_from_disk",
    "disk_moment_constant",
    "derivative_char_map",
    "reconstruct_from_derivative",
    "schur_integral",
]

MAX_DISK_RADIUS = 0.95
MAX_CIRCLE_RADIUS = 0.99
DEFAULT_SERIES_LENGTH = 32


class RadiusCapExceeded(DomainError):
    """Evaluation point beyond the radius where the operator is accurate."""


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Data on the unit circle: a callable of the angle, or node samples."""

    lam: float
    values: object

    def sample(self, rule: CircleRule) -> np.ndarray:
        return _sample_boundary(self.values, rule)


@dataclass(frozen=True, eq=False)
class DiskFunction:
    """Data on the disk: a callable of the complex point, or node samples."""

    lam: float
    values: object

    def sample(self, rule: DiskRule) -> np.ndarray:
        return _sample_disk(self.values, rule)


def _finite(vals: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("input is not finite at every node")
    return vals


def _sample_boundary(f, rule: CircleRule) -> np.ndarray:
    if isinstance(f, BoundaryFunction):
        f = f.values
    if isinstance(f, CoeffSeries):
        vals = eval_series(f, rule.points)
    elif callable(f):
        vals = f(rule.theta)
    else:
        vals = f
    vals = np.asarray(vals, dtype=complex)
    if vals.shape != rule.theta.shape:
        vals = np.broadcast_to(vals, rule.theta.shape)
    return _finite(vals)


def _sample_disk(f, rule: DiskRule) -> np.ndarray:
    if isinstance(f, DiskFunction):
        f = f.values
    if isinstance(f, CoeffSeries):
        vals = eval_series(f, rule.points)
    elif callable(f):
        vals = f(rule.points)
    else:
        vals = f
    vals = np.asarray(vals, dtype=complex)
    if vals.shape != rule.shape:
        vals = np.broadcast_to(vals, rule.shape)
    return _finite(vals)


def _check_radius(z, cap: float, enforce: bool = True):
    z = np.asarray(z, dtype=complex)
    if enforce and np.any(np.abs(z) > cap):
        raise RadiusCapExceeded(f"evaluation radius is capped at {cap}; got {np.abs(z).max():.6g}")
    return check_disk_point(z)


def _n_terms(kind, lam, z, cap: int, n_terms, tol):
    if n_terms is not None:
        return int(n_terms)
    x = float(np.max(np.abs(z))) if np.size(z) else 0.0
    return int(min(truncation_terms(kind, lam, x, tol)[0], cap))


def _out(vals, z):
    return vals if np.ndim(z) else complex(vals.reshape(()))


# -- circle operators ---------------------------------------------------------

def _circle_moments(h: np.ndarray, rule: CircleRule, lam: float, M: int):
    """a_m = int h conj(phi_m) dm and b_m = int h w phi_m(w) dm on the rule."""
    tab = phi_table(M, lam, rule.points)
    hw = h * rule.weights
    a = hw @ tab.conj()
    b = (hw * rule.points) @ tab
    return a, b


def poisson_integral(f, z, rule: CircleRule, *, n_terms: int | None = None, tol: float = 1e-12,
                     enforce_cap: bool = True):
    """P(f; z) = int f(e^{i phi}) P(z, e^{i phi}) dm_lam(phi).

    With a_n = int f conj(phi_n) dm and b_n = int f w phi_n(w) dm the
    integral is sum_n a_n phi_n(z) + conj(z) sum_n b_n conj(phi_n(z)).
    """
    lam = rule.lam
    z = _check_radius(z, MAX_CIRCLE_RADIUS, enforce_cap)
    M = _n_terms(KernelKind.CAUCHY, lam, z, rule.exactness_degree // 2, n_terms, tol)
    a, b = _circle_moments(_sample_boundary(f, rule), rule, lam, M)
    pz = phi_table(M, lam, z)
    vals = pz @ a + z.conj() * (pz.conj() @ b)
    return _out(vals, z)


def szego_transform(h, z, rule: CircleRule, *, n_terms: int | None = None, tol: float = 1e-12,
                    enforce_cap: bool = True):
    """S_lam h(z) = int h(e^{i phi}) C(z, e^{i phi}) dm_lam(phi)."""
    lam = rule.lam
    z = _check_radius(z, MAX_CIRCLE_RADIUS, enforce_cap)
    M = _n_terms(KernelKind.CAUCHY, lam, z, rule.exactness_degree // 2, n_terms, tol)
    a, _ = _circle_moments(_sample_boundary(h, rule), rule, lam, M)
    vals = phi_table(M, lam, z) @ a
    return _out(vals, z)


def coeff_from_boundary(f, n: int, rule: CircleRule) -> complex:
    """c_n = int f(e^{i phi}) conj(phi_n(e^{i phi})) dm_lam(phi)."""
    vals = _sample_boundary(f, rule)
    tab = phi_table(n, rule.lam, rule.points)
    return complex(np.sum(vals * rule.weights * tab[:, n].conj()))


def szego_orthogonality_check(h, g, rule: CircleRule, ks=(2, 3, 4)) -> complex:
    """int (h - S_lam h) conj(g) dm_lam on the circle, extrapolated to r = 1.

    S_lam h is taken at radius r = 1 - 10^-k for each k, and the resulting
    integrals are extrapolated to zero in (1 - r) by a polynomial fit
    through all of them (Richardson).
    """
    lam = rule.lam
    hv = _sample_boundary(h, rule)
    gv = _sample_boundary(g, rule)
    hs = np.array([10.0 ** (-k) for k in ks])  # distances 1 - r
    vals = []
    for r in 1.0 - hs:
        s = szego_transform(hv, r * rule.points, rule, enforce_cap=False,
                            n_terms=rule.exactness_degree // 2)
        vals.append(np.sum((hv - s) * gv.conj() * rule.weights))
    vals = np.array(vals)
    # Lagrange interpolation in (1 - r) evaluated at 0
    out = 0j
    for i, hi in enumerate(hs):
        li = np.prod([hj / (hj - hi) for j, hj in enumerate(hs) if j != i])
        out += li * vals[i]
    return complex(out)


# -- disk operators -----------------------------------------------------------

# variant -> (kernel series, power j of (1-|w|^2) in the measure, multiply by 1-|z|^2)
PROJECTIONS = {
    "bergman": (KernelKind.BERGMAN, 0, False),
    "w1": (KernelKind.BERGMAN_W1, 1, False),
    "w2": (KernelKind.BERGMAN_W2, 2, False),
    "tilde": (KernelKind.TILDE, 1, False),
    "tilde-w1": (KernelKind.TILDE_W1, 1, False),
    "tilde-w2": (KernelKind.BERGMAN_W2, 1, True),
}


def _disk_cap(rule: DiskRule) -> int:
    return min(rule.angular_exactness // 2, rule.radial_exactness // 2)


def _disk_moments(vals: np.ndarray, rule: DiskRule, M: int, jpow: int) -> np.ndarray:
    """mu_m = sum over nodes of weight (1-|w|^2)^j f(w) conj(phi_m(w)), m <= M."""
    tab = phi_table(M, rule.lam, rule.circle.points)  # (n_theta, M+1)
    ang = vals @ (rule.circle.weights[:, None] * tab.conj())  # (n_r, M+1)
    r = rule.radii
    rad = rule.radial_weights * (1 - r**2) ** jpow
    powers = r[:, None] ** np.arange(M + 1)[None, :]
    return (rad[:, None] * powers * ang).sum(axis=0)


def disk_moment_constant(lam, n, j: int = 0):
    """int |phi_n|^2 (1-|w|^2)^j dsigma_lam = (lam+1) j! Gamma(n+lam+1) / Gamma(n+lam+j+2)."""
    lam = float(as_lambda(lam))
    n = np.asarray(n, dtype=float)
    return (lam + 1) * np.exp(gammaln(j + 1) + gammaln(n + lam + 1) - gammaln(n + lam + j + 2))


def weighted_project(f, z, rule: DiskRule, variant: str = "bergman", *, n_terms: int | None = None,
                     tol: float = 1e-12, enforce_cap: bool = True):
    """Integrate f against one of the Bergman-type kernels.

    ``variant`` is one of :data:`PROJECTIONS`: ``bergman`` is P_lam, ``w1``
    and ``w2`` use K_{lam,j} with (1-|w|^2)^j dsigma_lam, ``tilde-w1`` uses
    the tilde kernel of order one with (1-|w|^2) dsigma_lam, ``tilde-w2``
    the kernel K_{lam,2}(z,w)(1-|z|^2)(1-|w|^2) with dsigma_lam, and
    ``tilde`` the kernel with weight (n+lam+2)/(lam+1) against
    (1-|w|^2) dsigma_lam.
    """
    if variant not in PROJECTIONS:
        raise ValueError(f"unknown projection variant {variant!r}")
    kind, jpow, outer = PROJECTIONS[variant]
    lam = rule.lam
    z = _check_radius(z, MAX_DISK_RADIUS, enforce_cap)
    M = _n_terms(kind, lam, z, _disk_cap(rule), n_terms, tol)
    mu = _disk_moments(_sample_disk(f, rule), rule, M, jpow)
    vals = phi_table(M, lam, z) @ (kernel_weights(kind, lam, M) * mu)
    if outer:
        vals = vals * (1 - np.abs(z) ** 2)
    return _out(vals, z)


def bergman_project(f, z, rule: DiskRule, **kw):
    """(P_lam f)(z) = int f(w) K_lam(z, w) dsigma_lam(w)."""
    return weighted_project(f, z, rule, "bergman", **kw)


def project_to_series(f, rule: DiskRule, variant: str = "bergman",
                      n_max: int = DEFAULT_SERIES_LENGTH) -> CoeffSeries:
    """Coefficients of the projected function, for variants without an outer factor."""
    kind, jpow, outer = PROJECTIONS[variant]
    if outer:
        raise ValueError("the tilde-w2 output is not lambda-analytic")
    mu = _disk_moments(_sample_disk(f, rule), rule, n_max, jpow)
    return CoeffSeries(rule.lam, kernel_weights(kind, rule.lam, n_max) * mu)


def coeff_from_disk(f, n: int, rule: DiskRule, j: int = 0) -> complex:
    """c_n recovered from int conj(phi_n) f (1-|w|^2)^j dsigma_lam."""
    if j not in (0, 1, 2):
        raise ValueError("weight power must be 0, 1 or 2")
    mu = _disk_moments(_sample_disk(f, rule), rule, n, j)
    return complex(mu[n] / disk_moment_constant(rule.lam, n, j))


# -- derivative characterisation ---------------------------------------------

def derivative_char_map(f: CoeffSeries, z):
    """(1 - |z|^2) D_z(z f)(z)."""
    z = check_disk_point(z)
    vals = (1 - np.abs(z) ** 2) * np.asarray(eval_series(dz_shifted_series(f), z))
    return vals if np.ndim(z) else complex(vals)


def reconstruct_from_derivative(f: CoeffSeries, z, rule: DiskRule, variant: str = "tilde-w1", **kw):
    """Recover f(z) from D_w(w f) by the tilde kernels.

    ``tilde-w1`` integrates against the order-one tilde kernel with
    (1-|w|^2)^2 dsigma_lam; ``tilde`` against the weight (n+lam+2)/(lam+1)
    kernel with (1-|w|^2) dsigma_lam.
    """
    if f.lam != rule.lam:
        raise ValueError("series and rule use different lambda")
    kinds = {"tilde-w1": (KernelKind.TILDE_W1, 2), "tilde": (KernelKind.TILDE, 1)}
    if variant not in kinds:
        raise ValueError(f"unknown reconstruction variant {variant!r}")
    kind, jpow = kinds[variant]
    z = _check_radius(z, MAX_DISK_RADIUS, kw.pop("enforce_cap", True))
    lam = rule.lam
    M = _n_terms(kind, lam, z, _disk_cap(rule), kw.pop("n_terms", None), kw.pop("tol", 1e-12))
    deriv = eval_series(dz_shifted_series(f), rule.points)
    mu = _disk_moments(np.asarray(deriv), rule, M, jpow)
    vals = phi_table(M, lam, z) @ (kernel_weights(kind, lam, M) * mu)
    return _out(vals, z)


# -- Schur-test integrals -----------------------------------------------------

def schur_integral(lam, z, alpha: float, j: int = 0, n_radial: int = 96, n_angular: int = 128,
                   tol: float = 1e-10) -> float:
    """(1-|z|^2)^alpha int |K(z,w)| (1-|w|^2)^(j-alpha) dsigma_lam(w).

    K is K_lam for j = 0 and K_{lam,j} for j = 1, 2.  The factor
    (1-r)^(j-alpha) is absorbed into a Gauss-Jacobi radial rule.
    """
    if not 0 < alpha < j + 1:
        raise ValueError("need 0 < alpha < j + 1")
    kind = {0: KernelKind.BERGMAN, 1: KernelKind.BERGMAN_W1, 2: KernelKind.BERGMAN_W2}[j]
    z = complex(z)
    rule = build_disk_rule(lam, n_radial, n_angular, radial_exponent=j - alpha)
    vals, _ = kernel_on_nodes(kind, lam, z, rule, tol)
    weights = rule.weights * ((1 + rule.radii) ** (j - alpha))[:, None]
    return float(np.sum(np.abs(vals) * weights) * (1 - abs(z) ** 2) ** alpha)
