"""Gauss rules for the circle measure dm_lam and the disk measure dsigma_lam.

dm_lam(theta) = ct_lam |sin theta|^(2 lam) dtheta on (-pi, pi) and
dsigma_lam = (2 lam + 2) r^(2 lam + 1) dr x dm_lam(theta) in polar form, both
of total mass one.  Nodes come from the Jacobi matrix of the relevant Jacobi
weight (Golub-Welsch).
"""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

__all__ = [
    "EigenFailure",
    "NonFiniteIntegrand",
    "LambdaParam",
    "CircleRule",
    "DiskRule",
    "gauss_jacobi",
    "build_circle_rule",
    "build_disk_rule",
    "integrate_circle",
    "integrate_disk",
    "default_circle_rule",
    "default_disk_rule",
    "DEFAULT_N_ANGULAR",
    "DEFAULT_N_RADIAL",
]

DEFAULT_N_ANGULAR = 128
DEFAULT_N_RADIAL = 96


class EigenFailure(RuntimeError):
    """The tridiagonal eigensolve for Gauss nodes did not converge."""


class NonFiniteIntegrand(ValueError):
    """An integrand returned inf or nan at a quadrature node."""


@dataclass(frozen=True)
class LambdaParam:
    """Deformation parameter lam >= 0 and its derived constants."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not (lam >= 0.0 and math.isfinite(lam)):
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def c_lambda(self) -> float:
        """Normaliser of dsigma_lam: Gamma(lam+2) / (Gamma(lam+1/2) Gamma(1/2))."""
        lam = self.lam
        return math.exp(math.lgamma(lam + 2) - math.lgamma(lam + 0.5) - math.lgamma(0.5))

    @property
    def c_tilde(self) -> float:
        return self.c_lambda / (2 * self.lam + 2)

    @property
    def p0(self) -> float:
        return 2 * self.lam / (2 * self.lam + 1)

    def __float__(self) -> float:
        return self.lam


def as_lambda(lam) -> LambdaParam:
    return lam if isinstance(lam, LambdaParam) else LambdaParam(lam)


def _jacobi_recurrence(n: int, alpha: float, beta: float):
    """Diagonal and off-diagonal of the symmetric Jacobi matrix."""
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2)
    if n > 1:
        kk = k[1:]
        diag[1:] = (beta**2 - alpha**2) / ((2 * kk + ab) * (2 * kk + ab + 2))
    off_sq = np.empty(max(n - 1, 0))
    if n > 1:
        # b_1 has a removable 0/0 when alpha + beta = -1
        off_sq[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        kk = k[2:]
        off_sq[1:] = (4 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
                      / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1)))
    return diag, np.sqrt(off_sq)


def gauss_jacobi(n: int, alpha: float, beta: float):
    """Nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.

    Weights sum to the total mass of the weight.  Exact for polynomials of
    degree <= 2n - 1.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    diag, off = _jacobi_recurrence(n, alpha, beta)
    try:
        x, vec = eigh_tridiagonal(diag, off)
    except (LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise EigenFailure("non-finite Gauss nodes")
    log_mu0 = ((alpha + beta + 1) * math.log(2) + math.lgamma(alpha + 1)
               + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))
    w = math.exp(log_mu0) * vec[0, :] ** 2
    return x, w


@dataclass(frozen=True, eq=False)
class CircleRule:
    """Mirrored Gauss rule for dm_lam; weights sum to one.

    ``theta`` holds the n nodes in (0, pi) followed by their mirror images
    in (-pi, 0).  Trigonometric polynomials of degree <= ``exactness_degree``
    are integrated exactly.
    """

    lam: float
    theta: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.theta)

    @property
    def size(self) -> int:
        return self.theta.size

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "nodes": self.theta.tolist(),
            "weights": self.weights.tolist(),
            "exactness": self.exactness_degree,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True, eq=False)
class DiskRule:
    """Tensor rule (radial Gauss) x (CircleRule) for dsigma_lam.

    With ``radial_exponent = a`` the rule represents (1 - r)^a dsigma_lam
    instead, which is how boundary singularities such as (1-|w|^2)^(-alpha)
    are absorbed into the weights.
    """

    lam: float
    radii: np.ndarray
    radial_weights: np.ndarray
    circle: CircleRule
    radial_exactness: int
    radial_exponent: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def angular_exactness(self) -> int:
        return self.circle.exactness_degree

    @property
    def shape(self) -> tuple[int, int]:
        return self.radii.size, self.circle.size

    @property
    def points(self) -> np.ndarray:
        """Nodes as a (n_radial, n_angular) complex grid."""
        if "points" not in self._cache:
            self._cache["points"] = self.radii[:, None] * self.circle.points[None, :]
        return self._cache["points"]

    @property
    def weights(self) -> np.ndarray:
        """Node weights on the same grid as ``points``."""
        return self.radial_weights[:, None] * self.circle.weights[None, :]

    def to_dict(self) -> dict:
        pts = self.points.ravel()
        return {
            "lambda": self.lam,
            "nodes": [[float(abs(p)), float(np.angle(p))] for p in pts],
            "weights": self.weights.ravel().tolist(),
            "exactness": {"radial": self.radial_exactness, "angular": self.angular_exactness},
            "radial_exponent": self.radial_exponent,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_circle_rule(lam, n_points: int = DEFAULT_N_ANGULAR) -> CircleRule:
    """Circle rule with ``n_points`` nodes per half circle.

    t = cos(theta) turns |sin theta|^(2 lam) dtheta on (0, pi) into the
    Gegenbauer weight (1 - t^2)^(lam - 1/2) dt.
    """
    lp = as_lambda(lam)
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    a = lp.lam - 0.5
    t, w = gauss_jacobi(n_points, a, a)
    th = np.arccos(np.clip(t, -1.0, 1.0))
    w = w / (2.0 * w.sum())
    return CircleRule(
        lam=lp.lam,
        theta=np.concatenate([th, -th]),
        weights=np.concatenate([w, w]),
        exactness_degree=2 * n_points - 1,
    )


def build_radial_rule(lam, n_radial: int, radial_exponent: float = 0.0):
    """Gauss rule on (0, 1) for (2 lam + 2) r^(2 lam + 1) (1 - r)^a dr."""
    lp = as_lambda(lam)
    beta = 2 * lp.lam + 1
    x, w = gauss_jacobi(n_radial, radial_exponent, beta)
    r = 0.5 * (1.0 + x)
    # map [-1,1] -> [0,1]: (1-x)^a (1+x)^b dx = 2^(a+b+1) (1-r)^a r^b dr
    w = w * math.exp(-(radial_exponent + beta + 1) * math.log(2)) * (2 * lp.lam + 2)
    if radial_exponent == 0.0:
        w = w / w.sum()
    return r, w


def build_disk_rule(lam, n_radial: int = DEFAULT_N_RADIAL, n_angular: int = DEFAULT_N_ANGULAR,
                    radial_exponent: float = 0.0) -> DiskRule:
    lp = as_lambda(lam)
    if n_radial < 1 or n_angular < 1:
        raise ValueError("rule sizes must be >= 1")
    r, w = build_radial_rule(lp, n_radial, radial_exponent)
    return DiskRule(
        lam=lp.lam,
        radii=r,
        radial_weights=w,
        circle=build_circle_rule(lp, n_angular),
        radial_exactness=2 * n_radial - 1,
        radial_exponent=radial_exponent,
    )


def _checked(vals: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand is not finite at every node")
    return vals


def integrate_circle(rule: CircleRule, f) -> complex:
    """Weighted node sum of ``f(theta)`` (vectorised over angles)."""
    vals = _checked(np.asarray(f(rule.theta), dtype=complex))
    return complex(np.sum(vals * rule.weights))


def integrate_disk(rule: DiskRule, f) -> complex:
    """Weighted node sum of ``f(w)`` over the (n_radial, n_angular) node grid."""
    vals = _checked(np.asarray(f(rule.points), dtype=complex))
    return complex(np.sum(vals * rule.weights))


@functools.lru_cache(maxsize=32)
def default_circle_rule(lam: float, n_points: int = DEFAULT_N_ANGULAR) -> CircleRule:
    """Cached :func:`build_circle_rule`; rules are immutable so sharing is safe."""
    return build_circle_rule(float(lam), n_points)


@functools.lru_cache(maxsize=32)
def default_disk_rule(lam: float, n_radial: int = DEFAULT_N_RADIAL,
                      n_angular: int = DEFAULT_N_ANGULAR) -> DiskRule:
    return build_disk_rule(float(lam), n_radial, n_angular)
