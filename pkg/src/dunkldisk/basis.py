"""The lambda-analytic basis phi_n, the Dunkl operators and coefficient series.

phi_n(z) = eps_n sum_j (lam)_j (lam+1)_{n-j} / (j! (n-j)!) conj(z)^j z^(n-j)

is evaluated by that finite sum in :func:`phi`.  :func:`phi_table` returns
phi_0..phi_N at many points at once through the compiled recurrence.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _core
from .quadrature import as_lambda, gauss_jacobi
from .specfun import epsilon_n, gegenbauer, log_epsilon_n

__all__ = [
    "DomainError",
    "LambdaZeroUnsupported",
    "LambdaMismatch",
    "StepTooSmall",
    "CoeffSeries",
    "check_disk_point",
    "phi",
    "phi_table",
    "phi_polar",
    "phi_integral_oracle",
    "dz_series",
    "dz_shifted_series",
    "eval_series",
    "partial_sum",
    "dunkl_dz",
    "dunkl_dzbar",
    "dzbar_residual",
]


class DomainError(ValueError):
    """A point lies outside the region an operation is defined on."""


class LambdaZeroUnsupported(ValueError):
    """The formula divides by lam and has no lam = 0 version."""


class LambdaMismatch(ValueError):
    """Series built on different lam were combined."""


class StepTooSmall(ValueError):
    pass


def check_disk_point(z, radius: float = 1.0, closed: bool = False):
    """Return ``z`` as an array after checking |z| < radius (or <=)."""
    arr = np.asarray(z, dtype=complex)
    mod = np.abs(arr)
    # closed check allows rounding in |e^{i theta}|
    bad = mod > radius + 1e-12 if closed else mod >= radius
    if np.any(bad):
        op = "<=" if closed else "<"
        raise DomainError(f"points must satisfy |z| {op} {radius}; got max |z| = {mod.max():.6g}")
    return arr


def _sum_coefficients(n: int, lam: float) -> np.ndarray:
    """(lam)_j (lam+1)_{n-j} / (j! (n-j)!) for j = 0..n."""
    a = np.empty(n + 1)
    b = np.empty(n + 1)
    a[0] = b[0] = 1.0
    for j in range(1, n + 1):
        a[j] = a[j - 1] * (lam + j - 1) / j
        b[j] = b[j - 1] * (lam + j) / j
    return a * b[::-1]


def phi(n: int, lam, z):
    """phi_n^lam(z) for |z| <= 1 by the defining finite sum."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    lam = float(as_lambda(lam))
    zz = check_disk_point(z, closed=True)
    if n == 0:
        out = np.ones_like(zz)
        return out if out.ndim else complex(out)
    if lam == 0.0:
        out = zz**n
        return out if out.ndim else complex(out)
    coef = _sum_coefficients(n, lam)
    r = np.abs(zz)
    theta = np.angle(zz)
    # conj(z)^j z^(n-j) = r^n e^{i (n - 2j) theta}
    freq = n - 2 * np.arange(n + 1)
    phase = np.exp(1j * np.multiply.outer(theta, freq))
    out = epsilon_n(n, lam) * r**n * (phase @ coef)
    return out if np.ndim(out) else complex(out)


def phi_table(nmax: int, lam, z) -> np.ndarray:
    """phi_0..phi_nmax at every point of ``z``; shape ``z.shape + (nmax+1,)``."""
    lam = float(as_lambda(lam))
    zz = np.asarray(z, dtype=complex)
    tab = _core.phi_table(zz.ravel(), lam, int(nmax))
    return tab.reshape(zz.shape + (nmax + 1,))


def phi_polar(n: int, lam, r, theta):
    """phi_n from the Gegenbauer form, valid for lam > 0 and n >= 1."""
    lam = float(as_lambda(lam))
    if lam == 0.0:
        raise LambdaZeroUnsupported("the polar form divides by 2 lam")
    if n < 1:
        raise ValueError("the polar form is stated for n >= 1")
    t = np.cos(theta)
    lead = (n + 2 * lam) / (2 * lam) * gegenbauer(n, lam, t)
    odd = 1j * np.sin(theta) * gegenbauer(n - 1, lam + 1, t)
    return epsilon_n(n, lam) * np.asarray(r) ** n * (lead + odd)


def phi_integral_oracle(n: int, lam, z, n_nodes: int | None = None):
    """phi_n from its Beta-integral representation.

    eps_n phi_n(z) is the mean of (s z + (1-s) conj(z))^n under the
    Beta(lam + 1, lam) law on (0, 1); the mean is taken with a Gauss rule
    that is exact for the degree-n integrand.
    """
    lam = float(as_lambda(lam))
    if lam == 0.0:
        raise LambdaZeroUnsupported("the weight (1-s)^(lam-1) is not integrable at lam = 0")
    zz = np.asarray(z, dtype=complex)
    m = n_nodes or (n // 2 + 2)
    # s = (1+x)/2: (1-s)^(lam-1) s^lam  <->  Jacobi(alpha=lam-1, beta=lam)
    x, w = gauss_jacobi(m, lam - 1.0, lam)
    s = 0.5 * (1.0 + x)
    w = w / w.sum()
    lin = np.multiply.outer(zz, s) + np.multiply.outer(zz.conj(), 1.0 - s)
    mean = (lin**n) @ w
    out = mean / epsilon_n(n, lam)
    return out if np.ndim(out) else complex(out)


@dataclass(frozen=True, eq=False)
class CoeffSeries:
    """f = sum_n coeffs[n] phi_n^lam, stored densely from index 0."""

    lam: float
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", float(as_lambda(self.lam)))
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return eval_series(self, z)

    def _same_lambda(self, other: "CoeffSeries"):
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        if other.lam != self.lam:
            raise LambdaMismatch(f"cannot combine lam={self.lam} with lam={other.lam}")
        return other

    def __add__(self, other):
        other = self._same_lambda(other)
        if other is NotImplemented:
            return other
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return CoeffSeries(self.lam, c)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, CoeffSeries):
            return NotImplemented
        return CoeffSeries(self.lam, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def allclose(self, other: "CoeffSeries", atol: float = 0.0, rtol: float = 1e-12) -> bool:
        other = self._same_lambda(other)
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.allclose(a, b, atol=atol, rtol=rtol))

    def dilate(self, s: float) -> "CoeffSeries":
        """Series of f_s(z) = f(s z)."""
        return CoeffSeries(self.lam, self.coeffs * s ** np.arange(self.coeffs.size))

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "coeffs": [[c.real, c.imag] for c in self.coeffs.tolist()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CoeffSeries":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        return cls(data["lambda"], np.array(coeffs, dtype=complex))

    @classmethod
    def from_json(cls, text: str) -> "CoeffSeries":
        return cls.from_dict(json.loads(text))

    @classmethod
    def unit(cls, lam, n: int) -> "CoeffSeries":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = 1.0
        return cls(lam, c)


def eval_series(f: CoeffSeries, z):
    """Evaluate f at |z| <= 1."""
    zz = check_disk_point(z, closed=True)
    tab = phi_table(f.degree, f.lam, zz)
    out = tab @ f.coeffs
    return out if np.ndim(out) else complex(out)


def partial_sum(f: CoeffSeries, n: int) -> CoeffSeries:
    if not 0 <= n <= f.degree:
        raise ValueError(f"partial sum index must lie in [0, {f.degree}]")
    return CoeffSeries(f.lam, f.coeffs[: n + 1])


def dz_series(f: CoeffSeries) -> CoeffSeries:
    """D_z f in coefficients: D_z phi_n = sqrt(n (n + 2 lam)) phi_{n-1}."""
    n = np.arange(1, f.coeffs.size)
    if n.size == 0:
        return CoeffSeries(f.lam, [0.0])
    return CoeffSeries(f.lam, np.sqrt(n * (n + 2 * f.lam)) * f.coeffs[1:])


def dz_shifted_series(f: CoeffSeries) -> CoeffSeries:
    """D_z(z f) in coefficients: the n-th coefficient gets the factor n + lam + 1."""
    n = np.arange(f.coeffs.size)
    return CoeffSeries(f.lam, (n + f.lam + 1) * f.coeffs)


# -- pointwise Dunkl operators by central differences ------------------------

def _partials(f, z, h):
    fx = (f(z + h) - f(z - h)) / (2 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    return fx, fy


def _reflection_quotient(f, z, h, fy):
    """(f(z) - f(conj z)) / (z - conj z), with its limit -i d_y f on the real axis."""
    z = np.asarray(z, dtype=complex)
    near_axis = np.abs(z.imag) < 1e-8
    # placeholder interior point where the quotient is replaced anyway
    safe = np.where(near_axis, 0.5j, z)
    quot = (f(safe) - f(safe.conj())) / (safe - safe.conj())
    return np.where(near_axis, -1j * fy, quot)


def dunkl_dz(f, z, lam, h: float = 1e-5):
    """D_z f = d_z f + lam (f(z) - f(conj z)) / (z - conj z), numerically."""
    return _dunkl(f, z, lam, h, sign=+1)


def dunkl_dzbar(f, z, lam, h: float = 1e-5):
    """D_zbar f = d_zbar f - lam (f(z) - f(conj z)) / (z - conj z), numerically."""
    return _dunkl(f, z, lam, h, sign=-1)


def _dunkl(f, z, lam, h, sign):
    if h < 1e-10:
        raise StepTooSmall(f"finite-difference step {h} is below 1e-10")
    lam = float(as_lambda(lam))
    z = np.asarray(z, dtype=complex)
    fx, fy = _partials(f, z, h)
    wirtinger = 0.5 * (fx - 1j * fy) if sign > 0 else 0.5 * (fx + 1j * fy)
    out = wirtinger + sign * lam * _reflection_quotient(f, z, h, fy)
    return out if out.ndim else complex(out)


def dzbar_residual(f, z, lam, h: float = 1e-5):
    """D_zbar f at z; vanishes up to O(h^2) for lambda-analytic f."""
    return dunkl_dzbar(f, z, lam, h)
