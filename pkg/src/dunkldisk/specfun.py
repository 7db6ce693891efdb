"""Scalar special functions: Pochhammer symbols, Gegenbauer polynomials,
the Gauss hypergeometric function and the basis normalisers eps_n.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

__all__ = [
    "NonConvergence",
    "Hyp2F1Result",
    "pochhammer",
    "gegenbauer",
    "hyp2f1",
    "epsilon_n",
    "log_epsilon_n",
]

HYP_TOL = 1e-12
HYP_MAX_TERMS = 10_000


class NonConvergence(ArithmeticError):
    """A series or iteration did not reach its tolerance within budget."""


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 for ``k == 0``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def gegenbauer(n: int, lam: float, t):
    """Gegenbauer polynomial P_n^lam(t) by the three-term recurrence.

    ``t`` may be a scalar or an array with entries in [-1, 1].  For
    ``lam == 0`` the standard normalisation makes P_n^0 vanish for n >= 1.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if lam <= -0.5:
        raise ValueError("order must exceed -1/2")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0 + 1e-14):
        raise ValueError("argument must lie in [-1, 1]")
    prev = np.ones_like(t_arr)
    if n == 0:
        return prev if t_arr.ndim else float(prev)
    cur = 2.0 * lam * t_arr
    for k in range(2, n + 1):
        prev, cur = cur, (2.0 * (k + lam - 1) * t_arr * cur - (k + 2 * lam - 2) * prev) / k
    return cur if t_arr.ndim else float(cur)


def log_epsilon_n(n, lam: float):
    """log eps_n with eps_n = sqrt(n! / (2 lam + 1)_n)."""
    n = np.asarray(n, dtype=float)
    out = 0.5 * (sc.gammaln(n + 1) + sc.gammaln(2 * lam + 1) - sc.gammaln(2 * lam + 1 + n))
    return out if out.ndim else float(out)


def epsilon_n(n, lam: float):
    """Normaliser eps_n of the basis function phi_n, evaluated in log space."""
    out = np.exp(log_epsilon_n(n, lam))
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class Hyp2F1Result:
    value: float
    terms: int
    method: str
    tolerance: float


def hyp2f1(a: float, b: float, c: float, x: float, *, tol: float = HYP_TOL,
           max_terms: int = HYP_MAX_TERMS, full_output: bool = False):
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x < 1.

    Regimes: direct series for |x| <= 1/2, Pfaff transformation for
    x < -1/2, and the 1 - x connection formulas for 1/2 < x < 1 (with the
    logarithmic variant when c - a - b is an integer).

    Raises
    ------
    NonConvergence
        If a series does not reach ``tol`` within ``max_terms`` terms.
    """
    res = _hyp2f1(float(a), float(b), float(c), float(x), tol, max_terms)
    return res if full_output else res.value


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def _hyp2f1(a, b, c, x, tol, max_terms) -> Hyp2F1Result:
    if _is_nonpos_int(c):
        raise ValueError("c must not be a nonpositive integer")
    if not x < 1.0:
        raise ValueError("argument must be strictly below 1")
    if a == 0.0 or b == 0.0 or x == 0.0:
        return Hyp2F1Result(1.0, 1, "trivial", tol)
    # terminating series: exact polynomial for any x
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        deg = int(-max(a if _is_nonpos_int(a) else -math.inf, b if _is_nonpos_int(b) else -math.inf))
        val, n = _series(a, b, c, x, tol, deg + 2)
        return Hyp2F1Result(val, n, "polynomial", tol)
    if abs(x) <= 0.5:
        val, n = _series(a, b, c, x, tol, max_terms)
        return Hyp2F1Result(val, n, "series", tol)
    if x < -0.5:
        # Pfaff: F(a,b;c;x) = (1-x)^(-a) F(a, c-b; c; x/(x-1))
        inner = _hyp2f1(a, c - b, c, x / (x - 1.0), tol, max_terms)
        return Hyp2F1Result((1.0 - x) ** (-a) * inner.value, inner.terms, "pfaff+" + inner.method, tol)
    return _connection(a, b, c, x, tol, max_terms)


def _series(a, b, c, x, tol, max_terms):
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        if term == 0.0:
            return total, n + 1
        if abs(term) <= tol * abs(total) and abs(x) < 1:
            # tail is geometric with ratio -> |x|; one more check of the ratio
            ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * x)
            if ratio < 1 and abs(term) * ratio / (1 - ratio) <= tol * abs(total):
                return total, n + 1
    raise NonConvergence(f"2F1 series did not converge in {max_terms} terms (x={x})")


def _connection(a, b, c, x, tol, max_terms) -> Hyp2F1Result:
    s = c - a - b
    m = round(s)
    if abs(s - m) > 1e-12:
        # 1 - x connection, non-integer c - a - b
        y = 1.0 - x
        g1 = sc.gamma(c) * sc.gamma(s) * sc.rgamma(c - a) * sc.rgamma(c - b)
        g2 = sc.gamma(c) * sc.gamma(-s) * sc.rgamma(a) * sc.rgamma(b)
        f1, n1 = _series(a, b, 1.0 - s, y, tol, max_terms) if g1 != 0 else (0.0, 0)
        f2, n2 = _series(c - a, c - b, 1.0 + s, y, tol, max_terms) if g2 != 0 else (0.0, 0)
        return Hyp2F1Result(g1 * f1 + y ** s * g2 * f2, n1 + n2, "connection", tol)
    if m < 0:
        # Euler: F(a,b;c;x) = (1-x)^(c-a-b) F(c-a, c-b; c; x) moves to m > 0
        inner = _connection(c - a, c - b, c, x, tol, max_terms)
        return Hyp2F1Result((1.0 - x) ** s * inner.value, inner.terms, "euler+" + inner.method, tol)
    val, n = _log_connection(a, b, m, x, tol, max_terms)
    return Hyp2F1Result(val, n, f"log-connection(m={m})", tol)


def _log_connection(a, b, m, x, tol, max_terms):
    """2F1(a, b; a+b+m; x) for integer m >= 0 and 1/2 < x < 1."""
    y = 1.0 - x
    c = a + b + m
    log_y = math.log(y)
    finite = 0.0
    if m > 0:
        pref = sc.gamma(m) * sc.gamma(c) * sc.rgamma(a + m) * sc.rgamma(b + m)
        term = 1.0
        for n in range(m):
            if n > 0:
                term *= (a + n - 1) * (b + n - 1) / (n * (1 - m + n - 1)) * y
            finite += term
        finite *= pref
    pref = sc.gamma(c) * sc.rgamma(a) * sc.rgamma(b)
    if pref == 0.0:
        return finite, m
    # digamma values advanced by psi(t + 1) = psi(t) + 1/t
    psi_n1 = sc.digamma(1.0)
    psi_nm1 = sc.digamma(m + 1.0)
    psi_a = sc.digamma(a + m)
    psi_b = sc.digamma(b + m)
    coef = 1.0 / math.factorial(m)
    total = 0.0
    for n in range(max_terms):
        term = coef * (log_y - psi_n1 - psi_nm1 + psi_a + psi_b)
        total += term
        if n > 2 and abs(term) <= tol * abs(total) and abs(coef) * y <= tol * abs(total):
            sign = 1.0 if m % 2 == 0 else -1.0
            return finite - sign * pref * y ** m * total, n + 1
        coef *= (a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * y
        psi_n1 += 1.0 / (n + 1)
        psi_nm1 += 1.0 / (n + m + 1)
        psi_a += 1.0 / (a + m + n)
        psi_b += 1.0 / (b + m + n)
    raise NonConvergence(f"2F1 log connection did not converge in {max_terms} terms (x={x})")
