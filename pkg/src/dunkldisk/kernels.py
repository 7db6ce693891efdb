"""Reproducing kernels on the disk and their upper-bound majorants.

Every kernel except Q is a diagonal series

    K(z, w) = sum_n weight_n phi_n(z) conj(phi_n(w))

with a polynomial weight in n, so one summation routine serves them all.
C, P0 and P also have closed forms through 2F1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import _core
from .basis import DomainError, phi_table
from .quadrature import CircleRule, DiskRule, as_lambda
from .specfun import NonConvergence, hyp2f1, log_epsilon_n

__all__ = [
    "KernelKind",
    "Strategy",
    "Adaptive",
    "KernelEval",
    "KernelResult",
    "KernelMismatch",
    "SERIES_EDGE",
    "TERM_BUDGET",
    "kernel_weights",
    "truncation_terms",
    "evaluate",
    "cauchy_kernel",
    "p0_kernel",
    "poisson_kernel",
    "bergman_kernel",
    "weighted_bergman_kernel",
    "tilde_w2_kernel",
    "q1_kernel",
    "conjugate_poisson_kernel",
    "kernel_bound_majorant",
    "kernel_on_nodes",
]

SERIES_EDGE = 1.0 - 1e-6
TERM_BUDGET = 200_000
DUAL_LINE_RTOL = 1e-9


class KernelKind(str, enum.Enum):
    CAUCHY = "cauchy"
    P0 = "p0"
    POISSON = "poisson"
    Q1 = "q1"
    CONJUGATE_POISSON = "conjugate_poisson"
    BERGMAN = "bergman"
    BERGMAN_W1 = "bergman_w1"
    BERGMAN_W2 = "bergman_w2"
    TILDE = "tilde"
    TILDE_W1 = "tilde_w1"
    TILDE_W2 = "tilde_w2"


class Strategy(str, enum.Enum):
    SERIES = "series"
    CLOSED_FORM = "closed_form"


CLOSED_FORM_KINDS = frozenset({KernelKind.CAUCHY, KernelKind.P0, KernelKind.POISSON})
# kinds that are a plain diagonal series sum_n weight_n phi_n(z) conj(phi_n(w))
DIAGONAL_KINDS = frozenset({
    KernelKind.CAUCHY, KernelKind.BERGMAN, KernelKind.BERGMAN_W1, KernelKind.BERGMAN_W2,
    KernelKind.TILDE, KernelKind.TILDE_W1,
})


class KernelMismatch(ArithmeticError):
    """Two evaluation routes for the same kernel value disagree."""


@dataclass(frozen=True)
class Adaptive:
    """Truncate where the certified tail bound drops below ``tolerance``."""

    tolerance: float = 1e-12


@dataclass(frozen=True)
class KernelEval:
    """Which kernel to evaluate and how.

    ``truncation`` is either a fixed top index N (terms 0..N are summed) or
    an :class:`Adaptive` tolerance.
    """

    kind: KernelKind
    lam: float
    strategy: Strategy = Strategy.SERIES
    truncation: int | Adaptive = field(default_factory=Adaptive)

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "lam", float(as_lambda(self.lam)))
        if self.strategy is Strategy.CLOSED_FORM and self.kind not in CLOSED_FORM_KINDS:
            raise ValueError(f"no closed form is available for the {self.kind.value} kernel")
        if isinstance(self.truncation, (int, np.integer)):
            if self.truncation < 0:
                raise ValueError("truncation index must be nonnegative")
        elif not isinstance(self.truncation, Adaptive):
            raise TypeError("truncation must be an int or Adaptive")


@dataclass
class KernelResult:
    value: np.ndarray | complex
    terms_used: np.ndarray | int
    strategy: Strategy


# -- weights and truncation ---------------------------------------------------

def kernel_weights(kind, lam: float, nmax: int) -> np.ndarray:
    """Series weights weight_0..weight_nmax for a diagonal kernel."""
    kind = KernelKind(kind)
    n = np.arange(nmax + 1, dtype=float)
    a = n + lam
    if kind is KernelKind.CAUCHY:
        return np.ones_like(n)
    if kind is KernelKind.BERGMAN:
        return (a + 1) / (lam + 1)
    if kind is KernelKind.BERGMAN_W1:
        return (a + 2) * (a + 1) / (lam + 1)
    if kind in (KernelKind.BERGMAN_W2, KernelKind.TILDE_W2):
        return (a + 1) * (a + 2) * (a + 3) / (2 * lam + 2)
    if kind is KernelKind.TILDE:
        return (a + 2) / (lam + 1)
    if kind is KernelKind.TILDE_W1:
        return (a + 3) * (a + 2) / (2 * lam + 2)
    if kind is KernelKind.Q1:
        out = np.zeros_like(n)
        if nmax >= 1 and lam > 0:
            out[1:] = 2 * lam / np.sqrt(n[1:] * (n[1:] + 2 * lam))
        return out
    raise ValueError(f"{kind.value} is not a diagonal series kernel")


def _majorant_log_weights(kind: KernelKind, lam: float, n: np.ndarray) -> np.ndarray:
    """log of the n-th term bound divided by |zw|^n."""
    if kind is KernelKind.Q1:
        # |2 lam / sqrt(n(n+2lam)) phi_n(z) w phi_{n-1}(w)| <= 2 lam / (n + 2 lam) eps_n^-2 |zw|^n / |w|
        base = np.log(2 * lam / np.maximum(n + 2 * lam, 1e-300)) if lam > 0 else np.full(n.shape, -np.inf)
    else:
        base = np.log(kernel_weights(kind, lam, int(n[-1]))[n.astype(int)])
    return base - 2 * log_epsilon_n(n, lam)


def truncation_terms(kind, lam: float, x, tol: float = 1e-12, budget: int = TERM_BUDGET) -> np.ndarray:
    """Smallest N with a certified tail bound sum_{n>N} |term_n| < tol.

    ``x`` holds |z w|.  The majorant t_n = weight_n eps_n^-2 x^n has a ratio
    t_{n+1}/t_n that decreases in n, so once that ratio q is below one the
    tail after N is at most t_{N+1} / (1 - q_{N+1}).
    """
    kind = KernelKind(kind)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(x.shape, dtype=np.int64)
    pending = np.flatnonzero(x > 0)
    if kind is KernelKind.Q1 and lam == 0:
        return out
    block = 512
    start = 0
    logx = np.log(np.where(x > 0, x, 1.0))
    while pending.size:
        if start >= budget:
            raise NonConvergence(f"kernel series needs more than {budget} terms at |zw| = {x[pending].max():.8g}")
        n = np.arange(start, start + block + 1, dtype=float)
        lw = _majorant_log_weights(kind, lam, np.maximum(n, 1.0) if kind is KernelKind.Q1 else n)
        logt = lw[None, :] + n[None, :] * logx[pending, None]
        # tail after N = n[k] - 1 is bounded by t_{n[k]} / (1 - q_{n[k]})
        logq = logt[:, 1:] - logt[:, :-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = logt[:, :-1] - np.log1p(-np.exp(np.minimum(logq, 0.0)))
        ok = (logq < 0) & (bound < math.log(tol))
        hit = ok.any(axis=1)
        first = ok.argmax(axis=1)
        idx = pending[hit]
        out[idx] = np.maximum(n[first[hit]] - 1, 0).astype(np.int64)
        pending = pending[~hit]
        start += block
    if kind is KernelKind.Q1:
        out = np.maximum(out, 1)
    return out


# -- core evaluation ----------------------------------------------------------

def _as_pairs(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zb, wb = np.broadcast_arrays(z, w)
    return zb.ravel(), wb.ravel(), zb.shape


def _check_series_domain(z, w):
    x = np.abs(z * w)
    if np.any(x > SERIES_EDGE):
        raise DomainError(f"series kernels need |zw| <= 1 - 1e-6; got {x.max():.10g}")
    return x


def _nterms(ev: KernelEval, kind: KernelKind, x):
    if isinstance(ev.truncation, Adaptive):
        return truncation_terms(kind, ev.lam, x, ev.truncation.tolerance)
    return np.full(x.shape, int(ev.truncation), dtype=np.int64)


def _diag_series(kind: KernelKind, ev: KernelEval, z, w):
    x = _check_series_domain(z, w)
    nt = _nterms(ev, kind, x)
    weights = kernel_weights(kind, ev.lam, int(nt.max()) if nt.size else 0)
    return _core.pair_sum(z, w, ev.lam, weights, nt), nt


def _q1_series(ev: KernelEval, z, w):
    x = _check_series_domain(z, w)
    if ev.lam == 0.0:
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape, dtype=np.int64)
    nt = _nterms(ev, KernelKind.Q1, x)
    weights = kernel_weights(KernelKind.Q1, ev.lam, int(nt.max()) if nt.size else 1)
    # conj(phi_{n-1}(conj w)) = phi_{n-1}(w), which removes the conjugate
    return w * _core.pair_sum(z, w.conj(), ev.lam, weights, nt, 1), nt


def _p0_closed(lam: float, z, w, check: bool = True):
    out = np.empty(z.shape, dtype=float)
    if lam == 0.0:
        out[:] = 1.0
        return out
    prod = z.imag * w.imag
    d1 = np.abs(1 - z * w) ** 2
    d2 = np.abs(1 - z * w.conj()) ** 2
    a1 = 4 * prod / d1
    a2 = -4 * prod / d2
    for i in range(z.size):
        if prod[i] == 0.0:
            out[i] = d1[i] ** (-lam)
            continue
        v1 = v2 = None
        if check or abs(a1[i]) <= abs(a2[i]):
            v1 = d1[i] ** (-lam) * hyp2f1(lam, lam, 2 * lam + 1, a1[i])
        if check or abs(a2[i]) < abs(a1[i]):
            v2 = d2[i] ** (-lam) * hyp2f1(lam, lam + 1, 2 * lam + 1, a2[i])
        if check and abs(v1 - v2) > DUAL_LINE_RTOL * max(abs(v1), abs(v2)):
            raise KernelMismatch(f"the two 2F1 lines for P0 differ: {v1!r} vs {v2!r}")
        out[i] = v1 if abs(a1[i]) <= abs(a2[i]) else v2
    return out


def evaluate(ev: KernelEval, z, w, *, full_output: bool = False, check: bool = True):
    """Evaluate the kernel described by ``ev`` at the broadcast pairs (z, w).

    ``check`` evaluates both 2F1 lines of P0 on closed-form paths and raises
    :class:`KernelMismatch` if they disagree.
    """
    zf, wf, shape = _as_pairs(z, w)
    kind, lam = ev.kind, ev.lam
    if ev.strategy is Strategy.CLOSED_FORM:
        if np.any(np.abs(zf * wf) >= 1):
            raise DomainError("closed forms need |zw| < 1")
        p0 = _p0_closed(lam, zf, wf, check)
        if kind is KernelKind.P0:
            val = p0.astype(complex)
        elif kind is KernelKind.CAUCHY:
            val = p0 / (1 - zf * wf.conj())
        else:
            val = ((1 - np.abs(zf) ** 2 * np.abs(wf) ** 2) / np.abs(1 - zf * wf.conj()) ** 2 * p0).astype(complex)
        nt = np.zeros(zf.shape, dtype=np.int64)
    # nt counts summed terms: top index + 1, or top index for Q1 (which starts at n = 1)
    elif kind in DIAGONAL_KINDS:
        val, nt = _diag_series(kind, ev, zf, wf)
        nt = nt + 1
    elif kind is KernelKind.P0:
        c, nt = _diag_series(KernelKind.CAUCHY, ev, zf, wf)
        val, nt = (1 - zf * wf.conj()) * c, nt + 1
    elif kind is KernelKind.POISSON:
        c1, n1 = _diag_series(KernelKind.CAUCHY, ev, zf, wf)
        c2, _ = _diag_series(KernelKind.CAUCHY, ev, wf, zf)
        val, nt = c1 + zf.conj() * wf * c2, n1 + 1
    elif kind is KernelKind.TILDE_W2:
        k2, nt = _diag_series(KernelKind.BERGMAN_W2, ev, zf, wf)
        val, nt = k2 * (1 - np.abs(zf) ** 2) * (1 - np.abs(wf) ** 2), nt + 1
    elif kind is KernelKind.Q1:
        val, nt = _q1_series(ev, zf, wf)
    elif kind is KernelKind.CONJUGATE_POISSON:
        c, nt = _diag_series(KernelKind.CAUCHY, ev, zf, wf)
        c2, _ = _diag_series(KernelKind.CAUCHY, ev, wf, zf)
        p = c + zf.conj() * wf * c2
        q1, nq = _q1_series(ev, zf, wf)
        val = -1j * (2 * c - p - 1 - q1)
        nt = np.maximum(nt + 1, nq)
    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(kind)
    val = np.asarray(val, dtype=complex).reshape(shape)
    nt = nt.reshape(shape)
    if not shape:
        val, nt = complex(val), int(nt)
    if full_output:
        return KernelResult(val, nt, ev.strategy)
    return val


# -- named entry points -------------------------------------------------------

def _named(kind, lam, z, w, strategy, truncation, full_output, check=True):
    ev = KernelEval(kind, lam, strategy, Adaptive() if truncation is None else truncation)
    return evaluate(ev, z, w, full_output=full_output, check=check)


def cauchy_kernel(lam, z, w, strategy="series", truncation=None, full_output=False):
    """C(z, w) = sum_n phi_n(z) conj(phi_n(w)) = P0(z, w) / (1 - z conj(w))."""
    return _named(KernelKind.CAUCHY, lam, z, w, strategy, truncation, full_output)


def p0_kernel(lam, z, w, check: bool = True):
    """P0(z, w) from 2F1, evaluating both hypergeometric lines when ``check``."""
    zf, wf, shape = _as_pairs(z, w)
    if np.any(np.abs(zf * wf) >= 1):
        raise DomainError("P0 needs |zw| < 1")
    out = _p0_closed(float(as_lambda(lam)), zf, wf, check).reshape(shape)
    return out if shape else float(out)


def poisson_kernel(lam, z, w, strategy="series", truncation=None, full_output=False):
    """P(z, w) = C(z, w) + conj(z) w C(w, z); real and nonnegative for |w| = 1."""
    return _named(KernelKind.POISSON, lam, z, w, strategy, truncation, full_output)


def bergman_kernel(lam, z, w, truncation=None, full_output=False):
    """K_lam(z, w) = sum_n (n+lam+1)/(lam+1) phi_n(z) conj(phi_n(w))."""
    return _named(KernelKind.BERGMAN, lam, z, w, "series", truncation, full_output)


def weighted_bergman_kernel(kind, lam, z, w, truncation=None, full_output=False):
    kind = KernelKind(kind)
    if kind not in (KernelKind.BERGMAN_W1, KernelKind.BERGMAN_W2, KernelKind.TILDE, KernelKind.TILDE_W1):
        raise ValueError(f"{kind.value} is not a weighted Bergman kernel")
    return _named(kind, lam, z, w, "series", truncation, full_output)


def tilde_w2_kernel(lam, z, w, truncation=None, full_output=False):
    """K_{lam,2}(z, w) (1 - |z|^2)(1 - |w|^2)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
        raise DomainError("the weighted kernel needs |z| < 1 and |w| < 1")
    return _named(KernelKind.TILDE_W2, lam, z, w, "series", truncation, full_output)


def q1_kernel(lam, z, w, truncation=None, full_output=False):
    """Q1(z, w) = sum_{n>=1} 2 lam / sqrt(n(n+2 lam)) phi_n(z) w phi_{n-1}(w)."""
    return _named(KernelKind.Q1, lam, z, w, "series", truncation, full_output)


def conjugate_poisson_kernel(lam, z, w, truncation=None, full_output=False):
    """Q(z, w) = -i [2 C(z, w) - P(z, w) - 1 - Q1(z, w)]."""
    return _named(KernelKind.CONJUGATE_POISSON, lam, z, w, "series", truncation, full_output)


# -- majorants ----------------------------------------------------------------

def kernel_bound_majorant(kind, lam, z, w):
    """Right-hand side of the pointwise kernel estimate, without its constant.

    Cauchy: |1-zw~|^-1 S^-2lam log(|1-zw~|^2/|1-zw|^2 + 2), with
    w~ = conj(w) and S = |1-zw| + |1-zw~|.  Bergman and the weighted kernels
    of order j: S^-2lam / |1-zw~| (|1-zw~|^-(j+1) + |1-zw|^-(j+1)), j = 0
    for K_lam and j = 1 for the tilde kernel of order one.  Poisson, for
    z = r e^{i theta} and w = e^{i phi}:
    (1-r) (1-r+s)^-2 (1-r+|sin theta|+s)^-2lam log(s/(1-r) + 2) with
    s = |sin((theta - phi)/2)|.
    """
    kind = KernelKind(kind)
    lam = float(as_lambda(lam))
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if kind is KernelKind.POISSON:
        r = np.abs(z)
        theta = np.angle(z)
        s = np.abs(np.sin((theta - np.angle(w)) / 2))
        out = ((1 - r) * (1 - r + s) ** -2 * (1 - r + np.abs(np.sin(theta)) + s) ** (-2 * lam)
               * np.log(s / (1 - r) + 2))
        return out if out.ndim else float(out)
    a = np.abs(1 - z * w.conj())
    b = np.abs(1 - z * w)
    s = (a + b) ** (-2 * lam)
    if kind is KernelKind.CAUCHY:
        out = s / a * np.log(a**2 / b**2 + 2)
    else:
        order = {KernelKind.BERGMAN: 0, KernelKind.BERGMAN_W1: 1, KernelKind.BERGMAN_W2: 2,
                 KernelKind.TILDE_W1: 1}.get(kind)
        if order is None:
            raise ValueError(f"no majorant is stated for the {kind.value} kernel")
        out = s / a * (a ** -(order + 1) + b ** -(order + 1))
    return out if out.ndim else float(out)


# -- kernels against whole quadrature grids -----------------------------------

def kernel_on_nodes(kind, lam, z: complex, rule, tol: float = 1e-12, nmax: int | None = None):
    """w -> K(z, w) at every node of a circle or disk rule, for one z.

    Homogeneity phi_n(s e^{i phi}) = s^n phi_n(e^{i phi}) turns the sum into
    one matrix product against a table of phi_n on the rule's angles.
    Returns ``(values, n_terms)``; values have the rule's node shape.
    """
    kind = KernelKind(kind)
    lam = float(as_lambda(lam))
    z = complex(z)
    if isinstance(rule, DiskRule):
        radii, theta = rule.radii, rule.circle.theta
    elif isinstance(rule, CircleRule):
        radii, theta = np.ones(1), rule.theta
    else:
        raise TypeError("rule must be a CircleRule or DiskRule")
    smax = float(radii.max())
    x = abs(z) * smax
    if x > SERIES_EDGE:
        raise DomainError(f"series kernels need |zw| <= 1 - 1e-6; got {x:.10g}")
    base = KernelKind.BERGMAN_W2 if kind is KernelKind.TILDE_W2 else kind
    if base in DIAGONAL_KINDS or base is KernelKind.Q1:
        N = int(truncation_terms(base, lam, x, tol)[0]) if nmax is None else int(nmax)
        tab = phi_table(N, lam, np.exp(1j * theta))  # (n_theta, N+1)
        pz = phi_table(N, lam, z)
        coef = kernel_weights(base, lam, N) * pz
        n = np.arange(N + 1)
        if base is KernelKind.Q1:
            # phi_{n-1}(w) = s^(n-1) phi_{n-1}(e^{i phi}), times w = s e^{i phi}
            shifted = np.zeros_like(tab)
            shifted[:, 1:] = tab[:, :-1]
            vals = (radii[:, None] ** n[None, :] * coef[None, :]) @ shifted.T
            vals = vals * np.exp(1j * theta)[None, :]
        else:
            vals = (radii[:, None] ** n[None, :] * coef[None, :]) @ tab.conj().T
        if kind is KernelKind.TILDE_W2:
            vals = vals * (1 - abs(z) ** 2) * (1 - radii[:, None] ** 2)
    elif kind in (KernelKind.POISSON, KernelKind.CONJUGATE_POISSON, KernelKind.P0):
        c, N = kernel_on_nodes(KernelKind.CAUCHY, lam, z, rule, tol, nmax)
        w = radii[:, None] * np.exp(1j * theta)[None, :]
        # C(w, z) = sum phi_n(w) conj(phi_n(z)) is conj of C(z, w) with roles swapped
        Nc = N
        tab = phi_table(Nc, lam, np.exp(1j * theta))
        pz = phi_table(Nc, lam, z)
        n = np.arange(Nc + 1)
        cwz = (radii[:, None] ** n[None, :] * pz.conj()[None, :]) @ tab.T
        if kind is KernelKind.P0:
            vals = (1 - z * w.conj()) * c.reshape(w.shape)
        else:
            p = c.reshape(w.shape) + np.conj(z) * w * cwz
            if kind is KernelKind.POISSON:
                vals = p
            else:
                q1, _ = kernel_on_nodes(KernelKind.Q1, lam, z, rule, tol, nmax)
                vals = -1j * (2 * c.reshape(w.shape) - p - 1 - q1.reshape(w.shape))
    else:  # pragma: no cover
        raise ValueError(kind)
    if isinstance(rule, CircleRule):
        vals = vals[0]
    return vals, N
