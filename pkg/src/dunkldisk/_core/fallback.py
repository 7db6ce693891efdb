"""Pure numpy versions of the compiled kernels in ``_recur.pyx``.

Both evaluate phi_n by the normalised three-term recurrence

    phi_{n+1} = [((n+lam+1) z + (n+lam) conj(z)) phi_n
                 - sqrt(n (n+2 lam)) |z|^2 phi_{n-1}] / sqrt((n+1)(n+1+2 lam)),

which follows from the generating function
sum_n phi_n / eps_n t^n = (1 - conj(z) t)^(-lam) (1 - z t)^(-lam-1).
"""
from __future__ import annotations

import numpy as np


def phi_table(z, lam: float, nmax: int) -> np.ndarray:
    z = np.ascontiguousarray(z, dtype=complex).ravel()
    out = np.empty((z.size, nmax + 1), dtype=complex)
    out[:, 0] = 1.0
    if nmax == 0:
        return out
    zb = z.conj()
    a2 = (z * zb).real
    out[:, 1] = ((lam + 1) * z + lam * zb) / np.sqrt(1 + 2 * lam)
    for n in range(1, nmax):
        out[:, n + 1] = (((n + lam + 1) * z + (n + lam) * zb) * out[:, n]
                         - np.sqrt(n * (n + 2 * lam)) * a2 * out[:, n - 1]) / np.sqrt((n + 1) * (n + 1 + 2 * lam))
    return out


def pair_sum(z, w, lam: float, weights, nterms, shift: int = 0) -> np.ndarray:
    """sum_{n=shift}^{nterms[i]} weights[n] phi_n(z_i) conj(phi_{n-shift}(w_i))."""
    z = np.ascontiguousarray(z, dtype=complex).ravel()
    w = np.ascontiguousarray(w, dtype=complex).ravel()
    nterms = np.asarray(nterms, dtype=np.int64).ravel()
    weights = np.asarray(weights, dtype=float)
    total = np.zeros(z.size, dtype=complex)
    if z.size == 0:
        return total
    top = int(nterms.max())
    zb, wb = z.conj(), w.conj()
    za2, wa2 = (z * zb).real, (w * wb).real
    pz_prev = np.zeros_like(z)
    pz = np.ones_like(z)
    pw_prev = np.zeros_like(w)
    pw = np.ones_like(w)
    # lag holds phi_{n-shift}(w) while pw runs ahead
    lag = [pw.copy()]
    for n in range(top + 1):
        if n >= shift:
            live = nterms >= n
            total += np.where(live, weights[n] * pz * lag[0].conj(), 0.0)
            if shift:
                lag.pop(0)
        if n == top:
            break
        norm = 1.0 / np.sqrt((n + 1) * (n + 1 + 2 * lam))
        back = np.sqrt(n * (n + 2 * lam))
        pz_prev, pz = pz, (((n + lam + 1) * z + (n + lam) * zb) * pz - back * za2 * pz_prev) * norm
        pw_prev, pw = pw, (((n + lam + 1) * w + (n + lam) * wb) * pw - back * wa2 * pw_prev) * norm
        if shift:
            lag.append(pw.copy())
        else:
            lag[0] = pw
    return total
