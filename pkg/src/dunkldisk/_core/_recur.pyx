# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled phi_n recurrence kernels; see fallback.py for the formulas."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def phi_table(z, double lam, Py_ssize_t nmax):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef Py_ssize_t m = zv.shape[0]
    out_arr = np.empty((m, nmax + 1), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, n
    cdef double complex zi, zbi, cur, prev, nxt
    cdef double a2
    for i in range(m):
        zi = zv[i]
        zbi = zi.conjugate()
        a2 = zi.real * zi.real + zi.imag * zi.imag
        out[i, 0] = 1.0
        if nmax == 0:
            continue
        prev = 1.0
        cur = ((lam + 1) * zi + lam * zbi) / sqrt(1 + 2 * lam)
        out[i, 1] = cur
        for n in range(1, nmax):
            nxt = (((n + lam + 1) * zi + (n + lam) * zbi) * cur
                   - sqrt(n * (n + 2 * lam)) * a2 * prev) / sqrt((n + 1) * (n + 1 + 2 * lam))
            prev = cur
            cur = nxt
            out[i, n + 1] = cur
    return out_arr


def pair_sum(z, w, double lam, weights, nterms, int shift=0):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef double complex[::1] wv = np.ascontiguousarray(w, dtype=np.complex128).ravel()
    cdef double[::1] wt = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long long[::1] nt = np.ascontiguousarray(nterms, dtype=np.int64).ravel()
    cdef Py_ssize_t m = zv.shape[0]
    total_arr = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] total = total_arr
    cdef Py_ssize_t i, n, top
    cdef double complex zi, zbi, wi, wbi, pz, pz0, pw, pw0, lagw, acc, tmp
    cdef double za2, wa2, norm, back
    if shift != 0 and shift != 1:
        raise ValueError("shift must be 0 or 1")
    for i in range(m):
        zi = zv[i]
        zbi = zi.conjugate()
        wi = wv[i]
        wbi = wi.conjugate()
        za2 = zi.real * zi.real + zi.imag * zi.imag
        wa2 = wi.real * wi.real + wi.imag * wi.imag
        top = nt[i]
        pz0 = 0.0
        pz = 1.0
        pw0 = 0.0
        pw = 1.0
        lagw = 1.0
        acc = 0.0
        for n in range(top + 1):
            if n >= shift:
                acc = acc + wt[n] * pz * lagw.conjugate()
            if n == top:
                break
            norm = 1.0 / sqrt((n + 1) * (n + 1 + 2 * lam))
            back = sqrt(n * (n + 2 * lam))
            tmp = (((n + lam + 1) * zi + (n + lam) * zbi) * pz - back * za2 * pz0) * norm
            pz0 = pz
            pz = tmp
            tmp = (((n + lam + 1) * wi + (n + lam) * wbi) * pw - back * wa2 * pw0) * norm
            pw0 = pw
            pw = tmp
            # with shift 1 the w-factor lags one degree behind z
            lagw = pw0 if shift else pw
        total[i] = acc
    return total_arr
