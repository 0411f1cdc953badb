# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of the NumPy kernels (dimensions 1-3).

Same contracts as ``_ref``: batched canonical jets and curvature
contractions, with scalar loops over points instead of einsum chains.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport log, sqrt

from toricmetrics.errors import SingularHessianError

cnp.import_array()

NAME = "cython"

cdef double PIVOT_RTOL = 1e-14


cdef inline int _chol_inv(double[3][3] h, double[3][3] hi, Py_ssize_t n) except -1 nogil:
    """In-place Cholesky inverse of the n x n block of h into hi.

    Returns 0 on success, 1 when a pivot falls below the threshold.
    """
    cdef double[3][3] L
    cdef double[3][3] X
    cdef double pivot, s, floor
    cdef Py_ssize_t i, j, k
    floor = 0.0
    for i in range(n):
        floor += h[i][i]
    floor *= PIVOT_RTOL
    for i in range(n):
        for j in range(n):
            L[i][j] = 0.0
            X[i][j] = 0.0
    for j in range(n):
        pivot = h[j][j]
        for k in range(j):
            pivot -= L[j][k] * L[j][k]
        if pivot <= floor:
            return 1
        L[j][j] = sqrt(pivot)
        for i in range(j + 1, n):
            s = h[i][j]
            for k in range(j):
                s -= L[i][k] * L[j][k]
            L[i][j] = s / L[j][j]
    for j in range(n):
        X[j][j] = 1.0 / L[j][j]
        for i in range(j + 1, n):
            s = 0.0
            for k in range(j, i):
                s += L[i][k] * X[k][j]
            X[i][j] = -s / L[i][i]
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += X[k][i] * X[k][j]
            hi[i][j] = s
    return 0


def canonical_jets(U, lam, Y):
    """See ``_ref.canonical_jets``; identical contract."""
    cdef double[:, ::1] Uv = np.ascontiguousarray(U, dtype=np.float64)
    cdef double[::1] lamv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef double[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t m = Yv.shape[0], n = Yv.shape[1], d = Uv.shape[0]
    if n > 3:
        raise ValueError("compiled kernel supports dimensions 1-3")
    g0 = np.zeros(m)
    g1 = np.zeros((m, n))
    g2 = np.zeros((m, n, n))
    g3 = np.zeros((m, n, n, n))
    g4 = np.zeros((m, n, n, n, n))
    cdef double[::1] g0v = g0
    cdef double[:, ::1] g1v = g1
    cdef double[:, :, ::1] g2v = g2
    cdef double[:, :, :, ::1] g3v = g3
    cdef double[:, :, :, :, ::1] g4v = g4
    cdef Py_ssize_t mi, k, a, b, c, e
    cdef double l, logl, inv, inv2, inv3, ua, uab, uabc
    with nogil:
        for mi in range(m):
            for k in range(d):
                l = -lamv[k]
                for a in range(n):
                    l += Yv[mi, a] * Uv[k, a]
                logl = log(l)
                inv = 1.0 / l
                inv2 = inv * inv
                inv3 = inv2 * inv
                g0v[mi] += 0.5 * l * logl
                for a in range(n):
                    ua = Uv[k, a]
                    g1v[mi, a] += 0.5 * (logl + 1.0) * ua
                    for b in range(n):
                        uab = ua * Uv[k, b]
                        g2v[mi, a, b] += 0.5 * inv * uab
                        for c in range(n):
                            uabc = uab * Uv[k, c]
                            g3v[mi, a, b, c] -= 0.5 * inv2 * uabc
                            for e in range(n):
                                g4v[mi, a, b, c, e] += inv3 * uabc * Uv[k, e]
    return g0, g1, g2, g3, g4


cdef inline void _load3(double[:, :, ::1] src, Py_ssize_t mi, double[3][3] dst,
                        Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            dst[i][j] = src[mi, i, j]


def cholesky_inverse(H):
    """See ``_ref.cholesky_inverse``; identical contract."""
    cdef double[:, :, ::1] Hv = np.ascontiguousarray(H, dtype=np.float64)
    cdef Py_ssize_t m = Hv.shape[0], n = Hv.shape[1]
    if n > 3:
        raise ValueError("compiled kernel supports dimensions 1-3")
    out = np.empty((m, n, n))
    cdef double[:, :, ::1] outv = out
    cdef double[3][3] h
    cdef double[3][3] hi
    cdef Py_ssize_t mi, i, j
    cdef int bad = 0
    with nogil:
        for mi in range(m):
            _load3(Hv, mi, h, n)
            if _chol_inv(h, hi, n):
                bad = 1
                break
            for i in range(n):
                for j in range(n):
                    outv[mi, i, j] = hi[i][j]
    if bad:
        raise SingularHessianError(
            "Hessian is not positive definite (Cholesky pivot below threshold)"
        )
    return out


cdef inline void _sandwich(double[3][3] hi, double[3][3] t, double[3][3] res,
                           Py_ssize_t n) nogil:
    """res = hi @ t @ hi for symmetric hi, t."""
    cdef double[3][3] tmp
    cdef Py_ssize_t i, j, k
    cdef double s
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += hi[i][k] * t[k][j]
            tmp[i][j] = s
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += tmp[i][k] * hi[k][j]
            res[i][j] = s


def inverse_hessian_jets(H, T3, T4):
    """See ``_ref.inverse_hessian_jets``; identical contract."""
    cdef double[:, :, ::1] Hv = np.ascontiguousarray(H, dtype=np.float64)
    cdef double[:, :, :, ::1] T3v = np.ascontiguousarray(T3, dtype=np.float64)
    cdef double[:, :, :, :, ::1] T4v = np.ascontiguousarray(T4, dtype=np.float64)
    cdef Py_ssize_t m = Hv.shape[0], n = Hv.shape[1]
    if n > 3:
        raise ValueError("compiled kernel supports dimensions 1-3")
    inv = np.empty((m, n, n))
    d_inv = np.empty((m, n, n, n))
    dd_inv = np.empty((m, n, n, n, n))
    cdef double[:, :, ::1] invv = inv
    cdef double[:, :, :, ::1] dv = d_inv
    cdef double[:, :, :, :, ::1] ddv = dd_inv
    cdef double[3][3] h, hi, tc, td, wc, wd, acd, tcd, scd
    cdef Py_ssize_t mi, i, j, k, c, d
    cdef double s
    cdef int bad = 0
    with nogil:
        for mi in range(m):
            _load3(Hv, mi, h, n)
            if _chol_inv(h, hi, n):
                bad = 1
                break
            for i in range(n):
                for j in range(n):
                    invv[mi, i, j] = hi[i][j]
            for c in range(n):
                for i in range(n):
                    for j in range(n):
                        tc[i][j] = T3v[mi, i, j, c]
                _sandwich(hi, tc, wc, n)
                for i in range(n):
                    for j in range(n):
                        dv[mi, c, i, j] = -wc[i][j]
            for c in range(n):
                for i in range(n):
                    for j in range(n):
                        tc[i][j] = T3v[mi, i, j, c]
                _sandwich(hi, tc, wc, n)
                for d in range(n):
                    for i in range(n):
                        for j in range(n):
                            td[i][j] = T3v[mi, i, j, d]
                            tcd[i][j] = T4v[mi, i, j, c, d]
                    _sandwich(hi, td, wd, n)
                    # acd = wc @ H @ wd  (= Hi Tc Hi Td Hi with one Hi shared)
                    for i in range(n):
                        for j in range(n):
                            s = 0.0
                            for k in range(n):
                                s += wc[i][k] * td[k][j]
                            scd[i][j] = s
                    for i in range(n):
                        for j in range(n):
                            s = 0.0
                            for k in range(n):
                                s += scd[i][k] * hi[k][j]
                            acd[i][j] = s
                    _sandwich(hi, tcd, scd, n)
                    for i in range(n):
                        for j in range(n):
                            ddv[mi, c, d, i, j] = acd[i][j] + acd[j][i] - scd[i][j]
    if bad:
        raise SingularHessianError(
            "Hessian is not positive definite (Cholesky pivot below threshold)"
        )
    return inv, d_inv, dd_inv


def curvature(H, T3, T4):
    """See ``_ref.curvature``; identical contract."""
    cdef double[:, :, ::1] Hv = np.ascontiguousarray(H, dtype=np.float64)
    cdef double[:, :, :, ::1] T3v = np.ascontiguousarray(T3, dtype=np.float64)
    cdef double[:, :, :, :, ::1] T4v = np.ascontiguousarray(T4, dtype=np.float64)
    cdef Py_ssize_t m = Hv.shape[0], n = Hv.shape[1]
    if n > 3:
        raise ValueError("compiled kernel supports dimensions 1-3")
    out = np.empty(m)
    cdef double[::1] outv = out
    cdef double[3][3] h, hi, tc, tcd, scd
    cdef double[3][3][3] w
    cdef Py_ssize_t mi, i, k, c, d
    cdef double acc, s1, s2, row
    cdef int bad = 0
    with nogil:
        for mi in range(m):
            _load3(Hv, mi, h, n)
            if _chol_inv(h, hi, n):
                bad = 1
                break
            for c in range(n):
                for i in range(n):
                    for k in range(n):
                        tc[i][k] = T3v[mi, i, k, c]
                _sandwich(hi, tc, scd, n)
                for i in range(n):
                    for k in range(n):
                        w[c][i][k] = scd[i][k]
            acc = 0.0
            for c in range(n):
                for d in range(n):
                    # (Hi Tc Hi Td Hi)[c,d] and its (c<->d) partner
                    s1 = 0.0
                    s2 = 0.0
                    for i in range(n):
                        row = 0.0
                        for k in range(n):
                            row += w[c][c][k] * T3v[mi, k, i, d]
                        s1 += row * hi[i][d]
                        row = 0.0
                        for k in range(n):
                            row += w[d][c][k] * T3v[mi, k, i, c]
                        s2 += row * hi[i][d]
                    for i in range(n):
                        for k in range(n):
                            tcd[i][k] = T4v[mi, i, k, c, d]
                    _sandwich(hi, tcd, scd, n)
                    acc += s1 + s2 - scd[c][d]
            outv[mi] = -0.5 * acc
    if bad:
        raise SingularHessianError(
            "Hessian is not positive definite (Cholesky pivot below threshold)"
        )
    return out


def curvature_logdet(H, T3, T4):
    """See ``_ref.curvature_logdet``; identical contract."""
    cdef double[:, :, ::1] Hv = np.ascontiguousarray(H, dtype=np.float64)
    cdef double[:, :, :, ::1] T3v = np.ascontiguousarray(T3, dtype=np.float64)
    cdef double[:, :, :, :, ::1] T4v = np.ascontiguousarray(T4, dtype=np.float64)
    cdef Py_ssize_t m = Hv.shape[0], n = Hv.shape[1]
    if n > 3:
        raise ValueError("compiled kernel supports dimensions 1-3")
    out = np.empty(m)
    cdef double[::1] outv = out
    cdef double[3][3] h, hi, tc, w
    cdef double[3][3][3] dinv
    cdef double[3] sv
    cdef Py_ssize_t mi, i, j, k, c
    cdef double s, term1, term2, ds
    cdef int bad = 0
    with nogil:
        for mi in range(m):
            _load3(Hv, mi, h, n)
            if _chol_inv(h, hi, n):
                bad = 1
                break
            for c in range(n):
                for i in range(n):
                    for j in range(n):
                        tc[i][j] = T3v[mi, i, j, c]
                _sandwich(hi, tc, w, n)
                for i in range(n):
                    for j in range(n):
                        dinv[c][i][j] = -w[i][j]
            for i in range(n):
                s = 0.0
                for j in range(n):
                    for k in range(n):
                        s += hi[j][k] * T3v[mi, k, j, i]
                sv[i] = s
            term1 = 0.0
            term2 = 0.0
            for i in range(n):
                for j in range(n):
                    term1 += dinv[j][i][j] * sv[i]
                    # ds[i][j] = tr(dinv[j] . d_i H) + tr(hi . d_i d_j H)
                    ds = 0.0
                    for k in range(n):
                        for c in range(n):
                            ds += dinv[j][k][c] * T3v[mi, c, k, i]
                            ds += hi[k][c] * T4v[mi, c, k, i, j]
                    term2 += hi[i][j] * ds
            outv[mi] = 0.5 * (term1 + term2)
    if bad:
        raise SingularHessianError(
            "Hessian is not positive definite (Cholesky pivot below threshold)"
        )
    return out
