"""Pure NumPy implementation of the hot kernels.

Serves both as the fallback when the compiled extension is unavailable and as
the reference the extension is tested against.  All functions are batched over
the leading axis.
"""

import numpy as np

from ..errors import SingularHessianError

NAME = "numpy"

# Cholesky pivot threshold relative to trace(H)
PIVOT_RTOL = 1e-14


def canonical_jets(U, lam, Y):
    """Derivatives of (1/2) sum_i l_i log l_i at each point of Y.

    U is the (d, n) float matrix of inward normals, lam the (d,) offsets and
    Y an (m, n) batch of strictly interior points.  Returns the value, the
    gradient and the symmetric derivative tensors of orders 2-4 with shapes
    (m,), (m,n), (m,n,n), (m,n,n,n), (m,n,n,n,n).
    """
    U = np.asarray(U, dtype=float)
    lam = np.asarray(lam, dtype=float)
    Y = np.asarray(Y, dtype=float)
    L = Y @ U.T - lam
    logL = np.log(L)
    inv = 1.0 / L
    g0 = 0.5 * np.einsum("md,md->m", L, logL)
    g1 = 0.5 * (logL + 1.0) @ U
    g2 = 0.5 * np.einsum("md,da,db->mab", inv, U, U)
    g3 = -0.5 * np.einsum("md,da,db,dc->mabc", inv * inv, U, U, U)
    g4 = np.einsum("md,da,db,dc,de->mabce", inv * inv * inv, U, U, U, U)
    return g0, g1, g2, g3, g4


def cholesky_inverse(H):
    """Inverse of a batch of symmetric positive definite matrices.

    Plain Cholesky with a pivot guard: a pivot at or below
    ``PIVOT_RTOL * trace(H)`` raises :class:`SingularHessianError`.
    """
    H = np.asarray(H, dtype=float)
    m, n, _ = H.shape
    floor = PIVOT_RTOL * np.trace(H, axis1=1, axis2=2)
    L = np.zeros_like(H)
    for j in range(n):
        pivot = H[:, j, j] - np.einsum("mk,mk->m", L[:, j, :j], L[:, j, :j])
        if np.any(pivot <= floor):
            raise SingularHessianError(
                "Hessian is not positive definite (Cholesky pivot below threshold)"
            )
        L[:, j, j] = np.sqrt(pivot)
        for i in range(j + 1, n):
            s = H[:, i, j] - np.einsum("mk,mk->m", L[:, i, :j], L[:, j, :j])
            L[:, i, j] = s / L[:, j, j]
    # X = L^{-1} by forward substitution, then H^{-1} = X^T X
    X = np.zeros_like(H)
    for j in range(n):
        X[:, j, j] = 1.0 / L[:, j, j]
        for i in range(j + 1, n):
            s = np.einsum("mk,mk->m", L[:, i, j:i], X[:, j:i, j])
            X[:, i, j] = -s / L[:, i, i]
    return np.einsum("mki,mkj->mij", X, X)


def inverse_hessian_jets(H, T3, T4):
    """Inverse Hessian with its first and second derivative tensors.

    Returns ``(inv, d_inv, dd_inv)`` where ``d_inv[m,c,i,j]`` is the c-th
    partial of inv[i,j] and ``dd_inv[m,c,d,i,j]`` the (c,d) second partial,
    from the matrix identities

        d(H^-1)   = -H^-1 (dH) H^-1
        dd(H^-1)  =  H^-1 (dH) H^-1 (dH) H^-1 + (swap) - H^-1 (ddH) H^-1
    """
    Hi = cholesky_inverse(H)
    W = np.einsum("mik,mklc,mlj->mcij", Hi, T3, Hi)
    A = np.einsum("mcik,mkld,mlj->mcdij", W, T3, Hi)
    dd_inv = A + A.transpose(0, 2, 1, 3, 4) - np.einsum("mik,mklcd,mlj->mcdij", Hi, T4, Hi)
    return Hi, -W, dd_inv


def curvature(H, T3, T4):
    """Scalar curvature batch: R = -1/2 sum_{i,j} dd_inv[i,j,i,j]."""
    _, _, dd_inv = inverse_hessian_jets(H, T3, T4)
    return -0.5 * np.einsum("mijij->m", dd_inv)


def curvature_logdet(H, T3, T4):
    """Scalar curvature via 2R = sum_j d_j(G^{ij} d_i log det G).

    Uses Jacobi's formula d_i log det G = trace(G^-1 d_i G) and expands the
    outer derivative analytically; an independent algebraic route from
    :func:`curvature`, sharing only the jet inputs.
    """
    Hi = cholesky_inverse(H)
    d_inv = -np.einsum("mik,mklc,mlj->mcij", Hi, T3, Hi)
    s = np.einsum("mab,mabi->mi", Hi, T3)
    # ds[m,i,j] = d_j s_i = tr((d_j Hi) d_i H) + tr(Hi d_i d_j H)
    ds = np.einsum("mjab,mbai->mij", d_inv, T3) + np.einsum("mab,mbaij->mij", Hi, T4)
    term1 = np.einsum("mjij,mi->m", d_inv, s)
    term2 = np.einsum("mij,mij->m", Hi, ds)
    return 0.5 * (term1 + term2)
