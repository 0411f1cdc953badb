"""Scalar curvature of a toric Kahler metric and the extremality test.

The curvature is computed on the polytope side from the symplectic potential:
R = -1/2 sum_{i,j} d^2 G^{ij} / dy_i dy_j with (G^{ij}) the inverse Hessian.
An algebraically independent evaluation through the log-determinant identity
2R = sum_j d_j (G^{ij} d_i log det G) is provided as a cross-check.  The
metric is extremal iff R is an affine function of y, which is decided by a
least-squares affine fit over an interior grid.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .polytope import interior_grid
from .potential import _require_interior, jets_batch

GRID_MARGIN = 1e-3
DEFAULT_FIT_DENSITY = 8
_CHUNK = 16384


@dataclass(frozen=True, eq=False)
class InverseHessianJets:
    """Inverse Hessian G^{ij} with derivative tensors.

    ``d_inv[c, i, j]`` is the c-th partial of G^{ij} and
    ``dd_inv[c, d, i, j]`` the (c, d) second partial; both are symmetric in
    (i, j), and dd_inv also in (c, d).
    """

    inv: np.ndarray
    d_inv: np.ndarray
    dd_inv: np.ndarray


@dataclass(frozen=True)
class AffineFit:
    """Least-squares affine model R ~ <gradient, y> + constant."""

    gradient: np.ndarray
    constant: float
    max_residual: float
    is_extremal: bool


def inverse_hessian_jets(table):
    """Inverse-Hessian jets from a :class:`~toricmetrics.potential.JetTable`."""
    inv, d_inv, dd_inv = _kernels.inverse_hessian_jets(
        table.order2[None], table.order3[None], table.order4[None]
    )
    return InverseHessianJets(inv=inv[0], d_inv=d_inv[0], dd_inv=dd_inv[0])


def scalar_curvature_batch(pot, Y):
    """Scalar curvature at an (m, n) batch of interior points."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    out = np.empty(Y.shape[0])
    for start in range(0, Y.shape[0], _CHUNK):
        block = Y[start : start + _CHUNK]
        _, _, g2, g3, g4, _ = jets_batch(pot, block)
        out[start : start + block.shape[0]] = _kernels.curvature(g2, g3, g4)
    return out


def scalar_curvature(pot, y):
    """R(y) = -1/2 sum_{i,j} d^2 G^{ij} / dy_i dy_j at one interior point."""
    y = _require_interior(pot.polytope, y)
    return float(scalar_curvature_batch(pot, y[None, :])[0])


def scalar_curvature_logdet(pot, y):
    """R(y) through the log-determinant identity (independent algebra)."""
    y = _require_interior(pot.polytope, y)
    _, _, g2, g3, g4, _ = jets_batch(pot, y[None, :])
    return float(_kernels.curvature_logdet(g2, g3, g4)[0])


def curvature_grid(pot, density):
    """R sampled on the uniform interior grid (margin 1e-3), row-major order.

    Returns a list of (point, R) pairs.
    """
    if density < 2:
        raise ValueError("grid density must be at least 2")
    pts = interior_grid(pot.polytope, density, margin=GRID_MARGIN)
    values = scalar_curvature_batch(pot, pts)
    return [(pts[k], float(values[k])) for k in range(pts.shape[0])]


def default_threshold(max_abs_r):
    """Default extremality threshold 1e-5 * (1 + max |R|)."""
    return 1e-5 * (1.0 + max_abs_r)


def affine_fit(samples, threshold=None):
    """Fit R ~ <g, y> + c by least squares and decide extremality.

    ``samples`` is a sequence of (point, value) pairs, as produced by
    :func:`curvature_grid`; at least n+2 samples in general position are
    required.  The verdict is ``max_residual <= threshold`` with the default
    threshold 1e-5 * (1 + max |R|).
    """
    pts = np.array([np.asarray(p, dtype=float) for p, _ in samples])
    vals = np.array([float(v) for _, v in samples])
    if pts.ndim != 2:
        raise ValueError("samples must share a common dimension")
    m, n = pts.shape
    if m < n + 2:
        raise ValueError(f"need at least {n + 2} samples, got {m}")
    design = np.hstack([pts, np.ones((m, 1))])
    if np.linalg.matrix_rank(design) < n + 1:
        raise ValueError("rank-deficient sample set (points are affinely degenerate)")
    coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
    residuals = vals - design @ coeffs
    max_residual = float(np.abs(residuals).max())
    if threshold is None:
        threshold = default_threshold(float(np.abs(vals).max()))
    return AffineFit(
        gradient=coeffs[:n],
        constant=float(coeffs[n]),
        max_residual=max_residual,
        is_extremal=bool(max_residual <= threshold),
    )
