"""Quadrature over polytopes: fan triangulation plus Gauss-type simplex rules.

The simplex rules are built from collapsed (Duffy-type) tensor products of
Gauss-Legendre and Gauss-Jacobi lines, which keeps every node strictly inside
the simplex and gives exact integration of polynomials up to the requested
degree.  Adaptive integration refines the whole triangulation uniformly and
stops when successive estimates agree to the requested tolerance.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ConvergenceError

DEFAULT_DEGREE = 7
DEFAULT_MAX_LEVELS = 8
SUPPORTED_DIMS = (1, 2, 3)


@dataclass(frozen=True, eq=False)
class SimplexRule:
    """Interior quadrature rule on the reference simplex.

    ``nodes`` holds barycentric coordinates of shape (q, n+1); ``weights``
    sum to one, so the rule integrates f over a physical simplex S as
    ``vol(S) * sum(w_k * f(x_k))``.
    """

    degree: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def dim(self):
        return self.nodes.shape[1] - 1


def _gauss01(npts):
    """Gauss-Legendre nodes/weights on [0, 1]."""
    x, w = roots_legendre(npts)
    return (x + 1.0) / 2.0, w / 2.0


def _jacobi01(npts, alpha):
    """Gauss-Jacobi nodes/weights on [0, 1] for the weight (1-x)^alpha."""
    x, w = roots_jacobi(npts, alpha, 0.0)
    return (x + 1.0) / 2.0, w / 2.0 ** (alpha + 1)


@lru_cache(maxsize=None)
def simplex_rule(dim, degree=DEFAULT_DEGREE):
    """Build an interior simplex rule exact for total degree <= ``degree``."""
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {dim}; quadrature covers {SUPPORTED_DIMS}")
    npts = (degree + 2) // 2
    if dim == 1:
        xi, wi = _gauss01(npts)
        x = xi[:, None]
        w = wi.copy()
    elif dim == 2:
        # x1 = a, x2 = b(1 - a); Jacobian (1 - a)
        a, wa = _jacobi01(npts, 1.0)
        b, wb = _gauss01(npts)
        A, B = np.meshgrid(a, b, indexing="ij")
        x = np.stack([A.ravel(), (B * (1.0 - A)).ravel()], axis=-1)
        w = np.outer(wa, wb).ravel()
    else:
        # x1 = a, x2 = b(1-a), x3 = c(1-a)(1-b); Jacobian (1-a)^2 (1-b)
        a, wa = _jacobi01(npts, 2.0)
        b, wb = _jacobi01(npts, 1.0)
        c, wc = _gauss01(npts)
        A, B, C = np.meshgrid(a, b, c, indexing="ij")
        x = np.stack(
            [A.ravel(), (B * (1.0 - A)).ravel(), (C * (1.0 - A) * (1.0 - B)).ravel()],
            axis=-1,
        )
        w = np.einsum("i,j,k->ijk", wa, wb, wc).ravel()
    nodes = np.concatenate([1.0 - x.sum(axis=1, keepdims=True), x], axis=1)
    weights = w * math.factorial(dim)  # normalize against the reference volume
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SimplexRule(degree=degree, nodes=nodes, weights=weights)


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Simplices covering a polytope, as an array of shape (s, n+1, n)."""

    simplices: np.ndarray

    @property
    def nsimplices(self):
        return self.simplices.shape[0]

    @property
    def dim(self):
        return self.simplices.shape[2]

    def volumes(self):
        edges = self.simplices[:, 1:, :] - self.simplices[:, :1, :]
        return np.abs(np.linalg.det(edges)) / math.factorial(self.dim)

    def volume(self):
        return math.fsum(self.volumes().tolist())


def triangulate(p):
    """Fan triangulation: cone from the vertex centroid over each facet.

    Facets are decomposed into (n-1)-simplices first (trivially for n <= 2,
    by a cyclic fan for polygonal facets in n = 3), so the union of the cones
    covers the polytope exactly with disjoint interiors.
    """
    if p.dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {p.dim}; quadrature covers {SUPPORTED_DIMS}")
    center = p.centroid
    simplices = []
    for i in range(p.nfacets):
        for facet_simplex in p.facet_simplices(i):
            simplices.append(np.vstack([center[None, :], np.asarray(facet_simplex)]))
    return Triangulation(simplices=np.array(simplices))


def subdivide(tri):
    """Uniform (red) refinement: 2^n children per simplex, equal volumes."""
    S = tri.simplices
    n = tri.dim
    if n == 1:
        a, b = S[:, 0], S[:, 1]
        m = (a + b) / 2.0
        children = [
            np.stack([a, m], axis=1),
            np.stack([m, b], axis=1),
        ]
    elif n == 2:
        v0, v1, v2 = S[:, 0], S[:, 1], S[:, 2]
        m01, m02, m12 = (v0 + v1) / 2, (v0 + v2) / 2, (v1 + v2) / 2
        children = [
            np.stack([v0, m01, m02], axis=1),
            np.stack([m01, v1, m12], axis=1),
            np.stack([m02, m12, v2], axis=1),
            np.stack([m01, m12, m02], axis=1),
        ]
    else:
        v0, v1, v2, v3 = S[:, 0], S[:, 1], S[:, 2], S[:, 3]
        m01, m02, m03 = (v0 + v1) / 2, (v0 + v2) / 2, (v0 + v3) / 2
        m12, m13, m23 = (v1 + v2) / 2, (v1 + v3) / 2, (v2 + v3) / 2
        # Bey's red refinement, interior octahedron split along m02-m13
        children = [
            np.stack([v0, m01, m02, m03], axis=1),
            np.stack([m01, v1, m12, m13], axis=1),
            np.stack([m02, m12, v2, m23], axis=1),
            np.stack([m03, m13, m23, v3], axis=1),
            np.stack([m01, m02, m03, m13], axis=1),
            np.stack([m01, m02, m12, m13], axis=1),
            np.stack([m02, m03, m13, m23], axis=1),
            np.stack([m02, m12, m13, m23], axis=1),
        ]
    return Triangulation(simplices=np.concatenate(children, axis=0))


def apply_rule(tri, rule, f, vectorized=False):
    """One sweep of the rule over every simplex of a triangulation.

    Per-simplex contributions are accumulated with compensated summation in
    simplex order, so the result is deterministic.
    """
    points = np.einsum("qk,skn->sqn", rule.nodes, tri.simplices)
    flat = points.reshape(-1, tri.dim)
    if vectorized:
        values = np.asarray(f(flat), dtype=float)
        if values.shape != (flat.shape[0],):
            raise ValueError("vectorized integrand must map (m, n) points to (m,) values")
    else:
        values = np.array([float(f(pt)) for pt in flat])
    values = values.reshape(tri.nsimplices, -1)
    contribs = tri.volumes() * (values @ rule.weights)
    return math.fsum(contribs.tolist())


def integrate(p, f, tol, max_levels=None, vectorized=False, degree=DEFAULT_DEGREE):
    """Integrate f over the polytope to absolute tolerance ``tol``.

    Parameters
    ----------
    p : DelzantPolytope
        Integration domain (dimension 1, 2 or 3).
    f : callable
        Integrand, smooth on the closed polytope.  Called with one point of
        shape (n,), or with an (m, n) batch when ``vectorized`` is true.
        Evaluation points are always strictly interior.
    tol : float
        Stop once two successive refinement levels agree to this tolerance.
    max_levels : int, optional
        Cap on uniform subdivision levels (default 8).
    vectorized : bool
        Whether f accepts batched points.
    degree : int
        Polynomial exactness degree of the simplex rule.

    Raises
    ------
    ConvergenceError
        If the estimates have not settled after ``max_levels`` subdivisions.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if max_levels is None:
        max_levels = DEFAULT_MAX_LEVELS
    rule = simplex_rule(p.dim, degree)
    tri = triangulate(p)
    estimate = apply_rule(tri, rule, f, vectorized=vectorized)
    for _ in range(max_levels):
        tri = subdivide(tri)
        refined = apply_rule(tri, rule, f, vectorized=vectorized)
        if abs(refined - estimate) < tol:
            return refined
        estimate = refined
    raise ConvergenceError(
        f"quadrature did not reach tol={tol:g} within {max_levels} subdivision levels"
    )
