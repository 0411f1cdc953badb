"""Shared builders and independent numerical oracles for the test suite."""

import math
from fractions import Fraction
from itertools import product

import numpy as np

from toricmetrics import DelzantPolytope
from toricmetrics.quadrature import triangulate

# -- polytope builders -------------------------------------------------------


def standard_simplex(n=2):
    """Moment polytope of projective n-space: y_i >= 0, sum y <= 1."""
    normals = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    normals.append([-1] * n)
    offsets = [0.0] * n + [-1.0]
    return DelzantPolytope(normals, offsets, name=f"simplex{n}")


def unit_cube(n=2):
    normals = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    normals += [[-1 if j == i else 0 for j in range(n)] for i in range(n)]
    offsets = [0.0] * n + [-1.0] * n
    return DelzantPolytope(normals, offsets, name=f"cube{n}")


def unit_interval():
    return DelzantPolytope([[1], [-1]], [0.0, -1.0], name="interval")


def trapezoid(a=0.5):
    return DelzantPolytope(
        [[1, 0], [0, 1], [-1, -1], [1, 1]], [0.0, 0.0, -1.0, a], name=f"trap{a:g}"
    )


def hexagon():
    """Delzant hexagon 0 <= y_i <= 2, 1 <= y1+y2 <= 3."""
    return DelzantPolytope(
        [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, -1]],
        [0.0, 0.0, -2.0, -2.0, 1.0, -3.0],
        name="hexagon",
    )


def weighted_triangle():
    """Simple but non-smooth: edge lattice determinant 2 at one vertex."""
    return DelzantPolytope([[1, 0], [0, 1], [-1, -2]], [0.0, 0.0, -1.0])


# -- lattice transforms ------------------------------------------------------


def int_inverse(A):
    """Exact inverse of a unimodular integer matrix."""
    A = [[Fraction(int(x)) for x in row] for row in np.asarray(A).tolist()]
    n = len(A)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in out for x in row), "matrix not unimodular"
    return np.array([[int(x) for x in row] for row in out], dtype=np.int64)


def transform_polytope(p, A, t=None):
    """Image of p under y -> A y + t with A in GL(n, Z).

    New normals are (A^T)^{-1} u_i and offsets shift by <t, u_i'>, so the
    facet functions satisfy l_i'(A y + t) = l_i(y).
    """
    A = np.asarray(A, dtype=np.int64)
    t = np.zeros(p.dim) if t is None else np.asarray(t, dtype=float)
    AinvT = int_inverse(A).T
    normals = [AinvT @ u for u in p.normals]
    offsets = [p.offsets[i] + float(t @ normals[i]) for i in range(p.nfacets)]
    return DelzantPolytope(normals, offsets, name=p.name)


# -- sampling and finite differences ----------------------------------------


def random_interior_points(p, count, rng, margin_frac=0.05):
    """Uniform interior samples at a safe distance from the boundary."""
    lo, hi = p.bounding_box()
    margin = margin_frac * float(np.min(hi - lo))
    pts = []
    while len(pts) < count:
        cand = rng.uniform(lo, hi, size=(8 * count, p.dim))
        keep = cand[p.boundary_distance(cand) >= margin]
        pts.extend(keep.tolist())
    return np.array(pts[:count])


def central_diff(fn, y, h):
    """Stack central differences of fn along a new trailing axis."""
    y = np.asarray(y, dtype=float)
    cols = []
    for c in range(y.shape[0]):
        e = np.zeros_like(y)
        e[c] = h
        cols.append((np.asarray(fn(y + e)) - np.asarray(fn(y - e))) / (2.0 * h))
    return np.stack(cols, axis=-1)


def assert_tensor_close(actual, expected, rtol, what=""):
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    scale = max(1.0, float(np.abs(expected).max()))
    err = float(np.abs(actual - expected).max())
    assert err <= rtol * scale, f"{what}: max deviation {err:.3e} > {rtol:.1e} * {scale:.3e}"


# -- exact polytope moments ---------------------------------------------------


def _simplex_monomial_moment(vertices, exponents):
    """Exact integral of prod x_k^{m_k} over one simplex.

    Expands the monomial in barycentric coordinates and applies
    int_S b^alpha dx = vol(S) n! prod(alpha!) / (n + |alpha|)!.
    """
    V = np.asarray(vertices, dtype=float)
    n = V.shape[1]
    vol = abs(np.linalg.det(V[1:] - V[0])) / math.factorial(n)
    poly = {(0,) * (n + 1): 1.0}
    for k, mk in enumerate(exponents):
        for _ in range(mk):
            new = {}
            for alpha, coeff in poly.items():
                for j in range(n + 1):
                    beta = list(alpha)
                    beta[j] += 1
                    beta = tuple(beta)
                    new[beta] = new.get(beta, 0.0) + coeff * V[j, k]
            poly = new
    total = 0.0
    for alpha, coeff in poly.items():
        num = math.factorial(n) * math.prod(math.factorial(a) for a in alpha)
        total += coeff * num / math.factorial(n + sum(alpha))
    return vol * total


def polytope_monomial_moment(p, exponents):
    """Exact moment of a monomial over the polytope, by simplex decomposition."""
    tri = triangulate(p)
    return math.fsum(
        _simplex_monomial_moment(tri.simplices[s], exponents) for s in range(tri.nsimplices)
    )


def monomials_up_to(n, degree):
    for m in product(range(degree + 1), repeat=n):
        if sum(m) <= degree:
            yield m
