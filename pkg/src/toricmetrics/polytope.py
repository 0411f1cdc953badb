"""Convex polytopes given by halfspaces with primitive integer normals.

A polytope is stored as the intersection of halfspaces ``<y, u_i> >= lambda_i``
with each inward normal ``u_i`` a primitive integer vector.  Vertices are
enumerated by brute force over facet subsets (the intended scale is a handful
of facets in dimension 1-3), the Delzant smoothness condition is checked in
exact integer arithmetic, and Euclidean/lattice volumes are derived from a fan
triangulation.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import PolytopeError

# A point is tight on facet i iff |<y,u_i> - lambda_i| <= VERTEX_TOL*(1+|lambda_i|);
# vertices closer than DEDUP_TOL are considered identical.
VERTEX_TOL = 1e-9
DEDUP_TOL = 1e-9


def _int_vector(values, what="normal"):
    """Convert a sequence to a list of Python ints, rejecting non-integers."""
    out = []
    for v in values:
        if isinstance(v, bool):
            raise PolytopeError(f"non-integer {what} entry {v!r}")
        if isinstance(v, (int, np.integer)):
            out.append(int(v))
        elif isinstance(v, float) and v.is_integer():
            out.append(int(v))
        else:
            raise PolytopeError(f"non-integer {what} entry {v!r}")
    return out


def _gcd_all(values):
    g = 0
    for v in values:
        g = math.gcd(g, abs(int(v)))
    return g


def _primitivize(vec):
    """Divide an integer vector by the gcd of its entries."""
    g = _gcd_all(vec)
    if g == 0:
        raise PolytopeError("zero vector cannot be primitivized")
    return [int(v) // g for v in vec]


def _int_det(rows):
    """Exact determinant of a square integer matrix (Bareiss algorithm)."""
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref_kernel(rows, dim):
    """Exact rank and one primitive integer kernel vector of an integer matrix.

    Returns ``(rank, kernel)`` where ``kernel`` is None when the matrix has
    full column rank; otherwise it is the kernel vector associated with the
    first free column, scaled to primitive integers.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(dim):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if r == dim:
        return r, None
    free = next(c for c in range(dim) if c not in pivots)
    sol = [Fraction(0)] * dim
    sol[free] = Fraction(1)
    for i, c in enumerate(pivots):
        sol[c] = -m[i][free]
    denom = math.lcm(*(f.denominator for f in sol))
    return r, _primitivize([int(f * denom) for f in sol])


def _kernel_direction(rows, dim):
    """Primitive integer kernel vector of a (dim-1) x dim integer matrix of
    rank dim-1."""
    if dim == 1:
        return [1]
    rank, kernel = _rref_kernel(rows, dim)
    if rank != dim - 1 or kernel is None:
        raise PolytopeError("facet normals at a vertex are linearly dependent")
    return kernel


@dataclass(frozen=True, eq=False)
class Facet:
    """One halfspace ``<y, normal> >= offset`` with a primitive integer normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=np.int64)
        if normal.ndim != 1 or normal.shape[0] == 0:
            raise PolytopeError("facet normal must be a nonempty vector")
        if not normal.any():
            raise PolytopeError("facet normal must be nonzero")
        if _gcd_all(normal.tolist()) != 1:
            raise PolytopeError(
                f"non-primitive normal {normal.tolist()} (gcd "
                f"{_gcd_all(normal.tolist())})"
            )
        normal.setflags(write=False)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True, eq=False)
class Vertex:
    """A vertex together with the indices of the facets tight at it."""

    point: np.ndarray
    active: frozenset

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        point.setflags(write=False)
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "active", frozenset(self.active))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the Delzant check: ``is_delzant`` iff ``failures`` is empty."""

    is_delzant: bool
    failures: tuple = field(default_factory=tuple)


class DelzantPolytope:
    """Bounded full-dimensional polytope ``{y : <y,u_i> >= lambda_i}``.

    Construction validates the halfspace description eagerly: normals must be
    primitive integer vectors, the feasible region bounded with nonempty
    interior, every facet must support at least one vertex, and every vertex
    must be simple (exactly ``dim`` tight facets).  Offsets may be arbitrary
    reals.  Instances are immutable.
    """

    def __init__(self, normals, offsets, name=None):
        normals = [_int_vector(row) for row in normals]
        if not normals:
            raise PolytopeError("polytope needs at least one facet")
        dim = len(normals[0])
        if any(len(row) != dim for row in normals):
            raise PolytopeError("facet normals have inconsistent dimensions")
        offsets = [float(o) for o in offsets]
        if len(offsets) != len(normals):
            raise PolytopeError("number of offsets does not match normals")
        facets = tuple(Facet(np.array(r, dtype=np.int64), o) for r, o in zip(normals, offsets))
        if len(facets) < dim + 1:
            raise PolytopeError(
                f"need at least {dim + 1} facets in dimension {dim}, got {len(facets)}"
            )
        seen = {}
        for i, f in enumerate(facets):
            key = (tuple(f.normal.tolist()), f.offset)
            if key in seen:
                raise PolytopeError(f"redundant facet {i}: duplicates facet {seen[key]}")
            seen[key] = i

        self._name = name
        self._dim = dim
        self._facets = facets
        self._U = np.array([f.normal for f in facets], dtype=np.int64)
        self._Uf = self._U.astype(float)
        self._lam = np.array([f.offset for f in facets], dtype=float)
        self._unorms = np.linalg.norm(self._Uf, axis=1)

        ray = self._recession_direction()
        if ray is not None:
            raise PolytopeError(
                f"unbounded or empty feasible region (recession direction {ray})"
            )
        self._vertices = self._enumerate_vertices()
        if not self._vertices:
            raise PolytopeError("empty feasible region (no vertices)")
        self._points = np.array([v.point for v in self._vertices])
        self._points.setflags(write=False)

        supported = set()
        for v in self._vertices:
            supported |= v.active
        missing = [i for i in range(len(facets)) if i not in supported]
        if missing:
            raise PolytopeError(f"redundant facet(s) {missing}: support no vertex")

        centroid = self._points.mean(axis=0)
        if np.any(self.l_values(centroid) <= VERTEX_TOL * (1.0 + np.abs(self._lam))):
            raise PolytopeError("feasible region has empty interior")
        self._volume = None

    # -- basic accessors ---------------------------------------------------

    @property
    def dim(self):
        return self._dim

    @property
    def name(self):
        return self._name

    @property
    def facets(self):
        return self._facets

    @property
    def nfacets(self):
        return len(self._facets)

    @property
    def normals(self):
        """Integer inward normals as a read-only (d, n) array."""
        return self._U

    @property
    def offsets(self):
        return self._lam

    @property
    def vertices(self):
        return self._vertices

    @property
    def vertex_points(self):
        """Vertex coordinates as a read-only (V, n) array."""
        return self._points

    @property
    def centroid(self):
        return self._points.mean(axis=0)

    def __repr__(self):
        label = f" {self._name!r}" if self._name else ""
        return (
            f"<DelzantPolytope{label} dim={self._dim} facets={self.nfacets} "
            f"vertices={len(self._vertices)}>"
        )

    # -- geometry ----------------------------------------------------------

    def l_values(self, y):
        """Affine facet coordinates ``l_i(y) = <y,u_i> - lambda_i``.

        Accepts a single point of shape (n,) or a batch of shape (m, n); all
        entries are strictly positive exactly on the interior.
        """
        y = np.asarray(y, dtype=float)
        return y @ self._Uf.T - self._lam

    def boundary_distance(self, y):
        """Euclidean distance from y to the nearest facet hyperplane
        (negative outside)."""
        return np.min(self.l_values(y) / self._unorms, axis=-1)

    def contains(self, y, margin=0.0):
        return bool(self.boundary_distance(y) > margin)

    def bounding_box(self):
        return self._points.min(axis=0), self._points.max(axis=0)

    # -- construction internals ---------------------------------------------

    def _recession_direction(self):
        """Exact check that the recession cone {v : Uv >= 0} is trivial.

        Returns an integer recession direction if one exists, else None.  A
        nontrivial cone either contains a line (rank deficiency) or has an
        extreme ray tight on some n-1 linearly independent normals; both are
        detected in integer arithmetic.
        """
        U = self._U.tolist()
        d, n = self._U.shape
        if n == 1:
            signs = {1 if u[0] > 0 else -1 for u in U}
            if len(signs) == 2:
                return None
            return [next(iter(signs))]
        rank, kernel = _rref_kernel(U, n)
        if rank < n:
            # the whole feasible set is invariant along the kernel line
            return kernel
        for sub in combinations(range(d), n - 1):
            try:
                v = _kernel_direction([U[i] for i in sub], n)
            except PolytopeError:
                continue
            for cand in (v, [-x for x in v]):
                if all(sum(ui * vi for ui, vi in zip(U[i], cand)) >= 0 for i in range(d)):
                    return cand
        return None

    def _enumerate_vertices(self):
        d, n = self._U.shape
        tol = VERTEX_TOL * (1.0 + np.abs(self._lam))
        found = []
        for sub in combinations(range(d), n):
            rows = [self._U[i].tolist() for i in sub]
            if _int_det(rows) == 0:
                continue
            y = np.linalg.solve(self._Uf[list(sub)], self._lam[list(sub)])
            l = self.l_values(y)
            if np.any(l < -tol):
                continue
            active = frozenset(np.nonzero(np.abs(l) <= tol)[0].tolist())
            if len(active) > n:
                raise PolytopeError(
                    f"degenerate vertex at {y.tolist()}: {len(active)} tight facets "
                    f"(polytope is not simple)"
                )
            for other, _ in found:
                if np.linalg.norm(other - y) <= DEDUP_TOL:
                    break
            else:
                found.append((y, active))
        return tuple(Vertex(point, active) for point, active in found)

    # -- facet structure -----------------------------------------------------

    def facet_vertices(self, i):
        """Vertices lying on facet i, ordered cyclically when dim == 3."""
        if not 0 <= i < self.nfacets:
            raise IndexError(f"facet index {i} out of range")
        pts = [v.point for v in self._vertices if i in v.active]
        if self._dim != 3 or len(pts) <= 3:
            return [np.asarray(p) for p in pts]
        pts = np.array(pts)
        center = pts.mean(axis=0)
        normal = self._Uf[i] / self._unorms[i]
        # orthonormal basis of the facet plane for angular sorting
        seed = np.zeros(3)
        seed[np.argmin(np.abs(normal))] = 1.0
        e1 = np.cross(normal, seed)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        rel = pts - center
        order = np.argsort(np.arctan2(rel @ e2, rel @ e1), kind="stable")
        return [pts[k] for k in order]

    def facet_simplices(self, i):
        """Decompose facet i into (dim-1)-simplices (tuples of points)."""
        pts = self.facet_vertices(i)
        n = self._dim
        if n == 1:
            return [(pts[0],)]
        if n == 2:
            if len(pts) != 2:
                raise PolytopeError(f"facet {i} is not an edge")
            return [(pts[0], pts[1])]
        return [(pts[0], pts[k], pts[k + 1]) for k in range(1, len(pts) - 1)]

    def facet_euclidean_volume(self, i):
        """Euclidean (dim-1)-volume of facet i."""
        n = self._dim
        if n == 1:
            return 1.0
        total = 0.0
        fact = math.factorial(n - 1)
        for simplex in self.facet_simplices(i):
            edges = np.array(simplex[1:]) - np.array(simplex[0])
            gram = edges @ edges.T
            total += math.sqrt(max(np.linalg.det(gram), 0.0)) / fact
        return total


# -- module-level operations ---------------------------------------------


def parse_polytope(text):
    """Build a :class:`DelzantPolytope` from the JSON file format.

    The document is ``{"dim": n, "facets": [{"normal": [int,...],
    "offset": float}, ...], "name": optional}`` with inward normals.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeError(f"malformed polytope document: {exc}") from exc
    if not isinstance(doc, dict):
        raise PolytopeError("polytope document must be a JSON object")
    try:
        dim = doc["dim"]
        raw_facets = doc["facets"]
    except KeyError as exc:
        raise PolytopeError(f"polytope document missing key {exc}") from exc
    if not isinstance(dim, int) or dim < 1:
        raise PolytopeError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(raw_facets, list) or not raw_facets:
        raise PolytopeError("facets must be a nonempty list")
    normals, offsets = [], []
    for k, entry in enumerate(raw_facets):
        try:
            normal = entry["normal"]
            offset = entry["offset"]
        except (TypeError, KeyError):
            raise PolytopeError(f"facet {k} must have 'normal' and 'offset'") from None
        if len(normal) != dim:
            raise PolytopeError(f"facet {k} normal has length {len(normal)}, expected {dim}")
        if not isinstance(offset, (int, float)) or isinstance(offset, bool):
            raise PolytopeError(f"facet {k} offset must be a number")
        normals.append(normal)
        offsets.append(float(offset))
    return DelzantPolytope(normals, offsets, name=doc.get("name"))


def enumerate_vertices(p):
    """Vertices of the polytope (enumerated at construction)."""
    return list(p.vertices)


def check_delzant(p):
    """Check the Delzant smoothness condition at every vertex.

    At each vertex the primitive integer edge directions (one per dropped
    tight facet) must form a basis of Z^n; determinants are evaluated in
    exact integer arithmetic.
    """
    failures = []
    n = p.dim
    for idx, v in enumerate(p.vertices):
        active = sorted(v.active)
        if len(active) != n:
            failures.append((idx, f"{len(active)} tight facets, expected {n}"))
            continue
        directions = []
        for drop in active:
            rows = [p.normals[j].tolist() for j in active if j != drop]
            direction = _kernel_direction(rows, n)
            inward = sum(u * w for u, w in zip(p.normals[drop].tolist(), direction))
            if inward < 0:
                direction = [-x for x in direction]
            directions.append(direction)
        det = _int_det(directions)
        if abs(det) != 1:
            failures.append(
                (idx, f"edge directions {directions} span a sublattice (determinant {det})")
            )
    return ValidationReport(is_delzant=not failures, failures=tuple(failures))


def volume(p):
    """Euclidean n-volume via the fan triangulation."""
    if p._volume is None:
        from .quadrature import triangulate

        tri = triangulate(p)
        p._volume = tri.volume()
    return p._volume


def facet_lattice_volume(p, i):
    """(n-1)-volume of facet i in the lattice measure of its hyperplane.

    For a primitive normal this equals the Euclidean facet volume divided by
    the Euclidean norm of the normal, and is the derivative of the polytope
    volume with respect to the facet's outward offset.
    """
    if not 0 <= i < p.nfacets:
        raise IndexError(f"facet index {i} out of range")
    return p.facet_euclidean_volume(i) / float(np.linalg.norm(p.normals[i].astype(float)))


def _slice_interval(p, prefix, j):
    """Range of coordinate j over the fiber with y_0..y_{j-1} fixed.

    The fiber {z : A z >= b} in the remaining r = n - j coordinates is a
    bounded polytope; for r = 1 the interval is read off the inequalities,
    otherwise its vertices are enumerated brute force (tight r-subsets with
    exact integer determinants).
    """
    n = p.dim
    r = n - j
    prefix = np.asarray(prefix, dtype=float)
    b = p._lam - (p._Uf[:, :j] @ prefix if j else 0.0)
    A = p._Uf[:, j:]
    tol = VERTEX_TOL * (1.0 + np.abs(p._lam))
    if r == 1:
        lo, hi = -np.inf, np.inf
        for i in range(p.nfacets):
            c = A[i, 0]
            if c > 0:
                lo = max(lo, b[i] / c)
            elif c < 0:
                hi = min(hi, b[i] / c)
        return lo, hi
    values = []
    for sub in combinations(range(p.nfacets), r):
        if _int_det(p._U[list(sub), j:].tolist()) == 0:
            continue
        z = np.linalg.solve(A[list(sub)], b[list(sub)])
        if np.all(A @ z >= b - tol):
            values.append(z[0])
    if not values:
        raise PolytopeError("empty slice while building the interior grid")
    return min(values), max(values)


def interior_grid(p, density, margin=1e-3):
    """Uniform interior sample grid with ``density**dim`` points.

    The polytope is swept coordinate by coordinate: the range of y_1 is split
    into ``density`` cells, and for each cell center the conditional range of
    y_2 is split again, and so on.  Every slice is shrunk by ``margin`` at
    both ends (when long enough), so all points are strictly interior and at
    a safe distance from the boundary.  Points come out in row-major sweep
    order, making the grid deterministic; for box domains this reduces to the
    usual cell-center lattice.
    """
    if density < 1:
        raise ValueError("grid density must be at least 1")
    prefixes = [()]
    for j in range(p.dim):
        extended = []
        for prefix in prefixes:
            lo, hi = _slice_interval(p, prefix, j)
            if hi - lo > 4.0 * margin:
                lo, hi = lo + margin, hi - margin
            step = (hi - lo) / density
            extended.extend(prefix + (lo + (k + 0.5) * step,) for k in range(density))
        prefixes = extended
    return np.array(prefixes, dtype=float)
