"""Symplectic potentials and their derivative jets.

The potential is G(y) = (1/2) sum_k l_k(y) log l_k(y) + f(y), the canonical
part determined by the polytope plus an optional perturbation f (a polynomial
or a radial profile).  All derivatives up to total order 4 are computed in
closed form; numerical differentiation never enters this path.  The module
also realizes the Legendre duality: x = grad G(y), with the dual potential
F(x) = <y, grad G(y)> - G(y).
"""

import json
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .errors import BoundaryPointError, ConvergenceError
from .polytope import interior_grid
from .profiles import get_profile

INTERIOR_MARGIN = 1e-12
MAX_POLY_DEGREE = 8
CONVEXITY_EIG_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Perturbation:
    """Additive perturbation f of the canonical potential.

    Use the factories :meth:`none`, :meth:`polynomial` and :meth:`radial`;
    the constructor itself performs only light normalization.
    """

    kind: str
    terms: tuple = None
    direction: np.ndarray = None
    profile: str = None
    parameters: tuple = None

    @classmethod
    def none(cls):
        return cls(kind="none")

    @classmethod
    def polynomial(cls, terms, max_degree=MAX_POLY_DEGREE):
        """Polynomial f given as {exponent tuple: coefficient} or pair list."""
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = list(terms)
        normalized = []
        for exponents, coeff in items:
            exponents = tuple(int(e) for e in exponents)
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            if sum(exponents) > max_degree:
                raise ValueError(
                    f"term {exponents} exceeds the degree cap {max_degree}"
                )
            normalized.append((exponents, float(coeff)))
        return cls(kind="polynomial", terms=tuple(normalized))

    @classmethod
    def radial(cls, direction, profile, parameters):
        direction = np.asarray(direction, dtype=np.int64)
        if direction.ndim != 1 or not direction.any():
            raise ValueError("radial direction must be a nonzero integer vector")
        direction.setflags(write=False)
        prof = get_profile(profile)
        parameters = tuple(float(x) for x in parameters)
        if len(parameters) != prof.n_params:
            raise ValueError(
                f"profile {profile!r} takes {prof.n_params} parameter(s), "
                f"got {len(parameters)}"
            )
        return cls(kind="radial", direction=direction, profile=profile, parameters=parameters)


@dataclass(frozen=True, eq=False)
class SymplecticPotential:
    """A polytope together with a perturbation of its canonical potential."""

    polytope: object
    perturbation: Perturbation

    @classmethod
    def canonical(cls, polytope):
        return cls(polytope=polytope, perturbation=Perturbation.none())


def canonical(polytope):
    """Canonical (unperturbed) potential of a polytope."""
    return SymplecticPotential.canonical(polytope)


@dataclass(frozen=True, eq=False)
class JetTable:
    """All partial derivatives of G at one point, through total order 4.

    order2/3/4 are fully symmetric tensors.  For radial perturbations the
    order-0/1 entries use the gauge f(psi0) = f'(psi0) = 0 at the polytope
    center; ``gauged_low_orders`` flags this.  The gauge is irrelevant for
    the metric and the curvature.
    """

    point: np.ndarray
    order0: float
    order1: np.ndarray
    order2: np.ndarray
    order3: np.ndarray
    order4: np.ndarray
    gauged_low_orders: bool = False


@dataclass(frozen=True)
class ConvexityReport:
    """Minimum Hessian eigenvalue over an interior grid, plus failing points."""

    min_eigenvalue: float
    failures: np.ndarray
    grid_points: int

    @property
    def ok(self):
        return self.failures.shape[0] == 0


# -- operations --------------------------------------------------------------


def l_values(p, y):
    """Facet coordinates l_i(y) = <y, u_i> - lambda_i (positive on interior)."""
    return p.l_values(y)


def _require_interior(p, y):
    y = np.asarray(y, dtype=float)
    if y.shape != (p.dim,):
        raise ValueError(f"point must have shape ({p.dim},)")
    margins = INTERIOR_MARGIN * (1.0 + np.abs(p.offsets))
    if np.any(p.l_values(y) <= margins):
        raise BoundaryPointError(f"point {y.tolist()} is not strictly interior")
    return y


def _poly_tensor(terms, Y, order):
    """Order-``order`` derivative tensor of a polynomial at each point of Y."""
    m, n = Y.shape
    out = np.zeros((m,) + (n,) * order)
    for idx in product(range(n), repeat=order):
        counts = [0] * n
        for axis in idx:
            counts[axis] += 1
        acc = np.zeros(m)
        for exponents, coeff in terms:
            factor = coeff
            for e, a in zip(exponents, counts):
                for step in range(a):
                    factor *= e - step
                if factor == 0.0:
                    break
            if factor == 0.0:
                continue
            mono = np.ones(m)
            for axis, (e, a) in enumerate(zip(exponents, counts)):
                if e - a:
                    mono = mono * Y[:, axis] ** (e - a)
            acc += factor * mono
        out[(slice(None),) + idx] = acc
    return out


def _radial_profile_values(pert, psi):
    prof = get_profile(pert.profile)
    factor = 0.5 if prof.half_convention else 1.0
    f2 = factor * prof.second_derivative(psi, pert.parameters)
    f3 = factor * prof.third_derivative(psi, pert.parameters)
    f4 = factor * prof.fourth_derivative(psi, pert.parameters)
    return f2, f3, f4, factor, prof


def _radial_low_orders(pert, p, psi):
    """Gauged f and f' at scalar psi by integrating the profile twice.

    Uses f'(s) = int_{psi0}^{s} g and the Cauchy repeated-integral formula
    f(s) = int_{psi0}^{s} (s - t) g(t) dt with psi0 the polytope-center value.
    """
    prof = get_profile(pert.profile)
    factor = 0.5 if prof.half_convention else 1.0
    psi0 = float(pert.direction.astype(float) @ p.centroid)
    g = lambda t: float(prof.second_derivative(t, pert.parameters))
    f1, _ = quad(g, psi0, psi, epsabs=1e-13, epsrel=1e-13)
    f0, _ = quad(lambda t: (psi - t) * g(t), psi0, psi, epsabs=1e-13, epsrel=1e-13)
    return factor * f0, factor * f1


def jets_batch(pot, Y, low_orders=False):
    """Jets of the potential at an (m, n) batch of interior points.

    Returns ``(g0, g1, g2, g3, g4, gauged)``; g0 and g1 are None unless
    ``low_orders`` is requested (they need per-point quadrature for radial
    perturbations), and ``gauged`` records whether they carry the radial
    affine gauge.  The caller is responsible for interiority.
    """
    p = pot.polytope
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    g0, g1, g2, g3, g4 = _kernels.canonical_jets(p.normals.astype(float), p.offsets, Y)
    pert = pot.perturbation
    gauged = False
    if pert.kind == "polynomial":
        if low_orders:
            g0 = g0 + _poly_tensor(pert.terms, Y, 0)
            g1 = g1 + _poly_tensor(pert.terms, Y, 1)
        g2 = g2 + _poly_tensor(pert.terms, Y, 2)
        g3 = g3 + _poly_tensor(pert.terms, Y, 3)
        g4 = g4 + _poly_tensor(pert.terms, Y, 4)
    elif pert.kind == "radial":
        w = pert.direction.astype(float)
        psi = Y @ w
        f2, f3, f4, factor, _ = _radial_profile_values(pert, psi)
        w2 = np.einsum("a,b->ab", w, w)
        w3 = np.einsum("a,b,c->abc", w, w, w)
        w4 = np.einsum("a,b,c,e->abce", w, w, w, w)
        g2 = g2 + f2[:, None, None] * w2
        g3 = g3 + f3[:, None, None, None] * w3
        g4 = g4 + f4[:, None, None, None, None] * w4
        if low_orders:
            gauged = True
            vals = np.array([_radial_low_orders(pert, p, s) for s in psi])
            g0 = g0 + vals[:, 0]
            g1 = g1 + vals[:, 1, None] * w
    elif pert.kind != "none":
        raise ValueError(f"unknown perturbation kind {pert.kind!r}")
    if not low_orders:
        g0 = g1 = None
    return g0, g1, g2, g3, g4, gauged


def jets(pot, y):
    """Full :class:`JetTable` of the potential at one interior point."""
    y = _require_interior(pot.polytope, y)
    g0, g1, g2, g3, g4, gauged = jets_batch(pot, y[None, :], low_orders=True)
    return JetTable(
        point=y,
        order0=float(g0[0]),
        order1=g1[0],
        order2=g2[0],
        order3=g3[0],
        order4=g4[0],
        gauged_low_orders=gauged,
    )


def hessian(pot, y):
    """Hessian of G at an interior point (positive definite for valid
    potentials)."""
    return jets(pot, y).order2


def check_convexity(pot, grid_density):
    """Scan a uniform interior grid for Hessian positive definiteness."""
    if grid_density < 2:
        raise ValueError("grid density must be at least 2")
    pts = interior_grid(pot.polytope, grid_density)
    if pts.shape[0] == 0:
        raise ValueError("interior grid is empty; increase density")
    _, _, g2, _, _, _ = jets_batch(pot, pts)
    eigmins = np.linalg.eigvalsh(g2)[:, 0]
    failing = pts[eigmins <= CONVEXITY_EIG_FLOOR]
    return ConvexityReport(
        min_eigenvalue=float(eigmins.min()),
        failures=failing,
        grid_points=pts.shape[0],
    )


def legendre_map(pot, y):
    """Complex-chart coordinate x = grad G(y) of an interior point."""
    return jets(pot, y).order1


def dual_potential_value(pot, y):
    """Value of the dual (Kahler) potential F at x = grad G(y):
    F = <y, grad G> - G."""
    table = jets(pot, y)
    return float(table.point @ table.order1 - table.order0)


def invert_legendre(pot, x, max_iter=100, tol=1e-10):
    """Solve grad G(y) = x for the interior point y.

    Damped Newton on the strictly convex objective G(y) - <x, y>, started at
    the vertex centroid, with backtracking that keeps iterates interior.
    """
    p = pot.polytope
    x = np.asarray(x, dtype=float)
    if x.shape != (p.dim,):
        raise ValueError(f"target must have shape ({p.dim},)")
    margins = INTERIOR_MARGIN * (1.0 + np.abs(p.offsets))

    def interior(z):
        return bool(np.all(p.l_values(z) > margins))

    y = p.centroid.copy()
    table = jets(pot, y)
    for _ in range(max_iter):
        grad = table.order1 - x
        if np.linalg.norm(grad) < tol:
            return y
        step = -np.linalg.solve(table.order2, grad)
        value = table.order0 - x @ y
        slope = grad @ step
        slack = 1e-15 * (1.0 + abs(value))  # Armijo at rounding level
        t = 1.0
        while True:
            cand = y + t * step
            if interior(cand):
                cand_table = jets(pot, cand)
                if cand_table.order0 - x @ cand <= value + 0.25 * t * slope + slack:
                    break
            t *= 0.5
            if t < 1e-14:
                raise ConvergenceError("Newton line search failed in invert_legendre")
        y = cand
        table = cand_table
    raise ConvergenceError(f"invert_legendre did not converge in {max_iter} iterations")


def parse_potential(text, dim):
    """Build a :class:`Perturbation` from the JSON potential file format."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed potential document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("potential document must be a JSON object")
    body = doc.get("perturbation", doc)
    kind = body.get("kind")
    if kind == "none":
        return Perturbation.none()
    if kind == "polynomial":
        try:
            terms = [(t["exponents"], t["coefficient"]) for t in body["terms"]]
        except (TypeError, KeyError) as exc:
            raise ValueError("polynomial terms need 'exponents' and 'coefficient'") from exc
        for exponents, _ in terms:
            if len(exponents) != dim:
                raise ValueError(
                    f"exponent vector {exponents} has length {len(exponents)}, expected {dim}"
                )
        return Perturbation.polynomial(terms)
    if kind == "radial":
        try:
            direction = body["direction"]
            profile = body["profile"]
            parameters = body["parameters"]
        except KeyError as exc:
            raise ValueError(f"radial perturbation missing key {exc}") from exc
        if len(direction) != dim:
            raise ValueError(f"direction has length {len(direction)}, expected {dim}")
        return Perturbation.radial(direction, profile, parameters)
    raise ValueError(f"unknown perturbation kind {kind!r}")
