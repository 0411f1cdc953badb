"""Acceptance suite: one test per release criterion.

Each test pins the advertised tolerance and runtime budget and prints a
PASS line (visible with ``pytest -s``); a failed assertion marks the
criterion FAIL.  Run as

    pytest -s -v tests/test_acceptance.py
"""

import time

import numpy as np
import pytest

import helpers
from helpers import random_interior_points
from toricmetrics import (
    affine_fit,
    canonical,
    check_delzant,
    check_identity,
    curvature_grid,
    inverse_hessian_jets,
    jets,
    scalar_curvature,
    scalar_curvature_logdet,
)
from toricmetrics.calabi import calabi_constants, calabi_polytope, calabi_potential

SEED = 20260809


def report(number, title, started, budget):
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"criterion {number} exceeded {budget}s ({elapsed:.2f}s)"
    print(f"ACCEPTANCE {number} PASS  {title}  [{elapsed:.2f}s < {budget:g}s]")


@pytest.fixture(scope="module")
def shipped():
    """The shipped test polytopes with their potentials."""
    simplex = helpers.standard_simplex(2)
    square = helpers.unit_cube(2)
    interval = helpers.unit_interval()
    trapezoid = helpers.trapezoid(0.5)
    return {
        "interval": canonical(interval),
        "simplex": canonical(simplex),
        "square": canonical(square),
        "trapezoid-canonical": canonical(trapezoid),
        "trapezoid-calabi": calabi_potential(0.5),
    }


def test_criterion_1_cp2_golden_value(shipped):
    started = time.perf_counter()
    rng = np.random.default_rng(SEED)
    pot = shipped["simplex"]
    for y in random_interior_points(pot.polytope, 50, rng):
        assert abs(scalar_curvature(pot, y) - 6.0) <= 1e-8
    report(1, "constant curvature 6 on the projective-plane simplex", started, 1.0)


def test_criterion_2_calabi_family_reproduction():
    started = time.perf_counter()
    for a in (0.2, 0.5, 0.8):
        c1, c2 = calabi_constants(a)
        fit = affine_fit(curvature_grid(calabi_potential(a), 8))
        assert fit.is_extremal, f"a={a} not extremal"
        np.testing.assert_allclose(fit.gradient, [12 * c1, 12 * c1], rtol=1e-5)
        np.testing.assert_allclose(fit.constant, 6 * c2, rtol=1e-5)
        if a == 0.5:
            assert abs(fit.constant - 12.0 / 13.0) <= 1e-5
            for g in fit.gradient:
                assert abs(g - 96.0 / 13.0) <= 1e-4
    report(2, "extremal family fits R = 12 c1 psi + 6 c2 for a in {.2,.5,.8}", started, 5.0)


def test_criterion_3_canonical_trapezoid_not_extremal(shipped):
    started = time.perf_counter()
    fit = affine_fit(curvature_grid(shipped["trapezoid-canonical"], 8))
    assert fit.max_residual >= 1e-2
    assert not fit.is_extremal
    report(3, "canonical trapezoid rejected (residual >= 1e-2)", started, 1.0)


def test_criterion_4_combinatorial_identity(shipped):
    started = time.perf_counter()
    cases = [
        ("simplex", 3.0),
        ("square", 4.0),
        ("trapezoid-canonical", 2.5),
        ("trapezoid-calabi", 2.5),
    ]
    for name, both_sides in cases:
        pot = shipped[name]
        rep = check_identity(pot.polytope, pot, tol=1e-6)
        assert rep.abs_error <= 1e-4, f"{name}: abs_error {rep.abs_error}"
        assert abs(rep.lhs - both_sides) <= 1e-12
    report(4, "volume-derivative sum equals total curvature on all cases", started, 10.0)


def test_criterion_5_two_formula_equivalence(shipped):
    started = time.perf_counter()
    rng = np.random.default_rng(SEED)
    per_case = 100 // len(shipped)
    for name, pot in shipped.items():
        for y in random_interior_points(pot.polytope, per_case, rng):
            direct = scalar_curvature(pot, y)
            logdet = scalar_curvature_logdet(pot, y)
            assert abs(direct - logdet) <= 1e-8 * max(1.0, abs(direct)), name
    report(5, "direct and log-det curvature formulas agree to 1e-8", started, 5.0)


def test_criterion_6_derivative_correctness(shipped):
    started = time.perf_counter()
    rng = np.random.default_rng(SEED)
    h = 1e-5
    for name, pot in shipped.items():
        for y in random_interior_points(pot.polytope, 20, rng, margin_frac=0.08):
            step = h * (1.0 + float(np.abs(y).max()))
            table = jets(pot, y)
            fd2 = helpers.central_diff(lambda z: jets(pot, z).order1, y, step)
            fd3 = helpers.central_diff(lambda z: jets(pot, z).order2, y, step)
            fd4 = helpers.central_diff(lambda z: jets(pot, z).order3, y, step)
            helpers.assert_tensor_close(fd2, table.order2, 1e-6, f"{name} order2")
            helpers.assert_tensor_close(fd3, table.order3, 1e-6, f"{name} order3")
            helpers.assert_tensor_close(fd4, table.order4, 1e-6, f"{name} order4")
            ihj = inverse_hessian_jets(table)
            fd_dinv = np.moveaxis(
                helpers.central_diff(lambda z: inverse_hessian_jets(jets(pot, z)).inv, y, step),
                -1,
                0,
            )
            fd_ddinv = np.moveaxis(
                helpers.central_diff(
                    lambda z: inverse_hessian_jets(jets(pot, z)).d_inv, y, step
                ),
                -1,
                0,
            )
            helpers.assert_tensor_close(fd_dinv, ihj.d_inv, 1e-6, f"{name} d_inv")
            helpers.assert_tensor_close(fd_ddinv, ihj.dd_inv, 1e-6, f"{name} dd_inv")
    report(6, "jets and inverse-Hessian tensors match finite differences", started, 10.0)


def test_criterion_7_delzant_validation():
    started = time.perf_counter()
    assert check_delzant(helpers.standard_simplex(2)).is_delzant
    assert check_delzant(helpers.unit_cube(2)).is_delzant
    for a in np.linspace(0.05, 0.95, 10):
        assert check_delzant(calabi_polytope(float(a))).is_delzant
    wt = helpers.weighted_triangle()
    rep = check_delzant(wt)
    assert not rep.is_delzant
    assert len(rep.failures) == 1
    idx, reason = rep.failures[0]
    assert np.allclose(wt.vertices[idx].point, [0.0, 0.5])
    assert "determinant" in reason
    assert "-2" in reason or "2" in reason
    report(7, "Delzant verdicts incl. weighted-triangle determinant 2", started, 1.0)


def test_criterion_8_property_suite(shipped):
    started = time.perf_counter()
    rng = np.random.default_rng(SEED)

    # lattice equivariance of R under a shear plus translation
    A = np.array([[1, 1], [0, 1]])
    t = np.array([2.0, -1.0])
    p = helpers.trapezoid(0.5)
    q = helpers.transform_polytope(p, A, t)
    pot_p, pot_q = canonical(p), canonical(q)
    for y in random_interior_points(p, 10, rng):
        rp = scalar_curvature(pot_p, y)
        rq = scalar_curvature(pot_q, A @ y + t)
        assert abs(rp - rq) <= 1e-9

    # scaling law on the dilated interval and simplex
    from toricmetrics.polytope import DelzantPolytope

    c = 2.0
    interval = helpers.unit_interval()
    dilated = DelzantPolytope([[1], [-1]], [0.0, -c])
    for y in random_interior_points(interval, 5, rng):
        assert abs(
            scalar_curvature(canonical(dilated), c * y)
            - scalar_curvature(canonical(interval), y) / c
        ) <= 1e-9
    simplex = helpers.standard_simplex(2)
    dilated2 = DelzantPolytope(simplex.normals, c * simplex.offsets)
    for y in random_interior_points(simplex, 5, rng):
        assert abs(
            scalar_curvature(canonical(dilated2), c * y)
            - scalar_curvature(canonical(simplex), y) / c
        ) <= 1e-9

    # product additivity: square = interval x interval gives R = 2 + 2 = 4
    square = helpers.unit_cube(2)
    for y in random_interior_points(square, 10, rng):
        assert abs(scalar_curvature(canonical(square), y) - 4.0) <= 1e-9

    report(8, "equivariance, scaling law, product additivity at 1e-9", started, 5.0)
