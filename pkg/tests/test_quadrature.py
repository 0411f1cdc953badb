import math

import numpy as np
import pytest

import helpers
from toricmetrics import ConvergenceError, integrate
from toricmetrics.quadrature import apply_rule, simplex_rule, subdivide, triangulate


@pytest.mark.parametrize("dim", [1, 2, 3])
class TestSimplexRule:
    def test_weights_sum_to_one(self, dim):
        rule = simplex_rule(dim)
        assert math.fsum(rule.weights.tolist()) == pytest.approx(1.0, abs=1e-13)

    def test_nodes_strictly_interior(self, dim):
        rule = simplex_rule(dim)
        assert rule.nodes.min() > 0.0
        assert np.allclose(rule.nodes.sum(axis=1), 1.0, atol=1e-13)

    def test_monomial_exactness_on_reference_simplex(self, dim):
        # oracle: int_ref prod x^m dx = prod(m_i!) / (n + |m|)!
        rule = simplex_rule(dim)
        ref_vol = 1.0 / math.factorial(dim)
        x = rule.nodes[:, 1:]  # cartesian coordinates of the reference simplex
        for m in helpers.monomials_up_to(dim, rule.degree):
            approx = ref_vol * float(rule.weights @ np.prod(x ** np.array(m), axis=1))
            exact = math.prod(math.factorial(k) for k in m) / math.factorial(dim + sum(m))
            assert approx == pytest.approx(exact, rel=1e-12), m


class TestTriangulate:
    def test_simplex_three_triangles(self, simplex):
        tri = triangulate(simplex)
        assert tri.nsimplices == 3
        assert tri.volume() == pytest.approx(0.5, abs=1e-14)

    def test_square_four_triangles(self, square):
        tri = triangulate(square)
        assert tri.nsimplices == 4
        assert tri.volume() == pytest.approx(1.0, abs=1e-14)

    def test_trapezoid_area(self, trapezoid_half):
        assert triangulate(trapezoid_half).volume() == pytest.approx(0.375, abs=1e-14)

    def test_cube_tetrahedra(self, cube):
        tri = triangulate(cube)
        assert tri.nsimplices == 12  # 6 square facets, 2 triangles each
        assert tri.volume() == pytest.approx(1.0, rel=1e-13)

    def test_subdivision_preserves_volume(self, trapezoid_half, cube, interval):
        for p in (trapezoid_half, cube, interval):
            tri = triangulate(p)
            child = subdivide(tri)
            assert child.nsimplices == tri.nsimplices * 2**p.dim
            assert child.volume() == pytest.approx(tri.volume(), rel=1e-12)


class TestIntegrate:
    def test_constant_over_simplex(self, simplex):
        assert integrate(simplex, lambda y: 1.0, 1e-10) == pytest.approx(0.5, abs=1e-12)

    def test_linear_moment_over_simplex(self, simplex):
        assert integrate(simplex, lambda y: y[0], 1e-10) == pytest.approx(
            1.0 / 6.0, rel=1e-12
        )

    def test_product_over_square(self, square):
        assert integrate(square, lambda y: y[0] * y[1], 1e-10) == pytest.approx(
            0.25, rel=1e-12
        )

    def test_monomial_exactness_over_polytopes(
        self, simplex, square, trapezoid_half, hexagon
    ):
        for p in (simplex, square, trapezoid_half, hexagon):
            for m in helpers.monomials_up_to(2, 7):
                exact = helpers.polytope_monomial_moment(p, m)
                got = integrate(p, lambda y, m=m: float(np.prod(y**np.array(m))), 1e-9)
                assert got == pytest.approx(exact, rel=1e-10, abs=1e-13), (p.name, m)

    def test_monomial_exactness_3d(self, cube, simplex3):
        for p in (cube, simplex3):
            for m in [(0, 0, 0), (1, 1, 1), (3, 2, 2), (4, 3, 0), (2, 2, 3)]:
                exact = helpers.polytope_monomial_moment(p, m)
                got = integrate(p, lambda y, m=m: float(np.prod(y**np.array(m))), 1e-9)
                assert got == pytest.approx(exact, rel=1e-10, abs=1e-13), (p.name, m)

    def test_interval_smooth(self, interval):
        got = integrate(interval, lambda y: math.exp(y[0]), 1e-12)
        assert got == pytest.approx(math.e - 1.0, rel=1e-12)

    def test_smooth_2d_against_refinement(self, trapezoid_half):
        f = lambda y: math.exp(y[0] - 2 * y[1])
        coarse = integrate(trapezoid_half, f, 1e-10)
        # brute-force deep refinement as reference
        rule = simplex_rule(2)
        tri = triangulate(trapezoid_half)
        for _ in range(6):
            tri = subdivide(tri)
        reference = apply_rule(tri, rule, f)
        assert coarse == pytest.approx(reference, abs=1e-10)

    def test_additivity_under_subdivision(self, trapezoid_half):
        rule = simplex_rule(2)
        tri = triangulate(trapezoid_half)
        f = lambda y: math.exp(y[0]) * (1 + y[1])
        whole = apply_rule(subdivide(tri), rule, f)
        by_parts = math.fsum(
            apply_rule(subdivide(type(tri)(tri.simplices[s : s + 1])), rule, f)
            for s in range(tri.nsimplices)
        )
        assert whole == pytest.approx(by_parts, abs=1e-10)

    def test_nodes_strictly_inside_polytope(self, trapezoid_half):
        def guard(y):
            assert np.all(trapezoid_half.l_values(y) > 0), "node on or outside boundary"
            return 1.0

        integrate(trapezoid_half, guard, 1e-9)

    def test_vectorized_matches_scalar(self, simplex):
        f_scalar = lambda y: float(np.sin(y[0]) + y[1] ** 2)
        f_batch = lambda Y: np.sin(Y[:, 0]) + Y[:, 1] ** 2
        a = integrate(simplex, f_scalar, 1e-10)
        b = integrate(simplex, f_batch, 1e-10, vectorized=True)
        assert a == b

    def test_nonconvergence_raises(self, simplex):
        with pytest.raises(ConvergenceError):
            integrate(simplex, lambda y: math.exp(5 * y[0]), 1e-15, max_levels=1)

    def test_bad_tolerance(self, simplex):
        with pytest.raises(ValueError):
            integrate(simplex, lambda y: 1.0, 0.0)

    def test_unsupported_dimension(self):
        p4 = helpers.standard_simplex(4)
        with pytest.raises(ValueError, match="unsupported dimension"):
            integrate(p4, lambda y: 1.0, 1e-6)
