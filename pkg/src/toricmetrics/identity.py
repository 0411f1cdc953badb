"""The polytope-side total-curvature identity.

For a Delzant polytope written as <y, v_i> <= s_i with outward primitive
normals v_i = -u_i and s_i = -lambda_i, the sum of the volume derivatives
sum_i dv/ds_i equals the integral of the scalar curvature over the polytope,

    sum_i dv/ds_i = -1/2 int (sum_{i,j} d^2 G^{ij}/dy_i dy_j) dy,

for any admissible potential G.  The left side is computed exactly from
lattice facet volumes; the right side by adaptive quadrature of R.  The
(2 pi)^n factor that multiplies both sides in the manifold picture is dropped
from both.
"""

import json
import math
from dataclasses import dataclass

from .curvature import scalar_curvature_batch
from .polytope import facet_lattice_volume
from .quadrature import integrate

DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    abs_error: float
    quadrature_tol: float

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_error": self.abs_error,
            "normalization": "no 2pi factors",
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def volume_derivative_sum(p):
    """Exact sum over facets of dv/ds_i (the lattice facet volumes)."""
    return math.fsum(facet_lattice_volume(p, i) for i in range(p.nfacets))


def total_curvature(p, pot, tol=DEFAULT_TOL, max_levels=None):
    """Integral of the scalar curvature of ``pot`` over the polytope."""
    return integrate(
        p,
        lambda pts: scalar_curvature_batch(pot, pts),
        tol,
        max_levels=max_levels,
        vectorized=True,
    )


def check_identity(p, pot, tol=DEFAULT_TOL, max_levels=None):
    """Evaluate both sides of the identity and their discrepancy."""
    lhs = volume_derivative_sum(p)
    rhs = total_curvature(p, pot, tol=tol, max_levels=max_levels)
    return IdentityReport(
        lhs=lhs, rhs=rhs, abs_error=abs(lhs - rhs), quadrature_tol=tol
    )
