"""Differential geometry of toric Kahler metrics from moment-polytope data.

Given a Delzant polytope (halfspaces with primitive integer inward normals)
and a symplectic potential (the canonical one, optionally perturbed), the
package computes the metric Hessian and its jets, the scalar curvature, the
extremality verdict, and the polytope-side total-curvature identity.
"""

from ._kernels import backend_name as kernel_backend
from .calabi import (
    CalabiFamily,
    calabi_constants,
    calabi_polytope,
    calabi_potential,
    calabi_profile_jets,
    dt_dpsi,
    expected_scalar_curvature,
)
from .curvature import (
    AffineFit,
    InverseHessianJets,
    affine_fit,
    curvature_grid,
    inverse_hessian_jets,
    scalar_curvature,
    scalar_curvature_batch,
    scalar_curvature_logdet,
)
from .errors import (
    BoundaryPointError,
    ConvergenceError,
    PolytopeError,
    SingularHessianError,
    ToricError,
)
from .identity import IdentityReport, check_identity, total_curvature, volume_derivative_sum
from .polytope import (
    DelzantPolytope,
    Facet,
    ValidationReport,
    Vertex,
    check_delzant,
    enumerate_vertices,
    facet_lattice_volume,
    interior_grid,
    parse_polytope,
    volume,
)
from .potential import (
    ConvexityReport,
    JetTable,
    Perturbation,
    SymplecticPotential,
    canonical,
    check_convexity,
    dual_potential_value,
    hessian,
    invert_legendre,
    jets,
    l_values,
    legendre_map,
    parse_potential,
)
from .quadrature import SimplexRule, Triangulation, integrate, simplex_rule, triangulate

__version__ = "0.1.0"
