"""The one-parameter family of extremal metrics on the blown-up plane.

The moment polytope is the trapezoid l1 = y1, l2 = y2, l3 = 1 - y1 - y2,
l4 = y1 + y2 - a with blow-up parameter 0 < a < 1.  Adding the radial
profile "calabi" in the direction (1, 1) to the canonical potential yields
Calabi's extremal metric, whose scalar curvature is the affine function
R = 12 c1 psi + 6 c2 of psi = y1 + y2 with

    c1 = 2a / ((1-a)(1+4a+a^2)),   c2 = (1-3a^2) / ((1-a)(1+4a+a^2)).

The module exposes the polytope, the constants, the profile jets, the
predicted curvature and the monotonicity check dt/dpsi of the underlying
one-variable construction.
"""

from dataclasses import dataclass

from .polytope import DelzantPolytope
from .potential import Perturbation, SymplecticPotential
from .profiles import calabi_f2, calabi_f3, calabi_f4


def _check_parameter(a):
    a = float(a)
    if not 0.0 < a < 1.0:
        raise ValueError(f"blow-up parameter must lie strictly in (0, 1), got {a}")
    return a


@dataclass(frozen=True)
class CalabiFamily:
    """Blow-up parameter a in (0, 1); a -> 0 recovers the projective plane."""

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", _check_parameter(self.a))

    def polytope(self):
        return calabi_polytope(self.a)

    def potential(self):
        return calabi_potential(self.a)

    def constants(self):
        return calabi_constants(self.a)


def calabi_polytope(a, name=None):
    """The trapezoid with facets y1 >= 0, y2 >= 0, y1+y2 <= 1, y1+y2 >= a."""
    a = _check_parameter(a)
    return DelzantPolytope(
        normals=[[1, 0], [0, 1], [-1, -1], [1, 1]],
        offsets=[0.0, 0.0, -1.0, a],
        name=name or f"trapezoid(a={a:g})",
    )


def calabi_potential(a):
    """Canonical potential of the trapezoid plus the extremal radial profile."""
    a = _check_parameter(a)
    return SymplecticPotential(
        polytope=calabi_polytope(a),
        perturbation=Perturbation.radial([1, 1], "calabi", [a]),
    )


def calabi_constants(a):
    """The constants (c1, c2) of the affine scalar curvature."""
    a = _check_parameter(a)
    den = (1.0 - a) * (1.0 + 4.0 * a + a * a)
    return 2.0 * a / den, (1.0 - 3.0 * a * a) / den


def _check_psi_open(a, psi):
    if not a < psi < 1.0:
        raise ValueError(f"psi must lie strictly in ({a}, 1), got {psi}")
    return float(psi)


def calabi_profile_jets(a, psi):
    """(f'', f''', f'''') of the profile at psi, in the half convention.

    These are the raw profile values; the potential pipeline halves them when
    assembling jets, because this profile's f enters the potential inside the
    global 1/2 factor.
    """
    a = _check_parameter(a)
    psi = _check_psi_open(a, psi)
    return (
        float(calabi_f2(psi, a)),
        float(calabi_f3(psi, a)),
        float(calabi_f4(psi, a)),
    )


def expected_scalar_curvature(a, psi):
    """Predicted scalar curvature 12 c1 psi + 6 c2 (psi in [a, 1])."""
    a = _check_parameter(a)
    psi = float(psi)
    if not a <= psi <= 1.0:
        raise ValueError(f"psi must lie in [{a}, 1], got {psi}")
    c1, c2 = calabi_constants(a)
    return 12.0 * c1 * psi + 6.0 * c2


def dt_dpsi(a, psi):
    """Derivative of the implicit coordinate t with respect to psi.

    Positive on (a, 1) and divergent at the endpoints; positivity is the
    nondegeneracy condition of the underlying construction.
    """
    a = _check_parameter(a)
    psi = _check_psi_open(a, psi)
    q = 2.0 * a * psi * psi + (1.0 + 2.0 * a - a * a) * psi + 2.0 * a * a
    return (1.0 - a) / ((psi - a) * (1.0 - psi)) + 2.0 * a * (1.0 - a) / q
