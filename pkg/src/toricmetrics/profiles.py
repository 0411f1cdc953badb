"""Radial perturbation profiles.

A radial perturbation contributes f(psi) with psi = <direction, y>.  Since
the metric only sees f through derivative orders 2-4, a profile is specified
by its second derivative g = f'' and the two further derivatives g', g'' in
closed form.  Profiles flagged ``half_convention`` are defined so that the
contribution to the potential is (1/2) f rather than f; the potential module
applies the factor.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RadialProfile:
    name: str
    n_params: int
    second_derivative: callable
    third_derivative: callable
    fourth_derivative: callable
    half_convention: bool = False


_REGISTRY = {}


def register_profile(profile):
    if profile.name in _REGISTRY:
        raise ValueError(f"profile {profile.name!r} already registered")
    _REGISTRY[profile.name] = profile


def get_profile(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown radial profile {name!r}; available: {sorted(_REGISTRY)}"
        ) from None


# -- built-in profile: the blow-up family on the trapezoid ------------------
#
# f''(psi) = 2a(1-a)/q(psi) - 1/psi with q(psi) = 2a psi^2 + (1+2a-a^2) psi
# + 2a^2.  Together with the canonical potential of the trapezoid
# {y1, y2 >= 0, a <= y1+y2 <= 1} this produces Calabi's extremal metric with
# scalar curvature 12 c1 psi + 6 c2.  The profile carries the convention
# where f sits inside the global 1/2 factor of the potential.


def _q(psi, a):
    return 2.0 * a * psi * psi + (1.0 + 2.0 * a - a * a) * psi + 2.0 * a * a


def _qp(psi, a):
    return 4.0 * a * psi + (1.0 + 2.0 * a - a * a)


def calabi_f2(psi, a):
    psi = np.asarray(psi, dtype=float)
    return 2.0 * a * (1.0 - a) / _q(psi, a) - 1.0 / psi


def calabi_f3(psi, a):
    psi = np.asarray(psi, dtype=float)
    q = _q(psi, a)
    return -2.0 * a * (1.0 - a) * _qp(psi, a) / (q * q) + 1.0 / (psi * psi)


def calabi_f4(psi, a):
    psi = np.asarray(psi, dtype=float)
    q = _q(psi, a)
    qp = _qp(psi, a)
    return (
        2.0 * a * (1.0 - a) * (2.0 * qp * qp - q * 4.0 * a) / (q * q * q)
        - 2.0 / (psi * psi * psi)
    )


register_profile(
    RadialProfile(
        name="calabi",
        n_params=1,
        second_derivative=lambda psi, params: calabi_f2(psi, params[0]),
        third_derivative=lambda psi, params: calabi_f3(psi, params[0]),
        fourth_derivative=lambda psi, params: calabi_f4(psi, params[0]),
        half_convention=True,
    )
)
