"""Half-line to half-line change of variables and the E = 0 potential builder.

With x = f(u) = 1/(e^u - 1) and psi(x) = |f'(u)|^(1/2) chi(u), an
eigenfunction chi of the algebra potential V_m(u) at energy E_T maps to a
solution of -psi'' + V psi = 0 where

    (f')^2 V(f(u)) = (1/4 - m^2)(1 - F^2) - 2 m F G + G^2 - E_T + S/2

and S is the Schwarzian derivative of f, identically -1/2.
"""

from __future__ import annotations

import numpy as np

from ._array import as_array, unwrap
from .algebra import AlgebraClass, AlgebraParams, fg_pair
from .errors import DomainError

#: Schwarzian derivative of f(u) = 1/(e^u - 1); constant in u.
SCHWARZIAN_OF_MAP = -0.5

# Beyond this (f')^2 ~ e^(-2u) underflows long before x does.
_MAX_PIPELINE_U = 300.0


def map_u_to_x(u):
    """x = 1/(e^u - 1) for u > 0."""
    u = as_array(u)
    if np.any(~(u > 0)):
        raise DomainError("map_u_to_x requires u > 0")
    return unwrap(1.0 / np.expm1(u))


def map_x_to_u(x):
    """u = ln(1 + 1/x) for x > 0."""
    x = as_array(x)
    if np.any(~(x > 0)):
        raise DomainError("map_x_to_u requires x > 0")
    return unwrap(np.log1p(1.0 / x))


def map_derivatives(u, dtype=float):
    """Analytic (f', f'', f''') of f(u) = 1/(e^u - 1).

    ``dtype=np.longdouble`` evaluates in extended precision.
    """
    u = np.asarray(u, dtype=dtype)
    if np.any(~(u > 0)):
        raise DomainError("map derivatives require u > 0")
    w = np.exp(u)
    d = np.expm1(u)
    d1 = -w / d**2
    d2 = w * (w + 1) / d**3
    d3 = -w * (w * w + 4 * w + 1) / d**4
    return d1, d2, d3


def schwarzian(d1, d2, d3):
    """Schwarzian derivative f'''/f' - 3/2 (f''/f')^2 from the first three derivatives."""
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarzian_of_map(u):
    """Schwarzian of f evaluated from its raw derivatives.

    The two terms each grow like 1/u^2 as u -> 0 and cancel to -1/2, so the
    derivatives are formed in extended precision to keep the result within
    1e-9 down to u = 1e-4.
    """
    d1, d2, d3 = map_derivatives(u, dtype=np.longdouble)
    return unwrap(np.asarray(schwarzian(d1, d2, d3), dtype=float))


def build_qes_potential(cls: AlgebraClass, params: AlgebraParams, energy, x):
    """V(x) at E = 0 assembled in u-space from the algebra data.

    ``energy`` is the algebra energy E_T, normally ``algebra_energy(params.k)``.
    """
    u = as_array(map_x_to_u(x))
    if np.any(u > _MAX_PIPELINE_U):
        raise DomainError(f"x too small for the u-space pipeline (u > {_MAX_PIPELINE_U:g})")
    m = params.m
    F, G = (np.asarray(v) for v in fg_pair(cls, params.b, u))
    lhs = (0.25 - m * m) * (1.0 - F**2) - 2 * m * F * G + G**2 - energy
    d1, _, _ = map_derivatives(u)
    return unwrap((lhs + 0.5 * SCHWARZIAN_OF_MAP) / d1**2)
