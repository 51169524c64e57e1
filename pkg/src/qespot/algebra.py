"""so(2,1) potential-algebra data: the (F, G) solution classes and the
potential family they generate.

The pair (F, G) realizes the algebra when

    F' = 1 - F**2,    G' = -F * G,

and the basis functions of an irreducible representation with Casimir
eigenvalue k(k-1) then solve a Schrodinger equation with potential

    V_m = (1/4 - m**2) F' + 2 m G' + G**2

at the common energy -(k - 1/2)**2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._array import as_array, unwrap
from .errors import DomainError, ParameterError

#: Smallest u accepted for class III, where coth and cosech are singular at 0.
CLASS_III_MIN_U = 1e-12


class AlgebraClass(Enum):
    """The three families of (F, G), class II split by the sign of F."""

    I = "I"
    II_PLUS = "II+"
    II_MINUS = "II-"
    III = "III"

    @classmethod
    def parse(cls, label: str) -> "AlgebraClass":
        key = label.strip().upper().replace("_", "").replace("CLASS", "")
        aliases = {
            "I": cls.I,
            "1": cls.I,
            "II": cls.II_PLUS,
            "II+": cls.II_PLUS,
            "IIPLUS": cls.II_PLUS,
            "2": cls.II_PLUS,
            "II-": cls.II_MINUS,
            "IIMINUS": cls.II_MINUS,
            "III": cls.III,
            "3": cls.III,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown algebra class {label!r}") from None

    @property
    def f_sign(self) -> int:
        """Sign of F for class II; 0 for the other classes."""
        return {AlgebraClass.II_PLUS: 1, AlgebraClass.II_MINUS: -1}.get(self, 0)


@dataclass(frozen=True)
class AlgebraParams:
    """Representation label k, coupling b and excitation n (weight m = k + n)."""

    k: float
    b: float
    n: int = 0

    def __post_init__(self):
        if not self.k >= 1:
            raise ParameterError(f"representation label k must be >= 1, got {self.k}")
        if not self.b >= 0:
            raise ParameterError(f"coupling b must be nonnegative, got {self.b}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ParameterError(f"n must be a nonnegative integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def m(self):
        return self.k + self.n


def _check_domain(cls: AlgebraClass, u):
    if cls is AlgebraClass.III and np.any(u < CLASS_III_MIN_U):
        raise DomainError(f"class III requires u >= {CLASS_III_MIN_U:g}")
    if not np.all(np.isfinite(u)):
        raise DomainError("u must be finite")


def fg_pair(cls: AlgebraClass, b, u):
    """Return ``(F(u), G(u))`` for the given solution class."""
    u = as_array(u)
    _check_domain(cls, u)
    if cls is AlgebraClass.I:
        F, G = np.tanh(u), b / np.cosh(u)
    elif cls is AlgebraClass.III:
        F, G = 1.0 / np.tanh(u), b / np.sinh(u)
    else:
        s = cls.f_sign
        F, G = np.full_like(u, float(s)), b * np.exp(-s * u)
    return unwrap(F), unwrap(G)


def fg_derivatives(cls: AlgebraClass, b, u):
    """Analytic ``(F'(u), G'(u))`` of the closed forms."""
    u = as_array(u)
    _check_domain(cls, u)
    if cls is AlgebraClass.I:
        sech = 1.0 / np.cosh(u)
        dF, dG = sech**2, -b * np.tanh(u) * sech
    elif cls is AlgebraClass.III:
        csch = 1.0 / np.sinh(u)
        dF, dG = -(csch**2), -b * csch / np.tanh(u)
    else:
        s = cls.f_sign
        dF, dG = np.zeros_like(u), -s * b * np.exp(-s * u)
    return unwrap(dF), unwrap(dG)


def check_fg_ode(cls: AlgebraClass, b, grid) -> float:
    """Max residual of F' = 1 - F^2 and G' = -F G over ``grid``."""
    F, G = (np.asarray(v) for v in fg_pair(cls, b, grid))
    dF, dG = (np.asarray(v) for v in fg_derivatives(cls, b, grid))
    r1 = np.abs(dF - (1.0 - F**2))
    r2 = np.abs(dG + F * G)
    return float(max(np.max(r1), np.max(r2)))


def potential_vm(cls: AlgebraClass, b, m, u):
    """V_m(u) = (1/4 - m^2) F' + 2 m G' + G^2."""
    _, G = fg_pair(cls, b, u)
    dF, dG = fg_derivatives(cls, b, u)
    return unwrap((0.25 - m * m) * np.asarray(dF) + 2 * m * np.asarray(dG) + np.asarray(G) ** 2)


def algebra_energy(k):
    """Energy -(k - 1/2)^2 shared by every member of the representation."""
    if not k >= 1:
        raise ParameterError(f"representation label k must be >= 1, got {k}")
    return -((k - 0.5) ** 2)
