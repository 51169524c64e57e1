"""Closed rational forms of the E = 0 potentials and the zero/sign table.

Class III,

    V(x) = A/(2x+1)^2 - B/(x(x+1)) + C/(x^2 (x+1)^2),

is the family whose zeros and sign are tabulated. With y = x(x+1) the
numerator of V becomes the quadratic (A - 4B) y^2 + (4C - B) y + C, which is
what the analytic zeros below are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ._array import as_array, unwrap
from .algebra import AlgebraClass, AlgebraParams
from .errors import DomainError, InconsistentParametersError, ParameterError

#: Relative tolerance for the equality rows A = 4B and A = (B + 4C)^2 / 4C.
EQ_RTOL = 1e-9


@dataclass(frozen=True)
class RationalParams:
    A: float
    B: float
    C: float

    def __post_init__(self):
        for name in ("A", "B", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.B < 0 or self.C < 0:
            raise ParameterError(f"B and C must be nonnegative, got B={self.B}, C={self.C}")


class PotentialType(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"
    IX = "IX"
    X = "X"
    XI = "XI"
    XII = "XII"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class ZeroSet:
    """Analytic zeros of a class III potential and its sign between them.

    ``sign_pattern[i]`` is the sign of V on the i-th interval of (0, inf) cut
    at ``zeros``; a double zero (type IV) separates two intervals of equal
    sign. ``x_plus``/``x_minus`` hold X_+/X_- and are None when Delta < 0.
    """

    zeros: tuple = ()
    delta: float = 0.0
    x_plus: Optional[float] = None
    x_minus: Optional[float] = None
    y: float = 0.0
    sign_pattern: tuple = field(default_factory=tuple)


def potential_terms(cls: AlgebraClass, params: RationalParams, x):
    """The three additive terms of the closed rational form, in (A, B, C) order.

    Class II- is the mirror image of the printed class II form: with
    F = -1 and G = b e^u one gets A/x^4 + B/(x^3 (x+1)) + C/(x^2 (x+1)^2).
    """
    x = as_array(x)
    if np.any(~(x > 0)):
        raise DomainError("potentials are defined for x > 0")
    A, B, C = params.A, params.B, params.C
    y = x * (x + 1)
    centrifugal = C / y**2
    if cls is AlgebraClass.III:
        return A / (2 * x + 1) ** 2, -B / y, centrifugal
    if cls is AlgebraClass.I:
        q = 2 * x * x + 2 * x + 1
        return -A / q**2, -B * (2 * x + 1) / (y * q**2), centrifugal
    if cls is AlgebraClass.II_PLUS:
        return A / (x + 1) ** 4, -B / (x * (x + 1) ** 3), centrifugal
    return A / x**4, B / (x**3 * (x + 1)), centrifugal


def eval_potential(cls: AlgebraClass, params: RationalParams, x):
    """Closed rational form of the E = 0 potential for class ``cls``."""
    a, b, c = potential_terms(cls, params, x)
    return unwrap(a + b + c)


def params_from_algebra(cls: AlgebraClass, ap: AlgebraParams) -> RationalParams:
    """(A, B, C) generated by the algebra data; C = k(k-1) for every class.

    Plain arithmetic throughout, so integer or Fraction inputs give exact results.
    """
    k, b, m = ap.k, ap.b, ap.m
    if cls is AlgebraClass.I:
        A, B = 4 * (m * m - b * b) - 1, 4 * m * b
    elif cls is AlgebraClass.III:
        A, B = 4 * (m + b) ** 2 - 1, 4 * m * b
    else:
        A, B = b * b, 2 * m * b
    return RationalParams(A, B, k * (k - 1))


def algebra_from_params(params: RationalParams, n: int = 0) -> AlgebraParams:
    """Invert ``params_from_algebra`` for class III with weight m = k + n."""
    if int(n) != n or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n}")
    if not params.B > 0:
        raise ParameterError("class III inversion needs B > 0")
    root = math.sqrt(1 + 4 * params.C)
    k = 0.5 * (1 + root)
    b = params.B / (4 * n + 2 + 2 * root)
    ap = AlgebraParams(k, b, int(n))
    expected = params_from_algebra(AlgebraClass.III, ap).A
    if abs(expected - params.A) > 1e-9 * max(abs(expected), abs(params.A), 1.0):
        raise InconsistentParametersError(
            f"A={params.A} is inconsistent with B={params.B}, C={params.C}, n={n}; "
            f"these fix A={expected}"
        )
    return ap


def convergence_condition(params: RationalParams) -> bool:
    """Bound-state condition B > 4(1 + C + sqrt(1 + 4C)), i.e. b > k + 1 at n = 0."""
    return params.B > 4 * (1 + params.C + math.sqrt(1 + 4 * params.C))


# --- zero-pattern classification ---------------------------------------------


def _eq(a, b):
    return math.isclose(a, b, rel_tol=EQ_RTOL, abs_tol=0.0) or a == b


def _lt(a, b):
    return a < b and not _eq(a, b)


def _le(a, b):
    return a < b or _eq(a, b)


def _x_from_ratio(r):
    """1/2 (-1 + sqrt(r)) for a ratio r >= 1."""
    return 0.5 * (math.sqrt(r) - 1)


def _x_from_y(y):
    # Same as 1/2(-1 + sqrt(1 + 4y)) without the cancellation for small y.
    return 2 * y / (1 + math.sqrt(1 + 4 * y))


def _quadratic_roots(p2, p1, p0):
    """Real roots of p2 y^2 + p1 y + p0 (p2 != 0), cancellation-free."""
    disc = p1 * p1 - 4 * p2 * p0
    if disc < 0:
        return ()
    s = math.sqrt(disc)
    q = -0.5 * (p1 + math.copysign(s, p1)) if p1 != 0 else 0.5 * s
    if q == 0:
        return (0.0,)
    return tuple(sorted({q / p2, p0 / q}))


def classify(params: RationalParams):
    """Zero-pattern type (I to XII) of the class III potential plus its zeros and sign pattern."""
    A, B, C = params.A, params.B, params.C
    Y = A - 4 * B
    delta = (B + 4 * C) ** 2 - 4 * A * C
    if delta >= 0:
        x_plus = A - 2 * B - 8 * C + 2 * math.sqrt(delta)
        x_minus = A - 2 * B - 8 * C - 2 * math.sqrt(delta)
    else:
        x_plus = x_minus = None
    table = dict(
        delta=float(delta),
        x_plus=None if x_plus is None else float(x_plus),
        x_minus=None if x_minus is None else float(x_minus),
        y=float(Y),
    )
    crit = (B + 4 * C) ** 2 / (4 * C) if C != 0 else math.inf

    def positive_roots():
        # zeros in y > 0 of the numerator quadratic, mapped back to x
        return [_x_from_y(r) for r in _quadratic_roots(Y, 4 * C - B, C) if r > 0]

    if C != 0 and _lt(16 * C, 4 * B) and _lt(4 * B, A) and _lt(A, crit):
        zeros = positive_roots()
        if len(zeros) == 2:
            return PotentialType.I, ZeroSet(tuple(zeros), sign_pattern=(1, -1, 1), **table)
    if C != 0 and _lt(16 * C, A) and _eq(A, 4 * B):
        x0 = _x_from_y(C / (B - 4 * C))
        return PotentialType.II, ZeroSet((x0,), sign_pattern=(1, -1), **table)
    if C != 0 and _lt(A, min(4 * B, crit)):
        zeros = positive_roots()
        if len(zeros) == 1:
            return PotentialType.III, ZeroSet(tuple(zeros), sign_pattern=(1, -1), **table)
    if C != 0 and _lt(4 * C, B) and _eq(A, crit):
        x0 = _x_from_y(2 * C / (B - 4 * C))
        return PotentialType.IV, ZeroSet((x0,), sign_pattern=(1, 1), **table)
    if C == 0 and B != 0 and _lt(4 * B, A):
        x0 = _x_from_y(B / Y)
        return PotentialType.V, ZeroSet((x0,), sign_pattern=(-1, 1), **table)
    if C != 0 and _eq(A, 4 * B) and _le(B, 4 * C):
        return PotentialType.VI, ZeroSet(sign_pattern=(1,), **table)
    if C != 0 and not _eq(A, 4 * B) and _lt(crit, A):
        return PotentialType.VII, ZeroSet(sign_pattern=(1,), **table)
    if C != 0 and _lt(B, 4 * C) and _eq(A, crit):
        return PotentialType.VIII, ZeroSet(sign_pattern=(1,), **table)
    if C != 0 and _lt(B, 4 * C) and _lt(4 * B, A) and _lt(A, crit):
        return PotentialType.IX, ZeroSet(sign_pattern=(1,), **table)
    if C == 0 and B != 0 and _le(A, 4 * B):
        return PotentialType.X, ZeroSet(sign_pattern=(-1,), **table)
    if B == 0 and C == 0 and A > 0:
        return PotentialType.XI, ZeroSet(sign_pattern=(1,), **table)
    if B == 0 and C == 0 and A < 0:
        return PotentialType.XII, ZeroSet(sign_pattern=(-1,), **table)
    return PotentialType.UNCLASSIFIED, ZeroSet(**table)


def tabulated_zeros(ptype: PotentialType, params: RationalParams):
    """Zeros written exactly as the table prints them (no cancellation guard)."""
    A, B, C = params.A, params.B, params.C
    _, zs = classify(params)
    if ptype is PotentialType.I:
        return (_x_from_ratio(zs.x_minus / zs.y), _x_from_ratio(zs.x_plus / zs.y))
    if ptype is PotentialType.III:
        return (_x_from_ratio(zs.x_minus / zs.y),)
    if ptype is PotentialType.II:
        return (_x_from_ratio(B / (B - 4 * C)),)
    if ptype is PotentialType.IV:
        return (_x_from_ratio((B + 4 * C) / (B - 4 * C)),)
    if ptype is PotentialType.V:
        return (_x_from_ratio(A / (A - 4 * B)),)
    return ()


# --- brute-force oracle -------------------------------------------------------


def _bisect(fn, lo, hi, rtol=1e-12):
    flo = fn(lo)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zeros_bruteforce(cls: AlgebraClass, params: RationalParams, xmin=1e-8, xmax=1e6, points=100_000):
    """Zeros of ``eval_potential`` found by scanning a log grid for sign changes.

    Each bracket is refined by bisection to 1e-12 relative. Zeros of even
    multiplicity produce no sign change and are not reported.
    """
    grid = np.geomspace(xmin, xmax, points)
    with np.errstate(all="ignore"):
        v = np.asarray(eval_potential(cls, params, grid))
    s = np.sign(v)
    zeros = []
    exact = np.flatnonzero(s == 0)
    zeros.extend(float(z) for z in grid[exact])
    idx = np.flatnonzero(s[:-1] * s[1:] < 0)

    def fn(t):
        return eval_potential(cls, params, t)

    for i in idx:
        zeros.append(float(_bisect(fn, grid[i], grid[i + 1])))
    return sorted(zeros)
