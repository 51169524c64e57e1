"""Zero-energy wave functions and their normalization.

All wave functions are unnormalized and carry unit prefactor in the form
written in each docstring. Class III at weight m = k + n:

    psi_n(x) = [x(x+1)]^m / (2x+1)^(m+b-1/2) * P_n^(b-m, -b-m)(z),
    z = (2x^2+2x+1) / (2x(x+1)) = cosh u(x).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate

from ._array import as_array, unwrap
from .algebra import AlgebraClass, fg_pair
from .errors import DomainError, ParameterError
from .transform import map_x_to_u

#: Phase forms tried for the class I ground state; see ``class_i_phase``.
CLASS_I_PHASES = ("arctan", "artanh")

#: Phase adopted for class I after the residual check in ``verify``.
CLASS_I_PHASE = "arctan"


@dataclass(frozen=True)
class WaveSample:
    x: float
    psi: float


@dataclass(frozen=True)
class NormResult:
    convergent: bool
    value: Optional[float]
    method: str
    tail_exponent: float


def _check_wave_params(k, b):
    if not k >= 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not b > 0:
        raise ParameterError(f"b must be > 0, got {b}")


def _check_x(x):
    x = as_array(x)
    if np.any(~(x > 0)):
        raise DomainError("wave functions are defined for x > 0")
    return x


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n}")
    return int(n)


# --- Jacobi polynomials ---------------------------------------------------------


def _rising(a, count):
    out = np.longdouble(1.0)
    for i in range(count):
        out *= a + i
    return out


def jacobi_coefficients(n: int, alpha, beta):
    """Coefficients c_s of P_n^(alpha, beta) as a polynomial in t = (z-1)/2.

    c_s = (alpha+s+1)_{n-s} (n+alpha+beta+1)_s / (s! (n-s)!), which stays
    finite for any real alpha, beta including negative integers.
    """
    return [float(c) for c in _coefficients_ld(_check_n(n), alpha, beta)]


def _coefficients_ld(n, alpha, beta):
    alpha, beta = np.longdouble(alpha), np.longdouble(beta)
    return [
        _rising(alpha + s + 1, n - s) * _rising(n + alpha + beta + 1, s)
        / np.longdouble(math.factorial(s) * math.factorial(n - s))
        for s in range(n + 1)
    ]


def _jacobi_in_t(n, alpha, beta, t):
    # extended precision: the terms alternate in sign and cancel near roots
    t = as_array(t).astype(np.longdouble)
    out = np.zeros_like(t)
    for c in reversed(_coefficients_ld(_check_n(n), alpha, beta)):
        out = out * t + c
    return out.astype(float)


def jacobi_poly(n: int, alpha, beta, z):
    """P_n^(alpha, beta)(z) from the explicit finite sum in (z-1)/2."""
    t = (as_array(z) - 1.0) / 2.0
    return unwrap(_jacobi_in_t(n, alpha, beta, t))


def jacobi_recurrence(n: int, alpha, beta, z):
    """P_n^(alpha, beta)(z) from the three-term recurrence in n.

    Used as an independent check of ``jacobi_poly``. The recurrence divides by
    2j (j + alpha + beta)(2j + alpha + beta - 2), which vanishes for some
    integer parameter combinations; those raise ParameterError. Runs in
    extended precision because the recurrence cancels when P_n is small
    next to the intermediate P_j.
    """
    n = _check_n(n)
    z = as_array(z).astype(np.longdouble)
    a, b = np.longdouble(alpha), np.longdouble(beta)
    p_prev = np.ones_like(z)
    if n == 0:
        return unwrap(p_prev.astype(float))
    p = 0.5 * (a - b + (a + b + 2) * z)
    ab = a + b
    for j in range(2, n + 1):
        a1 = 2 * j * (j + ab) * (2 * j + ab - 2)
        if a1 == 0:
            raise ParameterError("Jacobi recurrence is singular for these parameters")
        a2 = (2 * j + ab - 1) * (a * a - b * b)
        a3 = (2 * j + ab - 2) * (2 * j + ab - 1) * (2 * j + ab)
        a4 = 2 * (j + a - 1) * (j + b - 1) * (2 * j + ab)
        p, p_prev = ((a2 + a3 * z) * p - a4 * p_prev) / a1, p
    return unwrap(p.astype(float))


# --- wave functions -------------------------------------------------------------


def class_i_phase(u, b, form: str = CLASS_I_PHASE):
    """Exponential factor h(u) of the class I ground state.

    ``"arctan"`` gives exp(b arctan(sinh u)); ``"artanh"`` gives
    exp(b artanh(sinh u)), which is NaN wherever sinh u > 1.
    """
    s = np.sinh(as_array(u))
    if form == "arctan":
        return unwrap(np.exp(b * np.arctan(s)))
    if form == "artanh":
        with np.errstate(invalid="ignore", divide="ignore"):
            return unwrap(np.exp(b * np.arctanh(s)))
    raise ParameterError(f"unknown class I phase form {form!r}")


def psi0(cls: AlgebraClass, k, b, x, class_i_form: str = CLASS_I_PHASE):
    """Zero-energy wave function at m = k.

    Class III uses [x(x+1)]^k / (2x+1)^(k+b-1/2). Classes I and II use
    sqrt(x(x+1)) G(u)^(k-1/2) h(u) with u = ln(1 + 1/x), where
    h = exp(b arctan sinh u) for class I and h = exp(-F G) for class II.
    """
    _check_wave_params(k, b)
    x = _check_x(x)
    if cls is AlgebraClass.III:
        y = x * (x + 1)
        return unwrap(np.exp(k * np.log(y) - (k + b - 0.5) * np.log(2 * x + 1)))
    u = np.asarray(map_x_to_u(x))
    F, G = (np.asarray(v) for v in fg_pair(cls, b, u))
    amp = np.sqrt(x * (x + 1)) * G ** (k - 0.5)
    if cls is AlgebraClass.I:
        h = np.asarray(class_i_phase(u, b, class_i_form))
    else:
        h = np.exp(-F * G)
    return unwrap(amp * h)


def psi_n(k, b, n: int, x):
    """Class III zero-energy wave function at weight m = k + n."""
    _check_wave_params(k, b)
    n = _check_n(n)
    x = _check_x(x)
    m = k + n
    y = x * (x + 1)
    prefactor = np.exp(m * np.log(y) - (m + b - 0.5) * np.log(2 * x + 1))
    # (z - 1)/2 = 1/(4 x (x+1)), formed directly to keep precision at large x
    poly = _jacobi_in_t(n, b - m, -b - m, 1.0 / (4 * y))
    return unwrap(prefactor * poly)


def wavefunction(cls: AlgebraClass, k, b, n: int, x):
    """Dispatch to ``psi_n`` for class III and ``psi0`` otherwise."""
    if cls is AlgebraClass.III:
        return psi_n(k, b, n, x)
    if _check_n(n) != 0:
        raise ParameterError("excited zero-energy states are only known for class III")
    return psi0(cls, k, b, x)


# --- normalization --------------------------------------------------------------


def is_normalizable(k, b) -> bool:
    """Class III ground state at m = k is square integrable iff b > k + 1."""
    _check_wave_params(k, b)
    return b > k + 1


def tail_exponent_analytic(cls: AlgebraClass, k, b, n: int = 0) -> float:
    """Power p with |psi(x)|^2 ~ x^p as x -> inf.

    For class III the Jacobi factor tends to its lowest nonvanishing
    coefficient c_j t^j with t ~ 1/(4x^2), lowering the power by 4j.
    Classes I and II grow like x at infinity.
    """
    _check_wave_params(k, b)
    n = _check_n(n)
    if cls is not AlgebraClass.III:
        return 2.0
    m = k + n
    coeffs = jacobi_coefficients(n, b - m, -b - m)
    scale = max(abs(c) for c in coeffs)
    j = next(i for i, c in enumerate(coeffs) if abs(c) > 1e-12 * scale)
    return float(2 * (m - b) + 1 - 4 * j)


def norm_closed_form(k, b, exact: bool = False):
    """Integral of |psi0|^2 over (0, inf) for class III with 2k a positive integer.

        2^(-4k-2) * sum_{j=0}^{2k} (-1)^j C(2k, j) / (b + j - k - 1)

    With ``exact=True`` the arithmetic is carried out in Fractions.
    """
    two_k = 2 * k
    if int(two_k) != two_k or two_k < 2:
        raise ParameterError(f"closed form needs 2k a positive integer >= 2, got k={k}")
    if not b > k + 1:
        raise ParameterError(f"integral diverges for b <= k + 1 (k={k}, b={b})")
    two_k = int(two_k)
    if exact:
        k, b = Fraction(k), Fraction(b)
        total = sum(Fraction((-1) ** j * math.comb(two_k, j)) / (b + j - k - 1) for j in range(two_k + 1))
        return total / 2 ** (2 * two_k + 2)
    total = math.fsum((-1) ** j * math.comb(two_k, j) / (b + j - k - 1) for j in range(two_k + 1))
    return total * 2.0 ** (-2 * two_k - 2)


def norm_quadrature(cls: AlgebraClass, k, b, n: int = 0) -> NormResult:
    """Integral of |psi|^2 over (0, inf) by adaptive quadrature on t = x/(1+x).

    Divergence is decided from the analytic tail exponent, never from the
    quadrature itself. Class II- also blows up as x -> 0 and is divergent.
    """
    p = tail_exponent_analytic(cls, k, b, n)
    if p >= -1 or cls is not AlgebraClass.III:
        return NormResult(False, None, "quadrature", p)

    def integrand(t):
        if t <= 0.0 or t >= 1.0:
            return 0.0
        x = t / (1.0 - t)
        return wavefunction(cls, k, b, n, x) ** 2 / (1.0 - t) ** 2

    with warnings.catch_warnings():
        # near the b = k + 1 boundary the (1-t) endpoint singularity is almost
        # non-integrable and QUADPACK warns; the result is still accurate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=10_000)
    return NormResult(True, value, "quadrature", p)
