"""Numerical oracles tying the algebraic construction to the Schrodinger equation.

Nothing here reuses the formula path it checks: second derivatives come from
finite differences, asymptotics from least-squares fits, zeros from a scan.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraClass, AlgebraParams, algebra_energy
from .errors import InsufficientRangeError, ParameterError, QESError
from .potentials import (
    PotentialType,
    RationalParams,
    classify,
    eval_potential,
    params_from_algebra,
    potential_terms,
    zeros_bruteforce,
)
from .transform import build_qes_potential
from .wavefn import (
    CLASS_I_PHASES,
    NormResult,
    WaveSample,
    is_normalizable,
    norm_quadrature,
    psi0,
    tail_exponent_analytic,
    wavefunction,
)

RESIDUAL_TOL = 1e-5
PIPELINE_RTOL = 1e-9


@dataclass
class VerificationReport:
    algebra_class: str
    k: float
    b: float
    n: int
    max_relative_residual: float
    residual_grid: list
    norm: NormResult
    tail_exponent_fit: float
    classification: Optional[PotentialType]
    passed: bool
    notes: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["classification"] = None if self.classification is None else self.classification.value
        d["residual_grid"] = [[float(x), float(r)] for x, r in self.residual_grid]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), allow_nan=False, **kwargs)


def default_grid(points: int = 200) -> np.ndarray:
    """Log grid on [0.01, 100]; below 0.01 the centrifugal term amplifies round-off."""
    return np.geomspace(0.01, 100.0, points)


#: Candidate relative steps h/x for the second-derivative stencil.
REL_STEPS = (1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 3e-3)


def _five_point(fn, x, h):
    stencil = [fn(x + j * h) for j in (-2, -1, 0, 1, 2)]
    d2 = (-stencil[0] + 16 * stencil[1] - 30 * stencil[2] + 16 * stencil[3] - stencil[4]) / (12 * h * h)
    return d2, np.max(np.abs(stencil), axis=0)


def second_derivative(fn, x, rel_steps=REL_STEPS):
    """Five-point central second difference with the step picked per point.

    For each candidate h the truncation error is estimated from the h / 2h
    difference (the stencil is O(h^4)) and the round-off error from the
    stencil magnitude; the h with the smaller total wins. Returns the
    derivative and the largest |fn| on the chosen stencil.
    """
    x = np.asarray(x, dtype=float)
    eps = np.finfo(float).eps
    best_d2 = best_env = best_err = None
    for rel in rel_steps:
        h = rel * x
        d2, env = _five_point(fn, x, h)
        d2_wide, _ = _five_point(fn, x, 2 * h)
        err = np.abs(d2 - d2_wide) / 15 + 8 * eps * env / h**2
        err = np.where(np.isfinite(err), err, np.inf)
        if best_err is None:
            best_d2, best_env, best_err = d2, env, err
            continue
        better = err < best_err
        best_d2 = np.where(better, d2, best_d2)
        best_env = np.where(better, env, best_env)
        best_err = np.where(better, err, best_err)
    return best_d2, best_env


def relative_residuals(cls, params: RationalParams, psi_fn, grid, potential_shift=0.0):
    """|-psi'' + V psi| scaled by the larger of |psi''| and sum|V_i| * |psi|.

    The |psi| in the scale is the largest value on the difference stencil,
    so the ratio stays meaningful at zeros of V and at nodes of psi.
    """
    grid = np.asarray(grid, dtype=float)
    d2, envelope = second_derivative(psi_fn, grid)
    terms = potential_terms(cls, params, grid)
    v = sum(terms) + potential_shift
    v_scale = sum(np.abs(t) for t in terms) + abs(potential_shift)
    psi = psi_fn(grid)
    num = np.abs(-d2 + v * psi)
    den = np.maximum(np.abs(d2), v_scale * envelope)
    den = np.maximum(den, np.finfo(float).tiny)
    r = num / den
    return np.where(np.isfinite(r), r, np.inf)


def tail_exponent(samples: Sequence) -> float:
    """Least-squares slope of log|psi|^2 against log x.

    ``samples`` holds WaveSample objects or (x, psi) pairs spanning at least
    two decades in x.
    """
    pts = [(s.x, s.psi) if isinstance(s, WaveSample) else tuple(s) for s in samples]
    if len(pts) < 3:
        raise InsufficientRangeError("need at least three samples")
    x = np.array([p[0] for p in pts], dtype=float)
    psi = np.array([p[1] for p in pts], dtype=float)
    if np.any(x <= 0) or np.log10(x.max() / x.min()) < 2 - 1e-12:
        raise InsufficientRangeError("samples must span at least two decades of x > 0")
    keep = psi != 0
    if keep.sum() < 3:
        raise InsufficientRangeError("too few nonzero samples")
    slope, _ = np.polyfit(np.log(x[keep]), np.log(psi[keep] ** 2), 1)
    return float(slope)


def tail_samples(cls, k, b, n=0, xmin=1e3, xmax=1e5, points=60):
    xs = np.geomspace(xmin, xmax, points)
    psi = np.asarray(wavefunction(cls, k, b, n, xs))
    return [WaveSample(float(x), float(p)) for x, p in zip(xs, psi)]


def expected_type(cls: AlgebraClass, k, b, n: int) -> Optional[PotentialType]:
    """Type fixed by theory: I (k > 1) or V (k = 1) for bound class III states at m = k."""
    if cls is AlgebraClass.III and n == 0 and b > k + 1:
        return PotentialType.V if k == 1 else PotentialType.I
    return None


def _oracle_agrees(params: RationalParams, ptype, zeroset) -> tuple:
    """Compare analytic zeros and signs of a class III potential with the scan."""
    found = zeros_bruteforce(AlgebraClass.III, params)
    analytic = list(zeroset.zeros)
    if ptype is PotentialType.IV:
        # double zero: no sign change to scan for
        analytic = []
    if len(found) != len(analytic):
        return False, f"oracle found {len(found)} zeros, table gives {len(analytic)}"
    for a, z in zip(analytic, found):
        if abs(a - z) > 1e-8 * abs(a):
            return False, f"zero mismatch {a!r} vs oracle {z!r}"
    return True, ""


def residual_report(
    cls: AlgebraClass,
    k,
    b,
    n: int,
    grid=None,
    potential_shift: float = 0.0,
    tol: float = RESIDUAL_TOL,
) -> VerificationReport:
    """Check that the zero-energy wave function solves -psi'' + V psi = 0.

    Also gathers the normalization verdict, a fitted tail exponent and, for
    class III, the zero-pattern type. ``potential_shift`` adds a constant to V,
    which must make the check fail.
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size < 50 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must hold >= 50 strictly increasing points in (0, inf)")
    ap = AlgebraParams(k, b, n)
    params = params_from_algebra(cls, ap)
    notes = []

    def psi_fn(x):
        return np.asarray(wavefunction(cls, k, b, n, x), dtype=float)

    with np.errstate(over="ignore", invalid="ignore"):
        r = relative_residuals(cls, params, psi_fn, grid, potential_shift)
    max_r = float(np.max(r))
    ok_residual = max_r <= tol
    if not ok_residual:
        notes.append(f"residual {max_r:.3e} exceeds {tol:g}")

    norm = norm_quadrature(cls, k, b, n)
    fit = tail_exponent(tail_samples(cls, k, b, n))
    # a fitted exponent within 0.01 of -1 cannot decide convergence on its own
    ok_norm = abs(fit + 1) < 0.01 or norm.convergent == (fit < -1)
    if cls is AlgebraClass.III and n == 0:
        ok_norm = ok_norm and norm.convergent == is_normalizable(k, b)
    if not ok_norm:
        notes.append(f"normalization verdict {norm.convergent} disagrees with tail fit {fit:.4f}")

    classification = None
    ok_type = True
    if cls is AlgebraClass.III:
        classification, zeroset = classify(params)
        want = expected_type(cls, k, b, n)
        if want is not None and classification is not want:
            ok_type = False
            notes.append(f"type {classification.value}, expected {want.value}")
        agree, msg = _oracle_agrees(params, classification, zeroset)
        if not agree:
            ok_type = False
            notes.append(msg)

    return VerificationReport(
        algebra_class=cls.value,
        k=float(k),
        b=float(b),
        n=int(n),
        max_relative_residual=max_r if np.isfinite(max_r) else float(np.finfo(float).max),
        residual_grid=list(zip(grid.tolist(), np.minimum(r, np.finfo(float).max).tolist())),
        norm=norm,
        tail_exponent_fit=fit,
        classification=classification,
        passed=bool(ok_residual and ok_norm and ok_type),
        notes="; ".join(notes),
    )


def pipeline_agreement(cls: AlgebraClass, ap: AlgebraParams, x) -> float:
    """Max relative gap between the u-space pipeline and the closed form."""
    via_u = np.asarray(build_qes_potential(cls, ap, algebra_energy(ap.k), x))
    closed = np.asarray(eval_potential(cls, params_from_algebra(cls, ap), x))
    scale = np.maximum(np.abs(closed), np.finfo(float).tiny)
    return float(np.max(np.abs(via_u - closed) / scale))


def full_pipeline_check(k, b, n: int = 0, cls: AlgebraClass = AlgebraClass.III) -> VerificationReport:
    """End-to-end run: parameters, zero-pattern type, pipeline, residual, normalization."""
    try:
        report = residual_report(cls, k, b, n)
    except QESError as exc:
        return VerificationReport(
            cls.value, float(k), float(b), int(n), float("nan"), [], NormResult(False, None, "quadrature", float("nan")),
            float("nan"), None, False, f"error: {exc}",
        )
    notes = [report.notes] if report.notes else []
    gap = pipeline_agreement(cls, AlgebraParams(k, b, n), np.geomspace(1e-3, 1e3, 200))
    if gap > PIPELINE_RTOL:
        notes.append(f"pipeline and closed form differ by {gap:.3e}")
        report.passed = False
    p_analytic = tail_exponent_analytic(cls, k, b, n)
    if abs(report.tail_exponent_fit - p_analytic) > 0.05:
        notes.append(f"tail fit {report.tail_exponent_fit:.4f} far from analytic {p_analytic}")
        report.passed = False
    report.notes = "; ".join(notes)
    return report


def select_class_i_form(k=1.0, b=1.0, grid=None) -> list:
    """Class I phase forms whose wave function passes the residual check."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    params = params_from_algebra(AlgebraClass.I, AlgebraParams(k, b, 0))
    passing = []
    for form in CLASS_I_PHASES:
        def psi_fn(x, form=form):
            return np.asarray(psi0(AlgebraClass.I, k, b, x, class_i_form=form), dtype=float)

        with np.errstate(all="ignore"):
            r = relative_residuals(AlgebraClass.I, params, psi_fn, grid)
        if np.all(np.isfinite(r)) and r.max() <= RESIDUAL_TOL:
            passing.append(form)
    return passing
