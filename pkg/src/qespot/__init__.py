"""Quasi-exactly solvable rational potentials with zero-energy states,
built from the so(2,1) potential algebra."""

__version__ = "0.1.0"

from .algebra import (
    AlgebraClass,
    AlgebraParams,
    algebra_energy,
    check_fg_ode,
    fg_pair,
    potential_vm,
)
from .errors import (
    DomainError,
    InconsistentParametersError,
    InsufficientRangeError,
    ParameterError,
    QESError,
)
from .potentials import (
    PotentialType,
    RationalParams,
    ZeroSet,
    algebra_from_params,
    classify,
    convergence_condition,
    eval_potential,
    params_from_algebra,
    zeros_bruteforce,
)
from .transform import (
    SCHWARZIAN_OF_MAP,
    build_qes_potential,
    map_u_to_x,
    map_x_to_u,
    schwarzian_of_map,
)
from .verify import VerificationReport, full_pipeline_check, residual_report, tail_exponent
from .wavefn import (
    NormResult,
    WaveSample,
    is_normalizable,
    jacobi_poly,
    norm_closed_form,
    norm_quadrature,
    psi0,
    psi_n,
)
