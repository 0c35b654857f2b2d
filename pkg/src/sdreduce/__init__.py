"""sdreduce: spherically symmetric reductions of the self-dual Yang-Mills and
Plebanski equations — residual verification, closed-form solution families,
the generating-function/hodograph reconstruction chain, and direct evolution
of the reduced equation."""

__version__ = "0.1.0"

from .numcore import (  # noqa: F401
    DiffEstimate,
    Grid1,
    Grid2,
    ScalarField2,
    central_diff,
    richardson,
    rk4,
    solve_scalar,
    trapezoid_integrate,
)
from .plebanski import (  # noqa: F401
    LIFT_CONSTANT,
    PlebanskiField,
    Point4C,
    fit_lift_constant,
    flux_potential,
    lift_p_to_P,
    monge_ampere_residual,
    plebanski_residual,
    reduced_plebanski_residual,
    shift_map,
    unshift_map,
)
from .sdym import (  # noqa: F401
    CommutatorCoefficient,
    LIFT_PREFACTOR,
    MatrixField2,
    MatrixField4,
    chiral_residual,
    commutator,
    fit_lift_constants,
    lift_m_to_M,
    reduced_sdym_residual,
    scale_field,
    sdym_residual,
)
from .alphachain import (  # noqa: F401
    BetaField,
    GaugePair,
    GeneratingFunction,
    ReconstructionResult,
    alpha_residual,
    alpha_system_residual,
    beta_from_alpha,
    beta_residual,
    four_x_from_generating,
    hessian_from_generating,
    hodograph_reconstruct,
    w_from_beta,
)
from .evolve import (  # noqa: F401
    EvolutionConfig,
    EvolutionResult,
    convergence_study,
    evolve,
)
