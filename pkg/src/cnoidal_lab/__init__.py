"""Superposed cnoidal pulse trains in resonant multi-level media.

Library layout:

- ``elliptic``      Jacobi kernel (K, sn/cn/dn, the dn(2K/3) quartic)
- ``superposition`` p-term wave sums, cyclic identities, single-wave duals
- ``solvers``       medium constraints -> certified coefficient families
- ``profiles``      sampled channel profiles and residual certificates
- ``simulate``      full (zeta, tau) propagation runs
- ``cli``           command-line front end (``cnoidal-lab``)
"""

from .config import Precision, get_precision, set_precision
from .elliptic import (
    EllipticTriple,
    Modulus,
    complete_K,
    jacobi,
    jacobi_arrays,
    qtilde,
    qtilde_quartic_root,
)
from .errors import (
    CertificationError,
    CnoidalError,
    DegenerateModulus,
    DegenerateScheme,
    DivergentPeriod,
    InfeasibleFraction,
    InvalidRatio,
    ModulusError,
    NoBracket,
    OrderingViolation,
    PulseLimit,
    SchemeMismatch,
    UndefinedContrast,
    UnitOccupancy,
    UnstableRun,
    UsageError,
)
from .profiles import (
    ContrastRatios,
    Profile,
    ResidualReport,
    amplitude_contrast,
    build_profile,
    channel_values,
    default_grid,
    fundamental_period,
    ode_residual,
    probability_deviation,
    write_profile_csv,
)
from .simulate import (
    SimGrid,
    SimHistory,
    default_sim_grid,
    measured_velocity,
    shape_preservation_error,
    simulate,
)
from .solvers import (
    Family,
    FeasibilityWindow,
    ImpossibilityReport,
    MediumSpec,
    Scheme,
    SolutionCoefficients,
    Variant,
    channel_kinds,
    check_impossibility,
    feasibility_window,
    fraction_x_exchanged,
    fraction_x_of_m,
    group_velocity,
    m_of_fraction_x,
    solve_lambda_p1,
    solve_lambda_superposed,
    solve_n_pure_cnoidal,
    solve_n_superposed,
)
from .superposition import (
    LandenParams,
    SuperposedWave,
    WaveKind,
    identity_residuals,
    landen_params,
    landen_residual,
    superposed_derivative,
    superposed_eval,
)

__version__ = "0.1.0"
