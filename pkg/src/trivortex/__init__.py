"""Planar three-point-vortex dynamics and its reduction to the shape sphere."""

from .core import (
    ConservedSet,
    ExtendedPoint,
    VortexConfig,
    VortexStrengths,
    conserved_quantities,
    heron_residual,
    shape_map,
    validate_strengths,
)
from .errors import (
    BadParameter,
    CollisionConfiguration,
    CollisionPoint,
    DegenerateMass,
    DegenerateSubspace,
    DomainError,
    MismatchedSetup,
    NegativeCoefficient,
    NotAdmissible,
    NumericalError,
    PoleSingularity,
    SingularPoint,
    StepFailure,
    TripleCollision,
    ValidationError,
    VortexError,
    ZeroStrength,
    ZeroVector,
)
from .full_dynamics import (
    IntegratorOptions,
    ScalarField,
    Termination,
    Trajectory,
    canonical_bracket,
    integrate_full,
    vortex_rhs,
    write_trajectory_csv,
)
from .portrait import (
    Chart,
    ChartPoint,
    PortraitGrid,
    binary_collision_points,
    chart_to_pauli,
    extract_contours,
    pauli_to_chart,
    sample_portrait,
    write_grid_csv,
    write_portrait_svg,
)
from .reduced_dynamics import (
    ReducedState,
    ReducedTrajectory,
    compare_flows,
    find_relative_equilibria,
    integrate_reduced,
    reduced_hamiltonian,
    reduced_rhs,
    write_reduced_csv,
)
from .shape_algebra import (
    Covector,
    PauliBasis,
    PauliCoords,
    bracket_V,
    build_A_matrix,
    casimirs,
    from_pauli_coords,
    make_pauli,
    q_matrix,
    s_gamma_basis,
    to_pauli_coords,
    verify_pauli,
)
from .transforms import (
    ActionAngleState,
    JBHState,
    MixedState,
    check_symplectic,
    mixed_to_pauli,
    t1_forward,
    t1_inverse,
    t2_forward,
    t2_inverse,
    t3_forward,
    t3_inverse,
)

__version__ = "0.1.0"
