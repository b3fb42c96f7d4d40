"""N-body choreographies on p-limacon curves under harmonic coupling.

Decides which (p, N) pairs admit a choreography, solves for the force
coefficients, evaluates the analytic motion, verifies it against
independent dynamics engines and conserved-quantity closed forms, and
analyzes collisions.
"""

from limachor.admissibility import (
    AdmissibilityDecision,
    admissible_span,
    divisor_blockset,
    is_admissible,
    is_admissible_restricted,
)
from limachor.coefficients import (
    CoefficientMatrix,
    CouplingVector,
    RestrictedCoupling,
    build_matrix,
    fold_matrix,
    leading_det,
    residual,
    restricted_from_mass_charge,
    solve_couplings,
    solve_restricted,
)
from limachor.kinematics import (
    ChoreoConfig,
    CurveParams,
    SystemState,
    Trajectory,
    analytic_accel,
    body_state,
    curve_point,
    eom_residual,
    initial_state,
    make_config,
    sample_trajectory,
    state_at,
    trajectory_csv,
)
from limachor.dynamics import (
    InteractionSpec,
    accel,
    build_interaction,
    rk4_integrate,
    spectral_propagate,
)
from limachor.constants import (
    ConservedReport,
    PartialSumReport,
    PotentialParts,
    closed_form_constants,
    drift_report,
    inertia_rate_max,
    measure,
    partial_sums,
    potential_from_parts,
    potential_parts,
)
from limachor.collisions import (
    CollisionReport,
    CollisionWitness,
    PairMinimum,
    collision_ratios,
    has_collision,
    min_pair_distance,
)

__version__ = "0.1.0"
