"""Sharp ATE bounds and falsification tests for discrete instrumental-variable models."""

from .errors import (
    ArmNotNormalized,
    DimensionTooLarge,
    EmptyArm,
    InfeasibleLaw,
    IVBoundsError,
    NegativeProbability,
    NotAdmissible,
    NotAVertex,
    SchemaError,
    SeparationFailed,
    UnsupportedInstrumentArity,
)
from .expr import LinearExpr
from .lp_core import (
    DualVector,
    build_constraint_matrix,
    build_cost_vector,
    certify_extreme_ray,
    certify_vertex,
    matrix_rank,
)
from .model import (
    FullDataLaw,
    ObservedLaw,
    OutcomeSupport,
    ate_of,
    conjugate,
    marginalize,
    new_observed_law,
    random_full_data_law,
)
from .multival import (
    enumerate_multival_inequalities,
    enumerate_multival_vertices,
    multival_lower_bound,
    multival_test,
    multival_upper_bound,
)
from .oracle import oracle_ate_bounds, oracle_feasible, separating_distribution, solve_lp
from .rays import (
    FalsificationReport,
    IvInequality,
    enumerate_rays,
    falsification_test,
    necessity_fixture,
    sharp_inequalities,
    validate_axioms,
)
from .signatures import Signature, classify, count_signatures, enumerate_signatures
from .vertices import (
    BoundResult,
    ate_bounds,
    emit_bound_expressions,
    enumerate_vertices,
    lower_bound,
    vertex_from_signature,
    witness_distribution,
)

__version__ = "0.1.0"
