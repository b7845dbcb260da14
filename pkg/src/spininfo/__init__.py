"""Shannon information extracted by POVM measurements on two-spin product
ensembles that encode a uniformly random direction.

The package computes, for antiparallel and parallel spin pairs, the mutual
information between the encoded direction and the outcomes of an arbitrary
rank-one POVM; reduces product measurements to their (weight, opening angle)
parameters; evaluates the closed-form Jensen upper bound on the reduced
information curve; and solves the constrained maximization of both, matching
the reference values 0.557 bits (best product measurement), 0.7935 bits
(Jensen bound), and 0.8664 / 0.6232 bits (entangled tetrahedral measurements
on antiparallel / parallel pairs).
"""

from .geometry import (
    ANTIPARALLEL,
    ENSEMBLE_KINDS,
    PARALLEL,
    Rotation3,
    SphericalDirection,
    Spinor,
    TwoQubitState,
    UnitVector3,
    antipode,
    direction_from_spinor,
    rotate_direction,
    signal_state,
    spinor_from_direction,
    transition_probability,
)
from .povm import (
    CompletenessReport,
    FeasibilityReport,
    Povm,
    PovmElement,
    ProductElement,
    ReducedMeasurement,
    apply_collective_rotation,
    entanglement_measure,
    feasibility_check,
    povm_from_product_elements,
    product_directions,
    reduce_product_measurement,
    reduced_element,
    validate_completeness,
)
from .quadrature import (
    QuadratureError,
    RefinementResult,
    SphereGrid,
    build_grid,
    integrate,
    integrate_with_refinement,
)
from .information import (
    DegenerateOutcomeError,
    InfoReport,
    OutcomeTerm,
    bound_theta,
    conditional_probability,
    h_derivative,
    h_function,
    info_theta,
    info_theta_batch,
    mutual_information,
    outcome_probability,
    posterior_density,
    reduced_bound,
    reduced_info,
    reduced_outcome_probability,
)
from .optimize import (
    OBJECTIVES,
    OptimizationResult,
    hessian_diagonal,
    numeric_maximize,
    parallel_map,
    solve_stationarity,
    verify_info_h_decreasing,
)
from .catalog import (
    CATALOG_NAMES,
    TETRAHEDRON_VERTICES,
    NamedMeasurement,
    bagan_antiparallel,
    build_named,
    locc_orthogonal,
    reference_state_b,
    tarrach_vidal_parallel,
)
from .measurement_io import (
    FORMAT_VERSION,
    LoadedMeasurement,
    MeasurementFileError,
    load_measurement,
    measurement_to_dict,
    save_measurement,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # geometry
    "ANTIPARALLEL",
    "PARALLEL",
    "ENSEMBLE_KINDS",
    "SphericalDirection",
    "UnitVector3",
    "Rotation3",
    "Spinor",
    "TwoQubitState",
    "spinor_from_direction",
    "direction_from_spinor",
    "antipode",
    "transition_probability",
    "signal_state",
    "rotate_direction",
    # povm
    "PovmElement",
    "Povm",
    "ProductElement",
    "ReducedMeasurement",
    "CompletenessReport",
    "FeasibilityReport",
    "validate_completeness",
    "entanglement_measure",
    "product_directions",
    "reduce_product_measurement",
    "feasibility_check",
    "apply_collective_rotation",
    "povm_from_product_elements",
    "reduced_element",
    # quadrature
    "QuadratureError",
    "SphereGrid",
    "RefinementResult",
    "build_grid",
    "integrate",
    "integrate_with_refinement",
    # information
    "DegenerateOutcomeError",
    "OutcomeTerm",
    "InfoReport",
    "conditional_probability",
    "outcome_probability",
    "reduced_outcome_probability",
    "posterior_density",
    "mutual_information",
    "info_theta",
    "info_theta_batch",
    "bound_theta",
    "h_function",
    "h_derivative",
    "reduced_info",
    "reduced_bound",
    # optimize
    "OBJECTIVES",
    "OptimizationResult",
    "solve_stationarity",
    "hessian_diagonal",
    "numeric_maximize",
    "parallel_map",
    "verify_info_h_decreasing",
    # catalog
    "NamedMeasurement",
    "TETRAHEDRON_VERTICES",
    "CATALOG_NAMES",
    "locc_orthogonal",
    "bagan_antiparallel",
    "tarrach_vidal_parallel",
    "reference_state_b",
    "build_named",
    # measurement files
    "FORMAT_VERSION",
    "MeasurementFileError",
    "LoadedMeasurement",
    "load_measurement",
    "save_measurement",
    "measurement_to_dict",
]
