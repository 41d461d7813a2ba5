from .phase_space import (
    PhaseState,
    ScalarField,
    TangentVector,
    canonical_matrix,
    gradient,
    hamiltonian_vector_field,
    lie_bracket,
    map_jacobian,
    poisson_bracket,
    symplecticity_defect,
    vector_field_jacobian,
)
