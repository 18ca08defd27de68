"""Entanglement transfer from a broadband squeezed reservoir to two cavities."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .hilbert import (  # noqa: E402
    BasisSpec,
    BasisState,
    DensityMatrix,
    ModeOperator,
    annihilation_operator,
    creation_operator,
    enumerate_basis,
    operator_adjoint,
    operator_product,
    to_tensor_grid,
)
from .reservoir import (  # noqa: E402
    OpoParams,
    SqueezingParams,
    degenerate_spectrum,
    lambda_mu,
    max_correlation,
    nondegenerate_spectrum,
    validate_physical,
)
from .liouvillian import (  # noqa: E402
    Generator,
    ReducedState,
    SystemParams,
    apply_generator,
    build_b26_generator,
    build_b26_reduced_rhs,
    build_effective_hamiltonian_part,
    build_full_generator,
    build_generator,
    build_jump_superoperator,
    reduced_rhs_A2,
)
from .dynamics import (  # noqa: E402
    TrajectoryRecord,
    check_density_matrix,
    hermitian_eigenvalues,
    propagate,
    rk4_step,
    steady_state,
)
from .observables import (  # noqa: E402
    coherences,
    entanglement_degree,
    logarithmic_negativity,
    mean_photon_numbers,
    onset_time,
    purity,
    superposition_populations,
)
