"""Complete solutions of X W W^* W X = W^* and pseudoinverse identities."""

from .linalg import (
    SvdFactorization,
    TolerancePolicy,
    hermitian_eig,
    null_projector,
    penrose_check,
    pinv,
    rank,
    svd,
)
from .riccati import (
    SingularClusters,
    SolutionParams,
    canonical_solution,
    cluster_singular_values,
    construct_solution,
    decompose_solution,
    enumerate_sign_solutions,
    family_dimension,
    random_involution,
)
from .identities import riccati_residual, verify_solution

__version__ = "0.1.0"

__all__ = [
    "SvdFactorization",
    "TolerancePolicy",
    "hermitian_eig",
    "null_projector",
    "penrose_check",
    "pinv",
    "rank",
    "svd",
    "SingularClusters",
    "SolutionParams",
    "canonical_solution",
    "cluster_singular_values",
    "construct_solution",
    "decompose_solution",
    "enumerate_sign_solutions",
    "family_dimension",
    "random_involution",
    "riccati_residual",
    "verify_solution",
]
