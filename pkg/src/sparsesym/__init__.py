"""Sparse symmetric polynomial approximation of symmetric and multiset functions."""

from .bounds import (
    KorobovParams,
    beta_d,
    finite_N_bound,
    hr_bound,
    infinite_N_bound,
    korobov_error,
    p_d,
    regime_diagnostic,
    sandwich_constants,
)
from .estimators import ClusterExpansionRegressor, PooledProductFeatures, SymmetricPolynomialRegressor
from .exceptions import DomainError, NumericalError, ResourceCapError
from .fit import convergence_study, fit_least_squares, pair_target, sample_clouds
from .indexing import IndexSet, count_exact, count_params, enumerate_ordered, partition_count
from .mset import (
    DegreeSchedule,
    MultisetModel,
    eval_cluster_expansion,
    fit_multiset,
    naive_cluster_eval,
    op_count_bound,
    schedule_degrees,
    vacuum_expansion,
)
from .one_body import BasisKind, BasisSpec, chebyshev_eval, eval_one_body
from .symbasis import (
    SymmetricModel,
    change_of_basis,
    eval_model,
    eval_product_basis,
    eval_sym_naive,
    pool,
)
from .tightbind import (
    TightBindingOracle,
    body_ordered_site_energy,
    cheb_matrix_coeffs,
    hamiltonian,
    site_energy,
    v_nN,
)

__version__ = "0.1.0"

__all__ = [
    "BasisKind",
    "BasisSpec",
    "ClusterExpansionRegressor",
    "DegreeSchedule",
    "DomainError",
    "IndexSet",
    "KorobovParams",
    "MultisetModel",
    "NumericalError",
    "PooledProductFeatures",
    "ResourceCapError",
    "SymmetricModel",
    "SymmetricPolynomialRegressor",
    "TightBindingOracle",
    "beta_d",
    "body_ordered_site_energy",
    "change_of_basis",
    "cheb_matrix_coeffs",
    "chebyshev_eval",
    "convergence_study",
    "count_exact",
    "count_params",
    "enumerate_ordered",
    "eval_cluster_expansion",
    "eval_model",
    "eval_one_body",
    "eval_product_basis",
    "eval_sym_naive",
    "finite_N_bound",
    "fit_least_squares",
    "fit_multiset",
    "hamiltonian",
    "hr_bound",
    "infinite_N_bound",
    "korobov_error",
    "naive_cluster_eval",
    "op_count_bound",
    "p_d",
    "pair_target",
    "partition_count",
    "pool",
    "regime_diagnostic",
    "sample_clouds",
    "sandwich_constants",
    "schedule_degrees",
    "site_energy",
    "v_nN",
    "vacuum_expansion",
]
