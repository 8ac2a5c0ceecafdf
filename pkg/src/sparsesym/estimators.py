"""scikit-learn compatible wrappers around the product basis and cluster expansions.

Point clouds are passed as arrays of shape ``(n_samples, N, d)``; for
``d == 1`` the trailing axis may be dropped.  Multisets of varying size are
passed as a list of ``(M_i, d)`` arrays.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DomainError
from .fit import DEFAULT_RIDGE, fit_least_squares, SampleSet
from .indexing import enumerate_ordered
from .mset import (
    eval_cluster_expansion_batch,
    fit_multiset,
    schedule_degrees,
)
from .one_body import BasisSpec, check_points
from .symbasis import check_clouds, design_matrix


def _spec(d: int, D: int) -> BasisSpec:
    return BasisSpec.chebyshev(D) if d == 1 else BasisSpec.tensor(d, D)


def _clouds(X, d: int) -> np.ndarray:
    X = check_array(X, allow_nd=True, dtype=np.float64)
    if X.ndim == 2 and d == 1:
        X = X[:, :, None]
    if X.ndim != 3 or X.shape[2] != d:
        raise ValueError(f"expected X of shape (n_samples, N, {d}), got {X.shape}")
    return X


def _multisets(X, d: int) -> list[np.ndarray]:
    if isinstance(X, np.ndarray) and X.ndim >= 2 and X.dtype != object:
        X = list(X)
    spec = BasisSpec.chebyshev(0) if d == 1 else BasisSpec.tensor(d, 0)
    return [check_points(spec, x) for x in X]


class PooledProductFeatures(TransformerMixin, BaseEstimator):
    """Map point clouds to the symmetric product basis of total degree <= D.

    Parameters
    ----------
    d : int
        Dimension of each point.
    D : int
        Total degree budget.
    convention : {"raw", "trimmed"}
    """

    def __init__(self, d=1, D=6, convention="raw"):
        self.d = d
        self.D = D
        self.convention = convention

    def fit(self, X, y=None):
        X = _clouds(X, self.d)
        self.spec_ = _spec(self.d, self.D)
        self.index_set_ = enumerate_ordered(self.spec_, X.shape[1], self.D)
        self.n_points_ = X.shape[1]
        self.n_features_out_ = len(self.index_set_)
        return self

    def transform(self, X):
        check_is_fitted(self, "index_set_")
        X = _clouds(X, self.d)
        if X.shape[1] != self.n_points_:
            raise ValueError(f"fitted on clouds of {self.n_points_} points, got {X.shape[1]}")
        return design_matrix(self.index_set_, X, self.convention)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "index_set_")
        return np.array(["A" + "_".join(map(str, v)) for v in self.index_set_.tuples()], dtype=object)


class SymmetricPolynomialRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of a symmetric function in the product basis."""

    def __init__(self, d=1, D=6, ridge=DEFAULT_RIDGE):
        self.d = d
        self.D = D
        self.ridge = ridge

    def fit(self, X, y):
        X = _clouds(X, self.d)
        y = check_array(y, ensure_2d=False, dtype=np.float64)
        if y.shape != (X.shape[0],):
            raise ValueError("y must have one value per cloud")
        spec = _spec(self.d, self.D)
        check_clouds(spec, X)
        self.model_ = fit_least_squares(spec, X.shape[1], self.D, SampleSet(X, y), self.ridge)
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = _clouds(X, self.d)
        return design_matrix(self.model_.index_set, X) @ self.model_.coefficients


class ClusterExpansionRegressor(RegressorMixin, BaseEstimator):
    """Body-ordered cluster expansion fitted to multisets of varying size.

    Parameters
    ----------
    d : int
    N : int
        Maximal body order.
    schedule : {"constant", "log", "beta"}
    D : int
        Degree of the constant schedule.
    c1, beta : float
        Parameters of the log and beta schedules.
    convention : {"full", "trimmed"}
    count_feature : bool
        Add ``A_0 = M`` as an order-1 feature (trimmed convention only).
    ridge : float
    """

    def __init__(
        self,
        d=1,
        N=2,
        schedule="constant",
        D=6,
        c1=1.0,
        beta=0.5,
        convention="full",
        count_feature=False,
        ridge=DEFAULT_RIDGE,
    ):
        self.d = d
        self.N = N
        self.schedule = schedule
        self.D = D
        self.c1 = c1
        self.beta = beta
        self.convention = convention
        self.count_feature = count_feature
        self.ridge = ridge

    def _schedule(self):
        params = {"D": self.D} if self.schedule == "constant" else {"c1": self.c1}
        if self.schedule == "beta":
            params["beta"] = self.beta
        return schedule_degrees(self.schedule, self.N, params)

    def fit(self, X, y):
        X = _multisets(X, self.d)
        y = check_array(y, ensure_2d=False, dtype=np.float64)
        if y.shape != (len(X),):
            raise ValueError("y must have one value per multiset")
        schedule = self._schedule()
        spec = _spec(self.d, schedule.D(1))
        try:
            self.model_ = fit_multiset(
                None, spec, schedule, X, self.ridge, self.count_feature, y, self.convention
            )
        except DomainError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        return eval_cluster_expansion_batch(self.model_, _multisets(X, self.d))
