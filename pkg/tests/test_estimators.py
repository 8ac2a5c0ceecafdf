import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import Ridge
from sklearn.pipeline import make_pipeline

from sparsesym.estimators import (
    ClusterExpansionRegressor,
    PooledProductFeatures,
    SymmetricPolynomialRegressor,
)
from sparsesym.fit import pair_target_batch


@pytest.fixture
def clouds(rng):
    X = rng.uniform(-1, 1, (400, 3))
    return X, pair_target_batch(X[:, :, None])


def test_symmetric_regressor(clouds):
    X, y = clouds
    est = SymmetricPolynomialRegressor(D=8).fit(X, y)
    assert est.score(X, y) > 0.9999
    assert np.allclose(est.predict(X[:, ::-1]), est.predict(X), atol=1e-10)
    again = clone(est)
    assert again.get_params() == {"d": 1, "D": 8, "ridge": est.ridge}
    with pytest.raises(NotFittedError):
        again.predict(X)


def test_features_in_pipeline(clouds):
    X, y = clouds
    feats = PooledProductFeatures(D=6).fit(X)
    F = feats.transform(X)
    assert F.shape == (400, feats.n_features_out_)
    assert len(feats.get_feature_names_out()) == F.shape[1]
    pipe = make_pipeline(PooledProductFeatures(D=6), Ridge(alpha=1e-8))
    assert pipe.fit(X, y).score(X, y) > 0.999
    with pytest.raises(ValueError):
        feats.transform(X[:, :2])


def test_cluster_regressor(rng):
    X = [rng.uniform(-1, 1, (int(m), 1)) for m in rng.integers(0, 7, 300)]
    y = np.array([np.exp(x).sum() for x in X])
    est = ClusterExpansionRegressor(N=1, D=10).fit(X, y)
    assert est.score(X, y) > 0.999999
    assert clone(est).get_params()["convention"] == "full"
    with pytest.raises(ValueError):
        ClusterExpansionRegressor(N=3, D=10).fit(X[:10], y[:10])
    with pytest.raises(ValueError):
        est.fit(X, y[:-1])
