import numpy as np
import pytest

from sparsesym.exceptions import DomainError
from sparsesym.fit import (
    SampleSet,
    convergence_study,
    fit_least_squares,
    pair_target,
    pair_target_batch,
    sample_clouds,
    sup_error,
)
from sparsesym.indexing import count_params, enumerate_ordered
from sparsesym.one_body import BasisSpec
from sparsesym.symbasis import SymmetricModel, eval_model, eval_model_batch


def test_sample_clouds_deterministic_and_in_domain():
    spec = BasisSpec.tensor(2, 3)
    a = sample_clouds(spec, 3, 50, seed=7)
    b = sample_clouds(spec, 3, 50, seed=7)
    assert np.array_equal(a.clouds, b.clouds)
    assert a.clouds.shape == (50, 3, 2)
    assert np.all(np.abs(a.clouds) <= 1)
    assert not np.array_equal(a.clouds, sample_clouds(spec, 3, 50, seed=8).clouds)
    with pytest.raises(DomainError):
        sample_clouds(spec, 3, 0, seed=0)


def test_pair_target_batch_matches_scalar(rng):
    clouds = rng.uniform(-1, 1, (20, 5, 1))
    assert np.allclose(pair_target_batch(clouds), [pair_target(c) for c in clouds])


def test_exact_recovery(rng):
    spec = BasisSpec.chebyshev(5)
    iset = enumerate_ordered(spec, 3, 5)
    truth = SymmetricModel(iset, rng.standard_normal(len(iset)))
    samples = sample_clouds(spec, 3, 4 * len(iset), seed=1)
    samples.targets = eval_model_batch(truth, samples.clouds)
    model = fit_least_squares(spec, 3, 5, samples, ridge=0.0)
    assert np.max(np.abs(model.coefficients - truth.coefficients)) <= 1e-8
    test = sample_clouds(spec, 3, 100, seed=2)
    assert sup_error(model, lambda c: eval_model(truth, c), test) <= 1e-8
    assert model.residual <= 1e-8


def test_zero_target():
    spec = BasisSpec.chebyshev(4)
    samples = sample_clouds(spec, 2, 60, seed=3)
    samples.targets = np.zeros(60)
    model = fit_least_squares(spec, 2, 4, samples, ridge=0.0)
    assert np.max(np.abs(model.coefficients)) <= 1e-12


def test_fit_errors():
    spec = BasisSpec.chebyshev(4)
    samples = sample_clouds(spec, 2, 10, seed=3)
    samples.targets = np.zeros(10)
    with pytest.raises(DomainError):
        fit_least_squares(spec, 2, 4, samples)
    samples = sample_clouds(spec, 2, 40, seed=3)
    samples.targets = np.full(40, np.nan)
    with pytest.raises(DomainError):
        fit_least_squares(spec, 2, 4, samples)


def test_fit_invariant_under_permuted_clouds(rng):
    spec = BasisSpec.chebyshev(5)
    samples = sample_clouds(spec, 4, 300, seed=4).with_targets(pair_target)
    permuted = SampleSet(samples.clouds[:, ::-1, :].copy(), samples.targets)
    a = fit_least_squares(spec, 4, 5, samples)
    b = fit_least_squares(spec, 4, 5, permuted)
    assert np.max(np.abs(a.coefficients - b.coefficients)) <= 1e-10


def test_training_residual_nonincreasing_in_D():
    spec = BasisSpec.chebyshev(8)
    samples = sample_clouds(spec, 3, 600, seed=5).with_targets(pair_target)
    res = [fit_least_squares(spec, 3, D, samples, ridge=0.0).residual for D in range(0, 9)]
    assert all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(res, res[1:]))


def test_convergence_study_shape():
    spec = BasisSpec.chebyshev(8)
    study = convergence_study(spec, 3, D_list=range(2, 9))
    for row in study.rows:
        assert row.P == count_params(spec, 3, row.D)
        assert row.sup_error >= 0
    assert study.slope < 0 and study.alpha > 0
    assert study.pearson_r <= -0.95
    assert study.rows[-1].sup_error <= study.rows[0].sup_error
    with pytest.raises(DomainError):
        convergence_study(spec, 3, D_list=[4, 3])
    with pytest.raises(DomainError):
        convergence_study(spec, 3, D_list=[2, 3], seeds=(1, 1))
