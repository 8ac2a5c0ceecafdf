import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsesym.exceptions import DomainError
from sparsesym.one_body import (
    BasisKind,
    BasisSpec,
    basis_tuples,
    chebyshev_eval,
    count_degree,
    eval_one_body,
    flat_index,
    one_body_values,
    phi4_constant,
)


@pytest.mark.parametrize("k,x,expected", [(0, 0.7, 1.0), (2, 0.5, -0.5), (3, 0.3, -0.792)])
def test_chebyshev_examples(k, x, expected):
    assert chebyshev_eval(k, x) == pytest.approx(expected, abs=1e-15)


@given(st.integers(0, 40), st.floats(-1.0, 1.0))
def test_chebyshev_matches_cosine_form(k, x):
    assert chebyshev_eval(k, x) == pytest.approx(math.cos(k * math.acos(x)), abs=1e-10)


def test_chebyshev_rejects_outside_domain():
    with pytest.raises(DomainError):
        chebyshev_eval(2, 1.0 + 1e-9)
    # round-off just beyond the boundary is tolerated
    assert chebyshev_eval(2, 1.0 + 1e-13) == pytest.approx(1.0)


def test_eval_one_body_examples():
    cheb = BasisSpec.chebyshev(5)
    assert eval_one_body(cheb, 0, 0.3) == 1.0
    assert eval_one_body(cheb, 2, -0.5) == pytest.approx(-0.5)
    tens = BasisSpec.tensor(2, 4)
    assert eval_one_body(tens, (1, 1), (0.5, -0.5)) == pytest.approx(-0.25)


def test_eval_one_body_errors():
    cheb = BasisSpec.chebyshev(3)
    with pytest.raises(DomainError):
        eval_one_body(cheb, 4, 0.1)
    with pytest.raises(DomainError):
        eval_one_body(BasisSpec.tensor(2, 3), (1, 0), (0.1, 0.2, 0.3))


def test_count_degree_examples():
    assert count_degree(BasisSpec.chebyshev(10), 7) == 1
    assert count_degree(BasisSpec.tensor(2, 10), 3) == 4
    assert count_degree(BasisSpec.tensor(3, 10), 0) == 1


@pytest.mark.parametrize("d", [1, 2, 3])
def test_count_degree_brute_force(d):
    spec = BasisSpec.chebyshev(15) if d == 1 else BasisSpec.tensor(d, 15)
    for i in range(16):
        brute = sum(1 for k in itertools.product(range(i + 1), repeat=d) if sum(k) == i)
        assert count_degree(spec, i) == brute


def test_phi4_constant_examples():
    assert phi4_constant(BasisSpec.chebyshev(20), 20) == 1.0
    assert phi4_constant(BasisSpec.tensor(2, 20), 20) == 1.0
    assert phi4_constant(BasisSpec.tensor(3, 20), 20) == 0.5


@pytest.mark.parametrize("d", [1, 2, 3])
def test_phi4_holds_with_reported_constant(d):
    spec = BasisSpec.chebyshev(30) if d == 1 else BasisSpec.tensor(d, 30)
    c = phi4_constant(spec, 30)
    for i in range(31):
        assert count_degree(spec, i) <= c * math.prod(range(i + 1, i + d)) + 1e-12


def test_flat_index_bijection_and_degree_order():
    spec = BasisSpec.tensor(3, 6)
    tuples = basis_tuples(spec)
    degrees = tuples.sum(axis=1)
    assert np.all(np.diff(degrees) >= 0)
    for j, k in enumerate(tuples):
        assert flat_index(spec, tuple(k)) == j
    assert len({tuple(k) for k in tuples}) == len(tuples)


@settings(max_examples=50)
@given(st.integers(1, 3), st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_values_bounded_by_one(d, coords):
    spec = BasisSpec.chebyshev(8) if d == 1 else BasisSpec.tensor(d, 8)
    vals = one_body_values(spec, np.array(coords[:d])[None, :])
    assert np.all(np.abs(vals) <= 1.0 + 1e-12)


def test_spec_json_roundtrip_and_validation():
    spec = BasisSpec.tensor(2, 5)
    assert spec.to_dict() == {"kind": "TensorChebyshev", "d": 2, "max_degree": 5}
    assert BasisSpec.from_dict(spec.to_dict()) == spec
    assert BasisSpec.chebyshev(3).kind is BasisKind.CHEBYSHEV_1D
    with pytest.raises((DomainError, ValueError)):
        BasisSpec(BasisKind("Chebyshev1d"), 2, 3)
    with pytest.raises((DomainError, ValueError)):
        BasisSpec.chebyshev(-1)


def test_points_validation():
    spec = BasisSpec.chebyshev(2)
    with pytest.raises(DomainError):
        one_body_values(spec, [0.1, np.nan])
    with pytest.raises(DomainError):
        one_body_values(spec, [0.1, 1.5])
