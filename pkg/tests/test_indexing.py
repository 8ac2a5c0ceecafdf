import numpy as np
import pytest

from sparsesym.exceptions import ResourceCapError
from sparsesym.indexing import count_exact, count_params, enumerate_ordered, partition_count
from sparsesym.one_body import BasisSpec

from conftest import brute_force_tuples


def _spec(d, D=10):
    return BasisSpec.chebyshev(D) if d == 1 else BasisSpec.tensor(d, D)


def partitions_at_most(k: int, parts: int) -> int:
    # independent DP: partitions of k into parts of size <= `parts` (conjugate of at most `parts` parts)
    ways = [1] + [0] * k
    for size in range(1, parts + 1):
        for total in range(size, k + 1):
            ways[total] += ways[total - size]
    return ways[k]


def test_enumerate_examples():
    spec = BasisSpec.chebyshev(5)
    assert enumerate_ordered(spec, 2, 2).tuples() == [(0, 0), (0, 1), (0, 2), (1, 1)]
    assert enumerate_ordered(spec, 1, 5).tuples() == [(k,) for k in range(6)]
    assert len(enumerate_ordered(spec, 3, 3)) == 7


def test_count_examples():
    spec = BasisSpec.chebyshev(12)
    assert count_params(spec, 2, 2) == 4
    assert count_params(spec, 3, 3) == 7
    for D in range(12):
        assert count_params(spec, 1, D) == D + 1


@pytest.mark.parametrize("n,expected", [(0, 1), (4, 5), (6, 11), (10, 42), (100, 190569292)])
def test_partition_count(n, expected):
    assert partition_count(n) == expected


@pytest.mark.parametrize("d", [1, 2])
def test_enumeration_matches_brute_force(d):
    for N in range(1, 5):
        for D in range(0, 7):
            spec = _spec(d, D)
            assert enumerate_ordered(spec, N, D).tuples() == brute_force_tuples(spec, N, D)


def test_partition_identity_d1():
    spec = BasisSpec.chebyshev(20)
    for N in range(1, 8):
        for D in range(0, 21):
            assert count_params(spec, N, D) == sum(partitions_at_most(k, N) for k in range(D + 1))


def test_monotone_in_N_and_D():
    spec = BasisSpec.tensor(2, 12)
    table = [[count_params(spec, N, D) for D in range(13)] for N in range(1, 7)]
    arr = np.array(table)
    assert np.all(np.diff(arr, axis=0) >= 0)
    assert np.all(np.diff(arr, axis=1) >= 0)


def test_count_exact_sums_to_count_params():
    spec = BasisSpec.tensor(2, 8)
    for N in range(1, 5):
        for D in range(9):
            assert sum(count_exact(spec, n, D) for n in range(N + 1)) == count_params(spec, N, D)


def test_big_integer_counts():
    spec = BasisSpec.tensor(3, 200)
    P = count_params(spec, 50, 200)
    assert isinstance(P, int) and P > 2**64


@pytest.mark.parametrize("d", [1, 2, 3])
def test_downset_parent_links(d):
    spec = _spec(d, 6)
    iset = enumerate_ordered(spec, 4, 6)
    assert iset.parent[0] == -1
    for j in range(1, len(iset)):
        p = iset.parent[j]
        assert 0 <= p < j
        row = list(iset.indices[j])
        first = next(t for t, v in enumerate(row) if v)
        assert iset.lead[j] == row[first]
        reduced = row.copy()
        reduced[first] = 0
        assert tuple(iset.indices[p]) == tuple(sorted(reduced))
    # lexicographic order and degree budget
    rows = iset.tuples()
    assert rows == sorted(rows)
    assert np.all(iset.degrees <= 6)


def test_order_degrees_filter():
    spec = BasisSpec.chebyshev(6)
    iset = enumerate_ordered(spec, 3, 6, order_degrees=(6, 4, 3))
    for row, deg in zip(iset.indices, iset.degrees):
        n = np.count_nonzero(row)
        if n:
            assert deg <= (6, 4, 3)[n - 1]
    with pytest.raises(ValueError):
        enumerate_ordered(spec, 3, 6, order_degrees=(3, 4, 3))


def test_cap(monkeypatch):
    spec = BasisSpec.chebyshev(10)
    with pytest.raises(ResourceCapError):
        enumerate_ordered(spec, 4, 10, cap=5)
    monkeypatch.setenv("SYMTENSOR_CAP", "3")
    with pytest.raises(ResourceCapError):
        enumerate_ordered(spec, 2, 2)


def test_position_lookup():
    iset = enumerate_ordered(BasisSpec.chebyshev(4), 3, 4)
    assert iset.position((2, 0, 1)) == iset.tuples().index((0, 1, 2))
    assert (0, 0, 5) not in iset
