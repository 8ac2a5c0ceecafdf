import math

import numpy as np
import pytest

from sparsesym.exceptions import DomainError, NumericalError
from sparsesym.fit import make_rng
from sparsesym.tightbind import (
    SiteEnergyOracle,
    TightBindingOracle,
    body_ordered_site_energy,
    cheb_matrix_coeffs,
    cheb_nodes,
    cluster_reconstruction,
    estimate_body_order_rate,
    gershgorin_interval,
    hamiltonian,
    max_abs_on_interval,
    sample_configuration,
    site_energy,
    v_nN,
)

TB = TightBindingOracle()


def test_hamiltonian_examples(rng):
    assert np.array_equal(hamiltonian(TB, [0.3]), [[1.0]])
    e = math.exp(-1)
    assert np.allclose(hamiltonian(TB, [0.0, 1.0]), [[1, e], [e, 1]], rtol=0, atol=1e-15)
    H = hamiltonian(TB, rng.uniform(-1, 1, 7))
    assert np.array_equal(H, H.T)
    assert np.all(np.diag(H) == TB.h0)


def test_site_energy_examples(rng):
    sq = TightBindingOracle(observable="square")
    assert site_energy(sq, [0.0, 1.0]) == pytest.approx(1 + math.exp(-2), abs=1e-14)
    assert site_energy(TB, [0.4]) == pytest.approx(math.e, abs=1e-14)
    x = rng.uniform(-1, 1, 6)
    v = site_energy(TB, x)
    perm = np.concatenate([[0], 1 + rng.permutation(5)])
    assert site_energy(TB, x[perm]) == pytest.approx(v, abs=1e-13)


def test_cheb_coeffs_square_exact():
    sq = TightBindingOracle(observable="square")
    for N in (2, 3, 6):
        c = cheb_matrix_coeffs(sq, N, (-1.5, 3.0))
        z = cheb_nodes(N, (-1.5, 3.0))
        t = (2 * z - 1.5) / 4.5
        assert np.max(np.abs(np.polynomial.chebyshev.chebval(t, c) - z * z)) <= 1e-13


def test_cheb_coeffs_exp_nodes_and_decay():
    c = cheb_matrix_coeffs(TB, 10, (-2.0, 2.0))
    assert c.shape == (11,)
    z = cheb_nodes(10, (-2.0, 2.0))
    assert np.max(np.abs(np.polynomial.chebyshev.chebval(z / 2, c) - np.exp(z))) <= 1e-9
    mags = np.abs(c[2:])
    assert np.all(np.diff(mags) < 0)


def test_cheb_coeffs_errors():
    with pytest.raises(DomainError):
        cheb_matrix_coeffs(TB, 4, (1.0, 1.0))
    res = TightBindingOracle(observable="resolvent", z0=0.5)
    with pytest.raises(DomainError):
        cheb_matrix_coeffs(res, 4, (0.0, 2.0))


def test_resolvent_pole_check():
    res = TightBindingOracle(observable="resolvent", z0=1.2)
    with pytest.raises(DomainError):
        site_energy(res, [0.0, 0.5])
    far = TightBindingOracle(observable="resolvent", z0=-5.0)
    x = [0.0, 0.5, -0.7]
    assert body_ordered_site_energy(far, x, 30) == pytest.approx(site_energy(far, x), abs=1e-10)


def test_oracle_validation():
    with pytest.raises(DomainError):
        TightBindingOracle(gamma0=0.0)
    with pytest.raises(DomainError):
        TightBindingOracle(observable="cube")
    with pytest.raises(DomainError):
        TightBindingOracle(observable="resolvent")


def test_body_ordered_examples(rng):
    sq = TightBindingOracle(observable="square")
    x = rng.uniform(-1, 1, 5)
    assert body_ordered_site_energy(sq, x, 2) == pytest.approx(site_energy(sq, x), abs=1e-12)
    assert body_ordered_site_energy(TB, [0.0], 6) == pytest.approx(math.e, abs=1e-4)


def test_interval_violation_detected():
    with pytest.raises(NumericalError):
        body_ordered_site_energy(TB, [0.0, 0.1, 0.2], 4, interval=(0.9, 1.1))


def test_v_nN_examples():
    sq = TightBindingOracle(observable="square")
    assert v_nN(sq, [0.0], [[1.0]], 2) == pytest.approx(math.exp(-2), abs=1e-13)
    assert v_nN(sq, [0.0], np.zeros((0, 1)), 2) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(DomainError):
        v_nN(TB, [0.0], np.linspace(0.1, 1, 11), 3)


def test_v_nN_permutation_symmetric(rng):
    nb = rng.uniform(-1, 1, (4, 1))
    interval = gershgorin_interval(hamiltonian(TB, np.vstack([[[0.0]], nb])))
    v = v_nN(TB, [0.0], nb, 6, interval)
    for _ in range(5):
        assert v_nN(TB, [0.0], nb[rng.permutation(4)], 6, interval) == pytest.approx(v, abs=1e-13)


@pytest.mark.parametrize("M", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("N", [1, 3, 6])
def test_cluster_reconstruction(M, N):
    x = sample_configuration(make_rng(M * 10 + N), M)
    assert abs(cluster_reconstruction(TB, x, N) - body_ordered_site_energy(TB, x, N)) <= 1e-10


def test_v_nN_bounded(rng):
    for n in range(1, 5):
        nb = rng.uniform(-1, 1, (n, 1))
        interval = TB.global_interval(n + 1)
        bound = 2**n * max_abs_on_interval(TB, 6, interval)
        assert abs(v_nN(TB, [0.0], nb, 6, interval)) <= bound


def test_body_order_components_vanish_beyond_degree():
    sq = TightBindingOracle(observable="square")
    nb = sample_configuration(make_rng(1), 3, fixed=[[0.0]])
    assert abs(v_nN(sq, [0.0], nb, 2)) <= 1e-12


def test_sample_configuration_separation():
    x = sample_configuration(make_rng(0), 8, d=2)
    dist = np.linalg.norm(x[:, None] - x[None], axis=-1) + np.eye(8)
    assert x.shape == (8, 2) and dist.min() >= 0.1
    with pytest.raises(NumericalError):
        sample_configuration(make_rng(0), 100, min_separation=0.5, max_tries=500)


def test_site_energy_oracle():
    f = SiteEnergyOracle(TB)
    assert f(np.zeros((0, 1))) == pytest.approx(math.e)
    nb = np.array([[0.5], [-0.3]])
    assert f(nb) == pytest.approx(site_energy(TB, [0.0, 0.5, -0.3]))
    assert f.config(nb).shape == (3, 1)


def test_decay_rate_positive():
    configs = [sample_configuration(make_rng(s), 4) for s in range(5)]
    eta, sups = estimate_body_order_rate(TB, configs, range(2, 9))
    assert eta > 0.5 and sups[-1] < sups[0]
