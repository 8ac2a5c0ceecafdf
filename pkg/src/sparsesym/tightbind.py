"""Two-centre tight-binding site energies and their body-ordered approximants.

The site energy of atom 1 in a configuration ``x = [x_1, ..., x_M]`` is
``o(H(x))_{11}`` with ``H_ij = h(x_i - x_j)`` and
``h(xi) = h0 exp(-gamma0 |xi|)``.  Replacing ``o`` by its degree-N
Chebyshev interpolant on a spectral interval yields a function of body
order at most N whose cluster components are extracted by
inclusion-exclusion over sub-clusters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy import linalg, stats

from .exceptions import DomainError, NumericalError

MAX_CLUSTER = 10
INTERVAL_PAD = 0.1


@dataclass(frozen=True)
class TightBindingOracle:
    """Pair function parameters and the observable ``o``.

    Parameters
    ----------
    h0, gamma0 : float
        Amplitude and decay rate of ``h(xi) = h0 exp(-gamma0 |xi|)``.
    observable : {"exp", "resolvent", "square"}
    z0 : float, optional
        Pole of the resolvent observable ``1 / (z - z0)``; must lie outside
        every spectral interval the oracle is used on.
    d : int
        Spatial dimension.
    """

    h0: float = 1.0
    gamma0: float = 1.0
    observable: str = "exp"
    z0: float | None = None
    d: int = 1

    def __post_init__(self):
        if self.h0 <= 0 or self.gamma0 <= 0:
            raise DomainError("h0 and gamma0 must be positive")
        if self.observable not in ("exp", "resolvent", "square"):
            raise DomainError(f"unknown observable {self.observable!r}")
        if self.observable == "resolvent" and self.z0 is None:
            raise DomainError("resolvent observable needs z0")
        if self.d < 1:
            raise DomainError("d must be >= 1")

    def o(self, z):
        z = np.asarray(z, dtype=float)
        if self.observable == "exp":
            return np.exp(z)
        if self.observable == "square":
            return z * z
        return 1.0 / (z - self.z0)

    def pair(self, r):
        return self.h0 * np.exp(-self.gamma0 * np.asarray(r, dtype=float))

    def global_interval(self, n_atoms: int) -> tuple[float, float]:
        """Interval containing the spectrum of any configuration of ``n_atoms`` atoms."""
        r = (n_atoms - 1) * self.h0
        return _padded(self.h0 - r, self.h0 + r)


def _as_config(oracle: TightBindingOracle, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None] if oracle.d == 1 else arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != oracle.d:
        raise DomainError(f"expected a configuration of shape (M, {oracle.d}), got {arr.shape}")
    if arr.shape[0] < 1:
        raise DomainError("configuration needs at least one atom")
    if not np.all(np.isfinite(arr)):
        raise DomainError("configuration contains non-finite coordinates")
    return arr


def hamiltonian(oracle: TightBindingOracle, x) -> np.ndarray:
    """H_ij = h(x_i - x_j); both triangles come from one evaluation, so H is exactly symmetric."""
    pts = _as_config(oracle, x)
    M = pts.shape[0]
    H = np.full((M, M), oracle.h0)
    iu = np.triu_indices(M, 1)
    vals = oracle.pair(np.linalg.norm(pts[iu[0]] - pts[iu[1]], axis=1))
    H[iu] = vals
    H[iu[1], iu[0]] = vals
    return H


def site_energy(oracle: TightBindingOracle, x) -> float:
    """o(H)_{11} via a symmetric eigendecomposition."""
    H = hamiltonian(oracle, x)
    if oracle.observable == "resolvent":
        _check_pole(oracle, gershgorin_interval(H))
    try:
        lam, U = linalg.eigh(H)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return float(np.sum(oracle.o(lam) * U[0] ** 2))


def _padded(lo: float, hi: float) -> tuple[float, float]:
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    half = (1.0 + INTERVAL_PAD) * half if half > 0 else INTERVAL_PAD * max(1.0, abs(mid))
    return mid - half, mid + half


def gershgorin_interval(H: np.ndarray) -> tuple[float, float]:
    """Gershgorin enclosure of the spectrum of a symmetric matrix, widened by 10%."""
    H = np.asarray(H, dtype=float)
    radii = np.sum(np.abs(H), axis=1) - np.abs(np.diag(H))
    return _padded(float(np.min(np.diag(H) - radii)), float(np.max(np.diag(H) + radii)))


def _check_pole(oracle: TightBindingOracle, interval) -> None:
    if oracle.observable == "resolvent" and interval[0] <= oracle.z0 <= interval[1]:
        raise DomainError(f"resolvent pole z0={oracle.z0} lies inside the spectral interval {interval}")


def cheb_matrix_coeffs(oracle: TightBindingOracle, N: int, spectral_interval) -> np.ndarray:
    """Chebyshev interpolation coefficients of ``o`` on [a, b] (N+1 first-kind nodes)."""
    a, b = (float(t) for t in spectral_interval)
    if not b > a:
        raise DomainError(f"degenerate spectral interval [{a}, {b}]")
    if N < 0:
        raise DomainError("N must be >= 0")
    _check_pole(oracle, (a, b))
    return npcheb.chebinterpolate(lambda t: oracle.o(0.5 * (b - a) * t + 0.5 * (a + b)), N)


def cheb_nodes(N: int, spectral_interval) -> np.ndarray:
    """The N+1 interpolation nodes used by :func:`cheb_matrix_coeffs`, mapped to [a, b]."""
    a, b = spectral_interval
    t = npcheb.chebpts1(N + 1)
    return 0.5 * (b - a) * t + 0.5 * (a + b)


def _matrix_cheb_11(H: np.ndarray, coeffs: np.ndarray, interval) -> float:
    a, b = interval
    Ht = (2.0 * H - (a + b) * np.eye(H.shape[0])) / (b - a)
    t_prev = np.zeros(H.shape[0])
    t_prev[0] = 1.0
    acc = coeffs[0] * t_prev[0]
    if coeffs.size == 1:
        return float(acc)
    t = Ht @ t_prev
    acc += coeffs[1] * t[0]
    for c in coeffs[2:]:
        t_prev, t = t, 2.0 * (Ht @ t) - t_prev
        acc += c * t[0]
    return float(acc)


def _check_spectrum(H: np.ndarray, interval) -> None:
    a, b = interval
    lam = linalg.eigvalsh(H)
    tol = 1e-10 * max(1.0, abs(a), abs(b))
    if lam[0] < a - tol or lam[-1] > b + tol:
        raise NumericalError(
            f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] escapes the interval [{a:.6g}, {b:.6g}]"
        )


def body_ordered_site_energy(
    oracle: TightBindingOracle, x, N: int, interval: Sequence[float] | None = None
) -> float:
    """o_N(H)_{11} by the three-term recurrence applied to the first unit vector.

    ``interval`` defaults to the Gershgorin enclosure of ``H(x)``.
    """
    H = hamiltonian(oracle, x)
    interval = gershgorin_interval(H) if interval is None else tuple(interval)
    _check_spectrum(H, interval)
    coeffs = cheb_matrix_coeffs(oracle, N, interval)
    return _matrix_cheb_11(H, coeffs, interval)


def v_nN(
    oracle: TightBindingOracle,
    center,
    neighbors,
    N: int,
    interval: Sequence[float] | None = None,
) -> float:
    """n-correlation potential of ``center`` with ``neighbors`` by inclusion-exclusion.

    ``sum over K subset of neighbors of (-1)^{n-|K|} o_N(H restricted to center and K)_{11}``.
    The same polynomial ``o_N`` (fixed by ``interval``, by default the
    Gershgorin enclosure of the whole cluster) is used for every subset.
    """
    c = _as_config(oracle, center)
    nb = np.asarray(neighbors, dtype=float).reshape(-1, oracle.d)
    n = nb.shape[0]
    if n > MAX_CLUSTER:
        raise DomainError(f"inclusion-exclusion limited to n <= {MAX_CLUSTER}")
    H = hamiltonian(oracle, np.vstack([c, nb]))
    interval = gershgorin_interval(H) if interval is None else tuple(interval)
    _check_spectrum(H, interval)
    coeffs = cheb_matrix_coeffs(oracle, N, interval)
    total = 0.0
    for size in range(n + 1):
        sign = -1.0 if (n - size) % 2 else 1.0
        for K in itertools.combinations(range(1, n + 1), size):
            sel = (0,) + K
            total += sign * _matrix_cheb_11(H[np.ix_(sel, sel)], coeffs, interval)
    return total


def cluster_reconstruction(
    oracle: TightBindingOracle, x, N: int, interval: Sequence[float] | None = None
) -> float:
    """Sum of ``v_nN`` over every sub-cluster of the neighbors of atom 1."""
    pts = _as_config(oracle, x)
    H = hamiltonian(oracle, pts)
    interval = gershgorin_interval(H) if interval is None else tuple(interval)
    nb = pts[1:]
    total = 0.0
    for size in range(nb.shape[0] + 1):
        for K in itertools.combinations(range(nb.shape[0]), size):
            total += v_nN(oracle, pts[0], nb[list(K)], N, interval)
    return total


def max_abs_on_interval(oracle: TightBindingOracle, N: int, interval, n_grid: int = 2001) -> float:
    """max |o_N| over the interval, sampled on a dense grid plus the endpoints."""
    coeffs = cheb_matrix_coeffs(oracle, N, interval)
    t = np.cos(np.linspace(0.0, np.pi, n_grid))
    return float(np.max(np.abs(npcheb.chebval(t, coeffs))))


def sample_configuration(
    rng: np.random.Generator,
    M: int,
    d: int = 1,
    min_separation: float = 0.1,
    fixed=None,
    max_tries: int = 10_000,
) -> np.ndarray:
    """M uniform points in [-1, 1]^d, pairwise (and from ``fixed``) at least ``min_separation`` apart."""
    placed = [] if fixed is None else [np.asarray(p, dtype=float).reshape(d) for p in fixed]
    out = []
    tries = 0
    while len(out) < M:
        tries += 1
        if tries > max_tries:
            raise NumericalError(f"could not place {M} points with separation {min_separation}")
        p = rng.uniform(-1.0, 1.0, size=d)
        if all(np.linalg.norm(p - q) >= min_separation for q in placed):
            placed.append(p)
            out.append(p)
    return np.array(out).reshape(M, d)


class SiteEnergyOracle:
    """Multiset function of the neighbors of a site fixed at ``center``.

    ``f([y_1, ..., y_M]) = o(H([center, y_1, ..., y_M]))_{11}``; the empty
    multiset gives ``o(h0)``.
    """

    def __init__(self, tb: TightBindingOracle, center=None, N: int | None = None, interval=None):
        self.tb = tb
        self.center = np.zeros(tb.d) if center is None else np.asarray(center, dtype=float).reshape(tb.d)
        self.N = N
        self.interval = interval

    def config(self, neighbors) -> np.ndarray:
        nb = np.asarray(neighbors, dtype=float).reshape(-1, self.tb.d)
        return np.vstack([self.center[None, :], nb])

    def __call__(self, neighbors) -> float:
        if self.N is None:
            return site_energy(self.tb, self.config(neighbors))
        return body_ordered_site_energy(self.tb, self.config(neighbors), self.N, self.interval)

    def component(self, neighbors, N: int, interval=None) -> float:
        return v_nN(self.tb, self.center, neighbors, N, interval)


def estimate_body_order_rate(
    oracle: TightBindingOracle, configs: Sequence[np.ndarray], N_list: Sequence[int]
) -> tuple[float, list[float]]:
    """Empirical decay rate eta in sup |f - f_N| ~ exp(-eta N).

    Returns the fitted rate and the sup errors per N.
    """
    exact = np.array([site_energy(oracle, x) for x in configs])
    sups = []
    for N in N_list:
        approx = np.array([body_ordered_site_energy(oracle, x, N) for x in configs])
        sups.append(float(np.max(np.abs(exact - approx))))
    floor = np.finfo(float).tiny
    fit = stats.linregress(list(N_list), np.log(np.maximum(sups, floor)))
    return -float(fit.slope), sups
