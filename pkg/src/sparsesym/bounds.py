"""Analytic upper bounds on the parameter count and related error formulas.

All formulas are evaluated in log space.  The plain-valued functions return
``math.inf`` when the value does not fit in a double; use the ``log_``
variants for comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy import optimize, special

from .exceptions import NumericalError


def _exp_or_inf(log_value: float) -> float:
    return math.exp(log_value) if log_value < 709.0 else math.inf


def log_hr_bound(D: int) -> float:
    if D < 1:
        raise ValueError("the Hardy-Ramanujan bound needs D >= 1")
    return math.pi * math.sqrt(4.0 * D / 3.0) - math.log(8.0 * math.sqrt(3.0) * D)


def hr_bound(D: int) -> float:
    """N-independent bound exp(pi sqrt(4D/3)) / (8 sqrt(3) D) on P(N, D) for d = 1."""
    return _exp_or_inf(log_hr_bound(D))


def _log_pd_integrand(x: float, d: int) -> float:
    # log of x^{d+1} e^{-x} / (1 - e^{-x})^{d+1}
    return (d + 1) * (math.log(x) - math.log(-math.expm1(-x))) - x


@lru_cache(maxsize=None)
def p_d(d: int) -> float:
    """sup over x > 0 of x^{d+1} e^{-x} / (1 - e^{-x})^{d+1}.

    The x -> 0+ limit equals 1 and is included explicitly; interior maxima
    are located on a log-spaced grid and refined by golden-section search.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    grid = np.logspace(-6, math.log10(50.0), 4001)
    vals = np.array([_log_pd_integrand(x, d) for x in grid])
    j = int(np.argmax(vals))
    best = max(0.0, float(vals[j]))  # log of the limit value 1 is 0
    if 0 < j < grid.size - 1:
        res = optimize.minimize_scalar(
            lambda x: -_log_pd_integrand(x, d),
            bracket=(grid[j - 1], grid[j], grid[j + 1]),
            method="golden",
            options={"xtol": 1e-12},
        )
        if not res.success:
            raise NumericalError(f"golden-section refinement failed for d={d}: {res.message}")
        best = max(best, -float(res.fun))
    elif j == grid.size - 1:
        raise NumericalError(f"maximum for d={d} not bracketed inside the search grid")
    return math.exp(best)


def zeta(s: float) -> float:
    """Riemann zeta for s > 1."""
    if s <= 1:
        raise ValueError("zeta needs s > 1")
    return float(special.zeta(s, 1))


def beta_d(d: int, c: float) -> float:
    """Exponent constant ((d+1)/d) (c d! p_d zeta(d+1))^{1/(d+1)} of the infinite-N bound."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if c <= 0:
        raise ValueError("c must be positive")
    return (d + 1) / d * (c * math.factorial(d) * p_d(d) * zeta(d + 1)) ** (1.0 / (d + 1))


def log_infinite_N_bound(d: int, D: int, c: float) -> float:
    if D < 1:
        raise ValueError("D must be >= 1")
    return math.log(D) + beta_d(d, c) * D ** (d / (d + 1))


def infinite_N_bound(d: int, D: int, c: float) -> float:
    """D exp(beta_d D^{d/(d+1)}), valid for every N."""
    return _exp_or_inf(log_infinite_N_bound(d, D, c))


def alpha_d(d: int) -> float:
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return 1.0
    f = math.factorial(d - 1)
    return float(max(f * 2**d, f + d * (d - 1) ** (d - 1)))


def finite_N_constants(d: int, c_tilde: float) -> tuple[float, float]:
    """The pair (c1, c2) = (1 + c_tilde alpha_d, d)."""
    return 1.0 + c_tilde * alpha_d(d), float(d)


def log_finite_N_bound(d: int, N: int, D: int, c_tilde: float) -> float:
    if N < 1 or D < 1:
        raise ValueError("N and D must be >= 1")
    c1, c2 = finite_N_constants(d, c_tilde)
    return (
        math.log(D)
        + N * math.log(c1)
        + d * N * math.log(D + c2 * N ** ((d + 1) / d))
        - math.lgamma(d * N + 1)
        - math.lgamma(N)
    )


def finite_N_bound(d: int, N: int, D: int, c_tilde: float) -> float:
    """D c1^N (D + c2 N^{(d+1)/d})^{dN} / ((dN)! (N-1)!)."""
    return _exp_or_inf(log_finite_N_bound(d, N, D, c_tilde))


@dataclass(frozen=True)
class KorobovParams:
    M: float
    mu: float
    rho: float

    def __post_init__(self):
        if self.M <= 0 or self.mu <= 0:
            raise ValueError("M and mu must be positive")
        if self.rho <= 1:
            raise ValueError("rho must exceed 1")


def korobov_error(k: KorobovParams, N: int, D: int) -> float:
    """Total-degree truncation error M mu^N rho^{-D}."""
    return k.M * k.mu**N * k.rho ** (-D)


def regime_diagnostic(d: int, t: float, P: float) -> float:
    """(t - 1 - 1/d)^{-t} (log P / log log P)^t for the large-degree regime D = N^t."""
    gap = t - 1.0 - 1.0 / d
    if gap <= 0:
        raise ValueError(f"t must exceed 1 + 1/d = {1 + 1 / d}, got {t}")
    if not P > math.exp(math.e):
        raise ValueError("P must exceed e^e so that log log P > 1")
    lp = math.log(P)
    return gap ** (-t) * (lp / math.log(lp)) ** t


def sandwich_constants(
    d: int, grid: Iterable[tuple[int, int, int]]
) -> tuple[float, float]:
    """Fit (c0, c1) with c0^N D^{dN}/((dN)! N!) <= P <= c1^N D^{dN+1}/((dN)! N!).

    ``grid`` yields ``(N, D, P)`` triples.  The returned constants are the
    tightest ones over the grid, so both inequalities hold on it by
    construction; what is informative is their size.
    """
    lo, hi = math.inf, -math.inf
    for N, D, P in grid:
        base = d * N * math.log(D) - math.lgamma(d * N + 1) - math.lgamma(N + 1)
        lp = math.log(P)
        lo = min(lo, (lp - base) / N)
        hi = max(hi, (lp - base - math.log(D)) / N)
    if lo == math.inf:
        raise ValueError("empty grid")
    return math.exp(lo), math.exp(hi)
