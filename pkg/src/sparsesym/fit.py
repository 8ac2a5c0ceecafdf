"""Least-squares fits in the product basis and empirical convergence studies."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from ._linalg import solve_least_squares
from .exceptions import DomainError
from .indexing import count_params, enumerate_ordered
from .one_body import BasisSpec
from .symbasis import SymmetricModel, check_clouds, design_matrix

logger = logging.getLogger(__name__)

DEFAULT_RIDGE = 1e-10
SAMPLE_FACTOR = 10
MAX_SAMPLES = 100_000


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator from a single 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & (2**64 - 1)))


@dataclass
class SampleSet:
    clouds: np.ndarray
    targets: np.ndarray | None = None
    seed: int | None = None

    def __len__(self) -> int:
        return self.clouds.shape[0]

    def with_targets(self, oracle: Callable[[np.ndarray], float]) -> "SampleSet":
        targets = np.array([oracle(c) for c in self.clouds], dtype=float)
        return SampleSet(self.clouds, targets, self.seed)


def sample_clouds(spec: BasisSpec, N: int, count: int, seed: int) -> SampleSet:
    """``count`` clouds of N i.i.d. uniform points in [-1, 1]^d."""
    if count < 1:
        raise DomainError("count must be >= 1")
    if N < 1:
        raise DomainError("N must be >= 1")
    clouds = make_rng(seed).uniform(-1.0, 1.0, size=(count, N, spec.d))
    return SampleSet(clouds, None, seed)


def pair_target(cloud) -> float:
    """Default analytic test target: sum over pairs i < j of 1/(4 + x_i x_j)."""
    x = np.asarray(cloud, dtype=float).reshape(-1)
    prod = np.outer(x, x)
    iu = np.triu_indices(x.size, 1)
    return float(np.sum(1.0 / (4.0 + prod[iu])))


def pair_target_batch(clouds) -> np.ndarray:
    x = np.asarray(clouds, dtype=float).reshape(len(clouds), -1)
    prod = x[:, :, None] * x[:, None, :]
    iu = np.triu_indices(x.shape[1], 1)
    return np.sum(1.0 / (4.0 + prod[:, iu[0], iu[1]]), axis=1)


pair_target.batch = pair_target_batch


def fit_least_squares(
    spec: BasisSpec, N: int, D: int, samples: SampleSet, ridge: float = DEFAULT_RIDGE
) -> SymmetricModel:
    """Fit ``sum_v c_v A_v`` (total degree <= D) to the sample targets.

    Raises
    ------
    DomainError
        Fewer than ``2 * P(N, D)`` samples, or non-finite targets.
    """
    if samples.targets is None:
        raise DomainError("sample set has no targets")
    index_set = enumerate_ordered(spec.with_max_degree(max(D, spec.max_degree)), N, D)
    P = len(index_set)
    if len(samples) < 2 * P:
        raise DomainError(f"need at least {2 * P} samples for P={P}, got {len(samples)}")
    F = design_matrix(index_set, check_clouds(spec, samples.clouds, N))
    coef, rank = solve_least_squares(F, samples.targets, ridge)
    if rank < P:
        logger.warning("rank-deficient design: rank %d < P=%d", rank, P)
    resid = float(np.sqrt(np.mean((F @ coef - samples.targets) ** 2)))
    return SymmetricModel(index_set, coef, residual=resid)


def _oracle_values(oracle, clouds: np.ndarray) -> np.ndarray:
    batch = getattr(oracle, "batch", None)
    if batch is not None:
        return np.asarray(batch(clouds), dtype=float)
    return np.array([oracle(c) for c in clouds], dtype=float)


def sup_error(model: SymmetricModel, oracle: Callable, test: SampleSet) -> float:
    """max_i |model(x_i) - oracle(x_i)| over the test clouds."""
    return float(np.max(np.abs(_errors(model, oracle, test))))


def _errors(model: SymmetricModel, oracle, test: SampleSet) -> np.ndarray:
    pred = design_matrix(model.index_set, test.clouds) @ model.coefficients
    truth = test.targets if test.targets is not None else _oracle_values(oracle, test.clouds)
    return pred - truth


@dataclass
class ConvergenceRow:
    D: int
    P: int
    sup_error: float
    l2_error: float
    fit_seconds: float = field(default=0.0, compare=False)


@dataclass
class ConvergenceStudy:
    rows: list[ConvergenceRow]
    slope: float
    intercept: float
    pearson_r: float

    @property
    def alpha(self) -> float:
        """Rate in error ~ C exp(-alpha (log P)^{1+1/d})."""
        return -self.slope


def convergence_study(
    spec: BasisSpec,
    N: int,
    oracle: Callable = pair_target,
    D_list: Sequence[int] = tuple(range(2, 13)),
    seeds: tuple[int, int] = (0, 1),
    ridge: float = DEFAULT_RIDGE,
    sample_factor: int = SAMPLE_FACTOR,
) -> ConvergenceStudy:
    """Fit and test for every degree in ``D_list``.

    Training and test clouds come from the two seeds in ``seeds``; each set
    holds ``sample_factor * P`` clouds for the largest degree (capped at
    ``MAX_SAMPLES``) and is shared across degrees so the fitted spaces are
    nested.  The summary regresses log sup-error on ``(log P)^{1+1/d}``;
    ``pearson_r`` is the correlation of log sup-error with D.
    """
    D_list = [int(D) for D in D_list]
    if any(b <= a for a, b in zip(D_list, D_list[1:])):
        raise DomainError("D_list must be strictly increasing")
    if seeds[0] == seeds[1]:
        raise DomainError("training and test seeds must differ")
    spec = spec.with_max_degree(max(spec.max_degree, D_list[-1]))
    count = min(sample_factor * count_params(spec, N, D_list[-1]), MAX_SAMPLES)
    train = sample_clouds(spec, N, count, seeds[0])
    test = sample_clouds(spec, N, count, seeds[1])
    train.targets = _oracle_values(oracle, train.clouds)
    test.targets = _oracle_values(oracle, test.clouds)

    rows = []
    for D in D_list:
        t0 = time.perf_counter()
        model = fit_least_squares(spec, N, D, train, ridge)
        elapsed = time.perf_counter() - t0
        err = _errors(model, oracle, test)
        rows.append(
            ConvergenceRow(
                D=D,
                P=len(model.index_set),
                sup_error=float(np.max(np.abs(err))),
                l2_error=float(np.sqrt(np.mean(err**2))),
                fit_seconds=elapsed,
            )
        )
        logger.info("D=%d P=%d sup=%.3e", D, rows[-1].P, rows[-1].sup_error)

    log_err = np.log([r.sup_error for r in rows])
    x = np.log([r.P for r in rows]) ** (1.0 + 1.0 / spec.d)
    if len(rows) >= 2:
        fit = stats.linregress(x, log_err)
        slope, intercept = float(fit.slope), float(fit.intercept)
        pearson = float(stats.pearsonr([r.D for r in rows], log_err).statistic)
    else:
        slope = intercept = pearson = math.nan
    return ConvergenceStudy(rows, slope, intercept, pearson)
