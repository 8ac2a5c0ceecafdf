"""Pooled one-body sums and the symmetric product basis.

For a cloud ``x = (x_1, ..., x_N)`` the pooled values are
``A_v(x) = sum_n phi_v(x_n)`` and the product basis over an ordered
multi-index ``v`` is ``prod_t A_{v_t}``.  Two conventions are supported:

``raw``
    all N slots are multiplied, so zero entries contribute ``A_0 = N``.
``trimmed``
    zero entries are dropped; ``raw = N**(#zeros) * trimmed``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .exceptions import DomainError, NumericalError
from .indexing import IndexSet, enumerate_ordered
from .one_body import BasisSpec, check_points, one_body_values

Convention = Literal["raw", "trimmed"]

NAIVE_MAX_N = 8


@dataclass
class OpCounter:
    """Arithmetic operation tally for a single evaluation call."""

    pool_ops: int = 0
    mults: int = 0
    adds: int = 0

    @property
    def total(self) -> int:
        return self.pool_ops + self.mults + self.adds


def check_clouds(spec: BasisSpec, clouds, N: int | None = None) -> np.ndarray:
    """Validate a batch of equally sized clouds; returns shape (S, N, d)."""
    arr = np.asarray(clouds, dtype=float)
    if spec.d == 1 and arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] != spec.d:
        raise DomainError(f"expected clouds of shape (S, N, {spec.d}), got {arr.shape}")
    if N is not None and arr.shape[1] != N:
        raise DomainError(f"cloud size {arr.shape[1]} does not match N={N}")
    check_points(spec, arr.reshape(-1, spec.d))
    return arr


def pool(spec: BasisSpec, cloud, max_deg: int | None = None, counter: OpCounter | None = None) -> np.ndarray:
    """Pooled values ``A_v`` for every admitted index of degree <= ``max_deg``.

    Returns a vector indexed by flat basis index.  ``A_0`` equals the
    number of points.
    """
    pts = check_points(spec, cloud)
    vals = one_body_values(spec, pts, max_deg)
    if counter is not None:
        counter.pool_ops += vals.size
    return vals.sum(axis=0)


def pool_batch(spec: BasisSpec, clouds, max_deg: int | None = None) -> np.ndarray:
    """Pooled values for a batch of clouds, shape (S, K)."""
    arr = check_clouds(spec, clouds)
    S, N, d = arr.shape
    vals = one_body_values(spec, arr.reshape(S * N, d), max_deg)
    return vals.reshape(S, N, -1).sum(axis=1)


def _recurse(index_set: IndexSet, factors: np.ndarray, root: np.ndarray) -> np.ndarray:
    out = np.empty(factors.shape[:-1] + (len(index_set),))
    out[..., 0] = root
    for level in index_set.levels():
        out[..., level] = factors[..., index_set.lead[level]] * out[..., index_set.parent[level]]
    return out


def eval_product_basis(
    index_set: IndexSet,
    pooled: np.ndarray,
    convention: Convention = "raw",
    counter: OpCounter | None = None,
) -> np.ndarray:
    """All products ``prod_t A_{v_t}`` over ``index_set`` by parent-link recursion.

    Each non-root entry costs one multiplication: the product for ``v`` is
    the product of its parent times the pooled value that was zeroed out.
    In the raw convention the pooled vector is first rescaled by ``1/A_0``
    (part of the pooling stage) so that the recursion still uses a single
    multiplication per entry.

    Parameters
    ----------
    index_set : IndexSet
    pooled : ndarray, shape (K,) or (S, K)
        Pooled values indexed by flat basis index.
    convention : {"raw", "trimmed"}
    counter : OpCounter, optional
        Receives ``len(index_set) - 1`` multiplications per cloud.
    """
    pooled = np.asarray(pooled, dtype=float)
    if pooled.shape[-1] <= index_set.max_index:
        raise DomainError(
            f"pooled vector has {pooled.shape[-1]} entries, index set needs {index_set.max_index + 1}"
        )
    if convention == "raw":
        a0 = pooled[..., 0]
        if np.any(a0 == 0):
            raise DomainError("raw convention needs a nonempty cloud (A_0 > 0)")
        factors = pooled / a0[..., None]
        root = a0**index_set.N
    elif convention == "trimmed":
        factors = pooled
        root = np.ones(pooled.shape[:-1])
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if counter is not None:
        n_clouds = int(np.prod(pooled.shape[:-1], dtype=np.int64))
        counter.mults += (len(index_set) - 1) * n_clouds
    return _recurse(index_set, factors, root)


def direct_products(index_set: IndexSet, pooled: np.ndarray, convention: Convention = "raw") -> np.ndarray:
    """Elementwise products without recursion (reference path)."""
    pooled = np.asarray(pooled, dtype=float)
    idx = index_set.indices
    if convention == "trimmed":
        gathered = np.where(idx == 0, 1.0, pooled[..., idx])
    else:
        gathered = pooled[..., idx]
    return np.prod(gathered, axis=-1)


def design_matrix(index_set: IndexSet, clouds, convention: Convention = "raw") -> np.ndarray:
    """Product-basis features for a batch of clouds, shape (S, P)."""
    spec = index_set.spec
    arr = check_clouds(spec, clouds, index_set.N)
    pooled = pool_batch(spec, arr, index_set.D)
    return eval_product_basis(index_set, pooled, convention)


@dataclass(eq=False)
class SymmetricModel:
    """Coefficients over an index set; evaluates ``sum_v c_v A_v`` (raw convention)."""

    index_set: IndexSet
    coefficients: np.ndarray
    residual: float | None = field(default=None, compare=False)

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (len(self.index_set),):
            raise ValueError(
                f"expected {len(self.index_set)} coefficients, got shape {self.coefficients.shape}"
            )

    @property
    def spec(self) -> BasisSpec:
        return self.index_set.spec

    @property
    def N(self) -> int:
        return self.index_set.N

    @property
    def D(self) -> int:
        return self.index_set.D

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "N": self.N,
            "D": self.D,
            "terms": [
                {"v": list(v), "c": float(c)}
                for v, c in zip(self.index_set.tuples(), self.coefficients)
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetricModel":
        spec = BasisSpec.from_dict(data["spec"])
        index_set = enumerate_ordered(spec, int(data["N"]), int(data["D"]))
        coef = np.zeros(len(index_set))
        for term in data["terms"]:
            coef[index_set.position(term["v"])] = float(term["c"])
        return cls(index_set, coef)

    @classmethod
    def from_json(cls, text: str) -> "SymmetricModel":
        return cls.from_dict(json.loads(text))


def eval_model(model: SymmetricModel, cloud, counter: OpCounter | None = None) -> float:
    pts = check_points(model.spec, cloud)
    if pts.shape[0] != model.N:
        raise DomainError(f"cloud has {pts.shape[0]} points, model expects N={model.N}")
    pooled = pool(model.spec, pts, model.D, counter)
    feats = eval_product_basis(model.index_set, pooled, "raw", counter)
    if counter is not None:
        counter.mults += len(model.index_set)
        counter.adds += len(model.index_set) - 1
    return float(feats @ model.coefficients)


def eval_model_batch(model: SymmetricModel, clouds) -> np.ndarray:
    return design_matrix(model.index_set, clouds) @ model.coefficients


def eval_sym_naive(spec: BasisSpec, v: Sequence[int], cloud) -> float:
    """(1/N!) sum over permutations of prod_t phi_{v_t}(x_{sigma t}); reference only."""
    pts = check_points(spec, cloud)
    N = pts.shape[0]
    if len(v) != N:
        raise DomainError(f"multi-index length {len(v)} does not match cloud size {N}")
    if N > NAIVE_MAX_N:
        raise DomainError(f"naive symmetrization limited to N <= {NAIVE_MAX_N}")
    v = np.asarray(v, dtype=np.int64)
    deg = int(np.max(v)) if N else 0
    max_deg = spec.max_degree
    vals = one_body_values(spec, pts, max_deg)
    if deg >= vals.shape[1]:
        raise DomainError("multi-index uses indices beyond spec.max_degree")
    total = 0.0
    for sigma in itertools.permutations(range(N)):
        total += math.prod(vals[sigma[t], v[t]] for t in range(N))
    return total / math.factorial(N)


def _sym_naive_batch(index_set: IndexSet, clouds: np.ndarray) -> np.ndarray:
    spec, N = index_set.spec, index_set.N
    S = clouds.shape[0]
    phi = one_body_values(spec, clouds.reshape(S * N, spec.d), index_set.D).reshape(S, N, -1)
    idx = index_set.indices
    out = np.zeros((S, len(index_set)))
    for sigma in itertools.permutations(range(N)):
        term = np.ones((S, len(index_set)))
        for t in range(N):
            term *= phi[:, sigma[t], idx[:, t]]
        out += term
    return out / math.factorial(N)


def change_of_basis(
    spec: BasisSpec, N: int, D: int, *, seed: int = 0, oversample: int = 4
) -> tuple[IndexSet, np.ndarray]:
    """Matrix expressing each symmetrized tensor function in the product basis.

    Row ``v`` holds the coefficients of ``sym[phi_v]`` against ``A_w``
    (raw convention), computed by least-squares collocation on
    ``oversample * P`` uniformly random clouds.

    Returns
    -------
    index_set : IndexSet
    C : ndarray, shape (P, P)
    """
    if N > 5 or D > 8:
        raise DomainError("change_of_basis is an oracle for N <= 5, D <= 8")
    index_set = enumerate_ordered(spec, N, D)
    P = len(index_set)
    rng = np.random.Generator(np.random.Philox(seed))
    clouds = rng.uniform(-1.0, 1.0, size=(oversample * P, N, spec.d))
    F = design_matrix(index_set, clouds)
    S = _sym_naive_batch(index_set, clouds)
    scale = np.linalg.norm(F, axis=0)
    Fs = F / scale
    sol, _, rank, _ = np.linalg.lstsq(Fs, S, rcond=None)
    if rank < P:
        raise NumericalError(f"collocation system rank {rank} < {P}: product basis is degenerate")
    C = (sol / scale[:, None]).T
    return index_set, C
