"""One-body Chebyshev bases on [-1, 1]^d.

Basis functions are addressed by flat integer indices.  The flat index is a
bijection onto d-tuples ``k`` ordered first by total degree ``sum(k)`` and
then lexicographically, so index 0 is always the constant function.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .exceptions import DomainError

#: Samples may overshoot the closed domain by this much before rejection.
DOMAIN_TOL = 1e-12

BasisIndex = Union[int, Sequence[int]]


class BasisKind(str, enum.Enum):
    CHEBYSHEV_1D = "Chebyshev1d"
    TENSOR_CHEBYSHEV = "TensorChebyshev"


@dataclass(frozen=True)
class BasisSpec:
    """A one-body basis family.

    Parameters
    ----------
    kind : BasisKind
        ``Chebyshev1d`` (requires ``d == 1``) or ``TensorChebyshev``.
    d : int
        Spatial dimension of a single particle.
    max_degree : int
        Largest admitted one-body degree.
    """

    kind: BasisKind = BasisKind.CHEBYSHEV_1D
    d: int = 1
    max_degree: int = 10

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if int(self.max_degree) != self.max_degree or self.max_degree < 0:
            raise ValueError(f"max_degree must be a nonnegative integer, got {self.max_degree!r}")
        if self.kind is BasisKind.CHEBYSHEV_1D and self.d != 1:
            raise ValueError("Chebyshev1d basis requires d == 1")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "max_degree", int(self.max_degree))

    @classmethod
    def chebyshev(cls, max_degree: int = 10) -> "BasisSpec":
        return cls(BasisKind.CHEBYSHEV_1D, 1, max_degree)

    @classmethod
    def tensor(cls, d: int, max_degree: int = 10) -> "BasisSpec":
        return cls(BasisKind.TENSOR_CHEBYSHEV, d, max_degree)

    def with_max_degree(self, max_degree: int) -> "BasisSpec":
        return BasisSpec(self.kind, self.d, max_degree)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "d": self.d, "max_degree": self.max_degree}

    @classmethod
    def from_dict(cls, data: dict) -> "BasisSpec":
        return cls(BasisKind(data["kind"]), int(data["d"]), int(data["max_degree"]))

    @property
    def size(self) -> int:
        """Number of admitted basis functions."""
        return n_basis(self.d, self.max_degree)


def count_degree(spec: BasisSpec, i: int) -> int:
    """Number of admitted one-body functions of degree exactly ``i``."""
    if i < 0:
        return 0
    if spec.kind is BasisKind.CHEBYSHEV_1D:
        return 1
    return math.comb(i + spec.d - 1, spec.d - 1)


def n_basis(d: int, max_degree: int) -> int:
    """Number of d-tuples with total degree at most ``max_degree``."""
    return math.comb(max_degree + d, d)


@lru_cache(maxsize=64)
def _tuple_table(d: int, max_degree: int) -> np.ndarray:
    rows = []
    for deg in range(max_degree + 1):
        rows.extend(_compositions(deg, d))
    table = np.array(rows, dtype=np.int64).reshape(-1, d)
    table.setflags(write=False)
    return table


def _compositions(total: int, parts: int):
    # lexicographic order of nonnegative d-tuples summing to `total`
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def basis_tuples(spec: BasisSpec, max_degree: int | None = None) -> np.ndarray:
    """Array of shape (K, d) mapping flat index to its Chebyshev multi-degree."""
    D = spec.max_degree if max_degree is None else max_degree
    return _tuple_table(spec.d, D)


def basis_degrees(spec: BasisSpec, max_degree: int | None = None) -> np.ndarray:
    """Degree of each flat index up to ``max_degree`` (nondecreasing)."""
    return basis_tuples(spec, max_degree).sum(axis=1)


def flat_index(spec: BasisSpec, k: Sequence[int]) -> int:
    """Flat index of the d-tuple ``k``."""
    k = tuple(int(t) for t in k)
    if len(k) != spec.d:
        raise DomainError(f"expected a {spec.d}-tuple, got {k}")
    if min(k) < 0:
        raise DomainError(f"negative degree in {k}")
    deg = sum(k)
    offset = n_basis(spec.d, deg - 1) if deg > 0 else 0
    for pos, comp in enumerate(_compositions(deg, spec.d)):
        if comp == k:
            return offset + pos
    raise AssertionError("unreachable")


def _resolve_index(spec: BasisSpec, v: BasisIndex) -> int:
    if isinstance(v, (int, np.integer)):
        idx = int(v)
        if idx < 0:
            raise DomainError(f"basis index must be nonnegative, got {idx}")
    else:
        idx = flat_index(spec, v)
    if idx >= spec.size:
        raise DomainError(
            f"basis index {v!r} exceeds max_degree={spec.max_degree} of {spec.kind.value}"
        )
    return idx


def check_points(spec: BasisSpec, points, *, allow_empty: bool = True) -> np.ndarray:
    """Validate an array of points and return it as float array of shape (M, d).

    For ``d == 1`` a flat vector of coordinates is accepted.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        if spec.d == 1:
            arr = arr[:, None]
        elif arr.shape[0] == spec.d:
            arr = arr[None, :]
        elif arr.size == 0:
            arr = arr.reshape(0, spec.d)
        else:
            raise DomainError(f"points of length {arr.shape[0]} do not match d={spec.d}")
    if arr.ndim != 2 or arr.shape[1] != spec.d:
        raise DomainError(f"expected points of shape (M, {spec.d}), got {arr.shape}")
    if not allow_empty and arr.shape[0] == 0:
        raise DomainError("at least one point is required")
    if not np.all(np.isfinite(arr)):
        raise DomainError("points contain non-finite coordinates")
    if arr.size and np.max(np.abs(arr)) > 1.0 + DOMAIN_TOL:
        raise DomainError(f"coordinates outside [-1, 1] (max |x| = {np.max(np.abs(arr))})")
    return arr


def chebyshev_eval(k: int, x: float) -> float:
    """T_k(x) by the three-term recurrence."""
    if k < 0:
        raise DomainError(f"degree must be nonnegative, got {k}")
    if not abs(x) <= 1.0 + DOMAIN_TOL:
        raise DomainError(f"x={x} outside [-1, 1]")
    t_prev, t = 1.0, x
    if k == 0:
        return t_prev
    for _ in range(k - 1):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t


def chebyshev_table(x: np.ndarray, max_degree: int) -> np.ndarray:
    """T_0..T_max_degree at every entry of ``x``; result has a trailing degree axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (max_degree + 1,))
    out[..., 0] = 1.0
    if max_degree >= 1:
        out[..., 1] = x
    for k in range(2, max_degree + 1):
        out[..., k] = 2.0 * x * out[..., k - 1] - out[..., k - 2]
    return out


def eval_one_body(spec: BasisSpec, v: BasisIndex, p) -> float:
    """Evaluate a single basis function at a single point."""
    idx = _resolve_index(spec, v)
    pt = check_points(spec, p)
    if pt.shape[0] != 1:
        raise DomainError("eval_one_body takes exactly one point")
    k = basis_tuples(spec)[idx]
    val = 1.0
    for ki, xi in zip(k, pt[0]):
        val *= chebyshev_eval(int(ki), float(xi))
    return val


def one_body_values(spec: BasisSpec, points, max_degree: int | None = None) -> np.ndarray:
    """All basis values up to ``max_degree`` at each point, shape (M, K)."""
    D = spec.max_degree if max_degree is None else max_degree
    if D > spec.max_degree:
        raise DomainError(f"max_degree {D} exceeds spec.max_degree {spec.max_degree}")
    pts = check_points(spec, points)
    table = chebyshev_table(pts, D)  # (M, d, D+1)
    tuples = basis_tuples(spec, D)
    vals = table[:, 0, tuples[:, 0]]
    for i in range(1, spec.d):
        vals = vals * table[:, i, tuples[:, i]]
    return vals


def phi4_constant(spec: BasisSpec, i_max: int) -> float:
    """Smallest c with c_d(i) <= c * (i+d-1)...(i+1) for 0 <= i <= i_max."""
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    return max(
        count_degree(spec, i) / math.prod(range(i + 1, i + spec.d)) for i in range(i_max + 1)
    )


def phi4_power_constant(spec: BasisSpec, i_max: int) -> float:
    """Smallest c with c_d(i) <= c * i**(d-1) for 1 <= i <= i_max.

    This is the form of the counting constant consumed by the finite-N
    parameter bound.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    return max(count_degree(spec, i) / i ** (spec.d - 1) for i in range(1, i_max + 1))
