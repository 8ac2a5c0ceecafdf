"""Ordered multi-indices, downset index sets and exact parameter counts."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .exceptions import ResourceCapError
from .one_body import BasisSpec, basis_degrees, count_degree

DEFAULT_CAP = 10**8


def enumeration_cap() -> int:
    """Largest index set we are willing to materialize (``SYMTENSOR_CAP`` overrides)."""
    raw = os.environ.get("SYMTENSOR_CAP")
    if raw is None or raw == "":
        return DEFAULT_CAP
    try:
        cap = int(float(raw))
    except ValueError as exc:
        raise ValueError(f"SYMTENSOR_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError("SYMTENSOR_CAP must be positive")
    return cap


@dataclass(eq=False)
class IndexSet:
    """A downset of ordered N-tuples of basis indices.

    Rows of ``indices`` are nondecreasing tuples stored in lexicographic
    order.  ``parent[j]`` is the row obtained by zeroing the first nonzero
    entry of row ``j`` and ``lead[j]`` is the entry that was removed; the
    all-zero root has ``parent == -1``.  Every parent precedes its child.
    """

    spec: BasisSpec
    N: int
    D: int
    indices: np.ndarray
    parent: np.ndarray = field(repr=False)
    lead: np.ndarray = field(repr=False)
    degrees: np.ndarray = field(repr=False)
    _lookup: dict | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.indices.shape[0]

    @property
    def nnz(self) -> np.ndarray:
        """Number of nonzero entries per row (the body order of the product)."""
        return np.count_nonzero(self.indices, axis=1)

    @property
    def max_index(self) -> int:
        return int(self.indices.max()) if len(self) else 0

    def position(self, v: Sequence[int]) -> int:
        if self._lookup is None:
            self._lookup = {tuple(row): j for j, row in enumerate(self.indices.tolist())}
        key = tuple(sorted(int(t) for t in v))
        if len(key) != self.N:
            raise KeyError(f"expected an {self.N}-tuple, got {tuple(v)}")
        return self._lookup[key]

    def __contains__(self, v) -> bool:
        try:
            self.position(v)
        except KeyError:
            return False
        return True

    def levels(self) -> list[np.ndarray]:
        """Row positions grouped by number of nonzeros; level k depends only on level k-1."""
        nnz = self.nnz
        return [np.flatnonzero(nnz == k) for k in range(1, self.N + 1) if np.any(nnz == k)]

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.indices.tolist()]

    @classmethod
    def from_rows(cls, spec: BasisSpec, N: int, D: int, rows) -> "IndexSet":
        """Build parent links for an arbitrary downset of sorted N-tuples."""
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, N)
        arr = np.sort(arr, axis=1)
        if arr.shape[0]:
            order = np.lexsort(arr.T[::-1])
            arr = arr[order]
        deg_of = basis_degrees(spec, spec.max_degree)
        if arr.size and arr.max() >= deg_of.shape[0]:
            raise ValueError("index set uses basis indices beyond spec.max_degree")
        degrees = deg_of[arr].sum(axis=1) if arr.size else np.zeros(arr.shape[0], np.int64)
        lookup = {tuple(row): j for j, row in enumerate(arr.tolist())}
        parent = np.full(arr.shape[0], -1, dtype=np.int64)
        lead = np.zeros(arr.shape[0], dtype=np.int64)
        for j, row in enumerate(arr.tolist()):
            nz = next((t for t, val in enumerate(row) if val != 0), None)
            if nz is None:
                continue
            lead[j] = row[nz]
            reduced = list(row)
            reduced[nz] = 0
            try:
                parent[j] = lookup[tuple(reduced)]
            except KeyError:
                raise ValueError(f"rows are not a downset: parent of {tuple(row)} missing") from None
        return cls(spec, N, D, arr, parent, lead, degrees, lookup)


def _positive_tuples(deg: np.ndarray, length: int, budget: int) -> Iterator[tuple[int, ...]]:
    # nondecreasing tuples of indices >= 1 with sum of degrees <= budget
    K = deg.shape[0]

    def rec(prefix: tuple[int, ...], start: int, remaining: int, slots: int):
        if slots == 0:
            yield prefix
            return
        for v in range(start, K):
            if deg[v] * slots > remaining:
                break
            yield from rec(prefix + (v,), v, remaining - int(deg[v]), slots - 1)

    yield from rec((), 1, budget, length)


def enumerate_ordered(
    spec: BasisSpec,
    N: int,
    D: int,
    *,
    order_degrees: Sequence[int] | None = None,
    cap: int | None = None,
) -> IndexSet:
    """All ordered N-tuples with total degree <= D, lexicographically sorted.

    Parameters
    ----------
    spec : BasisSpec
        One-body basis; ``spec.max_degree`` must be at least ``D``.
    N : int
        Tuple length.
    D : int
        Total degree budget.
    order_degrees : sequence of int, optional
        Per body order budgets ``(D_1, ..., D_N)``: a row with ``n`` nonzero
        entries is admitted when its degree is at most ``D_n``.  Must be
        nonincreasing so the result stays a downset.
    cap : int, optional
        Maximum number of rows; defaults to :func:`enumeration_cap`.

    Raises
    ------
    ResourceCapError
        If the count would exceed the cap.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if D < 0:
        raise ValueError(f"D must be >= 0, got {D}")
    if order_degrees is None:
        budgets = [D] * N
    else:
        budgets = [int(b) for b in order_degrees]
        if len(budgets) != N:
            raise ValueError("order_degrees must have length N")
        if any(b > a for a, b in zip(budgets, budgets[1:])):
            raise ValueError("order_degrees must be nonincreasing")
        D = max(budgets) if budgets else 0
    if D > spec.max_degree:
        spec = spec.with_max_degree(D)
    cap = enumeration_cap() if cap is None else cap
    total = 1 + sum(count_exact(spec, n, budgets[n - 1]) for n in range(1, N + 1))
    if total > cap:
        raise ResourceCapError(f"index set would have {total} rows (cap {cap})")

    deg = basis_degrees(spec, D)
    rows = [(0,) * N]
    for n in range(1, N + 1):
        pad = (0,) * (N - n)
        rows.extend(pad + t for t in _positive_tuples(deg, n, budgets[n - 1]))
    return IndexSet.from_rows(spec, N, D, rows)


def _count_table(spec: BasisSpec, N: int, D: int) -> list[list[int]]:
    # table[b][s]: multisets of s nonzero indices with total degree exactly b
    cells = (N + 1) * (D + 1)
    if cells > enumeration_cap():
        raise ResourceCapError(f"counting table would have {cells} cells (cap {enumeration_cap()})")
    table = [[0] * (N + 1) for _ in range(D + 1)]
    table[0][0] = 1
    for i in range(1, D + 1):
        c = count_degree(spec, i)
        # ways to pick k items with repetition from c functions of degree i
        ways = [math.comb(k + c - 1, k) for k in range(N + 1)]
        new = [row[:] for row in table]
        for b in range(D + 1):
            for s in range(N + 1):
                base = table[b][s]
                if not base:
                    continue
                k = 1
                while k <= N - s and b + k * i <= D:
                    new[b + k * i][s + k] += base * ways[k]
                    k += 1
        table = new
    return table


def count_params(spec: BasisSpec, N: int, D: int) -> int:
    """Exact P(N, D, d): ordered N-tuples with total degree <= D."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if D < 0:
        raise ValueError(f"D must be >= 0, got {D}")
    table = _count_table(spec, N, D)
    return sum(sum(row) for row in table)


def count_exact(spec: BasisSpec, n: int, D: int) -> int:
    """Ordered tuples of exactly ``n`` nonzero indices with total degree <= D."""
    if n == 0:
        return 1
    table = _count_table(spec, n, D)
    return sum(row[n] for row in table)


def partition_count(n: int) -> int:
    """Number of integer partitions p(n) via Euler's pentagonal recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]

