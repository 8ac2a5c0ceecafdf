"""Cluster expansions of multiset functions and their pooled evaluation.

A multiset function of body order N is written as
``V_0 + sum_n sum_{j_1 < ... < j_n} V_n(x_{j_1}, ..., x_{j_n})``.  Expanding
each ``V_n`` in symmetric products and resumming over all clusters gives
``V_0 + sum_n sum_v c_v prod_t A_{v_t}`` with pooled values
``A_v = sum_j phi_v(x_j)`` taken over the whole multiset.  Order-n
coefficient tables hold trimmed tuples (all entries positive) of total
degree at most ``D_n``; the self-interaction terms created by the
resummation are absorbed into the lower orders.
"""

from __future__ import annotations

import enum
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Mapping, Sequence

import numpy as np
from scipy import stats

from ._linalg import solve_least_squares
from .exceptions import DomainError, NumericalError, ResourceCapError
from .fit import DEFAULT_RIDGE, make_rng
from .indexing import count_exact, count_params, enumeration_cap
from .one_body import BasisSpec, basis_degrees, check_points, n_basis, one_body_values
from .symbasis import OpCounter

logger = logging.getLogger(__name__)

NAIVE_MAX_M = 12
VACUUM_MAX_N = 12
CSV_COLUMNS = ("N", "n", "D_n", "P_n", "sup_error", "wall_seconds")

MultisetFunction = Callable[[np.ndarray], float]


class ScheduleKind(str, enum.Enum):
    CONSTANT = "Constant"
    LOG = "LogSchedule"
    BETA = "BetaSchedule"


_KIND_ALIASES = {"constant": ScheduleKind.CONSTANT, "log": ScheduleKind.LOG, "beta": ScheduleKind.BETA}


def _kind(kind) -> ScheduleKind:
    if isinstance(kind, ScheduleKind):
        return kind
    try:
        return ScheduleKind(kind)
    except ValueError:
        pass
    try:
        return _KIND_ALIASES[str(kind).lower()]
    except KeyError:
        raise DomainError(f"unknown schedule kind {kind!r}") from None


@dataclass(frozen=True)
class DegreeSchedule:
    """Per body order degree budgets ``(D_1, ..., D_N)``, nonincreasing in n."""

    N: int
    degrees: tuple[int, ...]
    kind: ScheduleKind = ScheduleKind.CONSTANT
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(D) for D in self.degrees))
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if len(self.degrees) != self.N:
            raise DomainError(f"expected {self.N} degrees, got {len(self.degrees)}")
        if any(D < 0 for D in self.degrees):
            raise DomainError("degrees must be nonnegative")
        if any(b > a for a, b in zip(self.degrees, self.degrees[1:])):
            raise DomainError(f"degrees must be nonincreasing in n, got {self.degrees}")

    def D(self, n: int) -> int:
        return self.degrees[n - 1]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "degrees": list(self.degrees), "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "DegreeSchedule":
        degrees = [int(D) for D in data["degrees"]]
        return cls(len(degrees), tuple(degrees), data["kind"], dict(data.get("params", {})))


def _ceil(x: float) -> int:
    # guard against ceil(50.000000000000007) = 51 from rounding in the formulas
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


def schedule_degrees(kind, N: int, params: Mapping[str, float]) -> DegreeSchedule:
    """Degree schedule of the given kind.

    Constant
        ``D_n = params["D"]``.
    LogSchedule
        ``D_n = ceil(c1 N log N)``; at N = 1 the log-free ``ceil(c1 N)``.
    BetaSchedule
        ``D_n = ceil(c1 n^-beta N)`` for ``n <= (log N)^(-1/beta) N``, else
        ``ceil(c1 N^(1-beta) log N)``; at N = 1 the log-free ``ceil(c1 N)``.

    The result is clipped to be nonincreasing by a running maximum from
    the right.
    """
    kind = _kind(kind)
    if N < 1:
        raise DomainError("N must be >= 1")
    params = dict(params)
    if kind is ScheduleKind.CONSTANT:
        if "D" not in params or int(params["D"]) < 0:
            raise DomainError("Constant schedule needs a nonnegative D")
        raw = [int(params["D"])] * N
    else:
        c1 = float(params.get("c1", 1.0))
        if not c1 > 0 or not math.isfinite(c1):
            raise DomainError(f"c1 must be positive, got {c1}")
        params["c1"] = c1
        if kind is ScheduleKind.BETA:
            beta = float(params.get("beta", math.nan))
            if not 0.0 < beta < 1.0:
                raise DomainError(f"beta must lie in (0, 1), got {beta}")
        if N == 1:
            raw = [_ceil(c1 * N)]
        elif kind is ScheduleKind.LOG:
            raw = [_ceil(c1 * N * math.log(N))] * N
        else:
            threshold = math.log(N) ** (-1.0 / beta) * N
            tail = _ceil(c1 * N ** (1.0 - beta) * math.log(N))
            raw = [_ceil(c1 * n**-beta * N) if n <= threshold else tail for n in range(1, N + 1)]
    degrees = np.maximum.accumulate(np.asarray(raw)[::-1])[::-1]
    return DegreeSchedule(N, tuple(int(D) for D in degrees), kind, params)


MultisetConvention = Literal["full", "trimmed"]


def order_param_count(
    spec: BasisSpec, schedule: DegreeSchedule, convention: MultisetConvention = "full"
) -> list[int]:
    """``P_n`` for n = 1..N: ordered n-tuples with degree <= D_n.

    In the trimmed convention only tuples without zero entries count.
    """
    count = count_exact if convention == "trimmed" else count_params
    return [count(spec, n, schedule.D(n)) for n in range(1, schedule.N + 1)]


def multiset_param_count(
    spec: BasisSpec, schedule: DegreeSchedule, convention: MultisetConvention = "full"
) -> int:
    """Total parameter count of the order tables, excluding the constant term."""
    return sum(order_param_count(spec, schedule, convention))


def _tuples(deg: np.ndarray, length: int, budget: int, start: int):
    # nondecreasing tuples over indices >= start with sum of degrees <= budget;
    # deg is nondecreasing, which makes the early break valid
    K = deg.shape[0]

    def rec(prefix, first, remaining, slots):
        if slots == 0:
            yield prefix
            return
        for v in range(first, K):
            if deg[v] * slots > remaining:
                break
            yield from rec(prefix + (v,), v, remaining - int(deg[v]), slots - 1)

    yield from rec((), start, budget, length)


@dataclass(eq=False)
class ClusterIndex:
    """All order tables of a schedule as one parent-linked family.

    Row 0 is the empty tuple.  Row ``j`` holds a nondecreasing tuple of
    length ``order[j]``; its parent is the tuple with the first (smallest)
    entry dropped and ``lead[j]`` is that entry.  Because the degree
    budgets are nonincreasing in n the parent is always admitted.
    """

    spec: BasisSpec
    schedule: DegreeSchedule
    convention: str
    rows: list[tuple[int, ...]] = field(repr=False)
    order: np.ndarray = field(repr=False)
    parent: np.ndarray = field(repr=False)
    lead: np.ndarray = field(repr=False)
    _lookup: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def n_basis(self) -> int:
        return n_basis(self.spec.d, self.schedule.D(1))

    def position(self, v: Sequence[int]) -> int:
        return self._lookup[tuple(sorted(int(t) for t in v))]

    def levels(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.order == n) for n in range(1, self.schedule.N + 1)]

    @classmethod
    def build(
        cls, spec: BasisSpec, schedule: DegreeSchedule, convention: MultisetConvention = "full", cap=None
    ) -> "ClusterIndex":
        if convention not in ("full", "trimmed"):
            raise DomainError(f"unknown convention {convention!r}")
        counts = order_param_count(spec, schedule, convention)
        cap = enumeration_cap() if cap is None else cap
        if 1 + sum(counts) > cap:
            raise ResourceCapError(f"order tables would have {1 + sum(counts)} rows (cap {cap})")
        D1 = schedule.D(1)
        spec = spec.with_max_degree(max(spec.max_degree, D1))
        deg = basis_degrees(spec, D1)
        start = 1 if convention == "trimmed" else 0
        rows = [()]
        for n in range(1, schedule.N + 1):
            rows.extend(_tuples(deg, n, schedule.D(n), start))
        lookup = {v: j for j, v in enumerate(rows)}
        order = np.array([len(v) for v in rows], dtype=np.int64)
        parent = np.array([lookup[v[1:]] if v else -1 for v in rows], dtype=np.int64)
        lead = np.array([v[0] if v else 0 for v in rows], dtype=np.int64)
        return cls(spec, schedule, convention, rows, order, parent, lead, lookup)


def combined_index_set(
    spec: BasisSpec, schedule: DegreeSchedule, convention: MultisetConvention = "full"
) -> ClusterIndex:
    return ClusterIndex.build(spec, schedule, convention)


def pooled_values(spec: BasisSpec, max_degree: int, x, counter: OpCounter | None = None) -> np.ndarray:
    """``A_v`` for every one-body index of degree <= max_degree; ``A_0`` is the multiset size."""
    pts = check_points(spec, x)
    if pts.shape[0] == 0:
        return np.zeros(n_basis(spec.d, max_degree))
    vals = one_body_values(spec.with_max_degree(max(spec.max_degree, max_degree)), pts, max_degree)
    if counter is not None:
        counter.pool_ops += vals.size
    return vals.sum(axis=0)


def cluster_products(index: ClusterIndex, pooled: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """Products ``prod_t A_{v_t}`` for every row, one multiplication per non-root row."""
    pooled = np.asarray(pooled, dtype=float)
    out = np.empty(pooled.shape[:-1] + (len(index),))
    out[..., 0] = 1.0
    for level in index.levels():
        out[..., level] = pooled[..., index.lead[level]] * out[..., index.parent[level]]
    if counter is not None:
        counter.mults += (len(index) - 1) * int(np.prod(pooled.shape[:-1], dtype=np.int64))
    return out


@dataclass(eq=False)
class MultisetModel:
    """Body-ordered multiset model in pooled-product form.

    ``coefficients[j]`` multiplies the product of pooled values over row
    ``j`` of ``index``; row 0 is the empty product, so ``coefficients[0]``
    is the constant term.  In the ``"full"`` convention tuples may contain
    the constant one-body function (``A_0 = M``); in the ``"trimmed"``
    convention they may not, and ``count_coef`` optionally weights a
    single extra order-1 feature ``A_0``.
    """

    spec: BasisSpec
    schedule: DegreeSchedule
    coefficients: np.ndarray
    count_coef: float | None = None
    index: ClusterIndex | None = field(default=None, repr=False)
    convention: MultisetConvention = "full"

    def __post_init__(self):
        if self.index is None:
            self.index = ClusterIndex.build(self.spec, self.schedule, self.convention)
        self.convention = self.index.convention
        if self.count_coef is not None and self.convention == "full":
            raise DomainError("the count feature is already part of the full convention")
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (len(self.index),):
            raise DomainError(
                f"expected {len(self.index)} coefficients, got shape {self.coefficients.shape}"
            )

    @property
    def N(self) -> int:
        return self.schedule.N

    @property
    def constant_term(self) -> float:
        return float(self.coefficients[0])

    @property
    def n_params(self) -> int:
        """Number of order-table coefficients (the constant term excluded)."""
        return len(self.index) - 1

    def order_table(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Tuples of body order n, shape (P_n, n), and their coefficients."""
        rows = np.flatnonzero(self.index.order == n)
        tuples = np.array([self.index.rows[j] for j in rows], dtype=np.int64).reshape(-1, n)
        return tuples, self.coefficients[rows]

    @classmethod
    def random(
        cls,
        spec: BasisSpec,
        schedule: DegreeSchedule,
        rng: np.random.Generator,
        convention: MultisetConvention = "full",
        count: bool = False,
    ) -> "MultisetModel":
        index = ClusterIndex.build(spec, schedule, convention)
        coef = rng.standard_normal(len(index))
        count_coef = float(rng.standard_normal()) if count else None
        return cls(spec, schedule, coef, count_coef, index)

    def to_dict(self) -> dict:
        orders = []
        for n in range(1, self.N + 1):
            tuples, coef = self.order_table(n)
            terms = [{"v": [int(t) for t in v], "c": float(c)} for v, c in zip(tuples, coef)]
            if n == 1 and self.count_coef is not None:
                terms.insert(0, {"v": [0], "c": float(self.count_coef)})
            orders.append({"n": n, "terms": terms})
        return {
            "spec": self.spec.to_dict(),
            "schedule": self.schedule.to_dict(),
            "convention": self.convention,
            "V0": self.constant_term,
            "orders": orders,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "MultisetModel":
        spec = BasisSpec.from_dict(data["spec"])
        schedule = DegreeSchedule.from_dict(data["schedule"])
        convention = data.get("convention")
        if convention is None:
            # files without the key: zero entries beyond the order-1 count term mean "full"
            has_zero = any(
                0 in term["v"] and not (int(o["n"]) == 1) for o in data["orders"] for term in o["terms"]
            )
            convention = "full" if has_zero else "trimmed"
        index = ClusterIndex.build(spec, schedule, convention)
        coef = np.zeros(len(index))
        coef[0] = float(data["V0"])
        count_coef = None
        for order in data["orders"]:
            n = int(order["n"])
            for term in order["terms"]:
                v = [int(t) for t in term["v"]]
                if len(v) != n:
                    raise DomainError(f"order-{n} term {v} has the wrong length")
                if convention == "trimmed" and v == [0]:
                    count_coef = float(term["c"])
                    continue
                try:
                    coef[index.position(v)] = float(term["c"])
                except KeyError:
                    raise DomainError(f"term {v} is not admitted at order {n}") from None
        return cls(spec, schedule, coef, count_coef, index)

    @classmethod
    def from_json(cls, text: str) -> "MultisetModel":
        return cls.from_dict(json.loads(text))


def multiset_features(
    spec: BasisSpec,
    schedule: DegreeSchedule,
    multisets: Sequence,
    convention: MultisetConvention = "full",
    count: bool = False,
    index: ClusterIndex | None = None,
) -> tuple[np.ndarray, ClusterIndex]:
    """Pooled-product features (plus the optional count column), shape (S, n_coef)."""
    if index is None:
        index = ClusterIndex.build(spec, schedule, convention)
    D1 = schedule.D(1)
    pooled = np.array([pooled_values(spec, D1, x) for x in multisets]).reshape(len(multisets), -1)
    F = cluster_products(index, pooled)
    if count:
        F = np.hstack([F, pooled[:, :1]])
    return F, index


def eval_cluster_expansion(model: MultisetModel, x, counter: OpCounter | None = None) -> float:
    """Evaluate the model on a multiset of any size by pooling once.

    ``counter`` receives the pooling work (one entry per point and admitted
    one-body index), one multiplication per product and the final
    accumulation.
    """
    pooled = pooled_values(model.spec, model.schedule.D(1), x, counter)
    feats = cluster_products(model.index, pooled, counter)
    value = float(feats @ model.coefficients)
    n_terms = len(model.index)
    if model.count_coef is not None:
        value += model.count_coef * pooled[0]
        n_terms += 1
    if counter is not None:
        counter.mults += n_terms
        counter.adds += n_terms - 1
    return value


def eval_cluster_expansion_batch(model: MultisetModel, multisets: Sequence) -> np.ndarray:
    F, _ = multiset_features(
        model.spec, model.schedule, multisets, count=model.count_coef is not None, index=model.index
    )
    coef = model.coefficients
    if model.count_coef is not None:
        coef = np.append(coef, model.count_coef)
    return F @ coef


def _surjections(n: int, k: int):
    for s in itertools.product(range(k), repeat=n):
        if len(set(s)) == k:
            yield s


def cluster_potential(model: MultisetModel, points) -> float:
    """The k-body component ``V_k(y_1, ..., y_k)`` implied by the model, k = len(points).

    A product of n pooled values expands into a sum over maps from the n
    slots to the points; the maps whose image is exactly the given cluster
    make up its contribution.  This is where the self-interaction terms of
    higher orders land in lower orders.
    """
    pts = check_points(model.spec, points)
    k = pts.shape[0]
    if k == 0:
        return model.constant_term
    if k > model.N:
        return 0.0
    phi = one_body_values(model.index.spec, pts, model.schedule.D(1))
    total = 0.0
    for n in range(k, model.N + 1):
        tuples, coef = model.order_table(n)
        if tuples.shape[0] == 0:
            continue
        acc = np.zeros(tuples.shape[0])
        for s in _surjections(n, k):
            term = np.ones(tuples.shape[0])
            for t in range(n):
                term *= phi[s[t], tuples[:, t]]
            acc += term
        total += float(acc @ coef)
    if k == 1 and model.count_coef is not None:
        total += model.count_coef
    return total


def naive_cluster_eval(model: MultisetModel, x) -> float:
    """``V_0 + sum over clusters of V_n`` with every ``V_n`` rebuilt by :func:`cluster_potential`."""
    pts = check_points(model.spec, x)
    M = pts.shape[0]
    if M > NAIVE_MAX_M:
        raise DomainError(f"naive cluster sum limited to M <= {NAIVE_MAX_M}")
    total = model.constant_term
    for n in range(1, min(M, model.N) + 1):
        for K in itertools.combinations(range(M), n):
            total += cluster_potential(model, pts[list(K)])
    return total


def vacuum_expansion(oracle: MultisetFunction, points) -> float:
    """``V_n(x_1..x_n) = sum_{K subset of 1..n} (-1)^{n-|K|} f([x_k : k in K])``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n > VACUUM_MAX_N:
        raise DomainError(f"vacuum expansion limited to n <= {VACUUM_MAX_N}")
    total = 0.0
    for size in range(n + 1):
        sign = -1.0 if (n - size) % 2 else 1.0
        for K in itertools.combinations(range(n), size):
            total += sign * float(oracle(pts[list(K)]))
    return total


def vacuum_cluster_sum(oracle: MultisetFunction, points, N: int) -> float:
    """``f_N(x) = sum over clusters of size <= N of V_n``; equals ``f(x)`` when ``len(x) <= N``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    total = 0.0
    for n in range(min(N, pts.shape[0]) + 1):
        for K in itertools.combinations(range(pts.shape[0]), n):
            total += vacuum_expansion(oracle, pts[list(K)])
    return total


def sample_multisets(
    spec: BasisSpec, count: int, M_max: int, seed: int, M_min: int = 1, sampler=None
) -> list[np.ndarray]:
    """Multisets with sizes uniform in ``M_min..M_max`` and uniform points.

    ``sampler(rng, M)`` may replace the uniform point draw (for instance to
    enforce a minimum separation).
    """
    if count < 1 or M_max < M_min or M_min < 0:
        raise DomainError("invalid multiset sample request")
    rng = make_rng(seed)
    sizes = rng.integers(M_min, M_max + 1, size=count)
    if sampler is None:
        return [rng.uniform(-1.0, 1.0, size=(int(M), spec.d)) for M in sizes]
    return [np.asarray(sampler(rng, int(M)), dtype=float).reshape(int(M), spec.d) for M in sizes]


def fit_multiset(
    oracle: MultisetFunction,
    spec: BasisSpec,
    schedule: DegreeSchedule,
    train: Sequence[np.ndarray],
    ridge: float = DEFAULT_RIDGE,
    count_feature: bool = False,
    targets: np.ndarray | None = None,
    convention: MultisetConvention = "full",
) -> MultisetModel:
    """Joint least squares over the pooled-product features of all orders.

    ``count_feature`` adds the pooled constant ``A_0 = M`` as an extra
    order-1 feature; it only applies to the trimmed convention, where it
    is otherwise absent.

    Raises
    ------
    DomainError
        Fewer than twice as many training multisets as coefficients, or
        non-finite oracle values.
    """
    if count_feature and convention != "trimmed":
        raise DomainError("count_feature only applies to the trimmed convention")
    F, index = multiset_features(spec, schedule, train, convention, count=count_feature)
    n_coef = F.shape[1]
    if len(train) < 2 * n_coef:
        raise DomainError(f"need at least {2 * n_coef} training multisets, got {len(train)}")
    y = np.array([oracle(x) for x in train], dtype=float) if targets is None else np.asarray(targets, float)
    coef, rank = solve_least_squares(F, y, ridge)
    if rank < n_coef:
        logger.warning("rank-deficient multiset design: rank %d < %d", rank, n_coef)
    count_coef = float(coef[-1]) if count_feature else None
    body = coef[:-1] if count_feature else coef
    return MultisetModel(spec, schedule, body, count_coef, index)


@dataclass
class OpCountReport:
    pool_ops: int
    product_ops: int
    measured: int
    C: float


def op_count_bound(model: MultisetModel, M: int, seed: int = 0) -> OpCountReport:
    """Closed-form pooling and product counts and the constant of the linear cost bound.

    The measured count comes from evaluating the model on a random
    multiset of size M; ``C = measured / (M D_1^d + P)``.
    """
    if M < 0:
        raise DomainError("M must be nonnegative")
    K = n_basis(model.spec.d, model.schedule.D(1))
    pool_ops = M * K if M else 0
    product_ops = model.n_params
    counter = OpCounter()
    x = make_rng(seed).uniform(-1.0, 1.0, size=(M, model.spec.d))
    eval_cluster_expansion(model, x, counter)
    scale = M * max(model.schedule.D(1), 1) ** model.spec.d + product_ops
    C = counter.total / scale if scale else math.inf
    if counter.pool_ops != pool_ops:
        raise NumericalError(f"measured pooling count {counter.pool_ops} != closed form {pool_ops}")
    return OpCountReport(pool_ops, product_ops, counter.total, C)


@dataclass
class LinearityReport:
    M: list[int]
    ops: list[int]
    slope: float
    intercept: float
    r_squared: float


def ops_linearity(model: MultisetModel, M_list: Sequence[int], seed: int = 0) -> LinearityReport:
    """Fit measured operation counts against M."""
    ops = [op_count_bound(model, int(M), seed).measured for M in M_list]
    fit = stats.linregress(list(M_list), ops)
    return LinearityReport(list(M_list), ops, float(fit.slope), float(fit.intercept), float(fit.rvalue**2))


@dataclass
class ErrorSplitReport:
    """Per test multiset: ``|f - f_ND|`` and its bound ``|f - f_N| + sum_n C(M,n) e_n``."""

    lhs: np.ndarray
    body_error: np.ndarray
    rhs: np.ndarray
    order_errors: list[float]

    @property
    def holds(self) -> bool:
        return bool(np.all(self.lhs <= self.rhs * (1 + 1e-12) + 1e-14))


def error_split(
    f: MultisetFunction,
    components: Callable[[np.ndarray], float],
    fitted: Sequence[Callable[[np.ndarray], float]],
    fitted_constant: float,
    test: Sequence[np.ndarray],
) -> ErrorSplitReport:
    """Check the split of the total error into body-order and per-order fitting errors.

    ``components(y)`` is the exact ``V_n`` of a cluster ``y`` (n = len(y),
    including n = 0); ``fitted[n-1]`` approximates it for n = 1..N.  The
    per-order sup error ``e_n`` is taken over every n-cluster of the test
    multisets.
    """
    N = len(fitted)
    if not len(test):
        raise DomainError("error split needs at least one test multiset")
    d = np.asarray(test[0]).shape[1]
    V0 = components(np.zeros((0, d)))
    e = [abs(V0 - fitted_constant)] + [0.0] * N
    f_vals, fN_vals, fND_vals = [], [], []
    for x in test:
        x = np.asarray(x, dtype=float)
        fN, fND = V0, fitted_constant
        for n in range(1, min(N, x.shape[0]) + 1):
            for K in itertools.combinations(range(x.shape[0]), n):
                y = x[list(K)]
                exact, approx = components(y), fitted[n - 1](y)
                e[n] = max(e[n], abs(exact - approx))
                fN += exact
                fND += approx
        f_vals.append(f(x))
        fN_vals.append(fN)
        fND_vals.append(fND)
    f_vals, fN_vals, fND_vals = map(np.asarray, (f_vals, fN_vals, fND_vals))
    lhs = np.abs(f_vals - fND_vals)
    body = np.abs(f_vals - fN_vals)
    rhs = body + np.array(
        [e[0] + sum(math.comb(len(x), n) * e[n] for n in range(1, N + 1)) for x in test]
    )
    return ErrorSplitReport(lhs, body, rhs, e)
