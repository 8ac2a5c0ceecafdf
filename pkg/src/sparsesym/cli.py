"""Command-line front end: ``sparsesym <command> [options]``.

Exit codes: 0 success, 2 validation error, 3 resource cap exceeded,
4 numerical failure (including a failed verification verdict).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import bounds
from .exceptions import DomainError, NumericalError, ResourceCapError
from .fit import (
    DEFAULT_RIDGE,
    SAMPLE_FACTOR,
    convergence_study,
    fit_least_squares,
    make_rng,
    pair_target,
    sample_clouds,
)
from .indexing import count_params
from .mset import (
    eval_cluster_expansion_batch,
    fit_multiset,
    multiset_param_count,
    ops_linearity,
    order_param_count,
    sample_multisets,
    schedule_degrees,
)
from .one_body import BasisSpec, phi4_constant, phi4_power_constant
from .symbasis import (
    SymmetricModel,
    change_of_basis,
    direct_products,
    eval_model,
    eval_product_basis,
    pool_batch,
)
from .tightbind import (
    SiteEnergyOracle,
    TightBindingOracle,
    body_ordered_site_energy,
    cluster_reconstruction,
    estimate_body_order_rate,
    sample_configuration,
    site_energy,
)

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_NUMERICAL = 0, 2, 3, 4
MSET_MAX_SAMPLES = 20_000
MSET_TEST_SAMPLES = 2_000
OPS_M_LIST = (10, 20, 50, 100, 200, 500, 1000)


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"1..8"`` (inclusive) or ``"2,4,6"``."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            a, b = int(lo), int(hi)
            if b < a:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}: {exc}") from None


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"value must be finite, got {text!r}")
    return value


def fmt(value) -> str:
    """Locale-independent cell formatting; floats keep 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else fmt(value)
    return value


@dataclass
class Table:
    columns: Sequence[str]
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            doc = {"rows": [{k: _json_value(r.get(k)) for k in self.columns} for r in self.rows]}
            if self.summary:
                doc["summary"] = {k: _json_value(v) for k, v in self.summary.items()}
            return json.dumps(doc, indent=2, sort_keys=False) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow([fmt(r.get(k)) for k in self.columns])
        return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _summary_to_stderr(table: Table, args) -> None:
    if args.format == "csv" and table.summary:
        for k, v in table.summary.items():
            print(f"{k}={fmt(v)}", file=sys.stderr)


def _spec(d: int, D: int) -> BasisSpec:
    return BasisSpec.chebyshev(max(D, 0)) if d == 1 else BasisSpec.tensor(d, max(D, 0))


def _check_d(d: int) -> None:
    if d < 1:
        raise DomainError("--d must be >= 1")


def _bound_row(d: int, N: int, D: int) -> dict:
    # the bounds need D >= 1; P is nondecreasing in D, so the D = 1 value covers D = 0
    D_eff = max(D, 1)
    spec = _spec(d, D_eff)
    c = phi4_constant(spec, D_eff)
    c_tilde = phi4_power_constant(spec, D_eff)
    return {
        "hr_bound": bounds.hr_bound(D_eff) if d == 1 else None,
        "infN_bound": bounds.infinite_N_bound(d, D_eff, c),
        "finN_bound": bounds.finite_N_bound(d, N, D_eff, c_tilde),
        "log_infN": bounds.log_infinite_N_bound(d, D_eff, c),
        "log_finN": bounds.log_finite_N_bound(d, N, D_eff, c_tilde),
        "log_hr": bounds.log_hr_bound(D_eff) if d == 1 else None,
        "c": c,
        "c_tilde": c_tilde,
    }


def cmd_count(args) -> Table:
    _check_d(args.d)
    table = Table(["N", "D", "P", "hr_bound", "infN_bound", "finN_bound", "dominated"])
    for N in args.N:
        if N < 1:
            raise DomainError("--N must be >= 1")
        for D in args.D:
            if D < 0:
                raise DomainError("--D must be >= 0")
            P = count_params(_spec(args.d, D), N, D)
            b = _bound_row(args.d, N, D)
            logs = [b["log_infN"], b["log_finN"]] + ([b["log_hr"]] if args.d == 1 else [])
            dominated = all(math.log(P) <= lv for lv in logs)
            table.rows.append(
                {
                    "N": N,
                    "D": D,
                    "P": P,
                    "hr_bound": b["hr_bound"],
                    "infN_bound": b["infN_bound"],
                    "finN_bound": b["finN_bound"],
                    "dominated": dominated,
                }
            )
    return table


def cmd_bounds(args) -> Table:
    _check_d(args.d)
    table = Table(
        ["d", "N", "D", "p_d", "zeta", "c", "beta_d", "c_tilde", "c1", "c2", "hr_bound", "infN_bound", "finN_bound"]
    )
    for N in args.N:
        for D in args.D:
            if N < 1 or D < 1:
                raise DomainError("bounds need N >= 1 and D >= 1")
            b = _bound_row(args.d, N, D)
            c1, c2 = bounds.finite_N_constants(args.d, b["c_tilde"])
            table.rows.append(
                {
                    "d": args.d,
                    "N": N,
                    "D": D,
                    "p_d": bounds.p_d(args.d),
                    "zeta": bounds.zeta(args.d + 1),
                    "c": b["c"],
                    "beta_d": bounds.beta_d(args.d, b["c"]),
                    "c_tilde": b["c_tilde"],
                    "c1": c1,
                    "c2": c2,
                    "hr_bound": b["hr_bound"],
                    "infN_bound": b["infN_bound"],
                    "finN_bound": b["finN_bound"],
                }
            )
    return table


def basis_check(d: int, N: int, D: int, seed: int = 0, n_cases: int = 200) -> dict:
    """Change-of-basis structure plus recursive/direct and permutation checks."""
    spec = _spec(d, D)
    index_set, C = change_of_basis(spec, N, D, seed=seed)
    upper = float(np.max(np.abs(np.triu(C, 1)))) if C.shape[0] > 1 else 0.0
    zero_free = np.all(index_set.indices != 0, axis=1)
    diag = np.diag(C)
    target = 1.0 / math.factorial(N)
    diag_err = float(np.max(np.abs(diag[zero_free] - target))) if np.any(zero_free) else 0.0

    rng = make_rng(seed)
    clouds = rng.uniform(-1.0, 1.0, size=(n_cases, N, d))
    pooled = pool_batch(spec, clouds, D)
    rec = eval_product_basis(index_set, pooled)
    ref = direct_products(index_set, pooled)
    rel = float(np.max(np.abs(rec - ref) / np.maximum(np.abs(ref), np.finfo(float).tiny)))

    model = SymmetricModel(index_set, rng.standard_normal(len(index_set)))
    perm_err = 0.0
    for cloud in clouds[: min(n_cases, 50)]:
        base = eval_model(model, cloud)
        permuted = eval_model(model, cloud[rng.permutation(N)])
        perm_err = max(perm_err, abs(permuted - base) / max(abs(base), 1e-300))
    tol = 1e-8
    verdict = upper <= tol and diag_err <= tol and rel <= 1e-12 and perm_err <= 1e-12
    return {
        "d": d,
        "N": N,
        "D": D,
        "P": len(index_set),
        "max_upper": upper,
        "diagonal": target if np.any(zero_free) else None,
        "max_diag_error": diag_err,
        "recursion_rel_error": rel,
        "permutation_rel_error": perm_err,
        "verdict": "PASS" if verdict else "FAIL",
    }


def cmd_basis_check(args) -> Table:
    _check_d(args.d)
    if len(args.N) != 1 or len(args.D) != 1:
        raise DomainError("basis-check takes a single N and D")
    report = basis_check(args.d, args.N[0], args.D[0], args.seed)
    table = Table(list(report.keys()), [report])
    table.failed = report["verdict"] != "PASS"
    return table


def cmd_fit(args) -> Table:
    _check_d(args.d)
    if len(args.N) != 1:
        raise DomainError("fit takes a single N")
    D_list = args.D if args.D_given else list(range(2, 13))
    study = convergence_study(
        _spec(args.d, max(D_list)), args.N[0], pair_target, D_list, (args.seed, args.seed + 1)
    )
    table = Table(["D", "P", "sup_error", "l2_error", "fit_seconds"])
    for r in study.rows:
        table.rows.append(
            {
                "D": r.D,
                "P": r.P,
                "sup_error": r.sup_error,
                "l2_error": r.l2_error,
                "fit_seconds": r.fit_seconds if args.timing else None,
            }
        )
    table.summary = {"alpha": study.alpha, "intercept": study.intercept, "pearson_r": study.pearson_r}
    return table


def _tb_oracle(args) -> TightBindingOracle:
    return TightBindingOracle(args.h0, args.gamma0, args.observable, args.z0, args.d)


def _schedule_params(args) -> dict:
    if args.schedule == "constant":
        if not args.D_given or len(args.D) != 1:
            raise DomainError("the constant schedule needs a single --D")
        return {"D": args.D[0]}
    params = {"c1": args.c1}
    if args.schedule == "beta":
        params["beta"] = args.beta
    return params


def mset_experiment(
    tb: TightBindingOracle,
    N_list: Sequence[int],
    schedule: str,
    params: dict,
    p: float,
    seed: int,
    min_separation: float = 0.1,
    timing: bool = False,
):
    """Fit cluster expansions to the tight-binding site energy for every N.

    Training and test multisets (disjoint seeds) have sizes uniform in
    ``1..floor(N^p)``; the neighbors sit in [-1, 1]^d around a site at the
    origin.
    """
    oracle = SiteEnergyOracle(tb)
    rows, per_N = [], []
    fixed = [np.zeros(tb.d)]

    def sampler(rng, M):
        return sample_configuration(rng, M, tb.d, min_separation, fixed=fixed)

    model = None
    for N in N_list:
        if N < 1:
            raise DomainError("N must be >= 1")
        sched = schedule_degrees(schedule, N, {**params, "p": p})
        spec = _spec(tb.d, sched.D(1))
        P = multiset_param_count(spec, sched)
        M_max = max(1, int(math.floor(N**p + 1e-9)))
        n_train = min(SAMPLE_FACTOR * (P + 1), MSET_MAX_SAMPLES)
        if n_train < 2 * (P + 1):
            raise ResourceCapError(f"N={N}: {P + 1} coefficients exceed the sample budget")
        t0 = time.perf_counter()
        train = sample_multisets(spec, n_train, M_max, seed, sampler=sampler)
        model = fit_multiset(oracle, spec, sched, train)
        elapsed = time.perf_counter() - t0
        test = sample_multisets(spec, MSET_TEST_SAMPLES, M_max, seed + 1, sampler=sampler)
        truth = np.array([oracle(x) for x in test])
        sup = float(np.max(np.abs(eval_cluster_expansion_batch(model, test) - truth)))
        per_N.append((N, P, sup))
        for n, P_n in enumerate(order_param_count(spec, sched), start=1):
            rows.append(
                {
                    "N": N,
                    "n": n,
                    "D_n": sched.D(n),
                    "P_n": P_n,
                    "sup_error": sup,
                    "wall_seconds": elapsed if timing else None,
                }
            )
    lin = ops_linearity(model, OPS_M_LIST, seed)
    return rows, per_N, lin


def cmd_mset(args) -> Table:
    _check_d(args.d)
    N_list = args.N if args.N_given else [2, 4, 6, 8]
    rows, per_N, lin = mset_experiment(
        _tb_oracle(args), N_list, args.schedule, _schedule_params(args), args.p, args.seed, timing=args.timing
    )
    table = Table(["N", "n", "D_n", "P_n", "sup_error", "wall_seconds"], rows)
    table.summary = {f"P_total[N={N}]": P for N, P, _ in per_N}
    table.summary.update({"ops_slope": lin.slope, "ops_intercept": lin.intercept, "ops_r_squared": lin.r_squared})
    return table


def cmd_tb_demo(args) -> Table:
    tb = _tb_oracle(args)
    N_list = args.N if args.N_given else list(range(2, 13))
    rng = make_rng(args.seed)
    configs = [sample_configuration(rng, args.M, tb.d) for _ in range(args.configs)]
    eta, sups = estimate_body_order_rate(tb, configs, N_list)
    table = Table(["N", "sup_error"], [{"N": N, "sup_error": s} for N, s in zip(N_list, sups)])
    recon = 0.0
    for x in configs[:5]:
        for N in N_list[:5]:
            sub = x[: min(5, len(x))]
            recon = max(recon, abs(cluster_reconstruction(tb, sub, N) - body_ordered_site_energy(tb, sub, N)))
    table.summary = {"eta": eta, "reconstruction_error": recon, "site_energy_first": site_energy(tb, configs[0])}
    return table


def cmd_export_model(args) -> str:
    _check_d(args.d)
    if args.mset:
        tb = _tb_oracle(args)
        N = args.N[0] if args.N_given else 2
        sched = schedule_degrees(args.schedule, N, {**_schedule_params(args), "p": args.p})
        spec = _spec(args.d, sched.D(1))
        P = multiset_param_count(spec, sched)
        M_max = max(1, int(math.floor(N**args.p + 1e-9)))
        fixed = [np.zeros(tb.d)]
        train = sample_multisets(
            spec,
            min(SAMPLE_FACTOR * (P + 1), MSET_MAX_SAMPLES),
            M_max,
            args.seed,
            sampler=lambda rng, M: sample_configuration(rng, M, tb.d, 0.1, fixed=fixed),
        )
        model = fit_multiset(SiteEnergyOracle(tb), spec, sched, train)
        return model.to_json(indent=1) + "\n"
    if len(args.N) != 1 or len(args.D) != 1:
        raise DomainError("export-model takes a single N and D")
    N, D = args.N[0], args.D[0]
    spec = _spec(args.d, D)
    P = count_params(spec, N, D)
    samples = sample_clouds(spec, N, SAMPLE_FACTOR * P, args.seed).with_targets(pair_target)
    model = fit_least_squares(spec, N, D, samples, DEFAULT_RIDGE)
    return model.to_json(indent=1) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsesym", description="Sparse symmetric polynomial approximation experiments."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, N_default="4", D_default="6"):
        p.add_argument("--d", type=int, default=1, help="point dimension")
        p.add_argument("--N", type=_range_arg, default=None, help=f"N, range a..b or list (default {N_default})")
        p.add_argument("--D", type=_range_arg, default=None, help=f"D, range a..b or list (default {D_default})")
        p.add_argument("--seed", type=int, default=0, help="64-bit seed for the Philox generator")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--timing", action="store_true", help="report wall-clock columns")
        p.set_defaults(N_default=N_default, D_default=D_default)

    def schedule_opts(p):
        p.add_argument("--schedule", choices=("constant", "log", "beta"), default="log")
        p.add_argument("--c1", type=_finite_float, default=1.0)
        p.add_argument("--beta", type=_finite_float, default=0.5)
        p.add_argument("--p", type=_finite_float, default=1.0, help="multiset sizes up to N^p")

    def tb_opts(p):
        p.add_argument("--h0", type=_finite_float, default=1.0)
        p.add_argument("--gamma0", type=_finite_float, default=1.0)
        p.add_argument("--observable", choices=("exp", "resolvent", "square"), default="exp")
        p.add_argument("--z0", type=_finite_float, default=None)

    p = sub.add_parser("count", help="exact parameter counts and bounds")
    common(p, "1..8", "0..12")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", help="bound constants and values")
    common(p, "4", "10")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("basis-check", help="verify the change of basis and evaluation paths")
    common(p, "2", "4")
    p.set_defaults(func=cmd_basis_check)

    p = sub.add_parser("fit", help="convergence study on the default target")
    common(p, "4", "2..12")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("mset", help="cluster-expansion fits of the tight-binding site energy")
    common(p, "2,4,6,8", "6")
    schedule_opts(p)
    tb_opts(p)
    p.set_defaults(func=cmd_mset)

    p = sub.add_parser("tb-demo", help="body-order convergence of the tight-binding site energy")
    common(p, "2..12", "0")
    tb_opts(p)
    p.add_argument("--M", type=int, default=6, help="atoms per configuration")
    p.add_argument("--configs", type=int, default=50)
    p.set_defaults(func=cmd_tb_demo)

    p = sub.add_parser("export-model", help="fit and write a model as JSON")
    common(p, "4", "8")
    schedule_opts(p)
    tb_opts(p)
    p.add_argument("--mset", action="store_true", help="export a multiset model of the site energy")
    p.set_defaults(func=cmd_export_model)
    return parser


def _resolve_defaults(args) -> None:
    args.N_given = args.N is not None
    args.D_given = args.D is not None
    if args.N is None:
        args.N = parse_range(args.N_default)
    if args.D is None:
        args.D = parse_range(args.D_default)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad arguments; return it like any other validation error
        return int(exc.code or 0)
    _resolve_defaults(args)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        result = args.func(args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if isinstance(result, str):
        _emit(result, args.out)
        return EXIT_OK
    _emit(result.render(args.format), args.out)
    _summary_to_stderr(result, args)
    return EXIT_NUMERICAL if getattr(result, "failed", False) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
