import itertools

import numpy as np
import pytest

from sparsesym.one_body import BasisSpec, basis_degrees


def brute_force_tuples(spec: BasisSpec, N: int, D: int) -> list[tuple[int, ...]]:
    """Sorted N-tuples of flat indices with total degree <= D, by exhaustive filtering."""
    spec = spec.with_max_degree(max(D, spec.max_degree))
    deg = basis_degrees(spec, D)
    out = [
        t
        for t in itertools.combinations_with_replacement(range(deg.shape[0]), N)
        if sum(int(deg[i]) for i in t) <= D
    ]
    return sorted(out)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one PASS/FAIL line per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.failed:
        _CRITERIA[int(props["criterion"])] = (report.passed, str(props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
