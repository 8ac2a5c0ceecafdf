import argparse
import json

import pytest

from sparsesym.cli import fmt, main, parse_range
from sparsesym.mset import MultisetModel
from sparsesym.symbasis import SymmetricModel


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("2,4,6") == [2, 4, 6]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_range("4..1")


def test_fmt():
    assert fmt(True) == "true"
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(7) == "7"


def test_count_default_grid(capsys):
    rc, out, _ = run(capsys, "count")
    lines = out.strip().split("\n")
    assert rc == 0
    assert lines[0] == "N,D,P,hr_bound,infN_bound,finN_bound,dominated"
    assert len(lines) == 1 + 8 * 13
    assert all(line.endswith(",true") for line in lines[1:])
    assert lines[1].startswith("1,0,1,")


def test_count_deterministic_and_json(capsys):
    _, a, _ = run(capsys, "count", "--d", "2", "--N", "3", "--D", "0..4")
    _, b, _ = run(capsys, "count", "--d", "2", "--N", "3", "--D", "0..4")
    assert a == b
    rc, out, _ = run(capsys, "count", "--d", "2", "--N", "3", "--D", "4", "--format", "json")
    doc = json.loads(out)
    assert rc == 0 and doc["rows"][0]["P"] == 51


def test_validation_errors(capsys):
    assert run(capsys, "count", "--D", "nan")[0] == 2
    assert run(capsys, "count", "--d", "0")[0] == 2
    assert run(capsys, "tb-demo", "--gamma0", "-1", "--N", "2")[0] == 2


def test_resource_cap(capsys, monkeypatch):
    monkeypatch.setenv("SYMTENSOR_CAP", "10")
    rc, _, err = run(capsys, "count", "--N", "20", "--D", "20")
    assert rc == 3 and "cap" in err


def test_basis_check(capsys):
    rc, out, _ = run(capsys, "basis-check", "--N", "2", "--D", "4")
    assert rc == 0 and "PASS" in out


def test_fit_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fit", "--N", "3", "--D", "2..5", "--out", str(a)]) == 0
    assert main(["fit", "--N", "3", "--D", "2..5", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().split("\n")[0]
    assert header == "D,P,sup_error,l2_error,fit_seconds"


def test_export_models(capsys):
    rc, out, _ = run(capsys, "export-model", "--N", "2", "--D", "4")
    assert rc == 0 and SymmetricModel.from_json(out).N == 2
    rc, out, _ = run(capsys, "export-model", "--mset", "--N", "2", "--schedule", "constant", "--D", "3")
    model = MultisetModel.from_json(out)
    assert rc == 0 and model.N == 2


def test_tb_demo(capsys):
    rc, out, err = run(capsys, "tb-demo", "--N", "2..5", "--configs", "5", "--M", "4")
    assert rc == 0
    assert len(out.strip().split("\n")) == 5
    assert "eta" in err


def test_mset_small(capsys):
    rc, out, _ = run(capsys, "mset", "--N", "2", "--schedule", "constant", "--D", "4")
    lines = out.strip().split("\n")
    assert rc == 0
    assert lines[0] == "N,n,D_n,P_n,sup_error,wall_seconds"
    assert len(lines) == 3
