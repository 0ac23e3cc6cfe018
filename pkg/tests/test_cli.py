import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qrstoch.cli import build_parser, run
from qrstoch.harness import compare_table, theorem13_check
from qrstoch.report import OutputEnvelope, as_row, emit

SUBCOMMANDS = [
    "residues", "stochasticity", "gaps", "fa", "compare-a", "verify-sk", "theorem13",
    "theorem15", "omega", "kr", "rn", "charsum", "identities", "aryan",
]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_compare_csv_98_rows_single_flip():
    code, out, _ = call("compare-a", "--min", "3", "--max", "100", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "a,lhs,rhs,lhs_less,squarefree"
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 98
    assert [r[0] for r in rows if r[3] == "false"] == ["89"]
    assert lines[1] == "3,41/3,15,true,true"


def test_compare_assert_flip_exit_codes():
    assert call("compare-a", "--min", "3", "--max", "100", "--assert-flip", "89")[0] == 0
    code, _, err = call("compare-a", "--min", "3", "--max", "100", "--assert-flip", "88")
    assert code == 1 and "assertion failed" in err


def test_stochasticity_15():
    code, out, _ = call("stochasticity", "--modulus", "15", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert (row["stochasticity"], row["size"], row["max_gap"]) == (49, 6, 5)
    assert row["baseline"] == "375/7"


def test_fa_value():
    code, out, _ = call("fa", "--a", "3", "--at", "1/2", "--format", "csv")
    assert code == 0
    assert "41/6" in out.split("\n")[1].split(",")
    code, out, _ = call("fa", "--a", "3", "--at", "1/2")
    assert "41/6" in out


def test_fa_series_uses_kmax():
    code, out, _ = call("fa", "--a", "5", "--series", "--kmax", "5", "--format", "json")
    (row,) = json.loads(out)["rows"]
    assert row["kmax"] == 5 and 0 < row["series_error"] < 1


def test_theorem13_json_keys():
    code, out, _ = call("theorem13", "--a", "3", "--p", "101", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert set(row) == {"a", "p", "s_exact", "prediction", "residual", "envelope"}
    rep = theorem13_check(3, 101)
    assert Fraction(row["prediction"]) == rep.prediction
    assert Fraction(row["residual"]) == rep.residual
    assert row["s_exact"] == rep.s_exact


def test_json_round_trip_exact_fields():
    _, out, _ = call("compare-a", "--min", "3", "--max", "40", "--format", "json")
    data = json.loads(out)
    assert data["command"] == "compare-a" and data["format_version"] == 1
    for row, rec in zip(data["rows"], compare_table(3, 40)):
        assert (row["a"], Fraction(row["lhs"]), Fraction(row["rhs"])) == (rec.a, rec.lhs, rec.rhs)
        assert (row["lhs_less"], row["squarefree"]) == (rec.lhs_less, rec.squarefree)


@pytest.mark.parametrize(
    "argv",
    [
        ("compare-a", "--min", "3", "--max", "30"),
        ("torus", "--k", "5", "--t", "1", "--samples", "5000", "--seed", "99"),
        ("kr", "--modulus", "1155", "--u", "0.5", "--u", "1"),
        ("omega", "--modulus", "31209", "--c0", "3"),
    ],
)
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_reruns(argv, fmt):
    a = call(*argv, "--format", fmt)
    b = call(*argv, "--format", fmt)
    assert a == b and a[0] == 0


def test_torus_seed_changes_output():
    base = ("torus", "--k", "5", "--t", "1", "--samples", "5000", "--format", "csv")
    assert call(*base, "--seed", "1")[1] != call(*base, "--seed", "2")[1]


def test_help_lists_every_subcommand():
    text = build_parser().format_help()
    for name in SUBCOMMANDS:
        assert name in text


@pytest.mark.parametrize(
    "argv",
    [
        ("residues", "--modulus", "7"),
        ("gaps", "--modulus", "15"),
        ("verify-sk", "--n", "8", "--check"),
        ("theorem15", "--modulus", "15", "--a", "3"),
        ("omega", "--modulus", "4"),
        ("kr", "--modulus", "3465"),
        ("rn", "--modulus", "7", "--c1", "0,1"),
        ("charsum", "--p", "7", "--shifts", "0,1"),
        ("identities", "--u-max", "5", "--v-max", "5", "--check"),
        ("aryan", "--modulus", "15"),
        ("aryan", "--sweep", "200"),
    ],
)
def test_every_subcommand_runs(argv):
    for fmt in ("table", "csv", "json"):
        code, out, err = call(*argv, "--format", fmt)
        assert code == 0, err
        assert out


def test_residues_csv():
    _, out, _ = call("residues", "--modulus", "7", "--format", "csv")
    assert out == "r,gap\n0,1\n1,1\n2,2\n4,3\n"


def test_rn_and_charsum_values():
    _, out, _ = call("rn", "--modulus", "7", "--c1", "0", "--format", "json")
    (row,) = json.loads(out)["rows"]
    assert row["count"] == 4 and row["main_term"] == "7/2" and row["deviation"] == "1/2"
    _, out, _ = call("charsum", "--p", "5", "--shifts", "0,1", "--format", "json")
    assert json.loads(out)["rows"][0]["sum"] == -1


def test_usage_errors_exit_2():
    assert call("nonsense")[0] == 2
    assert call("compare-a", "--bogus")[0] == 2
    assert call()[0] == 2


def test_resource_error_record(monkeypatch):
    monkeypatch.setenv("QRS_SIEVE_BUDGET", "100")
    code, out, err = call("stochasticity", "--modulus", "1000")
    assert code == 1 and out == ""
    record = json.loads(err)
    assert record["error"] == "resource" and record["command"] == "stochasticity"


def test_domain_error_exit_1():
    code, _, err = call("charsum", "--p", "15", "--shifts", "0")
    assert code == 1 and json.loads(err)["type"] == "InvalidModulusError"


def test_out_path(tmp_path):
    target = tmp_path / "cmp.csv"
    code, out, _ = call("compare-a", "--min", "3", "--max", "5", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("a,lhs,rhs,lhs_less,squarefree\n3,41/3,15,true,true\n")


def test_unwritable_out(tmp_path):
    code, _, err = call("fa", "--a", "3", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and json.loads(err)["error"] == "io"


def test_emit_empty_rows_header_only():
    env = OutputEnvelope("compare-a", {}, [])
    assert emit(env, "csv", ["a", "lhs", "rhs", "lhs_less", "squarefree"]) == "a,lhs,rhs,lhs_less,squarefree\n"


def test_emit_comparison_record_csv():
    (rec,) = compare_table(3, 3)
    env = OutputEnvelope("compare-a", {}, [as_row(rec)])
    assert emit(env, "csv").split("\n")[1] == "3,41/3,15,true,true"


def test_emit_float_precision():
    env = OutputEnvelope("x", {}, [{"v": 1 / 3}])
    assert emit(env, "csv") == "v\n0.333333333333\n"
    assert json.loads(emit(env, "json"))["rows"][0]["v"] == 0.333333333333


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qrstoch", "fa", "--a", "5", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    assert "183/14" in proc.stdout
