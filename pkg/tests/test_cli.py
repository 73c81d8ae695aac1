"""Command-line interface: outputs, formats and exit codes."""
import json

import pytest

from steinhaus.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_VIOLATION,
    InputError,
    RunConfig,
    main,
    parse_floats,
    parse_range,
    read_coeff_file,
)
from steinhaus.constants import c_p
from steinhaus.report import from_csv, validate


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_helpers(tmp_path):
    assert parse_floats("0.1, 0.5 0.9") == (0.1, 0.5, 0.9)
    assert parse_range("2:3:0.25") == (2.0, 2.25, 2.5, 2.75, 3.0)
    for bad in ("1:0:0.1", "0:1:0", "0:1", "a:b:c"):
        with pytest.raises(InputError):
            parse_range(bad)
    with pytest.raises(InputError):
        parse_floats("0.1,x")
    f = tmp_path / "vecs.txt"
    f.write_text("# two vectors\n0.6,0.8\n\n1 1 1\n")
    assert read_coeff_file(str(f)) == ((0.6, 0.8), (1.0, 1.0, 1.0))


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig(command="verify", lemma="nope")
    with pytest.raises(InputError):
        RunConfig(command="moment", coeffs=((0.6, 0.8),), p=(0.3,), method="magic")
    with pytest.raises(InputError):
        RunConfig(command="constant", name="Cp", fmt="xml")


def test_constant_human_twelve_digits(capsys):
    code, out, _ = run_cli(capsys, "constant", "--name", "Cp", "--p", "0.5")
    assert code == EXIT_OK
    assert f"{c_p(0.5):.12g}" in out


def test_constant_json_validates(capsys):
    code, out, _ = run_cli(capsys, "constant", "--name", "pstar", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    validate(doc)
    assert doc["records"][0]["verdict"] == "computed"


def test_verify_json_is_byte_identical(capsys):
    argv = ("verify", "--lemma", "ext-concavity", "--p", "0.5", "--trials", "2000")
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    rec = json.loads(out1)["records"][0]
    assert rec["runtime_ms"] is None and rec["verdict"] == "verified"


def test_verify_timing_records_runtime(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "l-bound", "--timing")
    assert code == EXIT_OK
    assert json.loads(out)["records"][0]["runtime_ms"] >= 0


def test_verify_psi_master_small_grid(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "psi-master", "--p", "0.3,0.7", "--s-range", "2:3:0.5")
    assert code == EXIT_OK
    doc = json.loads(out)
    validate(doc)
    assert len(doc["records"][0]["margins"]) == 6


def test_fp3_table_exit_reflects_printed_values(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "fp3-table", "--p", "0.5")
    doc = json.loads(out)
    validate(doc)
    main_rec = doc["records"][0]
    assert main_rec["verdict"] == "verified"
    assert main_rec["paper_agreement"] is False
    assert code == EXIT_VIOLATION


def test_moment_quad_and_mc_agree(capsys):
    vals = {}
    for method in ("quad", "mc"):
        code, out, _ = run_cli(capsys, "moment", "--coeffs", "0.6,0.8", "--p", "0.3", "--method", method, "--format", "json")
        assert code == EXIT_OK
        vals[method] = json.loads(out)["records"][0]["values"]
    q, m = vals["quad"], vals["mc"]
    assert abs(q["value"] - m["value"]) <= q["half_width"] + m["half_width"]


def test_table1_csv_round_trip(capsys, tmp_path):
    target = tmp_path / "table1.csv"
    code, out, _ = run_cli(capsys, "table1", "--format", "csv", "--output", str(target))
    assert out == ""
    raw = target.read_bytes()
    assert b"\r" not in raw
    header, rows = from_csv(raw.decode("utf-8"))
    assert header[:3] == ["j", "u_j", "u_j+1"] and len(rows) == 5
    dominated = {row[0]: row[header.index("d_plus_dominates")] for row in rows}
    assert dominated[3] is False and code == EXIT_VIOLATION


def test_sweep_constants_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--what", "constants", "--p-range", "1.9:2.1:0.1")
    assert code == EXIT_OK
    header, rows = from_csv(out)
    assert header == ["p", "A_p", "B_p"] and len(rows) == 3
    assert all(a <= 1.0 <= b for _, a, b in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ("constant", "--name", "Cp", "--p", "1.5"),
        ("moment", "--coeffs", "0.6,0.8", "--p", "0.3", "--method", "mc", "--samples", "10"),
        ("verify", "--lemma", "psi-master", "--p", "0.5", "--s-range", "0.5:1:0.5"),
        ("constant", "--name", "Cp", "--p", "abc"),
        ("moment", "--p", "0.3"),
    ],
)
def test_bad_input_exits_2_with_diagnostic(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == EXIT_INCONCLUSIVE
    assert out == "" and "steinhaus:" in err


def test_argparse_errors_exit_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--lemma", "no-such-lemma")
    assert code == 2 and "invalid choice" in err
