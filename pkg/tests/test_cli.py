import csv
import io
import json
import subprocess
import sys

import pytest

from pqschurer.cli import COLUMNS, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


SPEC = ("--m", "2", "--ell", "1", "--p", "0.9", "--q", "0.8")


def test_eval_partition_of_unity(capsys):
    code, out, _ = run_cli(capsys, "eval", *SPEC, "--function", "e0", "--grid", "5")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 5 and list(rows[0]) == COLUMNS["eval"]
    assert all(abs(float(r["value"]) - 1.0) <= 1e-15 for r in rows)


def test_eval_variants(capsys):
    code, out, _ = run_cli(capsys, "eval", "--m", "3", "--p", "1/2", "--q", "1/4", "--function", "e0",
                           "--grid", "3", "--variant", "bernstein_eq4")
    assert code == 0
    assert abs(float(rows_of(out)[1]["value"]) - 1.0) >= 0.01
    code, _, err = run_cli(capsys, "eval", "--m", "3", "--ell", "1", "--p", "1/2", "--q", "1/4",
                           "--variant", "bernstein_eq4")
    assert code == 2 and err.startswith("error:")


def test_moments_agree(capsys):
    code, out, _ = run_cli(capsys, "moments", *SPEC)
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 101
    assert max(float(r["max_abs_diff"]) for r in rows) <= 1e-10


def test_bounds_pass_and_violation(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--m", "8", "--p", "0.95", "--q", "0.9",
                           "--function", "abs_half", "--grid", "21")
    assert code == 0 and all(r["pass"] == "true" for r in rows_of(out))
    code, out, err = run_cli(capsys, "bounds", "--m", "8", "--p", "0.95", "--q", "0.9", "--function",
                             "sqrt_abs", "--kind", "lipschitz", "--M", "0.1", "--nu", "1")
    assert code == 1 and "violation" in err and len(err.strip().splitlines()) == 1
    assert any(r["pass"] == "false" for r in rows_of(out))


def test_bounds_lipschitz_defaults(capsys):
    code, _, _ = run_cli(capsys, "bounds", "--m", "8", "--p", "0.95", "--q", "0.9",
                         "--function", "sqrt_abs", "--kind", "lipschitz")
    assert code == 0


def test_converge(capsys):
    code, out, _ = run_cli(capsys, "converge", "--function", "e2")
    assert code == 0
    errs = [float(r["sup_error"]) for r in rows_of(out)]
    assert [int(r["m"]) for r in rows_of(out)] == [4, 8, 16, 32, 64, 128]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_voronovskaja_and_omega2(capsys):
    code, out, _ = run_cli(capsys, "voronovskaja", "--m-list", "16,32,64")
    rows = rows_of(out)
    assert code == 0 and rows[0]["cauchy_increment"] == "" and rows[1]["cauchy_increment"] != ""
    code, out, _ = run_cli(capsys, "omega2", "--m-list", "8,16", "--schedule", "power_root:0.9:0.8")
    assert code == 0 and list(rows_of(out)[0]) == COLUMNS["omega2"]


def test_oracle_check(capsys):
    code, out, _ = run_cli(capsys, "oracle-check", "--max-degree", "4", "--p", "9/10", "--q", "4/5")
    rows = rows_of(out)
    assert code == 0 and rows and all(r["holds"] == "true" for r in rows)
    code, _, _ = run_cli(capsys, "oracle-check", "--max-degree", "17")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("eval", "--m", "2", "--p", "0.5", "--q", "0.6"),
    ("eval", "--m", "2", "--p", "0.9", "--q", "0.8", "--function", "nope"),
    ("eval", "--m", "0", "--p", "0.9", "--q", "0.8"),
    ("eval", "--m", "2"),
    ("eval", "--m", "2", "--p", "abc", "--q", "0.1"),
    ("eval", "--m", "2", "--p", "0.9", "--q", "0.8", "--grid", "1"),
    ("converge", "--schedule", "power_root:0.5:0.7"),
    ("converge", "--m-list", "8,4"),
    ("voronovskaja", "--function", "abs_half"),
])
def test_invalid_input_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("error:") and len(err.strip().splitlines()) == 1


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "--format", "xml"])
    assert info.value.code == 2


def test_io_errors_exit_3(capsys, tmp_path):
    code, _, err = run_cli(capsys, "eval", *SPEC, "--out", str(tmp_path / "no" / "such" / "dir.csv"))
    assert code == 3 and err.startswith("error:")
    code, _, _ = run_cli(capsys, "eval", *SPEC, "--function", f"file:{tmp_path / 'missing.csv'}")
    assert code == 3


def test_out_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ("converge", "--function", "exp", "--ell", "1", "--m-list", "4,8,16")
    assert run_cli(capsys, *argv, "--out", str(a))[0] == 0
    assert run_cli(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == ",".join(COLUMNS["converge"])


def test_csv_uses_17_digits(capsys):
    _, out, _ = run_cli(capsys, "eval", *SPEC, "--function", "e1", "--grid", "3")
    value = rows_of(out)[1]["value"]
    assert value == format(float(value), ".17g")


def test_json_roundtrip(capsys):
    _, out_json, _ = run_cli(capsys, "eval", *SPEC, "--function", "exp", "--format", "json")
    _, out_csv, _ = run_cli(capsys, "eval", *SPEC, "--function", "exp")
    doc = json.loads(out_json)
    assert doc["subcommand"] == "eval" and doc["columns"] == COLUMNS["eval"]
    assert doc["metadata"]["m"] == 2 and doc["metadata"]["p"] == 0.9
    for jrow, crow in zip(doc["rows"], rows_of(out_csv)):
        for col in COLUMNS["eval"]:
            assert jrow[col] == float(crow[col])
    assert json.loads(json.dumps(doc)) == doc


def test_sampled_function_file(capsys, tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("x,value\n0,0\n1,1\n2,4\n")
    code, out, _ = run_cli(capsys, "eval", *SPEC, "--function", f"file:{path}", "--grid", "3")
    assert code == 0
    assert float(rows_of(out)[0]["value"]) == 0.0


def test_help_documents_columns(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for name in COLUMNS:
        assert name in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pqschurer", "eval", *SPEC, "--grid", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("x,value,f,abs_error")
