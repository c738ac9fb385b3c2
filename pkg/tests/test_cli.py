import csv
import io
import json

import pytest

from hvol import cli


def run_capture(capsys, *argv):
    code = cli.run(list(argv))
    return code, capsys.readouterr().out


def parse_args(*argv):
    return cli.build_parser().parse_args(list(argv))


def test_volume_table_json(capsys):
    code, out = run_capture(capsys, "volume-table", "--genus", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["genus"] == 3 and doc["command"] == "volume-table"
    halves = [e for e in doc["entries"] if e["value"] == "1/2"]
    assert {e["kind"] for e in halves} == {"2", "6a", "6b"}
    assert all(e["value"] == e["expected"] for e in doc["entries"])


def test_json_is_byte_stable(capsys):
    _, first = run_capture(capsys, "volume-table", "--genus", "4")
    _, second = run_capture(capsys, "volume-table", "--genus", "4", "--jobs", "3")
    assert first == second


def test_csv_matches_json(capsys):
    _, js = run_capture(capsys, "periods", "--genus", "3")
    _, cs = run_capture(capsys, "periods", "--genus", "3", "--format", "csv")
    doc = json.loads(js)
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert rows
    for row in rows:
        val = doc["matrices"][row["matrix"]][int(row["row"]) - 1][int(row["col"]) - 1]
        re_, im_ = (val, 0.0) if not isinstance(val, list) else val
        assert float(row["re"]) == re_
        assert float(row["im"] or 0) == im_


def test_genus_out_of_range(capsys):
    code, out = run_capture(capsys, "volume-table", "--genus", "2")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "GenusError"
    code, _ = run_capture(capsys, "periods", "--genus", "13")
    assert code == 2


def test_bad_arguments_exit_2(capsys):
    assert cli.run(["no-such-command"]) == 2
    assert cli.run(["periods", "--jobs", "0"]) == 2
    assert cli.run(["periods", "--tol", "0.5"]) == 2
    capsys.readouterr()


def test_quad_level_precedence():
    args = parse_args("iterated", "--quad-level", "9")
    assert cli.resolve_config(args, {"HVOL_QUAD_LEVEL": "7"}).quad_level == 9
    args = parse_args("iterated")
    assert cli.resolve_config(args, {"HVOL_QUAD_LEVEL": "7"}).quad_level == 7
    assert cli.resolve_config(args, {}).quad_level == 8
    with pytest.raises(cli.UsageError):
        cli.resolve_config(args, {"HVOL_QUAD_LEVEL": "seven"})
    with pytest.raises(ValueError):
        cli.resolve_config(parse_args("iterated", "--quad-level", "30"), {})


def test_out_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out = run_capture(capsys, "volume-table", "--genus", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 96


def test_iterated_with_oracle(capsys):
    code, out = run_capture(capsys, "iterated", "--genus", "3", "--oracle")
    assert code == 0
    doc = json.loads(out)
    assert doc["entries"]


def test_mod2_and_verify_text(capsys):
    code, out = run_capture(capsys, "mod2", "--genus", "3", "--format", "text")
    assert code == 0 and "S2g+1" in out
    code, out = run_capture(capsys, "verify", "--genus", "3", "--check", "periods", "--check", "basis", "--format", "text")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_period_matrix_command(capsys):
    code, out = run_capture(capsys, "period-matrix", "--genus", "5")
    assert code == 0
    assert json.loads(out)["genus"] == 5
