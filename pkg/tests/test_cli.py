import csv
import io
import json
import subprocess
import sys

import pytest

from qtjinv import __version__
from qtjinv.cli import run


def _json(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_unit_json(capsys):
    doc = _json(capsys, ["unit", "--p", "3", "--a", "0,1", "--prec", "12", "--n", "2"])
    assert doc["version"] == __version__
    assert doc["config"]["p"] == 3 and doc["config"]["a"] == "0,1"
    assert doc["result"]["Q"] == ["1", "T", "T^2 + 1"]


def test_usage_errors(capsys):
    assert run(["jqt", "--p", "4"]) == 1
    assert run(["unit", "--a", "0,1,1", "--b", "0"]) == 1
    assert run(["unit", "--prec", "1"]) == 1
    assert run(["zeta", "--i", "5"]) == 1
    assert run(["minpoly", "--subject", "zz"]) == 1
    assert run(["jqt", "--format", "csv", "--prec", "8"]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["nosuchcommand"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_consistency_exit_code(capsys):
    assert run(["jqt", "--a", "0,0,1", "--prec", "30", "--nmax", "1"]) == 2
    assert "consistency" in capsys.readouterr().err


def test_jqt_two_values(capsys):
    doc = _json(capsys, ["jqt", "--p", "3", "--a", "0,0,1", "--prec", "12"])
    res = doc["result"]
    assert len(res["values"]) == 2
    assert {v["i"] for v in res["values"]} == {0, 1}
    assert all(v["agreement"] >= 12 for v in res["values"])
    assert res["norm"] is not None


def test_jeps_rational_is_infinite(capsys):
    doc = _json(capsys, ["jeps", "--eps", "4", "--x", "0,1", "--prec", "8"])
    assert doc["result"]["j"]["infinity"] is True
    doc = _json(capsys, ["jeps", "--eps", "3", "--x", "1,1/1,0,1", "--prec", "8"])
    assert doc["result"]["j"]["infinity"] is True


def test_lattice_and_zeta(capsys):
    doc = _json(capsys, ["lattice", "--a", "0,0,1", "--eps", "5", "--degbound", "8"])
    assert doc["result"]["equal"] is True
    doc = _json(capsys, ["zeta", "--a", "0,0,1", "--i", "1", "--prec", "10"])
    assert doc["result"]["zeta"]["laurent"].startswith("T^0:[1,")


def test_classnum(capsys):
    doc = _json(capsys, ["classnum", "--a", "0,0,1"])
    assert doc["result"]["h_K"] == 4 and doc["result"]["d"] == 2


def test_minpoly_f(capsys):
    doc = _json(capsys, ["minpoly", "--a", "0,0,1", "--subject", "f", "--degbound", "2"])
    rel = doc["result"]["relation"]
    assert doc["result"]["verified"] and rel["degree"] == 2
    assert rel["coeffs"] == [["2"], ["0", "0", "2"], ["1"]]


def test_norm_offfamily(capsys):
    doc = _json(capsys, ["norm", "--a", "0,0,1", "--prec", "10"])
    assert doc["result"]["translated"]["leading_difference_exp"] is not None


def test_portrait_periodic(capsys):
    assert run(["portrait", "--a", "0,0,1", "--prec", "8", "--format", "csv"]) == 0
    text = capsys.readouterr().out
    head, body = text.split("\n", 1)
    assert head.startswith(f"# qtjinv {__version__} ")
    cfg = json.loads(head.split(" ", 3)[3])
    assert cfg["cmd"] == "portrait"
    rows = list(csv.reader(io.StringIO(body)))[1:]
    assert [int(r[0]) for r in rows] == list(range(4, 17))
    by_l = {}
    for r in rows:
        by_l.setdefault(r[2], set()).add(tuple(r[3:]))
    assert all(len(v) == 1 for v in by_l.values())


def test_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"o{k}.json"
        code = run(["jqt", "--a", "0,0,1", "--prec", "10", "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_console_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "qtjinv.cli", "classnum", "--a", "0,1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["h_K"] == 1
