import csv
import io
import json
import os
from fractions import Fraction

import pytest

from chebconvex import cli
from chebconvex.certify import check_omega_jensen
from chebconvex.funcs import Polynomial, Tabulated
from chebconvex.identities import GridFunction
from chebconvex.report import Verdict
from chebconvex.sampling import equidistant_configs
from chebconvex.systems import Interval, make_polynomial_system

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def _cfg(name):
    return os.path.join(CONFIGS, name)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_run_pi2_square_exit_0(tmp_path):
    assert cli.run(_cfg("pi2_square.ini"), out_dir=str(tmp_path)) == 0
    rep = json.loads((tmp_path / "convex.json").read_text())
    assert rep["verdict"] == "PASS_SAMPLED" and rep["samples"] == 1000
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert [t["task"] for t in summary["tasks"]] == ["convex", "jensen_grid"]
    assert summary["exit_code"] == 0


def test_run_pi3_negcube_exit_1(tmp_path):
    assert cli.main(["run", _cfg("pi3_negcube.ini"), "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "jensen.json").read_text())
    assert rep["verdict"] == "REFUTED" and rep["witnesses"]


def test_run_undeclared_function_exit_3(tmp_path):
    err = io.StringIO()
    assert cli.run(_cfg("bad_reference.ini"), out_dir=str(tmp_path), stderr=err) == 3
    assert "bad_reference.ini:11:" in err.getvalue() and "'missing'" in err.getvalue()


def test_exit_code_worst_verdict():
    assert cli._exit_code([Verdict.PASS_SAMPLED, Verdict.SATISFIED_SAMPLED]) == 0
    assert cli._exit_code([Verdict.PASS_SAMPLED, Verdict.INDETERMINATE]) == 2
    assert cli._exit_code([Verdict.INDETERMINATE, Verdict.REFUTED]) == 1
    assert cli._exit_code([Verdict.VIOLATED]) == 1


def test_mixed_tasks_exit_code(tmp_path):
    path = _write(tmp_path, "mixed.ini", """[run]
seed = 3
[system]
kind = polynomial
n = 2
domain = [0, 2]
[function sq]
kind = polynomial
coeffs = 0, 0, 1
[function cube]
kind = polynomial
coeffs = 0, 0, 0, 1
[task ok]
check = omega_convex
function = sq
samples = 50
[task qp]
check = qp
function = cube
samples = 50
""")
    assert cli.run(path, out_dir=str(tmp_path / "out")) == 1


@pytest.mark.parametrize("body, line, needle", [
    ("[system]\nkind = polynomial\nn = two\ndomain = [0, 1]\n", 3, "n"),
    ("[system]\nkind = polynomial\nn = 2\ndomain = [0, 1]\n[task t]\ncheck = bogus\n", 6, "bogus"),
    ("[system]\nkind = polynomial\nn = 2\ndomain = [1, 0]\n", 4, "interval"),
    ("[system]\nkind = polynomial\nn = 2\nthis line is broken\n", 4, ""),
])
def test_malformed_config_line_diagnostics(tmp_path, body, line, needle):
    path = _write(tmp_path, "bad.ini", body)
    err = io.StringIO()
    assert cli.run(path, out_dir=str(tmp_path / "out"), stderr=err) == 3
    assert f"bad.ini:{line}:" in err.getvalue()
    assert needle in err.getvalue()


def test_missing_csv_is_config_error(tmp_path):
    path = _write(tmp_path, "c.ini", """[system]
kind = polynomial
n = 2
domain = [0, 1]
[function g]
kind = csv
path = nowhere.csv
[task t]
check = omega_convex
function = g
""")
    assert cli.run(path, out_dir=str(tmp_path / "out"), stderr=io.StringIO()) == 3


def test_ingest_exact_grid(tmp_path):
    p = _write(tmp_path, "g.csv", "x,value\n0,0\n1/2,1/4\n1,1\n")
    g = cli.ingest_csv(p)
    assert isinstance(g, GridFunction)
    assert g.step == Fraction(1, 2) and g.values == (0, Fraction(1, 4), 1)


def test_ingest_rejects_duplicate_and_ragged(tmp_path):
    with pytest.raises(cli.ConfigError, match="increasing"):
        cli.ingest_csv(_write(tmp_path, "d.csv", "0,0\n0,1\n"))
    with pytest.raises(cli.ConfigError, match="columns"):
        cli.ingest_csv(_write(tmp_path, "r.csv", "0,0\n1,1,2\n"))


def test_ingest_mixed_literals_float(tmp_path):
    g = cli.ingest_csv(_write(tmp_path, "m.csv", "0,0\n0.5,1/4\n1,1\n"))
    assert all(isinstance(v, float) for v in g.values)
    assert g.step == 0.5


def test_ingest_uneven_gives_tabulated(tmp_path):
    t = cli.ingest_csv(_write(tmp_path, "u.csv", "0,0\n1,1\n3,9\n"))
    assert isinstance(t, Tabulated) and t.evaluate(Fraction(3), True) == 9


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_emit_plot_data_jensen_square(tmp_path):
    p2 = make_polynomial_system(2, Interval(0, 10))
    hs = [Fraction(1, 4), Fraction(1, 2), 1, 2]
    cfgs = [c for h in hs for c in equidistant_configs(Interval(0, 10), 2, [h])[:3]]
    cert = check_omega_jensen(p2, Polynomial((0, 0, 1)), cfgs)
    out = tmp_path / "j.csv"
    cli.emit_plot_data(cert, str(out))
    rows = _rows(out)
    assert len(rows) == len(cfgs)
    for row, cfg in zip(rows, cfgs):
        assert Fraction(row["value_exact"]) == 2 * Fraction(cfg[1]) ** 3
        assert row["violated"] == "0"


def test_emit_plot_data_affine_and_violations(tmp_path):
    p2 = make_polynomial_system(2, Interval(0, 4))
    cfgs = equidistant_configs(Interval(0, 4), 2, [Fraction(1, 2)])
    cert = check_omega_jensen(p2, Polynomial((3, -1)), cfgs, affine=True)
    cli.emit_plot_data(cert, str(tmp_path / "a.csv"))
    assert {r["value_exact"] for r in _rows(tmp_path / "a.csv")} == {"0"}
    bad = check_omega_jensen(p2, Polynomial((0, 0, -1)), cfgs)
    cli.emit_plot_data(bad, str(tmp_path / "b.csv"))
    rows = _rows(tmp_path / "b.csv")
    assert rows and all(r["violated"] == "1" for r in rows)


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.run(_cfg("pi2_square.ini"), out_dir=str(a)) == 0
    assert cli.run(_cfg("pi2_square.ini"), out_dir=str(b)) == 0
    for name in sorted(os.listdir(a)):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_seed_and_mode_overrides(tmp_path):
    assert cli.main(["run", _cfg("pi2_square.ini"), "--out", str(tmp_path), "--seed", "11",
                     "--mode", "float", "--budget", "40"]) == 0
    rep = json.loads((tmp_path / "convex.json").read_text())
    assert rep["seed"] == 11 and rep["mode"] == "FLOAT" and rep["samples"] == 40


def test_csv_function_in_config(tmp_path):
    (tmp_path / "sq.csv").write_text("x,value\n" + "".join(f"{k}/4,{k * k}/16\n" for k in range(0, 17)))
    path = _write(tmp_path, "t.ini", """[run]
seed = 2
[system]
kind = polynomial
n = 2
domain = [0, 4]
[function sq]
kind = csv
path = sq.csv
[task extend]
check = extend
function = sq
""")
    assert cli.run(path, out_dir=str(tmp_path / "out")) == 0
