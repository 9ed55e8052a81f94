import math
import subprocess
import sys

import pytest

from corrwork import cli
from corrwork.thermo import total_ergotropy
from corrwork.instances import fix_4


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["--seed", "1", "--out", str(a), "gen", "--d", "2"]) == 0
    assert cli.main(["--seed", "1", "--out", str(b), "gen", "--d", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_rejects_small_dimension(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["gen", "--d", "1"])
    assert info.value.code == 2


def test_curves_fix4_ratio(tmp_path):
    path = tmp_path / "c.csv"
    assert cli.main(["--out", str(path), "curves", "fixture:FIX-4"]) == 0
    curve = cli.read_curve_csv(path)
    ratios = curve.column("ratio")
    first = next(row.m for row in curve.rows if row.ratio == 1.0)
    assert first == 4
    assert all(r == 1.0 for r in ratios[3:])
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(cli.bounds.COLUMNS)
    assert "# N=inf" in text


def test_curves_heuristic_m1(tmp_path):
    path = tmp_path / "c.csv"
    cli.main(["--out", str(path), "curves", "fixture:FIX-4", "--m", "1"])
    row = cli.read_curve_csv(path).rows[0]
    assert row.heuristic == pytest.approx(total_ergotropy(fix_4()), rel=1e-11)
    assert row.prop3 is None and row.flat is None


def test_curves_csv_round_trip(tmp_path):
    curve = cli.bounds.bound_curve(fix_4(), range(1, 17), 500, 0.05)
    path = tmp_path / "c.csv"
    path.write_text(cli.curve_to_csv(curve))
    back = cli.read_curve_csv(path)
    assert back.N == 500 and back.eta == 0.05
    assert back.notes == curve.notes
    for a, b in zip(curve.rows, back.rows):
        for x, y in zip(a.as_tuple(), b.as_tuple()):
            assert (x is None) == (y is None)
            if x is not None:
                assert x == pytest.approx(y, rel=1e-11)


def test_parse_helpers():
    assert cli.parse_m_list("1,3-5", 4) == [1, 3, 4, 5]
    assert cli.parse_m_list("all", 2) == [1, 2, 3, 4]
    assert cli.parse_N("inf") == math.inf and cli.parse_N("12") == 12


def test_ergotropy_command(capsys):
    code, out, _ = run(capsys, "ergotropy", "fixture:FIX-Q", "--family", "A", "--L", "2", "--N", "5")
    assert code == 0
    vals = dict(line.split("\t") for line in out.strip().splitlines())
    assert float(vals["exact"]) == pytest.approx(0.2)
    assert float(vals["prop3"]) == pytest.approx(0.2)


def test_ergotropy_command_dense(capsys):
    code, out, _ = run(capsys, "ergotropy", "fixture:FIX-4", "--family", "C", "--L", "2", "--N", "2")
    vals = dict(line.split("\t") for line in out.strip().splitlines())
    assert float(vals["exact"]) == pytest.approx(float(vals["dense"]), abs=1e-10)


def test_gibbs_row(capsys):
    code, out, _ = run(capsys, "gibbs", "fixture:FIX-Q", "--beta", "1.0986122886681098")
    assert code == 0
    row = [float(x) for x in out.splitlines()[1].split("\t")]
    assert row == pytest.approx([1.098612, 0.25, 0.562335, 0.1875], abs=1e-6)


def test_gibbs_entropy_column(capsys):
    _, out, _ = run(capsys, "gibbs", "fixture:FIX-Q", "--s", "0.6931471805599453,0")
    lines = out.splitlines()
    assert lines[1].split("\t")[:2] == ["0.000000", "0.500000"]
    assert lines[2].split("\t")[0] == "inf"


def test_typicality_commands(capsys):
    code, out, _ = run(capsys, "typicality", "set", "--probs", "0.75,0.25", "--N", "2", "--eta", "0.3")
    assert code == 0 and "cardinality\t3" in out
    code, out, _ = run(capsys, "typicality", "shell", "--levels", "0,1", "--N", "2", "--xi", "0.25")
    assert code == 0 and "applicable\tFalse" in out
    code, out, _ = run(capsys, "typicality", "family", "--family", "B", "--L", "2", "--N", "3", "--eta", "0.3")
    assert code == 0


def test_verify_thermo(capsys):
    code, out, _ = run(capsys, "verify", "thermo")
    assert code == 0
    assert "FAIL" not in out and out.strip().endswith("checks passed")


def test_error_exit_code(capsys):
    code, _, err = run(capsys, "curves", "fixture:FIX-4", "--m", "99")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "ergotropy", "fixture:FIX-4", "--family", "A", "--L", "9", "--N", "2")
    assert code == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "corrwork", "gibbs", "fixture:FIX-4", "--beta", "0"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[1].startswith("0.000000\t1.500000")
