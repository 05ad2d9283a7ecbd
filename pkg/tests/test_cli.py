import csv
import io
import json
import math
import subprocess
import sys

import pytest

from isoprofile import cli
from isoprofile import io as pio


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def rows_of(out):
    return list(csv.DictReader(io.StringIO(out)))


def test_profile_at_half(capsys):
    status, out, _ = run(capsys, "profile", "--x", "0.5")
    assert status == 0
    (row,) = rows_of(out)
    assert float(row["gamma"]) == 0.0 and float(row["G"]) == 2.0
    assert row["folded"] == "false"


def test_profile_folds_above_half(capsys):
    status, out, _ = run(capsys, "profile", "--x", "0.7")
    (row,) = rows_of(out)
    assert status == 0 and row["folded"] == "true"
    assert float(row["x"]) == pytest.approx(0.3, rel=1e-15)


def test_profile_by_gamma(capsys):
    _, out, _ = run(capsys, "profile", "--gamma", "1")
    (row,) = rows_of(out)
    assert float(row["G"]) == pytest.approx(math.e, rel=1e-15)


def test_profile_grid_is_ordered(capsys):
    _, out, _ = run(capsys, "profile", "--grid", "0.01", "0.5", "9", "linear")
    xs = [float(r["x"]) for r in rows_of(out)]
    assert len(xs) == 9 and xs == sorted(xs)


def test_uniform_profile_dimension_one(capsys):
    _, out, _ = run(capsys, "uniform-profile", "--n", "1", "--x", "0.25")
    (row,) = rows_of(out)
    assert float(row["G"]) == 4.0 and float(row["xG"]) == 1.0


def test_bounds_summary(capsys):
    status, out, err = run(capsys, "bounds", "--grid", "1e-4", "0.5", "2000", "log")
    assert status == 0
    assert len(rows_of(out)) == 2000
    value = float(err.split("max_abs_err=")[1].split()[0])
    assert value <= 0.0051


def test_verify_1d_passes(capsys):
    for family in ("exponential", "linear"):
        status, _, err = run(capsys, "verify-1d", "--family", family, "--n", "3")
        assert status == 0, err


def test_verify_mc_single_cell(capsys):
    status, out, _ = run(capsys, "verify-mc", "--n", "2", "--x", "0.25", "--samples", "200000")
    (row,) = rows_of(out)
    assert status == 0 and row["pass"] == "true"


def test_sweep(capsys):
    _, out, _ = run(capsys, "sweep", "--grid", "0.01", "0.5", "5", "log", "--dims", "2,10")
    rows = rows_of(out)
    assert len(rows) == 10
    assert all(float(r["ratio"]) >= 1.0 - 1e-12 for r in rows)


@pytest.mark.parametrize("argv,flag", [
    (("profile", "--x", "1.0"), "--x"),
    (("profile", "--x", "0"), "--x"),
    (("profile", "--gamma", "-1"), "--gamma"),
    (("uniform-profile", "--n", "0", "--x", "0.2"), "--n"),
    (("bounds", "--grid", "0.1", "0.7", "10", "log"), "--grid"),
    (("bounds", "--grid", "0.1", "0.4", "1", "log"), "--grid"),
    (("verify-mc", "--samples", "0"), "--samples"),
    (("verify-mc", "--seed", "-3"), "--seed"),
])
def test_usage_errors_exit_two(capsys, argv, flag):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert flag in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["profile", "--x", "0.1", "--gamma", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == 2


def test_verification_failure_exits_one(capsys, monkeypatch):
    # a doctored profile that overstates G must fail verify-1d
    from isoprofile import logconcave
    real = logconcave.xg_of_x
    monkeypatch.setattr(logconcave, "xg_of_x", lambda x: real(x) + 0.1)
    status, _, _ = run(capsys, "verify-1d")
    assert status == 1


def test_csv_json_round_trip(capsys):
    _, csv_out, _ = run(capsys, "bounds", "--grid", "1e-3", "0.5", "40", "log", "--n", "3")
    _, json_out, _ = run(capsys, "bounds", "--grid", "1e-3", "0.5", "40", "log", "--n", "3",
                         "--format", "json")
    from_csv = pio.parse_csv(csv_out)
    from_json = json.loads(json_out)
    assert len(from_csv) == len(from_json) == 40
    for a, b in zip(from_csv, from_json):
        assert list(a) == list(b)
        for key in a:
            assert a[key] == b[key]


def test_seventeen_digits(capsys):
    _, out, _ = run(capsys, "profile", "--x", "0.1")
    (row,) = rows_of(out)
    assert float(row["G"]) == float(repr(float(row["G"])))
    assert len(row["G"].replace(".", "").lstrip("0")) >= 16


def test_output_file_and_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["verify-mc", "--n", "3", "--x", "0.1", "--samples", "50000",
                         "--seed", "9", "--output", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().startswith(",".join(pio.parse_csv(paths[0].read_text())[0]))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "isoprofile", "profile", "--x", "0.25"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "x,gamma,G,xG,folded"


def test_fold_x_endpoints():
    assert cli.fold_x(0.7) == pytest.approx(0.3)
    with pytest.raises(cli.CliUsageError):
        cli.fold_x(1.0)
