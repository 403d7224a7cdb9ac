import json
from fractions import Fraction

import pytest

from questionmark import cli
from questionmark.cli import (
    EXIT_OK,
    EXIT_TOLERANCE,
    EXIT_USAGE,
    PARALLELISM_ENV,
    SCAN_COLUMNS,
    RunConfig,
    emit_scan,
    main,
    parse_number,
    parse_scan,
)
from questionmark.fourier import SalemRecord, salem_scan
from questionmark.stieltjes import QuadratureConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def field(out, key):
    for line in out.splitlines():
        if line.startswith(key + ": "):
            return line.split(": ", 1)[1]
    raise KeyError(key)


@pytest.mark.parametrize(
    "x,expected",
    [("1/2", "1/2"), ("1/3", "1/4"), ("2/7", "3/16"), ("golden", "2/3"), ("sqrt2-1", "2/5"), ("inf", "2"), ("0.3", "7/32"), ("2", "3/2")],
)
def test_eval_exact(capsys, x, expected):
    code, out, _ = run(capsys, "eval", "--x", x)
    assert code == EXIT_OK
    assert field(out, "value") == expected


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--x", "2/7", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["value"] == "3/16"


def test_inverse_and_cf(capsys):
    code, out, _ = run(capsys, "inverse", "--y", "1/4")
    assert code == EXIT_OK and field(out, "x") == "1/3"
    code, out, _ = run(capsys, "cf", "--x", "2/7")
    assert code == EXIT_OK and field(out, "digits") == "[3, 2]"


def test_transform_zero(capsys):
    code, out, _ = run(capsys, "transform", "--t", "0", "--kind", "F")
    assert code == EXIT_OK and field(out, "value") == "2"
    code, out, _ = run(capsys, "transform", "--t", "0", "--kind", "fs")
    assert field(out, "value") == "0"


def test_moment(capsys):
    code, out, _ = run(capsys, "moment", "--lambda", "-1", "--tol", "1e-10")
    assert code == EXIT_OK
    v = float(field(out, "value").split()[0])
    assert abs(v - 2.5) <= 1e-9


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--x", "-1/2"],
        ["eval", "--x", "abc"],
        ["eval"],
        ["transform", "--t", "1", "--kind", "q"],
        ["salem-scan", "--nmax", "0", "--out", "x.csv"],
        ["eval", "--x", "1/2", "--tol", "0"],
        ["nosuch"],
    ],
)
def test_bad_input_exit_code(capsys, argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_tolerance_failure_exit_code(capsys):
    code, _, _ = run(capsys, "transform", "--t", "300", "--kind", "f", "--tol", "1e-14", "--max-depth", "4")
    assert code == EXIT_TOLERANCE


def test_parse_number():
    assert parse_number("0.1") == Fraction(1, 10)
    assert parse_number("3/9") == Fraction(1, 3)
    with pytest.raises(Exception):
        parse_number("1/0")


def _records():
    return salem_scan(3, QuadratureConfig(tol=1e-8)).records


def test_emit_scan_single_record(tmp_path):
    rec = _records()[:1]
    path = tmp_path / "one.csv"
    emit_scan(rec, "csv", str(path), RunConfig(tol=1e-8))
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("# tol=1e-08")
    assert lines[1] == ",".join(SCAN_COLUMNS)
    assert lines[2].startswith("1,")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_scan_round_trip(tmp_path, fmt):
    recs = _records()
    path = tmp_path / f"scan.{fmt}"
    emit_scan(recs, fmt, str(path))
    back = parse_scan(str(path))
    for a, b in zip(recs, back):
        assert (a.n, a.t, a.d_n, a.f_s_val, a.bound) == (b.n, b.t, b.d_n, b.f_s_val, b.bound)


def test_emit_scan_empty_writes_nothing(tmp_path):
    path = tmp_path / "empty.csv"
    with pytest.raises(ValueError):
        emit_scan([], "csv", str(path))
    assert not path.exists()


def test_emit_scan_bad_path(capsys, tmp_path):
    code, _, err = run(capsys, "salem-scan", "--nmax", "1", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == EXIT_USAGE and "cannot write" in err


def test_config_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(PARALLELISM_ENV, "3")
    conf = tmp_path / "run.conf"
    conf.write_text("# batch defaults\ntol = 1e-6\nmax-depth = 40\n")
    args = cli.build_parser().parse_args(["eval", "--x", "1/2", "--config", str(conf), "--max-depth", "50"])
    cfg = cli.build_config(args)
    assert cfg.tol == 1e-6 and cfg.max_depth == 50 and cfg.parallelism == 3
    conf.write_text("parallelism = 2\n")
    assert cli.build_config(cli.build_parser().parse_args(["eval", "--x", "0", "--config", str(conf)])).parallelism == 2


def test_config_errors(tmp_path, monkeypatch, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = blue\n")
    code, _, err = run(capsys, "eval", "--x", "1/2", "--config", str(conf))
    assert code == EXIT_USAGE and "unknown key" in err
    monkeypatch.setenv(PARALLELISM_ENV, "zero")
    code, _, _ = run(capsys, "eval", "--x", "1/2")
    assert code == EXIT_USAGE


def test_salem_scan_parallel_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["salem-scan", "--nmax", "6", "--tol", "1e-8", "--parallelism", "1", "--out", str(a)]) == EXIT_OK
    assert main(["salem-scan", "--nmax", "6", "--tol", "1e-8", "--parallelism", "3", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_roots_and_bessel(capsys):
    code, out, _ = run(capsys, "roots", "--branch", "cos", "--count", "2")
    assert code == EXIT_OK and out.splitlines()[0] == "m,t"
    code, out, _ = run(capsys, "bessel", "--x", "1", "--tau", "0", "--format", "json")
    assert code == EXIT_OK
    value, bound = json.loads(out)["K"].split(" +/- ")
    assert abs(float(value) - 0.42102443824070834) <= float(bound)


def test_theorem3_command(capsys):
    code, out, _ = run(capsys, "theorem3", "--psi", "x(1-x)", "--format", "json")
    assert code == EXIT_OK
    assert abs(json.loads(out)["Psi_slope"] + 1) <= 0.1


def test_salem_record_type():
    r = SalemRecord(1, 6.28, -0.37, 0.0, 1e-9)
    assert r.healthy
