import json

import pytest

from resonpy import cli
from resonpy.config import Command, fields_for
from resonpy.exceptions import InvariantViolation
from resonpy.experiments import construct
from resonpy.version import __version__


def run_main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_to_stdout(capsys):
    code, out, _ = run_main(["construct", "--alpha", "0.75", "--T", "1e4"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["command"] == "construct"
    assert report["version"] == __version__
    assert report["config"]["alpha"] == 0.75


def test_report_to_file(tmpdir, capsys):
    path = str(tmpdir.join("report.json"))
    code, out, _ = run_main(["gcd-sum", "--alpha", "0.75", "--M", "4", "--out", path], capsys)
    assert code == 0
    assert out == ""
    with open(path) as f:
        report = json.load(f)
    assert float(report["outputs"]["row_sum"]) == pytest.approx(3.6727, abs=1e-4)


def test_csv_output(tmpdir, capsys):
    path = str(tmpdir.join("grid.csv"))
    argv = ["zeta", "--alpha", "0.75", "--T", "1000", "--t-start", "10", "--t-stop", "12", "--t-step", "0.5"]
    code, _, _ = run_main(argv + ["--csv", path], capsys)
    assert code == 0
    with open(path, "rb") as f:
        lines = f.read().split(b"\n")
    assert lines[0] == b"t,re,im,modulus,method"
    assert len(lines) == 7
    assert lines[-1] == b""


def test_flags_override_config(search_config_path, capsys):
    code, out, _ = run_main(["search", "--config", search_config_path, "--T", "50", "--refine", "0"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["config"]["T"] == 50
    assert report["config"]["refine"] == 0
    assert report["config"]["step"] == 0.1


def test_invalid_argument_exit_code(capsys):
    code, out, err = run_main(["search", "--alpha", "0.5", "--T", "100"], capsys)
    assert code == 2
    assert out == ""
    assert "alpha" in err


def test_missing_required_exit_code(capsys):
    code, _, err = run_main(["measure", "--alpha", "0.75", "--T", "1e4", "--samples", "10"], capsys)
    assert code == 2
    assert "--tau" in err


def test_resource_refusal_exit_code(capped_config_path, capsys):
    code, _, err = run_main(["construct", "--config", capped_config_path], capsys)
    assert code == 3
    assert "max_exact_M" in err


def test_missing_config_file(tmpdir, capsys):
    code, _, _ = run_main(["search", "--config", str(tmpdir.join("missing.json"))], capsys)
    assert code == 2


def test_no_grid_for_csv(tmpdir, capsys):
    code, _, err = run_main(
        ["construct", "--alpha", "0.75", "--T", "100", "--csv", str(tmpdir.join("none.csv"))], capsys
    )
    assert code == 2
    assert "grid-valued" in err


def test_failed_check_exit_code(monkeypatch, capsys):
    def broken(D):
        raise InvariantViolation("bucket window exceeded")

    monkeypatch.setattr(construct, "verify_bucket_windows", broken)
    code, out, err = run_main(["construct", "--alpha", "0.75", "--T", "100"], capsys)
    assert code == 1
    assert json.loads(out)["passed"] is False
    assert "bucket_windows" in err


@pytest.mark.parametrize("command", list(Command))
def test_help_lists_every_flag(command, capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main([str(command), "--help"])
    assert excinfo.value.code == 0
    out = capsys.readouterr().out
    assert "--config" in out
    for field in fields_for(command):
        if not field.file_only:
            assert field.flag in out


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["search", "--alpha", "0.75", "--T", "100", "--samples", "10"])
    assert excinfo.value.code == 2


def test_bad_choice(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["gcd-sum", "--alpha", "0.75", "--M", "4", "--mode", "fast"])
    assert excinfo.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["--version"])
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_negative_seed_exit_code(capsys):
    argv = ["measure", "--alpha", "0.75", "--tau", "0.05", "--T", "100", "--samples", "50", "--seed", "-1"]
    code, out, err = run_main(argv, capsys)
    assert code == 2
    assert out == ""
    assert "seed" in err


def test_seeded_csv_is_reproducible(tmpdir, capsys):
    argv = ["measure", "--alpha", "0.75", "--tau", "0.05", "--T", "1000", "--samples", "300", "--seed", "11"]
    contents = []
    for name in ("first.csv", "second.csv"):
        path = str(tmpdir.join(name))
        code, _, _ = run_main(argv + ["--csv", path], capsys)
        assert code == 0
        with open(path, "rb") as f:
            contents.append(f.read())
    assert contents[0].startswith(b"t,modulus,above_threshold\n")
    assert contents[0].count(b"\n") == 301
    assert contents[0] == contents[1]


def test_separation_needs_two_primes(capsys):
    code, out, err = run_main(["lemma-check", "--lemma", "1a", "--alpha", "0.75", "--T", "100", "--M", "1"], capsys)
    assert code == 2
    assert out == ""
    assert "M >= 2" in err
