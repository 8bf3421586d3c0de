import json

import mpmath
import numpy as np
import pytest

from resonpy.exceptions import InvalidArgument
from resonpy.report import CheckResult, RunReport, emit_plot_data, encode, grid_frame
from resonpy.resonance import FrequencyType
from resonpy.version import __version__


@pytest.fixture
def report():
    checks = [
        CheckResult("partition", True, "relative error 1e-16"),
        CheckResult("pair_separation", False, "3 violations", required=False),
    ]
    outputs = {"K": 16, "total": 0.1, "value": complex(1.5, -2.0), "flag": True, "nested": {"ratio": 2.5}}
    return RunReport("resonate", {"command": "resonate", "alpha": 0.75}, outputs, checks, {"R_clamped": True}, 1.25)


def test_encode_numbers_as_strings():
    assert encode(1) == "1"
    assert encode(0.1) == "0.10000000000000001"
    assert encode(np.float64(2.5)) == "2.5"
    assert encode(complex(1, -1)) == {"re": "1", "im": "-1"}
    assert encode(True) is True
    assert encode(None) is None
    assert encode(FrequencyType.TYPE2) == "type2"
    assert encode({1: [0.5, np.int64(3)]}) == {"1": ["0.5", "3"]}


def test_encode_mpf():
    with mpmath.workdps(30):
        text = encode(mpmath.mpf(1) / 3)
    assert text.startswith("0.33333333333333333333333333")


def test_encode_rejects_objects():
    with pytest.raises(TypeError):
        encode(object())


def test_passed_ignores_informational_checks(report):
    assert report.passed
    assert report.failures() == []


def test_required_failure():
    failing = CheckResult("bucket_windows", False, "2 violations")
    report = RunReport("construct", {}, {}, [CheckResult("representative_ratios", True), failing])
    assert not report.passed
    assert report.failures() == [failing]


def test_json_layout(report):
    d = json.loads(report.to_json())
    assert d["version"] == __version__
    assert d["passed"] is True
    assert d["wall_time"] == "1.25"
    assert d["flags"] == {"R_clamped": True}
    assert d["outputs"]["value"] == {"re": "1.5", "im": "-2"}
    assert d["outputs"]["nested"]["ratio"] == "2.5"
    assert d["checks"][1] == {"name": "pair_separation", "passed": False, "detail": "3 violations", "required": False}


def test_dump_and_load(tmpdir, report):
    path = str(tmpdir.join("report.json"))
    report.dump(path)
    with open(path, "rb") as f:
        raw = f.read()
    assert raw.endswith(b"}\n")
    assert b"\r\n" not in raw
    loaded = RunReport.from_json(path)
    assert loaded == report
    assert loaded.wall_time == 1.25


def test_grid_frame_from_arrays():
    frame = grid_frame(("t", "modulus", "above"), t=[0.5, 1.0], modulus=np.array([2.0, 0.1]), above=[True, False])
    assert list(frame.columns) == ["t", "modulus", "above"]
    assert frame.values.tolist() == [["0.5", "2", "true"], ["1", "0.10000000000000001", "false"]]


def test_emit_plot_data(tmpdir):
    frame = grid_frame(("class", "sum"), rows=[("type1", 1.5), ("total", 2)])
    report = RunReport("resonate", {}, {}, plot_data=frame)
    path = str(tmpdir.join("classes.csv"))
    emit_plot_data(report, path)
    with open(path, "rb") as f:
        assert f.read() == b"class,sum\ntype1,1.5\ntotal,2\n"


def test_emit_header_only(tmpdir):
    report = RunReport("search", {}, {}, plot_data=grid_frame(("t", "modulus"), t=[], modulus=[]))
    path = str(tmpdir.join("empty.csv"))
    emit_plot_data(report, path)
    with open(path, "rb") as f:
        assert f.read() == b"t,modulus\n"


def test_emit_without_grid(tmpdir):
    with pytest.raises(InvalidArgument):
        emit_plot_data(RunReport("construct", {}, {}), str(tmpdir.join("none.csv")))
