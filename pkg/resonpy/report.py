"""Run reports: the serializable record of one experiment, and CSV emission of grid outputs."""
import json
import logging
from typing import NamedTuple

import mpmath
import numpy as np
import pandas as pd

from resonpy.exceptions import InvalidArgument
from resonpy.util import StrEnum, decimal_string, parse_decimal
from resonpy.version import __version__

logger = logging.getLogger(__name__)


class CheckResult(NamedTuple):
    """
    Outcome of one checked property. Checks with ``required=False`` are recorded but do
    not fail the run (e.g. inequalities only claimed for sufficiently large T).
    """

    name: str
    passed: bool
    detail: str = ""
    required: bool = True

    def to_json_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "required": self.required}

    @classmethod
    def from_json_dict(cls, d):
        return cls(d["name"], d["passed"], d.get("detail", ""), d.get("required", True))


def encode(value):
    """
    JSON-ready copy of ``value`` with every number as a decimal string.

    Booleans and None are kept, complex numbers become {"re", "im"} pairs, enums their value.
    """
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, StrEnum):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, (complex, np.complexfloating, mpmath.mpc)):
        value = complex(value)
        return {"re": decimal_string(value.real), "im": decimal_string(value.imag)}
    if isinstance(value, (int, float, np.integer, np.floating, mpmath.mpf)):
        return decimal_string(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode(v) for v in value]
    raise TypeError("Cannot encode {} of type {}".format(value, type(value)))


class RunReport(object):
    def __init__(
        self,
        command,
        config,
        outputs,
        checks=None,
        flags=None,
        wall_time=0.0,
        version=__version__,
        plot_data=None,
    ):
        """
        Parameters
        ----------
        command : str
        config : dict
            Echo of the config as given by ``ExperimentConfig.to_dict``
        outputs : dict
            Numeric outputs; stored encoded (numbers as decimal strings)
        checks : list of CheckResult
        flags : dict
            Regime flags, e.g. whether R was clamped
        wall_time : float
            Seconds
        version : str
        plot_data : pandas.DataFrame, optional
            Grid-valued output, emitted by ``emit_plot_data`` and not part of the JSON
        """
        self.command = str(command)
        self.config = dict(config)
        self.outputs = encode(outputs)
        self.checks = list(checks or [])
        self.flags = {str(k): bool(v) for k, v in (flags or {}).items()}
        self.wall_time = float(wall_time)
        self.version = version
        self.plot_data = plot_data

    @property
    def passed(self):
        return all(c.passed for c in self.checks if c.required)

    def failures(self):
        return [c for c in self.checks if c.required and not c.passed]

    def to_json_dict(self):
        return {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "wall_time": decimal_string(self.wall_time),
            "passed": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
            "flags": self.flags,
            "outputs": self.outputs,
        }

    @classmethod
    def from_json_dict(cls, d):
        report = cls(
            d["command"],
            d["config"],
            {},
            [CheckResult.from_json_dict(c) for c in d.get("checks", [])],
            d.get("flags", {}),
            parse_decimal(d.get("wall_time", "0")),
            d.get("version", __version__),
        )
        report.outputs = d.get("outputs", {})
        return report

    def to_json(self, **kwargs):
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)

    @classmethod
    def from_json(cls, report):
        """
        Parameters
        ----------
        report : str or dict
            Path to a JSON report file, or a dict representing the object
        """
        if not isinstance(report, dict):
            with open(str(report)) as f:
                report = json.load(f)
        return cls.from_json_dict(report)

    def dump(self, path):
        with open(str(path), "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_json(indent=2))
            f.write("\n")
        logger.info("wrote %s report to %s", self.command, path)

    def __eq__(self, other):
        return isinstance(other, RunReport) and self.to_json_dict() == other.to_json_dict()


def grid_frame(columns, rows=None, **arrays):
    """
    DataFrame of decimal strings.

    Either ``rows`` (iterable of tuples, in ``columns`` order) or one array per column.
    Booleans are written as true/false.
    """
    if rows is None:
        rows = zip(*(arrays[c] for c in columns))

    def cell(value):
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, str):
            return value
        return decimal_string(value)

    return pd.DataFrame([[cell(v) for v in row] for row in rows], columns=list(columns), dtype=object)


def emit_plot_data(report, path):
    """
    Write the grid-valued output of a report as CSV with a header row: UTF-8, LF line
    endings, numbers as 17-significant-digit decimal strings.

    Raises
    ------
    InvalidArgument
        If the report has no grid-valued output
    """
    if report.plot_data is None:
        raise InvalidArgument("the {} report has no grid-valued output".format(report.command))
    report.plot_data.to_csv(str(path), index=False, encoding="utf-8", lineterminator="\n")
    logger.info("wrote %s rows of plot data to %s", len(report.plot_data), path)

