from __future__ import absolute_import

import logging
import time
from abc import ABC, abstractmethod
from typing import NamedTuple, Any, Dict, List, Optional

from resonpy.config import ExperimentConfig
from resonpy.construction import build_B, build_D, choose_M, choose_R
from resonpy.exceptions import InvariantViolation
from resonpy.report import RunReport, CheckResult

logger = logging.getLogger(__name__)


class ExperimentResult(NamedTuple):
    outputs: Dict[str, Any]
    checks: List[CheckResult]
    flags: Dict[str, bool]
    plot_data: Optional[Any] = None


class Experiment(ABC):
    """
    One CLI command. Subclasses set ``command`` and implement ``execute``.
    """

    command = None

    def __init__(self, config):
        """

        Parameters
        ----------
        config : ExperimentConfig
            Validated configuration
        """
        self.config = config
        self.caps = config.resource_caps
        self.threads = config.threads

    @property
    def alpha(self):
        return self.config.alpha

    @property
    def T(self):
        return self.config.T

    @abstractmethod
    def execute(self):
        """
        Returns
        -------
        ExperimentResult
        """
        pass

    def run(self):
        """
        Execute and wrap the result in a RunReport.

        Returns
        -------
        RunReport
        """
        logger.info("running %s with %s", self.command, self.config.to_dict())
        start = time.perf_counter()
        result = self.execute()
        elapsed = time.perf_counter() - start
        report = RunReport(
            self.command,
            self.config.to_dict(),
            result.outputs,
            result.checks,
            result.flags,
            wall_time=elapsed,
            plot_data=result.plot_data,
        )
        for failure in report.failures():
            logger.error("check %s failed: %s", failure.name, failure.detail)
        return report

    def resolve_M(self):
        return self.config.M or choose_M(self.T, self.alpha)

    def resolve_R(self, M):
        """The configured R, else the formula value clamped to 1 (1 for M < 3), and whether it was clamped"""
        if self.config.R:
            return self.config.R, False
        if M < 3:
            return 1, True
        choice = choose_R(M, self.alpha)
        if choice.asymptotic:
            logger.warning("R formula gives 0 at M=%s, alpha=%s; using R=1", M, self.alpha)
        return choice.effective, choice.asymptotic

    def build_sets(self):
        """(M, B, D) for the configured alpha and T"""
        M = self.resolve_M()
        B = build_B(M, self.caps)
        return M, B, build_D(B, self.T)

    @staticmethod
    def invariant_check(name, verify, *args):
        """
        Run a verifier which raises InvariantViolation on failure.

        Returns
        -------
        (CheckResult, report or None)
        """
        try:
            report = verify(*args)
        except InvariantViolation as e:
            return CheckResult(name, False, str(e)), e.report
        return CheckResult(name, report.holds), report

    @classmethod
    def from_json(cls, config, **overrides):
        """
        Return an instance of this experiment configured from a JSON file or dict, as per
        ExperimentConfig.from_json. The command is implied by the experiment class.

        Parameters
        ----------
        config : str or dict
        overrides
            Values taking precedence over the file

        Returns
        -------
        Experiment
        """
        return cls(ExperimentConfig.from_json(config, command=cls.command, **overrides).validate())
