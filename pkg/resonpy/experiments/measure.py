import logging

from resonpy.config import Command
from resonpy.experiments.base import Experiment, ExperimentResult
from resonpy.report import CheckResult, grid_frame
from resonpy.search import measure_estimate

logger = logging.getLogger(__name__)

MEASURE_COLUMNS = ("t", "modulus", "above_threshold")


class MeasureExperiment(Experiment):
    """Stratified Monte-Carlo estimate of the measure of the level set above the threshold"""

    command = Command.MEASURE

    def execute(self):
        cfg = self.config
        report = measure_estimate(
            self.alpha, cfg.tau, self.T, cfg.samples, cfg.seed, cfg.strata, self.caps, self.threads
        )
        outputs = {
            "alpha": self.alpha,
            "tau": cfg.tau,
            "T": self.T,
            "beta": report.beta,
            "M": report.M,
            "threshold": report.threshold,
            "samples": report.samples,
            "seed": report.seed,
            "sampled_fraction": report.sampled_fraction,
            "estimated_measure": report.estimated_measure,
            "standard_error": report.standard_error,
            "theorem2_floor": report.theorem2_floor,
        }
        check = CheckResult(
            "measure_above_floor",
            report.above_floor,
            "{} +- {} against {}".format(report.estimated_measure, report.standard_error, report.theorem2_floor),
        )
        plot = grid_frame(
            MEASURE_COLUMNS, t=report.t_samples, modulus=report.moduli, above_threshold=report.above_threshold
        )
        return ExperimentResult(outputs, [check], {}, plot)
