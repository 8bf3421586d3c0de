import json
import logging

from resonpy.config import Command
from resonpy.construction import bucket_statistics, choose_R, verify_bucket_windows, verify_representative_ratios
from resonpy.experiments.base import Experiment, ExperimentResult

logger = logging.getLogger(__name__)


class ConstructExperiment(Experiment):
    """Build B and D, report bucket occupancy and check the representative invariants"""

    command = Command.CONSTRUCT

    def execute(self):
        M, B, D = self.build_sets()
        stats = bucket_statistics(D)
        outputs = {
            "alpha": self.alpha,
            "T": self.T,
            "M": M,
            "N": len(B),
            "K": D.K,
            "largest_element": B.elements[-1].exact_value,
            "bucket_statistics": stats._asdict(),
        }
        flags = {"M_from_formula": self.config.M is None}
        if M >= 3:
            choice = choose_R(M, self.alpha)
            outputs["R"] = choice.R
            flags["R_clamped"] = choice.asymptotic

        ratio_check, ratio_report = self.invariant_check(
            "representative_ratios", verify_representative_ratios, D, self.caps
        )
        window_check, _ = self.invariant_check("bucket_windows", verify_bucket_windows, D)
        if ratio_report is not None:
            outputs["min_ratio_margin"] = ratio_report.min_margin
            outputs["exact_ratio_comparisons"] = ratio_report.exact_comparisons

        if self.config.sets_out:
            with open(self.config.sets_out, "w") as f:
                json.dump({"B": B.to_json_dict(self.alpha), "D": D.to_json_dict()}, f, indent=2, sort_keys=True)
            logger.info("wrote B and D to %s", self.config.sets_out)

        return ExperimentResult(outputs, [ratio_check, window_check], flags)
