import logging

from resonpy.config import Command
from resonpy.construction import choose_M
from resonpy.experiments.base import Experiment, ExperimentResult
from resonpy.report import CheckResult, grid_frame
from resonpy.search import err_threshold, exponent_comparison, search_max

logger = logging.getLogger(__name__)

SEARCH_COLUMNS = ("t", "modulus")
# the GCD-sum exponent is only defined from three primes on
MIN_COMPARISON_M = 3


class SearchExperiment(Experiment):
    """Large values of |zeta(alpha + it)| on [0, T] against the large-value bound"""

    command = Command.SEARCH

    def execute(self):
        cfg = self.config
        result = search_max(self.alpha, self.T, cfg.step, cfg.refine, cfg.candidates, self.caps, self.threads)
        outputs = {
            "alpha": self.alpha,
            "T": self.T,
            "t_star": result.t_star,
            "max_modulus": result.max_modulus,
            "grid_step": result.grid_step,
            "grid_points": result.grid_t.size,
            "refinement_depth": result.refinement_depth,
            "theorem1_bound": result.theorem1_bound,
            "err_threshold": err_threshold(self.alpha, self.T),
            "exceeded": result.exceeded,
            "subinterval": result.subinterval,
        }
        flags = {}
        if choose_M(self.T, self.alpha) >= MIN_COMPARISON_M:
            comparison = exponent_comparison(self.alpha, self.T)
            outputs["exponent_comparison"] = comparison._asdict()
            flags["exponents_linked"] = comparison.holds
        else:
            logger.info("T=%s gives fewer than %s primes; exponent comparison skipped", self.T, MIN_COMPARISON_M)

        check = CheckResult(
            "bound_exceeded",
            result.exceeded,
            "max {} against bound {}".format(result.max_modulus, result.theorem1_bound),
        )
        plot = grid_frame(SEARCH_COLUMNS, t=result.grid_t, modulus=result.grid_modulus)
        return ExperimentResult(outputs, [check], flags, plot)
