import logging

from resonpy.config import Command, ResonatorMode
from resonpy.construction import as_resonator, build_B, build_D
from resonpy.experiments.base import Experiment, ExperimentResult
from resonpy.report import CheckResult, grid_frame
from resonpy.resonance import (
    FrequencyType,
    euler_product_square_integral,
    frequency_decomposition,
    l2_bound_ratio,
    resonance_integral_quadrature,
    resonator_square_integral,
)

logger = logging.getLogger(__name__)

PARTITION_RTOL = 1e-6
CLASS_COLUMNS = ("class", "sum")


class ResonateExperiment(Experiment):
    """The weighted resonance integral split by frequency type, with the square integral of A"""

    command = Command.RESONATE

    def execute(self):
        cfg = self.config
        M = self.resolve_M()
        B = build_B(M, self.caps)
        euler = cfg.resonator is ResonatorMode.EULER
        D = as_resonator(B, self.T) if euler else build_D(B, self.T)

        decomposition = frequency_decomposition(
            D, self.alpha, self.T, cfg.mn_limit, self.caps, self.threads, resonant=not euler
        )
        if euler:
            euler_ratio = euler_product_square_integral(B, self.T)
            square = euler_ratio * len(B) * self.T
        else:
            square = resonator_square_integral(D, self.T)
        K = len(D.elements)
        outputs = {
            "alpha": self.alpha,
            "T": self.T,
            "M": M,
            "K": K,
            "mn_limit": decomposition.mn_limit,
            "resonator": cfg.resonator,
            "type1_sum": decomposition.type1_sum,
            "type2_sum": decomposition.type2_sum,
            "type3_sum": decomposition.type3_sum,
            "total": decomposition.total,
            "pair_counts": {str(k): v for k, v in decomposition.pair_counts.items()},
            "square_integral": square,
            "l2_bound_ratio": l2_bound_ratio(square, K, self.T),
        }
        if euler:
            outputs["euler_product_ratio"] = euler_ratio

        checks = [
            CheckResult(
                "partition",
                decomposition.partition_error <= PARTITION_RTOL,
                "relative error {}".format(decomposition.partition_error),
            ),
            CheckResult("type1_positive", decomposition.type1_sum > 0),
            CheckResult("square_integral_below_K2T", square <= K * K * self.T * (1 + 1e-12)),
        ]

        pairs = decomposition.resonant_pairs
        if pairs is not None:
            outputs["resonant_pair_report"] = {
                "R": pairs.R,
                "entries": [entry._asdict() for entry in pairs.entries],
            }
            checks.append(CheckResult("resonant_pairs", pairs.all_hold))

        if cfg.quadrature:
            result = resonance_integral_quadrature(
                D, self.alpha, self.T, decomposition.mn_limit, caps=self.caps, threads=self.threads
            )
            outputs["quadrature"] = result._asdict()
            outputs["quadrature_discrepancy"] = abs(result.value - decomposition.total) / abs(decomposition.total)

        rows = [(str(ft), decomposition.class_sum(ft)) for ft in FrequencyType]
        rows.append(("total", decomposition.total))
        return ExperimentResult(outputs, checks, {}, grid_frame(CLASS_COLUMNS, rows))
