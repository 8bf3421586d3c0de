import logging

from resonpy.config import Command
from resonpy.experiments.base import Experiment, ExperimentResult
from resonpy.report import grid_frame
from resonpy.zeta import ZetaMethod, zeta_corrected, zeta_grid, zeta_reference, zeta_truncated

logger = logging.getLogger(__name__)

ZETA_COLUMNS = ("t", "re", "im", "modulus", "method")


def sample_outputs(sample):
    return {
        "alpha": sample.alpha,
        "t": sample.t,
        "value": sample.value,
        "modulus": sample.modulus,
        "method": sample.method,
        "est_error": sample.est_error,
    }


class ZetaExperiment(Experiment):
    """zeta(alpha + it) at a point, or over a grid emitted as (t, re, im, modulus, method) rows"""

    command = Command.ZETA

    def execute(self):
        cfg = self.config
        if cfg.t is not None:
            return ExperimentResult(sample_outputs(self.evaluate(cfg.t)), [], {})

        samples = zeta_grid(self.alpha, cfg.t_grid(), cfg.method, cfg.T, cfg.x, cfg.digits)
        rows = [(s.t, s.value.real, s.value.imag, s.modulus, str(s.method)) for s in samples]
        outputs = {"alpha": self.alpha, "method": cfg.method, "points": len(samples)}
        if samples:
            best = max(samples, key=lambda s: s.modulus)
            outputs.update(max_modulus=best.modulus, t_of_max=best.t, max_est_error=max(s.est_error for s in samples))
        return ExperimentResult(outputs, [], {}, grid_frame(ZETA_COLUMNS, rows))

    def evaluate(self, t):
        cfg = self.config
        if cfg.method is ZetaMethod.TRUNCATED:
            return zeta_truncated(self.alpha, t, cfg.T)
        if cfg.method is ZetaMethod.CORRECTED:
            return zeta_corrected(self.alpha, t, cfg.x or max(2 * abs(t), 100))
        return zeta_reference(self.alpha, t, cfg.digits, caps=self.caps)
