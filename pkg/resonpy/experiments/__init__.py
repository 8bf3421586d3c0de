from __future__ import absolute_import

from resonpy.config import ExperimentConfig
from .base import Experiment, ExperimentResult
from .construct import ConstructExperiment
from .gcd_sum import GcdSumExperiment
from .lemma_check import LemmaCheckExperiment
from .zeta_values import ZetaExperiment
from .resonate import ResonateExperiment
from .search import SearchExperiment
from .measure import MeasureExperiment

EXPERIMENTS = {
    cls.command: cls
    for cls in (
        ConstructExperiment,
        GcdSumExperiment,
        LemmaCheckExperiment,
        ZetaExperiment,
        ResonateExperiment,
        SearchExperiment,
        MeasureExperiment,
    )
}


def run(config):
    """
    Validate a config and run the experiment for its command.

    Parameters
    ----------
    config : ExperimentConfig or dict or str
        A config, or a JSON file / dict for ``ExperimentConfig.from_json``

    Returns
    -------
    RunReport
    """
    if not isinstance(config, ExperimentConfig):
        config = ExperimentConfig.from_json(config)
    config.validate()
    return EXPERIMENTS[config.command](config).run()


__all__ = [
    "Experiment",
    "ExperimentResult",
    "EXPERIMENTS",
    "run",
    "ConstructExperiment",
    "GcdSumExperiment",
    "LemmaCheckExperiment",
    "ZetaExperiment",
    "ResonateExperiment",
    "SearchExperiment",
    "MeasureExperiment",
]
