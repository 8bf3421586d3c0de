# -*- coding: utf-8 -*-
from .config import ExperimentConfig
from .construction import build_B, build_D, choose_M, choose_R
from .experiments import run
from .report import RunReport
from .zeta import zeta_reference, zeta_truncated
from .version import __version__, __version_info__  # noqa
from .author import __author__, __email__  # noqa

__all__ = [
    "ExperimentConfig",
    "RunReport",
    "build_B",
    "build_D",
    "choose_M",
    "choose_R",
    "run",
    "zeta_reference",
    "zeta_truncated",
]
