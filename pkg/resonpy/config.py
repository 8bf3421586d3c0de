"""
Experiment configuration.

A single table of ``ConfigField`` entries drives the command line flags, the JSON config
schema and validation, so every flag maps to exactly one field. Values are resolved in
the order defaults < config file < flags.
"""
import json
import logging
import math
from typing import NamedTuple, Any, Callable, Optional, Tuple

from resonpy.exceptions import InvalidArgument, InvalidConfig, require_alpha
from resonpy.limits import DEFAULT_CAPS, ResourceCaps
from resonpy.search import MAX_GRID_STEP, DEFAULT_GRID_STEP, DEFAULT_REFINEMENT_DEPTH, DEFAULT_CANDIDATES
from resonpy.search import DEFAULT_STRATA, theorem2_exponent
from resonpy.util import StrEnum
from resonpy.zeta import ZetaMethod, DEFAULT_REFERENCE_DIGITS

logger = logging.getLogger(__name__)

DEFAULT_LOG_LEVEL = "WARNING"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Command(StrEnum):
    CONSTRUCT = "construct"
    GCD_SUM = "gcd-sum"
    LEMMA_CHECK = "lemma-check"
    ZETA = "zeta"
    RESONATE = "resonate"
    SEARCH = "search"
    MEASURE = "measure"


class GcdMode(StrEnum):
    BRUTEFORCE = "bruteforce"
    PRODUCT = "product"
    RESTRICTED = "restricted"
    CHAIN = "chain"


class LemmaName(StrEnum):
    GCD_CHAIN = "1"
    SEPARATION = "1a"
    WINDOWS = "1b"
    RATIOS = "1c"
    RESONANT_PAIRS = "2"
    TYPE2_POSITIVITY = "3"
    TYPE3_BOUND = "4"
    CHAIN_SCAN = "chain"
    PRIME_BOUND = "bach"
    STIRLING = "stirling"


class ResonatorMode(StrEnum):
    REPRESENTATIVES = "representatives"
    EULER = "euler"


def integer(value):
    """int from an int, an integral float or a string such as '1e5'"""
    if isinstance(value, bool):
        raise ValueError("expected an integer, got {!r}".format(value))
    if isinstance(value, int):
        return value
    as_float = float(value)
    if not as_float.is_integer():
        raise ValueError("expected an integer, got {!r}".format(value))
    return int(as_float)


def boolean(value):
    if isinstance(value, bool):
        return value
    if str(value).lower() in ("1", "true", "yes"):
        return True
    if str(value).lower() in ("0", "false", "no"):
        return False
    raise ValueError("expected a boolean, got {!r}".format(value))


ALL_COMMANDS = tuple(Command)
_BUILD = (Command.CONSTRUCT, Command.GCD_SUM, Command.LEMMA_CHECK, Command.RESONATE)


class ConfigField(NamedTuple):
    name: str
    type: Callable
    help: str
    commands: Tuple[Command, ...] = ALL_COMMANDS
    default: Any = None
    choices: Optional[Tuple[str, ...]] = None
    file_only: bool = False

    @property
    def flag(self):
        return "--" + self.name.replace("_", "-")


FIELDS = (
    ConfigField("alpha", float, "real part of s, 1/2 < alpha < 1"),
    ConfigField("T", float, "height T (at least 16)", tuple(c for c in Command if c is not Command.GCD_SUM)),
    ConfigField("tau", float, "level-set parameter, 0 < tau < (2 alpha - 1)^(1 - alpha) / 6", (Command.MEASURE,)),
    ConfigField("M", integer, "number of primes; defaults to ceil((2 alpha - 1) log2 T)", _BUILD),
    ConfigField(
        "R", integer, "distance; defaults to the formula value clamped to 1", (Command.GCD_SUM, Command.LEMMA_CHECK)
    ),
    ConfigField("k", integer, "row index into B for restricted sums", (Command.GCD_SUM,), default=0),
    ConfigField("mode", GcdMode, "which GCD sum to compute", (Command.GCD_SUM,), GcdMode.PRODUCT, tuple(GcdMode)),
    ConfigField("lemma", LemmaName, "which lemma to check", (Command.LEMMA_CHECK,), None, tuple(LemmaName)),
    ConfigField("t", float, "single evaluation point", (Command.ZETA,)),
    ConfigField("t_start", float, "first grid point", (Command.ZETA,)),
    ConfigField("t_stop", float, "last grid point (inclusive when on the grid)", (Command.ZETA,)),
    ConfigField("t_step", float, "grid spacing", (Command.ZETA,)),
    ConfigField("method", ZetaMethod, "evaluation method", (Command.ZETA,), ZetaMethod.TRUNCATED, tuple(ZetaMethod)),
    ConfigField("x", float, "cutoff for the corrected method; defaults to max(2|t|, 100)", (Command.ZETA,)),
    ConfigField("digits", integer, "target digits of the reference method", (Command.ZETA,), DEFAULT_REFERENCE_DIGITS),
    ConfigField(
        "step", float, "coarse grid step, at most {}".format(MAX_GRID_STEP), (Command.SEARCH,), DEFAULT_GRID_STEP
    ),
    ConfigField(
        "refine", integer, "golden-section iterations per candidate", (Command.SEARCH,), DEFAULT_REFINEMENT_DEPTH
    ),
    ConfigField("candidates", integer, "number of grid maxima refined", (Command.SEARCH,), DEFAULT_CANDIDATES),
    ConfigField(
        "mn_limit",
        integer,
        "largest m, n in the quadruple sum; defaults to floor(T)",
        (Command.LEMMA_CHECK, Command.RESONATE),
    ),
    ConfigField(
        "resonator",
        ResonatorMode,
        "resonator spectrum: bucket representatives or the full Euler product",
        (Command.RESONATE,),
        ResonatorMode.REPRESENTATIVES,
        tuple(ResonatorMode),
    ),
    ConfigField("quadrature", boolean, "cross-check the decomposition by quadrature", (Command.RESONATE,), False),
    ConfigField("samples", integer, "number of samples", (Command.MEASURE,)),
    ConfigField("seed", integer, "seed of the sample generator", (Command.MEASURE,), 0),
    ConfigField("strata", integer, "number of equal-width strata", (Command.MEASURE,), DEFAULT_STRATA),
    ConfigField("threads", integer, "worker threads; defaults to the executor default"),
    ConfigField("log_level", str, "logging level", default=DEFAULT_LOG_LEVEL, choices=LOG_LEVELS),
    ConfigField("progress", boolean, "show progress bars", default=False),
    ConfigField("out", str, "write the JSON report here instead of stdout"),
    ConfigField("csv", str, "write the grid-valued output as CSV here"),
    ConfigField("sets_out", str, "write B and D as JSON here", (Command.CONSTRUCT,)),
    ConfigField("caps", dict, "resource caps (JSON object; config file only)", file_only=True),
)
FIELDS_BY_NAME = {f.name: f for f in FIELDS}

REQUIRED = {
    Command.CONSTRUCT: ("alpha", "T"),
    Command.GCD_SUM: ("alpha", "M"),
    Command.LEMMA_CHECK: ("lemma",),
    Command.ZETA: ("alpha",),
    Command.RESONATE: ("alpha", "T"),
    Command.SEARCH: ("alpha", "T"),
    Command.MEASURE: ("alpha", "tau", "T", "samples"),
}

LEMMA_REQUIRES = {
    LemmaName.GCD_CHAIN: ("alpha",),
    LemmaName.SEPARATION: ("alpha", "T"),
    LemmaName.WINDOWS: ("alpha", "T"),
    LemmaName.RATIOS: ("alpha", "T"),
    LemmaName.RESONANT_PAIRS: ("alpha", "T"),
    LemmaName.TYPE2_POSITIVITY: ("alpha", "T"),
    LemmaName.TYPE3_BOUND: ("alpha", "T"),
    LemmaName.CHAIN_SCAN: ("alpha",),
    LemmaName.PRIME_BOUND: (),
    LemmaName.STIRLING: (),
}


def fields_for(command):
    command = Command(command)
    return [f for f in FIELDS if command in f.commands]


class ExperimentConfig(object):
    def __init__(self, command, **values):
        """
        Parameters
        ----------
        command : Command or str
        values
            Field values by name; fields not given take their defaults

        Raises
        ------
        InvalidConfig
            On unknown keys, keys of another command or values of the wrong type
        """
        try:
            self.command = Command(command)
        except ValueError:
            raise InvalidConfig(
                "command must be one of {}, got {!r}".format([str(c) for c in Command], command)
            )
        unknown = sorted(set(values) - set(FIELDS_BY_NAME))
        if unknown:
            raise InvalidConfig("unknown config keys: {}".format(unknown))

        self.values = {f.name: f.default for f in fields_for(self.command)}
        for name, value in values.items():
            field = FIELDS_BY_NAME[name]
            if self.command not in field.commands:
                raise InvalidConfig("{} is not an option of the {} command".format(name, self.command))
            self.values[name] = None if value is None else self._coerce(field, value)

    @staticmethod
    def _coerce(field, value):
        try:
            return field.type(value)
        except (TypeError, ValueError) as e:
            raise InvalidConfig("{} must be of type {}: {}".format(field.name, field.type.__name__, e))

    def __getattr__(self, item):
        values = self.__dict__.get("values", {})
        if item in values:
            return values[item]
        if item in FIELDS_BY_NAME:
            return None
        raise AttributeError(item)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return "ExperimentConfig({})".format(self.to_dict())

    @property
    def resource_caps(self):
        if not self.values.get("caps"):
            return DEFAULT_CAPS
        try:
            return ResourceCaps.from_dict(self.values["caps"])
        except (KeyError, TypeError) as e:
            raise InvalidConfig(str(e))

    @classmethod
    def from_json(cls, config, **overrides):
        """
        Return an ExperimentConfig from a JSON file or dict with a "command" key.

        Parameters
        ----------
        config : str or dict
            Path to the JSON config file, or a dict representing the object
        overrides
            Values taking precedence over the file (e.g. command line flags)

        Returns
        -------
        ExperimentConfig
        """
        if not isinstance(config, dict):
            try:
                with open(str(config)) as f:
                    config = json.load(f)
            except (OSError, ValueError) as e:
                raise InvalidConfig("could not read config file {}: {}".format(config, e))
        values = dict(config)
        command = overrides.pop("command", None) or values.pop("command", None)
        values.pop("command", None)
        if command is None:
            raise InvalidConfig("config must name a command")
        values.update(overrides)
        return cls(command, **values)

    @classmethod
    def from_args(cls, args):
        """
        Build a config from an argparse namespace; flags override values from ``--config``.

        Only flags which were actually given appear in the namespace.
        """
        given = {k: v for k, v in vars(args).items() if k in FIELDS_BY_NAME}
        config_path = getattr(args, "config", None)
        if config_path:
            return cls.from_json(config_path, command=args.command, **given)
        return cls(args.command, **given)

    def to_dict(self):
        out = {"command": str(self.command)}
        for name, value in self.values.items():
            if value is None:
                continue
            out[name] = str(value) if isinstance(value, StrEnum) else value
        return out

    def _require(self, names, context):
        missing = [FIELDS_BY_NAME[n].flag for n in names if self.values.get(n) is None]
        if missing:
            raise InvalidConfig("{} needs {}".format(context, ", ".join(missing)))

    def validate(self):
        """
        Check every value against the preconditions of the module it is passed to.

        Returns
        -------
        ExperimentConfig
            self, for chaining

        Raises
        ------
        InvalidConfig
            Naming the violated precondition
        """
        self._require(REQUIRED[self.command], str(self.command))
        if self.command is Command.LEMMA_CHECK:
            self._require(LEMMA_REQUIRES[self.lemma], "lemma {}".format(self.lemma))
            if self.lemma is LemmaName.GCD_CHAIN and self.M is None and self.T is None:
                raise InvalidConfig("lemma 1 needs --M or --T")
        try:
            self._validate_values()
        except InvalidConfig:
            raise
        except InvalidArgument as e:
            raise InvalidConfig(str(e))
        logger.debug("resource caps %s", self.resource_caps)
        return self

    def _validate_values(self):
        v = self.values
        if v.get("alpha") is not None:
            require_alpha(v["alpha"])
        min_T = 2 if self.command is Command.ZETA else 16
        if v.get("T") is not None and not v["T"] >= min_T:
            raise InvalidConfig("T must be at least {}, got {}".format(min_T, v["T"]))
        if v.get("tau") is not None:
            theorem2_exponent(v["alpha"], v["tau"])
        for name in ("M", "samples", "digits", "threads", "strata", "mn_limit", "R", "candidates"):
            if v.get(name) is not None and v[name] < 1:
                raise InvalidConfig("{} must be at least 1, got {}".format(name, v[name]))
        for name in ("k", "refine", "seed"):
            if v.get(name) is not None and v[name] < 0:
                raise InvalidConfig("{} must be nonnegative, got {}".format(name, v[name]))
        if v.get("step") is not None and not 0 < v["step"] <= MAX_GRID_STEP:
            raise InvalidConfig("step must satisfy 0 < step <= {}, got {}".format(MAX_GRID_STEP, v["step"]))
        if v.get("log_level") is not None and str(v["log_level"]).upper() not in LOG_LEVELS:
            raise InvalidConfig("log_level must be one of {}, got {}".format(LOG_LEVELS, v["log_level"]))
        if self.command is Command.ZETA:
            self._validate_zeta()

    def _validate_zeta(self):
        v = self.values
        grid = [v.get(n) for n in ("t_start", "t_stop", "t_step")]
        if v.get("t") is None and any(g is None for g in grid):
            raise InvalidConfig("zeta needs --t or all of --t-start, --t-stop, --t-step")
        if v.get("t") is not None and any(g is not None for g in grid):
            raise InvalidConfig("zeta takes either --t or a grid, not both")
        if v.get("t") is None:
            start, stop, step = grid
            if not step > 0 or not stop >= start:
                raise InvalidConfig("the grid needs t_step > 0 and t_stop >= t_start")
        if v["method"] is ZetaMethod.TRUNCATED and v.get("T") is None:
            raise InvalidConfig("the truncated method needs --T")

    def t_grid(self):
        """The zeta grid t_start + j t_step, j = 0, 1, ..., up to t_stop"""
        n = int(math.floor((self.t_stop - self.t_start) / self.t_step * (1 + 1e-12))) + 1
        return [self.t_start + j * self.t_step for j in range(n)]
