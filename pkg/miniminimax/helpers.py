# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.helpers
~~~~~~~~~~~~~~~~~~~

provides init functions that are used to help setup the app.
"""

# standard library imports
import argparse
import configparser
import inspect
import logging
import logging.config
import math
import os
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar, Union

# third party imports
import numpy as np

# app imports
from .__version__ import __version__
from .constants import (CENTERS, CONFIG_BOOLEAN_KEYS, CONFIG_FILE,
                        CORNER_MODES, DEFAULT_CONFIDENCE,
                        DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_QUANTILES,
                        DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_UNITS,
                        EPSILON_UNITS, METRICS, OUTPUTS, SEED_LIMIT,
                        SUBCOMMANDS, THREADS_ENV, UNITS)
from .errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_REPORT_EPSILONS = "0.01:khat,0.1:khat,0.5:khat"


def setup_logger(args) -> None:
    """ Configure and set logging levels """
    logging_level = logging.INFO
    if getattr(args, "logging", None):
        if args.logging == "debug":
            logging_level = logging.DEBUG
        if args.logging == "warning":
            logging_level = logging.WARNING

    default_logging = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {"format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"}
        },
        "handlers": {
            "default": {
                "level": logging_level,
                "formatter": "standard",
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
            }
        },
        "loggers": {"": {"handlers": ["default"], "level": logging_level}},
    }
    logging.config.dictConfig(default_logging)


def strtobool(value: str) -> bool:
    """ Convert a string representation of truth to True or False """
    value = value.strip().lower()
    if value in ("yes", "true", "on"):
        return True
    if value in ("no", "false", "off"):
        return False
    raise ValueError(f"invalid truth value {value!r}")


@dataclass(frozen=True)
class EpsilonSpec:
    """ An accuracy target: absolute, or a fraction of khat or of gamma-hat """

    value: float
    unit: str = "abs"

    def __str__(self) -> str:
        return f"{self.value!r}:{self.unit}"


def check_epsilon_list(value: str) -> Tuple[EpsilonSpec, ...]:
    """ Parse '0.02:gammahat,0.5:khat,0.1' into epsilon specs """
    specs = []
    for token in value.split(","):
        token = token.strip()
        if not token:
            continue
        number, _, unit = token.partition(":")
        unit = unit.strip() or "abs"
        if unit not in EPSILON_UNITS:
            raise ValueError(
                f"{token!r}: unit must be one of {', '.join(EPSILON_UNITS)}"
            )
        amount = float(number)
        if not math.isfinite(amount) or amount <= 0:
            raise ValueError(f"{token!r}: epsilon must be > 0")
        specs.append(EpsilonSpec(amount, unit))
    if not specs:
        raise ValueError("no epsilon given")
    return tuple(specs)


def check_positive_float(value: str) -> float:
    """ Check value is a finite number > 0 """
    number = float(value)
    if not math.isfinite(number) or number <= 0:
        raise ValueError("%s is not a positive number" % value)
    return number


def check_positive_int(value: str) -> int:
    """ Check value is an integer >= 1 """
    number = int(value)
    if number < 1:
        raise ValueError("%s is not a positive integer" % value)
    return number


def check_seed(value: str) -> int:
    """ Check seed is a non-negative integer """
    number = int(value)
    if number < 0 or number >= SEED_LIMIT:
        raise ValueError("%s is not a valid seed" % value)
    return number


def check_probability(value: str) -> float:
    """ Check value lies strictly between 0 and 1 """
    number = float(value)
    if not 0.0 < number < 1.0:
        raise ValueError("%s is not in (0, 1)" % value)
    return number


def check_kappa(value: str) -> Union[float, str]:
    """ 'auto' (use khat) or a finite number >= 0 """
    if value.strip().lower() == "auto":
        return "auto"
    number = float(value)
    if not math.isfinite(number) or number < 0:
        raise ValueError("%s is not a valid kappa" % value)
    return number


def check_quantiles(value: str) -> Tuple[float, ...]:
    """ Comma separated probabilities in (0, 1), returned sorted """
    quantiles = sorted({check_probability(token) for token in value.split(",") if token.strip()})
    if not quantiles:
        raise ValueError("no quantiles given")
    return tuple(quantiles)


def check_units(value: str) -> Tuple[str, ...]:
    """ Comma separated report units """
    units = tuple(token.strip() for token in value.split(",") if token.strip())
    for unit in units:
        if unit not in UNITS:
            raise ValueError(f"{unit!r} is not one of {', '.join(UNITS)}")
    if not units:
        raise ValueError("no units given")
    return units


def check_float_list(value: str) -> Tuple[float, ...]:
    """ Comma separated positive numbers """
    return tuple(check_positive_float(token) for token in value.split(",") if token.strip())


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--data", metavar="CSV", dest="data_path", help="observations: coordinate columns and a value column"
    )
    common.add_argument(
        "--value-column",
        metavar="NAME|INDEX",
        dest="value_column",
        help="column holding f (default: last column)",
    )
    common.add_argument(
        "--metric",
        dest="metric",
        choices=METRICS + ("both",),
        help="distance on the unit cube (default: linf)",
    )
    common.add_argument(
        "--kappa",
        dest="kappa",
        type=check_kappa,
        help="regularity budget; 'auto' uses the empirical Lipschitz constant",
    )
    common.add_argument(
        "--center",
        dest="center",
        choices=CENTERS,
        help="centring constant for the adversarial function and burden bound (default: argmin)",
    )
    common.add_argument("--output", dest="output", choices=OUTPUTS, help="report format (default: text)")
    common.add_argument("--out", metavar="FILE", dest="out_path", help="write the report to FILE instead of stdout")
    common.add_argument(
        "--config",
        type=str,
        metavar="FILE",
        default=CONFIG_FILE,
        help="customize path for configuration file (default: %(default)s)",
    )
    common.add_argument(
        "--logging",
        help="change logging output",
        nargs="?",
        choices=("debug", "warning"),
    )
    common.add_argument(
        "--threads",
        dest="threads",
        type=check_positive_int,
        help=f"worker threads (default: ${THREADS_ENV} or 1)",
    )
    common.add_argument(
        "--strict",
        dest="strict",
        action="store_true",
        default=False,
        help="require an explicit --seed wherever randomness is used",
    )
    common.add_argument("--seed", dest="seed", type=check_seed, help="random seed (default: 0)")
    return common


def _corner_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", dest="mode", choices=CORNER_MODES, help="corner search mode (default: auto)")
    parser.add_argument(
        "--budget",
        dest="budget",
        type=check_positive_int,
        help="corner budget: max corners for exhaustive mode, corner evaluations for heuristic mode",
    )
    parser.add_argument(
        "--constant",
        dest="constant",
        action="store_true",
        default=False,
        help="also bound the potential error with the observations replaced by a constant",
    )


def _mc_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", dest="samples", type=check_positive_int, help="Monte Carlo sample size")
    parser.add_argument("--confidence", dest="confidence", type=check_probability, help="confidence level")
    parser.add_argument("--quantiles", dest="quantiles", type=check_quantiles, help="quantiles to bound")
    parser.add_argument("--units", dest="units", type=check_units, help="khat2, kappa2, gammahat and/or abs")


def setup_parser() -> argparse.ArgumentParser:
    """ Set default values and handle arg parser """
    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="miniminimax bounds the best-case uncertainty of any emulator of a partially observed function on [0,1]^p.",
    )
    parser.add_argument("--version", "-V", action="version", version=f"{__version__}")
    common = _common_parser()
    subparsers = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    subparsers.required = True

    subparsers.add_parser(
        "lipschitz", parents=[common], help="empirical Lipschitz constant and centring constants"
    )

    envelope = subparsers.add_parser(
        "envelope", parents=[common], help="e+, e-, e*, f* and fbar at query points"
    )
    envelope.add_argument("--query", metavar="CSV", dest="query_path", help="query points, coordinate columns only")

    burden = subparsers.add_parser(
        "burden", parents=[common], help="lower bound on the observations needed for epsilon accuracy"
    )
    burden.add_argument(
        "--epsilon",
        dest="epsilons",
        type=check_epsilon_list,
        help="comma separated VALUE[:abs|khat|gammahat] list",
    )

    cover = subparsers.add_parser(
        "cover", parents=[common], help="covering upper bound in the sup metric"
    )
    cover.add_argument("--kplus", dest="kplus", type=check_positive_float, help="upper bound on the Lipschitz constant")
    cover.add_argument("--epsilon", dest="cover_epsilon", type=check_positive_float, help="absolute accuracy")
    cover.add_argument("--dim", dest="cover_dim", type=check_positive_int, help="dimension p")

    corners = subparsers.add_parser(
        "corners", parents=[common], help="corner bounds on the maximum potential error (linf)"
    )
    _corner_arguments(corners)

    mc = subparsers.add_parser(
        "mc", parents=[common], help="confidence bounds on the distribution of potential error"
    )
    _mc_arguments(mc)

    verdict = subparsers.add_parser(
        "verdict", parents=[common], help="compare with the constant emulator at the centroid (linf)"
    )
    _corner_arguments(verdict)
    verdict.add_argument(
        "--khyp",
        dest="khyp",
        type=check_float_list,
        help="hypothetical Lipschitz constants for the scaled error bound",
    )

    report = subparsers.add_parser("report", parents=[common], help="every analysis whose preconditions hold")
    _corner_arguments(report)
    _mc_arguments(report)
    report.add_argument(
        "--epsilon",
        dest="epsilons",
        type=check_epsilon_list,
        help=f"burden targets (default: {DEFAULT_REPORT_EPSILONS})",
    )
    report.add_argument("--khyp", dest="khyp", type=check_float_list, help="hypothetical Lipschitz constants")
    return parser


@dataclass(frozen=True)
class RunConfig:
    """ Fully resolved settings for one invocation """

    subcommand: str
    data_path: Optional[str] = None
    value_column: Optional[str] = None
    metric: str = "linf"
    kappa: Optional[float] = None
    center: str = "argmin"
    epsilons: Tuple[EpsilonSpec, ...] = ()
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    seed_given: bool = False
    confidence: float = DEFAULT_CONFIDENCE
    quantiles: Tuple[float, ...] = DEFAULT_QUANTILES
    units: Tuple[str, ...] = DEFAULT_UNITS
    output: str = "text"
    out_path: Optional[str] = None
    mode: str = "auto"
    budget: Optional[int] = None
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET
    constant: bool = False
    threads: int = 1
    strict: bool = False
    query_path: Optional[str] = None
    kplus: Optional[float] = None
    cover_epsilon: Optional[float] = None
    cover_dim: Optional[int] = None
    khyp: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def metrics(self) -> Tuple[str, ...]:
        return METRICS if self.metric == "both" else (self.metric,)


def convert_configparser_to_dict(config: configparser.ConfigParser) -> dict:
    """
    Convert ConfigParser object to dictionary.

    The resulting dictionary has sections as keys which point to a dict of the
    section options as key => value pairs.

    Boolean options are converted from str to bool; every other value stays
    a str, so a column named "yes" is still a column name.
    """
    _dict = {}
    for section in config.sections():
        _dict[section] = {}
        for key, value in config.items(section):
            if key in CONFIG_BOOLEAN_KEYS:
                try:
                    value = strtobool(value)
                except ValueError:
                    raise ConfigError(f"config [{section}] {key} = {value!r} is not a boolean") from None
            _dict[section][key] = value
    return _dict


def load_config(config_file: str) -> configparser.ConfigParser:
    """ Load in config from external file """
    config = configparser.ConfigParser()
    config.read(config_file)
    return config


def _from_ini(config: dict, section: str, key: str, parse: Callable, flag: str):
    raw = config.get(section, {}).get(key)
    if raw is None or raw == "":
        return None
    try:
        return parse(str(raw))
    except ValueError:
        raise ConfigError(f"config [{section}] {key} = {raw!r} is invalid (see {flag})") from None


def default_threads() -> Optional[int]:
    """ Thread count from the environment, if set """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return check_positive_int(raw)
    except ValueError:
        raise ConfigError(f"${THREADS_ENV}={raw!r} is not a positive integer") from None


def setup_config(args) -> RunConfig:
    """ Create the RunConfig: built-in defaults < config.ini < environment < flags """
    log = logging.getLogger(inspect.stack()[0][3])

    if os.path.isfile(args.config):
        ini = convert_configparser_to_dict(load_config(args.config))
    else:
        log.warning("can not find config at %s", args.config)
        ini = {}

    def pick(name: str, section: str, key: str, parse: Callable, flag: str, default):
        value = getattr(args, name, None)
        if value is not None:
            return value
        value = _from_ini(ini, section, key, parse, flag)
        return default if value is None else value

    def metric_choice(value: str) -> str:
        if value not in METRICS + ("both",):
            raise ValueError(value)
        return value

    def choice(options):
        def parse(value: str) -> str:
            if value not in options:
                raise ValueError(value)
            return value

        return parse

    threads = getattr(args, "threads", None) or default_threads()
    if threads is None:
        threads = _from_ini(ini, "GENERAL", "threads", check_positive_int, "--threads") or 1

    kappa = getattr(args, "kappa", None)
    if kappa is None:
        kappa = _from_ini(ini, "GENERAL", "kappa", check_kappa, "--kappa")
    if kappa == "auto":
        kappa = None

    strict = bool(getattr(args, "strict", False)) or ini.get("GENERAL", {}).get("strict") is True

    epsilons = getattr(args, "epsilons", None)
    if epsilons is None and args.subcommand == "report":
        epsilons = check_epsilon_list(DEFAULT_REPORT_EPSILONS)

    return RunConfig(
        subcommand=args.subcommand,
        data_path=getattr(args, "data_path", None),
        value_column=pick("value_column", "GENERAL", "value_column", str, "--value-column", None),
        metric=pick("metric", "GENERAL", "metric", metric_choice, "--metric", "linf"),
        kappa=kappa,
        center=pick("center", "GENERAL", "center", choice(CENTERS), "--center", "argmin"),
        epsilons=epsilons or (),
        samples=pick("samples", "MONTECARLO", "samples", check_positive_int, "--samples", DEFAULT_SAMPLES),
        seed=pick("seed", "MONTECARLO", "seed", check_seed, "--seed", DEFAULT_SEED),
        seed_given=getattr(args, "seed", None) is not None,
        confidence=pick(
            "confidence", "MONTECARLO", "confidence", check_probability, "--confidence", DEFAULT_CONFIDENCE
        ),
        quantiles=pick("quantiles", "MONTECARLO", "quantiles", check_quantiles, "--quantiles", DEFAULT_QUANTILES),
        units=pick("units", "MONTECARLO", "units", check_units, "--units", DEFAULT_UNITS),
        output=pick("output", "GENERAL", "output", choice(OUTPUTS), "--output", "text"),
        out_path=getattr(args, "out_path", None),
        mode=pick("mode", "CORNERS", "mode", choice(CORNER_MODES), "--mode", "auto"),
        budget=pick("budget", "CORNERS", "budget", check_positive_int, "--budget", None),
        exhaustive_budget=_from_ini(
            ini, "CORNERS", "exhaustive_budget", check_positive_int, "exhaustive_budget"
        )
        or DEFAULT_EXHAUSTIVE_BUDGET,
        constant=bool(getattr(args, "constant", False)),
        threads=threads,
        strict=strict,
        query_path=getattr(args, "query_path", None),
        kplus=getattr(args, "kplus", None),
        cover_epsilon=getattr(args, "cover_epsilon", None),
        cover_dim=getattr(args, "cover_dim", None),
        khyp=getattr(args, "khyp", None) or (),
    )


def validate(config: RunConfig) -> bool:
    """ Validate every setting before any computation starts """
    if config.subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {config.subcommand!r}")

    if config.subcommand == "cover":
        missing = [
            flag
            for flag, value in (
                ("--kplus", config.kplus),
                ("--epsilon", config.cover_epsilon),
                ("--dim", config.cover_dim),
            )
            if value is None
        ]
        if missing:
            raise ConfigError(f"cover requires {', '.join(missing)}")
        return True

    if not config.data_path:
        raise ConfigError(f"{config.subcommand} requires --data")
    if not os.path.isfile(config.data_path):
        raise ConfigError(f"--data {config.data_path}: no such file")

    if config.subcommand == "envelope":
        if not config.query_path:
            raise ConfigError("envelope requires --query")
        if not os.path.isfile(config.query_path):
            raise ConfigError(f"--query {config.query_path}: no such file")

    if config.subcommand == "burden" and not config.epsilons:
        raise ConfigError("burden requires --epsilon")

    if config.metric == "both" and config.subcommand not in ("mc", "report", "lipschitz"):
        raise ConfigError(f"--metric both is only supported by mc, report and lipschitz, not {config.subcommand}")

    if config.subcommand in ("corners", "verdict") and config.metric != "linf":
        raise ConfigError(f"{config.subcommand} requires --metric linf (corner bounds are sup-metric results)")

    if config.mode == "exhaustive" and config.subcommand in ("corners", "verdict", "report"):
        if config.budget is not None and config.budget < 2:
            raise ConfigError("--budget must allow at least the two corners 0 and 1")

    if config.strict and not config.seed_given:
        if config.subcommand in ("mc", "report"):
            raise ConfigError(f"--strict: {config.subcommand} requires an explicit --seed")
        if config.subcommand in ("corners", "verdict") and config.mode == "heuristic":
            raise ConfigError(f"--strict: heuristic {config.subcommand} requires an explicit --seed")

    return True


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Apply func to every item, in order.

    Results come back in input order whatever the thread count, so callers
    that reduce them sequentially are deterministic.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPool(processes=min(threads, len(items))) as pool:
        return pool.map(func, items)


def stream_generator(seed: int, stream: int, index: int = 0, tag: int = 0) -> np.random.Generator:
    """
    Philox generator for block `index` of one random stream.

    The stream is the second key word, so different streams never share
    output. Philox counts up from counter word 0; `index` and `tag` sit in
    the top two words.
    """
    if not 0 <= int(seed) < SEED_LIMIT:
        raise ConfigError(f"--seed must be in [0, 2**64), got {seed!r}")
    bits = np.random.Philox(key=[int(seed), int(stream)], counter=[0, 0, int(index), int(tag)])
    return np.random.Generator(bits)
