# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.constants
~~~~~~~~~~~~~~~~~~~~~

define constant values for app
"""

CONFIG_FILE = "/etc/miniminimax/config.ini"
CONFIG_BOOLEAN_KEYS = ("strict",)

THREADS_ENV = "MINIMINIMAX_THREADS"

METRICS = ("l2", "linf")
OUTPUTS = ("json", "csv", "text")
SUBCOMMANDS = (
    "lipschitz",
    "envelope",
    "burden",
    "cover",
    "corners",
    "mc",
    "verdict",
    "report",
)
CORNER_MODES = ("auto", "exhaustive", "heuristic")
UNITS = ("khat2", "kappa2", "gammahat", "abs")
EPSILON_UNITS = ("abs", "khat", "gammahat")
CENTERS = ("argmin", "mean")
SYNTHETIC_KINDS = ("linear", "constant", "product-sine", "random-lipschitz")

# exit codes
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3
EXIT_INTERRUPT = 130

# tolerances
COORDINATE_TOLERANCE = 1e-12
EMPTY_CLASS_TOLERANCE = 1e-12
GOLDEN_RELATIVE_TOLERANCE = 1e-10
CERTIFIED_TOLERANCE = 1e-9
LOG10_EXACT_LIMIT = 300.0

# corner search
DEFAULT_EXHAUSTIVE_BUDGET = 2 ** 24
DEFAULT_HEURISTIC_BUDGET = 100_000
CORNER_TABLE_BITS = 10
CORNER_BLOCK_ELEMENTS = 2 ** 20
HEURISTIC_CHUNK_BUDGET = 4096
HEURISTIC_BATCH = 64
CORNER_ORDERS = ("gray", "lex")

# sampling
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 0
DEFAULT_CONFIDENCE = 0.95
DEFAULT_QUANTILES = (0.25, 0.5, 0.75)
DEFAULT_UNITS = ("khat2",)
SAMPLE_CHUNK = 4096
PAIRWISE_CHUNK_ELEMENTS = 2 ** 22

# second Philox key word; one per random stream
RNG_STREAM_FIXTURES = 0
RNG_STREAM_CORNERS = 1
RNG_STREAM_SAMPLES = 2
SEED_LIMIT = 2 ** 64

# text reports switch to log10 above this magnitude
TEXT_LOG10_THRESHOLD = 1e6
