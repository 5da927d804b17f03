# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.errors
~~~~~~~~~~~~~~~~~~

exceptions raised by the toolkit, each carrying the process exit code
"""

# app imports
from .constants import EXIT_DEGENERATE, EXIT_VALIDATION


class MinimaxError(Exception):
    """ Base class for every error the toolkit reports """

    exit_code = EXIT_VALIDATION


class ValidationError(MinimaxError, ValueError):
    """ Input or configuration is not acceptable """


class ConfigError(ValidationError):
    """ A flag or config.ini value is invalid """


class ParseError(ValidationError):
    """ A data file cell or header could not be parsed """


class DomainError(ValidationError):
    """ A coordinate lies outside the unit hypercube """


class DuplicateError(ValidationError):
    """ Equal design points carry different values """


class EmptyError(ValidationError):
    """ No observations were provided """


class DimensionMismatch(ValidationError):
    """ A point does not have the expected number of coordinates """


class UnsupportedMetric(ValidationError):
    """ The operation is only defined for another metric """


class UnsupportedKind(ValidationError):
    """ Unknown synthetic dataset kind """


class BudgetExceeded(ValidationError):
    """ Exhaustive corner enumeration would exceed the corner budget """


class EmptyClass(ValidationError):
    """ kappa is below the empirical Lipschitz constant so no admissible function exists """


class DegenerateError(MinimaxError):
    """ The data make the requested quantity undefined (e.g. zero Lipschitz constant) """

    exit_code = EXIT_DEGENERATE
