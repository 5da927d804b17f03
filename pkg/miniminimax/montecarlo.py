# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.montecarlo
~~~~~~~~~~~~~~~~~~~~~~

distribution of the potential error over the cube: sampling and one-sided
lower confidence bounds for its quantiles and mean
"""

# standard library imports
import inspect
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

# third party imports
import numpy as np
from scipy.stats import binom, norm

# app imports
from .constants import RNG_STREAM_SAMPLES, SAMPLE_CHUNK, UNITS
from .envelope import EnvelopeModel, potential_error
from .errors import ConfigError, DegenerateError, EmptyError
from .helpers import RunConfig, parallel_map, stream_generator


def sample_points(dim: int, n_samples: int, seed: int, threads: int = 1) -> np.ndarray:
    """
    Uniform points in [0,1]^dim from a counter-based generator.

    Chunk i of SAMPLE_CHUNK points always comes from block i of the samples
    stream, so the points depend on the seed alone.
    """
    if int(n_samples) < 1:
        raise ConfigError(f"--samples must be >= 1, got {n_samples!r}")
    starts = range(0, int(n_samples), SAMPLE_CHUNK)

    def draw(start: int) -> np.ndarray:
        rng = stream_generator(seed, RNG_STREAM_SAMPLES, start // SAMPLE_CHUNK)
        return rng.random((min(SAMPLE_CHUNK, int(n_samples) - start), int(dim)))

    return np.concatenate(parallel_map(draw, starts, threads))


def sample_error(
    model: EnvelopeModel, n_samples: int, seed: int, threads: int = 1
) -> np.ndarray:
    """ Sorted e* at n_samples uniform random points """
    log = logging.getLogger(inspect.stack()[0][3])

    points = sample_points(model.dataset.dim, n_samples, seed, threads)
    chunks = [points[i : i + SAMPLE_CHUNK] for i in range(0, points.shape[0], SAMPLE_CHUNK)]
    errors = np.concatenate(parallel_map(lambda w: potential_error(model, w), chunks, threads))
    errors.sort()
    log.debug(
        "sampled %s points (seed %s): e* in [%r, %r]", errors.size, seed, errors[0], errors[-1]
    )
    return errors


def binomial_tail(k: int, n: int, q: float) -> float:
    """ P(Binomial(n, q) >= k) """
    return float(binom.sf(k - 1, n, q))


def quantile_lcb(sorted_values, q: float, confidence: float) -> float:
    """
    One-sided lower confidence bound for the q-quantile.

    Returns the k-th smallest value for the largest k with
    P(Binomial(N, q) >= k) >= confidence, or -inf when no k >= 1 qualifies.
    """
    if not 0.0 < q < 1.0:
        raise ConfigError(f"--quantiles: {q!r} is not in (0, 1)")
    if not 0.0 < confidence < 1.0:
        raise ConfigError(f"--confidence: {confidence!r} is not in (0, 1)")
    values = np.sort(np.asarray(sorted_values, dtype=float))
    if values.size == 0:
        raise EmptyError("no values to bound")
    ks = np.arange(1, values.size + 1)
    qualifying = np.flatnonzero(binom.sf(ks - 1, values.size, q) >= confidence)
    if qualifying.size == 0:
        return -math.inf
    # the tail probability falls with k, so the last qualifying k is the largest
    return float(values[qualifying[-1]])


def mean_lcb(values, confidence: float) -> float:
    """ z-test lower confidence bound for the mean, floored at 0 """
    if not 0.0 < confidence < 1.0:
        raise ConfigError(f"--confidence: {confidence!r} is not in (0, 1)")
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise DegenerateError(f"mean bound needs at least 2 values, got {values.size}")
    spread = float(np.std(values, ddof=1))
    bound = float(np.mean(values)) - float(norm.ppf(confidence)) * spread / math.sqrt(values.size)
    return max(0.0, bound)


@dataclass(frozen=True)
class ErrorDistributionReport:
    """
    Lower confidence bounds on the distribution of e* in one unit.

    All values are the absolute figures divided by `scale`: khat/2 for
    khat2, kappa/2 for kappa2, |gamma-hat| for gammahat and 1 for abs.
    Quantile bounds of -inf mean that no nontrivial bound exists.
    """

    metric: str
    unit: str
    scale: float
    n_samples: int
    seed: int
    confidence: float
    quantile_lcbs: Tuple[Tuple[float, float], ...]
    mean_lcb: float
    sample_mean: float
    max_observed: float


def unit_scale(model: EnvelopeModel, unit: str) -> float:
    """ Divisor taking absolute errors into `unit` """
    if unit not in UNITS:
        raise ConfigError(f"--units: {unit!r} is not one of {', '.join(UNITS)}")
    if unit == "abs":
        return 1.0
    if unit == "khat2":
        scale = 0.5 * model.khat
        if scale <= 0:
            raise DegenerateError("unit khat2 needs khat > 0")
        return scale
    if unit == "kappa2":
        scale = 0.5 * model.kappa
        if scale <= 0:
            raise DegenerateError("unit kappa2 needs kappa > 0")
        return scale
    scale = abs(model.gamma_hat)
    if scale == 0:
        raise DegenerateError("unit gammahat needs a nonzero mean of f")
    return scale


def summarize(
    model: EnvelopeModel,
    errors: np.ndarray,
    seed: int,
    confidence: float,
    quantiles: Tuple[float, ...],
    unit: str,
) -> ErrorDistributionReport:
    """ Bounds from already sampled (sorted, absolute) errors """
    scale = unit_scale(model, unit)
    absolute = [(float(q), quantile_lcb(errors, q, confidence)) for q in sorted(quantiles)]
    return ErrorDistributionReport(
        metric=model.metric.kind,
        unit=unit,
        scale=scale,
        n_samples=int(errors.size),
        seed=int(seed),
        confidence=float(confidence),
        quantile_lcbs=tuple((q, lcb / scale) for q, lcb in absolute),
        mean_lcb=mean_lcb(errors, confidence) / scale,
        sample_mean=float(np.mean(errors)) / scale,
        max_observed=float(errors[-1]) / scale,
    )


def build_report(
    model: EnvelopeModel, config: RunConfig, errors: Optional[np.ndarray] = None
) -> List[ErrorDistributionReport]:
    """
    One report per requested unit from a single sample of config.samples points.

    Units that are undefined for the data (e.g. khat2 with khat = 0) raise
    DegenerateError.
    """
    if errors is None:
        errors = sample_error(model, config.samples, config.seed, config.threads)
    if errors.size < 2:
        raise DegenerateError("--samples must be >= 2 for a mean bound")
    return [
        summarize(model, errors, config.seed, config.confidence, config.quantiles, unit)
        for unit in config.units
    ]
