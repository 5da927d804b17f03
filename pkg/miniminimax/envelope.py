# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.envelope
~~~~~~~~~~~~~~~~~~~~

empirical Lipschitz constant, upper/lower envelopes, the minimax emulator
and the adversarial function built from the observations
"""

# standard library imports
import inspect
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple, Union

# third party imports
import numpy as np
from scipy.special import logsumexp

# app imports
from .constants import (CENTERS, EMPTY_CLASS_TOLERANCE,
                        GOLDEN_RELATIVE_TOLERANCE, PAIRWISE_CHUNK_ELEMENTS)
from .dataset import Dataset
from .errors import ConfigError, DegenerateError, DimensionMismatch, EmptyClass
from .helpers import parallel_map
from .metric import Metric

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def _as_metric(metric: Union[Metric, str], dim: int) -> Metric:
    if isinstance(metric, Metric):
        if metric.dim != dim:
            raise DimensionMismatch(
                f"metric is defined on {metric.dim} coordinates, dataset has {dim}"
            )
        return metric
    return Metric(metric, dim)


def _pairwise_max_slope(
    dataset: Dataset, metric: Metric, threads: int = 1
) -> Tuple[float, Optional[Tuple[int, int]]]:
    """ Largest |f(x)-f(y)|/d(x,y) over pairs, with the lowest attaining (i, j) """
    n = dataset.n
    if n < 2:
        return 0.0, None
    points = dataset.points
    values = dataset.values
    rows_per_chunk = max(1, PAIRWISE_CHUNK_ELEMENTS // n)
    starts = list(range(0, n - 1, rows_per_chunk))

    def scan(i0: int) -> Tuple[float, int, int]:
        i1 = min(i0 + rows_per_chunk, n - 1)
        rows = np.arange(i0, i1)
        cols = np.arange(i0 + 1, n)
        dist = metric.pairwise(points[i0:i1], points[i0 + 1 :])
        diff = np.abs(values[i0:i1, None] - values[None, i0 + 1 :])
        upper = cols[None, :] > rows[:, None]
        slopes = np.full(dist.shape, -np.inf)
        np.divide(diff, dist, out=slopes, where=upper & (dist > 0))
        flat = int(np.argmax(slopes))
        r, c = divmod(flat, slopes.shape[1])
        return float(slopes[r, c]), int(rows[r]), int(cols[c])

    best, pair = 0.0, None
    for slope, i, j in parallel_map(scan, starts, threads):
        if slope > best:
            best, pair = slope, (i, j)
    return best, pair


def empirical_lipschitz(
    dataset: Dataset, metric: Union[Metric, str], threads: int = 1
) -> float:
    """ K-hat: the exact maximum difference quotient over all observation pairs """
    metric = _as_metric(metric, dataset.dim)
    return _pairwise_max_slope(dataset, metric, threads)[0]


def golden_section(
    func: Callable[[float], float], a: float, b: float, tol: float
) -> Tuple[float, float]:
    """
    Golden-section search.

    Given a function with a single local minimum in [a, b], return a
    sub-interval of width <= tol that contains the minimum.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(steps - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    if yc < yd:
        return a, d
    return c, b


def gamma_bar(dataset: Dataset, exponent: Optional[float] = None) -> float:
    """
    argmin over gamma of sum |f(x) - gamma|^exponent (exponent defaults to dim).

    The minimizer lies in [min f, max f]. For exponent 1 the minimizers form
    the median interval and its midpoint is returned.
    """
    values = np.asarray(dataset.values, dtype=float)
    exponent = float(dataset.dim if exponent is None else exponent)
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return lo
    if exponent == 1.0:
        return float(np.median(values))

    scale = hi - lo

    # log of the objective on a unit scale; same minimizer, no overflow
    def objective(gamma: float) -> float:
        with np.errstate(divide="ignore"):
            return float(logsumexp(exponent * np.log(np.abs(values - gamma) / scale)))

    a, b = golden_section(objective, lo, hi, GOLDEN_RELATIVE_TOLERANCE * scale)
    return 0.5 * (a + b)


@dataclass(frozen=True, eq=False)
class EnvelopeModel:
    """
    Everything the bounds need from one dataset under one metric.

    `gamma_center` is the constant splitting X into X+ (f >= gamma_center)
    and X-; it is gamma_bar unless built with center="mean".
    """

    dataset: Dataset
    metric: Metric
    kappa: float
    khat: float
    khat_pair: Optional[Tuple[int, int]]
    gamma_bar: float
    gamma_hat: float
    center: str
    gamma_center: float
    plus_index: np.ndarray
    minus_index: np.ndarray

    @classmethod
    def build(
        cls,
        dataset: Dataset,
        metric: Union[Metric, str],
        kappa: Optional[float] = None,
        center: str = "argmin",
        threads: int = 1,
    ) -> "EnvelopeModel":
        log = logging.getLogger(inspect.stack()[0][3])

        metric = _as_metric(metric, dataset.dim)
        if center not in CENTERS:
            raise ConfigError(f"--center: {center!r} is not one of {', '.join(CENTERS)}")
        khat, pair = _pairwise_max_slope(dataset, metric, threads)
        log.debug("khat (%s) = %r attained by pair %s", metric.kind, khat, pair)

        if kappa is None:
            kappa = khat
        kappa = float(kappa)
        if not math.isfinite(kappa) or kappa < 0:
            raise ConfigError(f"--kappa must be a finite number >= 0, got {kappa!r}")
        if kappa < khat:
            log.warning(
                "kappa %r is below khat %r: no admissible function exists, envelopes are diagnostic only",
                kappa,
                khat,
            )

        gbar = gamma_bar(dataset)
        ghat = float(np.mean(dataset.values))
        gcenter = gbar if center == "argmin" else ghat
        plus = np.flatnonzero(dataset.values >= gcenter)
        minus = np.flatnonzero(dataset.values < gcenter)
        return cls(
            dataset=dataset,
            metric=metric,
            kappa=kappa,
            khat=khat,
            khat_pair=pair,
            gamma_bar=gbar,
            gamma_hat=ghat,
            center=center,
            gamma_center=gcenter,
            plus_index=plus,
            minus_index=minus,
        )

    def with_kappa(self, kappa: float) -> "EnvelopeModel":
        """ Same data with another regularity budget """
        kappa = float(kappa)
        if not math.isfinite(kappa) or kappa < 0:
            raise ConfigError(f"--kappa must be a finite number >= 0, got {kappa!r}")
        return replace(self, kappa=kappa)

    def with_values(self, values, threads: int = 1) -> "EnvelopeModel":
        """ Same design and kappa with the observed values replaced """
        values = np.broadcast_to(np.asarray(values, dtype=float), (self.dataset.n,))
        dataset = Dataset.from_arrays(self.dataset.points, values, self.dataset.labels)
        return EnvelopeModel.build(
            dataset, self.metric, kappa=self.kappa, center=self.center, threads=threads
        )

    @property
    def admissible(self) -> bool:
        """ Whether some kappa-Lipschitz function fits the observations """
        return self.kappa >= self.khat - EMPTY_CLASS_TOLERANCE * self.khat


def _query(model: EnvelopeModel, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[None, :]
    if w.ndim != 2 or w.shape[1] != model.dataset.dim:
        raise DimensionMismatch(
            f"query points have {w.shape[-1]} coordinates, expected {model.dataset.dim}"
        )
    return w


def envelopes(
    model: EnvelopeModel, w, kappa: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """ e+ and e- at a batch of query points (rows of w) """
    w = _query(model, w)
    kappa = model.kappa if kappa is None else float(kappa)
    values = model.dataset.values
    rows_per_chunk = max(1, PAIRWISE_CHUNK_ELEMENTS // model.dataset.n)
    e_plus = np.empty(w.shape[0])
    e_minus = np.empty(w.shape[0])
    for start in range(0, w.shape[0], rows_per_chunk):
        stop = start + rows_per_chunk
        dist = model.metric.pairwise(w[start:stop], model.dataset.points)
        e_plus[start:stop] = np.min(values[None, :] + kappa * dist, axis=1)
        e_minus[start:stop] = np.max(values[None, :] - kappa * dist, axis=1)
    return e_plus, e_minus


def potential_error(model: EnvelopeModel, w, kappa: Optional[float] = None) -> np.ndarray:
    """ e* = (e+ - e-)/2 at a batch of query points """
    e_plus, e_minus = envelopes(model, w, kappa)
    return 0.5 * (e_plus - e_minus)


def envelope_at(model: EnvelopeModel, w) -> Tuple[float, float, float]:
    """
    (e+, e-, e*) at one point.

    e* is negative only when kappa < khat: the intervals
    [f(x) - kappa d(x,w), f(x) + kappa d(x,w)] then have empty intersection.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch("envelope_at expects a single point")
    e_plus, e_minus = envelopes(model, w)
    return float(e_plus[0]), float(e_minus[0]), float(0.5 * (e_plus[0] - e_minus[0]))


def require_admissible(model: EnvelopeModel) -> None:
    if not model.admissible:
        raise EmptyClass(
            f"--kappa {model.kappa!r} is below khat {model.khat!r}: no {model.kappa!r}-Lipschitz "
            "function agrees with the observations"
        )


def minimax_emulator(model: EnvelopeModel, w) -> np.ndarray:
    """ f* = (e+ + e-)/2 at a batch of query points """
    require_admissible(model)
    e_plus, e_minus = envelopes(model, w)
    return 0.5 * (e_plus + e_minus)


def minimax_emulator_at(model: EnvelopeModel, w) -> float:
    """ The minimax emulator at one point; interpolates the observations """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch("minimax_emulator_at expects a single point")
    return float(minimax_emulator(model, w)[0])


def fbar(model: EnvelopeModel, w) -> np.ndarray:
    """
    The adversarial function at a batch of query points.

    Equal to e-_khat inside Q+ (open balls of radius (f(x)-gamma)/khat around
    X+), to e+_khat inside Q-, and to the centring constant elsewhere.
    """
    if model.khat <= 0:
        raise DegenerateError(
            "khat is 0 (constant observations): Q+ and Q- are undefined"
        )
    w = _query(model, w)
    points = model.dataset.points
    values = model.dataset.values
    radii = np.abs(values - model.gamma_center) / model.khat
    plus_mask = np.zeros(model.dataset.n, dtype=bool)
    plus_mask[model.plus_index] = True

    e_plus, e_minus = envelopes(model, w, kappa=model.khat)
    result = np.full(w.shape[0], model.gamma_center)
    rows_per_chunk = max(1, PAIRWISE_CHUNK_ELEMENTS // model.dataset.n)
    for start in range(0, w.shape[0], rows_per_chunk):
        stop = start + rows_per_chunk
        inside = model.metric.pairwise(w[start:stop], points) < radii[None, :]
        in_plus = np.any(inside & plus_mask[None, :], axis=1)
        in_minus = np.any(inside & ~plus_mask[None, :], axis=1)
        chunk = result[start:stop]
        chunk[in_minus] = e_plus[start:stop][in_minus]
        chunk[in_plus] = e_minus[start:stop][in_plus]
    return result


def fbar_at(model: EnvelopeModel, w) -> float:
    """ The adversarial function at one point """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch("fbar_at expects a single point")
    return float(fbar(model, w)[0])


def describe(model: EnvelopeModel) -> dict:
    """ Summary statistics of a model for reports """
    return {
        "metric": model.metric.kind,
        "n": model.dataset.n,
        "dim": model.dataset.dim,
        "khat": model.khat,
        "khat_pair": list(model.khat_pair) if model.khat_pair else None,
        "kappa": model.kappa,
        "gamma_bar": model.gamma_bar,
        "gamma_hat": model.gamma_hat,
        "center": model.center,
        "n_plus": int(model.plus_index.size),
        "n_minus": int(model.minus_index.size),
    }
