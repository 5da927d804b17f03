# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.metric
~~~~~~~~~~~~~~~~~~

distances on the unit hypercube and the geometric constants the bounds need
"""

# standard library imports
import math
from dataclasses import dataclass

# third party imports
import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import gammaln

# app imports
from .constants import METRICS
from .errors import ConfigError, DimensionMismatch, UnsupportedMetric

_CDIST_NAMES = {"l2": "euclidean", "linf": "chebyshev"}


@dataclass(frozen=True)
class Metric:
    """
    A distance on [0,1]^dim.

    `kind` is "l2" (q=2) or "linf" (q=infinity). Other lq metrics have no
    ball constant in the burden bound and are rejected.
    """

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in METRICS:
            raise ConfigError(
                f"--metric: {self.kind!r} is not supported (choose from {', '.join(METRICS)})"
            )
        if int(self.dim) < 1:
            raise ConfigError(f"metric dimension must be >= 1, got {self.dim}")

    @property
    def is_sup(self) -> bool:
        return self.kind == "linf"

    def _check(self, arr: np.ndarray, name: str) -> np.ndarray:
        arr = np.asarray(arr, dtype=float)
        if arr.shape[-1] != self.dim:
            raise DimensionMismatch(
                f"{name} has {arr.shape[-1]} coordinates, expected {self.dim}"
            )
        return arr

    def distance(self, v, w) -> float:
        """ Distance between two points """
        v = self._check(np.atleast_1d(v), "v")
        w = self._check(np.atleast_1d(w), "w")
        if v.ndim != 1 or w.ndim != 1:
            raise DimensionMismatch("distance expects two single points")
        diff = np.abs(v - w)
        if self.is_sup:
            return float(diff.max())
        return float(math.sqrt(float(np.dot(diff, diff))))

    def pairwise(self, a, b) -> np.ndarray:
        """ Matrix of distances between the rows of `a` and the rows of `b` """
        a = self._check(np.atleast_2d(a), "query points")
        b = self._check(np.atleast_2d(b), "design points")
        return cdist(a, b, metric=_CDIST_NAMES[self.kind])

    def log_ball_volume_constant(self) -> float:
        """ Natural log of the volume of the unit ball """
        p = self.dim
        if self.is_sup:
            return p * math.log(2.0)
        return 0.5 * p * math.log(math.pi) - float(gammaln(0.5 * p + 1.0))

    def ball_volume_constant(self) -> float:
        """ C_q: the volume of the unit-radius ball, so mu(B(0, rho)) = C_q rho^p """
        if self.is_sup:
            return float(2 ** self.dim)
        return math.exp(self.log_ball_volume_constant())

    def corner_distance_bound(self, v) -> np.ndarray:
        """
        max(d(v, 0), d(v, 1)) for one point or a batch of points.

        Every point of the cube is within this distance of v. Only valid in
        the sup metric.
        """
        if not self.is_sup:
            raise UnsupportedMetric(
                "corner distance bound is only defined for --metric linf"
            )
        v = self._check(np.asarray(v, dtype=float), "v")
        bound = np.maximum(v, 1.0 - v).max(axis=-1)
        if bound.ndim == 0:
            return float(bound)
        return bound
