# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.bounds
~~~~~~~~~~~~~~~~~~

global bounds: computational burden, covering numbers, corner bounds on the
maximum potential error, the centroid verdict and global bounds on f
"""

# standard library imports
import inspect
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

# third party imports
import numpy as np
from scipy.special import logsumexp

# app imports
from .constants import (CERTIFIED_TOLERANCE, CORNER_BLOCK_ELEMENTS,
                        CORNER_MODES, CORNER_ORDERS, CORNER_TABLE_BITS,
                        DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_HEURISTIC_BUDGET,
                        HEURISTIC_BATCH, HEURISTIC_CHUNK_BUDGET,
                        LOG10_EXACT_LIMIT, RNG_STREAM_CORNERS)
from .envelope import EnvelopeModel, require_admissible
from .errors import (BudgetExceeded, ConfigError, DegenerateError,
                     UnsupportedMetric)
from .helpers import EpsilonSpec, parallel_map, stream_generator
from .metric import Metric

LN10 = math.log(10.0)
EXACT_INTEGER_LIMIT = 2 ** 53
NATIVE_INTEGER_LIMIT = 2 ** 63

OBJECTIVES = ("estar", "eplus", "eminus")


def _ceil_count(value: float) -> int:
    """ ceil, treating values within 1e-9 (relative) of an integer as that integer """
    nearest = round(value)
    if abs(value - nearest) <= CERTIFIED_TOLERANCE * max(1.0, abs(value)):
        return int(nearest)
    return int(math.ceil(value))


def _log10(value: float) -> float:
    return math.log10(value) if value > 0 else -math.inf


@dataclass(frozen=True)
class BurdenBound:
    """
    Lower bound on the observations needed for epsilon accuracy.

    `bound` is max(1, ceil(epsilon^-p (term_k - term_sum))) when it is
    exactly representable, otherwise None and only `log10_bound` is set.
    term_k = khat^p / C_q and term_sum = sum |f(x) - gamma|^p; either may be
    None when it overflows a double, its log10 is always present.
    """

    epsilon: float
    epsilon_spec: EpsilonSpec
    metric: str
    dim: int
    khat: float
    gamma: Optional[float]
    term_k: Optional[float]
    term_sum: Optional[float]
    log10_term_k: float
    log10_term_sum: float
    bound: Optional[int]
    log10_bound: float


def _finite_or_none(log10_value: float) -> Optional[float]:
    if log10_value == -math.inf:
        return 0.0
    if log10_value > LOG10_EXACT_LIMIT:
        return None
    return 10.0 ** log10_value


def _burden_from_logs(
    log10_term_k: float, log10_term_sum: float, log10_epsilon: float, dim: int
) -> Tuple[Optional[int], float]:
    """ (bound, log10 bound) from log10 of term_k, term_sum and epsilon """
    if log10_term_sum >= log10_term_k:
        return 1, 0.0

    log10_raw = -dim * log10_epsilon
    if max(log10_term_k, abs(log10_raw)) <= LOG10_EXACT_LIMIT:
        # doubles suffice below the overflow limit
        term_k = 10.0 ** log10_term_k
        term_sum = 0.0 if log10_term_sum == -math.inf else 10.0 ** log10_term_sum
        raw = (term_k - term_sum) * 10.0 ** log10_raw
        if math.isfinite(raw):
            if raw <= 1.0:
                return 1, 0.0
            if raw < EXACT_INTEGER_LIMIT:
                bound = max(1, _ceil_count(raw))
                return bound, math.log10(bound)
            return None, math.log10(raw)

    ratio = 10.0 ** (log10_term_sum - log10_term_k)
    log10_diff = log10_term_k + math.log1p(-ratio) / LN10
    log10_bound = log10_diff + log10_raw
    if log10_bound <= 0.0:
        return 1, 0.0
    return None, log10_bound


def burden_bound_from_terms(
    khat: float,
    dim: int,
    metric: Union[Metric, str],
    term_sum: float,
    epsilon: float,
    epsilon_spec: Optional[EpsilonSpec] = None,
    gamma: Optional[float] = None,
) -> BurdenBound:
    """
    Evaluate the burden bound from its intermediates.

    Lets published intermediates (khat, p, sum |f - gamma|^p) be checked
    without the observations they came from.
    """
    metric = metric if isinstance(metric, Metric) else Metric(metric, int(dim))
    if not khat > 0:
        raise DegenerateError(
            "khat is 0: the ball radius epsilon/khat is infinite and the burden bound is vacuous"
        )
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise ConfigError(f"--epsilon must be a finite number > 0, got {epsilon!r}")
    if term_sum < 0:
        raise ConfigError(f"term_sum must be >= 0, got {term_sum!r}")

    log10_term_k = (metric.dim * math.log(khat) - metric.log_ball_volume_constant()) / LN10
    log10_term_sum = _log10(term_sum)
    bound, log10_bound = _burden_from_logs(
        log10_term_k, log10_term_sum, math.log10(epsilon), metric.dim
    )
    return BurdenBound(
        epsilon=float(epsilon),
        epsilon_spec=epsilon_spec or EpsilonSpec(float(epsilon), "abs"),
        metric=metric.kind,
        dim=metric.dim,
        khat=float(khat),
        gamma=gamma,
        term_k=_finite_or_none(log10_term_k),
        term_sum=_finite_or_none(log10_term_sum),
        log10_term_k=log10_term_k,
        log10_term_sum=log10_term_sum,
        bound=bound,
        log10_bound=log10_bound,
    )


def resolve_epsilon(model: EnvelopeModel, epsilon: Union[float, EpsilonSpec]) -> Tuple[float, EpsilonSpec]:
    """ Absolute epsilon for a spec given in abs, khat or gammahat units """
    if not isinstance(epsilon, EpsilonSpec):
        epsilon = EpsilonSpec(float(epsilon), "abs")
    if epsilon.unit == "abs":
        absolute = epsilon.value
    elif epsilon.unit == "khat":
        if model.khat <= 0:
            raise DegenerateError(f"--epsilon {epsilon}: khat is 0")
        absolute = epsilon.value * model.khat
    elif epsilon.unit == "gammahat":
        if model.gamma_hat == 0:
            raise DegenerateError(f"--epsilon {epsilon}: gamma-hat (mean of f) is 0")
        absolute = epsilon.value * abs(model.gamma_hat)
    else:
        raise ConfigError(f"--epsilon {epsilon}: unknown unit {epsilon.unit!r}")
    return float(absolute), epsilon


def burden_lower_bound(model: EnvelopeModel, epsilon: Union[float, EpsilonSpec]) -> BurdenBound:
    """
    Lower bound on the minimum potential computational burden.

    Any design that is epsilon-adequate for every admissible function needs at
    least this many observations, computed with gamma = the model's centring
    constant. Works in log10 so that p = 21 style magnitudes do not overflow.
    """
    log = logging.getLogger(inspect.stack()[0][3])

    if model.khat <= 0:
        raise DegenerateError(
            "khat is 0: the ball radius epsilon/khat is infinite and the burden bound is vacuous"
        )
    absolute, spec = resolve_epsilon(model, epsilon)
    metric = model.metric
    deviations = np.abs(model.dataset.values - model.gamma_center)
    with np.errstate(divide="ignore"):
        log_sum = float(logsumexp(metric.dim * np.log(deviations)))
    log10_term_sum = log_sum / LN10
    log10_term_k = (metric.dim * math.log(model.khat) - metric.log_ball_volume_constant()) / LN10
    bound, log10_bound = _burden_from_logs(
        log10_term_k, log10_term_sum, math.log10(absolute), metric.dim
    )
    log.debug(
        "burden %s: log10 term_k %.4f, log10 term_sum %.4f, log10 bound %.4f",
        spec,
        log10_term_k,
        log10_term_sum,
        log10_bound,
    )
    return BurdenBound(
        epsilon=absolute,
        epsilon_spec=spec,
        metric=metric.kind,
        dim=metric.dim,
        khat=model.khat,
        gamma=model.gamma_center,
        term_k=_finite_or_none(log10_term_k),
        term_sum=_finite_or_none(log10_term_sum),
        log10_term_k=log10_term_k,
        log10_term_sum=log10_term_sum,
        bound=bound,
        log10_bound=log10_bound,
    )


def burden_sweep(
    model: EnvelopeModel, epsilons: Iterable[Union[float, EpsilonSpec]]
) -> List[BurdenBound]:
    """ burden_lower_bound over a list of accuracy targets """
    return [burden_lower_bound(model, epsilon) for epsilon in epsilons]


@dataclass(frozen=True)
class CoverBound:
    """ ceil(kplus / 2 epsilon)^p; `count` is None when it exceeds a native integer """

    kplus: float
    epsilon: float
    dim: int
    per_axis: int
    count: Optional[int]
    log10_count: float


def covering_upper_bound(k_plus: float, epsilon: float, dim: int) -> CoverBound:
    """
    Sup-metric balls of radius epsilon/kplus needed to cover [0,1]^p.

    Observing f at their centres is epsilon-adequate for every function with
    Lipschitz constant at most kplus.
    """
    if not k_plus > 0 or not math.isfinite(k_plus):
        raise ConfigError(f"--kplus must be a finite number > 0, got {k_plus!r}")
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise ConfigError(f"--epsilon must be a finite number > 0, got {epsilon!r}")
    if int(dim) < 1:
        raise ConfigError(f"--dim must be >= 1, got {dim!r}")
    dim = int(dim)
    per_axis = max(1, _ceil_count(k_plus / (2.0 * epsilon)))
    exact = per_axis ** dim
    count = exact if exact < NATIVE_INTEGER_LIMIT else None
    return CoverBound(
        kplus=float(k_plus),
        epsilon=float(epsilon),
        dim=dim,
        per_axis=per_axis,
        count=count,
        log10_count=dim * math.log10(per_axis),
    )


class CornerTables:
    """
    Sup distances from cube corners to the design points.

    Coordinates are split into groups of at most `bits` coordinates. For each
    group a table holds, for every bit pattern of the group, the largest
    |corner_k - x_k| over the group's coordinates, so the distance from any
    corner to every design point is the elementwise max of one row per group.
    Corner bit k is coordinate k; in integer codes coordinate k is bit k.
    """

    def __init__(self, points: np.ndarray, bits: int = CORNER_TABLE_BITS):
        points = np.asarray(points, dtype=float)
        self.n, self.dim = points.shape
        self.groups: List[Tuple[int, int, np.ndarray]] = []
        for start in range(0, self.dim, bits):
            stop = min(start + bits, self.dim)
            table = np.zeros((1, self.n))
            for k in range(start, stop):
                x = points[:, k]
                table = np.concatenate([np.maximum(table, x), np.maximum(table, 1.0 - x)])
            self.groups.append((start, stop, table))

    def from_codes(self, codes: np.ndarray) -> np.ndarray:
        """ (len(codes), n) distances for integer corner codes """
        codes = np.asarray(codes, dtype=np.int64)
        out = None
        for start, stop, table in self.groups:
            rows = table[(codes >> start) & ((1 << (stop - start)) - 1)]
            out = rows if out is None else np.maximum(out, rows, out=out)
        return out

    def from_bits(self, bits: np.ndarray) -> np.ndarray:
        """ (len(bits), n) distances for boolean corner rows """
        bits = np.asarray(bits, dtype=bool)
        out = None
        for start, stop, table in self.groups:
            weights = np.int64(1) << np.arange(stop - start, dtype=np.int64)
            rows = table[bits[:, start:stop].astype(np.int64) @ weights]
            out = rows if out is None else np.maximum(out, rows, out=out)
        return out


def _code_to_bits(code: int, dim: int) -> Tuple[int, ...]:
    return tuple((int(code) >> k) & 1 for k in range(dim))


def _corner_envelopes(values: np.ndarray, dist: np.ndarray, kappa: float) -> Tuple[np.ndarray, np.ndarray]:
    dist *= kappa
    return np.min(values + dist, axis=1), np.max(values - dist, axis=1)


def _objective(name: str, e_plus: np.ndarray, e_minus: np.ndarray) -> np.ndarray:
    if name == "estar":
        return 0.5 * (e_plus - e_minus)
    if name == "eplus":
        return e_plus
    return -e_minus


@dataclass(frozen=True)
class CornerSearch:
    """
    Best corners found for each searched objective.

    `best` maps "estar", "eplus" and "eminus" to (value, corner bits); the
    eminus value is min e- (not its negation). Exhaustive results are maxima
    over every corner, heuristic results are lower bounds on those maxima.
    """

    mode: str
    order: Optional[str]
    seed: Optional[int]
    kappa: float
    corners_evaluated: int
    best: Dict[str, Tuple[float, Tuple[int, ...]]]

    @property
    def certified(self) -> bool:
        return self.mode == "exhaustive"


def resolve_corner_mode(
    dim: int,
    mode: str = "auto",
    budget: Optional[int] = None,
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
) -> Tuple[str, int]:
    """
    (mode, budget) to run.

    auto enumerates every corner when 2^p <= exhaustive_budget and otherwise
    searches heuristically with `budget` corner evaluations.
    """
    if mode not in CORNER_MODES:
        raise ConfigError(f"--mode: {mode!r} is not one of {', '.join(CORNER_MODES)}")
    if mode == "auto":
        if dim < 63 and (1 << dim) <= exhaustive_budget:
            return "exhaustive", exhaustive_budget
        return "heuristic", budget or DEFAULT_HEURISTIC_BUDGET
    if mode == "exhaustive":
        return mode, budget or exhaustive_budget
    return mode, budget or DEFAULT_HEURISTIC_BUDGET


def _require_sup(model: EnvelopeModel, what: str) -> None:
    if not model.metric.is_sup:
        raise UnsupportedMetric(f"{what} needs --metric linf (got {model.metric.kind})")


def _exhaustive(
    model: EnvelopeModel,
    tables: CornerTables,
    kappa: float,
    budget: int,
    order: str,
    threads: int,
) -> Dict[str, Tuple[float, Tuple[int, ...]]]:
    log = logging.getLogger(inspect.stack()[0][3])

    dim = tables.dim
    if dim >= 62 or (1 << dim) > budget:
        raise BudgetExceeded(
            f"exhaustive corner search needs 2^{dim} corners, more than --budget {budget}"
        )
    total = 1 << dim
    block = max(1, CORNER_BLOCK_ELEMENTS // tables.n)
    values = model.dataset.values
    log.debug("enumerating %s corners in %s order, %s per block", total, order, block)

    def best_code(scores: np.ndarray, codes: np.ndarray) -> Tuple[float, int]:
        top = scores.max()
        return float(top), int(codes[scores == top].min())

    def scan(start: int):
        index = np.arange(start, min(start + block, total), dtype=np.int64)
        codes = index ^ (index >> 1) if order == "gray" else index
        e_plus, e_minus = _corner_envelopes(values, tables.from_codes(codes), kappa)
        return [best_code(_objective(name, e_plus, e_minus), codes) for name in OBJECTIVES]

    merged = [(-math.inf, -1)] * len(OBJECTIVES)
    for results in parallel_map(scan, range(0, total, block), threads):
        for k, (score, code) in enumerate(results):
            best_score, best = merged[k]
            # ties go to the smallest code so the visiting order does not matter
            if score > best_score or (score == best_score and code < best):
                merged[k] = (score, code)

    out = {}
    for name, (score, code) in zip(OBJECTIVES, merged):
        out[name] = (-score if name == "eminus" else score, _code_to_bits(code, dim))
    return out


def _climb(
    values: np.ndarray,
    tables: CornerTables,
    objective: str,
    kappa: float,
    budget: int,
    rng: np.random.Generator,
) -> Tuple[float, Optional[np.ndarray], int]:
    """ Steepest-ascent single-bit-flip chains from random corners within `budget` evaluations """
    dim = tables.dim
    best_score, best_bits = -math.inf, None
    used = 0

    def score(bits: np.ndarray) -> np.ndarray:
        e_plus, e_minus = _corner_envelopes(values, tables.from_bits(bits), kappa)
        return _objective(objective, e_plus, e_minus)

    def keep(scores: np.ndarray, bits: np.ndarray) -> None:
        nonlocal best_score, best_bits
        i = int(np.argmax(scores))
        if scores[i] > best_score:
            best_score, best_bits = float(scores[i]), bits[i].copy()

    flip = np.eye(dim, dtype=bool)
    while used < budget:
        current = rng.random((min(HEURISTIC_BATCH, budget - used), dim)) < 0.5
        current_scores = score(current)
        used += current.shape[0]
        keep(current_scores, current)

        while current.shape[0]:
            chains = min(current.shape[0], (budget - used) // dim)
            if chains == 0:
                break
            current = current[:chains]
            current_scores = current_scores[:chains]
            neighbours = current[:, None, :] ^ flip[None, :, :]
            flat = neighbours.reshape(-1, dim)
            neighbour_scores = score(flat)
            used += flat.shape[0]
            keep(neighbour_scores, flat)

            neighbour_scores = neighbour_scores.reshape(chains, dim)
            step = np.argmax(neighbour_scores, axis=1)
            gain = neighbour_scores[np.arange(chains), step]
            up = gain > current_scores
            current = neighbours[np.arange(chains), step][up]
            current_scores = gain[up]

    return best_score, best_bits, used


def _heuristic(
    model: EnvelopeModel,
    tables: CornerTables,
    kappa: float,
    budget: int,
    seed: int,
    objectives: Sequence[str],
    threads: int,
) -> Tuple[Dict[str, Tuple[float, Tuple[int, ...]]], int]:
    log = logging.getLogger(inspect.stack()[0][3])

    dim = tables.dim
    values = model.dataset.values
    ends = np.zeros((2, dim), dtype=bool)
    ends[1] = True
    end_plus, end_minus = _corner_envelopes(values, tables.from_bits(ends), kappa)

    remaining = max(0, budget - 2)
    chunks = [
        (i, min(HEURISTIC_CHUNK_BUDGET, remaining - start))
        for i, start in enumerate(range(0, remaining, HEURISTIC_CHUNK_BUDGET))
    ]
    log.debug("heuristic corner search: %s chunks, seed %s", len(chunks), seed)

    out = {}
    evaluated = 0
    for name in objectives:
        end_scores = _objective(name, end_plus, end_minus)
        top = int(np.argmax(end_scores))
        best_score, best_bits = float(end_scores[top]), ends[top]
        evaluated += 2

        def run(chunk, name=name):
            index, chunk_budget = chunk
            rng = stream_generator(seed, RNG_STREAM_CORNERS, index, OBJECTIVES.index(name))
            return _climb(values, tables, name, kappa, chunk_budget, rng)

        for score, bits, used in parallel_map(run, chunks, threads):
            evaluated += used
            if score > best_score:
                best_score, best_bits = score, bits

        corner = tuple(int(b) for b in best_bits)
        out[name] = (-best_score if name == "eminus" else best_score, corner)
    return out, evaluated


def search_corners(
    model: EnvelopeModel,
    objectives: Sequence[str] = OBJECTIVES,
    mode: str = "auto",
    budget: Optional[int] = None,
    seed: int = 0,
    order: str = "gray",
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    threads: int = 1,
) -> CornerSearch:
    """
    Search the corners of the cube for large e*, large e+ and small e-.

    Exhaustive mode evaluates every corner once for all objectives. Heuristic
    mode evaluates corners 0 and 1 and then runs restarts split into fixed
    chunks, each with its own counter-based random stream, so the result
    depends on the seed and never on the thread count.
    """
    log = logging.getLogger(inspect.stack()[0][3])

    _require_sup(model, "corner search")
    for name in objectives:
        if name not in OBJECTIVES:
            raise ConfigError(f"unknown corner objective {name!r}")
    if order not in CORNER_ORDERS:
        raise ConfigError(f"corner order must be one of {', '.join(CORNER_ORDERS)}")

    tables = CornerTables(model.dataset.points)
    mode, budget = resolve_corner_mode(tables.dim, mode, budget, exhaustive_budget)
    if mode == "exhaustive":
        best = _exhaustive(model, tables, model.kappa, budget, order, threads)
        return CornerSearch(
            mode=mode,
            order=order,
            seed=None,
            kappa=model.kappa,
            corners_evaluated=1 << tables.dim,
            best={name: best[name] for name in objectives},
        )

    log.warning(
        "heuristic corner search over 2^%s corners: lower bound only, not certified max-over-corners",
        tables.dim,
    )
    best, evaluated = _heuristic(model, tables, model.kappa, budget, seed, objectives, threads)
    return CornerSearch(
        mode=mode,
        order=None,
        seed=int(seed),
        kappa=model.kappa,
        corners_evaluated=evaluated,
        best=best,
    )


def _dtilde_brackets(model: EnvelopeModel) -> Tuple[float, float]:
    """ (min_x f + kappa d~(x), max_x f - kappa d~(x)) with d~ the distance to the farthest corner """
    dtilde = model.metric.corner_distance_bound(model.dataset.points)
    values = model.dataset.values
    return (
        float(np.min(values + model.kappa * dtilde)),
        float(np.max(values - model.kappa * dtilde)),
    )


def corner_upper_bound(model: EnvelopeModel) -> float:
    """ Upper bound on sup e* from the farthest-corner distance of each observation """
    _require_sup(model, "corner_upper_bound")
    upper, lower = _dtilde_brackets(model)
    return 0.5 * (upper - lower)


@dataclass(frozen=True)
class CornerBoundReport:
    """ Bracket on sup e*: `lower` from searched corners, `upper` from corner_upper_bound """

    upper: float
    lower: float
    argmax_corner: Tuple[int, ...]
    mode: str
    corners_evaluated: int
    certified: bool
    seed: Optional[int]
    kappa: float


def corner_lower_bound(
    model: EnvelopeModel,
    mode: str = "auto",
    budget: Optional[int] = None,
    seed: int = 0,
    order: str = "gray",
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    threads: int = 1,
    search: Optional[CornerSearch] = None,
) -> CornerBoundReport:
    """ Largest e* over searched corners, bracketed by corner_upper_bound """
    _require_sup(model, "corner_lower_bound")
    if search is None or "estar" not in search.best:
        search = search_corners(
            model, ("estar",), mode, budget, seed, order, exhaustive_budget, threads
        )
    lower, corner = search.best["estar"]
    return CornerBoundReport(
        upper=corner_upper_bound(model),
        lower=lower,
        argmax_corner=corner,
        mode=search.mode,
        corners_evaluated=search.corners_evaluated,
        certified=search.certified,
        seed=search.seed,
        kappa=search.kappa,
    )


@dataclass(frozen=True)
class GlobalFBounds:
    """
    Global bounds on f for every admissible function.

    max_upper >= sup e+ >= f everywhere and min_lower <= inf e- <= f
    everywhere; the attained values come from corners and bracket sup e+ and
    inf e- from the other side.
    """

    max_upper: float
    min_lower: float
    max_attained: float
    min_attained: float
    max_corner: Tuple[int, ...]
    min_corner: Tuple[int, ...]
    max_certified: bool
    min_certified: bool

    def __iter__(self):
        yield self.max_upper
        yield self.min_lower


def _agree(a: float, b: float) -> bool:
    return abs(a - b) <= CERTIFIED_TOLERANCE * max(1.0, abs(a), abs(b))


def global_f_bounds(
    model: EnvelopeModel,
    mode: str = "auto",
    budget: Optional[int] = None,
    seed: int = 0,
    order: str = "gray",
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    threads: int = 1,
    search: Optional[CornerSearch] = None,
) -> GlobalFBounds:
    """ Global upper and lower bounds on f from the envelopes """
    _require_sup(model, "global_f_bounds")
    require_admissible(model)
    if search is None or "eplus" not in search.best or "eminus" not in search.best:
        search = search_corners(
            model, ("eplus", "eminus"), mode, budget, seed, order, exhaustive_budget, threads
        )
    upper, lower = _dtilde_brackets(model)
    max_attained, max_corner = search.best["eplus"]
    min_attained, min_corner = search.best["eminus"]
    return GlobalFBounds(
        max_upper=upper,
        min_lower=lower,
        max_attained=max_attained,
        min_attained=min_attained,
        max_corner=max_corner,
        min_corner=min_corner,
        max_certified=_agree(upper, max_attained),
        min_certified=_agree(lower, min_attained),
    )


def centroid_emulator_error(kappa: float) -> float:
    """ Maximum potential error (sup metric) of the constant emulator fitted to one centroid observation """
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0:
        raise ConfigError(f"--kappa must be a finite number >= 0, got {kappa!r}")
    return 0.5 * kappa


def fewer_than_corners(model: EnvelopeModel) -> bool:
    """ n < 2^p, when constant observations leave some corner unobserved """
    return model.dataset.dim >= 63 or model.dataset.n < (1 << model.dataset.dim)


@dataclass(frozen=True)
class Verdict:
    sup_estar_lower: float
    khat: float
    threshold: float
    triggered: bool
    implied_bound: str
    note: Optional[str] = None


def centroid_verdict(model: EnvelopeModel, sup_estar_lower: float) -> Verdict:
    """
    Compare the observations with a single centroid observation.

    Triggered when a certified lower bound on sup e* (at kappa = khat) reaches
    khat/2: then no emulator trained on these observations has smaller
    maximum potential error than the constant emulator at the centroid.
    """
    log = logging.getLogger(inspect.stack()[0][3])

    _require_sup(model, "centroid_verdict")
    khat = model.khat
    threshold = centroid_emulator_error(khat)
    notes = []
    if khat <= 0:
        triggered = False
        notes.append("khat is 0 (constant observations): the comparison is degenerate")
    else:
        triggered = bool(sup_estar_lower >= threshold)
    if not math.isclose(model.kappa, khat, rel_tol=CERTIFIED_TOLERANCE):
        log.warning("verdict evaluated with kappa %r, the statement holds for kappa = khat %r", model.kappa, khat)
        notes.append(f"sup e* was computed with kappa = {model.kappa!r}, not khat")
    if triggered:
        statement = (
            f"E_K(f^) >= K/2 for every emulator f^ trained on these {model.dataset.n} observations and "
            f"every K >= khat: none beats one observation at the centroid"
        )
    else:
        statement = f"no conclusion: sup e* lower bound {sup_estar_lower!r} < khat/2 = {threshold!r}"
    return Verdict(
        sup_estar_lower=float(sup_estar_lower),
        khat=khat,
        threshold=threshold,
        triggered=triggered,
        implied_bound=statement,
        note="; ".join(notes) or None,
    )


def scaled_error_bound(model: EnvelopeModel, k_hypothetical: float, sup_estar_lower: float) -> float:
    """
    (L / khat) K: a lower bound on every emulator's maximum potential error
    if f is K-Lipschitz, given a lower bound L on sup e* at kappa = khat.
    """
    if model.khat <= 0:
        raise DegenerateError("khat is 0: the scaled error bound is undefined")
    if k_hypothetical < model.khat * (1.0 - CERTIFIED_TOLERANCE):
        raise ConfigError(f"--khyp {k_hypothetical!r} is below khat {model.khat!r}")
    return sup_estar_lower / model.khat * float(k_hypothetical)


def empirical_error_bound(model: EnvelopeModel, sup_estar_lower: float) -> float:
    """
    Lower bound on the maximum potential error of every emulator.

    The minimax emulator is optimal, so any lower bound on sup e* at the
    model's kappa bounds every emulator's worst case from below.
    """
    require_admissible(model)
    return max(0.0, float(sup_estar_lower))


def constant_replacement(
    model: EnvelopeModel,
    value: Optional[float] = None,
    mode: str = "auto",
    budget: Optional[int] = None,
    seed: int = 0,
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    threads: int = 1,
) -> CornerBoundReport:
    """
    Corner bounds with the observations replaced by a constant.

    Design and kappa are kept, so the difference from the observed data
    shows how much the observed variation narrows the envelopes.
    """
    _require_sup(model, "constant_replacement")
    value = model.gamma_bar if value is None else float(value)
    constant = model.with_values(value, threads=threads)
    return corner_lower_bound(
        constant,
        mode=mode,
        budget=budget,
        seed=seed,
        exhaustive_budget=exhaustive_budget,
        threads=threads,
    )
