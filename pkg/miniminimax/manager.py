# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.manager
~~~~~~~~~~~~~~~~~~~

handle a miniminimax run: dispatch the subcommand and map errors to exit codes
"""

# standard library imports
import argparse
import inspect
import logging
import os
import platform
import sys
from signal import SIGINT, signal
from typing import Dict, List, Tuple

# third party imports
import numpy as np
import scipy

# app imports
from . import helpers, report
from .__version__ import __version__
from .bounds import (OBJECTIVES, CornerSearch, burden_lower_bound,
                     centroid_emulator_error, centroid_verdict,
                     constant_replacement, corner_lower_bound,
                     corner_upper_bound, covering_upper_bound,
                     empirical_error_bound, fewer_than_corners,
                     global_f_bounds, resolve_corner_mode, scaled_error_bound,
                     search_corners)
from .constants import EXIT_INTERRUPT, EXIT_OK, EXIT_VALIDATION
from .dataset import Dataset, load_csv, load_points
from .envelope import (EnvelopeModel, describe, envelopes, fbar,
                       minimax_emulator)
from .errors import ConfigError, DegenerateError, EmptyClass, MinimaxError
from .helpers import RunConfig
from .montecarlo import build_report, sample_error, summarize

MEAN_BOUND_NOTE = "mean bounds invert a z-test: coverage relies on the normal approximation"


def signal_handler(signum, frame):
    """ Handle noisy keyboardinterrupt """
    if signum == SIGINT:
        print(
            f"miniminimax PID {os.getpid()} detected SIGINT or Control-C... exiting...",
            file=sys.stderr,
        )
        sys.exit(EXIT_INTERRUPT)


def start(args: argparse.Namespace) -> int:
    """ Begin work """
    log = logging.getLogger(inspect.stack()[0][3])

    helpers.setup_logger(args)

    log.debug("%s version %s", __name__.split(".")[0], __version__)
    log.debug("python platform version is %s", platform.python_version())
    log.debug("numpy version is %s, scipy version is %s", np.__version__, scipy.__version__)
    log.debug("args: %s", args)

    signal(SIGINT, signal_handler)

    try:
        config = helpers.setup_config(args)
        helpers.validate(config)
    except MinimaxError as error:
        log.error("%s", error)
        return error.exit_code
    log.debug("config %s", config)
    return run(config)


def run(config: RunConfig) -> int:
    """ Run one validated configuration and write its report """
    log = logging.getLogger(inspect.stack()[0][3])

    try:
        result = HANDLERS[config.subcommand](config)
        report.write(result, config.output, config.out_path)
    except MinimaxError as error:
        log.error("%s", error)
        return error.exit_code
    except OSError as error:
        log.error("%s", error)
        return EXIT_VALIDATION
    return EXIT_OK


def _load(config: RunConfig) -> Dataset:
    return load_csv(config.data_path, config.value_column)


def _model(dataset: Dataset, metric: str, config: RunConfig) -> EnvelopeModel:
    return EnvelopeModel.build(
        dataset, metric, kappa=config.kappa, center=config.center, threads=config.threads
    )


def _bits(corner: Tuple[int, ...]) -> str:
    return "".join(str(b) for b in corner)


def _search(model: EnvelopeModel, config: RunConfig, objectives=OBJECTIVES) -> CornerSearch:
    mode, budget = resolve_corner_mode(
        model.dataset.dim, config.mode, config.budget, config.exhaustive_budget
    )
    if mode == "heuristic" and config.strict and not config.seed_given:
        raise ConfigError("--strict: a heuristic corner search requires an explicit --seed")
    return search_corners(
        model,
        objectives,
        mode=mode,
        budget=budget,
        seed=config.seed,
        exhaustive_budget=config.exhaustive_budget,
        threads=config.threads,
    )


def _burden_entry(bound) -> dict:
    return {
        "epsilon": bound.epsilon,
        "epsilon_spec": str(bound.epsilon_spec),
        "bound": bound.bound,
        "log10_bound": bound.log10_bound,
        "term_k": bound.term_k,
        "term_sum": bound.term_sum,
        "log10_term_k": bound.log10_term_k,
        "log10_term_sum": bound.log10_term_sum,
    }


def _distribution_row(summary) -> dict:
    row = {
        "metric": summary.metric,
        "unit": summary.unit,
        "n_samples": summary.n_samples,
        "seed": summary.seed,
        "confidence": summary.confidence,
    }
    for q, lcb in summary.quantile_lcbs:
        row[f"q{q:g}_lcb"] = lcb
    row["mean_lcb"] = summary.mean_lcb
    row["sample_mean"] = summary.sample_mean
    row["max_observed"] = summary.max_observed
    return row


def _global_entry(bounds) -> dict:
    return {
        "max_upper": bounds.max_upper,
        "min_lower": bounds.min_lower,
        "max_attained": bounds.max_attained,
        "min_attained": bounds.min_attained,
        "max_corner": _bits(bounds.max_corner),
        "min_corner": _bits(bounds.min_corner),
        "max_certified": bounds.max_certified,
        "min_certified": bounds.min_certified,
    }


def _corner_entry(bounds) -> dict:
    return {
        "sup_estar_lower": bounds.lower,
        "sup_estar_upper": bounds.upper,
        "argmax_corner": _bits(bounds.argmax_corner),
        "mode": bounds.mode,
        "certified": bounds.certified,
        "corners_evaluated": bounds.corners_evaluated,
        "kappa": bounds.kappa,
    }


def _verdict_entry(verdict) -> dict:
    return {
        "triggered": verdict.triggered,
        "threshold": verdict.threshold,
        "sup_estar_lower": verdict.sup_estar_lower,
        "implied_bound": verdict.implied_bound,
        "note": verdict.note,
    }


def _per_metric(sections: Dict[str, dict]) -> dict:
    if len(sections) == 1:
        return next(iter(sections.values()))
    return {"by_metric": sections}


def run_lipschitz(config: RunConfig) -> report.Report:
    dataset = _load(config)
    sections = {}
    for metric in config.metrics:
        sections[metric] = describe(_model(dataset, metric, config))
    return report.Report("lipschitz", _per_metric(sections), rows=list(sections.values()))


def run_envelope(config: RunConfig) -> report.Report:
    dataset = _load(config)
    model = _model(dataset, config.metric, config)
    queries = load_points(config.query_path, dataset.dim)
    notes = []

    e_plus, e_minus = envelopes(model, queries)
    if model.admissible:
        f_star = minimax_emulator(model, queries)
    else:
        f_star = np.full(queries.shape[0], np.nan)
        notes.append("kappa is below khat: f* is undefined and e* < 0 marks the conflict")
    if model.khat > 0:
        f_bar = fbar(model, queries)
    else:
        f_bar = np.full(queries.shape[0], np.nan)
        notes.append("khat is 0: fbar is undefined")

    labels = dataset.labels or tuple(f"x{k + 1}" for k in range(dataset.dim))
    rows = []
    for i, point in enumerate(queries):
        row = {label: float(c) for label, c in zip(labels, point)}
        row.update(
            e_plus=float(e_plus[i]),
            e_minus=float(e_minus[i]),
            e_star=float(0.5 * (e_plus[i] - e_minus[i])),
            f_star=float(f_star[i]),
            f_bar=float(f_bar[i]),
        )
        rows.append(row)
    payload = {
        "metric": model.metric.kind,
        "kappa": model.kappa,
        "khat": model.khat,
        "gamma_bar": model.gamma_bar,
        "points": rows,
    }
    return report.Report("envelope", payload, rows=rows, notes=notes)


def run_burden(config: RunConfig) -> report.Report:
    model = _model(_load(config), config.metric, config)
    entries = [_burden_entry(burden_lower_bound(model, epsilon)) for epsilon in config.epsilons]
    payload = {
        "metric": model.metric.kind,
        "dim": model.dataset.dim,
        "n": model.dataset.n,
        "khat": model.khat,
        "gamma_bar": model.gamma_bar,
        "gamma_hat": model.gamma_hat,
        "center": model.center,
        "ball_volume_constant": model.metric.ball_volume_constant(),
        "burden": entries,
    }
    rows = [dict(metric=model.metric.kind, **entry) for entry in entries]
    return report.Report("burden", payload, rows=rows)


def run_cover(config: RunConfig) -> report.Report:
    cover = covering_upper_bound(config.kplus, config.cover_epsilon, config.cover_dim)
    payload = {
        "kplus": cover.kplus,
        "epsilon": cover.epsilon,
        "dim": cover.dim,
        "per_axis": cover.per_axis,
        "count": cover.count,
        "log10_count": cover.log10_count,
    }
    return report.Report("cover", payload)


def run_corners(config: RunConfig) -> report.Report:
    model = _model(_load(config), "linf", config)
    search = _search(model, config)
    notes = []
    payload = _corner_entry(corner_lower_bound(model, search=search))
    payload["seed"] = search.seed
    if model.admissible:
        payload["global_f"] = _global_entry(global_f_bounds(model, search=search))
    else:
        payload["global_f"] = None
        notes.append("kappa is below khat: no global bounds on f")
    payload["fewer_than_corners"] = fewer_than_corners(model)
    if not search.certified:
        notes.append("heuristic search: lower bound only, not certified max-over-corners")
    if config.constant:
        constant = constant_replacement(
            model,
            mode=search.mode,
            budget=config.budget,
            seed=config.seed,
            exhaustive_budget=config.exhaustive_budget,
            threads=config.threads,
        )
        payload["constant"] = dict(value=model.gamma_bar, **_corner_entry(constant))
    return report.Report("corners", payload, notes=notes)


def run_mc(config: RunConfig) -> report.Report:
    dataset = _load(config)
    rows = []
    for metric in config.metrics:
        model = _model(dataset, metric, config)
        rows.extend(_distribution_row(summary) for summary in build_report(model, config))
    payload = {
        "samples": config.samples,
        "seed": config.seed,
        "confidence": config.confidence,
        "quantiles": list(config.quantiles),
        "error_distribution": rows,
    }
    return report.Report("mc", payload, rows=rows, notes=[MEAN_BOUND_NOTE])


def _verdict_model(model: EnvelopeModel, notes: List[str]) -> EnvelopeModel:
    if model.kappa != model.khat:
        notes.append(f"verdict uses kappa = khat = {model.khat!r} instead of kappa = {model.kappa!r}")
        return model.with_kappa(model.khat)
    return model


def _scaled_entries(model: EnvelopeModel, khyp, lower: float) -> list:
    return [
        {"k": k, "bound": scaled_error_bound(model, k, lower)} for k in khyp
    ]


def run_verdict(config: RunConfig) -> report.Report:
    notes: List[str] = []
    model = _verdict_model(_model(_load(config), "linf", config), notes)
    search = _search(model, config, ("estar",))
    lower = search.best["estar"][0]
    verdict = centroid_verdict(model, lower)
    payload = {
        "khat": model.khat,
        "sup_estar_lower": lower,
        "sup_estar_upper": corner_upper_bound(model),
        "verdict": _verdict_entry(verdict),
        "centroid_emulator_error": centroid_emulator_error(model.khat),
        "fewer_than_corners": fewer_than_corners(model),
        "mode": search.mode,
        "seed": search.seed,
        "corners_evaluated": search.corners_evaluated,
    }
    if config.khyp:
        if model.khat > 0:
            payload["scaled_error_bounds"] = _scaled_entries(model, config.khyp, lower)
        else:
            notes.append("khat is 0: no scaled error bounds")
    return report.Report("verdict", payload, notes=notes)


def _report_section(dataset: Dataset, metric: str, config: RunConfig, notes: List[str]) -> Tuple[dict, List[dict]]:
    """ Every analysis of `report` for one metric; skipped analyses leave a note """
    log = logging.getLogger(inspect.stack()[0][3])

    model = _model(dataset, metric, config)
    section = describe(model)

    burden = []
    for epsilon in config.epsilons:
        try:
            burden.append(_burden_entry(burden_lower_bound(model, epsilon)))
        except DegenerateError as error:
            notes.append(f"{metric} burden {epsilon}: {error}")
    section["burden"] = burden

    errors = sample_error(model, config.samples, config.seed, config.threads)
    rows = []
    for unit in config.units:
        try:
            rows.append(
                _distribution_row(
                    summarize(model, errors, config.seed, config.confidence, config.quantiles, unit)
                )
            )
        except DegenerateError as error:
            notes.append(f"{metric} {unit}: {error}")
    section["error_distribution"] = rows

    section["sup_estar_lower"] = float(errors[-1])
    section["sup_estar_upper"] = None
    section["verdict"] = None
    section["global_f"] = None
    section["mode"] = "montecarlo"
    section["seed"] = config.seed

    if model.metric.is_sup:
        search = _search(model, config)
        corners = corner_lower_bound(model, search=search)
        section.update(_corner_entry(corners))
        section["sup_estar_lower"] = max(corners.lower, float(errors[-1]))
        section["seed"] = search.seed
        if not search.certified:
            notes.append(f"{metric}: heuristic search, lower bound only, not certified max-over-corners")

        verdict_model = model
        verdict_search = search
        if model.kappa != model.khat:
            verdict_model = _verdict_model(model, notes)
            verdict_search = _search(verdict_model, config, ("estar",))
        verdict_lower = verdict_search.best["estar"][0]
        section["verdict"] = _verdict_entry(centroid_verdict(verdict_model, verdict_lower))
        section["centroid_emulator_error"] = centroid_emulator_error(model.khat)
        section["fewer_than_corners"] = fewer_than_corners(model)

        try:
            section["global_f"] = _global_entry(global_f_bounds(model, search=search))
        except EmptyClass as error:
            notes.append(f"{metric} global bounds: {error}")

        if config.khyp and model.khat > 0:
            section["scaled_error_bounds"] = _scaled_entries(verdict_model, config.khyp, verdict_lower)
        if config.constant:
            constant = constant_replacement(
                model,
                mode=search.mode,
                budget=config.budget,
                seed=config.seed,
                exhaustive_budget=config.exhaustive_budget,
                threads=config.threads,
            )
            section["constant"] = dict(value=model.gamma_bar, **_corner_entry(constant))
    else:
        notes.append(f"{metric}: corner bounds, verdict and global bounds on f need linf; sup e* lower bound is the sampled maximum")

    try:
        section["empirical_error_bound"] = empirical_error_bound(model, section["sup_estar_lower"])
    except EmptyClass as error:
        section["empirical_error_bound"] = None
        notes.append(f"{metric}: {error}")

    log.debug("%s report section done", metric)
    return section, rows


def run_report(config: RunConfig) -> report.Report:
    dataset = _load(config)
    notes: List[str] = []
    sections = {}
    rows: List[dict] = []
    for metric in config.metrics:
        sections[metric], metric_rows = _report_section(dataset, metric, config, notes)
        rows.extend(metric_rows)
    notes.append(MEAN_BOUND_NOTE)
    return report.Report("report", _per_metric(sections), rows=rows, notes=notes)


HANDLERS = {
    "lipschitz": run_lipschitz,
    "envelope": run_envelope,
    "burden": run_burden,
    "cover": run_cover,
    "corners": run_corners,
    "mc": run_mc,
    "verdict": run_verdict,
    "report": run_report,
}
