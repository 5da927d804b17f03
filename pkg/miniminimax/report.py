# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.report
~~~~~~~~~~~~~~~~~~

render results as text, JSON or CSV and write them out
"""

# standard library imports
import csv
import dataclasses
import inspect
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

# third party imports
import numpy as np

# app imports
from .__version__ import __title__, __version__
from .constants import OUTPUTS, TEXT_LOG10_THRESHOLD
from .errors import ConfigError


@dataclass
class Report:
    """
    Result of one subcommand.

    `payload` is the JSON document; `rows` (a list of flat dicts) is the CSV
    table, falling back to key/value pairs of the flattened payload.
    """

    subcommand: str
    payload: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def document(self) -> Dict[str, Any]:
        doc = dict(self.payload)
        doc["notes"] = list(self.notes)
        return doc


def to_plain(value: Any) -> Any:
    """
    JSON-ready copy: builtin types only, non-finite floats as null.

    -inf stands for "no nontrivial bound" and overflowed values are carried by
    their log10 fields, so null loses nothing.
    """
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if value is None or isinstance(value, str):
        return value
    return str(value)


def format_number(value: Any) -> str:
    """ Human-readable number; magnitudes above 1e6 as a power of ten """
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        if abs(value) > TEXT_LOG10_THRESHOLD:
            return f"10^{math.log10(abs(value)):.2f}" if value > 0 else f"-10^{math.log10(-value):.2f}"
        return str(value)
    if isinstance(value, float):
        if value == -math.inf:
            return "no nontrivial bound"
        if not math.isfinite(value):
            return str(value)
        if abs(value) > TEXT_LOG10_THRESHOLD:
            sign = "-" if value < 0 else ""
            return f"{sign}10^{math.log10(abs(value)):.2f}"
        return f"{value:.6g}"
    return str(value)


def flatten(value: Any, prefix: str = "") -> Iterator[Tuple[str, Any]]:
    """ (dotted key, leaf) pairs of a nested payload """
    if isinstance(value, dict):
        for key, item in value.items():
            yield from flatten(item, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) for v in value):
        for index, item in enumerate(value):
            yield from flatten(item, f"{prefix}[{index}]")
    elif isinstance(value, (list, tuple)):
        yield prefix, ", ".join(format_number(v) for v in value)
    else:
        yield prefix, value


def render_json(report: Report) -> str:
    return json.dumps(to_plain(report.document()), indent=2, allow_nan=False) + "\n"


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    if report.rows:
        fieldnames: List[str] = []
        for row in report.rows:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    else:
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in flatten(to_plain(report.payload)):
            writer.writerow([key, _csv_cell(value)])
    return buffer.getvalue()


def _csv_cell(value: Any) -> str:
    value = to_plain(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    return str(value)


def render_text(report: Report) -> str:
    """ Generate a report for output """
    text_report = "-" * 45
    text_report += f"\n - {__title__} {__version__}: {report.subcommand}\n"
    text_report += "-" * 45
    text_report += "\n"
    for key, value in flatten(report.payload):
        text_report += "{0:<36} {1}".format(key, format_number(value)) + "\n"
    for note in report.notes:
        text_report += f"\n* {note}"
    if report.notes:
        text_report += "\n"
    return text_report


def render(report: Report, output: str) -> str:
    if output not in OUTPUTS:
        raise ConfigError(f"--output: {output!r} is not one of {', '.join(OUTPUTS)}")
    if output == "json":
        return render_json(report)
    if output == "csv":
        return render_csv(report)
    return render_text(report)


def write(report: Report, output: str, out_path: Optional[str] = None) -> None:
    """ Write the rendered report to out_path, or to stdout """
    log = logging.getLogger(inspect.stack()[0][3])

    text = render(report, output)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as writer:
            writer.write(text)
        log.info("%s report written to %s", output, out_path)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
