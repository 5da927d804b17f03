# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax.dataset
~~~~~~~~~~~~~~~~~~~

observation sets: design points in the unit hypercube and their outputs
"""

# standard library imports
import csv
import inspect
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

# third party imports
import numpy as np

# app imports
from .constants import (COORDINATE_TOLERANCE, RNG_STREAM_FIXTURES,
                        SYNTHETIC_KINDS)
from .errors import (DimensionMismatch, DomainError, DuplicateError,
                     EmptyError, ParseError, UnsupportedKind)
from .helpers import stream_generator
from .metric import Metric


@dataclass(frozen=True, eq=False)
class Dataset:
    """ Observations f|_X of a function on [0,1]^dim; immutable after construction """

    points: np.ndarray
    values: np.ndarray
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @classmethod
    def from_arrays(
        cls,
        points,
        values,
        labels: Optional[Sequence[str]] = None,
        rows: Optional[Sequence[int]] = None,
    ) -> "Dataset":
        """
        Validate, clamp and de-duplicate raw arrays.

        Coordinates within 1e-12 of the cube are clamped onto it; anything
        further out is a DomainError. Repeated points with equal values are
        merged (first occurrence kept), with unequal values a DuplicateError.
        `rows` maps array positions to file rows for error messages.
        """
        log = logging.getLogger(inspect.stack()[0][3])

        pts = np.array(points, dtype=float, ndmin=2)
        vals = np.array(values, dtype=float).reshape(-1)
        if pts.size == 0 or vals.size == 0:
            raise EmptyError("dataset has no observations")
        if pts.shape[0] != vals.shape[0]:
            raise DimensionMismatch(
                f"{pts.shape[0]} design points but {vals.shape[0]} values"
            )
        if pts.shape[1] < 1:
            raise DimensionMismatch("design points need at least one coordinate")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(vals)):
            raise ParseError("dataset contains non-finite numbers")

        def where(i: int) -> str:
            return f"row {rows[i]}" if rows is not None else f"point {i}"

        outside = (pts < -COORDINATE_TOLERANCE) | (pts > 1.0 + COORDINATE_TOLERANCE)
        if outside.any():
            i, k = (int(a) for a in np.argwhere(outside)[0])
            column = labels[k] if labels else f"coordinate {k}"
            raise DomainError(
                f"{where(i)}: {column} = {pts[i, k]!r} lies outside [0, 1]"
            )
        # + 0.0 folds -0.0 into 0.0 so byte keys compare equal
        pts = np.clip(pts, 0.0, 1.0) + 0.0

        seen = {}
        keep = []
        for i, (point, value) in enumerate(zip(pts, vals)):
            key = point.tobytes()
            if key in seen:
                first = seen[key]
                if vals[first] != value:
                    raise DuplicateError(
                        f"{where(i)} repeats the point of {where(first)} with a different value "
                        f"({value!r} != {vals[first]!r})"
                    )
                log.warning("merging duplicate design point at %s", where(i))
                continue
            seen[key] = i
            keep.append(i)

        pts = pts[keep].copy()
        vals = vals[keep].copy()
        pts.setflags(write=False)
        vals.setflags(write=False)
        return cls(pts, vals, tuple(labels) if labels else None)


def _parse_float(cell: str, row: int, column: str) -> float:
    if cell is None or cell.strip() == "":
        raise ParseError(f"row {row}: missing value in column {column!r}")
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"row {row}: column {column!r} is not numeric ({cell!r})"
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"row {row}: column {column!r} is not finite ({cell!r})")
    return value


def _read_table(path: str) -> Tuple[List[str], List[Tuple[int, List[str]]]]:
    with open(path, "r", encoding="utf-8", newline="") as file_obj:
        reader = csv.reader(file_obj)
        try:
            header = [name.strip() for name in next(reader)]
        except StopIteration:
            raise ParseError(f"{path}: missing header row") from None
        rows = []
        for row_number, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"row {row_number}: expected {len(header)} cells, found {len(row)}"
                )
            rows.append((row_number, row))
    return header, rows


def resolve_column(header: Sequence[str], value_column: Union[str, int, None]) -> int:
    """ Index of the value column: a name, an integer index, or the last column """
    if value_column is None or value_column == "":
        return len(header) - 1
    if isinstance(value_column, int) or str(value_column).lstrip("-").isdigit():
        index = int(value_column)
        if not -len(header) <= index < len(header):
            raise ParseError(
                f"--value-column {value_column} is out of range for {len(header)} columns"
            )
        return index % len(header)
    if value_column not in header:
        raise ParseError(
            f"--value-column {value_column!r} not found in header {', '.join(header)}"
        )
    return list(header).index(value_column)


def load_csv(path: str, value_column: Union[str, int, None] = None) -> Dataset:
    """ Read a header + rows CSV of coordinates and one value column """
    log = logging.getLogger(inspect.stack()[0][3])

    header, rows = _read_table(path)
    if len(header) < 2:
        raise ParseError(f"{path}: need at least one coordinate column and a value column")
    vcol = resolve_column(header, value_column)
    coordinate_columns = [k for k in range(len(header)) if k != vcol]
    labels = [header[k] for k in coordinate_columns]

    if not rows:
        raise EmptyError(f"{path}: no observations")

    points = []
    values = []
    row_numbers = []
    for row_number, row in rows:
        points.append(
            [_parse_float(row[k], row_number, header[k]) for k in coordinate_columns]
        )
        values.append(_parse_float(row[vcol], row_number, header[vcol]))
        row_numbers.append(row_number)

    dataset = Dataset.from_arrays(points, values, labels=labels, rows=row_numbers)
    log.debug("loaded %s observations in %s dimensions from %s", dataset.n, dataset.dim, path)
    return dataset


def save_csv(dataset: Dataset, path: str, value_name: str = "y") -> None:
    """ Write a dataset so that load_csv reads back the same floats """
    labels = dataset.labels or tuple(f"x{k + 1}" for k in range(dataset.dim))
    with open(path, "w", encoding="utf-8", newline="") as file_obj:
        writer = csv.writer(file_obj)
        writer.writerow(list(labels) + [value_name])
        for point, value in zip(dataset.points, dataset.values):
            writer.writerow([format(c, ".17g") for c in point] + [format(value, ".17g")])


def load_points(path: str, dim: Optional[int] = None) -> np.ndarray:
    """ Read query points (coordinate columns only) from a CSV file """
    header, rows = _read_table(path)
    if not rows:
        raise EmptyError(f"{path}: no query points")
    if dim is not None and len(header) != dim:
        raise DimensionMismatch(
            f"{path}: query file has {len(header)} columns, dataset has {dim} coordinates"
        )
    points = np.array(
        [
            [_parse_float(cell, row_number, header[k]) for k, cell in enumerate(row)]
            for row_number, row in rows
        ]
    )
    outside = (points < -COORDINATE_TOLERANCE) | (points > 1.0 + COORDINATE_TOLERANCE)
    if outside.any():
        i, k = (int(a) for a in np.argwhere(outside)[0])
        raise DomainError(
            f"row {rows[i][0]}: {header[k]} = {points[i, k]!r} lies outside [0, 1]"
        )
    return np.clip(points, 0.0, 1.0)


def _product_sine(x: np.ndarray) -> np.ndarray:
    return np.prod(np.sin(np.pi * x), axis=1)


def synthesize(
    kind: str,
    dim: int,
    n: int,
    seed: int = 0,
    metric: str = "linf",
    points=None,
) -> Tuple[Dataset, float]:
    """
    Build a test dataset from a function whose Lipschitz constant is known.

    Returns the dataset and a Lipschitz constant of the generating function
    under `metric`:

    - linear: f(x) = x_1, constant 1 in both metrics
    - constant: f(x) = 1, constant 0
    - product-sine: f(x) = prod sin(pi x_k); pi in l2 (exact), pi*sqrt(dim) in linf
    - random-lipschitz: minimum of 8 random cones b_j + L d(x, c_j), constant L

    Design points are uniform draws unless `points` is given.
    """
    if kind not in SYNTHETIC_KINDS:
        raise UnsupportedKind(
            f"unknown dataset kind {kind!r} (choose from {', '.join(SYNTHETIC_KINDS)})"
        )
    if int(dim) < 1 or int(n) < 1:
        raise EmptyError("synthesize needs dim >= 1 and n >= 1")
    rng = stream_generator(seed, RNG_STREAM_FIXTURES)
    if points is None:
        x = rng.random((int(n), int(dim)))
    else:
        x = np.array(points, dtype=float, ndmin=2)
        if x.shape[1] != dim:
            raise DimensionMismatch(f"points have {x.shape[1]} coordinates, expected {dim}")

    if kind == "linear":
        values = x[:, 0].copy()
        known = 1.0
    elif kind == "constant":
        values = np.ones(x.shape[0])
        known = 0.0
    elif kind == "product-sine":
        values = _product_sine(x)
        known = math.pi if metric == "l2" else math.pi * math.sqrt(dim)
    else:
        slope = float(rng.uniform(0.5, 5.0))
        centers = rng.random((8, int(dim)))
        offsets = rng.uniform(-1.0, 1.0, size=8)
        dist = Metric(metric, int(dim)).pairwise(x, centers)
        values = np.min(offsets[None, :] + slope * dist, axis=1)
        known = slope

    return Dataset.from_arrays(x, values), known
