"""Cross-dataset Pearson correlation of measure columns.

Rows are datasets, columns are numeric measures pulled from reports.
Undefined measures are masked; each pair of columns is correlated over the
rows where both are defined, and pairs with fewer than three usable rows
(or zero variance) stay masked in the output matrix.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .measures import MeasureReport

# Minimal measure set that characterizes a dataset without the strongly
# mutually-correlated bulk: size, volume, degree extremes and average,
# density, reciprocity, diameter estimate, and power-law exponent.
DEFAULT_MEASURES: tuple[str, ...] = (
    "n", "m", "d_max", "z", "p", "y", "pseudo_diameter", "alpha",
)

MIN_ROWS = 3


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float | None:
    """Standard two-pass Pearson coefficient; None when undefined.

    Undefined means fewer than three points or zero variance in either
    vector.
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape:
        raise ValueError("vectors must have equal length")
    if xv.size < MIN_ROWS:
        return None
    dx = xv - xv.mean()
    dy = yv - yv.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        return None
    return float(np.clip((dx * dy).sum() / (sx * sy), -1.0, 1.0))


@dataclass(frozen=True)
class CorrelationMatrix:
    measures: tuple[str, ...]
    values: np.ndarray  # masked cells are NaN

    def cell(self, row: str, col: str) -> float | None:
        i = self.measures.index(row)
        j = self.measures.index(col)
        value = float(self.values[i, j])
        return None if math.isnan(value) else value


def _column(report: MeasureReport | Mapping[str, object], key: str) -> float:
    if isinstance(report, Mapping):
        value = report.get(key)
    else:
        value = getattr(report, key)
    if value is None or isinstance(value, str):
        return math.nan
    return float(value)


def correlation_matrix(
    reports: Sequence[MeasureReport | Mapping[str, object]],
    measures: Sequence[str] = DEFAULT_MEASURES,
) -> CorrelationMatrix:
    """Symmetric Pearson matrix with unit diagonal over report columns."""
    names = tuple(measures)
    if len(set(names)) != len(names):
        raise ValueError("measure names must be unique")
    if len(reports) < MIN_ROWS:
        raise ValueError(f"need at least {MIN_ROWS} reports, got {len(reports)}")
    table = np.array(
        [[_column(report, key) for key in names] for report in reports],
        dtype=np.float64,
    )
    size = len(names)
    values = np.full((size, size), np.nan)
    np.fill_diagonal(values, 1.0)
    for i in range(size):
        for j in range(i + 1, size):
            both = ~np.isnan(table[:, i]) & ~np.isnan(table[:, j])
            r = pearson(table[both, i], table[both, j]) if both.sum() >= MIN_ROWS else None
            if r is not None:
                values[i, j] = values[j, i] = r
    return CorrelationMatrix(names, values)


def write_matrix_csv(matrix: CorrelationMatrix, path: Path | str) -> None:
    """CSV with measure names on both axes; masked cells left empty."""
    with open(path, "w", encoding="utf-8", newline="") as sink:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(("measure", *matrix.measures))
        for i, name in enumerate(matrix.measures):
            row: list[str] = [name]
            for j in range(len(matrix.measures)):
                value = matrix.values[i, j]
                row.append("" if math.isnan(value) else repr(float(value)))
            writer.writerow(row)


def write_heatmap_tsv(matrix: CorrelationMatrix, path: Path | str) -> None:
    """Long-form `row<TAB>col<TAB>r` table for external heatmap renderers."""
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        sink.write("row\tcol\tr\n")
        for i, row_name in enumerate(matrix.measures):
            for j, col_name in enumerate(matrix.measures):
                value = matrix.values[i, j]
                rendered = "" if math.isnan(value) else repr(float(value))
                sink.write(f"{row_name}\t{col_name}\t{rendered}\n")
