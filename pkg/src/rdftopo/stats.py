"""Degree-distribution statistics, power-law fitting, and plot-data export.

The power-law fit follows the Clauset-Shalizi-Newman recipe for discrete
data: for every candidate lower cutoff among the observed degree values,
the exponent is estimated by maximizing the discrete (Hurwitz-zeta)
likelihood, the Kolmogorov-Smirnov distance between the empirical tail CDF
and the fitted CDF is evaluated, and the cutoff with the smallest distance
wins. The closed-form estimate 1 + T / sum(ln(d_i / (d_min - 1/2))) seeds
the likelihood maximization; on its own it is too biased at small cutoffs
to recover d_min reliably.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .graph import Graph

_ALPHA_FLOOR = 1.0 + 1e-6
_ALPHA_CEIL = 64.0


@dataclass(frozen=True)
class DegreeHistogram:
    """Exact degree-frequency table: counts[i] vertices have degree ks[i]."""

    mode: str
    ks: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        if len(self.ks) != len(self.counts):
            raise ValueError("ks and counts must align")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(k), int(c)) for k, c in zip(self.ks, self.counts)]


def histogram_from_degrees(mode: str, degrees: np.ndarray) -> DegreeHistogram:
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size == 0:
        return DegreeHistogram(mode, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    ks, counts = np.unique(degrees, return_counts=True)
    return DegreeHistogram(mode, ks, counts)


def degree_distribution(graph: Graph, mode: str) -> DegreeHistogram:
    """Frequency table of in-, out-, or total degrees (zero degrees included)."""
    if mode == "in":
        degrees = graph.d_in
    elif mode == "out":
        degrees = graph.d_out
    elif mode == "total":
        degrees = graph.total_degrees()
    else:
        raise ValueError(f"unknown degree mode {mode!r}")
    return histogram_from_degrees(mode, degrees)


class Dispersion(NamedTuple):
    variance: float
    stddev: float
    cv: float | None
    mean: float


def dispersion(hist: DegreeHistogram) -> Dispersion:
    """Population variance, standard deviation, and coefficient of variation.

    cv is the standard deviation over the mean, times 100; it is undefined
    (None) when the mean is zero.
    """
    n = hist.total
    if n == 0:
        raise ValueError("dispersion of an empty histogram is undefined")
    ks = hist.ks.astype(np.float64)
    counts = hist.counts.astype(np.float64)
    mean = float((ks * counts).sum() / n)
    variance = float((counts * (ks - mean) ** 2).sum() / n)
    stddev = float(np.sqrt(variance))
    cv = 100.0 * stddev / mean if mean != 0.0 else None
    return Dispersion(variance, stddev, cv, mean)


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    d_min: int
    ks_distance: float
    tail_size: int

    @property
    def plausible_range(self) -> bool:
        """Whether the exponent sits in the 2 < alpha < 3 band typical of
        scale-free networks."""
        return 2.0 < self.alpha < 3.0


def _tail_alpha(tail: np.ndarray, d_min: int) -> float:
    """Discrete ML exponent for the tail, seeded by the closed-form estimate."""
    size = len(tail)
    log_sum = float(np.log(tail).sum())
    seed = 1.0 + size / float(np.log(tail / (d_min - 0.5)).sum())

    def negative_loglik(alpha: float) -> float:
        if alpha <= _ALPHA_FLOOR:
            return np.inf
        return size * float(np.log(zeta(alpha, d_min))) + alpha * log_sum

    upper = min(_ALPHA_CEIL, max(10.0, 3.0 * seed))
    result = minimize_scalar(
        negative_loglik,
        bounds=(_ALPHA_FLOOR, upper),
        method="bounded",
        options={"xatol": 1e-9},
    )
    return float(result.x)


def _tail_ks(tail: np.ndarray, d_min: int, alpha: float) -> float:
    support, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / len(tail)
    fitted = 1.0 - zeta(alpha, support + 1.0) / zeta(alpha, d_min)
    return float(np.abs(empirical - fitted).max())


def fit_powerlaw(degrees: np.ndarray, min_tail: int = 10) -> PowerLawFit | None:
    """Best (alpha, d_min) by KS distance over all candidate cutoffs.

    Zero degrees are dropped before fitting. Candidates are the distinct
    observed degrees whose tail keeps at least ``min_tail`` samples and at
    least two distinct values; with no usable candidate (too few samples,
    or a constant sequence) the fit is undefined and None is returned.
    """
    values = np.asarray(degrees, dtype=np.float64)
    values = np.sort(values[values > 0])
    if values.size < min_tail or np.unique(values).size < 2:
        return None
    best: PowerLawFit | None = None
    for candidate in np.unique(values):
        start = int(np.searchsorted(values, candidate))
        tail = values[start:]
        if len(tail) < min_tail or tail[0] == tail[-1]:
            continue
        d_min = int(candidate)
        alpha = _tail_alpha(tail, d_min)
        distance = _tail_ks(tail, d_min, alpha)
        if best is None or distance < best.ks_distance:
            best = PowerLawFit(alpha, d_min, distance, len(tail))
    return best


def export_plotdata(
    hist: DegreeHistogram,
    fit: PowerLawFit | None,
    path: Path | str,
) -> None:
    """Write a log-log-plottable table: degree, count, empirical tail probability.

    The header records the fitted exponent and cutoff (``nan`` when the fit
    is undefined); the tail probability of degree k is the fraction of
    vertices with degree >= k.
    """
    if hist.total == 0:
        raise ValueError("cannot export an empty histogram")
    alpha = repr(fit.alpha) if fit is not None else "nan"
    d_min = str(fit.d_min) if fit is not None else "nan"
    counts = hist.counts.astype(np.float64)
    # P(K >= k): reversed cumulative share, inclusive of k itself.
    tail_prob = counts[::-1].cumsum()[::-1] / hist.total
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        sink.write(f"# alpha={alpha} dmin={d_min} mode={hist.mode}\n")
        for k, count, prob in zip(hist.ks, hist.counts, tail_prob):
            sink.write(f"{int(k)}\t{int(count)}\t{float(prob)!r}\n")
