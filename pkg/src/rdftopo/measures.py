"""Topological measures over the directed multigraph.

Groups: basic counts (vertices, edges, unique/parallel split), degree-based
measures (maxima, edges per vertex, h-index), centrality (max degree
centrality, PageRank, Freeman-style degree centralization), and edge-based
measures (fill, reciprocity, pseudo-diameter). ``compute_report`` bundles
everything, together with the degree-distribution statistics, into one
record; measures that are undefined on a degenerate input are reported as
None rather than 0, because 0 is a legitimate value for most of them.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from . import stats
from .graph import Graph
from .ingest import format_hash


class UndefinedMeasureError(ValueError):
    """The measure has no value on this input (for example an empty graph)."""


class BasicCounts(NamedTuple):
    n: int
    m: int
    m_u: int
    m_p: int


class DegreeStats(NamedTuple):
    d_max: int
    d_max_in: int
    d_max_out: int
    z: float
    z_in: float
    z_out: float
    z_total: float


class PageRankResult(NamedTuple):
    scores: np.ndarray
    converged: bool
    iterations: int


class Fill(NamedTuple):
    p: float
    p_u: float


class Reciprocity(NamedTuple):
    y: float
    m_bi: int


def _pair_keys(graph: Graph) -> np.ndarray:
    # Encode each (source, target) pair as source*n + target.
    if graph.n >= 1 << 32:
        raise ValueError("pair encoding requires fewer than 2^32 vertices")
    n = np.uint64(graph.n)
    return graph.edge_src.astype(np.uint64) * n + graph.edge_dst.astype(np.uint64)


def basic_counts(graph: Graph) -> BasicCounts:
    """Vertex/edge counts with the unique-edge versus parallel-edge split.

    m_u counts distinct (source, target) pairs regardless of the predicate
    attribute; m_p = m - m_u is the surplus due to parallel edges.
    """
    m = graph.m
    m_u = int(len(np.unique(_pair_keys(graph)))) if m else 0
    return BasicCounts(graph.n, m, m_u, m - m_u)


def degree_stats(graph: Graph) -> DegreeStats:
    """Degree maxima and edges-per-vertex averages.

    z is reported as m/n (edges per vertex); the mean total degree 2m/n is
    exposed as z_total.
    """
    if graph.n == 0:
        raise UndefinedMeasureError("degree statistics need at least one vertex")
    total = graph.total_degrees()
    z = graph.m / graph.n
    return DegreeStats(
        d_max=int(total.max()),
        d_max_in=int(graph.d_in.max()),
        d_max_out=int(graph.d_out.max()),
        z=z,
        z_in=z,
        z_out=z,
        z_total=2.0 * z,
    )


def h_index(graph: Graph, mode: str = "in") -> int:
    """Largest h such that h vertices have degree >= h.

    mode "in" uses in-degrees (the directed variant), mode "total" uses
    in-degree plus out-degree (the undirected variant).
    """
    if mode == "in":
        degrees = graph.d_in
    elif mode == "total":
        degrees = graph.total_degrees()
    else:
        raise ValueError(f"unknown h-index mode {mode!r}")
    if len(degrees) == 0:
        return 0
    ranked = np.sort(degrees)[::-1]
    qualifying = ranked >= np.arange(1, len(ranked) + 1)
    return int(qualifying.sum()) if qualifying.any() else 0


def pagerank(
    graph: Graph,
    damping: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> PageRankResult:
    """Power iteration with multiplicity-weighted transitions.

    Each edge instance carries weight 1/d_out(source), so parallel edges
    contribute proportionally. Dangling-vertex mass is redistributed
    uniformly. Scores sum to 1 within tolerance; if the L1 change has not
    dropped below ``tol`` after ``max_iter`` rounds the result is flagged
    as non-converged but still returned.
    """
    n = graph.n
    if n == 0:
        raise UndefinedMeasureError("pagerank needs at least one vertex")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    out_degree = graph.d_out.astype(np.float64)
    dangling = out_degree == 0
    safe_out = np.where(dangling, 1.0, out_degree)
    scores = np.full(n, 1.0 / n)
    src = graph.edge_src
    dst = graph.edge_dst
    base = (1.0 - damping) / n
    for iteration in range(1, max_iter + 1):
        outflow = scores / safe_out
        incoming = np.bincount(dst, weights=outflow[src], minlength=n)
        dangling_mass = scores[dangling].sum() / n
        updated = base + damping * (incoming + dangling_mass)
        delta = np.abs(updated - scores).sum()
        scores = updated
        if delta < tol:
            return PageRankResult(scores, True, iteration)
    return PageRankResult(scores, False, max_iter)


def _dedup_degrees(graph: Graph) -> np.ndarray:
    """Total degrees after collapsing parallel edges to single edges."""
    n = graph.n
    if graph.m == 0:
        return np.zeros(n, dtype=np.int64)
    unique_pairs = np.unique(_pair_keys(graph))
    u_src = (unique_pairs // np.uint64(n)).astype(np.int64)
    u_dst = (unique_pairs % np.uint64(n)).astype(np.int64)
    return np.bincount(u_src, minlength=n) + np.bincount(u_dst, minlength=n)


def centralization(graph: Graph) -> float:
    """Freeman-style degree centralization, 1.0 for a perfect star.

    Sum of (d_max - d(v)) over vertices, normalized by (n-1)(n-2). Degrees
    are taken on the graph with parallel edges collapsed, since repeated
    predicates would otherwise dominate the numerator.
    """
    n = graph.n
    if n < 3:
        raise UndefinedMeasureError("centralization needs at least 3 vertices")
    degrees = _dedup_degrees(graph)
    spread = int(degrees.max()) * n - int(degrees.sum())
    return spread / ((n - 1) * (n - 2))


def fill(graph: Graph) -> Fill:
    """Density for a directed graph with loops: m/n^2, and m_u/n^2."""
    if graph.n == 0:
        raise UndefinedMeasureError("fill needs at least one vertex")
    counts = basic_counts(graph)
    denom = float(graph.n) * float(graph.n)
    return Fill(counts.m / denom, counts.m_u / denom)


def reciprocity(graph: Graph) -> Reciprocity:
    """Fraction of edge instances whose reverse connection exists.

    An edge instance (u, v) counts as bidirectional when any edge (v, u) is
    present; a self-loop is its own reverse.
    """
    m = graph.m
    if m == 0:
        raise UndefinedMeasureError("reciprocity needs at least one edge")
    n = np.uint64(graph.n)
    forward = np.unique(_pair_keys(graph))
    reverse_keys = graph.edge_dst.astype(np.uint64) * n + graph.edge_src.astype(np.uint64)
    m_bi = int(np.isin(reverse_keys, forward).sum())
    return Reciprocity(m_bi / m, m_bi)


def _frontier_neighbors(indptr: np.ndarray, index: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=index.dtype)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    return index[np.arange(total, dtype=np.int64) + offsets]


def _bfs_levels(graph: Graph, start: int) -> np.ndarray:
    """Undirected-view BFS distances from ``start``; unreached stay -1."""
    dist = np.full(graph.n, -1, dtype=np.int64)
    dist[start] = 0
    frontier = np.array([start], dtype=np.int64)
    level = 0
    while len(frontier):
        level += 1
        neighbors = np.concatenate(
            (
                _frontier_neighbors(graph.out_indptr, graph.out_targets, frontier),
                _frontier_neighbors(graph.in_indptr, graph.in_sources, frontier),
            )
        )
        if not len(neighbors):
            break
        fresh = neighbors[dist[neighbors] < 0]
        if not len(fresh):
            break
        frontier = np.unique(fresh)
        dist[frontier] = level
    return dist


def weak_components(graph: Graph) -> np.ndarray:
    """Component label per vertex on the undirected view, in scan order."""
    labels = np.full(graph.n, -1, dtype=np.int64)
    current = 0
    for vertex in range(graph.n):
        if labels[vertex] >= 0:
            continue
        dist = _bfs_levels(graph, vertex)
        labels[dist >= 0] = current
        current += 1
    return labels


def pseudo_diameter(graph: Graph) -> int:
    """Double-sweep BFS lower bound for the diameter.

    Runs on the undirected view of the largest weakly-connected component,
    starting from that component's smallest vertex index and re-rooting at
    the farthest vertex found until the eccentricity estimate stops
    growing. The result never exceeds the true diameter and is exact on
    trees. An isolated vertex yields 0.
    """
    if graph.n == 0:
        raise UndefinedMeasureError("pseudo-diameter needs at least one vertex")
    labels = weak_components(graph)
    sizes = np.bincount(labels)
    largest = int(sizes.argmax())
    start = int(np.flatnonzero(labels == largest)[0])
    best = -1
    current = start
    while True:
        dist = _bfs_levels(graph, current)
        eccentricity = int(dist.max())
        if eccentricity <= best:
            break
        best = eccentricity
        current = int(dist.argmax())  # first occurrence: smallest vertex index
    return best


# Report fields in serialization order; everything after dataset_id is a
# measure key in report files and the aggregate CSV.
@dataclass
class MeasureReport:
    dataset_id: str = ""
    n: int | None = None
    m: int | None = None
    m_u: int | None = None
    m_p: int | None = None
    d_max: int | None = None
    d_max_in: int | None = None
    d_max_out: int | None = None
    z: float | None = None
    z_in: float | None = None
    z_out: float | None = None
    z_total: float | None = None
    h_d: int | None = None
    h_u: int | None = None
    c_d_max: int | None = None
    pr_max: float | None = None
    pr_max_vertex: str | None = None
    pr_converged: bool | None = None
    c_d: float | None = None
    p: float | None = None
    p_u: float | None = None
    y: float | None = None
    m_bi: int | None = None
    pseudo_diameter: int | None = None
    var_in: float | None = None
    var_out: float | None = None
    stddev_in: float | None = None
    stddev_out: float | None = None
    cv_in: float | None = None
    cv_out: float | None = None
    alpha: float | None = None
    d_min: int | None = None
    alpha_in: float | None = None
    d_min_in: int | None = None


MEASURE_KEYS: tuple[str, ...] = tuple(
    f.name for f in fields(MeasureReport) if f.name != "dataset_id"
)


def _undefined_to_none(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except UndefinedMeasureError:
        return None


def compute_report(
    graph: Graph,
    dataset_id: str = "",
    damping: float = 0.85,
    pagerank_tol: float = 1e-8,
    pagerank_max_iter: int = 200,
    min_tail: int = 10,
) -> MeasureReport:
    """Compute the full measure catalogue for one graph."""
    report = MeasureReport(dataset_id=dataset_id)
    counts = basic_counts(graph)
    report.n, report.m, report.m_u, report.m_p = counts

    degrees = _undefined_to_none(degree_stats, graph)
    if degrees is not None:
        report.d_max = degrees.d_max
        report.d_max_in = degrees.d_max_in
        report.d_max_out = degrees.d_max_out
        report.z = degrees.z
        report.z_in = degrees.z_in
        report.z_out = degrees.z_out
        report.z_total = degrees.z_total
        report.c_d_max = degrees.d_max

    report.h_d = h_index(graph, "in")
    report.h_u = h_index(graph, "total")

    ranked = _undefined_to_none(
        pagerank, graph, damping=damping, tol=pagerank_tol, max_iter=pagerank_max_iter
    )
    if ranked is not None:
        top = int(ranked.scores.argmax())
        report.pr_max = float(ranked.scores[top])
        report.pr_max_vertex = format_hash(int(graph.vertex_hashes[top]))
        report.pr_converged = ranked.converged

    report.c_d = _undefined_to_none(centralization, graph)

    filled = _undefined_to_none(fill, graph)
    if filled is not None:
        report.p, report.p_u = filled

    mutual = _undefined_to_none(reciprocity, graph)
    if mutual is not None:
        report.y, report.m_bi = mutual

    report.pseudo_diameter = _undefined_to_none(pseudo_diameter, graph)

    if graph.n > 0:
        in_hist = stats.degree_distribution(graph, "in")
        out_hist = stats.degree_distribution(graph, "out")
        in_disp = stats.dispersion(in_hist)
        out_disp = stats.dispersion(out_hist)
        report.var_in, report.stddev_in, report.cv_in = (
            in_disp.variance, in_disp.stddev, in_disp.cv,
        )
        report.var_out, report.stddev_out, report.cv_out = (
            out_disp.variance, out_disp.stddev, out_disp.cv,
        )
        total_fit = stats.fit_powerlaw(graph.total_degrees(), min_tail=min_tail)
        if total_fit is not None:
            report.alpha = total_fit.alpha
            report.d_min = total_fit.d_min
        in_fit = stats.fit_powerlaw(graph.d_in, min_tail=min_tail)
        if in_fit is not None:
            report.alpha_in = in_fit.alpha
            report.d_min_in = in_fit.d_min

    return report
