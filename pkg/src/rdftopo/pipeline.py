"""Manifest-driven batch orchestration and report persistence.

Datasets flow through acquire -> prepare (edgelist + dictionary) -> build
(binary graph) -> analyze (measure report, optional plot data) under two
independently bounded worker pools: preparation is I/O bound, analysis is
memory bound, so their limits differ. Datasets share no mutable state; one
dataset failing is recorded in the run ledger and never stops the batch.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import FIRST_COMPLETED, Future, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import stats
from .acquire import AcquisitionError, acquire_input
from .config import Settings
from .graph import MAGIC as GRAPH_MAGIC
from .graph import Graph, build_graph, load_binary, save_binary
from .ingest import prepare_edgelist
from .manifest import ManifestEntry, map_media_type
from .measures import MEASURE_KEYS, MeasureReport, compute_report

REPORT_SCHEMA_VERSION = 1

SUCCESS = "analyzed"
FAILED = "failed"
SKIPPED = "skipped"

ProgressFn = Callable[[str, str, float, str], None]


class ReportFormatError(ValueError):
    """Unreadable or wrong-version report file."""


def write_report(report: MeasureReport, path: Path | str) -> None:
    """Serialize a report as schema-versioned JSON; None marks undefined."""
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dataset_id": report.dataset_id,
        "measures": {key: getattr(report, key) for key in MEASURE_KEYS},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        json.dump(payload, sink, indent=2)
        sink.write("\n")


def read_report(path: Path | str) -> MeasureReport:
    with open(path, "r", encoding="utf-8") as source:
        try:
            payload = json.load(source)
        except json.JSONDecodeError as exc:
            raise ReportFormatError(f"{path}: not valid JSON: {exc}") from None
    version = payload.get("schema_version")
    if version != REPORT_SCHEMA_VERSION:
        raise ReportFormatError(f"{path}: unsupported schema version {version!r}")
    measures = payload.get("measures", {})
    unknown = set(measures) - set(MEASURE_KEYS)
    if unknown:
        raise ReportFormatError(f"{path}: unknown measure keys {sorted(unknown)}")
    return MeasureReport(dataset_id=payload.get("dataset_id", ""), **measures)


def aggregate_reports(report_paths: Sequence[Path | str], out_csv: Path | str) -> int:
    """Collect reports into one CSV row per dataset; returns the row count."""
    rows = [read_report(path) for path in report_paths]
    with open(out_csv, "w", encoding="utf-8", newline="") as sink:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(("dataset_id", *MEASURE_KEYS))
        for report in rows:
            cells = [getattr(report, key) for key in MEASURE_KEYS]
            writer.writerow((report.dataset_id, *("" if c is None else c for c in cells)))
    return len(rows)


@dataclass
class StageOutcome:
    seconds: float = 0.0
    detail: str = ""


@dataclass
class DatasetRecord:
    dataset_id: str
    domain: str = ""
    state: str = ""
    failed_stage: str | None = None
    error: str | None = None
    stages: dict[str, StageOutcome] = field(default_factory=dict)


@dataclass
class RunLedger:
    """Terminal state plus per-stage wall-clock for every manifest entry."""

    records: dict[str, DatasetRecord] = field(default_factory=dict)

    def add(self, record: DatasetRecord) -> None:
        self.records[record.dataset_id] = record

    def count(self, state: str) -> int:
        return sum(1 for r in self.records.values() if r.state == state)

    @property
    def failed(self) -> list[DatasetRecord]:
        return [r for r in self.records.values() if r.state == FAILED]

    def conserved(self, manifest_size: int) -> bool:
        terminal = self.count(SUCCESS) + self.count(FAILED) + self.count(SKIPPED)
        return terminal == manifest_size == len(self.records)

    def write(self, path: Path | str) -> None:
        payload = {
            "datasets": {
                dataset_id: {
                    "domain": record.domain,
                    "state": record.state,
                    "failed_stage": record.failed_stage,
                    "error": record.error,
                    "stages": {
                        name: {"seconds": outcome.seconds, "detail": outcome.detail}
                        for name, outcome in record.stages.items()
                    },
                }
                for dataset_id, record in sorted(self.records.items())
            },
            "counts": {
                SUCCESS: self.count(SUCCESS),
                FAILED: self.count(FAILED),
                SKIPPED: self.count(SKIPPED),
            },
        }
        with open(path, "w", encoding="utf-8", newline="\n") as sink:
            json.dump(payload, sink, indent=2)
            sink.write("\n")


@dataclass(frozen=True)
class BatchPaths:
    root: Path

    @property
    def edgelists(self) -> Path:
        return self.root / "edgelists"

    @property
    def dictionaries(self) -> Path:
        return self.root / "dictionaries"

    @property
    def graphs(self) -> Path:
        return self.root / "graphs"

    @property
    def reports(self) -> Path:
        return self.root / "reports"

    @property
    def plots(self) -> Path:
        return self.root / "plots"

    def make_dirs(self, plots: bool = False) -> None:
        for directory in (self.edgelists, self.dictionaries, self.graphs, self.reports):
            directory.mkdir(parents=True, exist_ok=True)
        if plots:
            self.plots.mkdir(parents=True, exist_ok=True)

    def edgelist(self, dataset_id: str) -> Path:
        return self.edgelists / f"{dataset_id}.edgelist"

    def dictionary(self, dataset_id: str) -> Path:
        return self.dictionaries / f"{dataset_id}.dict.tsv"

    def graph(self, dataset_id: str) -> Path:
        return self.graphs / f"{dataset_id}.graph"

    def report(self, dataset_id: str) -> Path:
        return self.reports / f"{dataset_id}.json"

    def plotdata(self, dataset_id: str, mode: str) -> Path:
        return self.plots / f"{dataset_id}.{mode}.plotdata.tsv"


def prepare_stage(entry: ManifestEntry, paths: BatchPaths, settings: Settings) -> float:
    """Acquire the dump and write edgelist plus dictionary; returns seconds."""
    started = time.perf_counter()
    hint = entry.format_hint or entry.media_type
    with acquire_input(entry.url, format_hint=hint, settings=settings) as lines:
        prepare_edgelist(
            lines,
            paths.edgelist(entry.id),
            paths.dictionary(entry.id),
            seed=settings.hash_seed,
        )
    return time.perf_counter() - started


def build_stage(entry: ManifestEntry, paths: BatchPaths) -> tuple[Graph, float]:
    started = time.perf_counter()
    graph = build_graph(paths.edgelist(entry.id))
    save_binary(graph, paths.graph(entry.id))
    return graph, time.perf_counter() - started


def analyze_stage(
    entry: ManifestEntry,
    graph: Graph,
    paths: BatchPaths,
    settings: Settings,
    plots: bool,
) -> float:
    started = time.perf_counter()
    report = compute_report(
        graph,
        dataset_id=entry.id,
        damping=settings.damping,
        pagerank_tol=settings.pagerank_tol,
        pagerank_max_iter=settings.pagerank_max_iter,
        min_tail=settings.min_tail,
    )
    write_report(report, paths.report(entry.id))
    if plots:
        for mode, degrees in (("total", graph.total_degrees()), ("in", graph.d_in)):
            hist = stats.degree_distribution(graph, mode)
            if hist.total == 0:
                continue
            fit = stats.fit_powerlaw(degrees, min_tail=settings.min_tail)
            stats.export_plotdata(hist, fit, paths.plotdata(entry.id, mode))
    return time.perf_counter() - started


def _run_analysis(
    entry: ManifestEntry,
    record: DatasetRecord,
    paths: BatchPaths,
    settings: Settings,
    plots: bool,
    progress: ProgressFn | None,
) -> None:
    graph, build_seconds = build_stage(entry, paths)
    record.stages["build"] = StageOutcome(build_seconds)
    _report_progress(progress, "build", entry.id, build_seconds, "ok")
    analyze_seconds = analyze_stage(entry, graph, paths, settings, plots)
    record.stages["analyze"] = StageOutcome(analyze_seconds)
    _report_progress(progress, "analyze", entry.id, analyze_seconds, "ok")


def _report_progress(
    progress: ProgressFn | None, stage: str, dataset_id: str, seconds: float, status: str
) -> None:
    if progress is not None:
        progress(stage, dataset_id, seconds, status)


def run_batch(
    entries: Sequence[ManifestEntry],
    out_dir: Path | str,
    settings: Settings | None = None,
    plots: bool = False,
    progress: ProgressFn | None = None,
) -> RunLedger:
    """Process every manifest entry under bounded prepare/analyze pools.

    Entries whose declared media type is ambiguous are skipped up front.
    Each remaining dataset runs prepare on the preparation pool and, once
    prepared, build+analyze on the analysis pool. Results are deterministic
    for fixed inputs regardless of the pool sizes.
    """
    if settings is None:
        settings = Settings()
    paths = BatchPaths(Path(out_dir))
    paths.make_dirs(plots=plots)
    ledger = RunLedger()

    runnable: list[ManifestEntry] = []
    for entry in entries:
        record = DatasetRecord(dataset_id=entry.id, domain=entry.domain)
        if entry.media_type is not None and map_media_type(entry.media_type) is None:
            record.state = SKIPPED
            record.error = f"ambiguous media type: {entry.media_type}"
            ledger.add(record)
            _report_progress(progress, "media-type", entry.id, 0.0, SKIPPED)
            continue
        ledger.add(record)
        runnable.append(entry)

    def prepare_one(entry: ManifestEntry) -> float:
        return prepare_stage(entry, paths, settings)

    with ThreadPoolExecutor(max_workers=settings.workers_prepare) as prepare_pool, \
            ThreadPoolExecutor(max_workers=settings.workers_analyze) as analyze_pool:
        analysis_futures: dict[Future, ManifestEntry] = {}
        prepare_futures: dict[Future, ManifestEntry] = {
            prepare_pool.submit(prepare_one, entry): entry for entry in runnable
        }
        pending = set(prepare_futures)
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for future in done:
                entry = prepare_futures[future]
                record = ledger.records[entry.id]
                try:
                    seconds = future.result()
                except AcquisitionError as exc:
                    record.state = FAILED
                    record.failed_stage = f"prepare:{exc.stage}"
                    record.error = str(exc)
                    _report_progress(progress, "prepare", entry.id, 0.0, FAILED)
                    continue
                except Exception as exc:  # noqa: BLE001 - isolate dataset crash
                    record.state = FAILED
                    record.failed_stage = "prepare"
                    record.error = f"{type(exc).__name__}: {exc}"
                    _report_progress(progress, "prepare", entry.id, 0.0, FAILED)
                    continue
                record.stages["prepare"] = StageOutcome(seconds)
                _report_progress(progress, "prepare", entry.id, seconds, "ok")
                analysis_futures[
                    analyze_pool.submit(
                        _run_analysis, entry, record, paths, settings, plots, progress
                    )
                ] = entry

        for future, entry in analysis_futures.items():
            record = ledger.records[entry.id]
            try:
                future.result()
            except Exception as exc:  # noqa: BLE001 - isolate dataset crash
                record.state = FAILED
                record.failed_stage = "build" if "build" not in record.stages else "analyze"
                record.error = f"{type(exc).__name__}: {exc}"
                _report_progress(progress, record.failed_stage, entry.id, 0.0, FAILED)
                continue
            record.state = SUCCESS

    ledger.write(paths.root / "ledger.json")
    report_paths = [paths.report(r.dataset_id) for r in ledger.records.values() if r.state == SUCCESS]
    aggregate_reports(sorted(report_paths), paths.root / "aggregate.csv")
    return ledger


def rebuild_or_load(path: Path | str) -> Graph:
    """Load a binary graph, or build from an edgelist path."""
    path = Path(path)
    with open(path, "rb") as probe:
        magic = probe.read(len(GRAPH_MAGIC))
    if magic == GRAPH_MAGIC:
        return load_binary(path)
    return build_graph(path)
