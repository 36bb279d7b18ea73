"""Command-line surface for the profiling pipeline and its single stages.

Subcommands: prepare (RDF input -> edgelist + dictionary), build (edgelist
-> binary graph), analyze (graph -> measure report), batch (manifest ->
reports + run ledger), probe (manifest availability), hist (graph -> degree
histogram), correlate (report directory -> correlation matrix), resolve
(dictionary + hash -> term). Exit status is 0 on full success, 1 on an
operational failure, 2 on a usage error. Progress lines on stderr are
machine readable: ``progress stage=<s> dataset=<id> seconds=<t> status=<st>``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .acquire import AcquisitionError, acquire_input
from .config import Settings, load_settings
from .correlation import DEFAULT_MEASURES, correlation_matrix, write_heatmap_tsv, write_matrix_csv
from .graph import EdgelistFormatError, GraphFormatError, build_graph, save_binary
from .ingest import (
    HashCollisionError,
    TermDictionary,
    UnknownHashError,
    prepare_edgelist,
    resolve_hash,
)
from .manifest import load_manifest, probe_availability
from .measures import compute_report
from .pipeline import (
    ReportFormatError,
    aggregate_reports,
    read_report,
    rebuild_or_load,
    run_batch,
    write_report,
)
from . import stats


def _progress(stage: str, dataset: str, seconds: float, status: str) -> None:
    print(
        f"progress stage={stage} dataset={dataset} seconds={seconds:.3f} status={status}",
        file=sys.stderr,
    )


def _settings_from(args: argparse.Namespace) -> Settings:
    return load_settings(
        config_path=getattr(args, "config", None),
        hash_seed=getattr(args, "hash_seed", None),
        damping=getattr(args, "damping", None),
        workers_prepare=getattr(args, "workers_prepare", None),
        workers_analyze=getattr(args, "workers_analyze", None),
        converter_cmd=getattr(args, "converter_cmd", None),
        extractor_cmd=getattr(args, "extractor_cmd", None),
    )


def _cmd_prepare(args: argparse.Namespace) -> int:
    settings = _settings_from(args)
    source = Path(args.input)
    prefix = Path(args.out) if args.out else Path(source.stem)
    edgelist_path = Path(args.out_edgelist) if args.out_edgelist else prefix.with_suffix(".edgelist")
    dictionary_path = Path(args.out_dict) if args.out_dict else prefix.with_suffix(".dict.tsv")
    started = time.perf_counter()
    with acquire_input(args.input, format_hint=args.format, settings=settings) as lines:
        result = prepare_edgelist(lines, edgelist_path, dictionary_path, seed=settings.hash_seed)
    _progress("prepare", source.name, time.perf_counter() - started, "ok")
    print(
        f"prepared {result.triples} triples, {result.distinct_terms} distinct terms "
        f"({result.parse.malformed} malformed, {result.parse.skipped} skipped lines)"
    )
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    out = Path(args.out) if args.out else Path(args.edgelist).with_suffix(".graph")
    started = time.perf_counter()
    graph = build_graph(args.edgelist)
    save_binary(graph, out)
    _progress("build", Path(args.edgelist).name, time.perf_counter() - started, "ok")
    print(f"built graph: n={graph.n} m={graph.m} -> {out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    settings = _settings_from(args)
    dataset_id = args.dataset_id or Path(args.graph).stem
    started = time.perf_counter()
    graph = rebuild_or_load(args.graph)
    report = compute_report(
        graph,
        dataset_id=dataset_id,
        damping=settings.damping,
        pagerank_tol=settings.pagerank_tol,
        pagerank_max_iter=settings.pagerank_max_iter,
        min_tail=settings.min_tail,
    )
    out = Path(args.out) if args.out else Path(args.graph).with_suffix(".report.json")
    write_report(report, out)
    if args.plots:
        plots_dir = Path(args.plots)
        plots_dir.mkdir(parents=True, exist_ok=True)
        for mode, degrees in (("total", graph.total_degrees()), ("in", graph.d_in)):
            hist = stats.degree_distribution(graph, mode)
            if hist.total == 0:
                continue
            fit = stats.fit_powerlaw(degrees, min_tail=settings.min_tail)
            stats.export_plotdata(hist, fit, plots_dir / f"{dataset_id}.{mode}.plotdata.tsv")
    _progress("analyze", dataset_id, time.perf_counter() - started, "ok")
    print(f"analyzed {dataset_id}: n={report.n} m={report.m} -> {out}")
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    settings = _settings_from(args)
    entries = load_manifest(args.manifest)
    ledger = run_batch(
        entries,
        args.out_dir,
        settings=settings,
        plots=args.plots,
        progress=_progress,
    )
    failed = ledger.failed
    print(
        f"batch finished: {ledger.count('analyzed')} analyzed, "
        f"{len(failed)} failed, {ledger.count('skipped')} skipped"
    )
    for record in failed:
        print(f"  failed {record.dataset_id} at {record.failed_stage}: {record.error}")
    return 1 if failed else 0


def _cmd_probe(args: argparse.Namespace) -> int:
    settings = _settings_from(args)
    entries = load_manifest(args.manifest)
    availability = probe_availability(entries, timeout=settings.http_timeout)
    for entry in entries:
        result = availability[entry.id]
        status = "available" if result.available else "unavailable"
        print(f"{entry.id}\t{status}\t{result.detail}")
    if args.out:
        payload = {
            entry.id: {
                "available": availability[entry.id].available,
                "detail": availability[entry.id].detail,
            }
            for entry in entries
        }
        with open(args.out, "w", encoding="utf-8", newline="\n") as sink:
            json.dump(payload, sink, indent=2)
            sink.write("\n")
    return 0


def _cmd_hist(args: argparse.Namespace) -> int:
    settings = _settings_from(args)
    graph = rebuild_or_load(args.graph)
    hist = stats.degree_distribution(graph, args.mode)
    if hist.total == 0:
        print("graph has no vertices", file=sys.stderr)
        return 1
    fit = None
    if args.fit:
        degrees = {
            "in": graph.d_in,
            "out": graph.d_out,
            "total": graph.total_degrees(),
        }[args.mode]
        fit = stats.fit_powerlaw(degrees, min_tail=settings.min_tail)
    out = Path(args.out) if args.out else Path(args.graph).with_suffix(f".{args.mode}.plotdata.tsv")
    stats.export_plotdata(hist, fit, out)
    print(f"wrote {args.mode}-degree histogram ({len(hist.ks)} rows) -> {out}")
    return 0


def _cmd_correlate(args: argparse.Namespace) -> int:
    report_dir = Path(args.reports)
    paths = sorted(report_dir.glob("*.json"))
    if args.manifest and args.domain:
        entries = load_manifest(args.manifest)
        wanted = {e.id for e in entries if e.domain == args.domain}
        paths = [p for p in paths if p.stem in wanted]
    reports = [read_report(path) for path in paths]
    measures = tuple(args.measures.split(",")) if args.measures else DEFAULT_MEASURES
    matrix = correlation_matrix(reports, measures)
    out = Path(args.out) if args.out else report_dir / "correlation.csv"
    write_matrix_csv(matrix, out)
    if args.heatmap:
        write_heatmap_tsv(matrix, args.heatmap)
    print(f"correlated {len(reports)} reports over {len(measures)} measures -> {out}")
    return 0


def _cmd_resolve(args: argparse.Namespace) -> int:
    dictionary = TermDictionary.load(args.dictionary)
    print(resolve_hash(dictionary, args.hash))
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    paths = sorted(Path(args.reports).glob("*.json"))
    count = aggregate_reports(paths, args.out)
    print(f"aggregated {count} reports -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdftopo",
        description="Profile the graph topology of RDF datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_settings_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", help="JSON settings file")
        sub.add_argument("--hash-seed", type=int, help="seed for the 64-bit term hash")
        sub.add_argument("--damping", type=float, help="PageRank damping factor")
        sub.add_argument("--converter-cmd", help="serialization converter command template")
        sub.add_argument("--extractor-cmd", help="archive extractor command template")

    prepare = commands.add_parser("prepare", help="RDF input -> edgelist + term dictionary")
    prepare.add_argument("input", help="path or URL of an RDF dump")
    prepare.add_argument("--format", help="media type or alias when the extension is unclear")
    prepare.add_argument("--out", help="output prefix (default: input stem)")
    prepare.add_argument("--out-edgelist", help="explicit edgelist path")
    prepare.add_argument("--out-dict", help="explicit dictionary path")
    add_settings_flags(prepare)
    prepare.set_defaults(handler=_cmd_prepare)

    build = commands.add_parser("build", help="edgelist -> binary graph")
    build.add_argument("edgelist")
    build.add_argument("--out", help="binary graph path (default: <stem>.graph)")
    build.set_defaults(handler=_cmd_build)

    analyze = commands.add_parser("analyze", help="graph -> measure report")
    analyze.add_argument("graph", help="binary graph or edgelist")
    analyze.add_argument("--out", help="report path (default: <stem>.report.json)")
    analyze.add_argument("--dataset-id", help="dataset id recorded in the report")
    analyze.add_argument("--plots", help="directory for degree-distribution plot data")
    add_settings_flags(analyze)
    analyze.set_defaults(handler=_cmd_analyze)

    batch = commands.add_parser("batch", help="manifest -> reports, plots, run ledger")
    batch.add_argument("manifest")
    batch.add_argument("--out-dir", required=True)
    batch.add_argument("--plots", action="store_true", help="also write plot data")
    batch.add_argument("--workers-prepare", type=int, help="preparation pool size")
    batch.add_argument("--workers-analyze", type=int, help="analysis pool size")
    add_settings_flags(batch)
    batch.set_defaults(handler=_cmd_batch)

    probe = commands.add_parser("probe", help="check manifest URL/file availability")
    probe.add_argument("manifest")
    probe.add_argument("--out", help="write availability JSON here")
    add_settings_flags(probe)
    probe.set_defaults(handler=_cmd_probe)

    hist = commands.add_parser("hist", help="graph -> degree histogram table")
    hist.add_argument("graph", help="binary graph or edgelist")
    hist.add_argument("--mode", choices=("in", "out", "total"), default="total")
    hist.add_argument("--fit", action="store_true", help="include a power-law fit in the header")
    hist.add_argument("--out")
    add_settings_flags(hist)
    hist.set_defaults(handler=_cmd_hist)

    correlate = commands.add_parser("correlate", help="report directory -> Pearson matrix")
    correlate.add_argument("reports", help="directory of measure report JSON files")
    correlate.add_argument("--out", help="matrix CSV path")
    correlate.add_argument("--heatmap", help="long-form TSV for heatmap rendering")
    correlate.add_argument("--measures", help="comma-separated measure names")
    correlate.add_argument("--manifest", help="manifest for domain filtering")
    correlate.add_argument("--domain", help="restrict to one domain label")
    correlate.set_defaults(handler=_cmd_correlate)

    resolve = commands.add_parser("resolve", help="dictionary + hash -> original term")
    resolve.add_argument("dictionary")
    resolve.add_argument("hash")
    resolve.set_defaults(handler=_cmd_resolve)

    aggregate = commands.add_parser("aggregate", help="report directory -> one CSV row per dataset")
    aggregate.add_argument("reports")
    aggregate.add_argument("--out", required=True)
    aggregate.set_defaults(handler=_cmd_aggregate)

    return parser


_OPERATIONAL_ERRORS = (
    AcquisitionError,
    EdgelistFormatError,
    GraphFormatError,
    HashCollisionError,
    UnknownHashError,
    ReportFormatError,
    OSError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _OPERATIONAL_ERRORS as exc:
        stage = getattr(exc, "stage", args.command)
        print(f"rdftopo {args.command}: {stage}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
