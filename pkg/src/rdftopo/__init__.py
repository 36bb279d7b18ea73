"""rdftopo: topology profiling for RDF graphs.

Parses RDF dumps into hash-encoded edgelists, builds immutable directed
multigraphs, computes a catalogue of topological measures (degree-based,
centrality, edge-based, and degree-distribution statistics with power-law
fits), and orchestrates batches of datasets in parallel.
"""

__version__ = "0.1.0"

from .config import Settings, load_settings
from .graph import Graph, build_graph, load_binary, save_binary
from .ingest import TermDictionary, format_hash, hash_term, parse_hash, prepare_edgelist
from .measures import MeasureReport, compute_report
from .ntriples import ParseStats, Term, Triple, parse_ntriples
from .pipeline import read_report, run_batch, write_report

__all__ = [
    "__version__",
    "Settings",
    "load_settings",
    "Graph",
    "build_graph",
    "load_binary",
    "save_binary",
    "TermDictionary",
    "format_hash",
    "hash_term",
    "parse_hash",
    "prepare_edgelist",
    "MeasureReport",
    "compute_report",
    "ParseStats",
    "Term",
    "Triple",
    "parse_ntriples",
    "read_report",
    "run_batch",
    "write_report",
]
