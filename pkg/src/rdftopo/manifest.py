"""Dataset manifests, media-type normalization, and availability probing.

A manifest is a JSON array or a TSV table with columns ``id``, ``domain``,
``url``, ``media_type`` (and optionally ``format_hint``). Declared media
types from catalogue metadata are messy; :func:`map_media_type` normalizes
the common aliases and flags compound declarations as ambiguous so the
batch pipeline can skip them.
"""

from __future__ import annotations

import csv
import json
import re
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

NTRIPLES = "application/n-triples"
NQUADS = "application/n-quads"
TURTLE = "text/turtle"
RDF_XML = "application/rdf+xml"
NOTATION3 = "text/n3"
JSON_LD = "application/ld+json"

# One alias group per canonical type. Tokens from underscore-style declared
# strings are matched against these; hitting more than one group means the
# declaration names several formats at once and is ambiguous.
_GROUP_TOKENS = {
    NTRIPLES: {"nt", "ntriples", "triples"},
    NQUADS: {"nq", "nquads", "quads"},
    TURTLE: {"ttl", "turtle"},
    RDF_XML: {"rdf", "xml", "rdfxml", "owl"},
    NOTATION3: {"n3", "notation3"},
    JSON_LD: {"jsonld"},
}
# json + ld only name a format when combined; bare "json" stays unknown.
_PAIR_TOKENS = {("json", "ld"): JSON_LD, ("ld", "json"): JSON_LD}
_NON_RDF_TOKENS = {"html", "csv", "xls", "xlsx", "txt", "pdf", "sparql", "api"}
_PACKAGING_TOKENS = {"gz", "gzip", "bz2", "bzip2", "zip", "tar", "tgz", "7z", "rar", "example"}

_EXACT = {
    NTRIPLES: NTRIPLES,
    NQUADS: NQUADS,
    TURTLE: TURTLE,
    RDF_XML: RDF_XML,
    NOTATION3: NOTATION3,
    JSON_LD: JSON_LD,
    "text/ntriples": NTRIPLES,
    "text/nt": NTRIPLES,
    "n-triples": NTRIPLES,
    "n-quads": NQUADS,
    "application/x-ntriples": NTRIPLES,
    "application/x-nquads": NQUADS,
    "application/turtle": TURTLE,
    "application/x-turtle": TURTLE,
    "application/xml+rdf": RDF_XML,
    "text/rdf+n3": NOTATION3,
}


def map_media_type(declared: str | None) -> str | None:
    """Canonical media type for a declared one, or None when ambiguous.

    ``rdf``, ``xml_rdf``, ``rdf_xml`` and similar all map to
    ``application/rdf+xml``; compound declarations such as
    ``html_json_ld_ttl_rdf_xml`` name several formats and return None.
    """
    if declared is None:
        return None
    cleaned = declared.strip().lower()
    if not cleaned:
        return None
    exact = _EXACT.get(cleaned)
    if exact is not None:
        return exact

    tokens = [t for t in re.split(r"[_\-+/.\s]+", cleaned) if t]
    tokens = [t for t in tokens if t not in _PACKAGING_TOKENS]

    groups: set[str] = set()
    saw_non_rdf = False
    i = 0
    while i < len(tokens):
        pair = tuple(tokens[i : i + 2])
        if len(pair) == 2 and pair in _PAIR_TOKENS:
            groups.add(_PAIR_TOKENS[pair])
            i += 2
            continue
        token = tokens[i]
        matched = False
        for canonical, aliases in _GROUP_TOKENS.items():
            if token in aliases:
                groups.add(canonical)
                matched = True
                break
        if not matched and token in _NON_RDF_TOKENS:
            saw_non_rdf = True
        i += 1

    if len(groups) == 1 and not saw_non_rdf:
        return next(iter(groups))
    return None


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    domain: str
    url: str
    media_type: str | None = None
    format_hint: str | None = None


def load_manifest(path: Path | str) -> list[ManifestEntry]:
    """Load a JSON or TSV manifest; dataset ids must be unique."""
    path = Path(path)
    rows: list[dict] = []
    if path.suffix.lower() == ".json":
        with open(path, "r", encoding="utf-8") as source:
            data = json.load(source)
        if not isinstance(data, list):
            raise ValueError(f"{path}: manifest JSON must be an array")
        rows = data
    else:
        with open(path, "r", encoding="utf-8", newline="") as source:
            reader = csv.DictReader(source, delimiter="\t")
            rows = list(reader)

    entries = []
    seen: set[str] = set()
    for index, row in enumerate(rows):
        dataset_id = (row.get("id") or "").strip()
        url = (row.get("url") or "").strip()
        if not dataset_id or not url:
            raise ValueError(f"{path}: entry {index} needs both id and url")
        if dataset_id in seen:
            raise ValueError(f"{path}: duplicate dataset id {dataset_id!r}")
        seen.add(dataset_id)
        media = (row.get("media_type") or "").strip() or None
        hint = (row.get("format_hint") or "").strip() or None
        entries.append(
            ManifestEntry(
                id=dataset_id,
                domain=(row.get("domain") or "").strip(),
                url=url,
                media_type=media,
                format_hint=hint,
            )
        )
    return entries


@dataclass(frozen=True)
class Availability:
    available: bool
    detail: str


def is_url(source: str) -> bool:
    return source.startswith(("http://", "https://", "ftp://"))


def probe_availability(
    entries: list[ManifestEntry],
    timeout: float = 10.0,
) -> dict[str, Availability]:
    """HEAD-check URLs and stat local paths; bodies are never downloaded."""
    results: dict[str, Availability] = {}
    for entry in entries:
        if is_url(entry.url):
            request = urllib.request.Request(entry.url, method="HEAD")
            try:
                with urllib.request.urlopen(request, timeout=timeout) as response:
                    status = getattr(response, "status", 200)
                results[entry.id] = Availability(status < 400, f"HTTP {status}")
            except urllib.error.HTTPError as exc:
                results[entry.id] = Availability(False, f"HTTP {exc.code}")
            except (urllib.error.URLError, OSError) as exc:
                results[entry.id] = Availability(False, f"unreachable: {exc}")
        else:
            path = Path(entry.url)
            if path.exists():
                results[entry.id] = Availability(True, "local file")
            else:
                results[entry.id] = Availability(False, "no such file")
    return results
