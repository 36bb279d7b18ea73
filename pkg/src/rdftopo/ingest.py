"""Hash-encoded edgelist preparation and the reverse term dictionary.

Terms are digested with 64-bit XXH64 (seed 0 by default) over their
N-Triples surface form, delimiters included: IRIs are hashed with their
angle brackets and literals with their quotes and datatype/language suffix.
This is the variant that reproduces published edgelists hashed the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

import xxhash

from .ntriples import ParseStats, Triple, parse_ntriples

HASH_HEX_DIGITS = 16


class HashCollisionError(RuntimeError):
    """Two distinct term strings digested to the same 64-bit value."""


class UnknownHashError(KeyError):
    """A hash with no entry in the term dictionary."""


def hash_term(term: str, seed: int = 0) -> int:
    """64-bit digest of a term's surface string (UTF-8 bytes)."""
    return xxhash.xxh64_intdigest(term.encode("utf-8"), seed)


def format_hash(value: int) -> str:
    """Render a digest as exactly 16 lowercase hex characters."""
    if not 0 <= value < 1 << 64:
        raise ValueError(f"not a 64-bit value: {value}")
    return f"{value:016x}"


def parse_hash(text: str) -> int:
    if len(text) != HASH_HEX_DIGITS:
        raise ValueError(f"expected {HASH_HEX_DIGITS} hex chars, got {text!r}")
    return int(text, 16)


class TermDictionary:
    """Reverse map from term hashes to the original term strings.

    Entries are kept in first-insertion order so that re-ingesting the same
    input reproduces the dictionary file byte for byte. Interning a term
    whose hash is already bound to a *different* string raises
    HashCollisionError: at 64 bits that practically never happens, and when
    it does the edgelist is no longer invertible, which is fatal.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._terms: dict[int, str] = {}

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, digest: int) -> bool:
        return digest in self._terms

    def intern(self, term: str) -> int:
        digest = hash_term(term, self.seed)
        known = self._terms.get(digest)
        if known is None:
            self._terms[digest] = term
        elif known != term:
            raise HashCollisionError(
                f"hash {format_hash(digest)} maps to both {known!r} and {term!r}"
            )
        return digest

    def lookup(self, digest: int) -> str:
        try:
            return self._terms[digest]
        except KeyError:
            raise UnknownHashError(format_hash(digest)) from None

    def items(self) -> Iterator[tuple[int, str]]:
        return iter(self._terms.items())

    def write(self, path: Path | str) -> None:
        """Write `hash<TAB>term` lines in insertion order."""
        with open(path, "w", encoding="utf-8", newline="\n") as sink:
            for digest, term in self._terms.items():
                sink.write(f"{format_hash(digest)}\t{term}\n")

    @classmethod
    def load(cls, path: Path | str, seed: int = 0) -> "TermDictionary":
        dictionary = cls(seed=seed)
        with open(path, "r", encoding="utf-8", newline="\n") as source:
            for lineno, line in enumerate(source, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    rendered, term = line.split("\t", 1)
                    digest = parse_hash(rendered)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad dictionary line") from exc
                known = dictionary._terms.get(digest)
                if known is not None and known != term:
                    raise HashCollisionError(
                        f"{path}:{lineno}: hash {rendered} maps to two terms"
                    )
                dictionary._terms[digest] = term
        return dictionary


def resolve_hash(dictionary: TermDictionary, digest: int | str) -> str:
    """Original term for a digest; accepts the 16-hex rendering too."""
    if isinstance(digest, str):
        digest = parse_hash(digest)
    return dictionary.lookup(digest)


@dataclass
class IngestStats:
    triples: int = 0
    distinct_terms: int = 0
    parse: ParseStats = field(default_factory=ParseStats)


def triples_to_edgelist(
    triples: Iterable[Triple],
    edgelist_sink: TextIO,
    dictionary: TermDictionary,
) -> IngestStats:
    """Write one `subject-hash object-hash predicate-hash` line per triple.

    Duplicate statements are preserved: the downstream graph is a multigraph
    and every input triple is one edge.
    """
    stats = IngestStats()
    for triple in triples:
        s = dictionary.intern(triple.subject.nt())
        o = dictionary.intern(triple.object.nt())
        p = dictionary.intern(triple.predicate.nt())
        edgelist_sink.write(f"{s:016x} {o:016x} {p:016x}\n")
        stats.triples += 1
    stats.distinct_terms = len(dictionary)
    return stats


def prepare_edgelist(
    lines: Iterable[bytes | str],
    edgelist_path: Path | str,
    dictionary_path: Path | str,
    seed: int = 0,
) -> IngestStats:
    """Parse a statement stream and write the edgelist plus dictionary files."""
    dictionary = TermDictionary(seed=seed)
    parse_stats = ParseStats()
    with open(edgelist_path, "w", encoding="utf-8", newline="\n") as sink:
        stats = triples_to_edgelist(
            parse_ntriples(lines, parse_stats), sink, dictionary
        )
    dictionary.write(dictionary_path)
    stats.parse = parse_stats
    return stats


def edgelist_line(subject_hash: int, object_hash: int, predicate_hash: int) -> str:
    return f"{subject_hash:016x} {object_hash:016x} {predicate_hash:016x}"
