"""Immutable directed multigraph built from a hash-encoded edgelist.

Vertices are the distinct subject/object hashes in first-appearance order;
predicates travel as a per-edge attribute and only become vertices when the
same hash also occurs in subject or object position. Parallel edges and
self-loops are preserved. Adjacency is stored CSR-style in both directions
so degree queries and BFS are array operations.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

MAGIC = b"RTGB"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sQQQQ")  # magic, version, n, m, compressed payload length
_COMPRESSION_LEVEL = 6


class EdgelistFormatError(ValueError):
    """A malformed edgelist line; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class GraphFormatError(ValueError):
    """Unreadable binary graph file (bad magic, version, or truncation)."""


def _csr(index: np.ndarray, order_key: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(order_key, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(order_key, kind="stable")
    return indptr, index[order]


class Graph:
    """Read-only directed multigraph over 64-bit term hashes."""

    __slots__ = (
        "vertex_hashes", "edge_src", "edge_dst", "edge_attr",
        "d_in", "d_out",
        "out_indptr", "out_targets", "in_indptr", "in_sources",
    )

    def __init__(
        self,
        vertex_hashes: np.ndarray,
        edge_src: np.ndarray,
        edge_dst: np.ndarray,
        edge_attr: np.ndarray,
    ):
        n = len(vertex_hashes)
        self.vertex_hashes = np.ascontiguousarray(vertex_hashes, dtype=np.uint64)
        self.edge_src = np.ascontiguousarray(edge_src, dtype=np.int64)
        self.edge_dst = np.ascontiguousarray(edge_dst, dtype=np.int64)
        self.edge_attr = np.ascontiguousarray(edge_attr, dtype=np.uint64)
        if not (len(self.edge_src) == len(self.edge_dst) == len(self.edge_attr)):
            raise ValueError("edge arrays must have equal length")
        if len(self.edge_src):
            endpoints = np.concatenate([self.edge_src, self.edge_dst])
            if endpoints.min() < 0 or endpoints.max() >= n:
                raise ValueError("edge endpoint out of vertex range")
        self.d_out = np.bincount(self.edge_src, minlength=n).astype(np.int64)
        self.d_in = np.bincount(self.edge_dst, minlength=n).astype(np.int64)
        self.out_indptr, self.out_targets = _csr(self.edge_dst, self.edge_src, n)
        self.in_indptr, self.in_sources = _csr(self.edge_src, self.edge_dst, n)
        for name in self.__slots__:
            getattr(self, name).flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.vertex_hashes)

    @property
    def m(self) -> int:
        return len(self.edge_src)

    def out_neighbors(self, vertex: int) -> np.ndarray:
        return self.out_targets[self.out_indptr[vertex] : self.out_indptr[vertex + 1]]

    def in_neighbors(self, vertex: int) -> np.ndarray:
        return self.in_sources[self.in_indptr[vertex] : self.in_indptr[vertex + 1]]

    def total_degrees(self) -> np.ndarray:
        return self.d_in + self.d_out

    def same_structure(self, other: "Graph") -> bool:
        return (
            np.array_equal(self.vertex_hashes, other.vertex_hashes)
            and np.array_equal(self.edge_src, other.edge_src)
            and np.array_equal(self.edge_dst, other.edge_dst)
            and np.array_equal(self.edge_attr, other.edge_attr)
        )


def build_graph(source: Path | str | Iterable[str]) -> Graph:
    """Construct a Graph from edgelist lines (path or iterable of text lines).

    Vertex indices are assigned by first appearance of each subject/object
    hash, making construction deterministic for identical input bytes.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="\n") as handle:
            return _build(handle)
    return _build(source)


def _build(lines: Iterator[str]) -> Graph:
    index: dict[int, int] = {}
    hashes: list[int] = []
    src: list[int] = []
    dst: list[int] = []
    attr: list[int] = []
    for lineno, line in enumerate(lines, 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise EdgelistFormatError(lineno, f"expected 3 fields, got {len(parts)}")
        if len(parts[0]) != 16 or len(parts[1]) != 16 or len(parts[2]) != 16:
            raise EdgelistFormatError(lineno, "fields must be 16 hex chars")
        try:
            s_hash = int(parts[0], 16)
            o_hash = int(parts[1], 16)
            p_hash = int(parts[2], 16)
        except ValueError:
            raise EdgelistFormatError(lineno, "fields must be hexadecimal") from None
        if s_hash < 0 or o_hash < 0 or p_hash < 0:
            raise EdgelistFormatError(lineno, "fields must be unsigned")
        s_index = index.get(s_hash)
        if s_index is None:
            s_index = index[s_hash] = len(hashes)
            hashes.append(s_hash)
        o_index = index.get(o_hash)
        if o_index is None:
            o_index = index[o_hash] = len(hashes)
            hashes.append(o_hash)
        src.append(s_index)
        dst.append(o_index)
        attr.append(p_hash)
    return Graph(
        np.array(hashes, dtype=np.uint64),
        np.array(src, dtype=np.int64),
        np.array(dst, dtype=np.int64),
        np.array(attr, dtype=np.uint64),
    )


def save_binary(graph: Graph, path: Path | str) -> None:
    """Persist as magic + header + zlib payload, all integers little-endian u64."""
    payload = b"".join(
        arr.astype("<u8").tobytes()
        for arr in (graph.vertex_hashes, graph.edge_src, graph.edge_dst, graph.edge_attr)
    )
    compressed = zlib.compress(payload, _COMPRESSION_LEVEL)
    with open(path, "wb") as sink:
        sink.write(_HEADER.pack(MAGIC, FORMAT_VERSION, graph.n, graph.m, len(compressed)))
        sink.write(compressed)


def load_binary(path: Path | str) -> Graph:
    with open(path, "rb") as source:
        header = source.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise GraphFormatError(f"{path}: truncated header")
        magic, version, n, m, compressed_len = _HEADER.unpack(header)
        if magic != MAGIC:
            raise GraphFormatError(f"{path}: not a graph file")
        if version != FORMAT_VERSION:
            raise GraphFormatError(f"{path}: unsupported version {version}")
        compressed = source.read(compressed_len)
    if len(compressed) != compressed_len:
        raise GraphFormatError(f"{path}: truncated payload")
    try:
        payload = zlib.decompress(compressed)
    except zlib.error as exc:
        raise GraphFormatError(f"{path}: corrupt payload: {exc}") from None
    expected = (n + 3 * m) * 8
    if len(payload) != expected:
        raise GraphFormatError(f"{path}: payload size mismatch")
    raw = np.frombuffer(payload, dtype="<u8")
    vertex_hashes = raw[:n]
    edge_src = raw[n : n + m].astype(np.int64)
    edge_dst = raw[n + m : n + 2 * m].astype(np.int64)
    edge_attr = raw[n + 2 * m :]
    return Graph(vertex_hashes, edge_src, edge_dst, edge_attr)
