"""Turn packed, remote, or foreign-format RDF inputs into N-Triples lines.

Stages: download (URLs fetched to a temp file), unpack (gzip and bzip2
natively, tar and zip archives scanned member by member, anything else via
the configured extractor command), scan (non-RDF archive members are logged
and ignored), convert (serializations other than N-Triples/N-Quads are piped
through the configured converter command). Failures raise
:class:`AcquisitionError` carrying the stage name.
"""

from __future__ import annotations

import bz2
import gzip
import logging
import shlex
import shutil
import subprocess
import tarfile
import tempfile
import urllib.error
import urllib.request
import zipfile
import zlib
from contextlib import ExitStack, contextmanager
from pathlib import Path, PurePosixPath
from typing import IO, Iterator

from .config import Settings
from .manifest import JSON_LD, NOTATION3, NQUADS, NTRIPLES, RDF_XML, TURTLE, is_url, map_media_type

logger = logging.getLogger(__name__)

_SERIALIZATION_EXTS = {
    ".nt": NTRIPLES,
    ".ntriples": NTRIPLES,
    ".nq": NQUADS,
    ".nquads": NQUADS,
    ".ttl": TURTLE,
    ".turtle": TURTLE,
    ".rdf": RDF_XML,
    ".rdfs": RDF_XML,
    ".xml": RDF_XML,
    ".owl": RDF_XML,
    ".n3": NOTATION3,
    ".jsonld": JSON_LD,
}
# Parsed natively; everything else goes through the converter hook.
_NATIVE = {NTRIPLES, NQUADS}
_COMPRESSION_EXTS = {".gz", ".bz2"}

_STREAM_ERRORS = (OSError, EOFError, zlib.error)


class AcquisitionError(RuntimeError):
    """Acquisition failure; ``stage`` names the step that broke."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


def _strip_compression(name: str) -> tuple[str, str | None]:
    suffix = PurePosixPath(name).suffix.lower()
    if suffix in _COMPRESSION_EXTS:
        return name[: -len(suffix)], suffix
    return name, None


def _serialization_for(name: str, hint: str | None) -> str | None:
    inner, _ = _strip_compression(name)
    ext = PurePosixPath(inner).suffix.lower()
    from_ext = _SERIALIZATION_EXTS.get(ext)
    if from_ext is not None:
        return from_ext
    if hint is not None:
        return map_media_type(hint)
    return None


def _iter_lines(fileobj: IO[bytes], context: str) -> Iterator[bytes]:
    try:
        yield from fileobj
    except _STREAM_ERRORS as exc:
        raise AcquisitionError("unpack", f"{context}: {exc}") from None


def _decompressed(fileobj: IO[bytes], compression: str | None, stack: ExitStack) -> IO[bytes]:
    if compression == ".gz":
        return stack.enter_context(gzip.GzipFile(fileobj=fileobj))
    if compression == ".bz2":
        return stack.enter_context(bz2.BZ2File(fileobj))
    return fileobj


def _run_hook(
    command_template: str,
    input_path: Path,
    stage: str,
    stack: ExitStack,
) -> Iterator[bytes]:
    argv = [part.format(input=str(input_path)) for part in shlex.split(command_template)]
    try:
        proc = subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
    except OSError as exc:
        raise AcquisitionError(stage, f"cannot run {argv[0]}: {exc}") from None

    def reap() -> None:
        if proc.poll() is None:
            proc.kill()
            proc.wait()

    stack.callback(reap)

    def lines() -> Iterator[bytes]:
        assert proc.stdout is not None and proc.stderr is not None
        try:
            yield from proc.stdout
            proc.stdout.close()
            stderr_tail = proc.stderr.read()[-500:].decode("utf-8", "replace")
            proc.stderr.close()
            if proc.wait() != 0:
                raise AcquisitionError(
                    stage, f"{argv[0]} exited {proc.returncode}: {stderr_tail.strip()}"
                )
        finally:
            if proc.poll() is None:
                proc.kill()
                proc.wait()

    return lines()


def _materialize(fileobj: IO[bytes], name: str, stack: ExitStack) -> Path:
    """Copy an archive member to a temp file so a hook command can read it."""
    tmpdir = Path(stack.enter_context(tempfile.TemporaryDirectory(prefix="rdftopo-")))
    target = tmpdir / PurePosixPath(name).name
    with open(target, "wb") as sink:
        shutil.copyfileobj(fileobj, sink)
    return target


def _stream_file(
    opener,
    name: str,
    hint: str | None,
    stack: ExitStack,
    settings: Settings,
) -> Iterator[bytes]:
    serialization = _serialization_for(name, hint)
    if serialization is None:
        raise AcquisitionError("scan", f"cannot determine RDF serialization of {name}")
    inner, compression = _strip_compression(name)
    if serialization in _NATIVE:
        fileobj = _decompressed(stack.enter_context(opener()), compression, stack)
        return _iter_lines(fileobj, name)
    if settings.converter_cmd is None:
        raise AcquisitionError(
            "convert", f"{name} is {serialization} and no converter is configured"
        )
    fileobj = _decompressed(stack.enter_context(opener()), compression, stack)
    path = _materialize(fileobj, inner, stack)
    return _run_hook(settings.converter_cmd, path, "convert", stack)


def _member_names_tar(archive: tarfile.TarFile) -> list[tarfile.TarInfo]:
    return [member for member in archive.getmembers() if member.isfile()]


def _stream_archive_members(
    members: list[tuple[str, object]],
    open_member,
    hint: str | None,
    stack: ExitStack,
    settings: Settings,
) -> Iterator[bytes]:
    selected = []
    for name, handle in members:
        if _serialization_for(name, None) is None:
            logger.info("ignoring non-RDF archive member %s", name)
            continue
        selected.append((name, handle))
    if not selected:
        raise AcquisitionError("scan", "archive contains no RDF files")

    def chained() -> Iterator[bytes]:
        for name, handle in selected:
            yield from _stream_file(
                lambda h=handle: open_member(h), name, hint, stack, settings
            )

    return chained()


def _stream_path(
    path: Path,
    hint: str | None,
    stack: ExitStack,
    settings: Settings,
) -> Iterator[bytes]:
    if tarfile.is_tarfile(path):
        try:
            archive = stack.enter_context(tarfile.open(path, "r:*"))
            members = [(m.name, m) for m in _member_names_tar(archive)]
        except (tarfile.TarError, *_STREAM_ERRORS) as exc:
            raise AcquisitionError("unpack", f"{path.name}: {exc}") from None
        return _stream_archive_members(
            members, lambda m: archive.extractfile(m), hint, stack, settings
        )
    if zipfile.is_zipfile(path):
        try:
            archive = stack.enter_context(zipfile.ZipFile(path))
            members = [(i.filename, i) for i in archive.infolist() if not i.is_dir()]
        except (zipfile.BadZipFile, *_STREAM_ERRORS) as exc:
            raise AcquisitionError("unpack", f"{path.name}: {exc}") from None
        return _stream_archive_members(
            members, lambda i: archive.open(i), hint, stack, settings
        )

    serialization = _serialization_for(path.name, hint)
    if serialization is None:
        if settings.extractor_cmd is not None:
            return _run_hook(settings.extractor_cmd, path, "unpack", stack)
        raise AcquisitionError("scan", f"cannot determine format of {path.name}")
    return _stream_file(lambda: open(path, "rb"), path.name, hint, stack, settings)


def _fetch(source: str, stack: ExitStack, settings: Settings) -> Path:
    if not is_url(source):
        path = Path(source)
        if not path.exists():
            raise AcquisitionError("download", f"no such file: {source}")
        return path
    tmpdir = Path(stack.enter_context(tempfile.TemporaryDirectory(prefix="rdftopo-dl-")))
    name = PurePosixPath(source.split("?", 1)[0]).name or "download"
    target = tmpdir / name
    try:
        with urllib.request.urlopen(source, timeout=settings.http_timeout) as response:
            with open(target, "wb") as sink:
                shutil.copyfileobj(response, sink)
    except (urllib.error.URLError, OSError) as exc:
        raise AcquisitionError("download", f"{source}: {exc}") from None
    return target


@contextmanager
def acquire_input(
    source: str | Path,
    format_hint: str | None = None,
    settings: Settings | None = None,
) -> Iterator[Iterator[bytes]]:
    """Context manager yielding a byte-line stream of N-Triples statements.

    ``source`` is a local path or an http(s)/ftp URL; ``format_hint`` is a
    declared media type (or alias) used when the file extension is not
    telling. Temp files and subprocesses live until the context exits, so
    consume the stream inside the ``with`` block.
    """
    if settings is None:
        settings = Settings()
    with ExitStack() as stack:
        yield _stream_path(_fetch(str(source), stack, settings), format_hint, stack, settings)
