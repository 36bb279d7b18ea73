"""Streaming N-Triples / N-Quads parsing and serialization.

The parser is line-oriented and fault tolerant: public RDF dumps are full of
syntax errors, so malformed lines are counted and skipped instead of aborting
the run. Quad statements are accepted and their graph label is dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

# Term lexemes. Blank node labels may contain dots but cannot end with one,
# which lets the statement-final dot bind even without a separating space.
# IRIs take the banned characters only in \uXXXX / \UXXXXXXXX form.
_IRIREF = r'<(?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>'
_BNODE = r"_:[A-Za-z0-9](?:[A-Za-z0-9._:\-]*[A-Za-z0-9_:\-])?"
_LITERAL = (
    r'"(?:[^"\\\n\r]|\\.)*"'
    r"(?:\^\^" + _IRIREF + r"|@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)?"
)

_STATEMENT = re.compile(
    r"[ \t]*"
    r"(?P<subject>" + _IRIREF + "|" + _BNODE + r")[ \t]+"
    r"(?P<predicate>" + _IRIREF + r")[ \t]+"
    r"(?P<object>" + _IRIREF + "|" + _BNODE + "|" + _LITERAL + r")"
    r"(?:[ \t]+(?P<graph>" + _IRIREF + "|" + _BNODE + r"))?"
    r"[ \t]*\.[ \t]*(?:#.*)?$"
)

_LITERAL_PARTS = re.compile(
    r'"(?P<lex>(?:[^"\\\n\r]|\\.)*)"'
    r"(?:\^\^<(?P<datatype>[^>]*)>|@(?P<lang>[a-zA-Z]+(?:-[a-zA-Z0-9]+)*))?$"
)

_ECHAR_DECODE = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}
_ECHAR_ENCODE = {
    "\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t",
}
_ESCAPE_SEQ = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")
# Characters that may not appear raw inside an IRIREF.
_IRI_BAD = re.compile(r'[\x00-\x20<>"{}|^`\\]')


class ParseError(ValueError):
    """A line that does not match the statement grammar."""


@dataclass(frozen=True)
class Term:
    """One RDF term: an IRI, a blank node, or a literal.

    ``value`` holds the IRI string (without angle brackets), the blank node
    label (without the ``_:`` prefix), or the unescaped lexical form of a
    literal. ``nt()`` renders the canonical N-Triples surface form.
    """

    kind: str
    value: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self) -> None:
        if self.kind != LITERAL and (self.datatype or self.language):
            raise ValueError(f"{self.kind} terms carry no datatype or language")
        if self.datatype is not None and self.language is not None:
            raise ValueError("a literal has either a language tag or a datatype")

    def nt(self) -> str:
        if self.kind == IRI:
            return "<" + _escape_iri(self.value) + ">"
        if self.kind == BLANK:
            return "_:" + self.value
        out = '"' + _escape_literal(self.value) + '"'
        if self.language is not None:
            return out + "@" + self.language
        if self.datatype is not None:
            return out + "^^<" + _escape_iri(self.datatype) + ">"
        return out


def iri(value: str) -> Term:
    return Term(IRI, value)


def blank(label: str) -> Term:
    return Term(BLANK, label)


def literal(value: str, datatype: str | None = None, language: str | None = None) -> Term:
    return Term(LITERAL, value, datatype=datatype, language=language)


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if self.subject.kind == LITERAL:
            raise ValueError("triple subject cannot be a literal")
        if self.predicate.kind != IRI:
            raise ValueError("triple predicate must be an IRI")

    def nt(self) -> str:
        return f"{self.subject.nt()} {self.predicate.nt()} {self.object.nt()} ."


@dataclass
class ParseStats:
    """Line accounting for one parsed stream."""

    valid: int = 0
    skipped: int = 0
    malformed: int = 0

    @property
    def total(self) -> int:
        return self.valid + self.skipped + self.malformed


def _unescape(text: str) -> str:
    if "\\" not in text:
        return text

    def repl(match: re.Match) -> str:
        u4, u8, ch = match.groups()
        if u4 is not None:
            return chr(int(u4, 16))
        if u8 is not None:
            return chr(int(u8, 16))
        decoded = _ECHAR_DECODE.get(ch)
        if decoded is None:
            raise ParseError(f"invalid escape \\{ch}")
        return decoded

    return _ESCAPE_SEQ.sub(repl, text)


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        esc = _ECHAR_ENCODE.get(ch)
        if esc is not None:
            out.append(esc)
        elif ch < "\x20":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _escape_iri(text: str) -> str:
    return _IRI_BAD.sub(lambda m: f"\\u{ord(m.group(0)):04X}", text)


def _parse_term(lexeme: str) -> Term:
    if lexeme.startswith("<"):
        return Term(IRI, _unescape(lexeme[1:-1]))
    if lexeme.startswith("_:"):
        return Term(BLANK, lexeme[2:])
    parts = _LITERAL_PARTS.match(lexeme)
    if parts is None:
        raise ParseError(f"bad literal: {lexeme}")
    datatype = parts.group("datatype")
    return Term(
        LITERAL,
        _unescape(parts.group("lex")),
        datatype=_unescape(datatype) if datatype is not None else None,
        language=parts.group("lang"),
    )


def parse_line(line: str) -> Triple | None:
    """Parse one statement line; None for comment/blank, ParseError if malformed."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    match = _STATEMENT.match(line.rstrip("\r\n"))
    if match is None:
        raise ParseError(f"not a statement: {stripped[:80]}")
    return Triple(
        _parse_term(match.group("subject")),
        _parse_term(match.group("predicate")),
        _parse_term(match.group("object")),
    )


def parse_ntriples(
    lines: Iterable[bytes | str],
    stats: ParseStats | None = None,
) -> Iterator[Triple]:
    """Yield triples from a line stream, skipping and counting bad lines.

    ``lines`` may yield ``bytes`` (decoded as UTF-8 per line, so one bad line
    cannot kill the stream) or already-decoded ``str``. Pass a ``ParseStats``
    to collect the valid/skipped/malformed counts while consuming.
    """
    if stats is None:
        stats = ParseStats()
    for raw in lines:
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                stats.malformed += 1
                continue
        else:
            line = raw
        try:
            triple = parse_line(line)
        except ParseError:
            stats.malformed += 1
            continue
        if triple is None:
            stats.skipped += 1
        else:
            stats.valid += 1
            yield triple
