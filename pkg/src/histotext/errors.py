"""Typed errors shared by every layer of the toolkit."""

from __future__ import annotations


class CorpusError(Exception):
    """Base class for all toolkit errors."""


# -- corpus store ---------------------------------------------------------

class UnknownCollection(CorpusError):
    pass


class DuplicateCollectionId(CorpusError):
    pass


class DuplicateDocumentId(CorpusError):
    pass


class EmptyText(CorpusError):
    pass


class UnknownDocument(CorpusError):
    pass


class ManifestError(CorpusError):
    """Manifest file is malformed: missing key, unknown key, or bad value."""


class SealedCorpus(CorpusError):
    """Write attempted on a corpus that has been sealed."""


# -- normalization --------------------------------------------------------

class ParseError(CorpusError):
    """A rule, lexicon, or pattern file failed to parse."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateRule(CorpusError):
    pass


# -- grammar / mining -----------------------------------------------------

class LexiconMissing(CorpusError):
    pass


class EmptyCorpus(CorpusError):
    pass


class MissingSeeds(CorpusError):
    def __init__(self, category: str):
        super().__init__(f"no seed list for category {category!r}")
        self.category = category


class EmptySeeds(CorpusError):
    pass


# -- segmentation / serialization -----------------------------------------

class SpanOutOfBounds(CorpusError):
    pass


class InconsistentLayer(CorpusError):
    """A standoff layer references a token that does not exist."""


class MalformedXml(CorpusError):
    pass


class SchemaViolation(CorpusError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations) or "schema violation")
        self.violations = violations


# -- index / query --------------------------------------------------------

class IncompleteLayers(CorpusError):
    def __init__(self, doc_id: str, missing: str):
        super().__init__(f"document {doc_id!r} is missing layer {missing!r}")
        self.doc_id = doc_id
        self.missing = missing


class MalformedQuery(CorpusError):
    pass
