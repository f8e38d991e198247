"""On-disk corpus store: collections, documents, and sidecar manifests.

Layout is one directory per collection under the corpus root, one pair of
files per document (`<id>.txt` with the raw transcription, `<id>.manifest`
with flat key-value metadata), plus a `collections.tsv` registry.  Raw text
is immutable after ingestion; all later stages write derived sidecars next
to it.  A `.sealed` marker freezes the corpus for read-only serving.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DuplicateCollectionId,
    DuplicateDocumentId,
    EmptyText,
    ManifestError,
    SealedCorpus,
    UnknownCollection,
    UnknownDocument,
)

SOURCE_KINDS = ("labour_court_minutes", "worker_press", "monograph", "other")
CORPUS_ROLES = ("consultation", "acquisition")

MANIFEST_KEYS = ("id", "collection_id", "title", "date", "provenance", "page_breaks")


@dataclass(frozen=True)
class Collection:
    id: str
    label: str
    source_kind: str = "other"
    corpus_role: str = "consultation"

    def __post_init__(self) -> None:
        if self.source_kind not in SOURCE_KINDS:
            raise ManifestError(f"unknown source_kind {self.source_kind!r}")
        if self.corpus_role not in CORPUS_ROLES:
            raise ManifestError(f"unknown corpus_role {self.corpus_role!r}")


@dataclass(frozen=True)
class Manifest:
    """Per-document metadata record; every key present, unknown keys rejected."""

    id: str
    collection_id: str
    title: str
    date: str | None = None
    provenance: str | None = None
    page_breaks: tuple[int, ...] = ()


@dataclass(frozen=True)
class Document:
    id: str
    collection_id: str
    title: str
    date: str | None
    raw_text: str
    provenance: str | None
    page_breaks: tuple[int, ...] = ()


@dataclass(frozen=True)
class DocumentRef:
    id: str
    title: str
    date: str | None


def parse_manifest(text: str) -> Manifest:
    """Parse a flat `key: value` manifest file.

    Every known key must be present (use `null` or an empty value for
    missing dates/provenance); unknown keys are rejected.
    """
    values: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ManifestError(f"line {line_no}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in MANIFEST_KEYS:
            raise ManifestError(f"line {line_no}: unknown key {key!r}")
        if key in values:
            raise ManifestError(f"line {line_no}: duplicate key {key!r}")
        values[key] = value.strip()
    missing = [k for k in MANIFEST_KEYS if k not in values]
    if missing:
        raise ManifestError(f"missing keys: {', '.join(missing)}")

    def opt(key: str) -> str | None:
        v = values[key]
        return None if v in ("", "null") else v

    breaks_raw = values["page_breaks"]
    breaks: tuple[int, ...] = ()
    if breaks_raw not in ("", "null"):
        try:
            breaks = tuple(int(p) for p in breaks_raw.split(","))
        except ValueError as exc:
            raise ManifestError(f"bad page_breaks {breaks_raw!r}") from exc
    for k in ("id", "collection_id", "title"):
        if not values[k] or values[k] == "null":
            raise ManifestError(f"key {k!r} must not be empty")
    return Manifest(
        id=values["id"],
        collection_id=values["collection_id"],
        title=values["title"],
        date=opt("date"),
        provenance=opt("provenance"),
        page_breaks=breaks,
    )


def format_manifest(m: Manifest) -> str:
    lines = [
        f"id: {m.id}",
        f"collection_id: {m.collection_id}",
        f"title: {m.title}",
        f"date: {m.date if m.date is not None else 'null'}",
        f"provenance: {m.provenance if m.provenance is not None else 'null'}",
        f"page_breaks: {','.join(str(p) for p in m.page_breaks)}",
    ]
    return "\n".join(lines) + "\n"


@dataclass
class CorpusStore:
    """Append-only document store rooted at a corpus directory."""

    root: Path
    _collections: dict[str, Collection] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.root = Path(self.root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._load_registry()

    # -- registry ----------------------------------------------------------

    @property
    def _registry_path(self) -> Path:
        return self.root / "collections.tsv"

    def _load_registry(self) -> None:
        self._collections = {}
        if not self._registry_path.exists():
            return
        for line in self._registry_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            cid, label, kind, role = line.split("\t")
            self._collections[cid] = Collection(cid, label, kind, role)

    def _save_registry(self) -> None:
        lines = [
            f"{c.id}\t{c.label}\t{c.source_kind}\t{c.corpus_role}"
            for c in sorted(self._collections.values(), key=lambda c: c.id)
        ]
        self._registry_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    # -- sealing -----------------------------------------------------------

    @property
    def is_sealed(self) -> bool:
        return (self.root / ".sealed").exists()

    def seal(self) -> None:
        (self.root / ".sealed").write_text("sealed\n", encoding="utf-8")

    def _check_writable(self) -> None:
        if self.is_sealed:
            raise SealedCorpus(f"corpus at {self.root} is sealed")

    # -- collections -------------------------------------------------------

    def add_collection(self, collection: Collection) -> None:
        self._check_writable()
        if collection.id in self._collections:
            raise DuplicateCollectionId(collection.id)
        self._collections[collection.id] = collection
        (self.root / collection.id).mkdir(exist_ok=True)
        self._save_registry()

    def collections(self) -> list[Collection]:
        return sorted(self._collections.values(), key=lambda c: c.id)

    def get_collection(self, collection_id: str) -> Collection:
        try:
            return self._collections[collection_id]
        except KeyError:
            raise UnknownCollection(collection_id) from None

    # -- documents ---------------------------------------------------------

    def ingest_document(self, raw_text: str, manifest: Manifest) -> str:
        """Persist a document; returns its id. Never overwrites silently."""
        self._check_writable()
        if manifest.collection_id not in self._collections:
            raise UnknownCollection(manifest.collection_id)
        if not raw_text:
            raise EmptyText(manifest.id)
        n_bytes = len(raw_text.encode("utf-8"))
        last = -1
        for offset in manifest.page_breaks:
            if offset <= last or offset >= n_bytes:
                raise ManifestError(
                    f"page_breaks must be strictly increasing and < {n_bytes}"
                )
            last = offset
        text_path = self._doc_path(manifest.collection_id, manifest.id, ".txt")
        if text_path.exists() or self._find_doc(manifest.id) is not None:
            raise DuplicateDocumentId(manifest.id)
        text_path.write_bytes(raw_text.encode("utf-8"))
        manifest_path = self._doc_path(manifest.collection_id, manifest.id, ".manifest")
        manifest_path.write_text(format_manifest(manifest), encoding="utf-8")
        return manifest.id

    def _doc_path(self, collection_id: str, doc_id: str, suffix: str) -> Path:
        return self.root / collection_id / f"{doc_id}{suffix}"

    def _find_doc(self, doc_id: str) -> str | None:
        """Return the collection id holding `doc_id`, or None."""
        for cid in self._collections:
            if (self.root / cid / f"{doc_id}.manifest").exists():
                return cid
        return None

    def list_collection(self, collection_id: str) -> list[DocumentRef]:
        """Refs for every document, sorted by (date, id); dateless docs last."""
        if collection_id not in self._collections:
            raise UnknownCollection(collection_id)
        refs = []
        for path in sorted((self.root / collection_id).glob("*.manifest")):
            m = parse_manifest(path.read_text(encoding="utf-8"))
            refs.append(DocumentRef(id=m.id, title=m.title, date=m.date))
        refs.sort(key=lambda r: (r.date is None, r.date or "", r.id))
        return refs

    def get_document(self, doc_id: str) -> Document:
        cid = self._find_doc(doc_id)
        if cid is None:
            raise UnknownDocument(doc_id)
        manifest = parse_manifest(
            self._doc_path(cid, doc_id, ".manifest").read_text(encoding="utf-8")
        )
        raw_text = self._doc_path(cid, doc_id, ".txt").read_bytes().decode("utf-8")
        return Document(
            id=manifest.id,
            collection_id=cid,
            title=manifest.title,
            date=manifest.date,
            raw_text=raw_text,
            provenance=manifest.provenance,
            page_breaks=manifest.page_breaks,
        )

    def document_ids(self) -> list[str]:
        """All document ids across collections, sorted."""
        ids = []
        for cid in self._collections:
            for path in (self.root / cid).glob("*.manifest"):
                ids.append(path.name[: -len(".manifest")])
        return sorted(ids)

    # -- sidecars (derived layers live next to the raw text) ---------------

    def sidecar_path(self, doc_id: str, suffix: str) -> Path:
        cid = self._find_doc(doc_id)
        if cid is None:
            raise UnknownDocument(doc_id)
        return self._doc_path(cid, doc_id, suffix)

    def write_sidecar(self, doc_id: str, suffix: str, content: str) -> Path:
        self._check_writable()
        path = self.sidecar_path(doc_id, suffix)
        path.write_text(content, encoding="utf-8")
        return path

    def read_sidecar(self, doc_id: str, suffix: str) -> str | None:
        path = self.sidecar_path(doc_id, suffix)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")
