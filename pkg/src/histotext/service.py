"""Read-only consultation service over a sealed corpus.

JSON-over-HTTP contract (version 1), consumed by the bundled web client
and documented in docs/api.md:

* ``GET /collections``          — collection registry with document counts
* ``GET /documents/{id}``       — normalized text plus every layer
* ``GET /search``               — KWIC concordance over annotations
* ``GET /stats``                — corpus statistics report
* ``GET /network/{node}``       — semantic network neighborhood

Every endpoint is deterministic for a sealed corpus and nothing mutates
the index.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import MalformedQuery
from .index import (
    DEFAULT_KWIC_WINDOW,
    CorpusIndex,
    Query,
    compute_stats,
    network_neighborhood,
    search,
)
from .pipeline import PipelineConfig, run_pipeline
from .store import CorpusStore

API_VERSION = "1"


class ServiceInfo(BaseModel):
    name: str = "histotext"
    api_version: str = API_VERSION


class CollectionOut(BaseModel):
    id: str
    label: str
    source_kind: str
    corpus_role: str
    documents: int


class TokenOut(BaseModel):
    index: int
    start: int
    end: int
    surface: str
    word: bool


class SentenceOut(BaseModel):
    index: int
    start: int
    end: int
    first_token: int
    last_token: int


class EntityOut(BaseModel):
    mention_id: str
    sentence: int
    start: int
    end: int
    surface: str
    etype: str
    gender: str
    source: str
    record_id: str | None = None
    iso_value: str | None = None


class ConceptOut(BaseModel):
    sentence: int
    start: int
    end: int
    category: str
    member: str
    cluster: str


class RelationOut(BaseModel):
    relation_id: str
    sentence: int
    predicate: str
    arguments: dict[str, str]


class DocumentOut(BaseModel):
    id: str
    collection: str
    title: str
    date: str | None
    text: str
    tokens: list[TokenOut]
    sentences: list[SentenceOut]
    entities: list[EntityOut]
    concepts: list[ConceptOut]
    relations: list[RelationOut]


class KwicHit(BaseModel):
    doc_id: str
    sentence: int
    left: str
    match: str
    right: str
    start: int
    end: int


class SearchOut(BaseModel):
    total: int
    unknown_key: bool
    query: dict
    hits: list[KwicHit]


class StatsOut(BaseModel):
    counters: dict[str, int]
    entity_distribution: dict[str, int]
    concept_distribution: dict[str, int]
    representative_concepts: dict[str, list[tuple[str, int]]]
    gender_distribution: dict


class EdgeOut(BaseModel):
    source: str
    target: str
    label: str
    weight: int


class NetworkOut(BaseModel):
    node: str
    known: bool
    edges: list[EdgeOut]


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def create_app(
    corpus_dir: Path | str,
    config: PipelineConfig | None = None,
    ui_dir: Path | str | None = None,
) -> FastAPI:
    """Build the service over a sealed corpus directory."""
    store = CorpusStore(Path(corpus_dir))
    if not store.is_sealed:
        raise RuntimeError(f"corpus at {corpus_dir} is not sealed; run `histotext seal` first")
    result = run_pipeline(store, config)
    index: CorpusIndex = result.build_index()
    documents = result.documents

    app = FastAPI(title="histotext consultation service", version=API_VERSION)

    @app.get("/", response_model=ServiceInfo)
    def info() -> ServiceInfo:
        return ServiceInfo()

    @app.get("/collections", response_model=list[CollectionOut])
    def collections() -> list[CollectionOut]:
        return [
            CollectionOut(id=cid, **payload)
            for cid, payload in sorted(index.collections.items())
        ]

    @app.get("/documents/{doc_id}", response_model=DocumentOut)
    def document(doc_id: str) -> DocumentOut:
        doc = documents.get(doc_id)
        if doc is None:
            raise _error(404, "unknown_document", f"no document {doc_id!r}")
        record_of = {}
        for r in doc.entity_records:
            for mid in r.mention_ids:
                record_of[mid] = r.record_id
        return DocumentOut(
            id=doc.doc_id,
            collection=doc.collection_id,
            title=doc.title,
            date=doc.date,
            text=doc.normalized,
            tokens=[
                TokenOut(index=t.index, start=t.span[0], end=t.span[1],
                         surface=t.surface, word=t.is_word)
                for t in doc.tokens
            ],
            sentences=[
                SentenceOut(index=s.index, start=s.span[0], end=s.span[1],
                            first_token=s.token_range[0], last_token=s.token_range[1])
                for s in doc.sentences
            ],
            entities=[
                EntityOut(
                    mention_id=m.mention_id, sentence=m.sentence_index,
                    start=m.span[0], end=m.span[1], surface=m.surface,
                    etype=m.etype, gender=m.gender, source=m.source,
                    record_id=record_of.get(m.mention_id), iso_value=m.iso_value,
                )
                for m in doc.entity_mentions
            ],
            concepts=[
                ConceptOut(sentence=c.sentence_index, start=c.span[0], end=c.span[1],
                           category=c.category, member=c.matched_member, cluster=c.concept_id)
                for c in doc.concept_mentions
            ],
            relations=[
                RelationOut(relation_id=r.relation_id, sentence=r.sentence_index,
                            predicate=r.predicate, arguments=r.arguments)
                for r in doc.relations
            ],
        )

    @app.get("/search", response_model=SearchOut)
    def search_endpoint(
        kind: str,
        key: str | None = None,
        collection: str | None = None,
        date_from: str | None = None,
        date_to: str | None = None,
        gender: str | None = None,
        category: str | None = None,
        window: int = DEFAULT_KWIC_WINDOW,
        offset: int = 0,
        limit: int | None = None,
    ) -> SearchOut:
        query = Query(
            kind=kind, key=key, collection=collection,
            date_from=date_from, date_to=date_to,
            gender=gender, category=category,
            kwic_window=window, offset=offset, limit=limit,
        )
        try:
            result_ = search(index, query)
        except MalformedQuery as exc:
            raise _error(422, "malformed_query", str(exc)) from None
        return SearchOut(
            total=result_.total,
            unknown_key=result_.unknown_key,
            query={
                "kind": kind, "key": key, "collection": collection,
                "date_from": date_from, "date_to": date_to,
                "gender": gender, "category": category,
                "window": window, "offset": offset, "limit": limit,
            },
            hits=[
                KwicHit(doc_id=h.doc_id, sentence=h.sentence_index, left=h.left,
                        match=h.match, right=h.right, start=h.span[0], end=h.span[1])
                for h in result_.hits
            ],
        )

    @app.get("/stats", response_model=StatsOut)
    def stats() -> StatsOut:
        report = compute_stats(index)
        return StatsOut(
            counters=report.counters,
            entity_distribution=report.entity_distribution,
            concept_distribution=report.concept_distribution,
            representative_concepts=report.representative_concepts,
            gender_distribution=report.gender_distribution,
        )

    @app.get("/network/{node}", response_model=NetworkOut)
    def network(node: str) -> NetworkOut:
        known, edges = network_neighborhood(index, node)
        return NetworkOut(
            node=node,
            known=known,
            edges=[EdgeOut(source=e.source, target=e.target, label=e.label, weight=e.weight)
                   for e in edges],
        )

    if ui_dir is None:
        ui_dir = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    ui_dir = Path(ui_dir)
    if ui_dir.exists():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
