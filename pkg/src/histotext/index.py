"""Immutable annotation index, corpus statistics, and KWIC search.

The index is a plain postings structure over the annotated corpus:
every lemma, concept mention, entity mention, and relation predicate maps
to a sorted list of (document, sentence, byte span) postings.  Search is
exact-match annotation retrieval with collection / date-range / gender
filters and keyword-in-context output; results follow one canonical order
(doc id, sentence index, span start) so a linear scan oracle can check
them verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

from .entities import ENTITY_TYPES, GENDERS, GenderLexicon, attribute_gender
from .errors import IncompleteLayers, MalformedQuery
from .relations import NetworkEdge, SemanticNetwork, build_network
from .tei import TeiBundle

QUERY_KINDS = ("concept", "entity", "lemma", "relation")
DEFAULT_KWIC_WINDOW = 8


@dataclass(frozen=True)
class Posting:
    doc_id: str
    sentence_index: int
    span: tuple[int, int]
    category: str | None = None   # concept category or entity type
    gender: str = "unknown"
    key: str = ""                 # member / surface / lemma / predicate

    def sort_key(self):
        return (self.doc_id, self.sentence_index, self.span[0], self.span[1], self.key)


@dataclass
class DocumentLayers:
    bundle: TeiBundle
    lemmas: list[str]  # one lemma per token (surface-lower fallback)

    def check(self) -> None:
        doc_id = self.bundle.doc_id
        if not self.bundle.normalized_text:
            raise IncompleteLayers(doc_id, "normalized_text")
        if self.bundle.tokens is None or not self.bundle.sentences:
            raise IncompleteLayers(doc_id, "tokens/sentences")
        if len(self.lemmas) != len(self.bundle.tokens):
            raise IncompleteLayers(doc_id, "lemmas")


@dataclass(frozen=True)
class Query:
    kind: str
    key: str | None = None
    collection: str | None = None
    date_from: str | None = None
    date_to: str | None = None
    gender: str | None = None
    category: str | None = None
    kwic_window: int = DEFAULT_KWIC_WINDOW
    offset: int = 0
    limit: int | None = None


@dataclass(frozen=True)
class KwicLine:
    doc_id: str
    sentence_index: int
    left: str
    match: str
    right: str
    span: tuple[int, int]


@dataclass
class QueryResult:
    total: int
    hits: list[KwicLine]
    unknown_key: bool = False


@dataclass
class DocRow:
    doc_id: str
    collection_id: str
    title: str
    date: str | None
    text: str
    token_spans: list[tuple[int, int]]
    token_surfaces: list[str]
    n_sentences: int


@dataclass
class CorpusIndex:
    docs: dict[str, DocRow] = field(default_factory=dict)
    postings: dict[str, list[Posting]] = field(default_factory=dict)
    kind_postings: dict[str, list[Posting]] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    network: SemanticNetwork = field(default_factory=lambda: SemanticNetwork([], []))
    collections: dict[str, dict] = field(default_factory=dict)

    def to_json(self) -> str:
        data = {
            "counters": self.counters,
            "collections": self.collections,
            "docs": {
                d: {
                    "collection_id": row.collection_id,
                    "title": row.title,
                    "date": row.date,
                    "n_sentences": row.n_sentences,
                    "n_tokens": len(row.token_spans),
                }
                for d, row in self.docs.items()
            },
            "postings": {
                key: [asdict(p) for p in plist]
                for key, plist in self.postings.items()
            },
            "network": {
                "nodes": self.network.nodes,
                "edges": [asdict(e) for e in self.network.edges],
            },
        }
        return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=1)


def build_index(
    docs: list[DocumentLayers],
    gender_lexicon: GenderLexicon | None = None,
    collections: dict[str, dict] | None = None,
) -> CorpusIndex:
    """Build the immutable index; counters are exact by construction."""
    gender_lexicon = gender_lexicon or GenderLexicon({})
    index = CorpusIndex(collections=collections or {})
    counters = {"documents": 0, "sentences": 0, "tokens": 0, "entities": 0, "concepts": 0}
    relations_all = []

    def post(key: str, kind: str, posting: Posting) -> None:
        index.postings.setdefault(key, []).append(posting)
        index.kind_postings.setdefault(kind, []).append(posting)

    for layers in sorted(docs, key=lambda d: d.bundle.doc_id):
        layers.check()
        bundle = layers.bundle
        doc_id = bundle.doc_id
        counters["documents"] += 1
        counters["sentences"] += len(bundle.sentences)
        counters["tokens"] += len(bundle.tokens)
        index.docs[doc_id] = DocRow(
            doc_id=doc_id,
            collection_id=bundle.collection_id,
            title=bundle.title,
            date=bundle.date,
            text=bundle.normalized_text,
            token_spans=[t.span for t in bundle.tokens],
            token_surfaces=[t.surface for t in bundle.tokens],
            n_sentences=len(bundle.sentences),
        )

        sentence_of_token = {}
        for s in bundle.sentences:
            for ti in range(s.token_range[0], s.token_range[1] + 1):
                sentence_of_token[ti] = s.index

        for token, lemma in zip(bundle.tokens, layers.lemmas):
            if token.is_word:
                post(
                    f"lemma:{lemma.lower()}",
                    "lemma",
                    Posting(doc_id, sentence_of_token.get(token.index, 0),
                            token.span, None, "unknown", lemma.lower()),
                )

        record_gender = {}
        for r in bundle.entity_records:
            for mid in r.mention_ids:
                record_gender[mid] = r.gender
        for m in bundle.entity_mentions:
            counters["entities"] += 1
            gender = record_gender.get(m.mention_id, m.gender)
            posting = Posting(doc_id, m.sentence_index, m.span, m.etype,
                              gender, m.surface.lower())
            post(f"entity:{m.surface.lower()}", "entity", posting)
            post(f"entity_type:{m.etype}", "entity_type", posting)

        for c in bundle.concept_mentions:
            counters["concepts"] += 1
            gender = attribute_gender(c.matched_member, gender_lexicon)
            posting = Posting(doc_id, c.sentence_index, c.span, c.category,
                              gender, c.matched_member.lower())
            post(f"concept:{c.matched_member.lower()}", "concept", posting)

        lemma_lower = [l.lower() for l in layers.lemmas]
        for rel in bundle.relations:
            span = _predicate_span(bundle, lemma_lower, rel.sentence_index, rel.predicate)
            posting = Posting(doc_id, rel.sentence_index, span, None, "unknown",
                              rel.predicate.lower())
            post(f"relation:{rel.predicate.lower()}", "relation", posting)
            relations_all.append(rel)

    for plist in index.postings.values():
        plist.sort(key=Posting.sort_key)
    for plist in index.kind_postings.values():
        plist.sort(key=Posting.sort_key)
    index.counters = counters
    relations_all.sort(key=lambda r: (r.doc_id, r.sentence_index, r.relation_id))
    index.network = build_network(relations_all)
    return index


def _predicate_span(bundle: TeiBundle, lemmas: list[str], sentence_index: int, predicate: str) -> tuple[int, int]:
    s = bundle.sentences[sentence_index]
    for ti in range(s.token_range[0], s.token_range[1] + 1):
        if lemmas[ti] == predicate.lower():
            return bundle.tokens[ti].span
    return s.span


@dataclass
class StatsReport:
    entity_distribution: dict[str, int]
    concept_distribution: dict[str, int]
    representative_concepts: dict[str, list[tuple[str, int]]]
    gender_distribution: dict
    counters: dict[str, int]


def compute_stats(index: CorpusIndex, top_k: int = 5) -> StatsReport:
    """Exact distributions over the indexed mentions."""
    entity_distribution: dict[str, int] = {}
    for etype in ENTITY_TYPES:
        hits = index.postings.get(f"entity_type:{etype}", [])
        if hits:
            entity_distribution[etype] = len(hits)

    concept_distribution: dict[str, int] = {}
    member_counts: dict[str, dict[str, int]] = {}
    gender_by_member: dict[str, dict[str, dict[str, int]]] = {}
    for posting in index.kind_postings.get("concept", []):
        category = posting.category or ""
        concept_distribution[category] = concept_distribution.get(category, 0) + 1
        member_counts.setdefault(category, {})
        member_counts[category][posting.key] = member_counts[category].get(posting.key, 0) + 1
        gender_by_member.setdefault(category, {}).setdefault(posting.key, {})
        g = gender_by_member[category][posting.key]
        g[posting.gender] = g.get(posting.gender, 0) + 1

    representative = {
        category: sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
        for category, counts in sorted(member_counts.items())
    }

    entity_gender: dict[str, dict[str, int]] = {}
    for etype in ENTITY_TYPES:
        counts = {g: 0 for g in GENDERS}
        for posting in index.postings.get(f"entity_type:{etype}", []):
            counts[posting.gender] = counts.get(posting.gender, 0) + 1
        if any(counts.values()):
            entity_gender[etype] = counts
    agent_members = gender_by_member.get("agent", {})
    agent_totals = {g: 0 for g in GENDERS}
    for member, counts in agent_members.items():
        for g, n in counts.items():
            agent_totals[g] = agent_totals.get(g, 0) + n

    return StatsReport(
        entity_distribution=entity_distribution,
        concept_distribution=concept_distribution,
        representative_concepts=representative,
        gender_distribution={
            "entities": entity_gender,
            "agent_concepts": {m: dict(sorted(c.items())) for m, c in sorted(agent_members.items())},
            "agent_totals": agent_totals,
        },
        counters=dict(index.counters),
    )


def search(index: CorpusIndex, query: Query) -> QueryResult:
    """Exact-match retrieval; equals a linear scan under the same filters."""
    _validate_query(query)
    postings, unknown = _resolve(index, query)
    filtered = [p for p in postings if _passes(index, query, p)]
    filtered.sort(key=Posting.sort_key)
    total = len(filtered)
    window = filtered[query.offset:]
    if query.limit is not None:
        window = window[: query.limit]
    hits = [_kwic(index, p, query.kwic_window) for p in window]
    return QueryResult(total=total, hits=hits, unknown_key=unknown)


def _validate_query(query: Query) -> None:
    if query.kind not in QUERY_KINDS:
        raise MalformedQuery(f"unknown kind {query.kind!r}")
    if query.kwic_window < 0:
        raise MalformedQuery("kwic_window must be >= 0")
    if query.offset < 0 or (query.limit is not None and query.limit < 0):
        raise MalformedQuery("offset/limit must be >= 0")
    if query.kind == "lemma" and not query.key:
        raise MalformedQuery("lemma queries require a key")
    if query.gender is not None:
        if query.gender not in GENDERS:
            raise MalformedQuery(f"unknown gender {query.gender!r}")
        if query.kind not in ("entity", "concept"):
            raise MalformedQuery("gender filter applies to entity/concept queries")
    if query.category is not None and query.kind != "concept":
        raise MalformedQuery("category filter applies to concept queries")
    for bound in (query.date_from, query.date_to):
        if bound is not None and not _iso_ok(bound):
            raise MalformedQuery(f"bad date bound {bound!r}")


def _iso_ok(value: str) -> bool:
    parts = value.split("-")
    if not 1 <= len(parts) <= 3:
        return False
    widths = (4, 2, 2)
    return all(p.isdigit() and len(p) == w for p, w in zip(parts, widths))


def _resolve(index: CorpusIndex, query: Query) -> tuple[list[Posting], bool]:
    if query.key is None:
        return list(index.kind_postings.get(query.kind, [])), False
    key = query.key
    if query.kind == "entity" and key in ENTITY_TYPES:
        postings = index.postings.get(f"entity_type:{key}")
    else:
        postings = index.postings.get(f"{query.kind}:{key.lower()}")
    if postings is None:
        return [], True
    return list(postings), False


def _passes(index: CorpusIndex, query: Query, posting: Posting) -> bool:
    row = index.docs[posting.doc_id]
    if query.collection is not None and row.collection_id != query.collection:
        return False
    if query.date_from is not None or query.date_to is not None:
        if row.date is None:
            return False
        if query.date_from is not None and row.date < query.date_from:
            return False
        if query.date_to is not None and row.date[: len(query.date_to)] > query.date_to:
            return False
    if query.gender is not None and posting.gender != query.gender:
        return False
    if query.category is not None and posting.category != query.category:
        return False
    return True


def _kwic(index: CorpusIndex, posting: Posting, window: int) -> KwicLine:
    row = index.docs[posting.doc_id]
    start, end = posting.span
    text_bytes = row.text.encode("utf-8")
    match = text_bytes[start:end].decode("utf-8")
    covering = [
        i for i, span in enumerate(row.token_spans)
        if span[0] < end and span[1] > start
    ]
    if covering:
        first, last = covering[0], covering[-1]
    else:
        first = last = 0
    left = " ".join(row.token_surfaces[max(0, first - window):first])
    right = " ".join(row.token_surfaces[last + 1:last + 1 + window])
    return KwicLine(
        doc_id=posting.doc_id,
        sentence_index=posting.sentence_index,
        left=left,
        match=match,
        right=right,
        span=posting.span,
    )


def network_neighborhood(index: CorpusIndex, node: str) -> tuple[bool, list[NetworkEdge]]:
    known = node in index.network.nodes
    edges = [e for e in index.network.edges if e.source == node or e.target == node]
    return known, edges
