"""End-to-end corpus processing: ingest -> normalize -> annotate -> mine ->
extract -> export, plus the standoff sidecar writers behind the CLI.

Every stage is a deterministic pure function of the stored texts and the
configured rule tables, so later stages recompute earlier in-memory layers
instead of parsing them back; the `.norm.txt` / `.dates` sidecars are the
one exception (they are read back when present so a custom rule file given
to `normalize` keeps its effect downstream).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

from . import concepts as concepts_mod
from . import normalize as normalize_mod
from . import relations as relations_mod
from .entities import EntityMention, EntityRecord, Gazetteer, GenderLexicon, detect_entities, link_entities
from .errors import EmptyCorpus
from .grammar import Lexicon, SentenceAnalysis, chunk, compile_patterns, syntactic_paths, tag_pos
from .index import CorpusIndex, DocumentLayers, build_index
from .normalize import DateAnnotation, RuleTable, compile_rules
from .segment import Sentence, Token, split_sentences, tokenize
from .store import CorpusStore
from .tei import TeiBundle, emit_tei

DEFAULT_CATEGORIES = ("agent", "product", "money", "time", "work_activity")


def _resource_text(*parts: str) -> str:
    ref = importlib_resources.files("histotext") / "resources"
    for part in parts:
        ref = ref / part
    return ref.read_text(encoding="utf-8")


@dataclass
class PipelineConfig:
    rules_file: Path | None = None
    lexicon_file: Path | None = None
    patterns_file: Path | None = None
    seeds_dir: Path | None = None
    verb_seeds_file: Path | None = None
    exclusions_file: Path | None = None
    min_frequency: int = 2
    cohesion_threshold: float = 0.0
    similarity_threshold: float = 0.25
    min_path_support: int = 2
    max_iterations: int = 5
    linking_window: int = 1

    def load_rules(self) -> RuleTable:
        if self.rules_file is not None:
            return compile_rules(Path(self.rules_file).read_text(encoding="utf-8"))
        return compile_rules(_resource_text("rules.tsv"))

    def load_lexicon(self) -> Lexicon:
        if self.lexicon_file is not None:
            text = Path(self.lexicon_file).read_text(encoding="utf-8")
        else:
            text = _resource_text("lexicon.tsv")
        lex = Lexicon.from_text(text)
        suffix_rules = []
        for line in _resource_text("suffixes.tsv").splitlines():
            if line.strip() and not line.startswith("#"):
                suffix, pos = line.split("\t")
                suffix_rules.append((suffix, pos))
        return Lexicon(lex.entries, tuple(suffix_rules))

    def load_patterns(self):
        if self.patterns_file is not None:
            return compile_patterns(Path(self.patterns_file).read_text(encoding="utf-8"))
        return compile_patterns(_resource_text("patterns.tsv"))

    def load_gazetteers(self) -> dict[str, Gazetteer]:
        return {
            "PERSON": Gazetteer.from_text(_resource_text("gazetteers", "person.txt")),
            "LOCATION": Gazetteer.from_text(_resource_text("gazetteers", "location.txt")),
            "ORGANIZATION": Gazetteer.from_text(_resource_text("gazetteers", "organization.txt")),
        }

    def load_gender_lexicon(self) -> GenderLexicon:
        return GenderLexicon.from_text(_resource_text("gender.tsv"))

    def load_seeds(self) -> dict[str, list[str]]:
        seeds = {}
        for category in DEFAULT_CATEGORIES:
            if self.seeds_dir is not None:
                path = Path(self.seeds_dir) / f"{category}.txt"
                text = path.read_text(encoding="utf-8") if path.exists() else ""
            else:
                text = _resource_text("seeds", f"{category}.txt")
            members = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")]
            if members:
                seeds[category] = members
        return seeds

    def load_verb_seeds(self) -> relations_mod.SeedLexicon:
        if self.verb_seeds_file is not None:
            text = Path(self.verb_seeds_file).read_text(encoding="utf-8")
            category = Path(self.verb_seeds_file).stem
        else:
            text = _resource_text("verb_seeds", "remuneration_verb.txt")
            category = "remuneration_verb"
        return relations_mod.SeedLexicon.from_text(category, text)

    def load_exclusions(self) -> set[str]:
        if self.exclusions_file is None:
            return set()
        text = Path(self.exclusions_file).read_text(encoding="utf-8")
        return {l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")}


@dataclass
class DocumentResult:
    doc_id: str
    collection_id: str
    title: str
    date: str | None
    provenance: str | None
    normalized: str
    edit_map: normalize_mod.EditMap | None
    rule_counts: dict[str, int]
    dates: list[DateAnnotation]
    tokens: list[Token]
    sentences: list[Sentence]
    analyses: list[SentenceAnalysis]
    entity_mentions: list[EntityMention] = field(default_factory=list)
    entity_records: list[EntityRecord] = field(default_factory=list)
    concept_mentions: list[concepts_mod.ConceptMention] = field(default_factory=list)
    frames: list[relations_mod.PredicateFrame] = field(default_factory=list)
    relations: list[relations_mod.SemanticRelation] = field(default_factory=list)

    def bundle(self) -> TeiBundle:
        return TeiBundle(
            doc_id=self.doc_id,
            collection_id=self.collection_id,
            title=self.title,
            date=self.date,
            provenance=self.provenance,
            normalized_text=self.normalized,
            tokens=self.tokens,
            sentences=self.sentences,
            entity_mentions=self.entity_mentions,
            entity_records=self.entity_records,
            concept_mentions=self.concept_mentions,
            relations=self.relations,
        )

    def lemmas(self) -> list[str]:
        lemma_of = {}
        for analysis in self.analyses:
            for t in analysis.tagged:
                lemma_of[t.token_index] = t.lemma
        return [lemma_of.get(t.index, t.surface.lower()) for t in self.tokens]


@dataclass
class CorpusResult:
    store: CorpusStore
    config: PipelineConfig
    documents: dict[str, DocumentResult]
    terms: list[concepts_mod.Term] = field(default_factory=list)
    clusters: list[concepts_mod.ConceptCluster] = field(default_factory=list)
    bootstrap: relations_mod.BootstrapResult | None = None
    network: relations_mod.SemanticNetwork | None = None

    def analyses(self) -> list[SentenceAnalysis]:
        out = []
        for doc_id in sorted(self.documents):
            out.extend(self.documents[doc_id].analyses)
        return out

    def document_layers(self) -> list[DocumentLayers]:
        return [
            DocumentLayers(bundle=d.bundle(), lemmas=d.lemmas())
            for _, d in sorted(self.documents.items())
        ]

    def build_index(self) -> CorpusIndex:
        collections = {
            c.id: {
                "label": c.label,
                "source_kind": c.source_kind,
                "corpus_role": c.corpus_role,
                "documents": len(self.store.list_collection(c.id)),
            }
            for c in self.store.collections()
        }
        return build_index(
            self.document_layers(),
            gender_lexicon=self.config.load_gender_lexicon(),
            collections=collections,
        )


def run_pipeline(store: CorpusStore, config: PipelineConfig | None = None) -> CorpusResult:
    """Process every stored document through all stages, in memory."""
    config = config or PipelineConfig()
    rules = config.load_rules()
    lexicon = config.load_lexicon()
    patterns = config.load_patterns()
    gazetteers = config.load_gazetteers()
    gender_lexicon = config.load_gender_lexicon()

    documents: dict[str, DocumentResult] = {}
    for doc_id in store.document_ids():
        doc = store.get_document(doc_id)
        normalized = store.read_sidecar(doc_id, ".norm.txt")
        edit_map = None
        rule_counts: dict[str, int] = {}
        if normalized is None:
            normalized, edit_map, rule_counts = normalize_mod.normalize(doc.raw_text, rules)
        dates_sidecar = store.read_sidecar(doc_id, ".dates")
        if dates_sidecar is not None:
            dates = _parse_dates_sidecar(dates_sidecar)
        else:
            dates = normalize_mod.standardize_dates(normalized, rules)

        tokens = tokenize(normalized, doc_id=doc_id)
        sentences = split_sentences(tokens)
        analyses = []
        for sentence in sentences:
            sent_tokens = tokens[sentence.token_range[0]: sentence.token_range[1] + 1]
            tagged = tag_pos(sent_tokens, lexicon)
            analysis = SentenceAnalysis(
                doc_id=doc_id, sentence=sentence, tokens=sent_tokens, tagged=tagged
            )
            analysis.chunks = chunk(tagged, patterns)
            analysis.paths = syntactic_paths(analysis)
            analyses.append(analysis)

        mentions: list[EntityMention] = []
        for analysis in analyses:
            span = analysis.sentence.span
            sent_dates = [d for d in dates if d.span[0] < span[1] and d.span[1] > span[0]]
            mentions.extend(
                detect_entities(doc_id, analysis.index, analysis.tokens, gazetteers, sent_dates)
            )
        documents[doc_id] = DocumentResult(
            doc_id=doc_id,
            collection_id=doc.collection_id,
            title=doc.title,
            date=doc.date,
            provenance=doc.provenance,
            normalized=normalized,
            edit_map=edit_map,
            rule_counts=rule_counts,
            dates=dates,
            tokens=tokens,
            sentences=sentences,
            analyses=analyses,
            entity_mentions=mentions,
        )

    result = CorpusResult(store=store, config=config, documents=documents)
    all_analyses = result.analyses()
    if not all_analyses:
        return result

    try:
        result.terms = concepts_mod.extract_terms(
            all_analyses, config.min_frequency, config.cohesion_threshold
        )
    except EmptyCorpus:
        result.terms = []
    vectors = concepts_mod.build_context_vectors(all_analyses, result.terms)
    seeds = config.load_seeds()
    result.clusters = concepts_mod.cluster_concepts(vectors, seeds, config.similarity_threshold)

    for doc_id, doc_result in documents.items():
        concept_mentions = []
        for analysis in doc_result.analyses:
            concept_mentions.extend(
                concepts_mod.annotate_concepts(analysis, result.clusters, result.terms)
            )
        doc_result.concept_mentions = concept_mentions
        concept_sentences: dict[int, set[str]] = {}
        for cm in concept_mentions:
            concept_sentences.setdefault(cm.sentence_index, set()).add(cm.concept_id)
        records, enriched = link_entities(
            doc_result.entity_mentions,
            concept_sentences,
            window=config.linking_window,
            gender_lexicon=gender_lexicon,
        )
        doc_result.entity_records = records
        doc_result.entity_mentions = enriched

        frames = []
        for analysis in doc_result.analyses:
            sent_concepts = [c for c in concept_mentions if c.sentence_index == analysis.index]
            sent_entities = [m for m in doc_result.entity_mentions if m.sentence_index == analysis.index]
            frames.extend(relations_mod.find_predicates(analysis, sent_concepts, sent_entities))
        doc_result.frames = frames

    verb_seeds = config.load_verb_seeds()
    result.bootstrap = relations_mod.bootstrap(
        verb_seeds,
        all_analyses,
        result.clusters,
        min_path_support=config.min_path_support,
        max_iterations=config.max_iterations,
    )
    final_lexicon = result.bootstrap.lexicon
    exclusions = config.load_exclusions()
    if exclusions:
        final_lexicon = relations_mod.SeedLexicon(
            category=final_lexicon.category,
            generation=final_lexicon.generation,
            members=final_lexicon.members - exclusions,
            provenance={m: p for m, p in final_lexicon.provenance.items() if m not in exclusions},
        )
        result.bootstrap.lexicon = final_lexicon

    all_frames = []
    for doc_id in sorted(documents):
        all_frames.extend(documents[doc_id].frames)
    all_relations = relations_mod.extract_relations(all_frames, final_lexicon)
    by_doc: dict[str, list[relations_mod.SemanticRelation]] = {}
    for rel in all_relations:
        by_doc.setdefault(rel.doc_id, []).append(rel)
    for doc_id, doc_result in documents.items():
        doc_result.relations = by_doc.get(doc_id, [])
    result.network = relations_mod.build_network(all_relations)
    return result


def _parse_dates_sidecar(text: str) -> list[DateAnnotation]:
    dates = []
    for line in text.splitlines():
        if not line.strip():
            continue
        start, end, iso = line.split("\t")
        dates.append(DateAnnotation(span=(int(start), int(end)), iso_value=iso))
    return dates


def normalize_corpus(store: CorpusStore, config: PipelineConfig | None = None) -> dict[str, int]:
    """Run only the normalization stage, writing sidecars; returns fire counts.

    Unlike :func:`run_pipeline` this never reads existing `.norm.txt`
    sidecars — it recomputes them from the raw text with the configured
    rule table.
    """
    config = config or PipelineConfig()
    rules = config.load_rules()
    totals: dict[str, int] = {}
    for doc_id in store.document_ids():
        doc = store.get_document(doc_id)
        normalized, edit_map, counts = normalize_mod.normalize(doc.raw_text, rules)
        dates = normalize_mod.standardize_dates(normalized, rules)
        store.write_sidecar(doc_id, ".norm.txt", normalized)
        lines = [
            f"{e.raw_span[0]}\t{e.raw_span[1]}\t{e.normalized_span[0]}\t{e.normalized_span[1]}\t{e.rule_id}"
            for e in edit_map.edits
        ]
        store.write_sidecar(doc_id, ".edits", "\n".join(lines) + ("\n" if lines else ""))
        date_lines = [f"{d.span[0]}\t{d.span[1]}\t{d.iso_value}" for d in dates]
        store.write_sidecar(doc_id, ".dates", "\n".join(date_lines) + ("\n" if date_lines else ""))
        for rule_id, n in counts.items():
            totals[rule_id] = totals.get(rule_id, 0) + n
    return totals


# -- sidecar / artifact writers --------------------------------------------

def write_normalization(store: CorpusStore, result: CorpusResult) -> dict[str, int]:
    """Write `.norm.txt`, `.edits`, and `.dates` sidecars; return fire counts."""
    totals: dict[str, int] = {}
    for doc_id, doc in sorted(result.documents.items()):
        store.write_sidecar(doc_id, ".norm.txt", doc.normalized)
        lines = []
        if doc.edit_map is not None:
            for e in doc.edit_map.edits:
                lines.append(
                    f"{e.raw_span[0]}\t{e.raw_span[1]}\t"
                    f"{e.normalized_span[0]}\t{e.normalized_span[1]}\t{e.rule_id}"
                )
        store.write_sidecar(doc_id, ".edits", "\n".join(lines) + ("\n" if lines else ""))
        date_lines = [f"{d.span[0]}\t{d.span[1]}\t{d.iso_value}" for d in doc.dates]
        store.write_sidecar(doc_id, ".dates", "\n".join(date_lines) + ("\n" if date_lines else ""))
        for rule_id, n in doc.rule_counts.items():
            totals[rule_id] = totals.get(rule_id, 0) + n
    return totals


def write_segmentation(store: CorpusStore, result: CorpusResult) -> None:
    for doc_id, doc in sorted(result.documents.items()):
        token_lines = [
            f"{t.index}\t{t.span[0]}\t{t.span[1]}\t{t.surface}" for t in doc.tokens
        ]
        store.write_sidecar(doc_id, ".tokens", "\n".join(token_lines) + ("\n" if token_lines else ""))
        sent_lines = []
        for s in doc.sentences:
            surface = " ".join(
                doc.tokens[i].surface for i in range(s.token_range[0], s.token_range[1] + 1)
            )
            sent_lines.append(f"{s.index}\t{s.span[0]}\t{s.span[1]}\t{surface}")
        store.write_sidecar(doc_id, ".sentences", "\n".join(sent_lines) + ("\n" if sent_lines else ""))


def write_entities(store: CorpusStore, result: CorpusResult) -> None:
    for doc_id, doc in sorted(result.documents.items()):
        record_of = {}
        for r in doc.entity_records:
            for mid in r.mention_ids:
                record_of[mid] = r.record_id
        lines = [
            f"{m.span[0]}\t{m.span[1]}\t{m.etype}\t{m.gender}\t{record_of.get(m.mention_id, '-')}"
            for m in doc.entity_mentions
        ]
        store.write_sidecar(doc_id, ".entities", "\n".join(lines) + ("\n" if lines else ""))


def write_concepts(store: CorpusStore, result: CorpusResult) -> None:
    for doc_id, doc in sorted(result.documents.items()):
        lines = [
            f"{c.span[0]}\t{c.span[1]}\t{c.category}\t{c.matched_member}\t{c.concept_id}"
            for c in doc.concept_mentions
        ]
        store.write_sidecar(doc_id, ".concepts", "\n".join(lines) + ("\n" if lines else ""))
    term_lines = [
        f"{t.text}\t{t.pattern_id}\t{t.frequency}\t{t.cohesion:.6f}" for t in result.terms
    ]
    (store.root / "terms.tsv").write_text(
        "\n".join(term_lines) + ("\n" if term_lines else ""), encoding="utf-8"
    )
    cluster_lines = []
    for cluster in result.clusters:
        for member in sorted(cluster.members):
            origin = "seed" if member in cluster.seed_members else "clustered"
            cluster_lines.append(f"{cluster.category}\t{member}\t{origin}")
    (store.root / "clusters.tsv").write_text(
        "\n".join(cluster_lines) + ("\n" if cluster_lines else ""), encoding="utf-8"
    )


def write_relations(store: CorpusStore, result: CorpusResult) -> None:
    rel_lines = []
    for doc_id in sorted(result.documents):
        for rel in result.documents[doc_id].relations:
            args = ";".join(f"{role}={value}" for role, value in rel.arguments.items())
            rel_lines.append(
                f"{rel.relation_id}\t{rel.doc_id}\t{rel.sentence_index}\t{rel.predicate}\t{args}"
            )
    (store.root / "relations.tsv").write_text(
        "\n".join(rel_lines) + ("\n" if rel_lines else ""), encoding="utf-8"
    )
    network = result.network
    graph_lines = []
    if network is not None:
        for node in network.nodes:
            graph_lines.append(f"node\t{node}")
        for e in network.edges:
            graph_lines.append(f"edge\t{e.source}\t{e.target}\t{e.label}\t{e.weight}")
    (store.root / "network.graph").write_text(
        "\n".join(graph_lines) + ("\n" if graph_lines else ""), encoding="utf-8"
    )
    if result.bootstrap is not None:
        lex = result.bootstrap.lexicon
        lex_lines = [
            f"{member}\t{lex.provenance.get(member, 'seed')}"
            for member in sorted(lex.members)
        ]
        (store.root / "verb_lexicon.tsv").write_text(
            "\n".join(lex_lines) + ("\n" if lex_lines else ""), encoding="utf-8"
        )


def write_tei(result: CorpusResult, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for doc_id, doc in sorted(result.documents.items()):
        path = out_dir / f"{doc_id}.xml"
        path.write_text(emit_tei(doc.bundle()), encoding="utf-8")
        written.append(path)
    return written
