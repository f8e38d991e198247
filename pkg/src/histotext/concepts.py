"""Multi-word terminology, distributional context vectors, and concept
clusters.

Terms are over-represented nominal chunks scored with pointwise mutual
information (log2) between the observed sequence frequency and the product
of its content-word unigram probabilities, all counted over the corpus
word tokens:

    pmi(w1..wk) = log2( (f(seq)/N) / ((f(w1)/N) * ... * (f(wk)/N)) )

Words and terms are then grouped by the slots they fill in syntactic
paths: each noun target accumulates (path signature, slot) features, and
greedy cosine assignment against per-category seed centroids yields flat
concept clusters.  Mentions are annotated longest-match-first: multi-word
term chunks, then single member lemmas.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyCorpus, MissingSeeds
from .grammar import CONTENT_POS, SentenceAnalysis, content_sequence

CONCEPT_CATEGORIES = ("agent", "product", "money", "time", "work_activity")

Feature = tuple[str, str]  # (rendered path signature, slot)


@dataclass(frozen=True)
class Term:
    lemma_sequence: tuple[str, ...]
    pattern_id: str
    frequency: int
    cohesion: float

    @property
    def text(self) -> str:
        return " ".join(self.lemma_sequence)


@dataclass(frozen=True)
class ContextVector:
    target: str
    features: dict[Feature, int]

    def total(self) -> int:
        return sum(self.features.values())

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.features.values()))


@dataclass
class ConceptCluster:
    concept_id: str
    category: str
    members: set[str] = field(default_factory=set)
    seed_members: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class ConceptMention:
    doc_id: str
    sentence_index: int
    span: tuple[int, int]
    concept_id: str
    category: str
    matched_member: str
    token_range: tuple[int, int]


def extract_terms(
    corpus: list[SentenceAnalysis],
    min_frequency: int = 2,
    cohesion_threshold: float = 0.0,
) -> list[Term]:
    """Retain every multi-word nominal sequence passing both thresholds.

    Candidates are the content-lemma sequences of multi-content-word
    chunks; frequency counts chunk occurrences, unigram counts come from
    every word token of the corpus.
    """
    unigrams: Counter[str] = Counter()
    n_words = 0
    for analysis in corpus:
        for t in analysis.tagged:
            if t.is_word:
                unigrams[t.lemma] += 1
                n_words += 1
    if n_words == 0:
        raise EmptyCorpus("no word tokens in corpus")

    seq_counts: Counter[tuple[str, ...]] = Counter()
    seq_pattern: dict[tuple[str, ...], str] = {}
    for analysis in corpus:
        by_index = analysis.tagged_by_index()
        for c in analysis.chunks:
            seq = content_sequence(c, by_index)
            if len(seq) < 2:
                continue
            seq_counts[seq] += 1
            seq_pattern.setdefault(seq, c.pattern_id)

    terms = []
    for seq, freq in seq_counts.items():
        if freq < min_frequency:
            continue
        cohesion = pmi(freq, [unigrams[w] for w in seq], n_words)
        if cohesion < cohesion_threshold:
            continue
        terms.append(Term(seq, seq_pattern[seq], freq, cohesion))
    terms.sort(key=lambda t: (-t.frequency, t.lemma_sequence))
    return terms


def pmi(seq_count: int, word_counts: list[int], n_words: int) -> float:
    """log2 of observed sequence probability over independent word probabilities."""
    if seq_count <= 0 or any(c <= 0 for c in word_counts):
        return float("-inf")
    log = math.log2(seq_count) + (len(word_counts) - 1) * math.log2(n_words)
    for c in word_counts:
        log -= math.log2(c)
    return log


def build_context_vectors(
    corpus: list[SentenceAnalysis],
    terms: list[Term] | None = None,
) -> dict[str, ContextVector]:
    """Count (signature, slot) features for every noun target in the paths.

    A target is the multi-word term string when the endpoint's chunk is a
    retained term, otherwise the endpoint's head lemma.
    """
    term_set = {t.lemma_sequence for t in terms} if terms else set()
    features: dict[str, Counter[Feature]] = {}
    for analysis in corpus:
        for path in analysis.paths:
            for endpoint in path.noun_endpoints():
                target = _target_of(endpoint.seq, endpoint.lemma, term_set)
                feature = (path.rendered(), endpoint.slot)
                features.setdefault(target, Counter())[feature] += 1
    return {
        target: ContextVector(target=target, features=dict(counts))
        for target, counts in features.items()
    }


def _target_of(seq: tuple[str, ...], lemma: str, term_set: set[tuple[str, ...]]) -> str:
    if len(seq) > 1 and seq in term_set:
        return " ".join(seq)
    return lemma


def cosine(a: dict[Feature, int], b: dict[Feature, int]) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b.get(k, 0) for k, v in a.items())
    if dot == 0:
        return 0.0
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    return dot / (norm_a * norm_b)


def cluster_concepts(
    vectors: dict[str, ContextVector],
    seeds: dict[str, list[str]],
    similarity_threshold: float = 0.25,
) -> list[ConceptCluster]:
    """Greedy assignment of targets to the closest seed centroid.

    Deterministic: targets are visited by descending corpus frequency,
    ties broken lexicographically; a target joins the best category at or
    above the threshold, categories tying resolve lexicographically.
    """
    for category, members in seeds.items():
        if not members:
            raise MissingSeeds(category)

    centroids: dict[str, Counter[Feature]] = {}
    for category, members in seeds.items():
        centroid: Counter[Feature] = Counter()
        for member in members:
            v = vectors.get(member)
            if v is not None:
                centroid.update(v.features)
        centroids[category] = centroid

    clusters = {
        category: ConceptCluster(
            concept_id=f"c_{category}",
            category=category,
            members=set(members),
            seed_members=set(members),
        )
        for category, members in seeds.items()
    }

    seed_targets = {m for members in seeds.values() for m in members}
    targets = sorted(
        (t for t in vectors if t not in seed_targets),
        key=lambda t: (-vectors[t].total(), t),
    )
    for target in targets:
        best_category = None
        best_sim = 0.0
        for category in sorted(centroids):
            sim = cosine(vectors[target].features, centroids[category])
            if sim > best_sim:
                best_sim = sim
                best_category = category
        if best_category is not None and best_sim >= similarity_threshold:
            clusters[best_category].members.add(target)
    return [clusters[c] for c in sorted(clusters)]


def annotate_concepts(
    analysis: SentenceAnalysis,
    clusters: list[ConceptCluster],
    terms: list[Term] | None = None,
) -> list[ConceptMention]:
    """Mark cluster members in one sentence, longest match first.

    Multi-word members match whole chunks via their content-lemma
    sequence; remaining single-lemma members match individual word tokens
    not already covered.
    """
    term_members: dict[tuple[str, ...], tuple[str, str, str]] = {}
    lemma_members: dict[str, tuple[str, str, str]] = {}
    for cluster in clusters:
        for member in sorted(cluster.members):
            parts = tuple(member.split())
            if len(parts) > 1:
                term_members.setdefault(parts, (cluster.concept_id, cluster.category, member))
            else:
                lemma_members.setdefault(member, (cluster.concept_id, cluster.category, member))

    mentions: list[ConceptMention] = []
    covered: set[int] = set()
    token_by_index = analysis.token_by_index()
    by_index = analysis.tagged_by_index()

    for c in analysis.chunks:
        seq = content_sequence(c, by_index)
        hit = term_members.get(seq)
        if hit is None:
            continue
        concept_id, category, member = hit
        first, last = c.token_range
        mentions.append(
            ConceptMention(
                doc_id=analysis.doc_id,
                sentence_index=analysis.index,
                span=(token_by_index[first].span[0], token_by_index[last].span[1]),
                concept_id=concept_id,
                category=category,
                matched_member=member,
                token_range=(first, last),
            )
        )
        covered.update(range(first, last + 1))

    for t in analysis.tagged:
        if not t.is_word or t.token_index in covered:
            continue
        hit = lemma_members.get(t.lemma)
        if hit is None:
            continue
        concept_id, category, member = hit
        token = token_by_index[t.token_index]
        mentions.append(
            ConceptMention(
                doc_id=analysis.doc_id,
                sentence_index=analysis.index,
                span=token.span,
                concept_id=concept_id,
                category=category,
                matched_member=member,
                token_range=(t.token_index, t.token_index),
            )
        )
    mentions.sort(key=lambda m: m.span)
    return mentions
