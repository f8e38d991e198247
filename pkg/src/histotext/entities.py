"""Gazetteer- and pattern-based named entity detection, gender
attribution, and per-document mention linking.

Detection works over token sequences: multi-token gazetteer entries and a
title rule (M./Mme/Mlle + capitalized words) for persons, with date
mentions taken verbatim from the normalizer's date annotations.  Linking
merges mentions into per-document records — identical surfaces merge
unconditionally, title-stripped compatible surfaces merge only when their
surrounding sentences share at least one concept cluster ("contextual
reinforcement").  Linking never crosses documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .normalize import DateAnnotation
from .segment import Token

ENTITY_TYPES = ("PERSON", "LOCATION", "DATE", "ORGANIZATION")
GENDERS = ("feminine", "masculine", "unknown")

TITLES = {
    "M.": "masculine",
    "MM.": "masculine",
    "Mme": "feminine",
    "Mlle": "feminine",
    "Mlle.": "feminine",
    "Me": "unknown",
    "Mgr": "masculine",
}

FEMININE_SUFFIXES = ("ière", "ières", "euse", "euses", "rice", "rices")
MASCULINE_SUFFIXES = ("ier", "iers", "eur", "eurs")


@dataclass(frozen=True)
class EntityMention:
    mention_id: str
    doc_id: str
    sentence_index: int
    span: tuple[int, int]
    surface: str
    etype: str
    gender: str = "unknown"
    source: str = "gazetteer"  # gazetteer | pattern | title_rule
    iso_value: str | None = None  # DATE mentions only
    token_range: tuple[int, int] = (0, 0)


@dataclass
class EntityRecord:
    record_id: str
    doc_id: str
    etype: str
    canonical_surface: str
    mention_ids: list[str] = field(default_factory=list)
    gender: str = "unknown"


class Gazetteer:
    """Token-sequence lookup table for one entity type."""

    def __init__(self, surfaces: list[str]):
        self.sequences: dict[str, list[tuple[str, ...]]] = {}
        for surface in surfaces:
            parts = tuple(surface.split())
            if not parts:
                continue
            self.sequences.setdefault(parts[0], []).append(parts)
        for first in self.sequences:
            self.sequences[first].sort(key=lambda s: -len(s))

    @classmethod
    def from_text(cls, text: str) -> "Gazetteer":
        return cls([line.strip() for line in text.splitlines()
                    if line.strip() and not line.startswith("#")])

    def match_at(self, surfaces: list[str], i: int) -> int:
        """Length in tokens of the longest entry starting at i, or 0."""
        for seq in self.sequences.get(surfaces[i], []):
            if tuple(surfaces[i:i + len(seq)]) == seq:
                return len(seq)
        return 0


class GenderLexicon:
    def __init__(self, entries: dict[str, str]):
        self.entries = entries

    @classmethod
    def from_text(cls, text: str) -> "GenderLexicon":
        entries = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            form, _, gender = line.rstrip("\n").partition("\t")
            if gender in GENDERS:
                entries[form.lower()] = gender
        return cls(entries)


def detect_entities(
    doc_id: str,
    sentence_index: int,
    tokens: list[Token],
    gazetteers: dict[str, Gazetteer],
    dates: list[DateAnnotation] | None = None,
) -> list[EntityMention]:
    """Detect typed mentions in one sentence; longest match wins per type."""
    surfaces = [t.surface for t in tokens]
    raw: list[tuple[int, int, str, str, str, str | None]] = []
    # (first_tok, last_tok, etype, gender, source, iso)

    for etype, gazetteer in gazetteers.items():
        for i in range(len(tokens)):
            length = gazetteer.match_at(surfaces, i)
            if length:
                raw.append((i, i + length - 1, etype, "unknown", "gazetteer", None))

    for i, token in enumerate(tokens):
        gender = TITLES.get(token.surface)
        if gender is None:
            continue
        j = i + 1
        while (
            j < len(tokens)
            and j - i <= 3
            and tokens[j].is_word
            and tokens[j].surface[:1].isupper()
        ):
            j += 1
        if j > i + 1:
            raw.append((i, j - 1, "PERSON", gender, "title_rule", None))

    if dates:
        for annotation in dates:
            covering = [
                t.index for t in tokens
                if t.span[0] < annotation.span[1] and t.span[1] > annotation.span[0]
            ]
            if covering:
                first = next(k for k, t in enumerate(tokens) if t.index == covering[0])
                last = next(k for k, t in enumerate(tokens) if t.index == covering[-1])
                raw.append((first, last, "DATE", "unknown", "pattern", annotation.iso_value))

    # longest match wins within a type; overlaps across types are allowed
    raw.sort(key=lambda r: (r[0] - r[1], r[0]))
    kept: list[tuple[int, int, str, str, str, str | None]] = []
    for cand in raw:
        if any(
            k[2] == cand[2] and cand[0] <= k[1] and cand[1] >= k[0]
            for k in kept
        ):
            continue
        kept.append(cand)
    kept.sort(key=lambda r: (r[0], r[1]))

    mentions = []
    for first, last, etype, gender, source, iso in kept:
        span = (tokens[first].span[0], tokens[last].span[1])
        surface = _render_surface(tokens[first:last + 1])
        mentions.append(
            EntityMention(
                mention_id=f"{doc_id}-s{sentence_index}-m{len(mentions)}",
                doc_id=doc_id,
                sentence_index=sentence_index,
                span=span,
                surface=surface,
                etype=etype,
                gender=gender,
                source=source,
                iso_value=iso,
                token_range=(tokens[first].index, tokens[last].index),
            )
        )
    return mentions


def _render_surface(tokens: list[Token]) -> str:
    return " ".join(t.surface for t in tokens)


def attribute_gender(surface: str, lexicon: GenderLexicon) -> str:
    """Gender of a person or agent-noun surface: lexicon, then suffixes."""
    words = [w for w in surface.split() if w not in TITLES]
    for word in words:
        hit = lexicon.entries.get(word.lower())
        if hit is not None:
            return hit
    for word in words:
        lower = word.lower()
        if any(lower.endswith(s) for s in FEMININE_SUFFIXES):
            return "feminine"
        if any(lower.endswith(s) for s in MASCULINE_SUFFIXES):
            return "masculine"
    return "unknown"


def _strip_titles(surface: str) -> str:
    return " ".join(w for w in surface.split() if w not in TITLES).lower()


def _window_concepts(
    mention: EntityMention, concept_sentences: dict[int, set[str]], window: int
) -> set[str]:
    found: set[str] = set()
    for si in range(mention.sentence_index - window, mention.sentence_index + window + 1):
        found |= concept_sentences.get(si, set())
    return found


def link_entities(
    mentions: list[EntityMention],
    concept_sentences: dict[int, set[str]] | None = None,
    window: int = 1,
    gender_lexicon: GenderLexicon | None = None,
) -> tuple[list[EntityRecord], list[EntityMention]]:
    """Partition a document's mentions into entity records.

    `concept_sentences` maps sentence index -> concept cluster ids seen
    there; it drives the compatible-surface merges.  Returns the records
    plus the mentions (gender filled in for persons when a lexicon is
    given).
    """
    concept_sentences = concept_sentences or {}
    enriched: list[EntityMention] = []
    for m in mentions:
        if m.etype == "PERSON" and m.gender == "unknown" and gender_lexicon is not None:
            m = replace(m, gender=attribute_gender(m.surface, gender_lexicon))
        enriched.append(m)

    order = sorted(range(len(enriched)), key=lambda i: (enriched[i].sentence_index, enriched[i].span))
    groups: list[list[int]] = []
    by_surface: dict[tuple[str, str], int] = {}
    for idx in order:
        m = enriched[idx]
        key = (m.etype, m.surface.lower())
        if key in by_surface:
            groups[by_surface[key]].append(idx)
        else:
            by_surface[key] = len(groups)
            groups.append([idx])

    # compatible-surface merges: title+name vs bare name, same stripped form,
    # joined only when nearby concepts overlap
    merged_into: dict[int, int] = {}

    def root(g: int) -> int:
        while g in merged_into:
            g = merged_into[g]
        return g

    group_list = list(range(len(groups)))
    for gi in group_list:
        for gj in group_list:
            if gj <= gi:
                continue
            ri, rj = root(gi), root(gj)
            if ri == rj:
                continue
            mi = enriched[groups[gi][0]]
            mj = enriched[groups[gj][0]]
            if mi.etype != mj.etype or mi.etype == "DATE":
                continue
            if mi.surface.lower() == mj.surface.lower():
                continue
            si, sj = _strip_titles(mi.surface), _strip_titles(mj.surface)
            if not si or si != sj:
                continue
            overlap = False
            for a in groups[gi]:
                ca = _window_concepts(enriched[a], concept_sentences, window)
                for b in groups[gj]:
                    if ca & _window_concepts(enriched[b], concept_sentences, window):
                        overlap = True
                        break
                if overlap:
                    break
            if overlap:
                merged_into[max(ri, rj)] = min(ri, rj)

    final: dict[int, list[int]] = {}
    for gi, members in enumerate(groups):
        final.setdefault(root(gi), []).extend(members)

    records: list[EntityRecord] = []
    doc_id = enriched[0].doc_id if enriched else ""
    for _, members in sorted(final.items(), key=lambda kv: min(kv[1])):
        members.sort()
        ms = [enriched[i] for i in members]
        genders = {m.gender for m in ms} - {"unknown"}
        gender = genders.pop() if len(genders) == 1 else "unknown"
        canonical = max((m.surface for m in ms), key=lambda s: (len(s), s))
        records.append(
            EntityRecord(
                record_id=f"{doc_id}-r{len(records)}",
                doc_id=doc_id,
                etype=ms[0].etype,
                canonical_surface=canonical,
                mention_ids=[m.mention_id for m in ms],
                gender=gender,
            )
        )
    return records, enriched
