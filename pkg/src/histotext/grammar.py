"""Shallow grammar: lexicon POS tagging, construction-pattern chunking,
and verb-centered syntactic paths.

This is deliberately lightweight.  A tab-separated lexicon maps word forms
to (pos, lemma); unknown words fall back to suffix rules, then OTHER.
Chunks are matched with finite-state construction patterns (longest
pattern wins, file order breaks ties).  Paths connect a verb's nearest
left noun-chunk head (the subject slot, never across punctuation) to the
noun-chunk heads on its right up to the next verb, each tagged with its
preposition marker when present.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LexiconMissing, ParseError
from .segment import Sentence, Token

POS_TAGS = ("NOUN", "VERB", "ADJ", "DET", "PREP", "PRON", "NUM", "PUNCT", "OTHER")
CONTENT_POS = frozenset(("NOUN", "ADJ"))

DEFAULT_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ières", "NOUN"), ("ière", "NOUN"), ("euses", "NOUN"), ("euse", "NOUN"),
    ("tions", "NOUN"), ("tion", "NOUN"), ("ments", "NOUN"), ("ment", "NOUN"),
    ("ures", "NOUN"), ("ure", "NOUN"), ("eurs", "NOUN"), ("eur", "NOUN"),
    ("iers", "NOUN"), ("ier", "NOUN"), ("ités", "NOUN"), ("ité", "NOUN"),
    ("aient", "VERB"), ("èrent", "VERB"), ("ait", "VERB"),
)

CLAUSE_PUNCT = frozenset(",;:()«»—")

OBJECT_WINDOW = 12  # tokens scanned right of a verb for object chunks


@dataclass(frozen=True)
class TaggedToken:
    token_index: int
    surface: str
    pos: str
    lemma: str
    is_word: bool


@dataclass(frozen=True)
class PatternElement:
    pos: str
    lemma: str | None = None  # constrain to a lemma, e.g. PREP=de

    def matches(self, tagged: TaggedToken) -> bool:
        if tagged.pos != self.pos:
            return False
        return self.lemma is None or tagged.lemma == self.lemma


@dataclass(frozen=True)
class ChunkPattern:
    pattern_id: str
    elements: tuple[PatternElement, ...]
    head_index: int


@dataclass(frozen=True)
class Chunk:
    pattern_id: str
    token_range: tuple[int, int]  # [first, last] inclusive token indices
    head: int                     # token index of the head

    def covers(self, token_index: int) -> bool:
        return self.token_range[0] <= token_index <= self.token_range[1]


@dataclass(frozen=True)
class PathEndpoint:
    token_index: int
    lemma: str
    seq: tuple[str, ...]  # content-lemma sequence of the covering chunk
    slot: str             # SUBJ, OBJ, OBL:<prep>, or VERB


@dataclass(frozen=True)
class SyntacticPath:
    signature: tuple[str, ...]
    doc_id: str
    sentence_index: int
    source: PathEndpoint
    target: PathEndpoint

    def rendered(self) -> str:
        return "→".join(self.signature)

    @property
    def verb_lemma(self) -> str:
        for step in self.signature:
            if step != "SUBJ" and step != "OBJ" and not step.startswith("OBL:"):
                return step
        raise ValueError("path signature carries no verb")

    def noun_endpoints(self) -> list[PathEndpoint]:
        return [e for e in (self.source, self.target) if e.slot != "VERB"]


class Lexicon:
    """form -> (pos, lemma) table with suffix fallback for unknown words."""

    def __init__(
        self,
        entries: dict[str, tuple[str, str]],
        suffix_rules: tuple[tuple[str, str], ...] = DEFAULT_SUFFIX_RULES,
    ):
        self.entries = entries
        self.suffix_rules = tuple(sorted(suffix_rules, key=lambda r: -len(r[0])))

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        entries: dict[str, tuple[str, str]] = {}
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ParseError(line_no, "expected form<TAB>pos<TAB>lemma")
            form, pos, lemma = parts
            if pos not in POS_TAGS:
                raise ParseError(line_no, f"unknown pos {pos!r}")
            entries.setdefault(form.lower(), (pos, lemma))
        return cls(entries)

    def lookup(self, surface: str) -> tuple[str, str] | None:
        key = surface.lower().replace("’", "'")
        return self.entries.get(key)

    def suffix_pos(self, surface: str) -> str | None:
        lower = surface.lower()
        for suffix, pos in self.suffix_rules:
            if lower.endswith(suffix) and len(lower) > len(suffix):
                return pos
        return None


def tag_pos(tokens: list[Token], lexicon: Lexicon | None) -> list[TaggedToken]:
    """Assign one pos and lemma to every token; total over any input."""
    if lexicon is None or not lexicon.entries:
        raise LexiconMissing("a compiled lexicon is required")
    tagged = []
    for token in tokens:
        surface = token.surface
        if not token.is_word:
            pos = "NUM" if any(c.isdigit() for c in surface) else "PUNCT"
            tagged.append(TaggedToken(token.index, surface, pos, surface, False))
            continue
        hit = lexicon.lookup(surface)
        if hit is not None:
            pos, lemma = hit
        else:
            pos = lexicon.suffix_pos(surface) or "OTHER"
            lemma = surface.lower()
        tagged.append(TaggedToken(token.index, surface, pos, lemma, True))
    return tagged


def compile_patterns(text: str) -> list[ChunkPattern]:
    """Parse `pattern_id <TAB> POS-sequence <TAB> head-index` lines.

    A sequence element is a POS tag, optionally constrained to a lemma
    with `POS=lemma` (used to keep de-genitives distinct from argument
    prepositions).
    """
    patterns: list[ChunkPattern] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise ParseError(line_no, "expected pattern_id<TAB>sequence<TAB>head-index")
        pattern_id, seq_text, head_text = parts
        elements = []
        for raw in seq_text.split():
            pos, _, lemma = raw.partition("=")
            if pos not in POS_TAGS:
                raise ParseError(line_no, f"unknown pos {pos!r}")
            elements.append(PatternElement(pos=pos, lemma=lemma or None))
        try:
            head_index = int(head_text)
        except ValueError:
            raise ParseError(line_no, f"bad head index {head_text!r}") from None
        if not elements or not (0 <= head_index < len(elements)):
            raise ParseError(line_no, "head index outside pattern")
        patterns.append(ChunkPattern(pattern_id, tuple(elements), head_index))
    return patterns


def chunk(tagged: list[TaggedToken], patterns: list[ChunkPattern]) -> list[Chunk]:
    """Greedy left-to-right chunking; longer patterns win, then file order."""
    order = sorted(range(len(patterns)), key=lambda i: (-len(patterns[i].elements), i))
    chunks: list[Chunk] = []
    i = 0
    n = len(tagged)
    while i < n:
        matched = None
        for pi in order:
            pattern = patterns[pi]
            k = len(pattern.elements)
            if i + k > n:
                continue
            if all(pattern.elements[j].matches(tagged[i + j]) for j in range(k)):
                matched = pattern
                break
        if matched is None:
            i += 1
            continue
        k = len(matched.elements)
        chunks.append(
            Chunk(
                pattern_id=matched.pattern_id,
                token_range=(tagged[i].token_index, tagged[i + k - 1].token_index),
                head=tagged[i + matched.head_index].token_index,
            )
        )
        i += k
    return chunks


def content_sequence(chunk_: Chunk, tagged_by_index: dict[int, TaggedToken]) -> tuple[str, ...]:
    """Lemmas of the chunk's content words (nouns and adjectives)."""
    seq = []
    for idx in range(chunk_.token_range[0], chunk_.token_range[1] + 1):
        t = tagged_by_index.get(idx)
        if t is not None and t.pos in CONTENT_POS:
            seq.append(t.lemma)
    return tuple(seq)


@dataclass
class SentenceAnalysis:
    """Everything later stages need about one sentence."""

    doc_id: str
    sentence: Sentence
    tokens: list[Token]
    tagged: list[TaggedToken]
    chunks: list[Chunk] = field(default_factory=list)
    paths: list["SyntacticPath"] = field(default_factory=list)

    @property
    def index(self) -> int:
        return self.sentence.index

    def tagged_by_index(self) -> dict[int, TaggedToken]:
        return {t.token_index: t for t in self.tagged}

    def token_by_index(self) -> dict[int, Token]:
        return {t.index: t for t in self.tokens}


def _verb_groups(tagged: list[TaggedToken]) -> list[list[int]]:
    """Maximal runs of consecutive VERB tokens, as positions into `tagged`."""
    groups: list[list[int]] = []
    run: list[int] = []
    for pos_i, t in enumerate(tagged):
        if t.pos == "VERB":
            run.append(pos_i)
        elif run:
            groups.append(run)
            run = []
    if run:
        groups.append(run)
    return groups


def _chunk_at(chunks: list[Chunk], token_index: int) -> Chunk | None:
    for c in chunks:
        if c.covers(token_index):
            return c
    return None


def syntactic_paths(analysis: SentenceAnalysis, window: int = OBJECT_WINDOW) -> list[SyntacticPath]:
    """Emit subject/object paths around every verb group of the sentence.

    The subject is the nearest noun-chunk head to the left of the group,
    without crossing sentence-internal punctuation; objects are the chunk
    heads to the right up to the next verb (window-bounded), tagged OBJ or
    OBL:<prep> when a preposition governs them.  Every emitted signature
    carries exactly one verb lemma.
    """
    tagged = analysis.tagged
    chunks = analysis.chunks
    by_index = analysis.tagged_by_index()
    paths: list[SyntacticPath] = []
    groups = _verb_groups(tagged)
    verb_positions = {p for g in groups for p in g}
    for group in groups:
        predicate = tagged[group[-1]]
        subject = _find_subject(tagged, chunks, group[0])
        objects = _find_objects(tagged, chunks, group[-1], verb_positions, window)
        subj_ep = None
        if subject is not None:
            subj_ep = _endpoint(subject, by_index, chunks, "SUBJ")
        if not objects and subj_ep is not None:
            verb_ep = PathEndpoint(predicate.token_index, predicate.lemma, (predicate.lemma,), "VERB")
            paths.append(
                SyntacticPath(
                    signature=("SUBJ", predicate.lemma),
                    doc_id=analysis.doc_id,
                    sentence_index=analysis.index,
                    source=subj_ep,
                    target=verb_ep,
                )
            )
            continue
        for obj_chunk, marker in objects:
            step = "OBJ" if marker is None else f"OBL:{marker}"
            obj_ep = _endpoint(obj_chunk, by_index, chunks, step)
            if subj_ep is not None:
                signature = ("SUBJ", predicate.lemma, step)
                source = subj_ep
            else:
                signature = (predicate.lemma, step)
                source = PathEndpoint(predicate.token_index, predicate.lemma, (predicate.lemma,), "VERB")
            paths.append(
                SyntacticPath(
                    signature=signature,
                    doc_id=analysis.doc_id,
                    sentence_index=analysis.index,
                    source=source,
                    target=obj_ep,
                )
            )
    return paths


def _endpoint(
    chunk_: Chunk, by_index: dict[int, TaggedToken], chunks: list[Chunk], slot: str
) -> PathEndpoint:
    head = by_index[chunk_.head]
    seq = content_sequence(chunk_, by_index) or (head.lemma,)
    return PathEndpoint(token_index=head.token_index, lemma=head.lemma, seq=seq, slot=slot)


def _find_subject(tagged: list[TaggedToken], chunks: list[Chunk], verb_pos: int) -> Chunk | None:
    """Nearest noun-chunk left of the verb, never across punctuation or verbs."""
    for pos_i in range(verb_pos - 1, -1, -1):
        t = tagged[pos_i]
        if t.pos == "VERB" or (t.pos == "PUNCT" and t.surface in CLAUSE_PUNCT):
            return None
        c = _chunk_at(chunks, t.token_index)
        if c is not None:
            return c
    return None


def _find_objects(
    tagged: list[TaggedToken],
    chunks: list[Chunk],
    verb_pos: int,
    verb_positions: set[int],
    window: int,
) -> list[tuple[Chunk, str | None]]:
    """Chunks right of the verb with their preposition marker, if any."""
    found: list[tuple[Chunk, str | None]] = []
    seen: set[tuple[int, int]] = set()
    limit = min(len(tagged), verb_pos + 1 + window)
    for pos_i in range(verb_pos + 1, limit):
        if pos_i in verb_positions:
            break
        t = tagged[pos_i]
        c = _chunk_at(chunks, t.token_index)
        if c is None or c.token_range in seen:
            continue
        if c.token_range[0] != t.token_index:
            continue  # only consider a chunk where it starts
        seen.add(c.token_range)
        found.append((c, _marker(tagged, chunks, pos_i)))
    return found


def _marker(tagged: list[TaggedToken], chunks: list[Chunk], chunk_start_pos: int) -> str | None:
    """Preposition lemma governing the chunk starting here, skipping determiners."""
    for pos_i in range(chunk_start_pos - 1, -1, -1):
        t = tagged[pos_i]
        if t.pos == "DET":
            continue
        if t.pos == "PREP":
            return t.lemma
        return None
    return None
