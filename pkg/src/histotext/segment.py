"""Tokenization and sentence splitting over normalized text.

Spans are byte ranges into the UTF-8 encoding of the normalized text —
the canonical coordinate every annotation layer anchors to.  French
elision clitics (l', d', qu' …) become their own tokens; hyphenated
compounds stay whole; known abbreviations keep their trailing period so
they never trigger a sentence boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpanOutOfBounds

ELISION_PREFIXES = (
    "jusqu'", "lorsqu'", "puisqu'", "quoiqu'", "qu'",
    "l'", "d'", "j'", "n'", "m'", "t'", "s'", "c'",
)
ELISION_EXCEPTIONS = ("aujourd'hui",)

DEFAULT_ABBREVIATIONS = frozenset(
    ["M.", "MM.", "Mlle.", "Mgr.", "St.", "Ste.", "art.", "vol.", "chap.", "p.", "no."]
)

SENTENCE_FINAL = frozenset(".!?…")

_APOSTROPHES = ("'", "’")


@dataclass(frozen=True)
class Token:
    doc_id: str
    index: int
    span: tuple[int, int]  # byte range in normalized text
    surface: str
    is_word: bool


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    token_range: tuple[int, int]  # [first, last] token indices, inclusive
    span: tuple[int, int]


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch in _APOSTROPHES or ch == "-"


def _split_elisions(run: str) -> list[str]:
    """Split leading elision clitics off a word run."""
    if run.lower() in ELISION_EXCEPTIONS:
        return [run]
    parts: list[str] = []
    rest = run
    while True:
        lower = rest.lower().replace("’", "'")
        for prefix in ELISION_PREFIXES:
            if lower.startswith(prefix) and len(rest) > len(prefix):
                parts.append(rest[: len(prefix)])
                rest = rest[len(prefix):]
                break
        else:
            break
        if rest.lower() in ELISION_EXCEPTIONS:
            break
    parts.append(rest)
    return parts


def tokenize(
    normalized_text: str,
    doc_id: str = "",
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[Token]:
    """Split normalized text into word, number, and punctuation tokens.

    Concatenating surfaces with the inter-token gaps of the input
    reconstructs it byte-exactly (see :func:`reconstruct`).
    """
    byte_of = _byte_offsets(normalized_text)
    raw: list[tuple[int, int]] = []  # char spans
    i = 0
    n = len(normalized_text)
    while i < n:
        ch = normalized_text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            j = i
            while j < n and _is_word_char(normalized_text[j]):
                j += 1
            # trailing apostrophes/hyphens belong to the run only if followed
            # by another word char, which the loop already guarantees ended
            while j > i and normalized_text[j - 1] in ("-",) + _APOSTROPHES:
                if normalized_text[i:j].lower() in ELISION_EXCEPTIONS:
                    break
                lower = normalized_text[i:j].lower().replace("’", "'")
                if any(lower.endswith(p) and lower != p for p in ELISION_PREFIXES):
                    break  # keep elision apostrophe: split below
                j -= 1
            if j == i:  # lone apostrophe or hyphen
                raw.append((i, i + 1))
                i += 1
                continue
            # attach trailing period for known abbreviations
            if j < n and normalized_text[j] == ".":
                if normalized_text[i:j] + "." in abbreviations:
                    j += 1
            raw.append((i, j))
            i = j
        elif ch == ".":
            j = i
            while j < n and normalized_text[j] == ".":
                j += 1
            raw.append((i, j))
            i = j
        else:
            raw.append((i, i + 1))
            i += 1

    tokens: list[Token] = []
    for start, end in raw:
        surface = normalized_text[start:end]
        if _has_letter(surface) and ("'" in surface or "’" in surface):
            pieces = _split_elisions(surface)
        else:
            pieces = [surface]
        pos = start
        for piece in pieces:
            if not piece:
                continue
            tokens.append(
                Token(
                    doc_id=doc_id,
                    index=len(tokens),
                    span=(byte_of[pos], byte_of[pos + len(piece)]),
                    surface=piece,
                    is_word=_has_letter(piece),
                )
            )
            pos += len(piece)
    return tokens


def _has_letter(s: str) -> bool:
    return any(ch.isalpha() for ch in s)


def _byte_offsets(text: str) -> list[int]:
    offsets = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return offsets


def split_sentences(tokens: list[Token]) -> list[Sentence]:
    """Group tokens into sentences at sentence-final punctuation tokens.

    A token made only of ``. ! ? …`` characters closes the sentence;
    abbreviations survived tokenization as single word tokens and never
    trigger a boundary.  Trailing tokens form a final sentence.
    """
    if not tokens:
        return []
    doc_id = tokens[0].doc_id
    sentences: list[Sentence] = []
    start = 0
    for i, token in enumerate(tokens):
        if not token.is_word and token.surface and all(c in SENTENCE_FINAL for c in token.surface):
            sentences.append(_make_sentence(doc_id, len(sentences), tokens, start, i))
            start = i + 1
    if start < len(tokens):
        sentences.append(_make_sentence(doc_id, len(sentences), tokens, start, len(tokens) - 1))
    return sentences


def _make_sentence(doc_id: str, index: int, tokens: list[Token], first: int, last: int) -> Sentence:
    return Sentence(
        doc_id=doc_id,
        index=index,
        token_range=(first, last),
        span=(tokens[first].span[0], tokens[last].span[1]),
    )


def reconstruct(normalized_text: str, tokens: list[Token]) -> str:
    """Rebuild the text from token surfaces plus the inter-token gaps.

    Oracle utility for offset integrity: the result must be byte-identical
    to the input text whenever the spans are sound.
    """
    data = normalized_text.encode("utf-8")
    out = bytearray()
    pos = 0
    for token in tokens:
        start, end = token.span
        if start < pos or end > len(data) or start > end:
            raise SpanOutOfBounds(f"token {token.index} span {token.span}")
        out += data[pos:start]
        out += token.surface.encode("utf-8")
        pos = end
    out += data[pos:]
    return out.decode("utf-8")
