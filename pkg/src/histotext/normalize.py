"""Rule-based post-correction of transcriptions.

Three rule kinds share one tab-separated table:

* ``substitution`` — word-bounded literal rewrite (spelling modernization),
* ``abbreviation`` — same mechanics, counted separately (expansion),
* ``date_pattern`` — regex with named groups ``day``/``month``/``year``;
  matches are *annotated* with an ISO value, never rewritten.

Rewriting is a single left-to-right pass, leftmost-longest, file order
breaking ties.  Every edit is recorded in an :class:`EditMap` holding byte
spans in both coordinate systems, so downstream annotations stay traceable
to the raw transcription.  Normalization never deletes text.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .errors import DuplicateRule, ParseError

RULE_KINDS = ("substitution", "abbreviation", "date_pattern")

_MONTHS = {
    "janvier": 1, "février": 2, "fevrier": 2, "mars": 3, "avril": 4,
    "mai": 5, "juin": 6, "juillet": 7, "août": 8, "aout": 8,
    "septembre": 9, "octobre": 10, "novembre": 11, "décembre": 12,
    "decembre": 12,
}


@dataclass(frozen=True)
class NormalizationRule:
    kind: str
    match: str
    replacement: str
    case_sensitive: bool = True
    regex: re.Pattern | None = field(default=None, compare=False)

    @property
    def rule_id(self) -> str:
        return self.match


@dataclass(frozen=True)
class RuleTable:
    rules: tuple[NormalizationRule, ...]
    version: str

    @property
    def rewrite_rules(self) -> list[NormalizationRule]:
        return [r for r in self.rules if r.kind in ("substitution", "abbreviation")]

    @property
    def date_rules(self) -> list[NormalizationRule]:
        return [r for r in self.rules if r.kind == "date_pattern"]


@dataclass(frozen=True)
class Edit:
    raw_span: tuple[int, int]          # byte range in raw text
    normalized_span: tuple[int, int]   # byte range in normalized text
    rule_id: str


@dataclass(frozen=True)
class EditMap:
    edits: tuple[Edit, ...]

    def apply(self, raw_text: str, table: RuleTable) -> str:
        """Recompose the normalized text from the raw text plus the edits."""
        by_id = {r.rule_id: r for r in table.rewrite_rules}
        raw = raw_text.encode("utf-8")
        out = bytearray()
        pos = 0
        for edit in self.edits:
            start, end = edit.raw_span
            out += raw[pos:start]
            out += by_id[edit.rule_id].replacement.encode("utf-8")
            pos = end
        out += raw[pos:]
        return out.decode("utf-8")


@dataclass(frozen=True)
class DateAnnotation:
    span: tuple[int, int]  # byte range in normalized text
    iso_value: str         # YYYY or YYYY-MM or YYYY-MM-DD


def compile_rules(rule_file: str) -> RuleTable:
    """Compile a rule table from tab-separated lines.

    Columns are ``kind <TAB> match <TAB> replacement`` with an optional
    fourth column ``ci`` marking a rule case-insensitive.  Rules keep file
    order; the table version is a hash of the file content.
    """
    rules: list[NormalizationRule] = []
    seen: set[tuple[str, str]] = set()
    for line_no, line in enumerate(rule_file.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) not in (3, 4):
            raise ParseError(line_no, f"expected 3 or 4 tab-separated fields, got {len(parts)}")
        kind, match, replacement = parts[0], parts[1], parts[2]
        if kind not in RULE_KINDS:
            raise ParseError(line_no, f"unknown rule kind {kind!r}")
        if not match:
            raise ParseError(line_no, "empty match")
        case_sensitive = True
        if len(parts) == 4:
            if parts[3] not in ("ci", "cs"):
                raise ParseError(line_no, f"bad flag {parts[3]!r}")
            case_sensitive = parts[3] == "cs"
        if (kind, match) in seen:
            raise DuplicateRule(f"line {line_no}: duplicate ({kind}, {match!r})")
        seen.add((kind, match))
        regex = None
        if kind == "date_pattern":
            try:
                regex = re.compile(match, 0 if case_sensitive else re.IGNORECASE)
            except re.error as exc:
                raise ParseError(line_no, f"bad pattern: {exc}") from None
        rules.append(NormalizationRule(kind, match, replacement, case_sensitive, regex))
    version = hashlib.sha256(rule_file.encode("utf-8")).hexdigest()[:12]
    return RuleTable(rules=tuple(rules), version=version)


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def _word_bounded(text: str, start: int, end: int) -> bool:
    if start > 0 and _is_word_char(text[start - 1]):
        return False
    if end < len(text) and _is_word_char(text[end]):
        return False
    return True


def normalize(raw_text: str, table: RuleTable) -> tuple[str, EditMap, dict[str, int]]:
    """Rewrite all matching occurrences; returns text, edit map, fire counts.

    Total function: any input yields an output.  Counts are keyed by the
    rule's match string and include zero entries for rules that never fired.
    """
    rules = table.rewrite_rules
    counts: dict[str, int] = {r.rule_id: 0 for r in rules}
    out_parts: list[str] = []
    edits: list[tuple[int, int, int, int, str]] = []  # char spans, converted later
    i = 0
    out_len = 0  # chars emitted so far
    n = len(raw_text)
    while i < n:
        best: NormalizationRule | None = None
        for rule in rules:
            m = rule.match
            if best is not None and len(m) <= len(best.match):
                continue  # leftmost-longest; file order settles equal lengths
            end = i + len(m)
            if end > n:
                continue
            frag = raw_text[i:end]
            hit = frag == m if rule.case_sensitive else frag.lower() == m.lower()
            if hit and _word_bounded(raw_text, i, end):
                best = rule
        if best is None:
            out_parts.append(raw_text[i])
            out_len += 1
            i += 1
        else:
            repl = best.replacement
            edits.append((i, i + len(best.match), out_len, out_len + len(repl), best.rule_id))
            out_parts.append(repl)
            out_len += len(repl)
            i += len(best.match)
            counts[best.rule_id] += 1
    normalized = "".join(out_parts)
    raw_off = _byte_offsets(raw_text)
    norm_off = _byte_offsets(normalized)
    edit_map = EditMap(
        edits=tuple(
            Edit(
                raw_span=(raw_off[rs], raw_off[re_]),
                normalized_span=(norm_off[ns], norm_off[ne]),
                rule_id=rid,
            )
            for rs, re_, ns, ne, rid in edits
        )
    )
    return normalized, edit_map, counts


def _byte_offsets(text: str) -> list[int]:
    """Byte offset of each char position, plus the final length."""
    offsets = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return offsets


def _render_iso(groups: dict[str, str | None]) -> str | None:
    year = groups.get("year")
    if year is None:
        return None
    iso = f"{int(year):04d}"
    month = groups.get("month")
    if month is not None:
        month_no = _MONTHS.get(month.lower())
        if month_no is None:
            if not month.isdigit():
                return None
            month_no = int(month)
        iso += f"-{month_no:02d}"
        day = groups.get("day")
        if day is not None:
            day_digits = re.sub(r"\D", "", day)
            if not day_digits:
                return None
            iso += f"-{int(day_digits):02d}"
    return iso


def standardize_dates(normalized_text: str, table: RuleTable) -> list[DateAnnotation]:
    """Annotate date expressions with ISO values; longest match wins.

    Candidates from every date rule compete; overlaps are resolved longest
    first, then leftmost, then rule file order, so exactly one annotation
    survives per region of text.
    """
    offsets = _byte_offsets(normalized_text)
    candidates: list[tuple[int, int, int, str]] = []  # (start, end, rule_index, iso)
    for rule_index, rule in enumerate(table.date_rules):
        assert rule.regex is not None
        for m in rule.regex.finditer(normalized_text):
            if not _word_bounded(normalized_text, m.start(), m.end()):
                continue
            iso = _render_iso(m.groupdict())
            if iso is None:
                continue
            candidates.append((m.start(), m.end(), rule_index, iso))
    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0], c[2]))
    taken: list[tuple[int, int]] = []
    chosen: list[tuple[int, int, str]] = []
    for start, end, _, iso in candidates:
        if any(start < t_end and end > t_start for t_start, t_end in taken):
            continue
        taken.append((start, end))
        chosen.append((start, end, iso))
    chosen.sort()
    return [
        DateAnnotation(span=(offsets[start], offsets[end]), iso_value=iso)
        for start, end, iso in chosen
    ]
