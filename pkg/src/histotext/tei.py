"""TEI XML serialization of documents plus all annotation layers.

The emitted subset keeps the normalized text as one flow inside
``text/body/ab`` with empty ``<w/>`` token milestones (and sentence
``<milestone/>`` marks) interleaved at their byte offsets, so the text
round-trips byte-exactly.  Every annotation lives in ``<standOff>`` lists
and references tokens by id (``t0``, ``t1``, …).  The schema is a bundled
JSON document (versioned) and validation enforces structure, enums, span
integrity, and reference resolution — a report, never an exception.

Emission is deterministic: same bundle, same bytes.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from xml.sax.saxutils import escape, quoteattr

from .concepts import ConceptMention
from .entities import EntityMention, EntityRecord
from .errors import InconsistentLayer, MalformedXml, SchemaViolation
from .relations import SemanticRelation
from .segment import Sentence, Token

TEI_NS = "http://www.tei-c.org/ns/1.0"
XML_ID = "{http://www.w3.org/XML/1998/namespace}id"


@dataclass
class TeiBundle:
    doc_id: str
    collection_id: str
    title: str
    date: str | None
    provenance: str | None
    normalized_text: str
    tokens: list[Token]
    sentences: list[Sentence]
    entity_mentions: list[EntityMention] = field(default_factory=list)
    entity_records: list[EntityRecord] = field(default_factory=list)
    concept_mentions: list[ConceptMention] = field(default_factory=list)
    relations: list[SemanticRelation] = field(default_factory=list)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str]
    schema_version: str


def load_schema(path=None) -> dict:
    if path is not None:
        return json.loads(open(path, encoding="utf-8").read())
    ref = importlib_resources.files("histotext") / "resources" / "tei_schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))


# -- emission ---------------------------------------------------------------

def emit_tei(bundle: TeiBundle, schema: dict | None = None) -> str:
    """Serialize a bundle to TEI XML; stable ids, stable ordering."""
    schema = schema or load_schema()
    _check_layers(bundle)
    text_bytes = bundle.normalized_text.encode("utf-8")
    out: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append(f'<TEI xmlns="{TEI_NS}" n={quoteattr(schema["version"])}>')
    out.append("  <teiHeader>")
    out.append("    <fileDesc>")
    out.append("      <titleStmt>")
    out.append(f"        <title>{escape(bundle.title)}</title>")
    out.append("      </titleStmt>")
    out.append("      <publicationStmt>")
    out.append(f'        <idno type="document">{escape(bundle.doc_id)}</idno>')
    out.append(f'        <idno type="collection">{escape(bundle.collection_id)}</idno>')
    out.append("      </publicationStmt>")
    out.append("      <sourceDesc>")
    out.append("        <bibl>")
    if bundle.date is not None:
        out.append(f"          <date when={quoteattr(bundle.date)}>{escape(bundle.date)}</date>")
    if bundle.provenance is not None:
        out.append(f'          <note type="provenance">{escape(bundle.provenance)}</note>')
    out.append("        </bibl>")
    out.append("      </sourceDesc>")
    out.append("    </fileDesc>")
    out.append("  </teiHeader>")
    out.append("  <text>")
    out.append("    <body>")
    out.append("      " + _render_ab(bundle, text_bytes))
    out.append("    </body>")
    out.append("  </text>")
    out.append("  <standOff>")
    _render_sentences_list(out, bundle)
    _render_entities(out, bundle)
    _render_records(out, bundle)
    _render_concepts(out, bundle)
    _render_relations(out, bundle)
    out.append("  </standOff>")
    out.append("</TEI>")
    return "\n".join(out) + "\n"


def _check_layers(bundle: TeiBundle) -> None:
    n = len(bundle.tokens)
    text_len = len(bundle.normalized_text.encode("utf-8"))
    for token in bundle.tokens:
        if token.span[1] > text_len or token.span[0] < 0:
            raise InconsistentLayer(f"token {token.index} span outside text")
    for s in bundle.sentences:
        if s.token_range[1] >= n:
            raise InconsistentLayer(f"sentence {s.index} references token {s.token_range[1]}")
    for m in bundle.entity_mentions:
        if m.token_range[1] >= n:
            raise InconsistentLayer(f"mention {m.mention_id} references token {m.token_range[1]}")
    for c in bundle.concept_mentions:
        if c.token_range[1] >= n:
            raise InconsistentLayer(f"concept mention references token {c.token_range[1]}")
    mention_ids = {m.mention_id for m in bundle.entity_mentions}
    for r in bundle.entity_records:
        for mid in r.mention_ids:
            if mid not in mention_ids:
                raise InconsistentLayer(f"record {r.record_id} references mention {mid}")
    n_sentences = len(bundle.sentences)
    for rel in bundle.relations:
        if rel.sentence_index >= n_sentences:
            raise InconsistentLayer(f"relation {rel.relation_id} references sentence {rel.sentence_index}")


def _render_ab(bundle: TeiBundle, text_bytes: bytes) -> str:
    sentence_starts = {s.token_range[0]: s.index for s in bundle.sentences}
    parts: list[str] = ["<ab>"]
    pos = 0
    for token in bundle.tokens:
        start, end = token.span
        parts.append(escape(text_bytes[pos:start].decode("utf-8")))
        if token.index in sentence_starts:
            parts.append(f'<milestone unit="sentence" xml:id="s{sentence_starts[token.index]}"/>')
        word = "1" if token.is_word else "0"
        parts.append(f'<w xml:id="t{token.index}" from="{start}" to="{end}" word="{word}"/>')
        pos = start
    parts.append(escape(text_bytes[pos:].decode("utf-8")))
    parts.append("</ab>")
    return "".join(parts)


def _render_sentences_list(out: list[str], bundle: TeiBundle) -> None:
    out.append('    <listAnnotation type="sentences">')
    for s in bundle.sentences:
        out.append(
            f'      <annotation type="sentence" corresp="#s{s.index}" '
            f'tokens="t{s.token_range[0]} t{s.token_range[1]}"/>'
        )
    out.append("    </listAnnotation>")


def _render_entities(out: list[str], bundle: TeiBundle) -> None:
    record_of = {}
    for r in bundle.entity_records:
        for mid in r.mention_ids:
            record_of[mid] = r.record_id
    out.append('    <listAnnotation type="entities">')
    for m in bundle.entity_mentions:
        attrs = [
            ("xml:id", m.mention_id),
            ("type", "entity"),
            ("subtype", m.etype),
            ("gender", m.gender),
            ("source", m.source),
            ("sentence", f"s{m.sentence_index}"),
            ("tokens", f"t{m.token_range[0]} t{m.token_range[1]}"),
        ]
        if m.mention_id in record_of:
            attrs.append(("record", record_of[m.mention_id]))
        if m.iso_value is not None:
            attrs.append(("iso", m.iso_value))
        out.append("      <annotation " + " ".join(f"{k}={quoteattr(v)}" for k, v in attrs) + "/>")
    out.append("    </listAnnotation>")


def _render_records(out: list[str], bundle: TeiBundle) -> None:
    out.append('    <listAnnotation type="entityRecords">')
    for r in bundle.entity_records:
        out.append(
            "      <annotation "
            + " ".join(
                f"{k}={quoteattr(v)}"
                for k, v in [
                    ("xml:id", r.record_id),
                    ("type", "entityRecord"),
                    ("subtype", r.etype),
                    ("gender", r.gender),
                    ("canonical", r.canonical_surface),
                    ("mentions", " ".join(r.mention_ids)),
                ]
            )
            + "/>"
        )
    out.append("    </listAnnotation>")


def _render_concepts(out: list[str], bundle: TeiBundle) -> None:
    out.append('    <listAnnotation type="concepts">')
    for c in bundle.concept_mentions:
        out.append(
            "      <annotation "
            + " ".join(
                f"{k}={quoteattr(v)}"
                for k, v in [
                    ("type", "concept"),
                    ("category", c.category),
                    ("cluster", c.concept_id),
                    ("member", c.matched_member),
                    ("sentence", f"s{c.sentence_index}"),
                    ("tokens", f"t{c.token_range[0]} t{c.token_range[1]}"),
                ]
            )
            + "/>"
        )
    out.append("    </listAnnotation>")


def _render_relations(out: list[str], bundle: TeiBundle) -> None:
    out.append('    <listAnnotation type="relations">')
    for rel in bundle.relations:
        out.append(
            "      <annotation "
            + " ".join(
                f"{k}={quoteattr(v)}"
                for k, v in [
                    ("xml:id", rel.relation_id),
                    ("type", "relation"),
                    ("predicate", rel.predicate),
                    ("sentence", f"s{rel.sentence_index}"),
                ]
            )
            + ">"
        )
        for role, value in rel.arguments.items():
            out.append(f"        <arg role={quoteattr(role)} value={quoteattr(value)}/>")
        out.append("      </annotation>")
    out.append("    </listAnnotation>")


# -- validation -------------------------------------------------------------

def validate(xml_text: str, schema: dict | None = None) -> ValidationReport:
    """Structural validation; returns a report, never raises."""
    schema = schema or load_schema()
    version = schema["version"]
    violations: list[str] = []
    if not xml_text.strip():
        return ValidationReport(False, ["document: no root element"], version)
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        return ValidationReport(False, [f"document: not well-formed: {exc}"], version)
    _validate_tree(root, schema, violations)
    return ValidationReport(not violations, violations, version)


def _tag(name: str) -> str:
    return f"{{{TEI_NS}}}{name}"


def _validate_tree(root, schema: dict, violations: list[str]) -> None:
    if root.tag != _tag("TEI"):
        violations.append(f"document: root element is {root.tag!r}, expected TEI")
        return
    header = root.find(_tag("teiHeader"))
    if header is None:
        violations.append("TEI: missing teiHeader")
    else:
        if header.find(f"{_tag('fileDesc')}/{_tag('titleStmt')}/{_tag('title')}") is None:
            violations.append("teiHeader: missing fileDesc/titleStmt/title")
        idnos = {e.get("type"): e.text for e in header.iter(_tag("idno"))}
        if "document" not in idnos:
            violations.append("teiHeader: missing idno[@type='document']")
    ab = root.find(f"{_tag('text')}/{_tag('body')}/{_tag('ab')}")
    if ab is None:
        violations.append("text/body: missing ab element")
        return

    text, token_spans, token_order = _collect_ab(ab)
    text_bytes = text.encode("utf-8")
    if text.strip() and not token_spans:
        violations.append("body/ab: missing token layer (no w milestones)")
    expected_ids = [f"t{i}" for i in range(len(token_order))]
    if token_order != expected_ids:
        missing = sorted(set(expected_ids) - set(token_order))
        detail = f"missing {missing[0]}" if missing else "ids out of order"
        violations.append(f"body/ab: token ids are not contiguous ({detail})")
    last_end = 0
    for tid in token_order:
        start, end = token_spans[tid]
        if start < last_end:
            violations.append(f"body/ab/w[@xml:id={tid!r}]: spans overlap or decrease")
        if end > len(text_bytes) or start >= end:
            violations.append(f"body/ab/w[@xml:id={tid!r}]: span outside text")
        last_end = max(last_end, end)

    sentence_ids = {
        m.get(XML_ID)
        for m in ab.iter(_tag("milestone"))
        if m.get("unit") == "sentence"
    }

    standoff = root.find(_tag("standOff"))
    if standoff is None:
        violations.append("TEI: missing standOff")
        return
    lists = {la.get("type"): la for la in standoff.findall(_tag("listAnnotation"))}
    for required in ("sentences", "entities", "entityRecords", "concepts", "relations"):
        if required not in lists:
            violations.append(f"standOff: missing listAnnotation[@type={required!r}]")

    def check_tokens(ann, where: str) -> None:
        ref = ann.get("tokens", "")
        parts = ref.split()
        if len(parts) != 2:
            violations.append(f"{where}: bad tokens reference {ref!r}")
            return
        for tid in parts:
            if tid not in token_spans:
                violations.append(f"{where}: unresolved token reference {tid!r}")

    mention_ids = set()
    for la_type, la in lists.items():
        for ann in la.findall(_tag("annotation")):
            where = f"standOff/{la_type}/{ann.get(XML_ID) or ann.get('corresp') or '?'}"
            if la_type in ("sentences", "entities", "concepts"):
                check_tokens(ann, where)
            if la_type == "entities":
                mention_ids.add(ann.get(XML_ID))
                if ann.get("subtype") not in schema["entity_types"]:
                    violations.append(f"{where}: unknown subtype {ann.get('subtype')!r}")
                if ann.get("gender") not in schema["genders"]:
                    violations.append(f"{where}: unknown gender {ann.get('gender')!r}")
                if ann.get("source") not in schema["sources"]:
                    violations.append(f"{where}: unknown source {ann.get('source')!r}")
                if ann.get("sentence") not in sentence_ids:
                    violations.append(f"{where}: unresolved sentence {ann.get('sentence')!r}")
            if la_type == "concepts":
                if ann.get("category") not in schema["concept_categories"]:
                    violations.append(f"{where}: unknown category {ann.get('category')!r}")
                if ann.get("sentence") not in sentence_ids:
                    violations.append(f"{where}: unresolved sentence {ann.get('sentence')!r}")
            if la_type == "relations":
                if ann.get("sentence") not in sentence_ids:
                    violations.append(f"{where}: unresolved sentence {ann.get('sentence')!r}")
                for arg in ann.findall(_tag("arg")):
                    if arg.get("role") not in schema["roles"]:
                        violations.append(f"{where}: unknown role {arg.get('role')!r}")
    if "entityRecords" in lists:
        for ann in lists["entityRecords"].findall(_tag("annotation")):
            where = f"standOff/entityRecords/{ann.get(XML_ID)}"
            for mid in ann.get("mentions", "").split():
                if mid not in mention_ids:
                    violations.append(f"{where}: unresolved mention {mid!r}")


def _collect_ab(ab) -> tuple[str, dict[str, tuple[int, int]], list[str]]:
    pieces = [ab.text or ""]
    token_spans: dict[str, tuple[int, int]] = {}
    token_order: list[str] = []
    for child in ab:
        if child.tag == _tag("w"):
            tid = child.get(XML_ID, "")
            try:
                span = (int(child.get("from", "-1")), int(child.get("to", "-1")))
            except ValueError:
                span = (-1, -1)
            token_spans[tid] = span
            token_order.append(tid)
        pieces.append(child.tail or "")
    return "".join(pieces), token_spans, token_order


# -- parsing ----------------------------------------------------------------

def parse_tei(xml_text: str, schema: dict | None = None) -> TeiBundle:
    """Rebuild a bundle from TEI XML; inverse of :func:`emit_tei`."""
    schema = schema or load_schema()
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from None
    report = validate(xml_text, schema)
    if not report.ok:
        raise SchemaViolation(report.violations)

    header = root.find(_tag("teiHeader"))
    title_el = header.find(f"{_tag('fileDesc')}/{_tag('titleStmt')}/{_tag('title')}")
    idnos = {e.get("type"): (e.text or "") for e in header.iter(_tag("idno"))}
    date_el = header.find(f".//{_tag('date')}")
    note_el = None
    for el in header.iter(_tag("note")):
        if el.get("type") == "provenance":
            note_el = el
            break
    doc_id = idnos.get("document", "")
    collection_id = idnos.get("collection", "")

    ab = root.find(f"{_tag('text')}/{_tag('body')}/{_tag('ab')}")
    text, token_spans, token_order = _collect_ab(ab)
    text_bytes = text.encode("utf-8")

    tokens: list[Token] = []
    index_of: dict[str, int] = {}
    sentence_first: dict[int, str] = {}  # token position -> sentence id
    position = 0
    pending_sentence: str | None = None
    for child in ab:
        if child.tag == _tag("milestone") and child.get("unit") == "sentence":
            pending_sentence = child.get(XML_ID)
        elif child.tag == _tag("w"):
            tid = child.get(XML_ID, "")
            start, end = token_spans[tid]
            surface = text_bytes[start:end].decode("utf-8")
            word = child.get("word", "1") == "1"
            tokens.append(Token(doc_id=doc_id, index=position, span=(start, end),
                                surface=surface, is_word=word))
            index_of[tid] = position
            if pending_sentence is not None:
                sentence_first[position] = pending_sentence
                pending_sentence = None
            position += 1

    standoff = root.find(_tag("standOff"))
    lists = {la.get("type"): la for la in standoff.findall(_tag("listAnnotation"))}

    sentences: list[Sentence] = []
    for ann in lists["sentences"].findall(_tag("annotation")):
        first_id, last_id = ann.get("tokens", "").split()
        first, last = index_of[first_id], index_of[last_id]
        sentences.append(
            Sentence(
                doc_id=doc_id,
                index=len(sentences),
                token_range=(first, last),
                span=(tokens[first].span[0], tokens[last].span[1]),
            )
        )

    mentions: list[EntityMention] = []
    record_members: dict[str, list[str]] = {}
    for ann in lists["entities"].findall(_tag("annotation")):
        first_id, last_id = ann.get("tokens", "").split()
        first, last = index_of[first_id], index_of[last_id]
        span = (tokens[first].span[0], tokens[last].span[1])
        surface = " ".join(t.surface for t in tokens[first:last + 1])
        mid = ann.get(XML_ID, "")
        mentions.append(
            EntityMention(
                mention_id=mid,
                doc_id=doc_id,
                sentence_index=int(ann.get("sentence", "s0")[1:]),
                span=span,
                surface=surface,
                etype=ann.get("subtype", ""),
                gender=ann.get("gender", "unknown"),
                source=ann.get("source", "gazetteer"),
                iso_value=ann.get("iso"),
                token_range=(first, last),
            )
        )
        record = ann.get("record")
        if record is not None:
            record_members.setdefault(record, []).append(mid)

    records: list[EntityRecord] = []
    for ann in lists["entityRecords"].findall(_tag("annotation")):
        rid = ann.get(XML_ID, "")
        records.append(
            EntityRecord(
                record_id=rid,
                doc_id=doc_id,
                etype=ann.get("subtype", ""),
                canonical_surface=ann.get("canonical", ""),
                mention_ids=ann.get("mentions", "").split(),
                gender=ann.get("gender", "unknown"),
            )
        )

    concept_mentions: list[ConceptMention] = []
    for ann in lists["concepts"].findall(_tag("annotation")):
        first_id, last_id = ann.get("tokens", "").split()
        first, last = index_of[first_id], index_of[last_id]
        concept_mentions.append(
            ConceptMention(
                doc_id=doc_id,
                sentence_index=int(ann.get("sentence", "s0")[1:]),
                span=(tokens[first].span[0], tokens[last].span[1]),
                concept_id=ann.get("cluster", ""),
                category=ann.get("category", ""),
                matched_member=ann.get("member", ""),
                token_range=(first, last),
            )
        )

    relations: list[SemanticRelation] = []
    for ann in lists["relations"].findall(_tag("annotation")):
        arguments = {
            arg.get("role", ""): arg.get("value", "")
            for arg in ann.findall(_tag("arg"))
        }
        relations.append(
            SemanticRelation(
                relation_id=ann.get(XML_ID, ""),
                predicate=ann.get("predicate", ""),
                arguments=arguments,
                doc_id=doc_id,
                sentence_index=int(ann.get("sentence", "s0")[1:]),
            )
        )

    return TeiBundle(
        doc_id=doc_id,
        collection_id=collection_id,
        title=title_el.text or "" if title_el is not None else "",
        date=date_el.get("when") if date_el is not None else None,
        provenance=(note_el.text or "") if note_el is not None else None,
        normalized_text=text,
        tokens=tokens,
        sentences=sentences,
        entity_mentions=mentions,
        entity_records=records,
        concept_mentions=concept_mentions,
        relations=relations,
    )
