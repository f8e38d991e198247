from __future__ import annotations

import pytest

from histotext import errors
from histotext.entities import EntityMention, EntityRecord
from histotext.segment import Sentence, Token, split_sentences, tokenize
from histotext.tei import TeiBundle, emit_tei, load_schema, parse_tei, validate

SCHEMA = load_schema()


def tiny_bundle() -> TeiBundle:
    text = "Mme Durand paie."
    tokens = tokenize(text, doc_id="doc-1")
    sentences = split_sentences(tokens)
    mention = EntityMention(
        mention_id="doc-1-s0-m0", doc_id="doc-1", sentence_index=0,
        span=(tokens[0].span[0], tokens[1].span[1]), surface="Mme Durand",
        etype="PERSON", gender="feminine", source="title_rule",
        token_range=(0, 1),
    )
    record = EntityRecord(
        record_id="doc-1-r0", doc_id="doc-1", etype="PERSON",
        canonical_surface="Mme Durand", mention_ids=["doc-1-s0-m0"], gender="feminine",
    )
    return TeiBundle(
        doc_id="doc-1", collection_id="minutes", title="Audience",
        date="1835-07-20", provenance="AD 3E", normalized_text=text,
        tokens=tokens, sentences=sentences,
        entity_mentions=[mention], entity_records=[record],
    )


def bundles_from_corpus(corpus_result):
    return [doc.bundle() for _, doc in sorted(corpus_result.documents.items())]


def test_emit_contains_token_anchored_entity():
    xml = emit_tei(tiny_bundle())
    assert 'type="entity"' in xml
    assert 'subtype="PERSON"' in xml
    assert 'tokens="t0 t1"' in xml
    assert xml.count("<annotation") >= 2  # sentence + entity + record


def test_emit_zero_annotation_document_is_valid():
    text = "Rien à signaler."
    tokens = tokenize(text, doc_id="d0")
    bundle = TeiBundle(
        doc_id="d0", collection_id="c", title="Vide", date=None, provenance=None,
        normalized_text=text, tokens=tokens, sentences=split_sentences(tokens),
    )
    xml = emit_tei(bundle)
    report = validate(xml, SCHEMA)
    assert report.ok, report.violations


def test_emit_rejects_dangling_token_reference():
    bundle = tiny_bundle()
    bundle.entity_mentions[0] = EntityMention(
        mention_id="doc-1-s0-m0", doc_id="doc-1", sentence_index=0,
        span=(0, 3), surface="Mme", etype="PERSON", gender="feminine",
        source="title_rule", token_range=(0, 99),
    )
    with pytest.raises(errors.InconsistentLayer):
        emit_tei(bundle)


def test_round_trip_tiny_bundle():
    bundle = tiny_bundle()
    assert parse_tei(emit_tei(bundle)) == bundle


def test_round_trip_fixpoint_all_fixtures(corpus_result):
    for bundle in bundles_from_corpus(corpus_result):
        first = emit_tei(bundle)
        parsed = parse_tei(first)
        assert parsed == bundle
        second = emit_tei(parsed)
        assert second == first  # byte-exact fixpoint


def test_emit_deterministic(corpus_result):
    for bundle in bundles_from_corpus(corpus_result):
        assert emit_tei(bundle) == emit_tei(bundle)


def test_emitted_fixtures_validate(corpus_result):
    for bundle in bundles_from_corpus(corpus_result):
        report = validate(emit_tei(bundle), SCHEMA)
        assert report.ok, (bundle.doc_id, report.violations)
        assert report.schema_version == SCHEMA["version"]


def test_parse_truncated_file_malformed():
    xml = emit_tei(tiny_bundle())
    with pytest.raises(errors.MalformedXml):
        parse_tei(xml[: len(xml) // 2])


def test_validate_empty_file():
    report = validate("", SCHEMA)
    assert not report.ok
    assert len(report.violations) == 1
    assert "no root" in report.violations[0]


def test_validate_unknown_etype_single_violation():
    xml = emit_tei(tiny_bundle())
    bad = xml.replace('subtype="PERSON"', 'subtype="MARTIAN"', 1)
    report = validate(bad, SCHEMA)
    assert not report.ok
    etype_violations = [v for v in report.violations if "subtype" in v]
    assert len(etype_violations) == 1
    assert "MARTIAN" in etype_violations[0]
    assert "doc-1-s0-m0" in etype_violations[0]  # located violation


def test_validate_missing_token_layer():
    xml = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<TEI xmlns="http://www.tei-c.org/ns/1.0" n="1.0">\n'
        "  <teiHeader><fileDesc><titleStmt><title>T</title></titleStmt>"
        '<publicationStmt><idno type="document">d</idno></publicationStmt>'
        "</fileDesc></teiHeader>\n"
        "  <text><body><ab>Du texte sans ancres.</ab></body></text>\n"
        "  <standOff/>\n"
        "</TEI>\n"
    )
    report = validate(xml, SCHEMA)
    assert not report.ok
    assert any("missing token layer" in v for v in report.violations)


def test_parse_raises_schema_violation_on_invalid():
    xml = emit_tei(tiny_bundle()).replace('gender="feminine"', 'gender="aucun"', 1)
    with pytest.raises(errors.SchemaViolation) as exc:
        parse_tei(xml)
    assert any("gender" in v for v in exc.value.violations)


def test_deleting_token_breaks_validation(corpus_result):
    bundle = bundles_from_corpus(corpus_result)[0]
    xml = emit_tei(bundle)
    target = '<w xml:id="t1" '
    start = xml.index(target)
    end = xml.index("/>", start) + 2
    mutated = xml[:start] + xml[end:]
    report = validate(mutated, SCHEMA)
    assert not report.ok
    assert any("t1" in v for v in report.violations)


def test_multibyte_text_survives_round_trip():
    text = "L'œuvre de Mme Lecœur, tissée à Lyon — chef-d'œuvre."
    tokens = tokenize(text, doc_id="mb")
    bundle = TeiBundle(
        doc_id="mb", collection_id="c", title="Multi-octets", date=None,
        provenance=None, normalized_text=text, tokens=tokens,
        sentences=split_sentences(tokens),
    )
    parsed = parse_tei(emit_tei(bundle))
    assert parsed.normalized_text == text
    assert parsed.tokens == tokens


def test_escaped_characters_round_trip():
    text = "Prix < 3 francs & « solde » ; l'aune > 2."
    tokens = tokenize(text, doc_id="esc")
    bundle = TeiBundle(
        doc_id="esc", collection_id="c", title="Esperluette & chevrons", date=None,
        provenance=None, normalized_text=text, tokens=tokens,
        sentences=split_sentences(tokens),
    )
    first = emit_tei(bundle)
    parsed = parse_tei(first)
    assert parsed == bundle
    assert emit_tei(parsed) == first
