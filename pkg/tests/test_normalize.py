from __future__ import annotations

import pytest

from histotext import errors
from histotext.normalize import compile_rules, normalize, standardize_dates
from histotext.pipeline import PipelineConfig

BUNDLED = PipelineConfig().load_rules()


def test_compile_preserves_file_order():
    table = compile_rules("substitution\taaa\tbbb\nsubstitution\tccc\tddd\n")
    assert [r.match for r in table.rules] == ["aaa", "ccc"]
    assert len(table.rules) == 2


def test_compile_rejects_duplicates():
    with pytest.raises(errors.DuplicateRule):
        compile_rules("substitution\tpardevant\tpar-devant\nsubstitution\tpardevant\tautre\n")


def test_compile_rejects_bad_lines():
    with pytest.raises(errors.ParseError) as exc:
        compile_rules("substitution\tonly-two-fields\n")
    assert exc.value.line_no == 1
    with pytest.raises(errors.ParseError):
        compile_rules("mauvais_kind\ta\tb\n")
    with pytest.raises(errors.ParseError):
        compile_rules("date_pattern\t(?P<broken\tx\n")


def test_version_is_content_hash():
    a = compile_rules("substitution\ta\tb\n")
    b = compile_rules("substitution\ta\tb\n")
    c = compile_rules("substitution\ta\tc\n")
    assert a.version == b.version
    assert a.version != c.version


def test_bundled_table_contains_cited_corrections():
    subs = {(r.match, r.replacement) for r in BUNDLED.rules if r.kind == "substitution"}
    assert ("pardevant", "par-devant") in subs
    assert ("engagemens", "engagements") in subs
    assert len([r for r in BUNDLED.rules if r.kind == "substitution"]) >= 2


def test_pardevant_correction():
    text, _, counts = normalize("pardevant", BUNDLED)
    assert text == "par-devant"
    assert counts["pardevant"] == 1


def test_engagemens_correction():
    text, _, _ = normalize("engagemens", BUNDLED)
    assert text == "engagements"


def test_empty_input():
    text, edit_map, counts = normalize("", BUNDLED)
    assert text == ""
    assert edit_map.edits == ()
    assert sum(counts.values()) == 0


def test_two_edits_with_counts():
    raw = "Il comparut pardevant nous; ses engagemens restent."
    text, edit_map, counts = normalize(raw, BUNDLED)
    assert text == "Il comparut par-devant nous; ses engagements restent."
    assert len(edit_map.edits) == 2
    assert counts["pardevant"] == 1
    assert counts["engagemens"] == 1
    assert sum(counts.values()) == len(edit_map.edits)


def test_word_bounded_never_fires_inside_words():
    # 'pardevant' embedded in a longer word must not be rewritten
    text, _, counts = normalize("lepardevantque pardevants", BUNDLED)
    assert text == "lepardevantque pardevants"
    assert counts["pardevant"] == 0


def test_edit_map_traceability_and_composition():
    raw = "Vu les engagemens, il comparut pardevant le conseil."
    text, edit_map, _ = normalize(raw, BUNDLED)
    raw_bytes = raw.encode("utf-8")
    text_bytes = text.encode("utf-8")
    by_id = {r.rule_id: r for r in BUNDLED.rewrite_rules}
    for edit in edit_map.edits:
        assert raw_bytes[edit.raw_span[0]:edit.raw_span[1]].decode("utf-8") == by_id[edit.rule_id].match
        assert text_bytes[edit.normalized_span[0]:edit.normalized_span[1]].decode("utf-8") == by_id[edit.rule_id].replacement
    assert edit_map.apply(raw, BUNDLED) == text


def test_edit_map_spans_ordered_and_disjoint():
    raw = "pardevant puis engagemens puis pardevants et tems"
    _, edit_map, _ = normalize(raw, BUNDLED)
    spans = [e.raw_span for e in edit_map.edits]
    assert spans == sorted(spans)
    for (a, b), (c, d) in zip(spans, spans[1:]):
        assert b <= c
    norm_spans = [e.normalized_span for e in edit_map.edits]
    assert norm_spans == sorted(norm_spans)


def test_abbreviation_expansion_counted_separately():
    text, _, counts = normalize("une somme de douze fr. au total", BUNDLED)
    assert text == "une somme de douze francs au total"
    assert counts["fr."] == 1


def test_normalize_idempotent_on_fixture_docs(store):
    for doc_id in store.document_ids():
        raw = store.get_document(doc_id).raw_text
        once, _, _ = normalize(raw, BUNDLED)
        twice, _, _ = normalize(once, BUNDLED)
        assert twice == once, doc_id


def test_multibyte_offsets_are_bytes():
    raw = "l'œuvre étrange: engagemens"
    text, edit_map, _ = normalize(raw, BUNDLED)
    (edit,) = edit_map.edits
    # œ and é are multi-byte; spans count bytes, not chars
    assert raw.encode("utf-8")[edit.raw_span[0]:edit.raw_span[1]] == "engagemens".encode("utf-8")
    assert edit.raw_span[0] == len("l'œuvre étrange: ".encode("utf-8"))


# -- date standardization ---------------------------------------------------

def test_full_date():
    annotations = standardize_dates("le 14 juillet 1835", BUNDLED)
    assert len(annotations) == 1
    assert annotations[0].iso_value == "1835-07-14"


def test_year_only():
    annotations = standardize_dates("en 1848", BUNDLED)
    assert [a.iso_value for a in annotations] == ["1848"]


def test_month_year():
    annotations = standardize_dates("en juillet 1835, il vint", BUNDLED)
    assert [a.iso_value for a in annotations] == ["1835-07"]


def test_no_match_without_digits_or_months():
    assert standardize_dates("sans date aucune, rien que du texte", BUNDLED) == []


def test_overlap_resolved_longest_wins():
    # the year pattern alone would also match inside the full date
    annotations = standardize_dates("le 14 juillet 1835", BUNDLED)
    assert len(annotations) == 1
    text = "le 14 juillet 1835"
    start, end = annotations[0].span
    assert text.encode("utf-8")[start:end].decode("utf-8") == "14 juillet 1835"


def test_premier_of_month():
    annotations = standardize_dates("le 1er mai 1891", BUNDLED)
    assert [a.iso_value for a in annotations] == ["1891-05-01"]


def test_annotations_non_overlapping_and_sorted():
    text = "le 14 juillet 1835 puis en 1848 puis mars 1850"
    annotations = standardize_dates(text, BUNDLED)
    assert [a.iso_value for a in annotations] == ["1835-07-14", "1848", "1850-03"]
    spans = [a.span for a in annotations]
    assert spans == sorted(spans)
    for (a, b), (c, d) in zip(spans, spans[1:]):
        assert b <= c


def test_iso_values_well_formed(store):
    rules = BUNDLED
    for doc_id in store.document_ids():
        text, _, _ = normalize(store.get_document(doc_id).raw_text, rules)
        for annotation in standardize_dates(text, rules):
            parts = annotation.iso_value.split("-")
            assert len(parts) in (1, 2, 3)
            assert len(parts[0]) == 4 and parts[0].isdigit()
            for p in parts[1:]:
                assert len(p) == 2 and p.isdigit()
