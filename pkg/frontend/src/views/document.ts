// Close-reading view: the full normalized text with annotation layers
// painted over it. Spans are byte offsets into the UTF-8 text, so the
// renderer slices bytes, never JS string indices. Toggling layers changes
// only the <mark> wrappers — the text content stays byte-identical.

import type { DocumentPayload } from "../api";
import { attr, escapeHtml } from "../html";
import type { LayerToggles, Selection } from "../state";

type Mark = { start: number; end: number; cls: string; label: string };

export function renderDocument(
  doc: DocumentPayload,
  selection: Selection | null,
  layers: LayerToggles,
): string {
  const parts: string[] = ['<section class="document">'];
  parts.push(
    `<div class="dochead"><h2>${escapeHtml(doc.title)}</h2>` +
    `<span class="meta">${escapeHtml(doc.id)} · ${escapeHtml(doc.collection)}` +
    `${doc.date ? " · " + escapeHtml(doc.date) : ""}</span>` +
    ' <button data-action="back-concordance">retour aux résultats</button></div>',
  );
  parts.push('<div class="layerbar">');
  for (const layer of ["entities", "concepts", "relations"] as const) {
    const active = layers[layer] ? "true" : "false";
    parts.push(
      `<button class="layer-toggle" data-action="toggle-layer" data-layer=${attr(layer)} ` +
      `data-enabled="${active}">${layer}</button>`,
    );
  }
  parts.push("</div>");
  parts.push(`<div class="doctext">${renderText(doc, selection, layers)}</div>`);
  parts.push("</section>");
  return parts.join("");
}

export function renderText(
  doc: DocumentPayload,
  selection: Selection | null,
  layers: LayerToggles,
): string {
  const marks: Mark[] = [];
  if (layers.entities) {
    for (const entity of doc.entities) {
      marks.push({
        start: entity.start, end: entity.end,
        cls: "hl-entity", label: entity.etype,
      });
    }
  }
  if (layers.concepts) {
    for (const concept of doc.concepts) {
      marks.push({
        start: concept.start, end: concept.end,
        cls: "hl-concept", label: concept.category,
      });
    }
  }
  if (layers.relations) {
    for (const relation of doc.relations) {
      const sentence = doc.sentences[relation.sentence];
      if (sentence) {
        marks.push({
          start: sentence.start, end: sentence.end,
          cls: "hl-relation", label: relation.predicate,
        });
      }
    }
  }
  if (selection && selection.docId === doc.id) {
    marks.push({ start: selection.start, end: selection.end, cls: "hl-selection", label: "" });
  }

  // Byte cuts are snapped to character boundaries so that a span landing
  // inside a multi-byte character can never corrupt the rendered text.
  const encoder = new TextEncoder();
  const byteAt: number[] = [];   // byte offset of each code point
  const unitAt: number[] = [];   // UTF-16 offset of each code point
  let byteOffset = 0;
  let unitOffset = 0;
  for (const ch of doc.text) {
    byteAt.push(byteOffset);
    unitAt.push(unitOffset);
    byteOffset += encoder.encode(ch).length;
    unitOffset += ch.length;
  }
  byteAt.push(byteOffset);
  unitAt.push(unitOffset);

  const snap = (cut: number): number => {
    const clamped = Math.max(0, Math.min(cut, byteOffset));
    let lo = 0;
    let hi = byteAt.length - 1;
    while (lo < hi) {
      const mid = (lo + hi + 1) >> 1;
      if (byteAt[mid] <= clamped) lo = mid;
      else hi = mid - 1;
    }
    return lo;
  };

  const snapped = marks
    .map((m) => ({ ...m, start: byteAt[snap(m.start)], end: byteAt[snap(m.end)] }))
    .filter((m) => m.start < m.end);
  const cuts = new Set<number>([0, byteAt.length - 1]);
  for (const mark of snapped) {
    cuts.add(snap(mark.start));
    cuts.add(snap(mark.end));
  }
  const boundaries = [...cuts].sort((a, b) => a - b);
  const out: string[] = [];
  for (let i = 0; i + 1 < boundaries.length; i++) {
    const [a, b] = [boundaries[i], boundaries[i + 1]];
    if (a >= b) continue;
    const piece = escapeHtml(doc.text.slice(unitAt[a], unitAt[b]));
    const covering = snapped.filter((m) => m.start <= byteAt[a] && m.end >= byteAt[b]);
    if (covering.length === 0) {
      out.push(piece);
      continue;
    }
    const classes = [...new Set(covering.map((m) => m.cls))].sort().join(" ");
    const labels = [...new Set(covering.map((m) => m.label).filter(Boolean))].sort().join(", ");
    const selected = covering.some((m) => m.cls === "hl-selection");
    out.push(
      `<mark class=${attr(classes)}${labels ? ` title=${attr(labels)}` : ""}` +
      `${selected ? ' data-active="true" id="selection"' : ""}>${piece}</mark>`,
    );
  }
  return out.join("");
}
