// Rendering an arbitrary payload that respects the documented contract
// must never throw, whatever the distributions, spans, or characters.

import { describe, expect, it } from "vitest";

import type { DocumentPayload, SearchPayload, StatsPayload } from "../src/api";
import { textContent } from "../src/html";
import { renderConcordance } from "../src/views/concordance";
import { renderDashboard } from "../src/views/dashboard";
import { renderDocument } from "../src/views/document";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const WORDS = ["ouvrière", "somme", "atelier", "Lecœur", "pièce & <fil>", "très-vieux", "1835"];
const CATEGORIES = ["agent", "product", "money", "time", "work_activity"];
const ETYPES = ["PERSON", "LOCATION", "DATE", "ORGANIZATION"];
const GENDERS = ["feminine", "masculine", "unknown"];

function pick<T>(rng: () => number, items: T[]): T {
  return items[Math.floor(rng() * items.length)];
}

function randomCounts(rng: () => number, keys: string[]): Record<string, number> {
  const out: Record<string, number> = {};
  for (const key of keys) {
    if (rng() < 0.7) out[key] = Math.floor(rng() * 5000);
  }
  return out;
}

function randomStats(rng: () => number): StatsPayload {
  const representative: Record<string, [string, number][]> = {};
  for (const category of CATEGORIES) {
    if (rng() < 0.5) {
      representative[category] = WORDS.slice(0, Math.floor(rng() * WORDS.length)).map(
        (w) => [w, Math.floor(rng() * 100)],
      );
    }
  }
  return {
    counters: randomCounts(rng, ["documents", "sentences", "tokens", "entities", "concepts"]),
    entity_distribution: randomCounts(rng, ETYPES),
    concept_distribution: randomCounts(rng, CATEGORIES),
    representative_concepts: representative,
    gender_distribution: {
      entities: { PERSON: randomCounts(rng, GENDERS) },
      agent_concepts: {},
      agent_totals: randomCounts(rng, GENDERS),
    },
  };
}

function randomSearch(rng: () => number): SearchPayload {
  const hits = [];
  const n = Math.floor(rng() * 6);
  for (let i = 0; i < n; i++) {
    hits.push({
      doc_id: `doc-${i}`,
      sentence: Math.floor(rng() * 9),
      left: pick(rng, WORDS),
      match: pick(rng, WORDS),
      right: pick(rng, WORDS),
      start: Math.floor(rng() * 300),
      end: Math.floor(rng() * 300),
    });
  }
  return {
    total: n,
    unknown_key: rng() < 0.2,
    query: { kind: "concept", key: pick(rng, WORDS) },
    hits,
  };
}

function randomDocument(rng: () => number): DocumentPayload {
  const words = [];
  const n = 3 + Math.floor(rng() * 30);
  for (let i = 0; i < n; i++) words.push(pick(rng, WORDS));
  const text = words.join(" ");
  const byteLength = new TextEncoder().encode(text).length;
  const span = () => {
    const a = Math.floor(rng() * byteLength);
    const b = Math.floor(rng() * byteLength);
    return [Math.min(a, b), Math.max(a, b)] as const;
  };
  const sentences = [];
  const entities = [];
  const concepts = [];
  const relations = [];
  for (let i = 0; i < Math.floor(rng() * 4); i++) {
    const [start, end] = span();
    sentences.push({ index: i, start, end, first_token: 0, last_token: 0 });
  }
  for (let i = 0; i < Math.floor(rng() * 4); i++) {
    const [start, end] = span();
    entities.push({
      mention_id: `m${i}`, sentence: 0, start, end,
      surface: pick(rng, WORDS), etype: pick(rng, ETYPES),
      gender: pick(rng, GENDERS), source: "gazetteer",
      record_id: rng() < 0.5 ? `r${i}` : null, iso_value: null,
    });
  }
  for (let i = 0; i < Math.floor(rng() * 4); i++) {
    const [start, end] = span();
    concepts.push({
      sentence: 0, start, end, category: pick(rng, CATEGORIES),
      member: pick(rng, WORDS), cluster: "c_x",
    });
  }
  for (let i = 0; i < Math.floor(rng() * 3); i++) {
    relations.push({
      relation_id: `rel-${i}`,
      sentence: Math.floor(rng() * 6),  // may point past the sentence list
      predicate: pick(rng, WORDS),
      arguments: { agent: pick(rng, WORDS) },
    });
  }
  return {
    id: "fuzz-doc", collection: "fuzz", title: pick(rng, WORDS),
    date: rng() < 0.5 ? "1848-06-15" : null,
    text, tokens: [], sentences, entities, concepts, relations,
  };
}

describe("fuzzing the renderers over the contract", () => {
  it("dashboard never throws", () => {
    const rng = mulberry32(1835);
    for (let i = 0; i < 100; i++) {
      expect(() => renderDashboard(randomStats(rng))).not.toThrow();
    }
  });

  it("concordance never throws and always shows the payload total", () => {
    const rng = mulberry32(1848);
    for (let i = 0; i < 100; i++) {
      const payload = randomSearch(rng);
      const html = renderConcordance(payload);
      expect(html).toContain(`<span class="total">${payload.total}</span>`);
    }
  });

  it("document view never throws and never alters the text", () => {
    const rng = mulberry32(1861);
    for (let i = 0; i < 100; i++) {
      const doc = randomDocument(rng);
      const layers = {
        entities: rng() < 0.5, concepts: rng() < 0.5, relations: rng() < 0.5,
      };
      const selection = rng() < 0.3
        ? { docId: doc.id, start: 0, end: Math.floor(rng() * 10) }
        : null;
      const html = renderDocument(doc, selection, layers);
      expect(textContent(html)).toContain(doc.text);
    }
  });
});
