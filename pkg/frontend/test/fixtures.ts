// Fixture payloads shaped exactly like the documented service contract.

import type { DocumentPayload, SearchPayload, StatsPayload } from "../src/api";

export const STATS_FIXTURE: StatsPayload = {
  counters: { documents: 2, sentences: 9, tokens: 120, entities: 5, concepts: 12 },
  entity_distribution: { PERSON: 3, LOCATION: 2 },
  concept_distribution: { agent: 7, money: 5 },
  representative_concepts: {
    agent: [["couturière", 4], ["ouvrier", 3]],
    money: [["somme", 3], ["franc", 2]],
  },
  gender_distribution: {
    entities: { PERSON: { feminine: 2, masculine: 1, unknown: 0 } },
    agent_concepts: { "couturière": { feminine: 4 }, ouvrier: { masculine: 3 } },
    agent_totals: { feminine: 4, masculine: 3, unknown: 0 },
  },
};

export const EMPTY_STATS: StatsPayload = {
  counters: { documents: 0, sentences: 0, tokens: 0, entities: 0, concepts: 0 },
  entity_distribution: {},
  concept_distribution: {},
  representative_concepts: {},
  gender_distribution: { entities: {}, agent_concepts: {}, agent_totals: {} },
};

export const SEARCH_FIXTURE: SearchPayload = {
  total: 2,
  unknown_key: false,
  query: { kind: "concept", key: "somme", collection: null },
  hits: [
    {
      doc_id: "minutes-001", sentence: 2,
      left: "atelier réclame une", match: "somme", right: "de douze francs",
      start: 150, end: 155,
    },
    {
      doc_id: "minutes-002", sentence: 1,
      left: "Bernard paie une", match: "somme", right: "de vingt francs à",
      start: 130, end: 135,
    },
  ],
};

export const EMPTY_SEARCH: SearchPayload = {
  total: 0,
  unknown_key: true,
  query: { kind: "concept", key: "licorne" },
  hits: [],
};

const encoder = new TextEncoder();

function byteSpan(text: string, target: string): { start: number; end: number } {
  const charStart = text.indexOf(target);
  if (charStart < 0) throw new Error(`fixture target ${target} not in text`);
  const start = encoder.encode(text.slice(0, charStart)).length;
  return { start, end: start + encoder.encode(target).length };
}

export function documentFixture(): DocumentPayload {
  const text = "Mme Lecœur paie la couturière. La pièce est tissée à Lyon.";
  const entity1 = byteSpan(text, "Mme Lecœur");
  const entity2 = byteSpan(text, "Lyon");
  const concept = byteSpan(text, "couturière");
  const sentence1End = byteSpan(text, "couturière.").end;
  const sentence2 = byteSpan(text, "La pièce est tissée à Lyon.");
  return {
    id: "presse-009",
    collection: "presse",
    title: "Chronique",
    date: "1848-06-15",
    text,
    tokens: [],
    sentences: [
      { index: 0, start: 0, end: sentence1End, first_token: 0, last_token: 5 },
      { index: 1, start: sentence2.start, end: sentence2.end, first_token: 6, last_token: 12 },
    ],
    entities: [
      {
        mention_id: "presse-009-s0-m0", sentence: 0,
        start: entity1.start, end: entity1.end, surface: "Mme Lecœur",
        etype: "PERSON", gender: "feminine", source: "title_rule",
        record_id: "presse-009-r0", iso_value: null,
      },
      {
        mention_id: "presse-009-s1-m0", sentence: 1,
        start: entity2.start, end: entity2.end, surface: "Lyon",
        etype: "LOCATION", gender: "unknown", source: "gazetteer",
        record_id: "presse-009-r1", iso_value: null,
      },
    ],
    concepts: [
      {
        sentence: 0, start: concept.start, end: concept.end,
        category: "agent", member: "couturière", cluster: "c_agent",
      },
    ],
    relations: [
      {
        relation_id: "rel-0000", sentence: 0, predicate: "payer",
        arguments: { agent: "Mme Lecœur", beneficiary: "couturière" },
      },
    ],
  };
}
