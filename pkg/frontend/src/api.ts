// Typed mirror of the corpus service JSON contract (version 1).
// The client never recomputes counts or spans: every number shown in the
// UI is a payload field, and offsets stay byte offsets into the UTF-8
// encoding of the document text.

export type CollectionRow = {
  id: string;
  label: string;
  source_kind: string;
  corpus_role: string;
  documents: number;
};

export type TokenRow = {
  index: number;
  start: number;
  end: number;
  surface: string;
  word: boolean;
};

export type SentenceRow = {
  index: number;
  start: number;
  end: number;
  first_token: number;
  last_token: number;
};

export type EntityRow = {
  mention_id: string;
  sentence: number;
  start: number;
  end: number;
  surface: string;
  etype: string;
  gender: string;
  source: string;
  record_id: string | null;
  iso_value: string | null;
};

export type ConceptRow = {
  sentence: number;
  start: number;
  end: number;
  category: string;
  member: string;
  cluster: string;
};

export type RelationRow = {
  relation_id: string;
  sentence: number;
  predicate: string;
  arguments: Record<string, string>;
};

export type DocumentPayload = {
  id: string;
  collection: string;
  title: string;
  date: string | null;
  text: string;
  tokens: TokenRow[];
  sentences: SentenceRow[];
  entities: EntityRow[];
  concepts: ConceptRow[];
  relations: RelationRow[];
};

export type KwicHit = {
  doc_id: string;
  sentence: number;
  left: string;
  match: string;
  right: string;
  start: number;
  end: number;
};

export type SearchPayload = {
  total: number;
  unknown_key: boolean;
  query: Record<string, unknown>;
  hits: KwicHit[];
};

export type StatsPayload = {
  counters: Record<string, number>;
  entity_distribution: Record<string, number>;
  concept_distribution: Record<string, number>;
  representative_concepts: Record<string, [string, number][]>;
  gender_distribution: {
    entities: Record<string, Record<string, number>>;
    agent_concepts: Record<string, Record<string, number>>;
    agent_totals: Record<string, number>;
  };
};

export type NetworkPayload = {
  node: string;
  known: boolean;
  edges: { source: string; target: string; label: string; weight: number }[];
};

export type SearchQuery = {
  kind: "concept" | "entity" | "lemma" | "relation";
  key?: string;
  collection?: string;
  date_from?: string;
  date_to?: string;
  gender?: string;
  category?: string;
  window?: number;
  offset?: number;
  limit?: number;
};

export function searchPath(query: SearchQuery): string {
  const params = new URLSearchParams();
  params.set("kind", query.kind);
  for (const field of [
    "key", "collection", "date_from", "date_to", "gender", "category",
  ] as const) {
    const value = query[field];
    if (value !== undefined && value !== "") params.set(field, value);
  }
  for (const field of ["window", "offset", "limit"] as const) {
    const value = query[field];
    if (value !== undefined) params.set(field, String(value));
  }
  return `/search?${params.toString()}`;
}

export type Fetcher = (path: string) => Promise<unknown>;

export function httpFetcher(baseUrl: string): Fetcher {
  return async (path: string) => {
    const res = await fetch(baseUrl + path, { headers: { Accept: "application/json" } });
    if (!res.ok) {
      throw new Error(`HTTP ${res.status} on ${path}`);
    }
    return res.json();
  };
}

export class ApiClient {
  constructor(private fetcher: Fetcher) {}

  stats(): Promise<StatsPayload> {
    return this.fetcher("/stats") as Promise<StatsPayload>;
  }

  collections(): Promise<CollectionRow[]> {
    return this.fetcher("/collections") as Promise<CollectionRow[]>;
  }

  search(query: SearchQuery): Promise<SearchPayload> {
    return this.fetcher(searchPath(query)) as Promise<SearchPayload>;
  }

  document(docId: string): Promise<DocumentPayload> {
    return this.fetcher(`/documents/${encodeURIComponent(docId)}`) as Promise<DocumentPayload>;
  }

  network(node: string): Promise<NetworkPayload> {
    return this.fetcher(`/network/${encodeURIComponent(node)}`) as Promise<NetworkPayload>;
  }
}
