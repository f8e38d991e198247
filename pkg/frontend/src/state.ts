// View state machine. Navigation always keeps the query that produced the
// current results, so a document opened from the concordance can return to
// exactly that concordance. Responses are guarded by a sequence number:
// anything slower than the latest request is discarded.

import type { SearchQuery } from "./api";

export type Selection = { docId: string; start: number; end: number };

export type LayerToggles = { entities: boolean; concepts: boolean; relations: boolean };

export type ViewState = {
  view: "dashboard" | "concordance" | "document";
  query: SearchQuery | null;
  selection: Selection | null;
  layers: LayerToggles;
  seq: number;
};

export function initialState(): ViewState {
  return {
    view: "dashboard",
    query: null,
    selection: null,
    layers: { entities: true, concepts: true, relations: false },
    seq: 0,
  };
}

export function nextRequest(state: ViewState): ViewState {
  return { ...state, seq: state.seq + 1 };
}

export function isStale(state: ViewState, seq: number): boolean {
  return seq !== state.seq;
}

export function toDashboard(state: ViewState): ViewState {
  return { ...state, view: "dashboard", selection: null };
}

export function toConcordance(state: ViewState, query: SearchQuery): ViewState {
  return { ...state, view: "concordance", query, selection: null };
}

export function toDocument(state: ViewState, selection: Selection): ViewState {
  // the query survives untouched: it is the way back to the concordance
  return { ...state, view: "document", selection };
}

export function backToConcordance(state: ViewState): ViewState {
  if (state.query === null) return toDashboard(state);
  return { ...state, view: "concordance", selection: null };
}

export function toggleLayer(state: ViewState, layer: keyof LayerToggles): ViewState {
  return { ...state, layers: { ...state.layers, [layer]: !state.layers[layer] } };
}

// Pure click-to-query mappings, shared by the views and their tests.

export function categoryQuery(category: string): SearchQuery {
  return { kind: "concept", category };
}

export function entityTypeQuery(etype: string): SearchQuery {
  return { kind: "entity", key: etype };
}

export function memberQuery(member: string): SearchQuery {
  return { kind: "concept", key: member };
}
