// Bootstrap: wires the pure views to the live service. One in-flight
// request per view; stale responses are dropped by sequence number.

import { ApiClient, httpFetcher, type SearchQuery } from "./api";
import {
  categoryQuery,
  entityTypeQuery,
  initialState,
  isStale,
  memberQuery,
  nextRequest,
  toConcordance,
  toDashboard,
  toDocument,
  backToConcordance,
  toggleLayer,
  type ViewState,
} from "./state";
import { renderConcordance } from "./views/concordance";
import { renderDashboard } from "./views/dashboard";
import { renderDocument } from "./views/document";

const root = document.getElementById("app") as HTMLElement;
const api = new ApiClient(httpFetcher(".."));

let state: ViewState = initialState();

function setState(next: ViewState): void {
  state = next;
}

async function showDashboard(): Promise<void> {
  setState(nextRequest(toDashboard(state)));
  const seq = state.seq;
  try {
    const stats = await api.stats();
    if (isStale(state, seq)) return;
    root.innerHTML = renderDashboard(stats);
  } catch (err) {
    root.innerHTML = `<p class="error">Service injoignable : ${String(err)}</p>`;
  }
}

async function showConcordance(query: SearchQuery): Promise<void> {
  setState(nextRequest(toConcordance(state, query)));
  const seq = state.seq;
  try {
    const payload = await api.search(query);
    if (isStale(state, seq)) return;
    root.innerHTML = renderConcordance(payload);
  } catch (err) {
    root.innerHTML = `<p class="error">Recherche impossible : ${String(err)}</p>`;
  }
}

async function showDocument(docId: string, start: number, end: number): Promise<void> {
  setState(nextRequest(toDocument(state, { docId, start, end })));
  const seq = state.seq;
  try {
    const doc = await api.document(docId);
    if (isStale(state, seq)) return;
    root.innerHTML = renderDocument(doc, state.selection, state.layers);
    document.getElementById("selection")?.scrollIntoView({ block: "center" });
  } catch (err) {
    root.innerHTML = `<p class="error">Document introuvable : ${String(err)}</p>`;
  }
}

async function redrawDocument(): Promise<void> {
  if (state.selection === null) return;
  const { docId, start, end } = state.selection;
  await showDocument(docId, start, end);
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!target) return;
  const action = target.dataset.action;
  if (action === "category") {
    void showConcordance(categoryQuery(target.dataset.category ?? ""));
  } else if (action === "entity-type") {
    void showConcordance(entityTypeQuery(target.dataset.etype ?? ""));
  } else if (action === "member") {
    void showConcordance(memberQuery(target.dataset.member ?? ""));
  } else if (action === "open-document") {
    void showDocument(
      target.dataset.doc ?? "",
      Number(target.dataset.start ?? 0),
      Number(target.dataset.end ?? 0),
    );
  } else if (action === "back-concordance") {
    const previous = backToConcordance(state);
    if (previous.view === "concordance" && previous.query) {
      void showConcordance(previous.query);
    } else {
      void showDashboard();
    }
  } else if (action === "back-dashboard") {
    void showDashboard();
  } else if (action === "toggle-layer") {
    const layer = target.dataset.layer as "entities" | "concepts" | "relations";
    setState(toggleLayer(state, layer));
    void redrawDocument();
  }
});

void showDashboard();
